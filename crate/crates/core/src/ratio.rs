//! Exact nonnegative big rationals.
//!
//! Error parameters, language weights, and thresholds are arbitrary
//! nonnegative rationals; all comparisons against dyadic probabilities go
//! through cross multiplication so no precision is ever lost.

use alloc::string::String;
use alloc::string::ToString;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Sub};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::dyadic::Dyadic;

/// A nonnegative rational in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ratio {
    num: BigUint,
    den: BigUint,
}

impl Ratio {
    pub fn new(num: BigUint, den: BigUint) -> Ratio {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        Ratio {
            num: &num / &g,
            den: &den / &g,
        }
    }

    pub fn from_u64s(num: u64, den: u64) -> Ratio {
        Ratio::new(BigUint::from(num), BigUint::from(den))
    }

    pub fn from_u64(n: u64) -> Ratio {
        Ratio {
            num: BigUint::from(n),
            den: BigUint::one(),
        }
    }

    pub fn zero() -> Ratio {
        Ratio::from_u64(0)
    }

    pub fn one() -> Ratio {
        Ratio::from_u64(1)
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn denominator(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn pow(&self, k: u32) -> Ratio {
        Ratio {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    /// `1 − self`; panics above one.
    pub fn complement(&self) -> Ratio {
        assert!(self.num <= self.den, "complement of a value above one");
        Ratio::new(&self.den - &self.num, self.den.clone())
    }

    pub fn from_dyadic(d: &Dyadic) -> Ratio {
        Ratio::new(d.numerator().clone(), BigUint::one() << d.exponent())
    }

    /// Exact value if the denominator is a power of two.
    pub fn to_dyadic(&self) -> Option<Dyadic> {
        if self.den.count_ones() != 1 {
            return None;
        }
        let exp = self.den.trailing_zeros().unwrap_or(0) as u32;
        Some(Dyadic::new(self.num.clone(), exp))
    }

    pub fn cmp_dyadic(&self, d: &Dyadic) -> Ordering {
        // num/den vs dn/2^e  ⇔  num·2^e vs dn·den
        let lhs = &self.num << d.exponent();
        let rhs = d.numerator() * &self.den;
        lhs.cmp(&rhs)
    }

    /// Parses `"a/b"` or `"a"`.
    pub fn parse(s: &str) -> Option<Ratio> {
        let parse_uint = |t: &str| -> Option<BigUint> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let mut v = BigUint::zero();
            for b in t.bytes() {
                v = v * 10u8 + (b - b'0');
            }
            Some(v)
        };
        match s.split_once('/') {
            Some((a, b)) => {
                let den = parse_uint(b)?;
                if den.is_zero() {
                    return None;
                }
                Some(Ratio::new(parse_uint(a)?, den))
            }
            None => Some(Ratio {
                num: parse_uint(s)?,
                den: BigUint::one(),
            }),
        }
    }
}

impl Add for &Ratio {
    type Output = Ratio;
    fn add(self, rhs: &Ratio) -> Ratio {
        Ratio::new(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &Ratio {
    type Output = Ratio;
    fn sub(self, rhs: &Ratio) -> Ratio {
        let l = &self.num * &rhs.den;
        let r = &rhs.num * &self.den;
        assert!(l >= r, "ratio subtraction would go negative");
        Ratio::new(l - r, &self.den * &rhs.den)
    }
}

impl Mul for &Ratio {
    type Output = Ratio;
    fn mul(self, rhs: &Ratio) -> Ratio {
        Ratio::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &Ratio {
    type Output = Ratio;
    fn div(self, rhs: &Ratio) -> Ratio {
        assert!(!rhs.is_zero(), "division by zero ratio");
        Ratio::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Exact binomial upper tail `Pr[Bin(m, p) ≥ j]` for rational `p`.
pub fn binomial_tail(m: u32, j: u32, p: &Ratio) -> Ratio {
    if j > m {
        return Ratio::zero();
    }
    let q_num = &p.den - &p.num; // may be zero
    assert!(p.num <= p.den, "binomial parameter above one");
    let mut total = BigUint::zero();
    for i in j..=m {
        let c = binomial_coeff(m, i);
        total += c * p.num.pow(i) * q_num.pow(m - i);
    }
    Ratio::new(total, p.den.pow(m))
}

/// Exact binomial upper tail for a dyadic success probability; the result is
/// again dyadic.
pub fn binomial_tail_dyadic(m: u32, j: u32, q: &Dyadic) -> Dyadic {
    if j > m {
        return Dyadic::zero();
    }
    let one = BigUint::one() << q.exponent();
    assert!(*q.numerator() <= one, "binomial parameter above one");
    let fail = &one - q.numerator();
    let mut total = BigUint::zero();
    for i in j..=m {
        let c = binomial_coeff(m, i);
        total += c * q.numerator().pow(i) * fail.pow(m - i);
    }
    Dyadic::new(total, q.exponent() * m)
}

pub fn binomial_coeff(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Integer `q`-th root: largest `r` with `r^q ≤ v`.
pub fn integer_root(v: &BigUint, q: u32) -> BigUint {
    assert!(q >= 1);
    if q == 1 || v.is_zero() || v.is_one() {
        return v.clone();
    }
    let bits = v.bits();
    let mut hi = BigUint::one() << (bits / q as u64 + 1);
    let mut lo = BigUint::zero();
    // Binary search on r^q ≤ v.
    while &lo + 1u8 < hi {
        let mid: BigUint = (&lo + &hi) >> 1;
        if mid.pow(q) <= *v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Renders a ratio as `"a/b"`.
pub fn ratio_string(r: &Ratio) -> String {
    r.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: u64, b: u64) -> Ratio {
        Ratio::from_u64s(a, b)
    }

    #[test]
    fn reduction_and_ordering() {
        assert_eq!(r(2, 4), r(1, 2));
        assert!(r(1, 3) < r(1, 2));
        assert_eq!(&r(1, 3) + &r(1, 6), r(1, 2));
        assert_eq!(&r(3, 4) - &r(1, 2), r(1, 4));
        assert_eq!(&r(2, 3) * &r(3, 4), r(1, 2));
        assert_eq!(&r(1, 2) / &r(1, 4), r(2, 1));
    }

    #[test]
    fn dyadic_interop() {
        let d = Dyadic::new(BigUint::from(3u8), 4); // 3/16
        assert_eq!(Ratio::from_dyadic(&d), r(3, 16));
        assert_eq!(r(3, 16).to_dyadic(), Some(d.clone()));
        assert_eq!(r(1, 3).to_dyadic(), None);
        assert_eq!(r(1, 5).cmp_dyadic(&d), Ordering::Greater);
    }

    #[test]
    fn binomial_tails() {
        // Pr[Bin(3, 1/2) ≥ 2] = 4/8
        assert_eq!(binomial_tail(3, 2, &r(1, 2)), r(1, 2));
        // Pr[Bin(3, 1/4) ≥ 2] = 10/64
        assert_eq!(binomial_tail(3, 2, &r(1, 4)), r(5, 32));
        let q = Dyadic::new(BigUint::from(1u8), 2);
        assert_eq!(
            binomial_tail_dyadic(3, 2, &q),
            Dyadic::new(BigUint::from(10u8), 6)
        );
        assert_eq!(binomial_tail(3, 0, &r(1, 4)), Ratio::one());
    }

    #[test]
    fn parsing() {
        assert_eq!(Ratio::parse("7/8"), Some(r(7, 8)));
        assert_eq!(Ratio::parse("3"), Some(r(3, 1)));
        assert_eq!(Ratio::parse("1/0"), None);
        assert_eq!(Ratio::parse("x/2"), None);
    }

    #[test]
    fn roots() {
        assert_eq!(integer_root(&BigUint::from(27u8), 3), BigUint::from(3u8));
        assert_eq!(integer_root(&BigUint::from(26u8), 3), BigUint::from(2u8));
        assert_eq!(integer_root(&BigUint::from(1u8), 5), BigUint::from(1u8));
    }
}
