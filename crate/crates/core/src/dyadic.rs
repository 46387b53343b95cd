//! Exact dyadic rationals.
//!
//! Every acceptance probability of a coin-driven automaton is an event count
//! over finitely many fair bits, so its denominator divides a power of two.
//! [`Dyadic`] keeps `numerator / 2^exponent` in canonical form (odd or zero
//! numerator) and is the value type of every probability in this crate — no
//! floating point anywhere.

use alloc::string::String;
use alloc::string::ToString;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Sub};

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// A nonnegative rational with power-of-two denominator, canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Dyadic {
    num: BigUint,
    exp: u32,
}

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic {
            num: BigUint::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Dyadic {
        Dyadic {
            num: BigUint::one(),
            exp: 0,
        }
    }

    pub fn half() -> Dyadic {
        Dyadic::new(BigUint::one(), 1)
    }

    /// `num / 2^exp`, canonicalized.
    pub fn new(num: BigUint, exp: u32) -> Dyadic {
        let mut d = Dyadic { num, exp };
        d.canonicalize();
        d
    }

    pub fn from_u64(n: u64) -> Dyadic {
        Dyadic {
            num: BigUint::from(n),
            exp: 0,
        }
    }

    /// `count / 2^bits` — the probability of `count` outcomes among `2^bits`
    /// equally likely coin assignments.
    pub fn from_count(count: BigUint, bits: u32) -> Dyadic {
        Dyadic::new(count, bits)
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0) as u32;
        let shift = tz.min(self.exp);
        if shift > 0 {
            self.num >>= shift;
            self.exp -= shift;
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0 && self.num.is_one()
    }

    /// `1 − self`; panics if `self > 1`.
    pub fn complement(&self) -> Dyadic {
        let one = BigUint::one() << self.exp;
        assert!(self.num <= one, "complement of a value above one");
        Dyadic::new(one - &self.num, self.exp)
    }

    pub fn pow(&self, k: u32) -> Dyadic {
        let mut acc = Dyadic::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Decimal digits of the value, for display as a labeled approximation.
    /// Exact long division; no floats.
    pub fn decimal_approx(&self, digits: usize) -> String {
        let den = BigUint::one() << self.exp;
        let int = &self.num / &den;
        let mut rem = &self.num % &den;
        let mut s = int.to_string();
        if rem.is_zero() {
            return s;
        }
        s.push('.');
        let ten = BigUint::from(10u8);
        for _ in 0..digits {
            rem *= &ten;
            let digit = &rem / &den;
            s.push_str(&digit.to_string());
            rem %= &den;
            if rem.is_zero() {
                return s;
            }
        }
        s.push('…');
        s
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let exp = self.exp.max(rhs.exp);
        let a = &self.num << (exp - self.exp);
        let b = &rhs.num << (exp - rhs.exp);
        Dyadic::new(a + b, exp)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let exp = self.exp.max(rhs.exp);
        let a = &self.num << (exp - self.exp);
        let b = &rhs.num << (exp - rhs.exp);
        assert!(a >= b, "dyadic subtraction would go negative");
        Dyadic::new(a - b, exp)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp);
        let b = &other.num << (exp - other.exp);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(num: u64, exp: u32) -> Dyadic {
        Dyadic::new(BigUint::from(num), exp)
    }

    #[test]
    fn canonical_form() {
        assert_eq!(d(4, 3), d(1, 1));
        assert_eq!(d(0, 7), Dyadic::zero());
        assert_eq!(d(6, 1), d(3, 0));
        assert_eq!(d(3, 4).exponent(), 4);
    }

    #[test]
    fn arithmetic() {
        let q = d(1, 2); // 1/4
        assert_eq!(&q + &q, Dyadic::half());
        assert_eq!(&Dyadic::one() - &q, d(3, 2));
        assert_eq!(&q * &Dyadic::half(), d(1, 3));
        assert_eq!(q.complement(), d(3, 2));
        assert_eq!(d(3, 2).pow(2), d(9, 4));
    }

    #[test]
    fn ordering() {
        assert!(d(1, 2) < Dyadic::half());
        assert!(d(3, 2) > Dyadic::half());
        assert_eq!(d(2, 1), Dyadic::one());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(d(1, 2).decimal_approx(10), "0.25");
        assert_eq!(d(3, 4).decimal_approx(10), "0.1875");
        assert_eq!(Dyadic::one().decimal_approx(4), "1");
    }
}
