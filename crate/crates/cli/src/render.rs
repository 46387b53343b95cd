//! Space-time diagram rendering: plain text and static SVG.
//!
//! Output is deterministic byte for byte for identical inputs: no
//! timestamps, no randomized ids, attributes in fixed order.

use paca_core::automaton::{Paca, SpaceTimeDiagram};

/// Text rendering: one row per line, a `*` after each accepting cell, and a
/// `>` marker in front of the first all-accepting row.
pub fn render_text(aut: &Paca, diagram: &SpaceTimeDiagram) -> String {
    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut width = 1;
    for row in &diagram.rows {
        let mut line = Vec::new();
        for cell in row.cells() {
            let marker = if aut.accepting.accepts(cell) { "*" } else { "" };
            let text = format!("{cell}{marker}");
            width = width.max(text.len());
            line.push(text);
        }
        cells.push(line);
    }
    let mut out = String::new();
    for (t, line) in cells.iter().enumerate() {
        let marker = if diagram.accept_step == Some(t as u32) {
            '>'
        } else {
            ' '
        };
        out.push(marker);
        out.push_str(&format!("{t:>4} "));
        for cell in line {
            out.push_str(&format!("{cell:>width$} "));
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    }
    out
}

/// SVG rendering: a grid of labeled cells; accepting cells filled, the first
/// all-accepting row outlined.
pub fn render_svg(aut: &Paca, diagram: &SpaceTimeDiagram) -> String {
    const CELL: u32 = 34;
    const PAD: u32 = 6;
    let cols = diagram.rows.first().map(|r| r.len()).unwrap_or(0) as u32;
    let rows = diagram.rows.len() as u32;
    let width = cols * CELL + 2 * PAD;
    let height = rows * CELL + 2 * PAD;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    out.push_str("<style>text{font-family:monospace;font-size:10px;text-anchor:middle;dominant-baseline:central}</style>\n");
    for (t, row) in diagram.rows.iter().enumerate() {
        for (i, cell) in row.cells().iter().enumerate() {
            let x = PAD + i as u32 * CELL;
            let y = PAD + t as u32 * CELL;
            let fill = if aut.accepting.accepts(cell) {
                "#9fd49f"
            } else {
                "#f0f0f0"
            };
            out.push_str(&format!(
                "<rect x=\"{x}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{fill}\" stroke=\"#555\"/>\n"
            ));
            let label = truncate(&cell.to_string(), 6);
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\">{}</text>\n",
                x + CELL / 2,
                y + CELL / 2,
                escape(&label)
            ));
        }
        if diagram.accept_step == Some(t as u32) {
            let y = PAD + t as u32 * CELL;
            out.push_str(&format!(
                "<rect x=\"{PAD}\" y=\"{y}\" width=\"{}\" height=\"{CELL}\" fill=\"none\" stroke=\"#c03\" stroke-width=\"2\"/>\n",
                cols * CELL
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

fn truncate(s: &str, max: usize) -> String {
    if s.chars().count() <= max {
        s.to_string()
    } else {
        let mut out: String = s.chars().take(max - 1).collect();
        out.push('…');
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
