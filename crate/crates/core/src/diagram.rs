//! Staircase diagrams of types: row n-a from the top, column c, middle
//! diagonal a = c shaded. Output is byte-deterministic.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::chain::{enumerate_chain_groups, Owner};
use crate::error::{Error, Result};
use crate::grid::TypeTriple;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellStyle {
    Plain,
    /// A type-size term (drawn blue).
    HighlightSize,
    /// A group-weight term (drawn grey).
    HighlightWeight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub a: u32,
    pub c: u32,
    pub style: CellStyle,
    pub annotation: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagramFormat {
    Svg,
    Ascii,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramSpec {
    pub n: u32,
    pub k: Option<u32>,
    pub cells: Vec<Cell>,
    pub caption: Option<String>,
    pub format: DiagramFormat,
}

fn signed(m: i64) -> String {
    match m {
        1 => "+".into(),
        -1 => "-".into(),
        _ if m > 0 => format!("+{m}"),
        _ => m.to_string(),
    }
}

/// Accumulates signed multiplicities per (cell, style).
struct Terms {
    n: i64,
    acc: BTreeMap<(u32, u32, CellStyle), i64>,
}

impl Terms {
    fn new(n: u32) -> Self {
        Terms {
            n: i64::from(n),
            acc: BTreeMap::new(),
        }
    }

    fn add(&mut self, a: i64, c: i64, style: CellStyle, m: i64) {
        if a < 0 || c < 0 || a + c > self.n {
            return;
        }
        *self.acc.entry((a as u32, c as u32, style)).or_default() += m;
    }

    /// Alternating column of terms (i, c) for i >= a, starting with `first`.
    fn column(&mut self, a: i64, c: i64, style: CellStyle, first: i64) {
        let mut sign = first;
        for i in a.max(0)..=self.n - c {
            if i >= a {
                self.add(i, c, style, sign);
            }
            sign = -sign;
        }
    }

    fn cells(self) -> Vec<Cell> {
        self.acc
            .into_iter()
            .map(|((a, c, style), m)| Cell {
                a,
                c,
                style,
                annotation: Some(signed(m)),
            })
            .collect()
    }
}

impl DiagramSpec {
    /// All types plain.
    pub fn types(n: u32, format: DiagramFormat) -> Self {
        DiagramSpec {
            n,
            k: None,
            cells: Vec::new(),
            caption: Some(format!("types of {{0,1,2}}^{n}")),
            format,
        }
    }

    /// Highlights the footprint of the group owned by type (a, c).
    pub fn footprint(n: u32, k: u32, a: u32, c: u32, format: DiagramFormat) -> Result<Self> {
        let owner = Owner::Type(TypeTriple::from_ac(n, i64::from(a), i64::from(c))?);
        let groups = enumerate_chain_groups(n, 2, k)?;
        let g = groups.iter().find(|g| g.owner == owner).ok_or_else(|| {
            Error::OutOfRange(format!("type {owner} owns no chain group for k={k}"))
        })?;
        let cells = g
            .footprint()
            .into_iter()
            .enumerate()
            .map(|(i, o)| {
                let t = o.as_type().expect("d=2 footprints are types");
                Cell {
                    a: t.a,
                    c: t.c,
                    style: CellStyle::HighlightSize,
                    annotation: Some(i.to_string()),
                }
            })
            .collect();
        Ok(DiagramSpec {
            n,
            k: Some(k),
            cells,
            caption: Some(format!(
                "footprint of the width-{} group at {owner}, n={n}, k={k}",
                g.width
            )),
            format,
        })
    }

    /// Terms of the key recursion for W(a, c) (lower types), including the
    /// cross-middle corrections when (a, c) is inner.
    pub fn key_recursion(n: u32, k: u32, a: u32, c: u32, format: DiagramFormat) -> Result<Self> {
        TypeTriple::from_ac(n, i64::from(a), i64::from(c))?;
        if a < c {
            return Err(Error::OutOfRange(format!("({a},{c}) is not a lower type")));
        }
        let (a, c, k) = (i64::from(a), i64::from(c), i64::from(k));
        let mut t = Terms::new(n);
        t.add(a, c, CellStyle::HighlightSize, 1);
        t.add(a + 1, c - 1, CellStyle::HighlightSize, -1);
        t.add(a + 1, c, CellStyle::HighlightWeight, -1);
        t.add(a + 1 + k, c - 1 - k, CellStyle::HighlightWeight, 1);
        t.add(a + 1 + k, c - k, CellStyle::HighlightWeight, 1);
        if a - c < k {
            t.add(a - k, c + k, CellStyle::HighlightWeight, -1);
            if a - c < k - 1 {
                t.add(a - k + 1, c + k, CellStyle::HighlightWeight, -1);
            }
        }
        Ok(DiagramSpec {
            n,
            k: Some(k as u32),
            cells: t.cells(),
            caption: Some(format!(
                "contributions to W({a},{c}) by the key recursion, n={n}, k={k}"
            )),
            format,
        })
    }

    /// Terms of W(a,c) = S(0,a,c) - S(0,a+1,c-1) + R(0,a+1+k,c-1-k) + R(0,a+1+k,c-k).
    pub fn step_one(n: u32, k: u32, a: u32, c: u32, format: DiagramFormat) -> Result<Self> {
        TypeTriple::from_ac(n, i64::from(a), i64::from(c))?;
        let (a, c, k) = (i64::from(a), i64::from(c), i64::from(k));
        let mut t = Terms::new(n);
        t.column(a, c, CellStyle::HighlightSize, 1);
        t.column(a + 1, c - 1, CellStyle::HighlightSize, -1);
        t.column(a + 1 + k, c - 1 - k, CellStyle::HighlightWeight, 1);
        t.column(a + 1 + k, c - k, CellStyle::HighlightWeight, 1);
        Ok(DiagramSpec {
            n,
            k: Some(k as u32),
            cells: t.cells(),
            caption: Some(format!(
                "unfolded contributions to W({a},{c}), n={n}, k={k}"
            )),
            format,
        })
    }

    pub fn validate(&self) -> Result<()> {
        for cell in &self.cells {
            if cell.a + cell.c > self.n {
                return Err(Error::OutOfRange(format!(
                    "cell ({},{}) outside the staircase for n={}",
                    cell.a, cell.c, self.n
                )));
            }
        }
        Ok(())
    }
}

const CELL: u32 = 28;
const MARGIN: u32 = 36;

fn fill(style: CellStyle, middle: bool) -> &'static str {
    match style {
        CellStyle::HighlightSize => "#6fa8dc",
        CellStyle::HighlightWeight => "#a6a6a6",
        CellStyle::Plain if middle => "#e3e3e3",
        CellStyle::Plain => "#ffffff",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Annotation and style per (a, c); later cells win on style, annotations join.
fn layout(spec: &DiagramSpec) -> BTreeMap<(u32, u32), (CellStyle, String)> {
    let mut out: BTreeMap<(u32, u32), (CellStyle, String)> = BTreeMap::new();
    for cell in &spec.cells {
        let slot = out
            .entry((cell.a, cell.c))
            .or_insert((CellStyle::Plain, String::new()));
        slot.0 = slot.0.max(cell.style);
        if let Some(text) = &cell.annotation {
            if !slot.1.is_empty() {
                slot.1.push(' ');
            }
            slot.1.push_str(text);
        }
    }
    out
}

fn render_svg(spec: &DiagramSpec) -> String {
    let n = spec.n;
    let cells = layout(spec);
    let side = (n + 1) * CELL;
    let width = side + 2 * MARGIN;
    let height = side + 2 * MARGIN + if spec.caption.is_some() { 20 } else { 0 };
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        s,
        r#"<g font-family="monospace" font-size="11" text-anchor="middle">"#
    );
    for a in (0..=n).rev() {
        for c in 0..=n - a {
            let x = MARGIN + c * CELL;
            let y = MARGIN + (n - a) * CELL;
            let (style, text) = cells
                .get(&(a, c))
                .cloned()
                .unwrap_or((CellStyle::Plain, String::new()));
            let _ = writeln!(
                s,
                r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{}" stroke="#000000" stroke-width="1"/>"##,
                fill(style, a == c)
            );
            if !text.is_empty() {
                let _ = writeln!(
                    s,
                    r#"<text x="{}" y="{}">{}</text>"#,
                    x + CELL / 2,
                    y + CELL / 2 + 4,
                    escape(&text)
                );
            }
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{a}</text>"#,
            MARGIN - 12,
            MARGIN + (n - a) * CELL + CELL / 2 + 4
        );
    }
    for c in 0..=n {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{c}</text>"#,
            MARGIN + c * CELL + CELL / 2,
            MARGIN + side + 14
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}">a</text>"#,
        MARGIN - 24,
        MARGIN - 10
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}">c</text>"#,
        MARGIN + side + 12,
        MARGIN + side + 14
    );
    if let Some(caption) = &spec.caption {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="start">{}</text>"#,
            MARGIN,
            MARGIN + side + 34,
            escape(caption)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}

fn render_ascii(spec: &DiagramSpec) -> String {
    let n = spec.n;
    let cells = layout(spec);
    let mut s = String::new();
    if let Some(caption) = &spec.caption {
        let _ = writeln!(s, "{caption}");
    }
    for a in (0..=n).rev() {
        let _ = write!(s, "{a:>3} |");
        for c in 0..=n - a {
            let ch = match cells.get(&(a, c)) {
                Some((style, text)) if !text.is_empty() && *style != CellStyle::Plain => {
                    text.chars().next().unwrap_or('?')
                }
                Some((CellStyle::HighlightSize, _)) => '#',
                Some((CellStyle::HighlightWeight, _)) => '%',
                _ if a == c => '=',
                _ => '.',
            };
            let _ = write!(s, " {ch}");
        }
        s.push('\n');
    }
    let _ = write!(s, "    +");
    for _ in 0..=n {
        s.push_str("--");
    }
    s.push('\n');
    let _ = write!(s, "   c ");
    for c in 0..=n {
        let _ = write!(s, "{:>2}", c % 10);
    }
    s.push('\n');
    let _ = writeln!(
        s,
        "legend: = middle layer, # or sign: size term, % or sign: weight term"
    );
    s
}

/// Renders the diagram in its own format.
pub fn render_staircase(spec: &DiagramSpec) -> Result<Vec<u8>> {
    spec.validate()?;
    Ok(match spec.format {
        DiagramFormat::Svg => render_svg(spec),
        DiagramFormat::Ascii => render_ascii(spec),
    }
    .into_bytes())
}
