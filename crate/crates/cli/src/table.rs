//! Minimal aligned-text table rendering.

use schcat::schurcat::SchMorphism;

pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: Vec<&str>) -> Self {
        Table {
            headers: headers.into_iter().map(String::from).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let cols = self
            .rows
            .iter()
            .map(|r| r.len())
            .chain([self.headers.len()])
            .max()
            .unwrap_or(0);
        let mut widths = vec![0usize; cols];
        let measure = |widths: &mut Vec<usize>, cells: &[String]| {
            for (i, c) in cells.iter().enumerate() {
                widths[i] = widths[i].max(c.len());
            }
        };
        if !self.headers.is_empty() {
            measure(&mut widths, &self.headers);
        }
        for r in &self.rows {
            measure(&mut widths, r);
        }
        let fmt_row = |cells: &[String], widths: &[usize]| -> String {
            let mut out = String::new();
            for (i, c) in cells.iter().enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                out.push_str(c);
                if i + 1 < cells.len() {
                    for _ in c.len()..widths[i] {
                        out.push(' ');
                    }
                }
            }
            out
        };
        let mut lines = Vec::new();
        if !self.headers.is_empty() {
            lines.push(fmt_row(&self.headers, &widths));
        }
        for r in &self.rows {
            lines.push(fmt_row(r, &widths));
        }
        lines.join("\n")
    }
}

/// Compact text for a matrix given as rows: `[[1,0],[0,1]]`.
pub fn entries_text<T: std::fmt::Display>(rows: &[Vec<T>]) -> String {
    let inner: Vec<String> = rows
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|e| e.to_string()).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", inner.join(","))
}

/// Text for a formal sum, one term per line.
pub fn morphism_text(x: &SchMorphism) -> String {
    let mut out = format!(
        "SchMorphism {} -> {} over {}",
        x.source(),
        x.target(),
        x.ring()
    );
    if x.is_zero() {
        out.push_str("\n  0");
        return out;
    }
    for (g, c) in x.terms() {
        let rows = g.source().support_size();
        let cols = g.target().support_size();
        let matrix: Vec<Vec<u64>> = (0..rows)
            .map(|i| (0..cols).map(|j| g.entry(i, j)).collect())
            .collect();
        out.push_str(&format!("\n  {} * {}", c, entries_text(&matrix)));
    }
    out
}
