//! Plot-ready CSV: a `# config-hash` comment, a header row, then rows of
//! numbers in scientific notation with 17 significant digits.

use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(u64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Real(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn push_reals(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&x| Cell::Real(x)).collect());
    }

    pub fn render(&self, config_hash: &str) -> String {
        let mut out = format!("# config-hash: {config_hash}\n{}\n", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path, config_hash: &str) -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.render(config_hash).as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let mut t = Table::new(&["t", "n"]);
        t.push(vec![Cell::Real(0.1), Cell::Int(3)]);
        t.push_reals(&[-2.5, 1e-300]);
        let s = t.render("abc");
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# config-hash: abc");
        assert_eq!(lines[1], "t,n");
        assert_eq!(lines[2], "1.0000000000000001e-1,3");
        assert_eq!(lines[3], "-2.5000000000000000e0,1.0000000000000000e-300");
        // 17 significant digits recover the value exactly
        let back: f64 = lines[2].split(',').next().unwrap().parse().unwrap();
        assert_eq!(back, 0.1);
    }
}
