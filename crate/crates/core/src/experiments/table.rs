use std::fmt::Write;

/// A numeric result table with `#` comment header lines.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub title: String,
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// False if any bound in the table hit the refinement cap.
    pub converged: bool,
    pub warnings: Vec<String>,
}

impl Table {
    pub fn new(title: &str, columns: &[&str]) -> Self {
        Self {
            title: title.to_string(),
            comments: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            converged: true,
            warnings: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl std::fmt::Display) {
        self.comments.push(format!("param {key} = {value}"));
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// CSV with LF line endings. Numbers use the shortest representation that
    /// parses back to the same value.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# qspeed {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "# study: {}", self.title);
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        for w in &self.warnings {
            let _ = writeln!(out, "# warning: {w}");
        }
        let _ = writeln!(out, "# converged: {}", self.converged);
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}
