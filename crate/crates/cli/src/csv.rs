//! Fixed-format CSV: a `# key=value …` echo line, a header line, then rows.
//! Numbers use 17 significant digits in scientific notation so that output
//! is byte-stable across runs and platforms.

use std::fmt::Write as _;

/// `x` with 17 significant digits; `inf`, `-inf`, `nan` for non-finite values.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone)]
pub struct CsvTable {
    params: Vec<(String, String)>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    trailer: Vec<String>,
}

impl CsvTable {
    pub fn new(header: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self {
            params: Vec::new(),
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            trailer: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn param_num(&mut self, key: &str, value: f64) -> &mut Self {
        self.param(key, fmt_num(value))
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    /// Comment line written after the rows.
    pub fn trailer(&mut self, line: impl Into<String>) {
        self.trailer.push(line.into());
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn render(&self) -> String {
        let mut out = String::from("#");
        for (k, v) in &self.params {
            let _ = write!(out, " {k}={v}");
        }
        out.push('\n');
        out.push_str(&self.header.join(","));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        for t in &self.trailer {
            let _ = writeln!(out, "# {t}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_num(-0.5), "-5.0000000000000000e-1");
        assert_eq!(fmt_num(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt_num(f64::NAN), "nan");
        let x = 0.1 + 0.2;
        assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn layout() {
        let mut t = CsvTable::new(["a", "b"]);
        t.param("model", "al").param_num("gamma", 2.0);
        t.row(vec!["1".into(), fmt_num(2.0)]);
        t.trailer("done");
        assert_eq!(
            t.render(),
            "# model=al gamma=2.0000000000000000e0\na,b\n1,2.0000000000000000e0\n# done\n"
        );
    }
}
