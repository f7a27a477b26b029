//! Plain-text reports: free text and aligned tables, followed by
//! `KEY<TAB>VALUE` summary lines.
//!
//! Tabs appear only in summary lines, so `summary_lines` can be recovered
//! from rendered output by filtering on `'\t'`.

use std::fmt::Write;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    body: String,
    summary: Vec<(String, String)>,
}

impl Report {
    pub fn new(title: &str) -> Self {
        let mut r = Report::default();
        r.line(&format!("== {title} =="));
        r
    }

    pub fn line(&mut self, text: &str) {
        debug_assert!(!text.contains('\t'));
        self.body.push_str(text);
        self.body.push('\n');
    }

    pub fn blank(&mut self) {
        self.body.push('\n');
    }

    pub fn table<S: AsRef<str>>(&mut self, headers: &[S], rows: &[Vec<String>]) {
        let cols = headers.len();
        let mut widths: Vec<usize> = headers.iter().map(|h| h.as_ref().chars().count()).collect();
        for row in rows {
            debug_assert_eq!(row.len(), cols);
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let fmt_row = |cells: Vec<&str>| {
            let mut s = String::new();
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i + 1 == cols {
                    s.push_str(cell);
                } else {
                    let _ = write!(s, "{cell:<w$}  ");
                }
            }
            s.trim_end().to_string()
        };
        self.line(&fmt_row(headers.iter().map(AsRef::as_ref).collect()));
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        self.line(&fmt_row(rule.iter().map(String::as_str).collect()));
        for row in rows {
            self.line(&fmt_row(row.iter().map(String::as_str).collect()));
        }
    }

    pub fn kv(&mut self, key: impl Into<String>, value: impl ToString) {
        let key = key.into();
        debug_assert!(!key.contains('\t') && !key.contains('\n'));
        self.summary.push((key, value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.summary
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn summary(&self) -> &[(String, String)] {
        &self.summary
    }

    pub fn summary_lines(&self) -> String {
        self.summary
            .iter()
            .map(|(k, v)| format!("{k}\t{v}\n"))
            .collect()
    }

    pub fn render(&self) -> String {
        format!("{}\n{}", self.body, self.summary_lines())
    }

    /// Append another report's body and summary.
    pub fn extend(&mut self, other: Report) {
        self.body.push_str(&other.body);
        self.summary.extend(other.summary);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_table_and_summary() {
        let mut r = Report::new("demo");
        r.table(
            &["class", "x0"],
            &[
                vec!["(quat 7 x1)".into(), "1/2".into()],
                vec!["c".into(), "0".into()],
            ],
        );
        r.kv("EVAL[c0,x0]", "1/2");
        let text = r.render();
        assert_eq!(
            text,
            "== demo ==\nclass        x0\n-----------  ---\n(quat 7 x1)  1/2\nc            0\n\nEVAL[c0,x0]\t1/2\n"
        );
        assert_eq!(r.get("EVAL[c0,x0]"), Some("1/2"));
        let summary: Vec<&str> = text.lines().filter(|l| l.contains('\t')).collect();
        assert_eq!(summary, ["EVAL[c0,x0]\t1/2"]);
    }
}
