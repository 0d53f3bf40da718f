//! CSV tables with fixed formatting and gnuplot scripts that read them.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::evolve::TimeSeries;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    /// 17 significant digits, `nan` / `inf` spelled out.
    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) if x.is_nan() => "nan".into(),
            Cell::Num(x) if x.is_infinite() => if *x > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// Rows of cells under a header; rendered with '\n' line endings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.columns.iter().any(|c| c == name)
    }

    /// Flagged columns are written as `nan` where undefined and followed (after
    /// all value columns) by `<name>_defined`.
    pub fn from_series(ts: &TimeSeries) -> Self {
        let mut columns = vec!["t".to_string()];
        columns.extend(ts.columns.iter().map(|c| c.name.clone()));
        let flagged: Vec<_> = ts.columns.iter().filter(|c| c.defined.is_some()).collect();
        columns.extend(flagged.iter().map(|c| format!("{}_defined", c.name)));
        let mut table = Table::new(columns);
        for (i, &t) in ts.t.iter().enumerate() {
            let mut row = vec![Cell::Num(t)];
            for c in &ts.columns {
                let ok = c.defined.as_ref().is_none_or(|d| d[i]);
                row.push(Cell::Num(if ok { c.values[i] } else { f64::NAN }));
            }
            row.extend(
                flagged
                    .iter()
                    .map(|c| Cell::Bool(c.defined.as_ref().expect("flagged")[i])),
            );
            table.push(row);
        }
        table
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Solid,
    Dashed,
    Points,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub ylabel: String,
    pub curves: Vec<(String, Style)>,
}

impl Panel {
    pub fn new(ylabel: &str, curves: &[(&str, Style)]) -> Self {
        Self {
            ylabel: ylabel.into(),
            curves: curves.iter().map(|(c, s)| (c.to_string(), *s)).collect(),
        }
    }
}

/// One output image: stacked panels sharing the x column.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub name: String,
    pub panels: Vec<Panel>,
}

/// gnuplot source rendering `figures` from `csv_name`, whose header is `header`.
/// The first header column is the x axis. Every referenced column must exist.
pub fn plot_script(csv_name: &str, header: &[String], figures: &[Figure]) -> Result<String> {
    let x = header
        .first()
        .ok_or_else(|| Error::config("output.plot_script", format!("{csv_name} has no columns")))?;
    for fig in figures {
        for panel in &fig.panels {
            for (col, _) in &panel.curves {
                if !header.contains(col) {
                    return Err(Error::config(
                        "output.plot_script",
                        format!("column `{col}` is not in {csv_name}"),
                    ));
                }
            }
        }
    }
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# gnuplot script; run `gnuplot <this file>` next to {csv_name}"
    );
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile missing 'nan'");
    let _ = writeln!(s, "set key top right");
    for fig in figures {
        let rows = fig.panels.len();
        let _ = writeln!(s);
        let _ = writeln!(s, "set terminal pngcairo size 800,{} enhanced", 300 * rows);
        let _ = writeln!(s, "set output '{}.png'", fig.name);
        let _ = writeln!(s, "set multiplot layout {rows},1");
        for panel in &fig.panels {
            let _ = writeln!(s, "set xlabel '{}'", x.replace('_', "\\_"));
            let _ = writeln!(s, "set ylabel '{}'", panel.ylabel.replace('_', "\\_"));
            let curves: Vec<String> = panel
                .curves
                .iter()
                .map(|(col, style)| {
                    let with = match style {
                        Style::Solid => "lines dt 1",
                        Style::Dashed => "lines dt 2",
                        Style::Points => "points pt 7 ps 0.5",
                    };
                    format!(
                        "'{csv_name}' using (column('{x}')):(column('{col}')) with {with} title '{}'",
                        col.replace('_', "\\_")
                    )
                })
                .collect();
            let _ = writeln!(s, "plot {}", curves.join(", \\\n     "));
        }
        let _ = writeln!(s, "unset multiplot");
        let _ = writeln!(s, "set output");
    }
    Ok(s)
}

/// Reads the header of an existing CSV and writes `<stem>.gp` beside it, plotting
/// each column in its own panel against the first column.
pub fn emit_plot_script(csv_path: &Path, columns: &[&str]) -> Result<PathBuf> {
    let mut reader = csv::Reader::from_path(csv_path).map_err(|e| {
        Error::config(
            "output.plot_script",
            format!("cannot read {}: {e}", csv_path.display()),
        )
    })?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::config("output.plot_script", e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let name = csv_path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| Error::config("output.plot_script", "csv path has no file name"))?;
    let stem = csv_path
        .file_stem()
        .and_then(|n| n.to_str())
        .unwrap_or(name);
    let figure = Figure {
        name: stem.to_string(),
        panels: columns
            .iter()
            .map(|c| Panel::new(c, &[(c, Style::Solid)]))
            .collect(),
    };
    let script = plot_script(name, &header, &[figure])?;
    let out = csv_path.with_extension("gp");
    std::fs::write(&out, script)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_render_fixed_width() {
        assert_eq!(Cell::Num(0.75).render(), "7.5000000000000000e-1");
        assert_eq!(Cell::Num(f64::NAN).render(), "nan");
        assert_eq!(Cell::Num(-0.0).render(), "-0.0000000000000000e0");
        assert_eq!(Cell::Bool(false).render(), "false");
        // 17 significant digits round-trip every double
        let x = 0.1 + 0.2;
        assert_eq!(Cell::Num(x).render().parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_uses_newlines() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec![Cell::Int(1), Cell::Num(2.0)]);
        assert_eq!(t.to_csv().unwrap(), "a,b\n1,2.0000000000000000e0\n");
    }

    #[test]
    fn plot_rejects_missing_column() {
        let header = vec!["t".to_string(), "xi".to_string()];
        let fig = |c: &str| Figure {
            name: "f".into(),
            panels: vec![Panel::new("y", &[(c, Style::Dashed)])],
        };
        assert!(plot_script("x.csv", &header, &[fig("xi")])
            .unwrap()
            .contains("dt 2"));
        assert!(matches!(
            plot_script("x.csv", &header, &[fig("nope")]),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn emit_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("run.csv");
        std::fs::write(&csv, "t,a\n0,1\n").unwrap();
        let gp = emit_plot_script(&csv, &["a"]).unwrap();
        assert!(std::fs::read_to_string(gp).unwrap().contains("'run.csv'"));
        assert!(emit_plot_script(&csv, &["b"]).is_err());
    }
}
