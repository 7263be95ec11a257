//! Serializable reports and their JSON, CSV and text renderings.

use num_complex::Complex64;
use serde::Serialize;

use crate::config::{Algebra, Format};

/// Rounds to 15 significant digits; `-0.0` becomes `0.0`.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Cx {
            re: round15(z.re),
            im: round15(z.im),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LabelRecord {
    pub name: String,
    pub lambda: Vec<i64>,
    pub beta: Vec<i64>,
    pub t_phase: String,
}

#[derive(Debug, Serialize)]
pub struct CountSummary {
    pub dominant_weights: usize,
    pub root_quotient: usize,
    pub weight_over_root: usize,
    pub raw_labels: usize,
    pub classes: usize,
    pub formula: usize,
}

#[derive(Debug, Serialize)]
pub struct ModularDataReport {
    pub algebra: Algebra,
    pub level: i64,
    pub central_charge: String,
    pub vacuum: usize,
    pub labels: Vec<LabelRecord>,
    pub s_matrix: Vec<Vec<Cx>>,
    pub counts: CountSummary,
    pub unitarity_defect: f64,
    pub st_cubed_defect: f64,
}

#[derive(Debug, Serialize)]
pub struct BranchingReport {
    pub offset: String,
    pub coeffs: Vec<i64>,
    pub depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ResidualItem {
    pub item: String,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<Algebra>,
    pub tolerance: f64,
    pub max_residual: f64,
    pub pass: bool,
    pub items: Vec<ResidualItem>,
}

impl VerifyReport {
    pub fn new(check: &str, algebra: Option<Algebra>, tolerance: f64, raw: Vec<(String, f64, Option<f64>)>) -> Self {
        let items: Vec<ResidualItem> = raw
            .into_iter()
            .map(|(item, r, tail)| ResidualItem {
                item,
                residual: round15(r),
                tail_bound: tail.map(round15),
                pass: r <= tolerance,
            })
            .collect();
        let max_residual = items.iter().map(|i| i.residual).fold(0.0, f64::max);
        VerifyReport {
            check: check.into(),
            algebra,
            tolerance,
            max_residual,
            pass: items.iter().all(|i| i.pass),
            items,
        }
    }
}

pub enum Report {
    ModularData(ModularDataReport),
    Branching(BranchingReport),
    Verify(VerifyReport),
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_rows(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Report::ModularData(r), Format::Json) => json(r),
            (Report::Branching(r), Format::Json) => json(r),
            (Report::Verify(r), Format::Json) => json(r),
            (Report::ModularData(r), Format::Csv) => {
                let n = r.labels.len();
                let mut header = vec!["label".to_string(), "t_phase".to_string()];
                for j in 0..n {
                    header.push(format!("s{j}_re"));
                    header.push(format!("s{j}_im"));
                }
                let rows: Vec<Vec<String>> = r
                    .labels
                    .iter()
                    .zip(&r.s_matrix)
                    .map(|(l, row)| {
                        let mut v = vec![l.name.clone(), l.t_phase.clone()];
                        for z in row {
                            v.push(z.re.to_string());
                            v.push(z.im.to_string());
                        }
                        v
                    })
                    .collect();
                csv_rows(&header, &rows)
            }
            (Report::Branching(r), Format::Csv) => {
                let rows: Vec<Vec<String>> = r
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, c)| vec![n.to_string(), c.to_string()])
                    .collect();
                csv_rows(&[format!("power_above_{}", r.offset), "coefficient".into()], &rows)
            }
            (Report::Verify(r), Format::Csv) => {
                let rows: Vec<Vec<String>> = r
                    .items
                    .iter()
                    .map(|i| {
                        vec![
                            i.item.clone(),
                            i.residual.to_string(),
                            i.tail_bound.map(|t| t.to_string()).unwrap_or_default(),
                            r.tolerance.to_string(),
                            i.pass.to_string(),
                        ]
                    })
                    .collect();
                let header = ["item", "residual", "tail_bound", "tolerance", "pass"].map(String::from);
                csv_rows(&header, &rows)
            }
            (Report::ModularData(r), Format::Text) => text_modular(r),
            (Report::Branching(r), Format::Text) => {
                let mut s = format!("offset {}  depth {}\n", r.offset, r.depth);
                if let Some(w) = &r.warning {
                    s += &format!("warning: {w}\n");
                }
                s += &format!(
                    "coefficients: {}\n",
                    r.coeffs.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
                );
                s
            }
            (Report::Verify(r), Format::Text) => {
                let mut s = format!("check {}  tolerance {:e}\n", r.check, r.tolerance);
                for i in &r.items {
                    let tail = i.tail_bound.map(|t| format!("  tail {t:.1e}")).unwrap_or_default();
                    let mark = if i.pass { "ok" } else { "FAIL" };
                    s += &format!("  {:<24} {:.3e}{tail}  {mark}\n", i.item, i.residual);
                }
                s += &format!("{}: max residual {:.3e}\n", if r.pass { "PASS" } else { "FAIL" }, r.max_residual);
                s
            }
        }
    }
}

fn text_modular(r: &ModularDataReport) -> String {
    let mut s = format!(
        "{}{} level {}: {} modules, central charge {}\n",
        r.algebra.series, r.algebra.rank, r.level, r.labels.len(), r.central_charge
    );
    s += &format!(
        "count: {} weights x {} / {} = {} (found {})\n",
        r.counts.dominant_weights, r.counts.root_quotient, r.counts.weight_over_root, r.counts.formula, r.counts.classes
    );
    for (i, l) in r.labels.iter().enumerate() {
        s += &format!("  [{i}] {:<16} T {}\n", l.name, l.t_phase);
    }
    s += "S:\n";
    for row in &r.s_matrix {
        let cells: Vec<String> = row.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
        s += &format!("  {}\n", cells.join("  "));
    }
    s
}
