use std::io::Write;

use anyhow::{bail, Context, Result};
use obi_core::constructions::ConstructionFamily;
use obi_core::regime::validate_two_step;
use obi_core::solver::{beta_b_two_step, SolveOptions};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::range::Span;
use crate::Format;

#[cfg(test)]
pub const CSV_HEADER: [&str; 10] = ["n", "a", "regime", "beta", "optimal", "predicted", "lower", "upper", "nodes", "ms"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub n: usize,
    pub a: usize,
    pub regime: String,
    pub beta: u32,
    pub optimal: bool,
    pub predicted: Option<u32>,
    pub lower: u32,
    pub upper: u32,
    pub nodes: u64,
    pub ms: f64,
}

/// Which instances a sweep visits.
#[derive(Debug, Clone)]
pub enum Grid {
    Pairs { n: Span, a: Span },
    Family { family: ConstructionFamily, a: Option<Span>, q: Option<Span>, k: Option<Span>, s: Span, n: Option<Span> },
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub grid: Grid,
    pub opts: SolveOptions,
}

fn need(span: Option<Span>, name: &str, family: ConstructionFamily) -> Result<Span> {
    span.with_context(|| format!("family {} needs --{name}", family.label()))
}

impl Grid {
    /// Legal `(n, a)` pairs, in order, without duplicates.
    pub fn instances(&self) -> Result<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        match *self {
            Grid::Pairs { n, a } => {
                for n in n.iter() {
                    for a in a.iter() {
                        if validate_two_step(n, a).is_ok() {
                            out.push((n, a));
                        }
                    }
                }
            }
            Grid::Family { family, a, q, k, s, n } => match family {
                ConstructionFamily::SingleVertexDiam => {
                    bail!("family single has no parameter grid; use --n and --a")
                }
                ConstructionFamily::ThreeAMinus1 => {
                    out.extend(need(a, "a", family)?.iter().map(|a| (3 * a - 1, a)));
                }
                ConstructionFamily::A3 => out.extend(need(n, "n", family)?.iter().map(|n| (n, 3))),
                ConstructionFamily::KAMinus1 => {
                    for a in need(a, "a", family)?.iter() {
                        for k in need(k, "k", family)?.iter() {
                            for s in s.iter() {
                                out.push((k * a.saturating_sub(1) + s, a));
                            }
                        }
                    }
                }
                ConstructionFamily::Qa | ConstructionFamily::QaPlus => {
                    for q in need(q, "q", family)?.iter() {
                        for k in need(k, "k", family)?.iter() {
                            for s in s.iter() {
                                let a = k * q + 1 + s;
                                let n = if family == ConstructionFamily::Qa { q * a } else { q * a + a - 1 };
                                out.push((n, a));
                            }
                        }
                    }
                }
            },
        }
        out.retain(|&(n, a)| validate_two_step(n, a).is_ok());
        let mut seen = std::collections::HashSet::new();
        out.retain(|p| seen.insert(*p));
        if out.is_empty() {
            bail!("the sweep range contains no legal (n, a)");
        }
        Ok(out)
    }
}

pub fn solve_row(n: usize, a: usize, opts: &SolveOptions) -> Result<Row> {
    let (res, rep) = beta_b_two_step(n, a, opts)?;
    let rep = rep.context("two-step instance without a bound report")?;
    Ok(Row {
        n,
        a,
        regime: rep.regime.family.label().to_string(),
        beta: res.beta,
        optimal: res.optimal,
        predicted: rep.exact.as_ref().map(|b| b.value),
        lower: rep.max_lower(),
        upper: rep.min_upper(),
        nodes: res.nodes,
        ms: (res.elapsed_ms * 1e3).round() / 1e3,
    })
}

pub fn run(cfg: &SweepConfig) -> Result<Vec<Row>> {
    let pairs = cfg.grid.instances()?;
    let opts = SolveOptions { threads: 1, ..cfg.opts.clone() };
    pairs.par_iter().map(|&(n, a)| solve_row(n, a, &opts)).collect()
}

pub fn write_rows<W: Write>(rows: &[Row], format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => {
            // The header comes from Row's field names.
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            for r in rows {
                serde_json::to_writer(&mut out, r)?;
                writeln!(out)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
pub fn read_csv(path: &std::path::Path) -> Result<Vec<Row>> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(String::from).collect();
    if header != CSV_HEADER {
        bail!("unexpected CSV header {header:?}");
    }
    r.deserialize().map(|row| row.map_err(Into::into)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(lo: usize, hi: usize) -> Span {
        Span { lo, hi }
    }

    #[test]
    fn pair_grid_skips_illegal() {
        let g = Grid::Pairs { n: span(8, 20), a: span(4, 4) };
        assert_eq!(g.instances().unwrap().len(), 13);
        let g = Grid::Pairs { n: span(5, 5), a: span(4, 4) };
        assert!(g.instances().is_err());
    }

    #[test]
    fn qa_family_grid() {
        let g = Grid::Family {
            family: ConstructionFamily::Qa,
            a: None,
            q: Some(span(3, 3)),
            k: Some(span(2, 3)),
            s: span(0, 0),
            n: None,
        };
        assert_eq!(g.instances().unwrap(), vec![(21, 7), (30, 10)]);
    }

    #[test]
    fn csv_round_trip() {
        let rows = run(&SweepConfig {
            grid: Grid::Pairs { n: span(8, 12), a: span(4, 5) },
            opts: SolveOptions::default(),
        })
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        write_rows(&rows, Format::Csv, std::fs::File::create(&path).unwrap()).unwrap();
        assert_eq!(read_csv(&path).unwrap(), rows);
    }
}
