use std::collections::BTreeMap;

use anyhow::{bail, Result};
use obi_core::constructions::applicable;
use obi_core::distance::{closed_form_distance, closed_form_regime};
use obi_core::regime::validate_two_step;
use obi_core::solver::SolveOptions;
use obi_core::Circulant;
use rayon::prelude::*;
use serde::Serialize;

use crate::sweep::{solve_row, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub n: usize,
    pub a: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Tally {
    pub check: String,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub instances: Vec<Row>,
    pub checks: Vec<CheckResult>,
    pub tallies: Vec<Tally>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.tallies.iter().map(|t| t.fail).sum()
    }
}

fn check(name: impl Into<String>, n: usize, a: usize, status: Status, detail: String) -> CheckResult {
    CheckResult { check: name.into(), n, a, status, detail }
}

fn verify_instance(n: usize, a: usize, opts: &SolveOptions) -> Result<(Row, Vec<CheckResult>)> {
    let row = solve_row(n, a, opts)?;
    let mut out = Vec::new();
    let at = |ok: bool| if ok { Status::Pass } else { Status::Fail };

    if let Some(p) = row.predicted {
        let name = format!("exact {}", row.regime);
        if row.optimal {
            out.push(check(name, n, a, at(row.beta == p), format!("beta {} predicted {p}", row.beta)));
        } else {
            out.push(check(name, n, a, Status::Skipped, "budget exhausted".into()));
        }
    }

    if row.optimal {
        let inside = row.lower <= row.beta && row.beta <= row.upper;
        let tight = row.predicted.is_none() || (row.lower == row.beta && row.beta == row.upper);
        out.push(check(
            "bound sandwich",
            n,
            a,
            at(inside && tight),
            format!("{} <= {} <= {}", row.lower, row.beta, row.upper),
        ));
    } else {
        out.push(check("bound sandwich", n, a, Status::Skipped, "budget exhausted".into()));
    }

    for rec in applicable(n, a) {
        let ok = rec.is_certified() && (!row.optimal || rec.predicted_cost <= row.beta);
        out.push(check(
            format!("construction {}", rec.family.label()),
            n,
            a,
            at(ok),
            format!("cost {}", rec.broadcast.cost()),
        ));
    }

    if closed_form_regime(n, a).is_some() {
        let g = Circulant::two_step(n, a as i64)?;
        let mut bad = 0;
        for i in 0..n {
            let row = g.distance_row(i);
            for (j, &d) in row.iter().enumerate() {
                if closed_form_distance(n, a, i, j)? != d {
                    bad += 1;
                }
            }
        }
        out.push(check("distance formula", n, a, at(bad == 0), if bad == 0 { String::new() } else { format!("{bad} pairs differ") }));
    }
    Ok((row, out))
}

pub fn run(min_n: usize, max_n: usize, opts: &SolveOptions) -> Result<VerifyReport> {
    if max_n < 8 {
        bail!("verify needs --max-n >= 8, got {max_n}");
    }
    let pairs: Vec<(usize, usize)> = (min_n..=max_n)
        .flat_map(|n| (2..n).map(move |a| (n, a)))
        .filter(|&(n, a)| validate_two_step(n, a).is_ok())
        .collect();
    if pairs.is_empty() {
        bail!("nothing to verify for n in {min_n}..={max_n}");
    }
    let opts = SolveOptions { threads: 1, ..opts.clone() };
    let per: Vec<(Row, Vec<CheckResult>)> =
        pairs.par_iter().map(|&(n, a)| verify_instance(n, a, &opts)).collect::<Result<_>>()?;

    let mut tallies: BTreeMap<String, Tally> = BTreeMap::new();
    let mut instances = Vec::new();
    let mut checks = Vec::new();
    for (row, cs) in per {
        instances.push(row);
        for c in cs {
            let t = tallies.entry(c.check.clone()).or_insert_with(|| Tally { check: c.check.clone(), ..Tally::default() });
            match c.status {
                Status::Pass => t.pass += 1,
                Status::Fail => t.fail += 1,
                Status::Skipped => t.skipped += 1,
            }
            checks.push(c);
        }
    }
    Ok(VerifyReport { instances, checks, tallies: tallies.into_values().collect() })
}
