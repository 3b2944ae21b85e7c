use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use obi_core::broadcast::check_independent;
use obi_core::constructions::{
    construct_3a_minus_1, construct_a3, construct_k_a_minus_1, construct_qa, construct_qa_plus, single_vertex_diam,
    ConstructionFamily, ConstructionRecord,
};
use obi_core::distance::{closed_form_diameter, closed_form_distance, closed_form_regime};
use obi_core::regime::validate_two_step;
use obi_core::sample::random_independent;
use obi_core::transforms::{bound_to_a_minus_1, bound_to_q, equalize_pair, QVariant, RewriteTrace};
use obi_core::{Broadcast, Circulant};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub struct ConstructParams {
    pub n: Option<usize>,
    pub a: Option<usize>,
    pub q: Option<usize>,
    pub k: Option<usize>,
    pub s: usize,
}

fn req(v: Option<usize>, name: &str, family: ConstructionFamily) -> Result<usize> {
    v.with_context(|| format!("construction {} needs --{name}", family.label()))
}

pub fn construct(family: ConstructionFamily, p: &ConstructParams) -> Result<ConstructionRecord> {
    let rec = match family {
        ConstructionFamily::SingleVertexDiam => single_vertex_diam(req(p.n, "n", family)?, req(p.a, "a", family)?),
        ConstructionFamily::ThreeAMinus1 => construct_3a_minus_1(req(p.a, "a", family)?),
        ConstructionFamily::A3 => construct_a3(req(p.n, "n", family)?),
        ConstructionFamily::KAMinus1 => construct_k_a_minus_1(req(p.a, "a", family)?, req(p.k, "k", family)?, p.s),
        ConstructionFamily::Qa | ConstructionFamily::QaPlus => {
            let q = req(p.q, "q", family)?;
            let k = req(p.k, "k", family)?;
            let a = p.a.unwrap_or(k * q + 1 + p.s);
            if family == ConstructionFamily::Qa {
                construct_qa(a, q, k, p.s)
            } else {
                construct_qa_plus(a, q, k, p.s)
            }
        }
    };
    Ok(rec?)
}

#[derive(Serialize)]
pub struct ConstructOutput<'a> {
    #[serde(flatten)]
    pub record: &'a ConstructionRecord,
    pub cost: u32,
    pub valid: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TransformKind {
    /// Bound every value by a - 1.
    #[value(name = "a-minus-1")]
    AMinus1,
    /// Bound every value by q; the variant follows from n mod a.
    Q,
    /// Equalize v_i and v_(i+a-1) at l - 1.
    Equalize,
}

#[derive(Serialize)]
pub struct TransformOutput {
    pub n: usize,
    pub a: usize,
    pub input: String,
    pub output: String,
    pub input_cost: u32,
    pub output_cost: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<RewriteTrace>,
}

pub struct TransformParams {
    pub kind: TransformKind,
    pub n: usize,
    pub a: usize,
    pub f: Option<String>,
    pub seed: u64,
    pub i: usize,
    pub ell: Option<u32>,
    pub explain: bool,
}

pub fn transform(p: &TransformParams) -> Result<TransformOutput> {
    validate_two_step(p.n, p.a)?;
    let g = Circulant::two_step(p.n, p.a as i64)?;
    let d = g.all_pairs();
    let f = match &p.f {
        Some(text) => Broadcast::from_compact(p.n, text)?,
        None => {
            let cap = match p.kind {
                TransformKind::Equalize => p.ell.context("equalize needs --ell")?,
                _ => d.diameter(),
            };
            random_independent(&d, cap, &mut ChaCha8Rng::seed_from_u64(p.seed))
        }
    };
    let (out, trace) = match p.kind {
        TransformKind::AMinus1 => bound_to_a_minus_1(&g, &d, &f)?,
        TransformKind::Q => {
            let variant = if p.n % p.a == 0 { QVariant::Qa } else { QVariant::QaPlus };
            bound_to_q(&g, &d, &f, variant)?
        }
        TransformKind::Equalize => equalize_pair(&g, &d, &f, p.i, p.ell.context("equalize needs --ell")?)?,
    };
    Ok(TransformOutput {
        n: p.n,
        a: p.a,
        input: f.to_compact(),
        output: out.to_compact(),
        input_cost: trace.input_cost,
        output_cost: trace.output_cost,
        trace: p.explain.then_some(trace),
    })
}

#[derive(Debug, Serialize)]
pub struct DistanceCheck {
    pub n: usize,
    pub a: usize,
    pub closed_form: bool,
    pub pairs: usize,
    pub mismatches: usize,
    pub diameter_bfs: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diameter_formula: Option<u32>,
}

pub fn distance_check(n: usize, a: usize) -> Result<DistanceCheck> {
    validate_two_step(n, a)?;
    let g = Circulant::two_step(n, a as i64)?;
    let closed = closed_form_regime(n, a).is_some();
    let mut mismatches = 0;
    if closed {
        for i in 0..n {
            let row = g.distance_row(i);
            for (j, &x) in row.iter().enumerate() {
                if closed_form_distance(n, a, i, j)? != x {
                    mismatches += 1;
                }
            }
        }
    }
    Ok(DistanceCheck {
        n,
        a,
        closed_form: closed,
        pairs: if closed { n * n } else { 0 },
        mismatches,
        diameter_bfs: g.diameter(),
        diameter_formula: closed_form_diameter(n, a).ok(),
    })
}

pub fn export_dot(g: &Circulant, f: Option<&Broadcast>) -> Result<String> {
    let n = g.n();
    if let Some(f) = f {
        if f.n() != n {
            bail!("broadcast has {} values, graph has {n} vertices", f.n());
        }
        let bad = check_independent(&g.all_pairs(), f)?;
        if !bad.is_empty() {
            eprintln!("warning: broadcast is not independent ({} violations)", bad.len());
        }
    }
    let mut s = String::new();
    writeln!(s, "digraph \"{}\" {{", g.spec())?;
    writeln!(s, "  layout=circo;")?;
    writeln!(s, "  node [shape=circle];")?;
    for v in 0..n {
        match f.map(|f| f.get(v)) {
            Some(x) if x > 0 => writeln!(s, "  v{v} [label=\"v{v}\\n{x}\", style=filled, fillcolor=lightgray];")?,
            Some(_) => writeln!(s, "  v{v} [label=\"v{v}\\n0\"];")?,
            None => writeln!(s, "  v{v} [label=\"v{v}\"];")?,
        }
    }
    for (u, v) in g.arcs() {
        writeln!(s, "  v{u} -> v{v};")?;
    }
    s.push_str("}\n");
    Ok(s)
}
