use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Result;
use primtop_core::kgraph::{
    k_converges, k_specializes, kprim_spectrum, ktails, m_per, per_subgroup, validate_d_set, validate_kgraph, DSet,
    DSetReport, DViolation, KConvergeParams, KConvergence, KGraph, KGraphError, KPath, KPrimPoint, KSpecialization,
    PerResult, TorusPiece, VertexSet,
};
use primtop_core::lattice::{format_rational, CharacterVector, Rat, RationalAngle};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::input::{load_skeleton, names, parse_bound, parse_error, read_json};
use crate::output::{emit_dot, hasse, Node, Output};

pub fn load(path: &Path) -> Result<KGraph> {
    let sk = load_skeleton(path)?;
    validate_kgraph(&sk).map_err(|e| parse_error(format!("{}: {e}", path.display())))
}

fn path_json(kg: &KGraph, p: &KPath) -> Value {
    json!(p.names(kg))
}

fn parse_path(kg: &KGraph, names: &[String]) -> Result<KPath> {
    KPath::from_names(kg, names).map_err(|e| parse_error(format!("path {names:?}: {e}")))
}

#[derive(Deserialize)]
struct PointRepr {
    tail: Vec<String>,
    #[serde(default)]
    chi: Option<Vec<RationalAngle>>,
}

fn point_from_repr(kg: &KGraph, r: &PointRepr) -> Result<KPrimPoint> {
    let tail = kg.vertex_set(&r.tail).map_err(parse_error)?;
    let chi = CharacterVector(r.chi.clone().unwrap_or_else(|| vec![RationalAngle::ZERO; kg.k()]));
    if chi.k() != kg.k() {
        return Err(parse_error(format!("character has {} entries, expected {}", chi.k(), kg.k())));
    }
    Ok(KPrimPoint { tail, chi })
}

/// Parses `v,w@0,1/2` (the character defaults to zero) or a JSON point.
pub fn parse_point(kg: &KGraph, s: &str) -> Result<KPrimPoint> {
    let r = if s.trim_start().starts_with('{') {
        serde_json::from_str(s).map_err(|e| parse_error(format!("point {s:?}: {e}")))?
    } else {
        let (tail, chi) = match s.split_once('@') {
            Some((t, c)) => {
                let chi = names(c)
                    .iter()
                    .map(|a| a.parse::<RationalAngle>().map_err(|e| parse_error(format!("point {s:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                (t, Some(chi))
            }
            None => (s, None),
        };
        PointRepr { tail: names(tail), chi }
    };
    point_from_repr(kg, &r)
}

fn point_json(kg: &KGraph, p: &KPrimPoint) -> Value {
    json!({ "tail": kg.names(&p.tail), "chi": p.chi })
}

pub fn validate(path: &Path) -> Result<Output> {
    let sk = load_skeleton(path)?;
    Ok(match validate_kgraph(&sk) {
        Ok(kg) => Output::new(
            json!({ "valid": true, "k": kg.k(), "vertices": kg.vertex_count(), "edges": kg.edges().len() }),
            format!("valid {}-graph: {} vertices, {} edges\n", kg.k(), kg.vertex_count(), kg.edges().len()),
        ),
        Err(e) => Output::new(json!({ "valid": false, "error": e.to_string() }), format!("invalid: {e}\n")).failed(),
    })
}

pub fn tails(path: &Path) -> Result<Output> {
    let kg = load(path)?;
    let ts = ktails(&kg);
    let json = json!(ts.iter().map(|t| kg.names(t)).collect::<Vec<_>>());
    let text = ts.iter().map(|t| format!("{}\n", kg.fmt_set(t))).collect();
    Ok(Output::new(json, text))
}

/// The requested tail, or every tail when none is named.
fn selected_tails(kg: &KGraph, tail: Option<&str>) -> Result<Vec<VertexSet>> {
    let all = ktails(kg);
    match tail {
        None => Ok(all),
        Some(s) => {
            let set = kg.vertex_set(&names(s)).map_err(parse_error)?;
            if !all.contains(&set) {
                return Err(KGraphError::NotATail.into());
            }
            Ok(vec![set])
        }
    }
}

fn per_json(kg: &KGraph, m: &VertexSet, r: &PerResult) -> Value {
    json!({
        "tail": kg.names(m),
        "per": r.per,
        "status": r.status,
        "witnesses": r.witnesses.iter().map(|w| json!({
            "l": w.l,
            "mu": path_json(kg, &w.mu),
            "nu": path_json(kg, &w.nu),
        })).collect::<Vec<_>>(),
    })
}

fn per_text(kg: &KGraph, m: &VertexSet, r: &PerResult) -> String {
    format!("tail {}: Per basis {:?}, {:?}\n", kg.fmt_set(m), r.per.basis(), r.status)
}

/// A single object when one tail was asked for, else an array.
fn one_or_many(values: Vec<Value>, single: bool) -> Value {
    if single {
        values.into_iter().next().unwrap_or(Value::Null)
    } else {
        Value::Array(values)
    }
}

pub fn per(path: &Path, tail: Option<&str>, bound: &str) -> Result<Output> {
    let kg = load(path)?;
    let bound = &parse_bound(bound, kg.k())?;
    let mut json = Vec::new();
    let mut text = String::new();
    for m in selected_tails(&kg, tail)? {
        let r = per_subgroup(&kg, &m, bound)?;
        json.push(per_json(&kg, &m, &r));
        text.push_str(&per_text(&kg, &m, &r));
    }
    Ok(Output::new(one_or_many(json, tail.is_some()), text))
}

pub fn mper(path: &Path, tail: Option<&str>, bound: &str) -> Result<Output> {
    let kg = load(path)?;
    let bound = &parse_bound(bound, kg.k())?;
    let mut json = Vec::new();
    let mut text = String::new();
    for m in selected_tails(&kg, tail)? {
        let r = per_subgroup(&kg, &m, bound)?;
        if !r.is_stabilized() {
            return Err(KGraphError::NotStabilized.into());
        }
        let core = m_per(&kg, &m, &r)?;
        json.push(json!({ "tail": kg.names(&m), "per": r.per, "m_per": kg.names(&core) }));
        text.push_str(&format!("tail {}: M_Per {}\n", kg.fmt_set(&m), kg.fmt_set(&core)));
    }
    Ok(Output::new(one_or_many(json, tail.is_some()), text))
}

pub fn prim(path: &Path, bound: &str) -> Result<Output> {
    let kg = load(path)?;
    let bound = &parse_bound(bound, kg.k())?;
    let comps = kprim_spectrum(&kg, bound)?;
    let json: Vec<Value> = comps
        .iter()
        .map(|c| {
            json!({
                "tail": kg.names(&c.tail),
                "per": c.per.per,
                "status": c.per.status,
                "m_per": kg.names(&c.m_per),
                "characters": c.chars,
            })
        })
        .collect();
    let nodes: Vec<Node> = comps
        .iter()
        .map(|c| match c.chars.dim {
            0 => Node { label: kg.fmt_set(&c.tail), fiber: false },
            d => Node { label: format!("{} × T^{d}", kg.fmt_set(&c.tail)), fiber: true },
        })
        .collect();
    // Components are compared through their trivial characters.
    let zero = CharacterVector::zero(kg.k());
    let point = |i: usize| KPrimPoint { tail: comps[i].tail.clone(), chi: zero.clone() };
    let mut failure = None;
    let edges = hasse(comps.len(), |i, j| match k_specializes(&kg, &point(i), &point(j), bound) {
        Ok(s) => s == KSpecialization::Yes,
        Err(e) => {
            failure.get_or_insert(e);
            false
        }
    });
    if let Some(e) = failure {
        return Err(e.into());
    }
    let mut text: String = nodes.iter().map(|n| format!("{}\n", n.label)).collect();
    for &(i, j) in &edges {
        text.push_str(&format!("{} ~> {}\n", nodes[i].label, nodes[j].label));
    }
    let json = json!({
        "components": json,
        "nodes": nodes.iter().map(|n| n.label.clone()).collect::<Vec<_>>(),
        "hasse": edges.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
    });
    let dot = emit_dot("kprim", &nodes, &edges);
    Ok(Output::new(json, text).with_dot(dot))
}

#[derive(Deserialize)]
struct ConvergeFile {
    target: PointRepr,
    sequence: Vec<PointRepr>,
    lambda0: Vec<String>,
    #[serde(default)]
    eps: Option<String>,
    #[serde(default, rename = "F")]
    f: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    bound: Option<Vec<u32>>,
}

pub fn converges(path: &Path, params: &Path, eps: Rat, bound: &str) -> Result<Output> {
    let kg = load(path)?;
    let bound = &parse_bound(bound, kg.k())?;
    let file: ConvergeFile = read_json(params)?;
    let target = point_from_repr(&kg, &file.target)?;
    let seq = file.sequence.iter().map(|p| point_from_repr(&kg, p)).collect::<Result<Vec<_>>>()?;
    let eps = match &file.eps {
        Some(s) => crate::input::parse_eps(s)?,
        None => eps,
    };
    let bound = file.bound.clone().unwrap_or_else(|| bound.to_vec());
    let f = match file.f {
        Some(f) => f,
        None => per_subgroup(&kg, &target.tail, &bound)?.per.basis().to_vec(),
    };
    let params = KConvergeParams { lambda0: parse_path(&kg, &file.lambda0)?, eps, f, bound };
    Ok(match k_converges(&kg, &target, &seq, &params)? {
        KConvergence::Certificate { from, witnesses } => {
            let w: Vec<Value> =
                witnesses.iter().map(|w| json!({ "n": w.n, "mu": path_json(&kg, &w.mu), "m": w.m })).collect();
            Output::new(
                json!({ "converges": true, "from": from, "witnesses": w }),
                format!("certificate from n = {from} ({} witnesses)\n", witnesses.len()),
            )
        }
        KConvergence::FailAt(n) => {
            Output::new(json!({ "converges": false, "fail_at": n }), format!("fails at n = {n}\n")).failed()
        }
    })
}

pub fn specializes(path: &Path, p1: &str, p2: &str, bound: &str) -> Result<Output> {
    let kg = load(path)?;
    let bound = &parse_bound(bound, kg.k())?;
    let (a, b) = (parse_point(&kg, p1)?, parse_point(&kg, p2)?);
    Ok(match k_specializes(&kg, &a, &b, bound)? {
        KSpecialization::Yes => Output::new(
            json!({ "specializes": true, "from": point_json(&kg, &a), "to": point_json(&kg, &b) }),
            "yes\n".to_string(),
        ),
        KSpecialization::NoWithinBound { lambda0, eps, f } => Output::new(
            json!({
                "specializes": false,
                "bound": bound,
                "lambda0": path_json(&kg, &lambda0),
                "eps": format_rational(&eps),
                "F": f,
            }),
            format!("no certificate within bound {bound:?}; failing lambda0 {}\n", lambda0.display(&kg)),
        ),
    })
}

/// The horizon is one length used in every colour.
fn uniform(h: &[u32]) -> Result<u32> {
    match h.iter().min() {
        Some(&a) if h.iter().all(|&b| b == a) => Ok(a),
        _ => Err(parse_error(format!("horizon {h:?} must use the same length in every colour"))),
    }
}

fn violation_json(kg: &KGraph, v: &DViolation) -> Value {
    match v {
        DViolation::NotHereditary { z, edge } => {
            json!({ "kind": "not_hereditary", "z": z, "edge": kg.edge(*edge).name })
        }
        DViolation::NotSaturated { z, vertex, color } => {
            json!({ "kind": "not_saturated", "z": z, "vertex": kg.name(*vertex), "color": color })
        }
        DViolation::NotOpen { vertex, z, path } => {
            json!({ "kind": "not_open", "vertex": kg.name(*vertex), "z": z, "path": path_json(kg, path) })
        }
    }
}

pub fn dset(path: &Path, dset: &Path, horizon: &str) -> Result<Output> {
    let kg = load(path)?;
    let horizon = uniform(&parse_bound(horizon, kg.k())?)?;
    let named: BTreeMap<String, Vec<TorusPiece>> = read_json(dset)?;
    let d = DSet::from_names(&kg, &named).map_err(parse_error)?;
    Ok(match validate_d_set(&kg, &d, horizon)? {
        DSetReport::ValidAtHorizon(h) => {
            Output::new(json!({ "valid": true, "horizon": h }), format!("valid at horizon {h}\n"))
        }
        DSetReport::Violation(v) => {
            let j = violation_json(&kg, &v);
            let text = format!("violation: {j}\n");
            Output::new(json!({ "valid": false, "violation": j }), text).failed()
        }
    })
}
