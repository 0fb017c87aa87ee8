use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Result;
use primtop_core::digraph::{
    closure, cylinder_specializes, hereditary_saturated_sets, maximal_tails, point_path, prim_spectrum, specializes,
    DirectedGraph, LeastData, PrimPoint, PrimPointRepr,
};
use primtop_core::lattice::{CircleSet, RationalAngle};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::input::{load_graph, names, parse_error, read_json};
use crate::output::{emit_dot, hasse, Node, Output};

/// Parses `gamma:v,w`, `breaking:v`, `loop:v,w@1/4` or a JSON point.
pub fn parse_point(g: &DirectedGraph, s: &str) -> Result<PrimPoint> {
    let repr: PrimPointRepr = if s.trim_start().starts_with('{') {
        serde_json::from_str(s).map_err(|e| parse_error(format!("point {s:?}: {e}")))?
    } else {
        let (kind, rest) = s.split_once(':').ok_or_else(|| parse_error(format!("point {s:?}: expected kind:...")))?;
        match kind {
            "gamma" => PrimPointRepr::Gamma { tail: names(rest) },
            "breaking" => PrimPointRepr::Breaking { vertex: rest.trim().to_string() },
            "loop" => {
                let (cycle, fiber) = rest.split_once('@').unwrap_or((rest, "0"));
                let fiber: RationalAngle = fiber.parse().map_err(|e| parse_error(format!("point {s:?}: {e}")))?;
                PrimPointRepr::Loop { cycle: names(cycle), fiber }
            }
            _ => return Err(parse_error(format!("point {s:?}: unknown kind {kind:?}"))),
        }
    };
    PrimPoint::from_repr(g, &repr).map_err(|e| parse_error(format!("point {s:?}: {e}")))
}

pub fn tails(path: &Path) -> Result<Output> {
    let g = load_graph(path)?;
    let ts = maximal_tails(&g);
    let least = |l: &LeastData| match l {
        LeastData::NoLeast => json!("none"),
        LeastData::UniqueLeastNoSelfLoop(u) => json!({ "unique": g.name(*u) }),
        LeastData::Other => json!("other"),
    };
    let json: Vec<Value> = ts
        .iter()
        .map(|t| {
            json!({
                "tail": g.names(&t.vertices),
                "gamma": t.gamma,
                "least": least(&t.least),
                "bottom": g.names(&t.bottom),
            })
        })
        .collect();
    let text = ts
        .iter()
        .map(|t| format!("{} {}\n", if t.gamma { "gamma" } else { "loop " }, g.fmt_set(&t.vertices)))
        .collect();
    Ok(Output::new(Value::Array(json), text))
}

fn nodes(g: &DirectedGraph) -> (Vec<Node>, Vec<PrimPoint>) {
    let s = prim_spectrum(g);
    let mut nodes = Vec::new();
    let mut reps = Vec::new();
    for p in s.finite_points() {
        nodes.push(Node { label: p.describe(g), fiber: false });
        reps.push(p);
    }
    for l in &s.loops {
        nodes.push(Node { label: format!("{} × T", g.fmt_set(l)), fiber: true });
        reps.push(PrimPoint::Loop { cycle: l.clone(), fiber: RationalAngle::ZERO });
    }
    (nodes, reps)
}

pub fn prim(path: &Path) -> Result<Output> {
    let g = load_graph(path)?;
    let s = prim_spectrum(&g);
    let (nodes, reps) = nodes(&g);
    // Points of one fibre relate identically to every point outside it.
    let edges = hasse(nodes.len(), |i, j| specializes(&g, &reps[i], &reps[j]).expect("spectrum points"));
    let json = json!({
        "gamma": s.gamma.iter().map(|t| g.names(&t.vertices)).collect::<Vec<_>>(),
        "breaking": g.names(&s.breaking),
        "loops": s.loops.iter().map(|l| g.names(l)).collect::<Vec<_>>(),
        "nodes": nodes.iter().map(|n| n.label.clone()).collect::<Vec<_>>(),
        "hasse": edges.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
    });
    let mut text: String = nodes.iter().map(|n| format!("{}\n", n.label)).collect();
    for &(i, j) in &edges {
        text.push_str(&format!("{} ~> {}\n", nodes[i].label, nodes[j].label));
    }
    let dot = emit_dot("prim", &nodes, &edges);
    Ok(Output::new(json, text).with_dot(dot))
}

/// Boundary-path simulation of the same question, to the given depth.
fn simulate(g: &DirectedGraph, p1: &PrimPoint, p2: &PrimPoint, depth: usize) -> Result<bool> {
    if let (PrimPoint::Loop { cycle: l1, fiber: w1 }, PrimPoint::Loop { cycle: l2, fiber: w2 }) = (p1, p2) {
        if l1 == l2 {
            return Ok(w1 == w2);
        }
    }
    let x1 = point_path(g, p1, 4 * depth)?;
    let x2 = point_path(g, p2, 4 * depth)?;
    Ok(cylinder_specializes(g, &x1, &x2, depth))
}

pub fn specializes_cmd(path: &Path, p1: &str, p2: &str, depth: usize) -> Result<Output> {
    let g = load_graph(path)?;
    let (a, b) = (parse_point(&g, p1)?, parse_point(&g, p2)?);
    let yes = specializes(&g, &a, &b)?;
    let sim = simulate(&g, &a, &b, depth)?;
    let json = json!({ "specializes": yes, "simulated": sim, "depth": depth });
    let text = format!(
        "{} {} {}\nsimulation at depth {depth}: {}\n",
        a.describe(&g),
        if yes { "~>" } else { "!~>" },
        b.describe(&g),
        if sim { "yes" } else { "no" }
    );
    Ok(Output::new(json, text))
}

#[derive(Deserialize, Default)]
struct Seeds {
    #[serde(default)]
    points: Vec<PrimPointRepr>,
    #[serde(default)]
    fibers: Vec<FiberSeed>,
}

#[derive(Deserialize)]
struct FiberSeed {
    #[serde(rename = "loop")]
    cycle: Vec<String>,
    set: CircleSet,
}

pub fn closure_cmd(path: &Path, points: &[String], seeds: Option<&Path>) -> Result<Output> {
    let g = load_graph(path)?;
    let mut pts = points.iter().map(|s| parse_point(&g, s)).collect::<Result<Vec<_>>>()?;
    let mut fibers = BTreeMap::new();
    if let Some(file) = seeds {
        let s: Seeds = read_json(file)?;
        for p in &s.points {
            pts.push(PrimPoint::from_repr(&g, p).map_err(parse_error)?);
        }
        for f in s.fibers {
            let l = g.vertex_set(&f.cycle).map_err(parse_error)?;
            let entry = fibers.entry(l).or_insert_with(CircleSet::empty);
            *entry = entry.union(&f.set);
        }
    }
    let c = closure(&g, &pts, &fibers)?;
    let json = json!({
        "points": c.points.iter().map(|p| p.to_repr(&g)).collect::<Vec<_>>(),
        "fibers": c.fibers.iter().map(|(l, s)| json!({ "loop": g.names(l), "set": s })).collect::<Vec<_>>(),
    });
    let mut text: String = c.points.iter().map(|p| format!("{}\n", p.describe(&g))).collect();
    for (l, s) in &c.fibers {
        text.push_str(&format!("loop {} fibre {}\n", g.fmt_set(l), serde_json::to_string(s)?));
    }
    Ok(Output::new(json, text))
}

pub fn ideals(path: &Path) -> Result<Output> {
    let g = load_graph(path)?;
    let sets = hereditary_saturated_sets(&g)?;
    let json = json!(sets.iter().map(|h| g.names(h)).collect::<Vec<_>>());
    let text = sets.iter().map(|h| format!("{}\n", g.fmt_set(h))).collect();
    Ok(Output::new(json, text))
}
