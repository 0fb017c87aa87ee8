use std::path::Path;

use anyhow::Result;
use primtop_core::transform::{delta, quasi_orbits, stabilizer, Delta, FiniteAction};
use serde_json::{json, Value};

use crate::input::load_action;
use crate::output::Output;

/// `x` with the character listed as `h -> angle` pairs.
fn point_label(a: &FiniteAction, d: &Delta, i: usize) -> String {
    let p = d.points[i];
    let dual = &d.duals[p.x];
    let vals: Vec<String> =
        dual.subgroup.iter().zip(d.values(p)).map(|(&h, v)| format!("{}:{v}", a.group().name(h))).collect();
    format!("({}, {{{}}})", a.name(p.x), vals.join(", "))
}

fn point_json(a: &FiniteAction, d: &Delta, i: usize) -> Value {
    let p = d.points[i];
    let chi: serde_json::Map<String, Value> = d.duals[p.x]
        .subgroup
        .iter()
        .zip(d.values(p))
        .map(|(&h, v)| (a.group().name(h).to_string(), json!(v)))
        .collect();
    json!({ "x": a.name(p.x), "chi": chi })
}

pub fn stab(path: &Path) -> Result<Output> {
    let a = load_action(path)?;
    let mut json = Vec::new();
    let mut text = String::new();
    for x in 0..a.len() {
        let s = stabilizer(&a, x);
        let names = a.group().names(&s.elements);
        text.push_str(&format!(
            "{}: {{{}}}{}\n",
            a.name(x),
            names.join(", "),
            if s.abelian { "" } else { " (non-abelian)" }
        ));
        json.push(json!({ "x": a.name(x), "stabilizer": names, "abelian": s.abelian }));
    }
    Ok(Output::new(Value::Array(json), text))
}

pub fn delta_cmd(path: &Path) -> Result<Output> {
    let a = load_action(path)?;
    let d = delta(&a)?;
    let json: Vec<Value> = (0..d.points.len()).map(|i| point_json(&a, &d, i)).collect();
    let text = (0..d.points.len()).map(|i| format!("{}\n", point_label(&a, &d, i))).collect();
    Ok(Output::new(Value::Array(json), text))
}

pub fn orbits(path: &Path) -> Result<Output> {
    let a = load_action(path)?;
    let d = delta(&a)?;
    let x_orbits: Vec<Vec<&str>> = a.orbits().iter().map(|o| o.iter().map(|&x| a.name(x)).collect()).collect();
    let classes = quasi_orbits(&d);
    let json = json!({
        "orbits": x_orbits,
        "quasi_orbits": classes
            .iter()
            .map(|c| c.iter().map(|&i| point_json(&a, &d, i)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    let text = classes
        .iter()
        .map(|c| format!("{}\n", c.iter().map(|&i| point_label(&a, &d, i)).collect::<Vec<_>>().join(" ")))
        .collect();
    Ok(Output::new(json, text))
}
