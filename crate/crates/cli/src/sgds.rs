use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Result;
use primtop_core::lattice::CircleSet;
use primtop_core::sgds::{classify, period_data, sgds_prim, validate_y, y_from_names, Sgds, SgdsFamily, YViolation};
use serde_json::{json, Value};

use crate::input::{load_sgds, parse_error, read_json};
use crate::output::Output;

fn names(s: &Sgds, xs: impl IntoIterator<Item = usize>) -> Vec<String> {
    xs.into_iter().map(|x| s.name(x).to_string()).collect()
}

pub fn classify_cmd(path: &Path) -> Result<Output> {
    let s = load_sgds(path)?;
    let c = classify(&s);
    let periods: BTreeMap<String, Value> =
        (0..s.len()).map(|x| (s.name(x).to_string(), json!(period_data(&s, x)))).collect();
    let json = json!({
        "aperiodic": s.names(&c.aperiodic),
        "periodic": s.names(&c.periodic),
        "period": periods,
    });
    let text = (0..s.len()).map(|x| format!("{} {}\n", s.name(x), period_data(&s, x))).collect();
    Ok(Output::new(json, text))
}

pub fn prim(path: &Path) -> Result<Output> {
    let s = load_sgds(path)?;
    let fams = sgds_prim(&s);
    let json: Vec<Value> = fams
        .iter()
        .map(|f| match f {
            SgdsFamily::Point { class } => json!({ "kind": "point", "class": s.names(class) }),
            SgdsFamily::Fiber { class, cycle, p } => json!({
                "kind": "fiber",
                "class": s.names(class),
                "cycle": names(&s, cycle.iter().copied()),
                "p": p,
            }),
        })
        .collect();
    let text = fams
        .iter()
        .map(|f| match f {
            SgdsFamily::Point { class } => format!("point [{}]\n", s.names(class).join(", ")),
            SgdsFamily::Fiber { class, p, .. } => format!("[{}] × T, w = z^{p}\n", s.names(class).join(", ")),
        })
        .collect();
    Ok(Output::new(Value::Array(json), text))
}

fn violation_json(s: &Sgds, v: &YViolation) -> Value {
    let detail = match v {
        YViolation::NotInvariant { x, image } => {
            json!({ "kind": "not_invariant", "x": s.name(*x), "image": s.name(*image) })
        }
        YViolation::NotPeriodic { x } => json!({ "kind": "not_periodic", "x": s.name(*x) }),
        YViolation::NotRotationInvariant { x, p } => {
            json!({ "kind": "not_rotation_invariant", "x": s.name(*x), "p": p })
        }
    };
    json!({ "condition": v.condition(), "detail": detail })
}

pub fn validate_y_cmd(path: &Path, y: &Path) -> Result<Output> {
    let s = load_sgds(path)?;
    let named: BTreeMap<String, CircleSet> = read_json(y)?;
    let fibres = y_from_names(&s, &named).map_err(|e| parse_error(format!("{}: {e}", y.display())))?;
    let report = validate_y(&s, &fibres)?;
    Ok(match &report.violation {
        None => Output::new(
            json!({ "valid": true, "vacuous": report.vacuous }),
            format!("valid\n{}", report.vacuous.iter().map(|n| format!("note: {n}\n")).collect::<String>()),
        ),
        Some(v) => {
            let j = violation_json(&s, v);
            let text = format!("violates condition {}: {}\n", v.condition(), j["detail"]);
            Output::new(json!({ "valid": false, "violation": j, "vacuous": report.vacuous }), text).failed()
        }
    })
}
