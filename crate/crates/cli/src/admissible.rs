//! `nsp admissible`: the regime verdict and the exponent bookkeeping behind it.

use serde_json::{json, Map, Value};

use nsp_core::admissibility::{
    mdense_epsilon, n2, n3, select_k_2d, validate_params, window_chain, ExponentPair, KSelection, ParamWindow,
};

use crate::{CliError, Status};

/// Sample count per sign for the `epsilon` scan.
pub const MDENSE_RESOLUTION: usize = 20_000;

/// JSON number, with non-finite values spelled as strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn window(w: &ParamWindow) -> Value {
    json!({
        "lo": num(w.lo),
        "hi": num(w.hi),
        "satisfied": w.satisfied,
        "witness": w.witness.map_or(Value::Null, num),
    })
}

fn selection(sel: &KSelection) -> Value {
    let residuals: Vec<Value> =
        sel.residuals.iter().map(|r| json!({ "inequality": r.inequality, "value": num(r.value) })).collect();
    json!({
        "k": sel.k.to_string(),
        "k_value": num(sel.k_value()),
        "k0": num(sel.k0),
        "residuals": residuals,
        "all_positive": sel.all_positive(),
    })
}

fn mdense(sel: &KSelection) -> Value {
    let Some((s, k_idx)) = sel.k.a_set_decomposition() else {
        return Value::Null;
    };
    let mut out = Map::new();
    out.insert("k_idx".into(), json!(k_idx));
    out.insert("s".into(), json!(s));
    out.insert("p".into(), num(2.0 + 2.0 * s as f64 / (2 * k_idx + 1) as f64));
    match mdense_epsilon(k_idx, s, MDENSE_RESOLUTION) {
        Ok(eps) => out.insert("epsilon".into(), num(eps)),
        Err(e) => out.insert("error".into(), json!(e.to_string())),
    };
    Value::Object(out)
}

fn or_error<T>(r: nsp_core::Result<T>, f: impl FnOnce(&T) -> Value) -> Value {
    match r {
        Ok(v) => f(&v),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

/// The full report; inadmissible inputs yield a verdict, never an error.
pub fn admissibility_report(p: &ExponentPair) -> Value {
    let violations = validate_params(p);
    let mut out = Map::new();
    out.insert("input".into(), json!({ "alpha": num(p.alpha), "gamma": num(p.gamma), "dim": p.n, "kappa": p.kappa }));
    out.insert("admissible".into(), json!(violations.is_empty()));
    out.insert("regime".into(), serde_json::to_value(p.regime()).expect("regime serializes"));
    let violations: Vec<Value> = violations
        .iter()
        .map(|v| json!({ "hypothesis": v.hypothesis, "value": num(v.value), "margin": num(v.margin) }))
        .collect();
    out.insert("violations".into(), Value::Array(violations));
    out.insert("n2".into(), n2(p.alpha).map_or(Value::Null, num));
    out.insert("n3".into(), n3(p.alpha).map_or(Value::Null, num));

    // k, the windows and epsilon only exist below alpha = 1.
    let below_one = !p.alpha_is_one() && p.alpha < 1.0;
    let (k_selection, windows, eps) = match p.n {
        2 if below_one && p.alpha > 0.5 => {
            let sel = select_k_2d(p.alpha);
            let eps = sel.as_ref().map_or(Value::Null, mdense);
            (or_error(sel, selection), Value::Null, eps)
        }
        3 if below_one && p.alpha > 5.0 / 6.0 => match window_chain(p.alpha, p.gamma) {
            Ok(chain) => {
                let windows = json!({
                    "sigma": window(&chain.sigma),
                    "sigma_for_gamma": window(&chain.sigma_for_gamma),
                    "gamma": window(&chain.gamma),
                    "gamma_contains_input": chain.gamma.contains(p.gamma),
                    "beta": window(&chain.beta),
                });
                (selection(&chain.selection), windows, mdense(&chain.selection))
            }
            Err(e) => (json!({ "error": e.to_string() }), Value::Null, Value::Null),
        },
        _ => (Value::Null, Value::Null, Value::Null),
    };
    out.insert("k_selection".into(), k_selection);
    out.insert("windows".into(), windows);
    out.insert("mdense".into(), eps);
    Value::Object(out)
}

/// `nsp admissible --alpha A --gamma G --dim N --kappa K`.
pub fn cmd_admissible(p: &ExponentPair) -> Result<Status, CliError> {
    let report = admissibility_report(p);
    crate::print_stdout(&serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(Status::Completed)
}
