//! Running suprema of the monitored quantities.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{flatten_record, DiagnosticsRecord};

/// `R_T = sup rho_max + 1`, `V_T = sup 1/rho_min + 1`, and the running
/// supremum of every numeric record field.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EstimateLedger {
    pub r_t: f64,
    pub v_t: f64,
    pub suprema: BTreeMap<String, f64>,
    /// Time at which a field first went non-finite.
    pub first_violation: BTreeMap<String, f64>,
    pub records: u64,
}

const SKIP: [&str; 3] = ["step", "tau", "dt"];

pub fn update_ledger(mut ledger: EstimateLedger, record: &DiagnosticsRecord) -> EstimateLedger {
    let r_t = record.rho_max + 1.0;
    let v_t = 1.0 / record.rho_min + 1.0;
    if ledger.records == 0 {
        ledger.r_t = r_t;
        ledger.v_t = v_t;
    } else {
        ledger.r_t = ledger.r_t.max(r_t);
        ledger.v_t = ledger.v_t.max(v_t);
    }
    for (name, value) in flatten_record(record) {
        if SKIP.contains(&name.as_str()) {
            continue;
        }
        if !value.is_finite() {
            ledger.first_violation.entry(name).or_insert(record.tau);
            continue;
        }
        let slot = ledger.suprema.entry(name).or_insert(value);
        *slot = slot.max(value);
    }
    ledger.records += 1;
    ledger
}

/// Associative, commutative max-fold of two ledgers.
pub fn merge_ledgers(a: &EstimateLedger, b: &EstimateLedger) -> EstimateLedger {
    if a.records == 0 {
        return b.clone();
    }
    if b.records == 0 {
        return a.clone();
    }
    let mut out = a.clone();
    out.r_t = a.r_t.max(b.r_t);
    out.v_t = a.v_t.max(b.v_t);
    for (k, &v) in &b.suprema {
        let slot = out.suprema.entry(k.clone()).or_insert(v);
        *slot = slot.max(v);
    }
    for (k, &t) in &b.first_violation {
        let slot = out.first_violation.entry(k.clone()).or_insert(t);
        *slot = slot.min(t);
    }
    out.records = a.records + b.records;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{evaluate, DiagnosticsOptions, RecordContext};
    use crate::physics::Coefficients;
    use crate::state::FluidState;

    fn record(rho_max: f64, rho_min: f64) -> DiagnosticsRecord {
        let s = FluidState::uniform(3, 8, 1.0).unwrap();
        let c = Coefficients::new(0.9, 1.5, 1.0, 3, 1.0).unwrap();
        let mut r = evaluate(&s, &c, &DiagnosticsOptions::default(), &RecordContext::initial(&s));
        r.rho_max = rho_max;
        r.rho_min = rho_min;
        r
    }

    #[test]
    fn first_record_seeds() {
        let l = update_ledger(EstimateLedger::default(), &record(3.0, 0.5));
        assert_eq!((l.r_t, l.v_t), (4.0, 3.0));
    }

    #[test]
    fn decreasing_maximum_keeps_r_t() {
        let mut l = EstimateLedger::default();
        for m in [5.0, 4.0, 3.0, 2.0] {
            l = update_ledger(l, &record(m, 1.0));
            assert_eq!(l.r_t, 6.0);
        }
    }

    #[test]
    fn non_finite_values_flagged() {
        let mut r = record(1.0, 1.0);
        r.tau = 0.25;
        r.energy = f64::NAN;
        let l = update_ledger(EstimateLedger::default(), &r);
        assert_eq!(l.first_violation.get("energy"), Some(&0.25));
        assert!(!l.suprema.contains_key("energy"));
    }
}
