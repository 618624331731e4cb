//! Machine-readable output: the canonical JSON schemas and the CSV writers
//! used by the CLI. All reports carry `"schema": "bakerlab/1"`. Rationals
//! cross every boundary as `"p/q"` strings, never as floats.

use crate::classical::{PRegion, XRegion};
use crate::comb::CombState;
use crate::propagator::UnitaryMatrix;
use crate::rational::rat_to_string;
use crate::scan::{PointSummary, ScanRecord, Verdict};
use crate::theta::FiberBasis;
use serde_json::{json, Value};

pub const SCHEMA: &str = "bakerlab/1";

pub fn comb_state_json(s: &CombState) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .iter()
        .map(|t| {
            let amp = t.amp.value();
            json!({
                "spacing": rat_to_string(t.spacing),
                "offset": rat_to_string(t.offset),
                "step_phase": rat_to_string(t.step_phase),
                "rep": s.rep().as_str(),
                "amp": [amp.re, amp.im],
            })
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "n": s.params().n,
        "terms": terms,
    })
}

pub fn fiber_basis_json(fb: &FiberBasis) -> Value {
    json!({
        "schema": SCHEMA,
        "N": fb.params().n,
        "theta": [rat_to_string(fb.theta().theta1()), rat_to_string(fb.theta().theta2())],
        "basis": fb.states().iter().map(comb_state_json).collect::<Vec<_>>(),
    })
}

pub fn scan_record_json(r: &ScanRecord) -> Value {
    json!({
        "schema": SCHEMA,
        "n": r.n,
        "theta": [r.theta1, r.theta2],
        "m": r.m,
        "rx": r.rx,
        "ry": r.ry,
        "invariant": r.invariant,
        "tol": r.tol,
    })
}

/// One scan record per line (JSON lines).
pub fn scan_records_jsonl(records: &[ScanRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&scan_record_json(r).to_string());
        out.push('\n');
    }
    out
}

pub fn verdict_json(v: &Verdict) -> Value {
    json!({
        "schema": SCHEMA,
        "pass": v.pass,
        "invariant_points": v.invariant_points
            .iter()
            .map(|(n, t1, t2)| json!({"n": n, "theta": [t1, t2]}))
            .collect::<Vec<_>>(),
        "violations": v.violations,
    })
}

/// CSV summary, one line per (N, θ): `n,theta1,theta2,max_rx,max_ry,invariant`.
pub fn scan_summary_csv(summaries: &[PointSummary]) -> String {
    let mut out = String::from("n,theta1,theta2,max_rx,max_ry,invariant\n");
    for s in summaries {
        out.push_str(&format!(
            "{},{},{},{:e},{:e},{}\n",
            s.n, s.theta1, s.theta2, s.max_rx, s.max_ry, s.invariant
        ));
    }
    out
}

/// Row-major matrix CSV with quoted `"re,im"` cells.
pub fn matrix_csv(m: &UnitaryMatrix) -> String {
    let n = m.dim();
    let mut out = String::new();
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| {
                let v = m.get(i, j);
                format!("\"{},{}\"", v.re, v.im)
            })
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn matrix_json(m: &UnitaryMatrix) -> Value {
    let n = m.dim();
    let rows: Vec<Vec<[f64; 2]>> = (0..n)
        .map(|i| (0..n).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
        .collect();
    json!({ "schema": SCHEMA, "n": n, "rows": rows })
}

/// Eigenphase CSV: `phase` in radians per line, ascending.
pub fn eigenphases_csv(phases: &[f64]) -> String {
    let mut out = String::from("phase\n");
    for p in phases {
        out.push_str(&format!("{p}\n"));
    }
    out
}

/// Orbit CSV: `step,x,p,region_x,region_p`, float mode (plot-ready output).
pub fn orbit_csv(orbit: &[(usize, f64, f64)]) -> String {
    let mut out = String::from("step,x,p,region_x,region_p\n");
    for (step, x, p) in orbit {
        let (xr, pr) = crate::classical::region_of_f64(*x, *p);
        let xs = match xr {
            XRegion::L => "l",
            XRegion::R => "r",
        };
        let ps = match pr {
            PRegion::Ep => "e_p",
            PRegion::Op => "o_p",
        };
        out.push_str(&format!("{step},{x},{p},{xs},{ps}\n"));
    }
    out
}
