//! Browser bindings. Each export takes plain strings/numbers and returns a
//! JSON string; the `*_json` functions are the same operations callable
//! from Rust.

use nilflow::coadjoint::{casimir_basis, classify_orbit, SamplingConfig};
use nilflow::exactmath::rat::{format_rat, parse_rat, parse_rat_list};
use nilflow::flows::{
    identity_hamiltonian, integrate, magnetic_field_equations, standard_monitors, MagneticSetup,
    MonitorDrift,
};
use nilflow::group::NilpotentGroup;
use nilflow::liealg::{Cocycle2, Family, LieAlgebra};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest dimension the page accepts; keeps every call interactive.
pub const MAX_DIM: usize = 12;

fn algebra(family: &str, n: usize) -> Result<LieAlgebra, String> {
    if !(3..=MAX_DIM).contains(&n) {
        return Err(format!("dimension must lie in 3..={MAX_DIM}"));
    }
    Ok(match family.parse::<Family>()? {
        Family::Q => LieAlgebra::q_family(n),
        Family::V => LieAlgebra::v_family(n),
    })
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

#[derive(Serialize)]
struct Equation {
    poly: String,
    value: String,
}

#[derive(Serialize)]
struct OrbitReport {
    casimirs: Vec<String>,
    generic_rank: usize,
    orbit_dimension: usize,
    equations: Vec<Equation>,
}

/// Casimir generators of V_n and the coadjoint orbit through `point`.
pub fn orbit_json(n: usize, point: &str) -> Result<String, String> {
    let g = algebra("vn", n)?;
    let p = parse_rat_list(point).map_err(|e| e.to_string())?;
    let basis = casimir_basis(&g, &SamplingConfig::default()).map_err(|e| e.to_string())?;
    let o = classify_orbit(&g, &p).map_err(|e| e.to_string())?;
    Ok(to_json(&OrbitReport {
        casimirs: basis.generators.iter().map(ToString::to_string).collect(),
        generic_rank: basis.generic_rank,
        orbit_dimension: o.dimension,
        equations: o
            .equations
            .iter()
            .map(|e| Equation {
                poly: e.poly.to_string(),
                value: format_rat(&e.value),
            })
            .collect(),
    }))
}

#[derive(Serialize)]
struct FlowReport {
    times: Vec<f64>,
    states: Vec<Vec<f64>>,
    drift: Vec<MonitorDrift>,
}

/// Magnetic Euler flow on V_n* with H = ½|x|² and the cocycle that
/// extends V_n to V_{n+1}. Every `stride`-th state is returned.
pub fn magnetic_flow_json(
    n: usize,
    x0: &str,
    charge: &str,
    dt: f64,
    steps: usize,
    stride: usize,
) -> Result<String, String> {
    let g = algebra("vn", n)?;
    let x0 = x0
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("x0: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if steps > 200_000 {
        return Err("at most 200000 steps".into());
    }
    let h = identity_hamiltonian(n);
    let charge = parse_rat(charge).map_err(|e| e.to_string())?;
    let setup = MagneticSetup::new(g, h.clone(), Cocycle2::v_tower(n), charge)
        .map_err(|e| e.to_string())?;
    let system = magnetic_field_equations(&setup).map_err(|e| e.to_string())?;
    let traj = integrate(&system, &x0, dt, steps, &standard_monitors(&h, &[]))
        .map_err(|e| e.to_string())?;
    let stride = stride.max(1);
    let keep = |i: &usize| i.is_multiple_of(stride) || *i == steps;
    Ok(to_json(&FlowReport {
        times: (0..=steps).filter(keep).map(|i| traj.times[i]).collect(),
        states: (0..=steps)
            .filter(keep)
            .map(|i| traj.states[i].clone())
            .collect(),
        drift: traj.drift_summary(),
    }))
}

/// BCH product u·v in the simply connected group of Q_n or V_n.
pub fn bch_json(family: &str, n: usize, u: &str, v: &str) -> Result<String, String> {
    let g = algebra(family, n)?;
    let u = parse_rat_list(u).map_err(|e| e.to_string())?;
    let v = parse_rat_list(v).map_err(|e| e.to_string())?;
    let grp = NilpotentGroup::new(&g).map_err(|e| e.to_string())?;
    let p = grp.mul(&u, &v).map_err(|e| e.to_string())?;
    Ok(to_json(&p.iter().map(format_rat).collect::<Vec<_>>()))
}

#[wasm_bindgen]
pub fn orbit(n: usize, point: &str) -> Result<String, JsValue> {
    orbit_json(n, point).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn magnetic_flow(
    n: usize,
    x0: &str,
    charge: &str,
    dt: f64,
    steps: usize,
    stride: usize,
) -> Result<String, JsValue> {
    magnetic_flow_json(n, x0, charge, dt, steps, stride).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bch(family: &str, n: usize, u: &str, v: &str) -> Result<String, JsValue> {
    bch_json(family, n, u, v).map_err(|e| JsValue::from_str(&e))
}
