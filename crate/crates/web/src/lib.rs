//! Browser bindings. Every export returns a JSON string; failures come back
//! as `{"error": "..."}` so the page never has to catch exceptions.

use kitaev_cylinder::edge::{detect_zero_modes, splitting_sweep};
use kitaev_cylinder::fourier::{build_block, k_values};
use kitaev_cylinder::hamiltonian::build_majorana;
use kitaev_cylinder::{CouplingParams, LatticeSpec, Result};
use serde::Serialize;
use wasm_bindgen::prelude::*;

// keeps dense diagonalizations interactive in the page
const MAX_SIDE: usize = 40;
const MAX_POINTS: usize = 400;

#[derive(Serialize)]
struct Band {
    k: f64,
    energies: Vec<f64>,
}

fn lattice(rows: usize, cols: usize) -> std::result::Result<LatticeSpec, String> {
    if rows > MAX_SIDE || cols > MAX_SIDE {
        return Err(format!("the demo is limited to {MAX_SIDE} rows and columns"));
    }
    LatticeSpec::new(rows, cols).map_err(|e| e.to_string())
}

fn respond<T: Serialize>(value: std::result::Result<T, String>) -> String {
    let value = value.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()));
    value.unwrap_or_else(|e| serde_json::json!({ "error": e }).to_string())
}

fn core<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Lowest single-particle energy and gap along a `mu` grid at fixed `t`, `delta`.
#[wasm_bindgen]
pub fn sweep_mu(rows: usize, cols: usize, t: f64, delta: f64, mu_start: f64, mu_stop: f64, points: usize) -> String {
    respond((|| {
        let spec = lattice(rows, cols)?;
        if !(2..=MAX_POINTS).contains(&points) {
            return Err(format!("points must be between 2 and {MAX_POINTS}"));
        }
        let step = (mu_stop - mu_start) / (points - 1) as f64;
        let grid: Vec<_> = (0..points).map(|i| CouplingParams::new(t, delta, mu_start + step * i as f64)).collect();
        core(splitting_sweep(&spec, &grid, 1))
    })())
}

/// Zero-mode count, row-weight profiles, gap and splitting.
#[wasm_bindgen]
pub fn zero_modes(rows: usize, cols: usize, t: f64, delta: f64, mu: f64) -> String {
    respond((|| {
        let spec = lattice(rows, cols)?;
        core(detect_zero_modes(&build_majorana(&spec, &CouplingParams::new(t, delta, mu)), None))
    })())
}

/// Signed energies of every momentum block, one entry per allowed `K`.
#[wasm_bindgen]
pub fn fourier_bands(rows: usize, cols: usize, t: f64, delta: f64, mu: f64) -> String {
    respond((|| {
        let spec = lattice(rows, cols)?;
        let p = CouplingParams::new(t, delta, mu);
        core(k_values(cols))?
            .into_iter()
            .map(|k| Ok(Band { k, energies: core(build_block(&spec, &p, k).and_then(|b| b.energies()))? }))
            .collect::<std::result::Result<Vec<_>, String>>()
    })())
}
