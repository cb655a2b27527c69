//! Command dispatch: runs one analysis and renders its report.

use std::io::Write;

use serde::Serialize;

use crate::edge::{self, SweepRow, ZeroModeReport};
use crate::error::{Error, Result};
use crate::fock::{self, Level};
use crate::fourier::{self, BlockReport};
use crate::hamiltonian::{build_majorana, representation_equivalence, CouplingParams, QuadraticForm};
use crate::io::{csv_table, fmt_f64, to_json, Command, Format, RunConfig};
use crate::lattice::LatticeSpec;
use crate::pseudospin::{self, AlgebraReport, ExpectationRow, ParticleHoleReport, PhiTildeSummary, PseudospinSet, QuantumNumbers};
use crate::tolerances;

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub epsilons: Vec<f64>,
    pub full: Vec<f64>,
    pub ground_energy: f64,
    pub offset: f64,
    /// Deviation between the Nambu and Majorana `±ε` spectra.
    pub representation_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub points: Vec<SweepRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub dimension: usize,
    pub ground_energy: f64,
    pub quadratic_ground_energy: f64,
    /// Degenerate levels; empty above the dense-diagonalization limit.
    pub levels: Vec<Level>,
    pub occupation_deviation: Option<f64>,
    /// `‖[d_M, H]‖_max` at the sweet spot.
    pub edge_mode_commutator: Option<f64>,
    /// `‖[J^x, H]‖_max` at the sweet spot, `M >= 2`.
    pub jx_commutator: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PseudospinReport {
    pub algebra: AlgebraReport,
    pub particle_hole: ParticleHoleReport,
    pub quantum_numbers: Vec<QuantumNumbers>,
    pub phi_tilde: [PhiTildeSummary; 2],
    pub states: Vec<ExpectationRow>,
}

#[derive(Debug, Clone)]
pub enum Report {
    Spectrum(SpectrumReport),
    Blocks(BlockReport),
    ZeroModes(ZeroModeReport),
    Sweep(SweepReport),
    Oracle(OracleReport),
    Pseudospin(PseudospinReport),
}

fn spectrum(spec: &LatticeSpec, p: &CouplingParams) -> Result<SpectrumReport> {
    let eq = representation_equivalence(spec, p)?;
    Ok(SpectrumReport {
        epsilons: eq.majorana.epsilons,
        full: eq.majorana.full,
        ground_energy: eq.majorana.ground_energy,
        offset: eq.majorana.offset,
        representation_deviation: eq.spectrum_deviation,
    })
}

fn oracle(spec: &LatticeSpec, p: &CouplingParams) -> Result<OracleReport> {
    let ops = fock::site_operators(spec)?;
    let h = fock::manybody_h(&ops, p);
    let quadratic_ground_energy = build_majorana(spec, p).single_particle_spectrum()?.ground_energy;
    let dense = spec.sites() <= tolerances::DENSE_SITE_LIMIT;
    let (ground_energy, levels, occupation_deviation) = if dense {
        let check = fock::occupation_consistency(spec, p)?;
        let scale = 1.0 + check.manybody.iter().map(|e| e.abs()).fold(0.0, f64::max);
        if check.max_deviation > tolerances::ORACLE_EXPECTATION * scale {
            return Err(Error::invariant("oracle.occupation_sums", check.max_deviation, format!("{}x{} at {p:?}", spec.rows(), spec.cols())));
        }
        (check.manybody[0], fock::cluster_levels(&check.manybody), Some(check.max_deviation))
    } else {
        (fock::ground_energy(&h)?, Vec::new(), None)
    };
    let gap = (ground_energy - quadratic_ground_energy).abs();
    if gap > 1e-9 * (1.0 + ground_energy.abs()) {
        return Err(Error::invariant("oracle.ground_energy", gap, format!("{}x{} at {p:?}", spec.rows(), spec.cols())));
    }
    let (mut edge_mode_commutator, mut jx_commutator) = (None, None);
    if p.is_sweet_spot() {
        let odd = levels.iter().filter(|l| l.multiplicity % 2 == 1).count();
        if odd > 0 {
            return Err(Error::invariant("oracle.degeneracy", odd as f64, "levels with odd multiplicity at the sweet spot"));
        }
        let tol = tolerances::OPERATOR_IDENTITY * p.t.abs().max(1.0);
        let d = ops.mode(&edge::analytic_edge_operator(spec)?);
        let c = fock::commutator_norm(&d, &h)?;
        if c > tol {
            return Err(Error::invariant("oracle.edge_mode_commutator", c, "[d_M, H] != 0"));
        }
        edge_mode_commutator = Some(c);
        if spec.rows() >= 2 {
            let ps = PseudospinSet::fock(&fock::collective_edge_modes(&ops)?);
            let c = fock::commutator_norm(&ps.j[0], &h)?;
            if c > tol {
                return Err(Error::invariant("oracle.jx_commutator", c, "[J^x, H] != 0"));
            }
            jx_commutator = Some(c);
        }
    }
    Ok(OracleReport {
        dimension: h.dim(),
        ground_energy,
        quadratic_ground_energy,
        levels,
        occupation_deviation,
        edge_mode_commutator,
        jx_commutator,
    })
}

fn pseudospin_report(spec: &LatticeSpec, p: &CouplingParams) -> Result<PseudospinReport> {
    let ps = PseudospinSet::two_mode();
    let algebra = pseudospin::algebra_check(&ps, tolerances::OPERATOR_IDENTITY)?;
    let pmap = pseudospin::particle_hole_map(&ps)?;
    let particle_hole = pseudospin::particle_hole_report(&ps, &pmap);
    let worst = particle_hole.s2_to_tau2.max(particle_hole.jx_commutator);
    if worst > tolerances::OPERATOR_IDENTITY {
        return Err(Error::invariant("pseudospin.particle_hole", worst, "P^-1 s^2 P != tau^2 or [J^x, P] != 0"));
    }
    Ok(PseudospinReport {
        algebra,
        particle_hole,
        quantum_numbers: pseudospin::basis_quantum_numbers(&ps)?,
        phi_tilde: pseudospin::phi_tilde_summary(&ps)?,
        states: pseudospin::eigenstate_expectations(spec, p)?,
    })
}

/// Runs the configured analysis.
pub fn execute(config: &RunConfig) -> Result<Report> {
    let spec = config.spec()?;
    Ok(match config.command {
        Command::Spectrum => Report::Spectrum(spectrum(&spec, &config.params()?)?),
        Command::Blocks => Report::Blocks(fourier::verify_block_decomposition(&spec, &config.params()?)?),
        Command::ZeroModes => {
            let form = build_majorana(&spec, &config.params()?);
            let tol = config.tol * (1.0 + form.spectral_norm());
            Report::ZeroModes(edge::detect_zero_modes(&form, Some(tol))?)
        }
        Command::Sweep => Report::Sweep(SweepReport {
            points: edge::splitting_sweep(&spec, &config.grid(), config.jobs)?,
        }),
        Command::Oracle => Report::Oracle(oracle(&spec, &config.params()?)?),
        Command::Pseudospin => Report::Pseudospin(pseudospin_report(&spec, &config.params()?)?),
    })
}

fn csv(report: &Report) -> Vec<u8> {
    match report {
        Report::Spectrum(r) => csv_table(&["index", "epsilon"], r.epsilons.iter().enumerate().map(|(i, e)| vec![i.to_string(), fmt_f64(*e)])),
        Report::Blocks(r) => csv_table(
            &["l", "k", "index", "energy"],
            r.blocks.iter().flat_map(|b| {
                b.energies
                    .iter()
                    .enumerate()
                    .map(move |(i, e)| vec![b.l.to_string(), fmt_f64(b.k), i.to_string(), fmt_f64(*e)])
            }),
        ),
        Report::ZeroModes(r) => csv_table(
            &["mode", "flavor", "row", "weight"],
            r.profiles.iter().enumerate().flat_map(|(i, p)| {
                let flavor = format!("{:?}", p.flavor);
                p.rows
                    .iter()
                    .enumerate()
                    .map(move |(m, w)| vec![i.to_string(), flavor.clone(), (m + 1).to_string(), fmt_f64(*w)])
            }),
        ),
        Report::Sweep(r) => csv_table(
            &["t", "delta", "mu", "splitting", "gap"],
            r.points
                .iter()
                .map(|p| vec![fmt_f64(p.t), fmt_f64(p.delta), fmt_f64(p.mu), fmt_f64(p.splitting), fmt_f64(p.gap)]),
        ),
        Report::Oracle(r) => {
            if r.levels.is_empty() {
                csv_table(&["energy", "multiplicity"], [vec![fmt_f64(r.ground_energy), String::new()]])
            } else {
                csv_table(&["energy", "multiplicity"], r.levels.iter().map(|l| vec![fmt_f64(l.energy), l.multiplicity.to_string()]))
            }
        }
        Report::Pseudospin(r) => csv_table(
            &["energy", "jx", "s2", "tau2", "phi_flag"],
            r.states
                .iter()
                .map(|s| vec![fmt_f64(s.energy), fmt_f64(s.jx), fmt_f64(s.s2), fmt_f64(s.tau2), s.phi_flag.to_string()]),
        ),
    }
}

/// Serializes a report; identical reports give identical bytes.
pub fn render(report: &Report, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => Ok(csv(report)),
        Format::Json => match report {
            Report::Spectrum(r) => to_json(r),
            Report::Blocks(r) => to_json(r),
            Report::ZeroModes(r) => to_json(r),
            Report::Sweep(r) => to_json(r),
            Report::Oracle(r) => to_json(r),
            Report::Pseudospin(r) => to_json(r),
        },
    }
}

#[derive(Serialize)]
struct Failure<'a> {
    error: &'a str,
    invariant: Option<&'a str>,
    deviation: Option<f64>,
    message: String,
}

/// JSON record of a failed run.
pub fn render_error(err: &Error) -> Vec<u8> {
    let failure = match err {
        Error::Invariant { invariant, deviation, .. } => Failure {
            error: "invariant",
            invariant: Some(invariant),
            deviation: Some(*deviation),
            message: err.to_string(),
        },
        Error::NoConvergence { .. } => Failure {
            error: "no_convergence",
            invariant: None,
            deviation: None,
            message: err.to_string(),
        },
        _ => Failure {
            error: "error",
            invariant: None,
            deviation: None,
            message: err.to_string(),
        },
    };
    to_json(&failure).unwrap_or_else(|_| b"{\"error\":\"error\"}\n".to_vec())
}

fn emit(config: &RunConfig, bytes: &[u8]) -> Result<()> {
    match &config.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

/// Runs a configuration end to end and returns the process exit code:
/// 0 on success, 1 on an invariant violation or I/O failure (the failure
/// record is written in place of the report), 2 on a usage error.
pub fn run(config: &RunConfig) -> i32 {
    let outcome = execute(config).and_then(|r| render(&r, config.format));
    match outcome {
        Ok(bytes) => match emit(config, &bytes) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Err(err) => {
            eprintln!("error: {err}");
            let code = err.exit_code();
            if code == 1 {
                let _ = emit(config, &render_error(&err));
            }
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{resolve, Settings};

    fn config(command: Command, pairs: &[(&str, &str)]) -> RunConfig {
        let flags = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        resolve(command, Settings::new(), flags).unwrap()
    }

    #[test]
    fn zero_modes_json_keys() {
        let c = config(Command::ZeroModes, &[("rows", "3"), ("cols", "4")]);
        let bytes = render(&execute(&c).unwrap(), Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(keys, vec!["count", "gap", "profiles", "splitting"]);
        assert_eq!(v["count"], 2);
    }

    #[test]
    fn output_is_deterministic() {
        let c = config(Command::Sweep, &[("rows", "3"), ("cols", "4"), ("mu", "0.8:1.2:5"), ("jobs", "3")]);
        let a = render(&execute(&c).unwrap(), Format::Csv).unwrap();
        let b = render(&execute(&c).unwrap(), Format::Csv).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with(b"t,delta,mu,splitting,gap\n"));
    }

    #[test]
    fn spectrum_csv_sorted() {
        let c = config(Command::Spectrum, &[("rows", "2"), ("cols", "3"), ("mu", "0.4")]);
        let text = String::from_utf8(render(&execute(&c).unwrap(), Format::Csv).unwrap()).unwrap();
        let values: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
        assert_eq!(values.len(), 6);
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn oracle_report_small() {
        let c = config(Command::Oracle, &[("rows", "2"), ("cols", "2")]);
        let Report::Oracle(r) = execute(&c).unwrap() else { panic!() };
        assert_eq!(r.dimension, 16);
        assert!(r.levels.iter().all(|l| l.multiplicity % 2 == 0));
        assert!(r.edge_mode_commutator.unwrap() <= 1e-12);
        assert!(r.jx_commutator.unwrap() <= 1e-12);
    }

    #[test]
    fn invariant_failure_record() {
        let err = Error::invariant("fourier.off_block", 0.25, "test");
        let v: serde_json::Value = serde_json::from_slice(&render_error(&err)).unwrap();
        assert_eq!(v["invariant"], "fourier.off_block");
        assert_eq!(v["deviation"], 0.25);
    }
}
