//! Small-size invariant suite behind `fockvortex selftest`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI, SQRT_2};
use std::time::Instant;

use fockvortex::gauss_hermite::GaussHermiteRule;
use fockvortex::special::hermite_function;
use fockvortex::wigner::wigner_fock_diagonal;
use fockvortex::{
    closed_form_diagnostic, evaluate_field, make_tmss, partial_transpose, state_log_negativity,
    state_to_density, total_photon_distribution, BeamSplitter, Complex64, FockPair, Mode,
    PhasePoint, PrefactorConvention, QuadratureGrid, SqueezeParams, Tolerances, TwoModeState,
    WignerOperator, WignerRule,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::manifest::{hash_json, RunManifest, TaskRecord, TaskStatus};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub wall_time_s: f64,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "{} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

type Check = (&'static str, fn(&BeamSplitter) -> Result<String, String>);

const CHECKS: &[Check] = &[
    ("hermite-recurrence", hermite_recurrence),
    ("laguerre-wigner-kernel", laguerre_kernel),
    ("gauss-hermite-moments", gauss_hermite_moments),
    ("bs-unitarity", bs_unitarity),
    ("bs-photon-conservation", bs_photon_conservation),
    ("bs-double-application", bs_double_application),
    ("oracle-equivalence", oracle_equivalence),
    ("wigner-normalization", wigner_normalization),
    ("wigner-marginal", wigner_marginal),
    ("wigner-bound", wigner_bound),
    ("pt-involution", pt_involution),
    ("pt-trace-hermitian", pt_trace_hermitian),
    ("logneg-bell", logneg_bell),
    ("logneg-mode-symmetry", logneg_mode_symmetry),
    ("logneg-local-phase", logneg_local_phase),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs every check. `inject_fault` swaps in a splitter with a flipped
/// phase, which the oracle comparison must catch.
pub fn run(inject_fault: bool) -> Vec<CheckResult> {
    let splitter = if inject_fault {
        BeamSplitter::flipped_phase()
    } else {
        BeamSplitter::STANDARD
    };
    CHECKS
        .iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let (passed, detail) = match f(&splitter) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                name,
                passed,
                detail,
                wall_time_s: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

pub fn to_manifest(results: &[CheckResult], inject_fault: bool) -> RunManifest {
    let mut m = RunManifest::new(
        "selftest",
        hash_json(&serde_json::json!({ "inject_fault": inject_fault })),
    );
    m.tasks = results
        .iter()
        .map(|c| TaskRecord {
            id: c.name.to_string(),
            task_hash: hash_json(&c.name),
            status: if c.passed {
                TaskStatus::Ok
            } else {
                TaskStatus::InvariantFailed
            },
            outputs: Vec::new(),
            wall_time_s: c.wall_time_s,
            message: Some(c.detail.clone()),
            summary: BTreeMap::new(),
        })
        .collect();
    m
}

fn ensure(ok: bool, detail: String) -> Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn vortex(splitter: &BeamSplitter, r: f64, n: usize) -> TwoModeState {
    splitter.apply(&make_tmss(SqueezeParams::new(r, n).expect("valid")).expect("valid"))
}

fn random_state(rng: &mut StdRng) -> TwoModeState {
    let cutoff = rng.gen_range(1..=10);
    let mut amps = Vec::new();
    for na in 0..=cutoff {
        for nb in 0..=cutoff - na {
            if rng.gen_bool(0.6) {
                amps.push((
                    FockPair::new(na, nb),
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                ));
            }
        }
    }
    amps.push((FockPair::new(0, cutoff), Complex64::new(0.3, 0.1)));
    TwoModeState::from_amplitudes(cutoff, amps).expect("non-zero")
}

fn hermite_recurrence(_: &BeamSplitter) -> Result<String, String> {
    // mpmath at 30 digits
    let refs = [
        (5, 0.3, 0.36800483977807167325),
        (5, -2.1, -0.10310425227735398572),
        (12, 0.3, 0.025365255687101475012),
        (12, -2.1, -0.27054871982395711085),
        (50, 3.7, -0.051686678508137491492),
    ];
    let worst = refs
        .iter()
        .map(|&(n, x, want)| (hermite_function(n, x) - want).abs())
        .fold(0.0, f64::max);
    ensure(
        worst < 1e-13,
        format!("max deviation {worst:.2e} over {} points", refs.len()),
    )
}

fn laguerre_kernel(_: &BeamSplitter) -> Result<String, String> {
    let d = (wigner_fock_diagonal(3, 0.7) + 0.110_101_270_139_797_582_15).abs();
    ensure(d < 1e-12, format!("W_3(q²=0.7) deviation {d:.2e}"))
}

fn gauss_hermite_moments(_: &BeamSplitter) -> Result<String, String> {
    let rule = GaussHermiteRule::new(10);
    let got = rule.integrate_weighted(|t| t.powi(4));
    let want = 0.75 * PI.sqrt();
    let d = (got - want).abs();
    ensure(d < 1e-13, format!("fourth moment deviation {d:.2e}"))
}

fn bs_unitarity(splitter: &BeamSplitter) -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0xb5);
    let worst = (0..50)
        .map(|_| (splitter.apply(&random_state(&mut rng)).norm_sqr() - 1.0).abs())
        .fold(0.0, f64::max);
    ensure(
        worst < 1e-12,
        format!("max |‖ψ′‖² − 1| = {worst:.2e} over 50 states"),
    )
}

fn bs_photon_conservation(splitter: &BeamSplitter) -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0xc0);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let s = random_state(&mut rng);
        let before = total_photon_distribution(&s);
        let after = total_photon_distribution(&splitter.apply(&s));
        for (n, p) in &before {
            worst = worst.max((p - after.get(n).copied().unwrap_or(0.0)).abs());
        }
    }
    ensure(
        worst < 1e-12,
        format!("max distribution deviation {worst:.2e}"),
    )
}

fn bs_double_application(splitter: &BeamSplitter) -> Result<String, String> {
    // two passes map |a, b⟩ to i^{a+b} |b, a⟩
    let s = vortex(splitter, 0.6, 3).phase_rotate(Mode::A, 0.4);
    let twice = splitter.apply(&splitter.apply(&s));
    let want = s
        .swap_modes()
        .phase_rotate(Mode::A, PI / 2.0)
        .phase_rotate(Mode::B, PI / 2.0);
    let d = twice.max_amplitude_distance(&want);
    ensure(d < 1e-12, format!("max amplitude deviation {d:.2e}"))
}

fn oracle_equivalence(splitter: &BeamSplitter) -> Result<String, String> {
    let tol = Tolerances::DEFAULT;
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    for r in [0.1, 0.5, 1.0] {
        for n in 1..=4 {
            let params = SqueezeParams::new(r, n).expect("valid");
            let d = closed_form_diagnostic(params, PrefactorConvention::PerPair, *splitter, &tol)
                .map_err(|e| e.to_string())?;
            worst = worst.max(d.max_deviation);
            if !d.agrees {
                failed.push(format!("(r={r}, N={n})"));
            }
        }
    }
    ensure(
        failed.is_empty(),
        if failed.is_empty() {
            format!("12 grid points agree, max deviation {worst:.2e}")
        } else {
            format!(
                "closed form disagrees at {}; max deviation {worst:.2e}",
                failed.join(" ")
            )
        },
    )
}

fn wigner_normalization(splitter: &BeamSplitter) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        let s = vortex(splitter, 0.8, n);
        let (_, total) = WignerOperator::from_state(&s)
            .integrate(&WignerRule::gauss_hermite(24).axis(s.cutoff()));
        worst = worst.max((total - 1.0).abs());
    }
    ensure(
        worst < 1e-10,
        format!("max |∫W − 1| = {worst:.2e} for N = 1..4"),
    )
}

fn wigner_marginal(splitter: &BeamSplitter) -> Result<String, String> {
    let s = vortex(splitter, 0.7, 3);
    let op = WignerOperator::from_state(&s);
    let scaled = QuadratureGrid::square(1.2 * SQRT_2, 5).expect("valid");
    let field = evaluate_field(&s, &scaled);
    let mut worst: f64 = 0.0;
    for j in 0..5 {
        for i in 0..5 {
            let (x, y) = (scaled.x(i) / SQRT_2, scaled.y(j) / SQRT_2);
            worst = worst.max((op.position_marginal(x, y) - 2.0 * field.at(i, j).norm_sqr()).abs());
        }
    }
    ensure(
        worst < 1e-6,
        format!("max marginal deviation {worst:.2e} at 25 points"),
    )
}

fn wigner_bound(splitter: &BeamSplitter) -> Result<String, String> {
    let op = WignerOperator::from_state(&vortex(splitter, 1.2, 4));
    let mut rng = StdRng::seed_from_u64(0x3d);
    let worst = (0..400)
        .map(|_| {
            let mut c = || rng.gen_range(-2.5..2.5);
            op.eval(&PhasePoint::new(c(), c(), c(), c())).abs()
        })
        .fold(0.0, f64::max);
    ensure(
        worst <= 4.0 / (PI * PI) + 1e-9,
        format!("max |W| = {worst:.6} (bound {:.6})", 4.0 / (PI * PI)),
    )
}

fn pt_involution(splitter: &BeamSplitter) -> Result<String, String> {
    let rho = state_to_density(&vortex(splitter, 0.9, 3));
    let ok = [Mode::A, Mode::B]
        .iter()
        .all(|&m| partial_transpose(&partial_transpose(&rho, m).undo(), m).undo() == rho);
    ensure(ok, "transposing twice restores ρ for both modes".into())
}

fn pt_trace_hermitian(splitter: &BeamSplitter) -> Result<String, String> {
    let pt = partial_transpose(&state_to_density(&vortex(splitter, 0.9, 4)), Mode::A);
    let herm = pt.hermiticity_defect();
    let trace = (pt.trace() - 1.0).norm();
    ensure(
        herm < 1e-12 && trace < 1e-10,
        format!("hermiticity defect {herm:.2e}, |tr − 1| = {trace:.2e}"),
    )
}

fn logneg_bell(_: &BeamSplitter) -> Result<String, String> {
    let bell = TwoModeState::from_amplitudes(
        2,
        [
            (FockPair::new(0, 0), Complex64::new(FRAC_1_SQRT_2, 0.0)),
            (FockPair::new(1, 1), Complex64::new(FRAC_1_SQRT_2, 0.0)),
        ],
    )
    .expect("valid");
    let l = state_log_negativity(&bell, Mode::A)
        .map_err(|e| e.to_string())?
        .log_negativity;
    ensure((l - 1.0).abs() < 1e-9, format!("ℒ = {l}"))
}

fn logneg_mode_symmetry(splitter: &BeamSplitter) -> Result<String, String> {
    let s = vortex(splitter, 1.0, 4);
    let a = state_log_negativity(&s, Mode::A)
        .map_err(|e| e.to_string())?
        .log_negativity;
    let b = state_log_negativity(&s, Mode::B)
        .map_err(|e| e.to_string())?
        .log_negativity;
    let tmss = state_log_negativity(
        &make_tmss(SqueezeParams::new(0.3, 4).expect("valid")).expect("valid"),
        Mode::A,
    )
    .map_err(|e| e.to_string())?
    .log_negativity;
    ensure(
        (a - b).abs() < 1e-10 && tmss > 0.0 && tmss < 2.0 * 0.3 / LN_2,
        format!("ℒ_a − ℒ_b = {:.2e}", a - b),
    )
}

fn logneg_local_phase(splitter: &BeamSplitter) -> Result<String, String> {
    let s = vortex(splitter, 0.8, 3);
    let a = state_log_negativity(&s, Mode::A)
        .map_err(|e| e.to_string())?
        .log_negativity;
    let b = state_log_negativity(&s.phase_rotate(Mode::A, 0.7), Mode::A)
        .map_err(|e| e.to_string())?
        .log_negativity;
    ensure(
        (a - b).abs() < 1e-10,
        format!("change under local phase {:.2e}", (a - b).abs()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_build_passes_every_check() {
        let results = run(false);
        let failed: Vec<String> = results
            .iter()
            .filter(|c| !c.passed)
            .map(CheckResult::line)
            .collect();
        assert!(failed.is_empty(), "{failed:?}");
        assert_eq!(results.len(), check_names().len());
    }

    #[test]
    fn injected_fault_is_caught_by_name() {
        let results = run(true);
        let oracle = results
            .iter()
            .find(|c| c.name == "oracle-equivalence")
            .unwrap();
        assert!(!oracle.passed, "{}", oracle.detail);
        assert_eq!(
            to_manifest(&results, true).exit_code(),
            crate::error::EXIT_INVARIANT
        );
    }
}
