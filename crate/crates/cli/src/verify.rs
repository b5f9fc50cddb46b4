//! The `verify` command: every oracle invariant, grouped into families.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::io::Write;

use coupled_tilt::coherent::{
    displacement_su11_with, displacement_su2_with, su11_oracle_residual, su2_oracle_residual,
    TiltParams,
};
use coupled_tilt::fock::Interior;
use coupled_tilt::hamiltonian::{
    build_hamiltonian, eigenfunction_gram, error_law_exponent, hermitian_eigenvalues,
    tilt_parameters, tilted_hamiltonian_exact, ModelParams, TiltedFrame, LEAKAGE_BUFFER,
    LEAKAGE_THRESHOLD,
};
use coupled_tilt::lie::{su11_one_boson, su11_two_boson, su2_generators, GeneratorSet};
use coupled_tilt::similarity::{
    conjugate_su11, conjugate_su2, oracle_residual, GeneratorLabel, GeneratorMatrices,
};
use coupled_tilt::statistics::{
    expectation_table, expectation_table_oracle, g2_weak, mandel_q_weak, mean_n_weak,
    StatisticsOracle,
};
use coupled_tilt::{Mode, OperatorMatrix, QuantumNumbers, Result, C64};

use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::tables::format_float;

pub const VERIFY_HEADER: [&str; 5] = ["family", "status", "max_residual", "tolerance", "detail"];

/// Accepted window for the fitted weak-coupling error exponent.
pub const ERROR_LAW_WINDOW: (f64, f64) = (1.8, 2.2);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Reported but not gating.
    Info,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyResult {
    pub family: &'static str,
    pub status: Status,
    pub max_residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl FamilyResult {
    fn gated(family: &'static str, max_residual: f64, tolerance: f64, detail: String) -> Self {
        let status = if max_residual <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            family,
            status,
            max_residual,
            tolerance,
            detail,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub families: Vec<FamilyResult>,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(|f| f.status != Status::Fail)
    }

    pub fn family(&self, name: &str) -> Option<&FamilyResult> {
        self.families.iter().find(|f| f.family == name)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(VERIFY_HEADER)?;
        for f in &self.families {
            w.write_record([
                f.family,
                f.status.label(),
                &format_float(f.max_residual),
                &format_float(f.tolerance),
                &f.detail,
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Worst value and the label of the case that produced it.
#[derive(Default)]
struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn push(&mut self, value: f64, at: impl FnOnce() -> String) {
        // a NaN sticks so that it cannot hide behind a later maximum
        if self.value.is_nan() {
            return;
        }
        if value.is_nan() || value > self.value || self.at.is_empty() {
            self.value = value;
            self.at = at();
        }
    }
}

fn worst_detail(w: &Worst, cases: usize) -> String {
    format!("{cases} cases; worst at {}", w.at)
}

/// Tilts for the closed-form similarity certification. `theta = 3pi/2`
/// pins the `sin(theta) = -1` signs; the last phase pair is asymmetric.
pub fn similarity_grid() -> Vec<TiltParams> {
    let mut out = Vec::new();
    for tau in [0.0, 0.05, 0.1254, 0.3] {
        for theta in [0.0, FRAC_PI_2, 3.0 * FRAC_PI_2] {
            for (phi_xi, phi_theta) in [(0.0, 0.0), (FRAC_PI_3, FRAC_PI_3), (PI, PI), (FRAC_PI_3, PI)] {
                out.push(TiltParams::new(tau, phi_xi, theta, phi_theta));
            }
        }
    }
    out
}

/// Tilts for the coherent-state expansions. The su(2) expansion is a
/// half-angle formula, so `theta` stays below `pi`.
pub fn coherent_grid() -> Vec<TiltParams> {
    let mut out = Vec::new();
    for tau in [0.05, 0.1254] {
        for phi in [0.0, FRAC_PI_3] {
            out.push(TiltParams::new(tau, phi, FRAC_PI_2, phi));
        }
    }
    out.push(TiltParams::new(0.1254, FRAC_PI_3, FRAC_PI_2, 0.0));
    out
}

fn single_interior(cutoff: usize) -> Interior {
    Interior::up_to((cutoff / 2).saturating_sub(2))
}

fn chain_interior(cutoff: usize) -> Interior {
    Interior::up_to(cutoff / 3)
}

fn family_commutators(params: &ModelParams) -> Result<FamilyResult> {
    let basis = params.basis();
    let inner = Interior::with_buffer(&basis, LEAKAGE_BUFFER);
    let mut worst = Worst::default();
    let sets = [
        su2_generators(basis),
        su11_two_boson(basis),
        su11_one_boson(basis, Mode::A),
        su11_one_boson(basis, Mode::B),
    ];
    for set in &sets {
        for (i, d) in set.commutator_defects().iter().enumerate() {
            worst.push(d.interior_max_abs(&inner), || format!("{:?} relation {i}", set.realization));
        }
    }
    Ok(FamilyResult::gated("commutators", worst.value, 1e-9, worst_detail(&worst, 12)))
}

fn family_casimirs(params: &ModelParams) -> Result<FamilyResult> {
    let basis = params.basis();
    let inner = Interior::with_buffer(&basis, LEAKAGE_BUFFER);
    let mut worst = Worst::default();
    let mut check = |set: &GeneratorSet, expected: OperatorMatrix| {
        let d = set.casimir.interior_distance(&expected, &inner);
        worst.push(d, || format!("{:?}", set.realization));
    };
    check(
        &su2_generators(basis),
        OperatorMatrix::diagonal(basis, |na, nb| {
            let n = (na + nb) as f64;
            n * (n + 2.0) / 4.0
        }),
    );
    check(
        &su11_two_boson(basis),
        OperatorMatrix::diagonal(basis, |na, nb| {
            let m = na as f64 - nb as f64;
            (m * m - 1.0) / 4.0
        }),
    );
    for mode in [Mode::A, Mode::B] {
        check(
            &su11_one_boson(basis, mode),
            OperatorMatrix::identity(basis).scale_real(-3.0 / 16.0),
        );
    }
    Ok(FamilyResult::gated("casimirs", worst.value, 1e-9, worst_detail(&worst, 4)))
}

fn family_unitarity(params: &ModelParams) -> Result<FamilyResult> {
    let basis = params.basis();
    let (k, j) = (su11_two_boson(basis), su2_generators(basis));
    let id = OperatorMatrix::identity(basis);
    let mut worst = Worst::default();
    let mut tilts = similarity_grid();
    tilts.push(tilt_parameters(params));
    for (i, t) in tilts.iter().enumerate() {
        for (name, d) in [("D(xi)", displacement_su11_with(&k, t)?), ("D(chi)", displacement_su2_with(&j, t)?)] {
            let defect = (&(&d.adjoint() * &d) - &id).max_abs();
            worst.push(defect, || format!("{name} tilt #{i}"));
        }
    }
    Ok(FamilyResult::gated("unitarity", worst.value, 1e-10, worst_detail(&worst, 2 * tilts.len())))
}

fn family_similarity(params: &ModelParams) -> Result<FamilyResult> {
    use GeneratorLabel::*;
    let basis = params.basis();
    let (k, j) = (su11_two_boson(basis), su2_generators(basis));
    let mats = GeneratorMatrices::new(basis);
    let inner = single_interior(params.cutoff);
    let per_tilt = similarity_grid()
        .par_iter()
        .enumerate()
        .map(|(i, t)| -> Result<Vec<(f64, String)>> {
            let d_xi = displacement_su11_with(&k, t)?;
            let d_chi = displacement_su2_with(&j, t)?;
            let mut out = Vec::new();
            for label in [K0, KPlus, KMinus, J0, JPlus, JMinus] {
                let r = oracle_residual(&mats, label, &conjugate_su11(label, t)?, &d_xi, &inner);
                out.push((r, format!("{label} under D(xi), tilt #{i}")));
            }
            for label in GeneratorLabel::GENERATORS {
                let r = oracle_residual(&mats, label, &conjugate_su2(label, t)?, &d_chi, &inner);
                out.push((r, format!("{label} under D(chi), tilt #{i}")));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut worst = Worst::default();
    let mut cases = 0;
    for (r, at) in per_tilt.into_iter().flatten() {
        worst.push(r, || at);
        cases += 1;
    }
    Ok(FamilyResult::gated("similarity", worst.value, 1e-9, worst_detail(&worst, cases)))
}

fn family_coherent_states(params: &ModelParams, nmax: u32) -> Result<FamilyResult> {
    let basis = params.basis();
    let (k, j) = (su11_two_boson(basis), su2_generators(basis));
    let inner = single_interior(params.cutoff);
    let mut worst = Worst::default();
    let mut cases = 0;
    let states: Vec<_> = QuantumNumbers::grid(nmax.min(6))
        .into_iter()
        .filter(|q| {
            let (na, nb) = q.occupations();
            inner.contains(na as usize, nb as usize)
        })
        .collect();
    for (i, t) in coherent_grid().iter().enumerate() {
        let d_xi = displacement_su11_with(&k, t)?;
        let d_chi = displacement_su2_with(&j, t)?;
        for &q in &states {
            worst.push(su11_oracle_residual(&d_xi, t, q, &inner)?, || format!("su(1,1) {q}, tilt #{i}"));
            worst.push(su2_oracle_residual(&d_chi, t, q)?, || format!("su(2) {q}, tilt #{i}"));
            cases += 2;
        }
    }
    Ok(FamilyResult::gated("coherent-states", worst.value, 1e-9, worst_detail(&worst, cases)))
}

fn phase_variants(params: &ModelParams) -> Vec<ModelParams> {
    let mut out = vec![*params];
    if (params.psi - FRAC_PI_3).abs() > 1e-12 {
        out.push(ModelParams { psi: FRAC_PI_3, ..*params });
    }
    out
}

fn family_tilt_identity(params: &ModelParams) -> Result<FamilyResult> {
    let inner = chain_interior(params.cutoff);
    let mut worst = Worst::default();
    let variants = phase_variants(params);
    for p in &variants {
        let frame = TiltedFrame::new(p)?;
        let direct = frame.conjugate(&build_hamiltonian(p));
        let d = direct.interior_distance(&tilted_hamiltonian_exact(p), &inner);
        worst.push(d, || format!("psi={}", p.psi));
    }
    Ok(FamilyResult::gated("tilt-identity", worst.value, 1e-9, worst_detail(&worst, variants.len())))
}

fn family_spectrum(params: &ModelParams) -> Result<FamilyResult> {
    let full = hermitian_eigenvalues(&build_hamiltonian(params))?;
    let tilted = hermitian_eigenvalues(&tilted_hamiltonian_exact(params))?;
    let mut worst = Worst::default();
    for i in 0..6.min(full.len()) {
        worst.push((full[i] - tilted[i]).abs(), || format!("eigenvalue #{i}"));
    }
    Ok(FamilyResult::gated("spectrum", worst.value, 1e-6, worst_detail(&worst, 6)))
}

fn family_expectations(params: &ModelParams, nmax: u32) -> Result<FamilyResult> {
    let mats = GeneratorMatrices::new(params.basis());
    let mut worst = Worst::default();
    let grid = QuantumNumbers::grid(nmax);
    for &q in &grid {
        let d = expectation_table(q).max_distance(&expectation_table_oracle(&mats, q)?);
        worst.push(d, || q.to_string());
    }
    Ok(FamilyResult::gated("expectation-table", worst.value, 1e-12, worst_detail(&worst, grid.len())))
}

fn family_eigenfunctions() -> Result<FamilyResult> {
    let states = QuantumNumbers::grid(4);
    let gram = eigenfunction_gram(&states);
    let mut worst = Worst::default();
    for i in 0..states.len() {
        for j in 0..states.len() {
            let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst.push((gram[(i, j)] - target).norm(), || format!("<{}|{}>", states[i], states[j]));
        }
    }
    Ok(FamilyResult::gated("eigenfunction-gram", worst.value, 1e-7, worst_detail(&worst, states.len().pow(2))))
}

fn defined_gap(a: Option<f64>, b: Option<f64>) -> f64 {
    match (a, b) {
        (Some(x), Some(y)) => (x - y).abs(),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    }
}

/// Oracle statistics against the closed forms, mode symmetry, the g2
/// identity and phase independence.
fn families_statistics(params: &ModelParams, nmax: u32, report: &mut VerifyReport) -> Result<()> {
    let grid = QuantumNumbers::grid(nmax);
    let variants = phase_variants(params);
    let oracles = variants
        .iter()
        .map(StatisticsOracle::new)
        .collect::<Result<Vec<_>>>()?;
    let mut agree = Worst::default();
    let mut modes = Worst::default();
    let mut identity = Worst::default();
    let mut phase = Worst::default();
    let mut leak = Worst::default();
    for &q in &grid {
        let closed = mandel_q_weak(params, q);
        if let (Some(qw), Some(gw)) = (closed, g2_weak(params, q)) {
            let mean = mean_n_weak(params, q);
            identity.push((gw - (qw / mean + 1.0)).abs(), || format!("closed form {q}"));
        }
        let mut per_phase = Vec::new();
        for (o, p) in oracles.iter().zip(&variants) {
            let a = o.report(q, Mode::A)?;
            let b = o.report(q, Mode::B)?;
            leak.push(a.leakage, || format!("{q} at cutoff {}", p.cutoff));
            for r in [&a, &b] {
                agree.push(defined_gap(r.mandel_q, closed), || {
                    format!("{q} mode {} psi={}", r.mode.label(), p.psi)
                });
                if let (Some(qo), Some(go)) = (r.mandel_q, r.g2) {
                    identity.push((go - (qo / r.mean_n + 1.0)).abs(), || format!("oracle {q}"));
                }
            }
            modes.push(defined_gap(a.mandel_q, b.mandel_q), || format!("Q {q} psi={}", p.psi));
            modes.push(defined_gap(a.g2, b.g2), || format!("g2 {q} psi={}", p.psi));
            per_phase.push(a.mandel_q);
        }
        for other in per_phase.iter().skip(1) {
            phase.push(defined_gap(per_phase[0], *other), || q.to_string());
        }
    }
    let n = grid.len();
    report.families.push(FamilyResult::gated("statistics-oracle", agree.value, 1e-6, worst_detail(&agree, n)));
    report.families.push(FamilyResult::gated("mode-symmetry", modes.value, 1e-9, worst_detail(&modes, n)));
    report.families.push(FamilyResult::gated("g2-identity", identity.value, 1e-10, worst_detail(&identity, n)));
    report.families.push(FamilyResult::gated("psi-invariance", phase.value, 1e-9, worst_detail(&phase, n)));
    let leakage = FamilyResult::gated(
        "leakage",
        leak.value,
        LEAKAGE_THRESHOLD,
        format!(
            "weight outside occupation {} over {n} states; worst {}",
            params.cutoff.saturating_sub(LEAKAGE_BUFFER),
            leak.at
        ),
    );
    if leakage.status == Status::Fail {
        report.warnings.push(format!(
            "truncation leakage {:e} for {} exceeds {:e}; increase --cutoff",
            leak.value, leak.at, LEAKAGE_THRESHOLD
        ));
    }
    report.families.push(leakage);
    Ok(())
}

fn family_error_law(params: &ModelParams) -> FamilyResult {
    let (lo, hi) = ERROR_LAW_WINDOW;
    match error_law_exponent(1.0, (0.02, 0.01), 4, params.cutoff) {
        Ok(p) => FamilyResult {
            family: "error-law",
            status: Status::Info,
            max_residual: p,
            tolerance: hi,
            detail: format!(
                "fitted exponent p={p:.4} at omega=1, lambda 0.02 -> 0.01; window [{lo}, {hi}] {}",
                if (lo..=hi).contains(&p) { "met" } else { "not met" }
            ),
        },
        Err(e) => FamilyResult {
            family: "error-law",
            status: Status::Info,
            max_residual: f64::NAN,
            tolerance: hi,
            detail: format!("skipped: {e}"),
        },
    }
}

fn record(report: &mut VerifyReport, family: &'static str, r: Result<FamilyResult>) {
    report.families.push(r.unwrap_or_else(|e| FamilyResult {
        family,
        status: Status::Fail,
        max_residual: f64::NAN,
        tolerance: f64::NAN,
        detail: e.to_string(),
    }));
}

pub fn run_verify(config: &SweepConfig) -> Result<VerifyReport> {
    let params = config.params()?;
    let mut report = VerifyReport::default();
    record(&mut report, "commutators", family_commutators(&params));
    record(&mut report, "casimirs", family_casimirs(&params));
    record(&mut report, "unitarity", family_unitarity(&params));
    record(&mut report, "similarity", family_similarity(&params));
    record(&mut report, "coherent-states", family_coherent_states(&params, config.nmax));
    record(&mut report, "tilt-identity", family_tilt_identity(&params));
    record(&mut report, "spectrum", family_spectrum(&params));
    record(&mut report, "expectation-table", family_expectations(&params, config.nmax));
    record(&mut report, "eigenfunction-gram", family_eigenfunctions());
    if let Err(e) = families_statistics(&params, config.nmax, &mut report) {
        record(&mut report, "statistics-oracle", Err(e));
    }
    report.families.push(family_error_law(&params));
    Ok(report)
}
