//! The coupled-oscillator Hamiltonian, its tilted forms, the spectrum and
//! the polar eigenfunctions.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::coherent::{displacement_su11, displacement_su2, TiltParams};
use crate::error::{Error, Result};
use crate::fock::{Interior, OperatorMatrix, StateVector, TwoModeBasis, C64};
use crate::lie::{nm_state, QuantumNumbers};
use crate::similarity::{GeneratorLabel, GeneratorMatrices, OperatorCombo};
use crate::special::{gauss_laguerre, laguerre, ln_factorial};

pub const DEFAULT_CUTOFF: usize = 24;
/// Largest tolerated probability outside `interior(cutoff - LEAKAGE_BUFFER)`.
pub const LEAKAGE_THRESHOLD: f64 = 1e-8;
pub const LEAKAGE_BUFFER: usize = 4;
/// Radial quadrature order in `u = r^2`.
pub const RADIAL_NODES: usize = 200;
pub const ANGULAR_NODES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    pub lambda: f64,
    pub psi: f64,
    pub cutoff: usize,
}

impl ModelParams {
    pub fn new(omega: f64, lambda: f64, psi: f64, cutoff: usize) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!("omega must be positive, got {omega}")));
        }
        if !lambda.is_finite() || lambda < 0.0 || lambda >= omega {
            return Err(Error::CouplingTooStrong { omega, lambda });
        }
        if !psi.is_finite() {
            return Err(Error::InvalidParameter(format!("psi must be finite, got {psi}")));
        }
        TwoModeBasis::new(cutoff)?;
        Ok(Self {
            omega,
            lambda,
            psi,
            cutoff,
        })
    }

    /// `psi = 0` at the default cutoff.
    pub fn with_coupling(omega: f64, lambda: f64) -> Result<Self> {
        Self::new(omega, lambda, 0.0, DEFAULT_CUTOFF)
    }

    pub fn basis(&self) -> TwoModeBasis {
        TwoModeBasis::new(self.cutoff).expect("cutoff validated on construction")
    }

    /// `sqrt(omega^2 - lambda^2)`.
    pub fn reduced_frequency(&self) -> f64 {
        ((self.omega - self.lambda) * (self.omega + self.lambda)).sqrt()
    }

    pub fn cosh_tau(&self) -> f64 {
        self.omega / self.reduced_frequency()
    }

    pub fn sinh_tau(&self) -> f64 {
        self.lambda / self.reduced_frequency()
    }

    fn coupling(&self) -> C64 {
        C64::from_polar(self.lambda, -self.psi)
    }
}

/// Two identical oscillators coupled through `kappa x_a x_b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PositionCouplingParams {
    pub mass: f64,
    pub omega: f64,
    pub kappa: f64,
}

pub fn from_position_coupling(p: PositionCouplingParams, cutoff: usize) -> Result<ModelParams> {
    if !(p.mass.is_finite() && p.mass > 0.0) {
        return Err(Error::InvalidParameter(format!("mass must be positive, got {}", p.mass)));
    }
    if !p.kappa.is_finite() {
        return Err(Error::InvalidParameter(format!("kappa must be finite, got {}", p.kappa)));
    }
    let psi = if p.kappa < 0.0 { PI } else { 0.0 };
    ModelParams::new(p.omega, p.kappa.abs(), psi, cutoff)
}

/// `H` as a combination of generators:
/// `2 omega K0 + g (K+ + J+) + g* (K- + J-)` with `g = lambda e^{-i psi}`.
pub fn hamiltonian_combo(params: &ModelParams) -> OperatorCombo {
    use GeneratorLabel::*;
    let g = params.coupling();
    OperatorCombo::new()
        .with(K0, C64::new(2.0 * params.omega, 0.0))
        .with(KPlus, g)
        .with(JPlus, g)
        .with(KMinus, g.conj())
        .with(JMinus, g.conj())
}

/// `H = omega (a†a + b†b + 1) + g (a†b† + a†b) + g* (b†a + ba)` from the
/// boson matrices.
pub fn build_hamiltonian(params: &ModelParams) -> OperatorMatrix {
    let basis = params.basis();
    let ops = crate::fock::BosonOperators::new(basis);
    let (a, ad) = (&ops.a, &ops.a_dag);
    let (b, bd) = (&ops.b, &ops.b_dag);
    let g = params.coupling();
    let free = OperatorMatrix::diagonal(basis, |na, nb| params.omega * (na + nb + 1) as f64);
    let up = &(ad * bd) + &(ad * b);
    let down = &(bd * a) + &(b * a);
    &(&free + &up.scale(g)) + &down.scale(g.conj())
}

/// The same operator assembled from the su(1,1) and su(2) generators.
pub fn build_hamiltonian_group_form(params: &ModelParams) -> OperatorMatrix {
    GeneratorMatrices::new(params.basis()).materialize(&hamiltonian_combo(params))
}

/// Tilt that removes the `K±` terms and then the `J±` terms (branch
/// `theta = pi/2`).
pub fn tilt_parameters(params: &ModelParams) -> TiltParams {
    TiltParams::new(
        (params.lambda / params.omega).atanh(),
        params.psi,
        FRAC_PI_2,
        params.psi,
    )
}

pub fn tilted_hamiltonian_exact_combo(params: &ModelParams) -> OperatorCombo {
    use GeneratorLabel::*;
    let s = params.reduced_frequency();
    let (w, l) = (params.omega, params.lambda);
    let squeeze = -l * l / s;
    let phase = C64::from_polar(1.0, -2.0 * params.psi);
    OperatorCombo::new()
        .with(K0, C64::new(2.0 * s, 0.0))
        .with(J0, C64::new(2.0 * w * l / s, 0.0))
        .with(KPlusB, C64::new(squeeze, 0.0))
        .with(KMinusB, C64::new(squeeze, 0.0))
        .with(KPlusA, phase * squeeze)
        .with(KMinusA, phase.conj() * squeeze)
}

/// `D†(chi) D†(xi) H D(xi) D(chi)` in closed form.
pub fn tilted_hamiltonian_exact(params: &ModelParams) -> OperatorMatrix {
    GeneratorMatrices::new(params.basis()).materialize(&tilted_hamiltonian_exact_combo(params))
}

/// The tilted Hamiltonian without its single-mode squeezing terms; diagonal
/// in `|N, m>`.
pub fn tilted_hamiltonian_weak(params: &ModelParams) -> OperatorMatrix {
    let s = params.reduced_frequency();
    let (w, l) = (params.omega, params.lambda);
    OperatorMatrix::diagonal(params.basis(), |na, nb| {
        s * (na + nb + 1) as f64 + w * l / s * (na as f64 - nb as f64)
    })
}

/// `sqrt(omega^2 - lambda^2)(N+1) + (omega lambda / sqrt(omega^2 - lambda^2)) |m|`.
pub fn energy(params: &ModelParams, q: QuantumNumbers) -> f64 {
    let s = params.reduced_frequency();
    s * (q.principal() as f64 + 1.0) + params.omega * params.lambda / s * q.angular().abs() as f64
}

/// Eigenvalue of [`tilted_hamiltonian_weak`] on `|N, m>`; unlike [`energy`]
/// it depends on the sign of `m`.
pub fn weak_eigenvalue(params: &ModelParams, q: QuantumNumbers) -> f64 {
    let s = params.reduced_frequency();
    s * (q.principal() as f64 + 1.0) + params.omega * params.lambda / s * q.angular() as f64
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub q: QuantumNumbers,
    pub energy: f64,
}

/// [`energy`] over all `N <= n_max`, in grid order.
pub fn spectrum(params: &ModelParams, n_max: u32) -> Vec<SpectrumEntry> {
    QuantumNumbers::grid(n_max)
        .into_iter()
        .map(|q| SpectrumEntry {
            q,
            energy: energy(params, q),
        })
        .collect()
}

fn radial_norm(q: QuantumNumbers) -> f64 {
    let nr = q.radial() as u64;
    let am = q.angular().unsigned_abs() as u64;
    (2.0 * (ln_factorial(nr) - ln_factorial(nr + am)).exp()).sqrt()
}

/// Radial factor at `u = r^2` without the Gaussian `e^{-u/2}`.
fn radial_polynomial(q: QuantumNumbers, u: f64) -> f64 {
    let nr = q.radial();
    let am = q.angular().unsigned_abs();
    let sign = if nr % 2 == 0 { 1.0 } else { -1.0 };
    sign * radial_norm(q) * u.powf(am as f64 / 2.0) * laguerre(nr, am as f64, u)
}

/// Polar eigenfunction of the uncoupled two-dimensional oscillator,
/// normalized under `r dr dphi`.
pub fn eigenfunction(q: QuantumNumbers, r: f64, phi: f64) -> C64 {
    let u = r * r;
    let amp = radial_polynomial(q, u) * (-u / 2.0).exp() / (2.0 * PI).sqrt();
    C64::from_polar(amp, q.angular() as f64 * phi)
}

/// Overlap matrix `∫ Ψ_i* Ψ_j r dr dphi` over `states`, by Gauss-Laguerre
/// quadrature in `u = r^2` and the trapezoid rule in `phi`.
pub fn eigenfunction_gram(states: &[QuantumNumbers]) -> DMatrix<C64> {
    let (nodes, weights) = gauss_laguerre(RADIAL_NODES);
    let radial = |q: QuantumNumbers| -> Vec<f64> {
        nodes.iter().map(|&u| radial_polynomial(q, u)).collect()
    };
    let tables: Vec<Vec<f64>> = states.iter().map(|&q| radial(q)).collect();
    let dphi = 2.0 * PI / ANGULAR_NODES as f64;
    DMatrix::from_fn(states.len(), states.len(), |i, j| {
        // r dr = du / 2; the e^{-u} weight absorbs both Gaussians.
        let rad: f64 = weights
            .iter()
            .zip(tables[i].iter().zip(&tables[j]))
            .map(|(w, (x, y))| w * x * y)
            .sum::<f64>()
            / 2.0;
        let dm = (states[j].angular() - states[i].angular()) as f64;
        let ang: C64 = (0..ANGULAR_NODES)
            .map(|k| C64::from_polar(dphi, dm * k as f64 * dphi))
            .sum();
        ang * rad / (2.0 * PI)
    })
}

/// Displacements of one model, built once and reused across states.
#[derive(Clone, Debug)]
pub struct TiltedFrame {
    params: ModelParams,
    tilt: TiltParams,
    d_xi: OperatorMatrix,
    d_chi: OperatorMatrix,
}

/// A Fock-space eigenstate image together with its truncation leakage.
#[derive(Clone, Debug)]
pub struct Eigenstate {
    pub q: QuantumNumbers,
    pub state: StateVector,
    pub leakage: f64,
}

impl Eigenstate {
    pub fn is_reliable(&self) -> bool {
        self.leakage <= LEAKAGE_THRESHOLD
    }
}

impl TiltedFrame {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let tilt = tilt_parameters(params);
        let basis = params.basis();
        Ok(Self {
            params: *params,
            tilt,
            d_xi: displacement_su11(basis, &tilt)?,
            d_chi: displacement_su2(basis, &tilt)?,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn tilt(&self) -> &TiltParams {
        &self.tilt
    }

    pub fn d_xi(&self) -> &OperatorMatrix {
        &self.d_xi
    }

    pub fn d_chi(&self) -> &OperatorMatrix {
        &self.d_chi
    }

    /// `D(xi) D(chi) |N, m>` and its weight outside the leakage interior.
    pub fn image(&self, q: QuantumNumbers) -> Result<Eigenstate> {
        let basis = self.params.basis();
        let state = nm_state(basis, q)?.apply(&self.d_chi)?.apply(&self.d_xi)?;
        let leakage = state.weight_outside(&Interior::with_buffer(&basis, LEAKAGE_BUFFER));
        Ok(Eigenstate { q, state, leakage })
    }

    /// `D†(chi) D†(xi) X D(xi) D(chi)` by matrix products.
    pub fn conjugate(&self, x: &OperatorMatrix) -> OperatorMatrix {
        x.conjugate_by(&self.d_xi).conjugate_by(&self.d_chi)
    }
}

/// `D(xi) D(chi) |N, m>`; fails with [`Error::Leakage`] when the truncation
/// loses more than [`LEAKAGE_THRESHOLD`].
pub fn full_eigenstate(params: &ModelParams, q: QuantumNumbers) -> Result<StateVector> {
    let e = TiltedFrame::new(params)?.image(q)?;
    if !e.is_reliable() {
        return Err(Error::Leakage {
            leakage: e.leakage,
            threshold: LEAKAGE_THRESHOLD,
        });
    }
    Ok(e.state)
}

/// Ascending eigenvalues of a Hermitian operator.
pub fn hermitian_eigenvalues(m: &OperatorMatrix) -> Result<Vec<f64>> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let data = m.matrix();
    let mut out = Vec::with_capacity(data.nrows());
    for block in m.coupled_blocks() {
        let sub = DMatrix::from_fn(block.len(), block.len(), |r, c| data[(block[r], block[c])]);
        out.extend(SymmetricEigen::new(sub).eigenvalues.iter().copied());
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumPair {
    pub q: QuantumNumbers,
    pub closed: f64,
    pub numeric: f64,
}

impl SpectrumPair {
    pub fn abs_err(&self) -> f64 {
        (self.numeric - self.closed).abs()
    }
}

/// Pairs [`weak_eigenvalue`] for every `N <= n_max` with the eigenvalues of
/// the full `H`.
///
/// Both lists are sorted ascending and matched by rank; closed-form ties are
/// ordered by `|m|`, then by `m` descending. Shells above `n_max` whose
/// values interleave with the requested ones are included in the ranking,
/// up to `N = cutoff / 2`. Output is in grid order.
pub fn paired_spectrum(params: &ModelParams, n_max: u32) -> Result<Vec<SpectrumPair>> {
    let cap = (params.cutoff / 2) as u32;
    if n_max > cap {
        return Err(Error::InvalidParameter(format!(
            "n_max {n_max} exceeds half the cutoff ({cap})"
        )));
    }
    let requested = QuantumNumbers::grid(n_max);
    let top = requested
        .iter()
        .map(|&q| weak_eigenvalue(params, q))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut closed: Vec<(QuantumNumbers, f64)> = Vec::new();
    for n in 0..=cap {
        let shell: Vec<_> = QuantumNumbers::shell(n).map(|q| (q, weak_eigenvalue(params, q))).collect();
        let lowest = shell.iter().map(|e| e.1).fold(f64::INFINITY, f64::min);
        if n > n_max && lowest > top {
            break;
        }
        closed.extend(shell);
    }
    closed.sort_by(|x, y| {
        x.1.total_cmp(&y.1)
            .then(x.0.angular().abs().cmp(&y.0.angular().abs()))
            .then(y.0.angular().cmp(&x.0.angular()))
    });
    let numeric = hermitian_eigenvalues(&build_hamiltonian(params))?;
    let mut pairs: Vec<SpectrumPair> = closed
        .iter()
        .zip(&numeric)
        .filter(|((q, _), _)| q.principal() <= n_max)
        .map(|(&(q, closed), &numeric)| SpectrumPair { q, closed, numeric })
        .collect();
    let order = |q: &QuantumNumbers| (q.principal(), -q.angular());
    pairs.sort_by_key(|p| order(&p.q));
    Ok(pairs)
}

/// Largest `|eig(H) - E_closed|` over `N <= n_max`.
pub fn max_pairing_error(params: &ModelParams, n_max: u32) -> Result<f64> {
    Ok(paired_spectrum(params, n_max)?
        .iter()
        .map(SpectrumPair::abs_err)
        .fold(0.0, f64::max))
}

/// Exponent `p` of `err ∝ lambda^p` fitted through two couplings.
pub fn error_law_exponent(
    omega: f64,
    lambdas: (f64, f64),
    n_max: u32,
    cutoff: usize,
) -> Result<f64> {
    let e1 = max_pairing_error(&ModelParams::new(omega, lambdas.0, 0.0, cutoff)?, n_max)?;
    let e2 = max_pairing_error(&ModelParams::new(omega, lambdas.1, 0.0, cutoff)?, n_max)?;
    Ok((e1 / e2).ln() / (lambdas.0 / lambdas.1).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::BosonOperators;
    use crate::similarity::conjugate_chain;
    use std::f64::consts::FRAC_PI_3;

    fn paper_params() -> ModelParams {
        ModelParams::with_coupling(4.0, 0.5).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(ModelParams::with_coupling(4.0, 4.0).is_err());
        assert!(ModelParams::with_coupling(4.0, -0.1).is_err());
        assert!(ModelParams::with_coupling(0.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 0.1, f64::NAN, 10).is_err());
        assert!(ModelParams::new(1.0, 0.1, 0.0, 0).is_err());
    }

    #[test]
    fn position_coupling_mapping() {
        let p = from_position_coupling(
            PositionCouplingParams { mass: 1.0, omega: 4.0, kappa: 0.5 },
            DEFAULT_CUTOFF,
        )
        .unwrap();
        assert_eq!((p.omega, p.lambda, p.psi), (4.0, 0.5, 0.0));
        let neg = PositionCouplingParams { mass: 2.0, omega: 1.0, kappa: -0.1 };
        let p = from_position_coupling(neg, 6).unwrap();
        assert_eq!((p.lambda, p.psi), (0.1, PI));
        let ops = BosonOperators::new(p.basis());
        let xa = &ops.a + &ops.a_dag;
        let xb = &ops.b + &ops.b_dag;
        let free = OperatorMatrix::diagonal(p.basis(), |na, nb| (na + nb + 1) as f64);
        let direct = &free + &(&xa * &xb).scale_real(-0.1);
        assert!((&build_hamiltonian(&p) - &direct).max_abs() < 1e-15);
        let too_strong = PositionCouplingParams { mass: 1.0, omega: 1.0, kappa: -1.0 };
        assert!(from_position_coupling(too_strong, 6).is_err());
    }

    #[test]
    fn hamiltonian_forms_agree() {
        for psi in [0.0, FRAC_PI_3, 2.0] {
            let p = ModelParams::new(4.0, 0.5, psi, 10).unwrap();
            let h = build_hamiltonian(&p);
            assert!((&h - &build_hamiltonian_group_form(&p)).max_abs() < 1e-12);
            assert!(h.hermiticity_defect() < 1e-15);
            let g = h.element((1, 1), (0, 0));
            assert!((g - C64::from_polar(0.5, -psi)).norm() < 1e-15);
        }
        let p = ModelParams::new(2.0, 0.0, 0.0, 5).unwrap();
        let h = build_hamiltonian(&p);
        let free = OperatorMatrix::diagonal(p.basis(), |na, nb| 2.0 * (na + nb + 1) as f64);
        assert_eq!(h, free);
    }

    #[test]
    fn tilt_values() {
        let t = tilt_parameters(&paper_params());
        assert!((t.tau - 0.125_657_214_140_453_4).abs() < 1e-14);
        assert!((t.tau.cosh() - 4.0 / 15.75f64.sqrt()).abs() < 1e-14);
        assert!((paper_params().sinh_tau() - t.tau.sinh()).abs() < 1e-14);
        assert_eq!(t.theta, FRAC_PI_2);
        let zero = tilt_parameters(&ModelParams::with_coupling(1.0, 0.0).unwrap());
        assert_eq!(zero.tau, 0.0);
    }

    #[test]
    fn chain_of_combos_gives_exact_tilted_form() {
        for psi in [0.0, FRAC_PI_3] {
            let p = ModelParams::new(4.0, 0.5, psi, DEFAULT_CUTOFF).unwrap();
            let chained = conjugate_chain(&hamiltonian_combo(&p), &tilt_parameters(&p)).unwrap();
            let expected = tilted_hamiltonian_exact_combo(&p);
            assert!(chained.distance(&expected) < 1e-13, "{}", chained.distance(&expected));
        }
    }

    #[test]
    fn exact_tilt_identity_against_matrices() {
        for psi in [0.0, FRAC_PI_3] {
            let p = ModelParams::new(4.0, 0.5, psi, DEFAULT_CUTOFF).unwrap();
            let frame = TiltedFrame::new(&p).unwrap();
            let direct = frame.conjugate(&build_hamiltonian(&p));
            let d = direct.interior_distance(&tilted_hamiltonian_exact(&p), &Interior::up_to(8));
            assert!(d < 1e-9, "psi={psi}: {d}");
        }
    }

    #[test]
    fn weak_form() {
        let p = paper_params();
        let w = tilted_hamiltonian_weak(&p);
        assert!((w.element((0, 0), (0, 0)).re - 15.75f64.sqrt()).abs() < 1e-14);
        let s = p.reduced_frequency();
        let m = GeneratorMatrices::new(p.basis());
        let k_part = m.get(GeneratorLabel::K0).scale_real(2.0 * s);
        let j_part = m.get(GeneratorLabel::J0).scale_real(2.0 * 4.0 * 0.5 / s);
        assert_eq!(k_part.commutator(&j_part).max_abs(), 0.0);
        assert!((&(&k_part + &j_part) - &w).max_abs() < 1e-13);
        let q = QuantumNumbers::new(3, -1).unwrap();
        let (na, nb) = q.occupations();
        let diag = w.element((na as usize, nb as usize), (na as usize, nb as usize)).re;
        assert!((diag - weak_eigenvalue(&p, q)).abs() < 1e-13);
    }

    #[test]
    fn closed_form_energies() {
        let free = ModelParams::with_coupling(1.0, 0.0).unwrap();
        assert_eq!(energy(&free, QuantumNumbers::new(3, 1).unwrap()), 4.0);
        let p = paper_params();
        let s = 15.75f64.sqrt();
        assert!((energy(&p, QuantumNumbers::new(0, 0).unwrap()) - s).abs() < 1e-14);
        let e = 3.0 * s + 2.0 * 0.5 * 4.0 / s;
        for m in [2, -2] {
            assert!((energy(&p, QuantumNumbers::new(2, m).unwrap()) - e).abs() < 1e-13);
        }
        for entry in spectrum(&p, 6) {
            assert!(entry.energy >= s - 1e-14);
        }
    }

    #[test]
    fn eigenfunction_values() {
        let ground = QuantumNumbers::new(0, 0).unwrap();
        assert!((eigenfunction(ground, 0.0, 0.3).re - 1.0 / PI.sqrt()).abs() < 1e-15);
        let r = 1.3;
        let expected = (-r * r / 2.0f64).exp() / PI.sqrt();
        assert!((eigenfunction(ground, r, 1.0).re - expected).abs() < 1e-15);
        assert_eq!(eigenfunction(QuantumNumbers::new(3, 1).unwrap(), 0.0, 0.7).norm(), 0.0);
        let q = QuantumNumbers::new(2, 2).unwrap();
        let z = eigenfunction(q, 0.8, 0.4);
        let amp = 0.64 * (-0.32f64).exp() / (2.0 * PI).sqrt();
        assert!((z - C64::from_polar(amp, 0.8)).norm() < 1e-14);
    }

    #[test]
    fn eigenfunctions_are_orthonormal() {
        let states = QuantumNumbers::grid(4);
        let gram = eigenfunction_gram(&states);
        let dev = (gram - DMatrix::<C64>::identity(states.len(), states.len())).camax();
        assert!(dev < 1e-7, "{dev}");
    }

    #[test]
    fn eigenstate_images() {
        let p = paper_params();
        let ground = QuantumNumbers::new(0, 0).unwrap();
        let state = full_eigenstate(&p, ground).unwrap();
        assert!((state.norm_sqr() - 1.0).abs() < 1e-10);

        let free = ModelParams::new(1.0, 0.0, 0.3, 12).unwrap();
        let frame = TiltedFrame::new(&free).unwrap();
        let q = QuantumNumbers::new(2, 0).unwrap();
        let only_chi = nm_state(free.basis(), q).unwrap().apply(frame.d_chi()).unwrap();
        let img = frame.image(q).unwrap();
        assert!((img.state.amplitudes() - only_chi.amplitudes()).camax() < 1e-15);

        let strong = ModelParams::with_coupling(4.0, 3.9).unwrap();
        assert!(matches!(full_eigenstate(&strong, ground), Err(Error::Leakage { .. })));
    }

    #[test]
    fn expectation_of_h_close_to_energy() {
        let p = paper_params();
        let frame = TiltedFrame::new(&p).unwrap();
        let h = build_hamiltonian(&p);
        for q in QuantumNumbers::grid(3) {
            let e = frame.image(q).unwrap();
            let mean = crate::fock::expectation(&e.state, &h).unwrap().re;
            // exact in <N,m| H'' |N,m>, which has no squeezing diagonal
            assert!((mean - weak_eigenvalue(&p, q)).abs() < 1e-9, "{q}");
        }
    }

    #[test]
    fn lowest_eigenvalues_survive_tilt() {
        let p = paper_params();
        let full = hermitian_eigenvalues(&build_hamiltonian(&p)).unwrap();
        let tilted = hermitian_eigenvalues(&tilted_hamiltonian_exact(&p)).unwrap();
        for i in 0..6 {
            assert!((full[i] - tilted[i]).abs() < 1e-6, "{i}: {} vs {}", full[i], tilted[i]);
        }
        let modes = [(4.0f64 * (4.0 + 1.0)).sqrt(), (4.0f64 * (4.0 - 1.0)).sqrt()];
        assert!((full[0] - (modes[0] + modes[1]) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn pairing_at_weak_coupling() {
        let p = ModelParams::with_coupling(1.0, 0.01).unwrap();
        let pairs = paired_spectrum(&p, 4).unwrap();
        assert_eq!(pairs.len(), 15);
        assert!(pairs.iter().all(|x| x.abs_err() <= 5e-4));
        let free = ModelParams::with_coupling(1.0, 0.0).unwrap();
        for x in paired_spectrum(&free, 4).unwrap() {
            assert_eq!(x.closed, (x.q.principal() + 1) as f64);
            assert!(x.abs_err() < 1e-12);
        }
    }
}
