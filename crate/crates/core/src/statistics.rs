//! Photon-number statistics of the tilted eigenstates: closed-form
//! expectation values, Mandel Q, g2(0) and a brute-force matrix oracle.

use std::fmt;

use crate::coherent::TiltParams;
use crate::error::Result;
use crate::fock::{expectation, BosonOperators, Mode, OperatorMatrix};
use crate::hamiltonian::{ModelParams, TiltedFrame, LEAKAGE_THRESHOLD};
use crate::lie::{nm_state, QuantumNumbers};
use crate::similarity::{GeneratorLabel, GeneratorMatrices};

/// Half-width of the classification boundaries.
pub const CLASS_DEAD_BAND: f64 = 1e-9;
/// Mean photon numbers at or below this are treated as zero.
pub const MEAN_FLOOR: f64 = 1e-12;

/// Diagonal expectations in `|N, m>` needed for the photon statistics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpectationTable {
    pub k0: f64,
    pub j0: f64,
    pub kp_km: f64,
    pub km_kp: f64,
    pub jp_jm: f64,
    pub jm_jp: f64,
    pub km_kp_a: f64,
    pub kp_km_a: f64,
    pub km_kp_b: f64,
    pub kp_km_b: f64,
}

pub fn expectation_table(q: QuantumNumbers) -> ExpectationTable {
    let n = q.principal() as f64;
    let m = q.angular() as f64;
    let cross = (n * n - m * m) / 4.0;
    let square = (n * n + m * m) / 16.0;
    ExpectationTable {
        k0: (n + 1.0) / 2.0,
        j0: m / 2.0,
        kp_km: cross,
        km_kp: cross + n + 1.0,
        jp_jm: cross + (n + m) / 2.0,
        jm_jp: cross + (n - m) / 2.0,
        km_kp_a: square + n * m / 8.0 + 3.0 * (n + m) / 8.0 + 0.5,
        kp_km_a: square + (n * m - n - m) / 8.0,
        km_kp_b: square - n * m / 8.0 + 3.0 * (n - m) / 8.0 + 0.5,
        kp_km_b: square - (n * m + n - m) / 8.0,
    }
}

impl ExpectationTable {
    pub fn values(&self) -> [f64; 10] {
        [
            self.k0,
            self.j0,
            self.kp_km,
            self.km_kp,
            self.jp_jm,
            self.jm_jp,
            self.km_kp_a,
            self.kp_km_a,
            self.km_kp_b,
            self.kp_km_b,
        ]
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        self.values()
            .iter()
            .zip(other.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

/// The same ten values as direct matrix expectations on the Fock vector.
pub fn expectation_table_oracle(
    mats: &GeneratorMatrices,
    q: QuantumNumbers,
) -> Result<ExpectationTable> {
    use GeneratorLabel::*;
    let state = nm_state(*mats.basis(), q)?;
    let ev = |m: &OperatorMatrix| -> Result<f64> { Ok(expectation(&state, m)?.re) };
    let pair = |x: GeneratorLabel, y: GeneratorLabel| -> Result<f64> {
        ev(&(mats.get(x) * mats.get(y)))
    };
    Ok(ExpectationTable {
        k0: ev(mats.get(K0))?,
        j0: ev(mats.get(J0))?,
        kp_km: pair(KPlus, KMinus)?,
        km_kp: pair(KMinus, KPlus)?,
        jp_jm: pair(JPlus, JMinus)?,
        jm_jp: pair(JMinus, JPlus)?,
        km_kp_a: pair(KMinusA, KPlusA)?,
        kp_km_a: pair(KPlusA, KMinusA)?,
        km_kp_b: pair(KMinusB, KPlusB)?,
        kp_km_b: pair(KPlusB, KMinusB)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QClass {
    SuperPoissonian,
    Poissonian,
    SubPoissonian,
    NumberState,
}

impl QClass {
    pub fn of(q: f64) -> Self {
        if (q + 1.0).abs() <= CLASS_DEAD_BAND {
            QClass::NumberState
        } else if q.abs() <= CLASS_DEAD_BAND {
            QClass::Poissonian
        } else if q < 0.0 {
            QClass::SubPoissonian
        } else {
            QClass::SuperPoissonian
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            QClass::SuperPoissonian => "super-Poissonian",
            QClass::Poissonian => "Poissonian",
            QClass::SubPoissonian => "sub-Poissonian",
            QClass::NumberState => "number-state",
        }
    }
}

impl fmt::Display for QClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum G2Class {
    Bunching,
    AntiBunching,
    Coherent,
}

impl G2Class {
    pub fn of(g2: f64) -> Self {
        if (g2 - 1.0).abs() <= CLASS_DEAD_BAND {
            G2Class::Coherent
        } else if g2 < 1.0 {
            G2Class::AntiBunching
        } else {
            G2Class::Bunching
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            G2Class::Bunching => "bunching",
            G2Class::AntiBunching => "anti-bunching",
            G2Class::Coherent => "coherent",
        }
    }
}

impl fmt::Display for G2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// First two moments of a photon-number distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhotonMoments {
    pub mean: f64,
    pub variance: f64,
}

impl PhotonMoments {
    pub fn from_raw(mean: f64, mean_sq: f64) -> Self {
        Self {
            mean,
            variance: mean_sq - mean * mean,
        }
    }

    pub fn mean_sq(&self) -> f64 {
        self.variance + self.mean * self.mean
    }

    /// `Var(n)/<n> - 1`; `None` when `<n>` vanishes.
    pub fn mandel_q(&self) -> Option<f64> {
        (self.mean > MEAN_FLOOR).then(|| self.variance / self.mean - 1.0)
    }

    /// `(<n^2> - <n>)/<n>^2`; `None` when `<n>` vanishes.
    pub fn g2(&self) -> Option<f64> {
        (self.mean > MEAN_FLOOR).then(|| (self.mean_sq() - self.mean) / (self.mean * self.mean))
    }
}

/// Photon-number moments of `mode` in `D(xi) D(chi) |N, m>` for an arbitrary
/// tilt, assembled from [`expectation_table`].
///
/// The `K0` and `J0` parts of the transformed number operator only shift the
/// mean; each off-diagonal generator connects `|N, m>` to a distinct state,
/// so the variance is a sum of `|coefficient|^2 <X† X>` terms.
pub fn general_moments(tilt: &TiltParams, q: QuantumNumbers, mode: Mode) -> PhotonMoments {
    let t = expectation_table(q);
    let sign = match mode {
        Mode::A => 1.0,
        Mode::B => -1.0,
    };
    let (ch, sh) = (tilt.tau.cosh(), tilt.tau.sinh());
    let (ct, st) = (tilt.theta.cos(), tilt.theta.sin());
    let mean = ch * t.k0 + sign * ct * t.j0 - 0.5;
    let squeeze = t.km_kp_a + t.kp_km_a + t.km_kp_b + t.kp_km_b;
    let variance = (st * st * (t.jp_jm + t.jm_jp)
        + ct * ct * sh * sh * (t.kp_km + t.km_kp)
        + st * st * sh * sh * squeeze)
        / 4.0;
    PhotonMoments { mean, variance }
}

pub fn mandel_q_general(tilt: &TiltParams, q: QuantumNumbers, mode: Mode) -> Option<f64> {
    general_moments(tilt, q, mode).mandel_q()
}

/// Mean photon number per mode at the model's tilt: `cosh(tau)(N+1)/2 - 1/2`.
pub fn mean_n_weak(params: &ModelParams, q: QuantumNumbers) -> f64 {
    params.cosh_tau() * (q.principal() as f64 + 1.0) / 2.0 - 0.5
}

/// Mandel Q of either mode at the model's tilt, as an explicit function of
/// `omega` and `lambda` (both modes share it).
pub fn mandel_q_weak(params: &ModelParams, q: QuantumNumbers) -> Option<f64> {
    let (w, l) = (params.omega, params.lambda);
    let s = params.reduced_frequency();
    let n = q.principal() as f64;
    let m = q.angular() as f64;
    let denom = w * (n + 1.0) - s;
    if denom <= MEAN_FLOOR * w {
        return None;
    }
    let num = w * w * (2.0 * (n * n - m * m) + 4.0 * n) - l * l * (n * (n + 2.0) - 3.0 * m * m - 4.0);
    Some(num / (8.0 * s * denom) - 1.0)
}

/// g2(0) of either mode at the model's tilt.
pub fn g2_weak(params: &ModelParams, q: QuantumNumbers) -> Option<f64> {
    let (w, l) = (params.omega, params.lambda);
    let s = params.reduced_frequency();
    let n = q.principal() as f64;
    let m = q.angular() as f64;
    let denom = w * (n + 1.0) - s;
    if denom <= MEAN_FLOOR * w {
        return None;
    }
    let nn = n * (n + 2.0);
    let num = 2.0 * w * w * (3.0 * nn - m * m + 8.0) - l * l * (nn - 3.0 * m * m + 8.0)
        - 16.0 * w * (n + 1.0) * s;
    Some(num / (4.0 * denom * denom))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StatisticsReport {
    pub q: QuantumNumbers,
    pub mode: Mode,
    pub mean_n: f64,
    pub mean_n2: f64,
    pub mandel_q: Option<f64>,
    pub g2: Option<f64>,
    pub q_class: Option<QClass>,
    pub g2_class: Option<G2Class>,
    pub leakage: f64,
    pub reliable: bool,
}

/// Matrix-level photon statistics of the tilted eigenstates of one model.
#[derive(Clone, Debug)]
pub struct StatisticsOracle {
    frame: TiltedFrame,
    number_a: OperatorMatrix,
    number_b: OperatorMatrix,
}

impl StatisticsOracle {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let ops = BosonOperators::new(params.basis());
        Ok(Self {
            frame: TiltedFrame::new(params)?,
            number_a: ops.number(Mode::A),
            number_b: ops.number(Mode::B),
        })
    }

    pub fn frame(&self) -> &TiltedFrame {
        &self.frame
    }

    pub fn report(&self, q: QuantumNumbers, mode: Mode) -> Result<StatisticsReport> {
        let image = self.frame.image(q)?;
        let number = match mode {
            Mode::A => &self.number_a,
            Mode::B => &self.number_b,
        };
        let counted = image.state.apply(number)?;
        let mean_n = image.state.inner(&counted)?.re;
        let mean_n2 = counted.inner(&counted)?.re;
        let moments = PhotonMoments::from_raw(mean_n, mean_n2);
        let mandel_q = moments.mandel_q();
        let g2 = moments.g2();
        Ok(StatisticsReport {
            q,
            mode,
            mean_n,
            mean_n2,
            mandel_q,
            g2,
            q_class: mandel_q.map(QClass::of),
            g2_class: g2.map(G2Class::of),
            leakage: image.leakage,
            reliable: image.leakage <= LEAKAGE_THRESHOLD,
        })
    }
}

pub fn statistics_oracle(
    params: &ModelParams,
    q: QuantumNumbers,
    mode: Mode,
) -> Result<StatisticsReport> {
    StatisticsOracle::new(params)?.report(q, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::TwoModeBasis;
    use crate::hamiltonian::tilt_parameters;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn qn(n: u32, m: i32) -> QuantumNumbers {
        QuantumNumbers::new(n, m).unwrap()
    }

    fn paper() -> ModelParams {
        ModelParams::with_coupling(4.0, 0.5).unwrap()
    }

    #[test]
    fn table_examples() {
        let t = expectation_table(qn(0, 0));
        assert_eq!((t.k0, t.km_kp, t.km_kp_a), (0.5, 1.0, 0.5));
        let t = expectation_table(qn(2, 0));
        assert_eq!((t.jp_jm, t.jm_jp), (2.0, 2.0));
        for q in QuantumNumbers::grid(6) {
            let t = expectation_table(q);
            assert_eq!(t.km_kp - t.kp_km, 2.0 * t.k0);
            assert_eq!(t.jp_jm - t.jm_jp, 2.0 * t.j0);
        }
    }

    #[test]
    fn table_matches_matrices() {
        let mats = GeneratorMatrices::new(TwoModeBasis::new(12).unwrap());
        for q in QuantumNumbers::grid(6) {
            let d = expectation_table(q).max_distance(&expectation_table_oracle(&mats, q).unwrap());
            assert!(d < 1e-12, "{q}: {d}");
        }
    }

    #[test]
    fn classification_dead_bands() {
        assert_eq!(QClass::of(-1.0 + 5e-10), QClass::NumberState);
        assert_eq!(QClass::of(-5e-10), QClass::Poissonian);
        assert_eq!(QClass::of(-2e-9), QClass::SubPoissonian);
        assert_eq!(QClass::of(0.004), QClass::SuperPoissonian);
        assert_eq!(G2Class::of(1.0 + 1e-10), G2Class::Coherent);
        assert_eq!(G2Class::of(0.5), G2Class::AntiBunching);
        assert_eq!(G2Class::of(2.0), G2Class::Bunching);
    }

    #[test]
    fn general_q_special_cases() {
        let id = TiltParams::default();
        for q in QuantumNumbers::grid(5) {
            let (na, _) = q.occupations();
            let got = mandel_q_general(&id, q, Mode::A);
            if na == 0 {
                assert_eq!(got, None);
            } else {
                assert_eq!(got, Some(-1.0));
            }
        }
        let quarter = TiltParams::new(0.0, 0.0, FRAC_PI_2, 0.0);
        let q = mandel_q_general(&quarter, qn(2, 2), Mode::A).unwrap();
        assert!((q + 0.5).abs() < 1e-15);
    }

    #[test]
    fn weak_values() {
        let p = paper();
        let q00 = mandel_q_weak(&p, qn(0, 0)).unwrap();
        assert!((q00 - 0.003_952_63).abs() < 1e-6);
        assert!((q00 - 0.003_952_630_7).abs() < 1e-9);
        for m in [6, -6] {
            assert!(mandel_q_weak(&p, qn(6, m)).unwrap() < 0.0);
            assert!(g2_weak(&p, qn(6, m)).unwrap() < 1.0);
        }
        assert!(mandel_q_weak(&p, qn(4, 0)).unwrap() > 0.0);
        assert!(g2_weak(&p, qn(4, 0)).unwrap() > 1.0);
        assert!((g2_weak(&p, qn(0, 0)).unwrap() - 2.0).abs() < 1e-4);
        let free = ModelParams::with_coupling(4.0, 0.0).unwrap();
        assert_eq!(mandel_q_weak(&free, qn(0, 0)), None);
        assert_eq!(g2_weak(&free, qn(0, 0)), None);
    }

    #[test]
    fn weak_forms_specialize_general() {
        for psi in [0.0, FRAC_PI_3] {
            let p = ModelParams::new(4.0, 0.5, psi, 24).unwrap();
            let tilt = tilt_parameters(&p);
            for q in QuantumNumbers::grid(6) {
                let qw = mandel_q_weak(&p, q).unwrap();
                let gw = g2_weak(&p, q).unwrap();
                let mean = mean_n_weak(&p, q);
                assert!((gw - (qw / mean + 1.0)).abs() < 1e-10, "{q}");
                for mode in [Mode::A, Mode::B] {
                    let g = general_moments(&tilt, q, mode);
                    assert!((g.mean - mean).abs() < 1e-13);
                    assert!((g.mandel_q().unwrap() - qw).abs() < 1e-10);
                    assert!((g.g2().unwrap() - gw).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn oracle_agrees_with_closed_forms() {
        for psi in [0.0, FRAC_PI_3] {
            let p = ModelParams::new(4.0, 0.5, psi, 24).unwrap();
            let oracle = StatisticsOracle::new(&p).unwrap();
            for q in QuantumNumbers::grid(6) {
                let qw = mandel_q_weak(&p, q).unwrap();
                let a = oracle.report(q, Mode::A).unwrap();
                let b = oracle.report(q, Mode::B).unwrap();
                assert!(a.reliable && b.reliable);
                assert!((a.mandel_q.unwrap() - qw).abs() < 1e-6, "{q}");
                assert!((a.mandel_q.unwrap() - b.mandel_q.unwrap()).abs() < 1e-9);
                assert!((a.g2.unwrap() - b.g2.unwrap()).abs() < 1e-9);
                let gq = a.mandel_q.unwrap() / a.mean_n + 1.0;
                assert!((a.g2.unwrap() - gq).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn oracle_on_untilted_states() {
        let free = ModelParams::with_coupling(4.0, 0.0).unwrap();
        let oracle = StatisticsOracle::new(&free).unwrap();
        // lambda = 0 still rotates by theta = pi/2
        let r = oracle.report(qn(2, 2), Mode::A).unwrap();
        assert!((r.mandel_q.unwrap() + 0.5).abs() < 1e-12);
        assert_eq!(r.q_class, Some(QClass::SubPoissonian));
        let vac = oracle.report(qn(0, 0), Mode::A).unwrap();
        assert_eq!(vac.mandel_q, None);
        assert_eq!(vac.q_class, None);
    }

    #[test]
    fn sign_structure() {
        let p = paper();
        for q in QuantumNumbers::grid(6).into_iter().filter(|q| q.principal() >= 1) {
            let v = mandel_q_weak(&p, q).unwrap();
            let g = g2_weak(&p, q).unwrap();
            if q.angular().unsigned_abs() == q.principal() {
                assert!(v < 0.0 && g < 1.0, "{q}");
            } else {
                assert!(v > 0.0 && g > 1.0, "{q}");
            }
        }
    }
}
