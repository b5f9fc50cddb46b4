//! Schwinger realizations of su(2) and su(1,1) on the two-mode space.
//!
//! * su(2): `J+ = a†b`, `J- = b†a`, `J0 = (a†a - b†b)/2`
//! * two-boson su(1,1): `K+ = a†b†`, `K- = ba`, `K0 = (a†a + b†b + 1)/2`
//! * one-boson su(1,1): `K+^(a) = a†²/2`, `K-^(a) = a²/2`, `K0^(a) = (a†a + 1/2)/2`
//!
//! Casimirs are built as matrix polynomials of the generators. Their closed
//! forms are checked in tests rather than assumed.

use crate::error::{Error, Result};
use crate::fock::{BosonOperators, Mode, OperatorMatrix, StateVector, TwoModeBasis};

/// Principal number `N = n_a + n_b` and angular number `m = n_a - n_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumNumbers {
    n: u32,
    m: i32,
}

impl QuantumNumbers {
    pub fn new(n: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > n {
            return Err(Error::InvalidQuantumNumbers {
                n,
                m,
                reason: "|m| > N",
            });
        }
        if (n - m.unsigned_abs()) % 2 != 0 {
            return Err(Error::InvalidQuantumNumbers {
                n,
                m,
                reason: "N - |m| is odd",
            });
        }
        Ok(Self { n, m })
    }

    pub fn from_occupations(na: u32, nb: u32) -> Self {
        Self {
            n: na + nb,
            m: na as i32 - nb as i32,
        }
    }

    pub fn principal(&self) -> u32 {
        self.n
    }

    pub fn angular(&self) -> i32 {
        self.m
    }

    /// `n_r = (N - |m|) / 2`
    pub fn radial(&self) -> u32 {
        (self.n - self.m.unsigned_abs()) / 2
    }

    /// `(n_a, n_b) = ((N + m)/2, (N - m)/2)`
    pub fn occupations(&self) -> (u32, u32) {
        let n = self.n as i32;
        (((n + self.m) / 2) as u32, ((n - self.m) / 2) as u32)
    }

    /// The shell `m = N, N-2, ..., -N`, in that order.
    pub fn shell(n: u32) -> impl Iterator<Item = QuantumNumbers> {
        (0..=n).map(move |i| QuantumNumbers {
            n,
            m: n as i32 - 2 * i as i32,
        })
    }

    /// Every `(N, m)` with `N <= n_max`, N ascending and m descending.
    pub fn grid(n_max: u32) -> Vec<QuantumNumbers> {
        (0..=n_max).flat_map(Self::shell).collect()
    }
}

impl std::fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|N={}, m={}>", self.n, self.m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Realization {
    Su2,
    Su11TwoBoson,
    Su11OneBoson(Mode),
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub realization: Realization,
    pub raising: OperatorMatrix,
    pub lowering: OperatorMatrix,
    pub diagonal: OperatorMatrix,
    pub casimir: OperatorMatrix,
}

impl GeneratorSet {
    /// Left-hand sides minus right-hand sides of the defining commutators,
    /// `([X0, X+] - X+, [X0, X-] + X-, [X-, X+] - 2 X0)` for su(1,1) and
    /// `([J+, J-] - 2 J0)` in place of the last for su(2).
    pub fn commutator_defects(&self) -> [OperatorMatrix; 3] {
        let d0p = &self.diagonal.commutator(&self.raising) - &self.raising;
        let d0m = &self.diagonal.commutator(&self.lowering) + &self.lowering;
        let two_d0 = self.diagonal.scale_real(2.0);
        let top = match self.realization {
            Realization::Su2 => &self.raising.commutator(&self.lowering) - &two_d0,
            _ => &self.lowering.commutator(&self.raising) - &two_d0,
        };
        [d0p, d0m, top]
    }
}

pub fn su2_generators(basis: TwoModeBasis) -> GeneratorSet {
    su2_from(&BosonOperators::new(basis))
}

pub(crate) fn su2_from(ops: &BosonOperators) -> GeneratorSet {
    let raising = &ops.a_dag * &ops.b;
    let lowering = &ops.b_dag * &ops.a;
    let diagonal = (&ops.number(Mode::A) - &ops.number(Mode::B)).scale_real(0.5);
    // J² = J0² + (J+J- + J-J+)/2
    let sym = &(&raising * &lowering) + &(&lowering * &raising);
    let casimir = &(&diagonal * &diagonal) + &sym.scale_real(0.5);
    GeneratorSet {
        realization: Realization::Su2,
        raising,
        lowering,
        diagonal,
        casimir,
    }
}

pub fn su11_two_boson(basis: TwoModeBasis) -> GeneratorSet {
    su11_two_boson_from(&BosonOperators::new(basis))
}

pub(crate) fn su11_two_boson_from(ops: &BosonOperators) -> GeneratorSet {
    let basis = *ops.basis();
    let raising = &ops.a_dag * &ops.b_dag;
    let lowering = &ops.b * &ops.a;
    let total = &ops.number(Mode::A) + &ops.number(Mode::B);
    let diagonal = (&total + &OperatorMatrix::identity(basis)).scale_real(0.5);
    let casimir = su11_casimir(&raising, &lowering, &diagonal);
    GeneratorSet {
        realization: Realization::Su11TwoBoson,
        raising,
        lowering,
        diagonal,
        casimir,
    }
}

pub fn su11_one_boson(basis: TwoModeBasis, mode: Mode) -> GeneratorSet {
    su11_one_boson_from(&BosonOperators::new(basis), mode)
}

pub(crate) fn su11_one_boson_from(ops: &BosonOperators, mode: Mode) -> GeneratorSet {
    let basis = *ops.basis();
    let c = ops.creation(mode);
    let d = ops.annihilation(mode);
    let raising = (c * c).scale_real(0.5);
    let lowering = (d * d).scale_real(0.5);
    let half = OperatorMatrix::identity(basis).scale_real(0.5);
    let diagonal = (&ops.number(mode) + &half).scale_real(0.5);
    let casimir = su11_casimir(&raising, &lowering, &diagonal);
    GeneratorSet {
        realization: Realization::Su11OneBoson(mode),
        raising,
        lowering,
        diagonal,
        casimir,
    }
}

// K² = K0² - (K+K- + K-K+)/2
fn su11_casimir(
    raising: &OperatorMatrix,
    lowering: &OperatorMatrix,
    diagonal: &OperatorMatrix,
) -> OperatorMatrix {
    let sym = &(raising * lowering) + &(lowering * raising);
    &(diagonal * diagonal) - &sym.scale_real(0.5)
}

/// The Fock vector `|n_a, n_b>` carrying the labels `|N, m>`.
pub fn nm_state(basis: TwoModeBasis, q: QuantumNumbers) -> Result<StateVector> {
    let (na, nb) = q.occupations();
    StateVector::basis_state(basis, na as usize, nb as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderOp {
    Raise,
    Lower,
    Diagonal,
    Casimir,
}

/// Label of a vector in an abstract discrete representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiscreteLabel {
    /// `|k, n>` of the su(1,1) positive discrete series, `k > 0`.
    Su11 { k: f64, n: u32 },
    /// `|j, mu>` of su(2), given by the doubled values `2j` and `2mu`.
    Su2 { j2: u32, mu2: i32 },
}

/// Closed-form matrix element of `op` on the given representation vector:
/// the coefficient `c` in `op |label> = c |label'>`.
pub fn discrete_rep_action(op: LadderOp, label: DiscreteLabel) -> Result<f64> {
    match label {
        DiscreteLabel::Su11 { k, n } => {
            if !(k > 0.0 && k.is_finite()) {
                return Err(Error::OutOfRange(format!("Bargmann index k = {k}")));
            }
            let n = n as f64;
            Ok(match op {
                LadderOp::Raise => ((n + 1.0) * (2.0 * k + n)).sqrt(),
                LadderOp::Lower => (n * (2.0 * k + n - 1.0)).sqrt(),
                LadderOp::Diagonal => k + n,
                LadderOp::Casimir => k * (k - 1.0),
            })
        }
        DiscreteLabel::Su2 { j2, mu2 } => {
            if mu2.unsigned_abs() > j2 || (j2 as i32 - mu2) % 2 != 0 {
                return Err(Error::OutOfRange(format!("su(2) label 2j={j2}, 2mu={mu2}")));
            }
            let j = j2 as f64 / 2.0;
            let mu = mu2 as f64 / 2.0;
            Ok(match op {
                LadderOp::Raise => ((j - mu) * (j + mu + 1.0)).sqrt(),
                LadderOp::Lower => ((j + mu) * (j - mu + 1.0)).sqrt(),
                LadderOp::Diagonal => mu,
                LadderOp::Casimir => j * (j + 1.0),
            })
        }
    }
}

/// Representation label of `|N, m>` for the su(2) realization: `j = N/2`,
/// `mu = m/2`.
pub fn su2_label(q: QuantumNumbers) -> DiscreteLabel {
    DiscreteLabel::Su2 {
        j2: q.principal(),
        mu2: q.angular(),
    }
}

/// Representation label of `|N, m>` for the two-boson su(1,1) realization:
/// `k = (|m| + 1)/2` and `n = n_r`.
pub fn su11_label(q: QuantumNumbers) -> DiscreteLabel {
    DiscreteLabel::Su11 {
        k: (q.angular().unsigned_abs() as f64 + 1.0) / 2.0,
        n: q.radial(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{expectation, Interior};

    #[test]
    fn quantum_number_validation() {
        assert!(QuantumNumbers::new(3, 2).is_err());
        assert!(QuantumNumbers::new(2, 4).is_err());
        let q = QuantumNumbers::new(4, -2).unwrap();
        assert_eq!(q.occupations(), (1, 3));
        assert_eq!(q.radial(), 1);
        assert_eq!(QuantumNumbers::new(0, 0).unwrap().occupations(), (0, 0));
        let shell: Vec<i32> = QuantumNumbers::shell(3).map(|q| q.angular()).collect();
        assert_eq!(shell, vec![3, 1, -1, -3]);
        assert_eq!(QuantumNumbers::grid(6).len(), 28);
    }

    #[test]
    fn nm_state_respects_cutoff() {
        let basis = TwoModeBasis::new(2).unwrap();
        let s = nm_state(basis, QuantumNumbers::new(4, -2).unwrap());
        assert!(matches!(s, Err(Error::OutOfCutoff { .. })));
        let s = nm_state(basis, QuantumNumbers::new(2, 0).unwrap()).unwrap();
        assert_eq!(s.amplitude(1, 1).re, 1.0);
    }

    #[test]
    fn commutation_relations_hold_on_interior() {
        let basis = TwoModeBasis::new(12).unwrap();
        let inner = Interior::with_buffer(&basis, 4);
        let zero = OperatorMatrix::zeros(basis);
        for set in [
            su2_generators(basis),
            su11_two_boson(basis),
            su11_one_boson(basis, Mode::A),
            su11_one_boson(basis, Mode::B),
        ] {
            for d in set.commutator_defects() {
                assert!(d.interior_distance(&zero, &inner) < 1e-10, "{:?}", set.realization);
            }
            assert_eq!(set.raising, set.lowering.adjoint());
            assert!(set.diagonal.hermiticity_defect() == 0.0);
        }
    }

    #[test]
    fn diagonal_actions_on_nm_basis() {
        let basis = TwoModeBasis::new(8).unwrap();
        let su2 = su2_generators(basis);
        let su11 = su11_two_boson(basis);
        let q = QuantumNumbers::new(3, 1).unwrap();
        let s = nm_state(basis, q).unwrap();
        let j0 = s.apply(&su2.diagonal).unwrap();
        assert!((j0.amplitude(2, 1).re - 0.5).abs() < 1e-15);
        let q = QuantumNumbers::new(2, 0).unwrap();
        let s = nm_state(basis, q).unwrap();
        assert!((expectation(&s, &su11.diagonal).unwrap().re - 1.5).abs() < 1e-15);
        for q in QuantumNumbers::shell(2) {
            let s = nm_state(basis, q).unwrap();
            let (na, nb) = q.occupations();
            let out = s.apply(&su2.casimir).unwrap();
            assert!((out.amplitude(na as usize, nb as usize).re - 2.0).abs() < 1e-13);
            assert!((out.norm_sqr() - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn one_boson_raising_from_vacuum() {
        let basis = TwoModeBasis::new(4).unwrap();
        let ka = su11_one_boson(basis, Mode::A);
        let vac = StateVector::basis_state(basis, 0, 0).unwrap();
        let out = vac.apply(&ka.raising).unwrap();
        assert!((out.amplitude(2, 0).re - 2f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn discrete_actions() {
        let v = discrete_rep_action(LadderOp::Raise, DiscreteLabel::Su2 { j2: 2, mu2: 0 }).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-15);
        let v = discrete_rep_action(LadderOp::Lower, DiscreteLabel::Su11 { k: 0.75, n: 0 }).unwrap();
        assert_eq!(v, 0.0);
        let v = discrete_rep_action(LadderOp::Diagonal, DiscreteLabel::Su11 { k: 1.0, n: 2 }).unwrap();
        assert_eq!(v, 3.0);
        assert!(discrete_rep_action(LadderOp::Raise, DiscreteLabel::Su2 { j2: 1, mu2: 3 }).is_err());
        assert!(discrete_rep_action(LadderOp::Raise, DiscreteLabel::Su2 { j2: 2, mu2: 1 }).is_err());
        assert!(discrete_rep_action(LadderOp::Raise, DiscreteLabel::Su11 { k: 0.0, n: 1 }).is_err());
    }
}
