//! Closed-form similarity transformations `D† X D` of the generators as
//! coefficient tables, plus their materialization as matrices.
//!
//! The ten labels `K0, K±, J0, J±, K±^(a), K±^(b)` close under both
//! displacements, so every transformed generator is a finite linear
//! combination of them and the identity.

use std::collections::BTreeMap;
use std::fmt;

use crate::coherent::TiltParams;
use crate::error::{Error, Result};
use crate::fock::{BosonOperators, Interior, Mode, OperatorMatrix, TwoModeBasis, C64, ONE, ZERO};
use crate::lie::{su11_one_boson_from, su11_two_boson_from, su2_from};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorLabel {
    K0,
    KPlus,
    KMinus,
    J0,
    JPlus,
    JMinus,
    KPlusA,
    KMinusA,
    KPlusB,
    KMinusB,
    Identity,
}

impl GeneratorLabel {
    /// The ten algebra generators (everything except the identity).
    pub const GENERATORS: [GeneratorLabel; 10] = [
        GeneratorLabel::K0,
        GeneratorLabel::KPlus,
        GeneratorLabel::KMinus,
        GeneratorLabel::J0,
        GeneratorLabel::JPlus,
        GeneratorLabel::JMinus,
        GeneratorLabel::KPlusA,
        GeneratorLabel::KMinusA,
        GeneratorLabel::KPlusB,
        GeneratorLabel::KMinusB,
    ];

    pub fn name(self) -> &'static str {
        use GeneratorLabel::*;
        match self {
            K0 => "K0",
            KPlus => "K+",
            KMinus => "K-",
            J0 => "J0",
            JPlus => "J+",
            JMinus => "J-",
            KPlusA => "K+^(a)",
            KMinusA => "K-^(a)",
            KPlusB => "K+^(b)",
            KMinusB => "K-^(b)",
            Identity => "I",
        }
    }
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Finite linear combination of generators.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OperatorCombo {
    terms: BTreeMap<GeneratorLabel, C64>,
}

impl OperatorCombo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(label: GeneratorLabel) -> Self {
        Self::new().with(label, ONE)
    }

    pub fn with(mut self, label: GeneratorLabel, coeff: C64) -> Self {
        self.add_term(label, coeff);
        self
    }

    pub fn add_term(&mut self, label: GeneratorLabel, coeff: C64) {
        *self.terms.entry(label).or_insert(ZERO) += coeff;
    }

    /// Coefficient of `label` (zero if absent).
    pub fn coeff(&self, label: GeneratorLabel) -> C64 {
        self.terms.get(&label).copied().unwrap_or(ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (GeneratorLabel, C64)> + '_ {
        self.terms.iter().map(|(l, c)| (*l, *c))
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            terms: self.terms.iter().map(|(l, c)| (*l, c * s)).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (l, c) in other.terms() {
            out.add_term(l, c);
        }
        out
    }

    /// Largest coefficient difference over the union of supports.
    pub fn distance(&self, other: &Self) -> f64 {
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|l| (self.coeff(*l) - other.coeff(*l)).norm())
            .fold(0.0, f64::max)
    }

    /// `a†a = K0 + J0 - 1/2` and `b†b = K0 - J0 - 1/2`.
    pub fn number_operator(mode: Mode) -> Self {
        let sign = match mode {
            Mode::A => 1.0,
            Mode::B => -1.0,
        };
        Self::single(GeneratorLabel::K0)
            .with(GeneratorLabel::J0, C64::new(sign, 0.0))
            .with(GeneratorLabel::Identity, C64::new(-0.5, 0.0))
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `D†(xi) X D(xi)` for `X` in `{K0, K±, J0, J±, I}`.
pub fn conjugate_su11(label: GeneratorLabel, tilt: &TiltParams) -> Result<OperatorCombo> {
    use GeneratorLabel::*;
    if matches!(label, KPlusA | KMinusA | KPlusB | KMinusB) {
        return Err(Error::UnsupportedLabel(format!("{label} under D(xi)")));
    }
    let xi = tilt.xi();
    if xi.norm() == 0.0 || matches!(label, Identity | J0) {
        return Ok(OperatorCombo::single(label));
    }
    let u = xi / xi.norm();
    let ub = u.conj();
    let alpha = tilt.alpha_xi();
    let beta = tilt.beta_xi();
    let c = OperatorCombo::new();
    Ok(match label {
        K0 => c
            .with(K0, re(2.0 * beta + 1.0))
            .with(KPlus, u * alpha / 2.0)
            .with(KMinus, ub * alpha / 2.0),
        KPlus => c
            .with(K0, ub * alpha)
            .with(KPlus, re(beta + 1.0))
            .with(KMinus, ub * ub * beta),
        KMinus => c
            .with(K0, u * alpha)
            .with(KMinus, re(beta + 1.0))
            .with(KPlus, u * u * beta),
        JPlus => c
            .with(KMinusB, ub * alpha)
            .with(KPlusA, u * alpha)
            .with(JPlus, re(2.0 * beta + 1.0)),
        JMinus => c
            .with(KMinusA, ub * alpha)
            .with(KPlusB, u * alpha)
            .with(JMinus, re(2.0 * beta + 1.0)),
        _ => unreachable!(),
    })
}

/// `D†(chi) X D(chi)` for every generator label.
pub fn conjugate_su2(label: GeneratorLabel, tilt: &TiltParams) -> Result<OperatorCombo> {
    use GeneratorLabel::*;
    let chi = tilt.chi();
    if chi.norm() == 0.0 || matches!(label, Identity | K0) {
        return Ok(OperatorCombo::single(label));
    }
    let v = chi / chi.norm();
    let vb = v.conj();
    let alpha = tilt.alpha_chi();
    let beta = tilt.beta_chi();
    let c = OperatorCombo::new();
    Ok(match label {
        J0 => c
            .with(J0, re(2.0 * beta + 1.0))
            .with(JPlus, v * alpha / 2.0)
            .with(JMinus, vb * alpha / 2.0),
        JPlus => c
            .with(J0, -vb * alpha)
            .with(JPlus, re(beta + 1.0))
            .with(JMinus, vb * vb * beta),
        JMinus => c
            .with(J0, -v * alpha)
            .with(JMinus, re(beta + 1.0))
            .with(JPlus, v * v * beta),
        KPlus => c
            .with(KPlus, re(2.0 * beta + 1.0))
            .with(KPlusA, -v * alpha)
            .with(KPlusB, vb * alpha),
        KMinus => c
            .with(KMinus, re(2.0 * beta + 1.0))
            .with(KMinusA, -vb * alpha)
            .with(KMinusB, v * alpha),
        KPlusA => c
            .with(KPlusA, re(beta + 1.0))
            .with(KPlus, vb * alpha / 2.0)
            .with(KPlusB, -vb * vb * beta),
        KMinusA => c
            .with(KMinusA, re(beta + 1.0))
            .with(KMinus, v * alpha / 2.0)
            .with(KMinusB, -v * v * beta),
        KPlusB => c
            .with(KPlusB, re(beta + 1.0))
            .with(KPlus, -v * alpha / 2.0)
            .with(KPlusA, -v * v * beta),
        KMinusB => c
            .with(KMinusB, re(beta + 1.0))
            .with(KMinus, -vb * alpha / 2.0)
            .with(KMinusA, -vb * vb * beta),
        _ => unreachable!(),
    })
}

fn map_linear(
    combo: &OperatorCombo,
    f: impl Fn(GeneratorLabel) -> Result<OperatorCombo>,
) -> Result<OperatorCombo> {
    let mut out = OperatorCombo::new();
    for (label, c) in combo.terms() {
        out = out.plus(&f(label)?.scaled(c));
    }
    Ok(out)
}

pub fn conjugate_combo_su11(combo: &OperatorCombo, tilt: &TiltParams) -> Result<OperatorCombo> {
    map_linear(combo, |l| conjugate_su11(l, tilt))
}

pub fn conjugate_combo_su2(combo: &OperatorCombo, tilt: &TiltParams) -> Result<OperatorCombo> {
    map_linear(combo, |l| conjugate_su2(l, tilt))
}

/// `D†(chi) D†(xi) X D(xi) D(chi)`: the su(1,1) conjugation first, then
/// su(2), applied term by term.
pub fn conjugate_chain(combo: &OperatorCombo, tilt: &TiltParams) -> Result<OperatorCombo> {
    conjugate_combo_su2(&conjugate_combo_su11(combo, tilt)?, tilt)
}

/// The transformed number operator written out term by term with explicit
/// phases `gamma` (su(1,1)) and `sigma` (su(2)). With `gamma = phi_xi` and
/// `sigma = phi_theta` it coincides with [`conjugate_chain`] applied to
/// [`OperatorCombo::number_operator`].
pub fn number_operator_display(tilt: &TiltParams, mode: Mode, gamma: f64, sigma: f64) -> OperatorCombo {
    use GeneratorLabel::*;
    let (ch, sh) = (tilt.tau.cosh(), tilt.tau.sinh());
    let (ct, st) = (tilt.theta.cos(), tilt.theta.sin());
    let e = |phase: f64| C64::from_polar(1.0, phase);
    let j = match mode {
        Mode::A => 1.0,
        Mode::B => -1.0,
    };
    OperatorCombo::new()
        .with(K0, re(ch))
        .with(KPlus, -e(-gamma) * sh * ct / 2.0)
        .with(KMinus, -e(gamma) * sh * ct / 2.0)
        .with(J0, re(j * ct))
        .with(KPlusA, -e(-(sigma + gamma)) * st * sh / 2.0)
        .with(KPlusB, e(sigma - gamma) * st * sh / 2.0)
        .with(JMinus, -e(sigma) * j * st / 2.0)
        .with(KMinusB, e(gamma - sigma) * st * sh / 2.0)
        .with(KMinusA, -e(sigma + gamma) * st * sh / 2.0)
        .with(JPlus, -e(-sigma) * j * st / 2.0)
        .with(Identity, re(-0.5))
}

/// Matrices of every generator label on one basis.
#[derive(Clone, Debug)]
pub struct GeneratorMatrices {
    basis: TwoModeBasis,
    mats: BTreeMap<GeneratorLabel, OperatorMatrix>,
}

impl GeneratorMatrices {
    pub fn new(basis: TwoModeBasis) -> Self {
        use GeneratorLabel::*;
        let ops = BosonOperators::new(basis);
        let k = su11_two_boson_from(&ops);
        let j = su2_from(&ops);
        let ka = su11_one_boson_from(&ops, Mode::A);
        let kb = su11_one_boson_from(&ops, Mode::B);
        let mats = BTreeMap::from([
            (K0, k.diagonal),
            (KPlus, k.raising),
            (KMinus, k.lowering),
            (J0, j.diagonal),
            (JPlus, j.raising),
            (JMinus, j.lowering),
            (KPlusA, ka.raising),
            (KMinusA, ka.lowering),
            (KPlusB, kb.raising),
            (KMinusB, kb.lowering),
            (Identity, OperatorMatrix::identity(basis)),
        ]);
        Self { basis, mats }
    }

    pub fn basis(&self) -> &TwoModeBasis {
        &self.basis
    }

    pub fn get(&self, label: GeneratorLabel) -> &OperatorMatrix {
        &self.mats[&label]
    }

    pub fn materialize(&self, combo: &OperatorCombo) -> OperatorMatrix {
        let mut out = OperatorMatrix::zeros(self.basis);
        for (label, c) in combo.terms() {
            if c != ZERO {
                out.add_scaled(self.get(label), c);
            }
        }
        out
    }
}

/// Interior distance between `materialize(combo)` and `d† M(label) d`.
pub fn oracle_residual(
    mats: &GeneratorMatrices,
    label: GeneratorLabel,
    combo: &OperatorCombo,
    d: &OperatorMatrix,
    interior: &Interior,
) -> f64 {
    let idx = interior.indices(&mats.basis);
    let mut diff = mats.get(label).conjugated_block(d, &idx);
    for (l, c) in combo.terms() {
        diff -= mats.get(l).block(&idx) * c;
    }
    diff.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
