//! SU(1,1) and SU(2) displacement operators and Perelomov number coherent
//! states.
//!
//! Sign convention: `xi = -(tau/2) e^{-i phi_xi}` and
//! `chi = -(theta/2) e^{-i phi_theta}` throughout.

use crate::error::{Error, Result};
use crate::fock::{matrix_exponential, BosonOperators, Interior, OperatorMatrix, TwoModeBasis, C64, ZERO};
use crate::lie::{nm_state, GeneratorSet, QuantumNumbers};
use crate::special::gamma_ratio;

/// Tail bound required of the su(1,1) coherent-state series.
pub const SERIES_TAIL_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct TiltParams {
    pub tau: f64,
    pub phi_xi: f64,
    pub theta: f64,
    pub phi_theta: f64,
}

impl TiltParams {
    pub fn new(tau: f64, phi_xi: f64, theta: f64, phi_theta: f64) -> Self {
        Self {
            tau,
            phi_xi,
            theta,
            phi_theta,
        }
    }

    pub fn xi(&self) -> C64 {
        -0.5 * self.tau * C64::from_polar(1.0, -self.phi_xi)
    }

    pub fn chi(&self) -> C64 {
        -0.5 * self.theta * C64::from_polar(1.0, -self.phi_theta)
    }

    /// `sinh(2|xi|)`
    pub fn alpha_xi(&self) -> f64 {
        (2.0 * self.xi().norm()).sinh()
    }

    /// `(cosh(2|xi|) - 1) / 2`
    pub fn beta_xi(&self) -> f64 {
        0.5 * ((2.0 * self.xi().norm()).cosh() - 1.0)
    }

    /// `sin(2|chi|)`
    pub fn alpha_chi(&self) -> f64 {
        (2.0 * self.chi().norm()).sin()
    }

    /// `(cos(2|chi|) - 1) / 2`
    pub fn beta_chi(&self) -> f64 {
        0.5 * ((2.0 * self.chi().norm()).cos() - 1.0)
    }

    pub fn zeta_xi(&self) -> C64 {
        -(0.5 * self.tau).tanh() * C64::from_polar(1.0, -self.phi_xi)
    }

    pub fn eta_xi(&self) -> f64 {
        (1.0 - self.zeta_xi().norm_sqr()).ln()
    }

    pub fn zeta_chi(&self) -> C64 {
        -(0.5 * self.theta).tan() * C64::from_polar(1.0, -self.phi_theta)
    }

    pub fn eta_chi(&self) -> f64 {
        (1.0 + self.zeta_chi().norm_sqr()).ln()
    }
}

/// `exp(xi K+ - xi* K-)` in the two-boson realization.
pub fn displacement_su11(basis: TwoModeBasis, tilt: &TiltParams) -> Result<OperatorMatrix> {
    let ops = BosonOperators::new(basis);
    exponentiate(&(&ops.a_dag * &ops.b_dag), &(&ops.b * &ops.a), tilt.xi())
}

pub fn displacement_su11_with(k: &GeneratorSet, tilt: &TiltParams) -> Result<OperatorMatrix> {
    exponentiate(&k.raising, &k.lowering, tilt.xi())
}

/// `exp(z X+ - z* X-)`
fn exponentiate(raising: &OperatorMatrix, lowering: &OperatorMatrix, z: C64) -> Result<OperatorMatrix> {
    let mut exponent = raising.scale(z);
    exponent.add_scaled(lowering, -z.conj());
    matrix_exponential(&exponent)
}

/// `exp(chi J+ - chi* J-)`.
pub fn displacement_su2(basis: TwoModeBasis, tilt: &TiltParams) -> Result<OperatorMatrix> {
    let ops = BosonOperators::new(basis);
    exponentiate(&(&ops.a_dag * &ops.b), &(&ops.b_dag * &ops.a), tilt.chi())
}

pub fn displacement_su2_with(j: &GeneratorSet, tilt: &TiltParams) -> Result<OperatorMatrix> {
    exponentiate(&j.raising, &j.lowering, tilt.chi())
}

/// Default series length for the su(1,1) expansion.
pub fn default_max_s(tilt: &TiltParams) -> usize {
    8 * (1 + (tilt.zeta_xi().norm() * 20.0).ceil() as usize)
}

/// Coefficients of `D(xi)|k, n>` over `|k, t>`, `t = 0, 1, ..., n + max_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct Su11Expansion {
    pub k: f64,
    pub n: u32,
    pub coefficients: Vec<C64>,
    pub tail_estimate: f64,
}

fn valid_bargmann(k: f64) -> bool {
    let two_k = 2.0 * k;
    let four_k = 4.0 * k;
    (two_k >= 1.0 && two_k.fract() == 0.0) || four_k == 1.0 || four_k == 3.0
}

/// Perelomov number coherent state of su(1,1),
///
/// ```text
/// |zeta, k, n> = Σ_s zeta^s/s! Σ_{j<=n} (-zeta*)^j/j! e^{eta(k+n-j)}
///     · sqrt(Γ(2k+n) Γ(2k+n-j+s)) / Γ(2k+n-j)
///     · sqrt(Γ(n+1) Γ(n-j+s+1)) / Γ(n-j+1)  |k, n-j+s>
/// ```
///
/// with the outer sum cut at `max_s` and the cut checked against
/// [`SERIES_TAIL_TOL`].
pub fn perelomov_su11_coefficients(
    k: f64,
    n: u32,
    tilt: &TiltParams,
    max_s: Option<usize>,
) -> Result<Su11Expansion> {
    if !valid_bargmann(k) {
        return Err(Error::OutOfRange(format!("Bargmann index k = {k}")));
    }
    let max_s = max_s.unwrap_or_else(|| default_max_s(tilt));
    let zeta = tilt.zeta_xi();
    let eta = tilt.eta_xi();
    let nf = n as f64;
    let mut coefficients = vec![ZERO; n as usize + max_s + 1];
    for s in 0..=max_s {
        let zs = zeta.powu(s as u32);
        for j in 0..=n {
            let jf = j as f64;
            let sf = s as f64;
            let zj = (-zeta.conj()).powu(j);
            if zs == ZERO || zj == ZERO {
                continue;
            }
            let Some(ratio) = gamma_ratio(
                &[2.0 * k + nf, 2.0 * k + nf - jf + sf, nf + 1.0, nf - jf + sf + 1.0],
                &[
                    2.0 * k + nf - jf,
                    2.0 * k + nf - jf,
                    nf - jf + 1.0,
                    nf - jf + 1.0,
                    sf + 1.0,
                    sf + 1.0,
                    jf + 1.0,
                    jf + 1.0,
                ],
            ) else {
                continue;
            };
            // `ratio` is the square of the Γ and factorial prefactor.
            let mag = ratio.sqrt() * (eta * (k + nf - jf)).exp();
            let t = (n - j) as usize + s;
            coefficients[t] += zs * zj * mag;
        }
    }
    let tail_estimate = geometric_tail(&coefficients);
    if tail_estimate > SERIES_TAIL_TOL {
        return Err(Error::NonConvergent {
            max_s,
            tail: tail_estimate,
        });
    }
    Ok(Su11Expansion {
        k,
        n,
        coefficients,
        tail_estimate,
    })
}

fn geometric_tail(c: &[C64]) -> f64 {
    let last = c.last().map(|z| z.norm()).unwrap_or(0.0);
    if last == 0.0 {
        return 0.0;
    }
    let prev = c[c.len() - 2].norm();
    let rho = if prev > 0.0 { last / prev } else { f64::INFINITY };
    if rho >= 1.0 {
        f64::INFINITY
    } else {
        last * rho / (1.0 - rho)
    }
}

/// Coefficients of `D(chi)|j, mu>` over `|j, mu'>`, `mu' = -j, ..., j`
/// (index `mu' + j`).
#[derive(Clone, Debug, PartialEq)]
pub struct Su2Expansion {
    pub j2: u32,
    pub mu2: i32,
    pub coefficients: Vec<C64>,
}

impl Su2Expansion {
    /// Coefficient on `|j, mu2'/2>`.
    pub fn coefficient(&self, mu2: i32) -> C64 {
        let off = mu2 + self.j2 as i32;
        if off < 0 || off % 2 != 0 || off as u32 > 2 * self.j2 {
            return ZERO;
        }
        self.coefficients[(off / 2) as usize]
    }
}

/// Perelomov number coherent state of su(2),
///
/// ```text
/// |zeta, j, mu> = Σ_{n=0}^{mu+j} Σ_{s=0}^{j-mu+n} zeta^s/s! (-zeta*)^n/n!
///     e^{eta(mu-n)} Γ(j-mu+n+1)/Γ(j+mu-n+1)
///     · [Γ(j+mu+1) Γ(j+mu-n+s+1) / (Γ(j-mu+1) Γ(j-mu+n-s+1))]^{1/2}  |j, mu-n+s>
/// ```
///
/// Outer index `n`, inner `s`; targets with `|mu - n + s| > j` are dropped.
/// The expansion depends on `theta` only through `tan(theta/2)`, so it
/// reproduces `D(chi)` for `|theta| < pi`; beyond that the two differ by the
/// spinor sign `(-1)^{2j}`.
pub fn perelomov_su2_coefficients(j2: u32, mu2: i32, tilt: &TiltParams) -> Result<Su2Expansion> {
    if mu2.unsigned_abs() > j2 || (j2 as i32 - mu2) % 2 != 0 {
        return Err(Error::OutOfRange(format!("su(2) label 2j={j2}, 2mu={mu2}")));
    }
    let j = j2 as f64 / 2.0;
    let mu = mu2 as f64 / 2.0;
    let zeta = tilt.zeta_chi();
    let eta = tilt.eta_chi();
    let mut coefficients = vec![ZERO; j2 as usize + 1];
    let n_top = ((j2 as i32 + mu2) / 2) as u32;
    for n in 0..=n_top {
        let nf = n as f64;
        let zn = (-zeta.conj()).powu(n);
        let s_top = ((j2 as i32 - mu2) / 2) as u32 + n;
        for s in 0..=s_top {
            let sf = s as f64;
            let target2 = mu2 - 2 * n as i32 + 2 * s as i32;
            if target2.unsigned_abs() > j2 {
                continue;
            }
            let zs = zeta.powu(s);
            if zs == ZERO || zn == ZERO {
                continue;
            }
            let Some(outer) = gamma_ratio(&[j - mu + nf + 1.0], &[j + mu - nf + 1.0]) else {
                continue;
            };
            let Some(inner) = gamma_ratio(
                &[j + mu + 1.0, j + mu - nf + sf + 1.0],
                &[j - mu + 1.0, j - mu + nf - sf + 1.0],
            ) else {
                continue;
            };
            let Some(facts) = gamma_ratio(&[], &[sf + 1.0, nf + 1.0]) else {
                continue;
            };
            let mag = facts * (eta * (mu - nf)).exp() * outer * inner.sqrt();
            coefficients[((target2 + j2 as i32) / 2) as usize] += zs * zn * mag;
        }
    }
    Ok(Su2Expansion {
        j2,
        mu2,
        coefficients,
    })
}

/// Largest difference between the closed-form su(1,1) expansion of `|N, m>`
/// and the column of the matrix-built `D(xi)`, restricted to targets inside
/// `interior`. The two-boson tower at fixed `m` carries `k = (|m|+1)/2`.
pub fn su11_oracle_residual(
    d_xi: &OperatorMatrix,
    tilt: &TiltParams,
    q: QuantumNumbers,
    interior: &Interior,
) -> Result<f64> {
    let basis = *d_xi.basis();
    let m = q.angular();
    let k = (m.unsigned_abs() as f64 + 1.0) / 2.0;
    let exp = perelomov_su11_coefficients(k, q.radial(), tilt, None)?;
    let col = nm_state(basis, q)?.apply(d_xi)?;
    let mut worst: f64 = 0.0;
    for t in 0.. {
        let n_tot = 2 * t + m.unsigned_abs();
        let (na, nb) = QuantumNumbers::new(n_tot, m)?.occupations();
        if !interior.contains(na as usize, nb as usize) {
            break;
        }
        let closed = exp.coefficients.get(t as usize).copied().unwrap_or(ZERO);
        worst = worst.max((col.amplitude(na as usize, nb as usize) - closed).norm());
    }
    Ok(worst)
}

/// As [`su11_oracle_residual`] for `D(chi)` inside the `N` shell
/// (`j = N/2`, `mu = m/2`).
pub fn su2_oracle_residual(
    d_chi: &OperatorMatrix,
    tilt: &TiltParams,
    q: QuantumNumbers,
) -> Result<f64> {
    let basis = *d_chi.basis();
    let exp = perelomov_su2_coefficients(q.principal(), q.angular(), tilt)?;
    let col = nm_state(basis, q)?.apply(d_chi)?;
    let mut worst: f64 = 0.0;
    for target in QuantumNumbers::shell(q.principal()) {
        let (na, nb) = target.occupations();
        let amp = col.amplitude(na as usize, nb as usize);
        worst = worst.max((amp - exp.coefficient(target.angular())).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn derived_parameters_satisfy_identities() {
        for tilt in [
            TiltParams::new(0.3, 1.0, 1.1, 0.2),
            TiltParams::new(-0.7, 0.0, 3.0 * FRAC_PI_2, PI),
        ] {
            let a = tilt.alpha_xi();
            let b = tilt.beta_xi();
            assert!(((2.0 * b + 1.0).powi(2) - a * a - 1.0).abs() < 1e-13);
            let a = tilt.alpha_chi();
            let b = tilt.beta_chi();
            assert!(((2.0 * b + 1.0).powi(2) + a * a - 1.0).abs() < 1e-13);
            assert!(tilt.zeta_xi().norm() < 1.0);
        }
        let t = TiltParams::new(0.2, PI / 3.0, 0.0, 0.0);
        assert!((t.xi() - C64::from_polar(-0.1, -PI / 3.0)).norm() < 1e-16);
    }

    #[test]
    fn zero_tilt_is_identity() {
        let basis = TwoModeBasis::new(5).unwrap();
        let id = OperatorMatrix::identity(basis);
        let tilt = TiltParams::default();
        assert_eq!(displacement_su11(basis, &tilt).unwrap(), id);
        assert_eq!(displacement_su2(basis, &tilt).unwrap(), id);
        let e = perelomov_su11_coefficients(1.5, 2, &tilt, None).unwrap();
        assert_eq!(e.coefficients.iter().filter(|z| **z != ZERO).count(), 1);
        assert!((e.coefficients[2] - C64::new(1.0, 0.0)).norm() < 1e-15);
        let e = perelomov_su2_coefficients(3, 1, &tilt).unwrap();
        assert_eq!(e.coefficient(1), C64::new(1.0, 0.0));
        assert!((e.coefficients.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vacuum_expansion_is_geometric() {
        let tilt = TiltParams::new(0.1254, PI / 3.0, 0.0, 0.0);
        let z = tilt.zeta_xi();
        let e = perelomov_su11_coefficients(0.5, 0, &tilt, None).unwrap();
        let pref = (1.0 - z.norm_sqr()).sqrt();
        for (s, c) in e.coefficients.iter().enumerate() {
            assert!((c - z.powu(s as u32) * pref).norm() < 1e-15);
        }
    }

    #[test]
    fn spin_half_quarter_turn() {
        let tilt = TiltParams::new(0.0, 0.0, FRAC_PI_2, 0.0);
        let e = perelomov_su2_coefficients(1, 1, &tilt).unwrap();
        let mags: Vec<f64> = e.coefficients.iter().map(|z| z.norm()).collect();
        assert!((mags[0] - FRAC_PI_4.cos()).abs() < 1e-14);
        assert!((mags[1] - FRAC_PI_4.sin()).abs() < 1e-14);

        // Same rotation from the matrix: |N=1, m=1> = |1,0>.
        let basis = TwoModeBasis::new(3).unwrap();
        let d = displacement_su2(basis, &tilt).unwrap();
        let out = nm_state(basis, QuantumNumbers::new(1, 1).unwrap())
            .unwrap()
            .apply(&d)
            .unwrap();
        assert!((out.amplitude(1, 0).norm_sqr() + out.amplitude(0, 1).norm_sqr() - 1.0).abs() < 1e-14);
        assert!((out.amplitude(0, 1).norm() - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn su2_displacement_is_shell_diagonal() {
        let basis = TwoModeBasis::new(6).unwrap();
        let d = displacement_su2(basis, &TiltParams::new(0.0, 0.0, 1.3, 0.4)).unwrap();
        for (i, (a, b)) in basis.occupations().enumerate() {
            for (j, (c, e)) in basis.occupations().enumerate() {
                if a + b != c + e {
                    assert_eq!(d.matrix()[(i, j)], ZERO);
                }
            }
        }
    }

    #[test]
    fn series_cut_too_short_is_reported() {
        let tilt = TiltParams::new(2.5, 0.0, 0.0, 0.0);
        let r = perelomov_su11_coefficients(0.5, 1, &tilt, Some(3));
        assert!(matches!(r, Err(Error::NonConvergent { .. })));
        assert!(perelomov_su11_coefficients(0.6, 1, &tilt, None).is_err());
        assert!(perelomov_su11_coefficients(0.25, 1, &TiltParams::default(), None).is_ok());
    }

    #[test]
    fn expansions_are_normalized() {
        let tilt = TiltParams::new(0.3, 0.7, 1.1, 2.0);
        for (k, n) in [(0.5, 0), (1.0, 3), (2.5, 2), (0.25, 1), (0.75, 4)] {
            let e = perelomov_su11_coefficients(k, n, &tilt, None).unwrap();
            let norm: f64 = e.coefficients.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12, "k={k} n={n}: {norm}");
        }
        for (j2, mu2) in [(1, -1), (4, 2), (6, 0), (5, 5)] {
            let e = perelomov_su2_coefficients(j2, mu2, &tilt).unwrap();
            let norm: f64 = e.coefficients.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }
}
