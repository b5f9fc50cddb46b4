//! Gamma-function ratios, associated Laguerre polynomials and Gauss-Laguerre
//! quadrature.

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

/// `ln Γ(x)` for `x > 0`; `None` at the poles `x = 0, -1, -2, ...`.
///
/// Negative non-integer arguments are not needed here and also yield `None`.
pub fn ln_gamma_checked(x: f64) -> Option<f64> {
    if x <= 0.0 {
        return None;
    }
    if x.fract() == 0.0 && x <= 171.0 {
        return Some(ln_factorial(x as u64 - 1));
    }
    Some(ln_gamma(x))
}

pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// `exp(Σ ln Γ(num) - Σ ln Γ(den))`, with the convention that a pole in the
/// denominator makes the whole ratio zero. A pole in the numerator yields
/// `None`.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Option<f64> {
    let mut acc = 0.0;
    for &x in den {
        match ln_gamma_checked(x) {
            Some(v) => acc -= v,
            None => return Some(0.0),
        }
    }
    for &x in num {
        acc += ln_gamma_checked(x)?;
    }
    Some(acc.exp())
}

/// Associated Laguerre polynomial `L_n^alpha(x)` by the three-term
/// recurrence.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Nodes and weights of the `n`-point Gauss-Laguerre rule for
/// `∫_0^∞ f(u) e^{-u} du` (Golub-Welsch).
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0 * i as f64 + 1.0
        } else if i + 1 == j || j + 1 == i {
            (i.max(j)) as f64
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}
