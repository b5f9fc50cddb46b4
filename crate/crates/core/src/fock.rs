//! Truncated two-mode Fock space.
//!
//! States are labelled `|n_a, n_b>` with `0 <= n_a, n_b <= cutoff` and stored
//! in lexicographic order (`n_a` major). Operators are dense complex matrices
//! over that basis. Products skip exact zeros, so the block-sparse
//! displacement operators and bilinear generators multiply quickly even at
//! cutoff 24 (dimension 625).

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Tolerance for the "normalized" tag on state vectors.
pub const NORM_TOL: f64 = 1e-12;

/// Which of the two oscillator modes an operator or statistic refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    A,
    B,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::A => "a",
            Mode::B => "b",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TwoModeBasis {
    cutoff: usize,
}

impl TwoModeBasis {
    pub fn new(cutoff: usize) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::InvalidCutoff(cutoff));
        }
        Ok(Self { cutoff })
    }

    /// Largest occupation per mode (inclusive).
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn levels(&self) -> usize {
        self.cutoff + 1
    }

    pub fn dim(&self) -> usize {
        self.levels() * self.levels()
    }

    pub fn index(&self, na: usize, nb: usize) -> Option<usize> {
        (na <= self.cutoff && nb <= self.cutoff).then(|| na * self.levels() + nb)
    }

    /// Inverse of [`index`](Self::index). Panics if `i >= dim`.
    pub fn occupation(&self, i: usize) -> (usize, usize) {
        assert!(i < self.dim(), "basis index {i} out of range");
        (i / self.levels(), i % self.levels())
    }

    /// All basis labels in storage order.
    pub fn occupations(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.dim()).map(|i| self.occupation(i))
    }

    fn check_same(&self, other: &TwoModeBasis) -> Result<()> {
        if self != other {
            return Err(Error::BasisMismatch {
                left: self.cutoff,
                right: other.cutoff,
            });
        }
        Ok(())
    }
}

/// The square sub-block `n_a, n_b <= max_occupation` on which truncated
/// operator identities are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interior {
    max_occupation: usize,
}

impl Interior {
    pub fn up_to(max_occupation: usize) -> Self {
        Self { max_occupation }
    }

    /// `interior(cutoff - buffer)`, clamped at zero.
    pub fn with_buffer(basis: &TwoModeBasis, buffer: usize) -> Self {
        Self::up_to(basis.cutoff().saturating_sub(buffer))
    }

    pub fn max_occupation(&self) -> usize {
        self.max_occupation
    }

    pub fn contains(&self, na: usize, nb: usize) -> bool {
        na <= self.max_occupation && nb <= self.max_occupation
    }

    pub fn indices(&self, basis: &TwoModeBasis) -> Vec<usize> {
        basis
            .occupations()
            .enumerate()
            .filter(|(_, (na, nb))| self.contains(*na, *nb))
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    basis: TwoModeBasis,
    data: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn from_matrix(basis: TwoModeBasis, data: DMatrix<C64>) -> Self {
        assert_eq!(data.nrows(), basis.dim());
        assert_eq!(data.ncols(), basis.dim());
        Self { basis, data }
    }

    pub fn zeros(basis: TwoModeBasis) -> Self {
        let d = basis.dim();
        Self::from_matrix(basis, DMatrix::zeros(d, d))
    }

    pub fn identity(basis: TwoModeBasis) -> Self {
        let d = basis.dim();
        Self::from_matrix(basis, DMatrix::identity(d, d))
    }

    /// Diagonal operator with entries `f(n_a, n_b)`.
    pub fn diagonal(basis: TwoModeBasis, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut out = Self::zeros(basis);
        for (i, (na, nb)) in basis.occupations().enumerate() {
            out.data[(i, i)] = C64::new(f(na, nb), 0.0);
        }
        out
    }

    pub fn basis(&self) -> &TwoModeBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.data
    }

    /// `<n_a', n_b'| M |n_a, n_b>`; zero outside the truncation.
    pub fn element(&self, bra: (usize, usize), ket: (usize, usize)) -> C64 {
        match (
            self.basis.index(bra.0, bra.1),
            self.basis.index(ket.0, ket.1),
        ) {
            (Some(i), Some(j)) => self.data[(i, j)],
            _ => ZERO,
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix(self.basis, self.data.adjoint())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_matrix(self.basis, self.data.map(|z| z * s))
    }

    /// `self += s * other`, touching only the nonzero entries of `other`.
    pub fn add_scaled(&mut self, other: &Self, s: C64) {
        assert_eq!(self.basis, other.basis, "basis mismatch");
        for (x, y) in self.data.iter_mut().zip(other.data.iter()) {
            if *y != ZERO {
                *x += y * s;
            }
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.basis.check_same(&other.basis)?;
        Ok(Self::from_matrix(self.basis, &self.data + &other.data))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.basis.check_same(&other.basis)?;
        Ok(Self::from_matrix(
            self.basis,
            sparse_aware_product(&self.data, &other.data),
        ))
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// `u† · self · u`, evaluated so that both products have the (usually
    /// sparse) `u` on the right.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        let right = self * u;
        (&right.adjoint() * u).adjoint()
    }

    /// The `indices x indices` block of `u† · self · u`, computed from the
    /// selected columns of `u` only.
    pub fn conjugated_block(&self, u: &Self, indices: &[usize]) -> DMatrix<C64> {
        let cols = u.data.select_columns(indices);
        let right = sparse_aware_product(&self.data, &cols);
        sparse_aware_product(&cols.adjoint(), &right)
    }

    /// The `indices x indices` block of `self`.
    pub fn block(&self, indices: &[usize]) -> DMatrix<C64> {
        self.data.select_rows(indices).select_columns(indices)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|self - other|` entry with both indices inside `interior`.
    pub fn interior_distance(&self, other: &Self, interior: &Interior) -> f64 {
        assert_eq!(self.basis, other.basis, "basis mismatch");
        let idx = interior.indices(&self.basis);
        let mut worst: f64 = 0.0;
        for &j in &idx {
            for &i in &idx {
                worst = worst.max((self.data[(i, j)] - other.data[(i, j)]).norm());
            }
        }
        worst
    }

    /// Largest `|self_ij|` with both indices inside `interior`.
    pub fn interior_max_abs(&self, interior: &Interior) -> f64 {
        let idx = interior.indices(&self.basis);
        let mut worst: f64 = 0.0;
        for &j in &idx {
            for &i in &idx {
                worst = worst.max(self.data[(i, j)].norm());
            }
        }
        worst
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.data - self.data.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Connected components of the coupling graph `M_ij != 0 || M_ji != 0`.
    /// `M` is block diagonal after permuting each component together.
    pub fn coupled_blocks(&self) -> Vec<Vec<usize>> {
        let n = self.basis.dim();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for j in 0..n {
            for i in 0..n {
                if i != j && self.data[(i, j)] != ZERO {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(i);
        }
        groups
    }
}

fn sparse_aware_product(lhs: &DMatrix<C64>, rhs: &DMatrix<C64>) -> DMatrix<C64> {
    let (n, k) = lhs.shape();
    let m = rhs.ncols();
    assert_eq!(k, rhs.nrows());
    let mut out = DMatrix::<C64>::zeros(n, m);
    if n == 0 || m == 0 {
        return out;
    }
    let a = lhs.as_slice();
    let nnz = a.iter().filter(|z| **z != ZERO).count();
    let sparse_cols: Option<Vec<Vec<(usize, C64)>>> = (nnz * 4 < n * k).then(|| {
        (0..k)
            .map(|p| {
                a[p * n..(p + 1) * n]
                    .iter()
                    .enumerate()
                    .filter(|(_, z)| **z != ZERO)
                    .map(|(i, z)| (i, *z))
                    .collect()
            })
            .collect()
    });
    let out_data = out.as_mut_slice();
    for j in 0..m {
        let out_col = &mut out_data[j * n..(j + 1) * n];
        for p in 0..k {
            let b = rhs[(p, j)];
            if b == ZERO {
                continue;
            }
            match &sparse_cols {
                Some(cols) => {
                    for &(i, z) in &cols[p] {
                        out_col[i] += z * b;
                    }
                }
                None => {
                    for (o, z) in out_col.iter_mut().zip(&a[p * n..(p + 1) * n]) {
                        *o += z * b;
                    }
                }
            }
        }
    }
    out
}

impl<'a> Add<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &'a OperatorMatrix) -> OperatorMatrix {
        self.try_add(rhs).expect("operator basis mismatch")
    }
}

impl<'a> Sub<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &'a OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.basis, rhs.basis, "operator basis mismatch");
        OperatorMatrix::from_matrix(self.basis, &self.data - &rhs.data)
    }
}

impl<'a> Mul<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &'a OperatorMatrix) -> OperatorMatrix {
        self.try_mul(rhs).expect("operator basis mismatch")
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        self.scale_real(-1.0)
    }
}

/// Ladder operators of both modes on a truncated basis.
#[derive(Clone, Debug)]
pub struct BosonOperators {
    pub a: OperatorMatrix,
    pub a_dag: OperatorMatrix,
    pub b: OperatorMatrix,
    pub b_dag: OperatorMatrix,
}

impl BosonOperators {
    pub fn new(basis: TwoModeBasis) -> Self {
        let mut a = OperatorMatrix::zeros(basis);
        let mut b = OperatorMatrix::zeros(basis);
        for (j, (na, nb)) in basis.occupations().enumerate() {
            if na > 0 {
                let i = basis.index(na - 1, nb).unwrap();
                a.data[(i, j)] = C64::new((na as f64).sqrt(), 0.0);
            }
            if nb > 0 {
                let i = basis.index(na, nb - 1).unwrap();
                b.data[(i, j)] = C64::new((nb as f64).sqrt(), 0.0);
            }
        }
        let a_dag = a.adjoint();
        let b_dag = b.adjoint();
        Self { a, a_dag, b, b_dag }
    }

    pub fn basis(&self) -> &TwoModeBasis {
        self.a.basis()
    }

    pub fn annihilation(&self, mode: Mode) -> &OperatorMatrix {
        match mode {
            Mode::A => &self.a,
            Mode::B => &self.b,
        }
    }

    pub fn creation(&self, mode: Mode) -> &OperatorMatrix {
        match mode {
            Mode::A => &self.a_dag,
            Mode::B => &self.b_dag,
        }
    }

    /// `a†a` or `b†b` built as the product of ladder matrices.
    pub fn number(&self, mode: Mode) -> OperatorMatrix {
        self.creation(mode) * self.annihilation(mode)
    }
}

pub fn boson_operators(basis: TwoModeBasis) -> BosonOperators {
    BosonOperators::new(basis)
}

/// `exp(M)`.
///
/// The matrix is split into the connected blocks of its coupling graph and
/// each block is exponentiated separately (Padé scaling and squaring), which
/// is exact for block-diagonal structure and keeps the dense work per block
/// small for the generators used here.
pub fn matrix_exponential(m: &OperatorMatrix) -> Result<OperatorMatrix> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let basis = *m.basis();
    let mut out = OperatorMatrix::zeros(basis);
    for block in m.coupled_blocks() {
        if block.len() == 1 {
            let i = block[0];
            out.data[(i, i)] = m.data[(i, i)].exp();
            continue;
        }
        let sub = DMatrix::from_fn(block.len(), block.len(), |r, c| {
            m.data[(block[r], block[c])]
        });
        let e = sub.exp();
        for (c, &jc) in block.iter().enumerate() {
            for (r, &ir) in block.iter().enumerate() {
                out.data[(ir, jc)] = e[(r, c)];
            }
        }
    }
    if !out.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: TwoModeBasis,
    amplitudes: DVector<C64>,
    normalized: bool,
}

impl StateVector {
    /// Untagged state from raw amplitudes; the tag is set if the norm is 1.
    pub fn from_amplitudes(basis: TwoModeBasis, amplitudes: DVector<C64>) -> Self {
        assert_eq!(amplitudes.len(), basis.dim());
        let normalized = (amplitudes.norm_squared() - 1.0).abs() <= NORM_TOL;
        Self {
            basis,
            amplitudes,
            normalized,
        }
    }

    pub fn basis_state(basis: TwoModeBasis, na: usize, nb: usize) -> Result<Self> {
        let i = basis.index(na, nb).ok_or(Error::OutOfCutoff {
            na: na as u32,
            nb: nb as u32,
            cutoff: basis.cutoff(),
        })?;
        let mut amplitudes = DVector::zeros(basis.dim());
        amplitudes[i] = ONE;
        Ok(Self {
            basis,
            amplitudes,
            normalized: true,
        })
    }

    pub fn basis(&self) -> &TwoModeBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, na: usize, nb: usize) -> C64 {
        self.basis
            .index(na, nb)
            .map(|i| self.amplitudes[i])
            .unwrap_or(ZERO)
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn normalize(mut self) -> Self {
        let n = self.amplitudes.norm();
        if n > 0.0 {
            self.amplitudes /= C64::new(n, 0.0);
            self.normalized = true;
        }
        self
    }

    /// `M |self>`; basis mismatch is an error.
    pub fn apply(&self, m: &OperatorMatrix) -> Result<Self> {
        self.basis.check_same(m.basis())?;
        Ok(Self::from_amplitudes(self.basis, &m.data * &self.amplitudes))
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.basis.check_same(&other.basis)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Probability mass outside `interior`; the truncation-leakage measure.
    pub fn weight_outside(&self, interior: &Interior) -> f64 {
        self.basis
            .occupations()
            .zip(self.amplitudes.iter())
            .filter(|((na, nb), _)| !interior.contains(*na, *nb))
            .map(|(_, z)| z.norm_sqr())
            .sum()
    }
}

/// `<state| M |state>`.
pub fn expectation(state: &StateVector, m: &OperatorMatrix) -> Result<C64> {
    state.basis.check_same(m.basis())?;
    Ok(state.amplitudes.dotc(&(&m.data * &state.amplitudes)))
}
