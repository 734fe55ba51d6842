use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Dense complex square matrix with a dimension tag.
///
/// Entries are addressed row-major as `op[(row, col)]`; this is the only
/// ordering the public surface exposes.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    m: DMatrix<Complex64>,
}

impl Operator {
    /// Wraps a square matrix.
    pub fn from_matrix(m: DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operator must be square");
        Operator { m }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        Operator { m: DMatrix::from_fn(dim, dim, f) }
    }

    /// Builds from a row-major slice of length dim².
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), dim * dim, "entries length must equal dim²");
        Self::from_fn(dim, |i, j| entries[i * dim + j])
    }

    pub fn zeros(dim: usize) -> Self {
        Operator { m: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Operator { m: DMatrix::identity(dim, dim) }
    }

    /// |a⟩⟨b| for two kets of equal length.
    pub fn ket_bra(a: &DVector<Complex64>, b: &DVector<Complex64>) -> Self {
        assert_eq!(a.len(), b.len());
        Operator { m: a * b.adjoint() }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Operator { m: self.m.adjoint() }
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Operator { m: &self.m * z }
    }

    /// Applies the operator to a ket.
    pub fn apply_ket(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.m * v
    }

    /// Largest entrywise magnitude.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise |self - other|.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        (self - other).max_abs()
    }

    /// max |M - M†|.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// max |U†U - 1|.
    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&Operator::identity(self.dim()))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Eigendecomposition of a Hermitian operator: ascending real eigenvalues
    /// and a unitary matrix of eigenvector columns.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
        let defect = self.hermiticity_defect();
        if defect > tol::HERMITICITY {
            return Err(Error::NonHermitianInput { defect });
        }
        // Symmetrize so the decomposition sees an exactly Hermitian input.
        let h = (&self.m + self.m.adjoint()).scale(0.5);
        let eig = h.symmetric_eigen();
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vals: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vecs = DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            eig.eigenvectors[(i, order[j])]
        });
        Ok((vals, vecs))
    }

    /// Smallest eigenvalue of a Hermitian operator.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let (vals, _) = self.hermitian_eigen()?;
        Ok(vals[0])
    }

    /// Square root of a positive-semidefinite Hermitian operator. Eigenvalues
    /// within the PSD floor of zero are clamped to zero.
    pub fn sqrt_psd(&self) -> Result<Operator> {
        let (vals, vecs) = self.hermitian_eigen()?;
        if vals[0] < -tol::PSD_FLOOR {
            return Err(Error::NotPsd { min_eigenvalue: vals[0] });
        }
        let d = DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                Complex64::new(vals[i].max(0.0).sqrt(), 0.0)
            } else {
                Complex64::ZERO
            }
        });
        Ok(Operator { m: &vecs * d * vecs.adjoint() })
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.m[idx]
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                Operator { m: &self.m $op &rhs.m }
            }
        }
        impl $trait for Operator {
            type Output = Operator;
            fn $method(self, rhs: Operator) -> Operator {
                Operator { m: self.m $op rhs.m }
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Which Pauli matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// The 2×2 Pauli matrix σˣ, σʸ or σᶻ.
///
/// Basis convention: index 0 is the excited state |e⟩ (σᶻ eigenvalue +1),
/// index 1 is the ground state |g⟩.
pub fn pauli(which: Pauli) -> Operator {
    let (a, b, c, d) = match which {
        Pauli::X => (0.0.into(), 1.0.into(), 1.0.into(), 0.0.into()),
        Pauli::Y => (
            Complex64::ZERO,
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::ZERO,
        ),
        Pauli::Z => (1.0.into(), 0.0.into(), 0.0.into(), (-1.0).into()),
    };
    Operator::from_row_major(2, &[a, b, c, d])
}

/// e^{-iHt} for Hermitian H, via eigendecomposition. The result is unitary
/// to machine precision because the eigenvector matrix is.
pub fn matexp_hermitian_generator(h: &Operator, t: f64) -> Result<Operator> {
    let (vals, vecs) = h.hermitian_eigen()?;
    let phases = DMatrix::from_fn(h.dim(), h.dim(), |i, j| {
        if i == j {
            Complex64::from_polar(1.0, -vals[i] * t)
        } else {
            Complex64::ZERO
        }
    });
    Ok(Operator::from_matrix(&vecs * phases * vecs.adjoint()))
}

/// Kronecker product a ⊗ b; the left factor is the slower-varying index.
pub fn tensor(a: &Operator, b: &Operator) -> Operator {
    Operator::from_matrix(a.matrix().kronecker(b.matrix()))
}

/// Reduces `op` on a tensor-product space to the subsystem `keep`.
///
/// `dims` lists the factor dimensions, first factor slowest. Works on any
/// operator; trace is preserved by construction.
pub fn partial_trace_op(op: &Operator, keep: usize, dims: &[usize]) -> Result<Operator> {
    let total: usize = dims.iter().product();
    if total != op.dim() || keep >= dims.len() {
        return Err(Error::DimensionMismatch { expected: op.dim(), got: total });
    }
    let n = dims.len();
    // stride[f] = product of dims after factor f (first factor slowest).
    let mut stride = vec![1usize; n];
    for f in (0..n.saturating_sub(1)).rev() {
        stride[f] = stride[f + 1] * dims[f + 1];
    }
    let dk = dims[keep];
    let mut out = DMatrix::<Complex64>::zeros(dk, dk);

    // Walk every environment configuration as a mixed-radix counter.
    let mut digits = vec![0usize; n];
    loop {
        let base: usize = (0..n).filter(|&f| f != keep).map(|f| digits[f] * stride[f]).sum();
        for i in 0..dk {
            for j in 0..dk {
                out[(i, j)] += op.get(base + i * stride[keep], base + j * stride[keep]);
            }
        }
        // increment, skipping the kept factor
        let mut f = n;
        loop {
            if f == 0 {
                return Ok(Operator::from_matrix(out));
            }
            f -= 1;
            if f == keep {
                continue;
            }
            digits[f] += 1;
            if digits[f] < dims[f] {
                break;
            }
            digits[f] = 0;
        }
    }
}
