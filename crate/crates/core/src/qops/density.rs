use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qops::operator::{partial_trace_op, Operator};
use crate::tol;

/// Hermitian, positive-semidefinite, unit-trace operator.
///
/// Validation runs at construction; a held value is always a physical state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    pub fn new(op: Operator) -> Result<Self> {
        let defect = op.hermiticity_defect();
        if defect > tol::HERMITICITY {
            return Err(Error::NonHermitianInput { defect });
        }
        let trace = op.trace();
        if (trace.re - 1.0).abs() > tol::UNIT_TRACE || trace.im.abs() > tol::UNIT_TRACE {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        let min = op.min_eigenvalue()?;
        if min < -tol::PSD_FLOOR {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        Ok(DensityMatrix { op })
    }

    /// Wraps without re-validating. For internal paths that already validated
    /// the state at its natural (unnormalized) scale, where absolute
    /// tolerances are meaningful; dividing a tiny-probability branch by its
    /// trace amplifies noise past any fixed threshold.
    pub(crate) fn new_unchecked(op: Operator) -> Self {
        DensityMatrix { op }
    }

    /// |ψ⟩⟨ψ| from a ket, normalizing it first.
    pub fn from_pure(ket: &DVector<Complex64>) -> Result<Self> {
        let norm = ket.norm();
        if norm == 0.0 {
            return Err(Error::DomainError { what: "ket norm", value: 0.0 });
        }
        let v = ket / Complex64::new(norm, 0.0);
        DensityMatrix::new(Operator::ket_bra(&v, &v))
    }

    /// Maximally mixed state 1/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        let op = Operator::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        DensityMatrix { op }
    }

    /// Diagonal state from populations (must sum to 1).
    pub fn from_populations(pops: &[f64]) -> Result<Self> {
        let d = pops.len();
        let op = Operator::from_fn(d, |i, j| {
            if i == j {
                Complex64::new(pops[i], 0.0)
            } else {
                Complex64::ZERO
            }
        });
        DensityMatrix::new(op)
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn into_op(self) -> Operator {
        self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.op.get(i, j)
    }

    /// Diagonal entry i as a real population.
    pub fn population(&self, i: usize) -> f64 {
        self.op.get(i, i).re
    }

    /// ⟨A⟩ = Tr(ρA) for Hermitian A.
    pub fn expectation(&self, a: &Operator) -> f64 {
        (self.op() * a).trace().re
    }

    /// |ρ₀₁| of a qubit state.
    pub fn coherence_abs(&self) -> f64 {
        assert_eq!(self.dim(), 2, "coherence_abs is a qubit accessor");
        self.op.get(0, 1).norm()
    }

    /// Purity Tr ρ².
    pub fn purity(&self) -> f64 {
        (self.op() * self.op()).trace().re
    }
}

/// Reduced state on subsystem `keep` of a product space with factor `dims`.
pub fn partial_trace(rho: &DensityMatrix, keep: usize, dims: &[usize]) -> Result<DensityMatrix> {
    let reduced = partial_trace_op(rho.op(), keep, dims)?;
    DensityMatrix::new(reduced)
}

/// Uhlmann fidelity F(ρ,σ) = [Tr √(√ρ σ √ρ)]².
///
/// Equals ⟨ψ|ρ|ψ⟩ when σ = |ψ⟩⟨ψ|.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: sigma.dim() });
    }
    let sr = rho.op().sqrt_psd()?;
    let inner = &(&sr * sigma.op()) * &sr;
    let root = inner.sqrt_psd()?;
    let f = root.trace().re.powi(2);
    Ok(f.clamp(0.0, 1.0))
}
