//! CPTP maps as finite Kraus sets, plus the two extraction routes used by the
//! protocols: unitary-plus-environment dilations and Lindblad semigroups via
//! the Choi matrix.
//!
//! Vectorization convention: column-stacking, so vec(AρB) = (Bᵀ ⊗ A) vec(ρ).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qops::{tensor, DensityMatrix, Operator};
use crate::tol;

/// A CPTP map as a list of Kraus operators with Σ K†K = 1.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    ops: Vec<Operator>,
}

impl KrausChannel {
    /// Validates completeness and the list-length bound (at most dim²
    /// operators, the size any channel admits).
    pub fn new(ops: Vec<Operator>) -> Result<Self> {
        let dim = match ops.first() {
            Some(k) => k.dim(),
            None => return Err(Error::IncompleteKraus { defect: 1.0 }),
        };
        for k in &ops {
            if k.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: k.dim() });
            }
        }
        if ops.len() > dim * dim {
            return Err(Error::KrausListTooLong { len: ops.len(), max: dim * dim });
        }
        let ch = KrausChannel { dim, ops };
        let defect = ch.completeness_defect();
        if defect > tol::KRAUS_COMPLETENESS {
            return Err(Error::IncompleteKraus { defect });
        }
        Ok(ch)
    }

    /// The identity channel {1}.
    pub fn identity(dim: usize) -> Self {
        KrausChannel { dim, ops: vec![Operator::identity(dim)] }
    }

    /// Unitary conjugation ρ ↦ UρU†.
    pub fn from_unitary(u: Operator) -> Result<Self> {
        let defect = u.unitarity_defect();
        if defect > tol::UNITARITY {
            return Err(Error::NonUnitaryInput { defect });
        }
        Ok(KrausChannel { dim: u.dim(), ops: vec![u] })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[Operator] {
        &self.ops
    }

    /// max |Σ K†K − 1|.
    pub fn completeness_defect(&self) -> f64 {
        let mut sum = Operator::zeros(self.dim);
        for k in &self.ops {
            sum = &sum + &(&k.adjoint() * k);
        }
        sum.max_abs_diff(&Operator::identity(self.dim))
    }

    /// Linear action Σ KρK† on an arbitrary operator (no state validation).
    pub fn apply_op(&self, rho: &Operator) -> Operator {
        let mut out = Operator::zeros(self.dim);
        for k in &self.ops {
            out = &out + &(&(k * rho) * &k.adjoint());
        }
        out
    }

    /// Applies the channel to a state; the output is validated.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: rho.dim() });
        }
        DensityMatrix::new(self.apply_op(rho.op()))
    }
}

/// Kraus set of the reduced system dynamics of a joint unitary on
/// system ⊗ environment with a diagonal environment state:
/// K_ij = √P_j ⟨i|U|j⟩ over environment indices i, j.
pub fn kraus_from_dilation(u: &Operator, env_state: &DensityMatrix) -> Result<KrausChannel> {
    let defect = u.unitarity_defect();
    if defect > tol::UNITARITY {
        return Err(Error::NonUnitaryInput { defect });
    }
    let de = env_state.dim();
    let off = Operator::from_fn(de, |i, j| if i == j { Complex64::ZERO } else { env_state.get(i, j) });
    let od = off.max_abs();
    if od > tol::ENV_DIAGONAL {
        return Err(Error::NonDiagonalEnvironment { defect: od });
    }
    if !u.dim().is_multiple_of(de) {
        return Err(Error::DimensionMismatch { expected: u.dim(), got: de });
    }
    let ds = u.dim() / de;

    let mut ops = Vec::with_capacity(de * de);
    for i in 0..de {
        for j in 0..de {
            let w = env_state.population(j).max(0.0).sqrt();
            // ⟨i|U|j⟩ picks the (i, j) environment block; system is the
            // slower-varying (first) factor.
            let block = Operator::from_fn(ds, |b, bp| u.get(b * de + i, bp * de + j));
            ops.push(block.scale(Complex64::new(w, 0.0)));
        }
    }
    KrausChannel::new(ops)
}

/// Choi matrix (1 ⊗ Φ) applied to the unnormalized maximally entangled
/// operator: C = Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|).
pub fn choi(ch: &KrausChannel) -> Operator {
    let d = ch.dim();
    let mut c = Operator::zeros(d * d);
    for k in ch.ops() {
        // w_K = Σ_i |i⟩ ⊗ K|i⟩ gives C = Σ_K w_K w_K†.
        let mut w = DVector::<Complex64>::zeros(d * d);
        for i in 0..d {
            for m in 0..d {
                w[i * d + m] = k.get(m, i);
            }
        }
        c = &c + &Operator::ket_bra(&w, &w);
    }
    c
}

/// Canonical Kraus set from a PSD Choi matrix. Eigenvalues below the cutoff
/// are discarded, so the set has at most dim² members.
pub fn kraus_from_choi(c: &Operator) -> Result<KrausChannel> {
    let (vals, vecs) = c.hermitian_eigen()?;
    if vals[0] < -tol::CHOI_PSD {
        return Err(Error::NotPsd { min_eigenvalue: vals[0] });
    }
    let d2 = c.dim();
    let d = (d2 as f64).sqrt().round() as usize;
    if d * d != d2 {
        return Err(Error::DimensionMismatch { expected: d * d, got: d2 });
    }
    let mut ops = Vec::new();
    for (k, &lam) in vals.iter().enumerate() {
        if lam < tol::EIGENVALUE_CUTOFF {
            continue;
        }
        let s = lam.sqrt();
        let op = Operator::from_fn(d, |m, i| vecs[(i * d + m, k)] * s);
        ops.push(op);
    }
    KrausChannel::new(ops)
}

/// Lindblad generator data: ∂ₜρ = −i`[H,ρ]` + rate·(−{N,ρ} + 2NρN).
///
/// The dissipator is coded exactly in this form; with a projector N it is a
/// dephasing of rate 2·rate on the off-diagonal blocks of N.
#[derive(Debug, Clone)]
pub struct LindbladSpec {
    h: Operator,
    jump: Operator,
    rate: f64,
}

impl LindbladSpec {
    pub fn new(h: Operator, jump: Operator, rate: f64) -> Result<Self> {
        let defect = h.hermiticity_defect();
        if defect > tol::HERMITICITY {
            return Err(Error::NonHermitianInput { defect });
        }
        if rate < 0.0 {
            return Err(Error::DomainError { what: "rate", value: rate });
        }
        if jump.dim() != h.dim() {
            return Err(Error::DimensionMismatch { expected: h.dim(), got: jump.dim() });
        }
        Ok(LindbladSpec { h, jump, rate })
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.h
    }

    pub fn jump(&self) -> &Operator {
        &self.jump
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// Right-hand side L(ρ) of the master equation.
    pub fn apply(&self, rho: &Operator) -> Operator {
        let h = &self.h;
        let n = &self.jump;
        let comm = &(h * rho) - &(rho * h);
        let anti = &(n * rho) + &(rho * n);
        let sandwich = &(n * rho) * n;
        let dissipator = &sandwich.scale(2.0.into()) - &anti;
        &comm.scale(Complex64::new(0.0, -1.0)) + &dissipator.scale(self.rate.into())
    }

    /// The dim²×dim² superoperator in column-stacking vectorization.
    fn superoperator(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        let id = Operator::identity(d);
        let ht = Operator::from_matrix(self.h.matrix().transpose());
        let nt = Operator::from_matrix(self.jump.matrix().transpose());
        // vec(Hρ) = (1 ⊗ H) vec, vec(ρH) = (Hᵀ ⊗ 1) vec
        let comm = &tensor(&id, &self.h) - &tensor(&ht, &id);
        let anti = &tensor(&id, &self.jump) + &tensor(&nt, &id);
        let sand = tensor(&nt, &self.jump).scale(2.0.into());
        let l = &comm.scale(Complex64::new(0.0, -1.0))
            + &(&sand - &anti).scale(self.rate.into());
        l.matrix().clone()
    }
}

/// exp(M) for a general square matrix by scaling-and-squaring with a Taylor
/// series; the scaled norm is ≤ 1/2 so 24 terms reach machine precision.
fn expm_general(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let d = m.nrows();
    let norm = m.iter().map(|z| z.norm()).fold(0.0, f64::max) * d as f64;
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = m / Complex64::new(2f64.powi(squarings as i32), 0.0);

    let mut result = DMatrix::<Complex64>::identity(d, d);
    let mut term = DMatrix::<Complex64>::identity(d, d);
    for n in 1..=24 {
        term = (&term * &scaled) / Complex64::new(n as f64, 0.0);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// The finite-time channel exp(Lt) as a Kraus set, obtained by exponentiating
/// the vectorized generator and converting through the Choi matrix.
pub fn lindblad_propagator(spec: &LindbladSpec, t: f64) -> Result<KrausChannel> {
    if t < 0.0 {
        return Err(Error::NegativeTime { t });
    }
    let d = spec.dim();
    let s = expm_general(&(spec.superoperator() * Complex64::new(t, 0.0)));

    // Choi from the superoperator columns: column (j*d + i) of S is
    // vec(Φ(E_ij)) in column stacking.
    let mut c = Operator::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            let col = s.column(j * d + i);
            let phi = Operator::from_fn(d, |r, cl| col[cl * d + r]);
            let proj = Operator::from_fn(d, |r, cl| {
                if r == i && cl == j { Complex64::ONE } else { Complex64::ZERO }
            });
            c = &c + &tensor(&proj, &phi);
        }
    }
    kraus_from_choi(&c)
}

/// Fixed-step RK4 integration of the master equation, sampled on `t_grid`
/// (ascending from 0). Step size never exceeds [`tol::RK4_MAX_STEP`].
pub fn lindblad_integrate(
    spec: &LindbladSpec,
    rho0: &DensityMatrix,
    t_grid: &[f64],
) -> Result<Vec<DensityMatrix>> {
    if t_grid.is_empty() || t_grid[0] != 0.0 || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::GridNotAscending);
    }
    if rho0.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: rho0.dim() });
    }
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(rho0.clone());
    let mut rho = rho0.op().clone();
    let mut t = 0.0;
    for &target in &t_grid[1..] {
        let span = target - t;
        let steps = (span / tol::RK4_MAX_STEP).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        for _ in 0..steps {
            let k1 = spec.apply(&rho);
            let k2 = spec.apply(&(&rho + &k1.scale((h / 2.0).into())));
            let k3 = spec.apply(&(&rho + &k2.scale((h / 2.0).into())));
            let k4 = spec.apply(&(&rho + &k3.scale(h.into())));
            let incr = &(&k1 + &k4) + &(&k2 + &k3).scale(2.0.into());
            rho = &rho + &incr.scale((h / 6.0).into());
        }
        t = target;
        out.push(DensityMatrix::new(rho.clone())?);
    }
    Ok(out)
}
