//! The quantum switch over two channels: a control qubit coherently decides
//! which process acts first. The control is always the first tensor factor.
//!
//! With Kraus sets {Aᵢ} and {Bⱼ} for the two processes, the switch operators
//! are W_ij = |1⟩⟨1|ᶜ ⊗ AᵢBⱼ + |0⟩⟨0|ᶜ ⊗ BⱼAᵢ, so on control |0⟩ the first
//! process acts before the second and on |1⟩ the order is reversed. Measuring
//! the control in {|+⟩, |−⟩} leaves two conditional battery branches.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::qops::{basis, partial_trace_op, tensor, DensityMatrix, Operator};
use crate::tol;

/// Pure control-qubit state cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
#[derive(Debug, Clone, Copy)]
pub struct ControlState {
    pub theta: f64,
    pub phi: f64,
}

impl ControlState {
    /// The balanced |+⟩ control, the default configuration.
    pub fn plus() -> Self {
        ControlState { theta: std::f64::consts::FRAC_PI_2, phi: 0.0 }
    }

    /// Definite order: first process first.
    pub fn zero() -> Self {
        ControlState { theta: 0.0, phi: 0.0 }
    }

    /// Definite order: second process first.
    pub fn one() -> Self {
        ControlState { theta: std::f64::consts::PI, phi: 0.0 }
    }

    pub fn ket(&self) -> DVector<Complex64> {
        DVector::from_vec(vec![
            Complex64::new((self.theta / 2.0).cos(), 0.0),
            Complex64::from_polar((self.theta / 2.0).sin(), self.phi),
        ])
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(&self.ket()).expect("unit-norm control ket")
    }
}

impl Default for ControlState {
    fn default() -> Self {
        ControlState::plus()
    }
}

/// Which control-measurement result a branch belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlOutcome {
    Plus,
    Minus,
}

/// One post-measurement branch: outcome probability and the normalized
/// conditional state. `state` is `None` when the probability is below the
/// branch floor and no normalized state exists.
#[derive(Debug, Clone)]
pub struct SwitchOutcome {
    pub outcome: ControlOutcome,
    pub probability: f64,
    pub state: Option<DensityMatrix>,
}

/// Kraus set {W_ij} of the switch of two same-dimension channels, acting on
/// control ⊗ system.
pub fn switch_kraus(cha: &KrausChannel, chb: &KrausChannel) -> Result<KrausChannel> {
    if cha.dim() != chb.dim() {
        return Err(Error::DimensionMismatch { expected: cha.dim(), got: chb.dim() });
    }
    let p0 = Operator::ket_bra(&basis::zero(), &basis::zero());
    let p1 = Operator::ket_bra(&basis::one(), &basis::one());
    let mut ops = Vec::with_capacity(cha.ops().len() * chb.ops().len());
    for a in cha.ops() {
        for b in chb.ops() {
            let w = &tensor(&p1, &(a * b)) + &tensor(&p0, &(b * a));
            ops.push(w);
        }
    }
    KrausChannel::new(ops)
}

/// Joint control ⊗ system state after the switch: Σ W(ρ_c ⊗ ρ_B)W†.
pub fn switch_evolve(
    cha: &KrausChannel,
    chb: &KrausChannel,
    control: &ControlState,
    rho_b: &DensityMatrix,
) -> Result<DensityMatrix> {
    if cha.dim() != rho_b.dim() {
        return Err(Error::DimensionMismatch { expected: cha.dim(), got: rho_b.dim() });
    }
    let sw = switch_kraus(cha, chb)?;
    let joint = tensor(control.density().op(), rho_b.op());
    DensityMatrix::new(sw.apply_op(&joint))
}

/// Measures the control (first factor) in the {|+⟩, |−⟩} basis and returns
/// both branches with normalized conditional system states.
///
/// The projected branch operator is validated at its unnormalized scale
/// (where the absolute tolerances apply), symmetrized, and only then divided
/// by its trace; a low-probability branch would otherwise amplify rounding
/// noise past any fixed threshold.
pub fn measure_control(rho_cb: &DensityMatrix) -> Result<(SwitchOutcome, SwitchOutcome)> {
    let total = rho_cb.dim();
    if !total.is_multiple_of(2) {
        return Err(Error::DimensionMismatch { expected: total, got: 2 });
    }
    let d = total / 2;
    let branch = |ket: DVector<Complex64>, outcome| -> Result<SwitchOutcome> {
        let proj = tensor(&Operator::ket_bra(&ket, &ket), &Operator::identity(d));
        let unnorm = &(&proj * rho_cb.op()) * &proj;
        let sys = partial_trace_op(&unnorm, 1, &[2, d])?;
        // exact symmetry restoration; the projected operator is Hermitian
        let sys = (&sys + &sys.adjoint()).scale(0.5.into());
        let probability = sys.trace().re.clamp(0.0, 1.0);
        let state = if probability >= tol::BRANCH_PROBABILITY_FLOOR {
            let min = sys.min_eigenvalue()?;
            if min < -tol::PSD_FLOOR {
                return Err(Error::NotPsd { min_eigenvalue: min });
            }
            Some(DensityMatrix::new_unchecked(sys.scale((1.0 / probability).into())))
        } else {
            None
        };
        Ok(SwitchOutcome { outcome, probability, state })
    };
    Ok((
        branch(basis::plus(), ControlOutcome::Plus)?,
        branch(basis::minus(), ControlOutcome::Minus)?,
    ))
}

/// Unnormalized conditional branch operators; the probabilities are their
/// traces. Used by tests that check the Φ/Δ decomposition directly.
pub fn branch_operators(
    cha: &KrausChannel,
    chb: &KrausChannel,
    control: &ControlState,
    rho_b: &DensityMatrix,
) -> Result<(Operator, Operator)> {
    let joint = switch_evolve(cha, chb, control, rho_b)?;
    let d = rho_b.dim();
    let part = |ket: DVector<Complex64>| -> Result<Operator> {
        let proj = tensor(&Operator::ket_bra(&ket, &ket), &Operator::identity(d));
        let unnorm = &(&proj * joint.op()) * &proj;
        partial_trace_op(&unnorm, 1, &[2, d])
    };
    Ok((part(basis::plus())?, part(basis::minus())?))
}

/// Runs the switch where each process lasts half the total duration `t`:
/// the channels are built at t/2 from their factories, switched, evolved
/// from `rho_b`, and the control is measured in {|+⟩, |−⟩}.
pub fn switch_of_duration<FA, FB>(
    make_a: FA,
    make_b: FB,
    t: f64,
    control: &ControlState,
    rho_b: &DensityMatrix,
) -> Result<(SwitchOutcome, SwitchOutcome)>
where
    FA: Fn(f64) -> Result<KrausChannel>,
    FB: Fn(f64) -> Result<KrausChannel>,
{
    switch_of_duration_with_split(make_a, make_b, t, 0.5, control, rho_b)
}

/// As [`switch_of_duration`] but with the first process taking `ratio · t`
/// and the second `(1 − ratio) · t`.
pub fn switch_of_duration_with_split<FA, FB>(
    make_a: FA,
    make_b: FB,
    t: f64,
    ratio: f64,
    control: &ControlState,
    rho_b: &DensityMatrix,
) -> Result<(SwitchOutcome, SwitchOutcome)>
where
    FA: Fn(f64) -> Result<KrausChannel>,
    FB: Fn(f64) -> Result<KrausChannel>,
{
    if t < 0.0 {
        return Err(Error::NegativeTime { t });
    }
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::DomainError { what: "duration split ratio", value: ratio });
    }
    let cha = make_a(t * ratio)?;
    let chb = make_b(t * (1.0 - ratio))?;
    let joint = switch_evolve(&cha, &chb, control, rho_b)?;
    measure_control(&joint)
}
