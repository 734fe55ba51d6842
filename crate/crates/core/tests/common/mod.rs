//! Shared brute-force oracles and random generators for the integration
//! tests. Everything here recomputes physics from first principles and stays
//! independent of the library code paths it is used to check.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use causalcell::channels::{kraus_from_dilation, KrausChannel};
use causalcell::gibbs::{joint_hamiltonian, GibbsSpec, RaisingConvention};
use causalcell::qops::{
    basis, matexp_hermitian_generator, partial_trace_op, tensor, DensityMatrix, Operator,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Standard-normal sample via Box-Muller.
pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn random_complex_matrix(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |_, _| c(normal(rng), normal(rng)))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    let m = random_complex_matrix(rng, dim);
    Operator::from_matrix((&m + m.adjoint()).scale(0.5))
}

/// Haar-ish random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    let q = random_complex_matrix(rng, dim).qr().q();
    Operator::from_matrix(q)
}

/// Random mixed state: normalized GG† for a Ginibre G.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let g = random_complex_matrix(rng, dim);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(Operator::from_matrix(m / c(tr, 0.0))).expect("normalized Wishart state")
}

/// Random CPTP qubit channel from a random two-qubit unitary dilation with a
/// pure environment.
pub fn random_channel(rng: &mut ChaCha8Rng, dim: usize) -> KrausChannel {
    let u = random_unitary(rng, dim * 2);
    let env = DensityMatrix::from_populations(&[1.0, 0.0]).unwrap();
    kraus_from_dilation(&u, &env).expect("dilation of a random unitary")
}

/// Remixes a Kraus list by a random unitary matrix V: K'_a = Σ_b V_ab K_b.
/// Represents the same channel.
pub fn remix_channel(rng: &mut ChaCha8Rng, ch: &KrausChannel) -> KrausChannel {
    let m = ch.ops().len();
    let v = random_unitary(rng, m);
    let ops: Vec<Operator> = (0..m)
        .map(|a| {
            let mut acc = Operator::zeros(ch.dim());
            for (b, k) in ch.ops().iter().enumerate() {
                acc = &acc + &k.scale(v.get(a, b));
            }
            acc
        })
        .collect();
    KrausChannel::new(ops).expect("remixed channel is complete")
}

/// The cross-term map Δ(ρ) = Σ_ab K_a K_b ρ K_a† K_b† of a switched pair of
/// identical channels, computed directly from its definition.
pub fn delta_map(ch: &KrausChannel, rho: &Operator) -> Operator {
    let mut out = Operator::zeros(ch.dim());
    for ka in ch.ops() {
        for kb in ch.ops() {
            let left = &(ka * kb) * rho;
            out = &out + &(&left * &(&ka.adjoint() * &kb.adjoint()));
        }
    }
    out
}

/// Both orders of the classical composition Λ∘Λ.
pub fn twice(ch: &KrausChannel, rho: &Operator) -> Operator {
    ch.apply_op(&ch.apply_op(rho))
}

/// Embeds a 4×4 operator acting on (battery, env k) into the 8-dim space
/// (battery, env1, env2), k ∈ {1, 2}.
fn embed_battery_env(u: &Operator, which_env: usize) -> Operator {
    assert_eq!(u.dim(), 4);
    Operator::from_fn(8, |row, col| {
        // row = ((b, e1), e2) with battery slowest
        let (b_r, e1_r, e2_r) = (row / 4, (row / 2) % 2, row % 2);
        let (b_c, e1_c, e2_c) = (col / 4, (col / 2) % 2, col % 2);
        match which_env {
            1 => {
                if e2_r == e2_c {
                    u.get(b_r * 2 + e1_r, b_c * 2 + e1_c)
                } else {
                    Complex64::ZERO
                }
            }
            2 => {
                if e1_r == e1_c {
                    u.get(b_r * 2 + e2_r, b_c * 2 + e2_c)
                } else {
                    Complex64::ZERO
                }
            }
            _ => unreachable!(),
        }
    })
}

/// Full 16-dimensional dilation of the switched thermal-charger pair on
/// control ⊗ battery ⊗ env1 ⊗ env2: each contact is the joint unitary on the
/// battery and its own fresh mediator, the control coherently swaps the two
/// orders, and the control is measured in {|+⟩, |−⟩}.
///
/// Returns the unnormalized battery branch operators (plus, minus).
pub fn dilated_switch_branches(
    spec: &GibbsSpec,
    conv: RaisingConvention,
    t: f64,
    rho_b: &DensityMatrix,
) -> (Operator, Operator) {
    let u = matexp_hermitian_generator(&joint_hamiltonian(spec, conv), t / 2.0)
        .expect("Hermitian joint generator");
    let a = embed_battery_env(&u, 1);
    let b = embed_battery_env(&u, 2);

    let p0 = Operator::ket_bra(&basis::zero(), &basis::zero());
    let p1 = Operator::ket_bra(&basis::one(), &basis::one());
    let w = &tensor(&p1, &(&a * &b)) + &tensor(&p0, &(&b * &a));

    let control = DensityMatrix::from_pure(&basis::plus()).unwrap();
    let gibbs = spec.gibbs_state();
    let joint = tensor(
        &tensor(&tensor(control.op(), rho_b.op()), gibbs.op()),
        gibbs.op(),
    );
    let evolved = &(&w * &joint) * &w.adjoint();

    let branch = |ket: DVector<Complex64>| -> Operator {
        let proj = tensor(&Operator::ket_bra(&ket, &ket), &Operator::identity(8));
        let projected = &(&proj * &evolved) * &proj;
        partial_trace_op(&projected, 1, &[2, 2, 2, 2]).expect("16 = 2·2·2·2")
    };
    (branch(basis::plus()), branch(basis::minus()))
}

/// Unnormalized branch operators from a [`causalcell::switch::SwitchOutcome`]
/// pair, for comparisons against dilation oracles.
pub fn unnormalized(outcome: &causalcell::switch::SwitchOutcome, dim: usize) -> Operator {
    match &outcome.state {
        Some(s) => s.op().scale(c(outcome.probability, 0.0)),
        None => Operator::zeros(dim),
    }
}

/// Random thermal-protocol parameters for oracle sweeps.
pub fn random_gibbs_spec(rng: &mut ChaCha8Rng) -> GibbsSpec {
    let omega = 0.4 + 1.8 * rng.random::<f64>();
    let coupling = 0.3 + 2.0 * rng.random::<f64>();
    let p = 0.5 * rng.random::<f64>();
    GibbsSpec::new(omega, coupling, p).unwrap()
}

/// Golden-section maximization of a smooth scalar function.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// One point of the minus-branch sweep: total duration, measurement
/// probability, excited population of the normalized conditional state
/// (NaN when the branch is undefined).
#[derive(Debug, Clone, Copy)]
pub struct SweepPoint {
    pub t: f64,
    pub prob: f64,
    pub pop: f64,
}

/// Sweeps the switched thermal charger over (0, t_max] in `n` uniform steps.
pub fn sweep_minus_branch(
    charger: &causalcell::gibbs::GibbsCharger,
    rho0: &DensityMatrix,
    t_max: f64,
    n: usize,
) -> Vec<SweepPoint> {
    (1..=n)
        .map(|k| {
            let t = t_max * k as f64 / n as f64;
            let (_, minus) = charger.switch_branches(t, rho0).expect("switch run");
            let pop = minus.state.as_ref().map_or(f64::NAN, |s| s.population(0));
            SweepPoint { t, prob: minus.probability, pop }
        })
        .collect()
}

/// Scan oracle for the probability peak: dense sweep of one half period
/// (the first peak always lies there), golden refinement of the first local
/// maximum, and the conditional population read at the refined time.
/// Returns (t_peak, probability, population).
pub fn scan_probability_peak(
    spec: &GibbsSpec,
    conv: RaisingConvention,
    rho0: &DensityMatrix,
) -> (f64, f64, f64) {
    let charger = causalcell::gibbs::GibbsCharger::new(spec, conv);
    let half_period = 2.0 * std::f64::consts::PI / spec.nu();
    let n = 20_000;
    let sweep = sweep_minus_branch(&charger, rho0, half_period, n);
    let mut idx = None;
    for k in 1..sweep.len() - 1 {
        if sweep[k].prob >= sweep[k - 1].prob && sweep[k].prob >= sweep[k + 1].prob {
            idx = Some(k);
            break;
        }
    }
    let k = idx.expect("a probability peak inside the first half period");
    let prob_at = |t: f64| {
        let (_, minus) = charger.switch_branches(t, rho0).expect("switch run");
        minus.probability
    };
    let (t_peak, prob) = golden_max(prob_at, sweep[k - 1].t, sweep[k + 1].t, 1e-10);
    let (_, minus) = charger.switch_branches(t_peak, rho0).expect("switch run");
    let pop = minus.state.expect("peak has finite probability").population(0);
    (t_peak, prob, pop)
}
