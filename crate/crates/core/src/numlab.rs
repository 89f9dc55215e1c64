//! Independent floating-point oracle.
//!
//! Everything here works in `f64`/`Complex64` on a uniform periodic grid:
//! wavefunction and coefficient evaluation, trapezoidal quadrature of
//! expectation integrals, and a seeded Monte-Carlo probe that perturbs
//! operators and measures the change in expectation. Derivatives of ψ use
//! the exact per-mode rule (each mode `e^{ikφ}` differentiates to `ik·e^{ikφ}`),
//! so the oracle's independence from the symbolic path lies in the numerical
//! integration versus exact mean extraction, which is the step under test.
//!
//! Equal-weight trapezoidal quadrature on `[0, 2π)` is exact for
//! trigonometric polynomials whose bandwidth is below the node count, so
//! agreement with the symbolic results is expected at machine precision.
//!
//! Monte-Carlo trials derive their random stream from `(seed, trial index)`
//! and are reduced in trial order, so reports are bit-identical between the
//! sequential path and the rayon-parallel one (`parallel` feature, default).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use thiserror::Error;

use crate::conservation::conserved_family;
use crate::diffop::{DiffOp, WaveSpec};
use crate::exactnum::ConstPoly;
use crate::fourier::FourierPoly;

pub mod sample;

/// Pointwise agreement between the exact symbol route and per-order numeric
/// evaluation of `p·ψ`.
pub const SYMBOL_POINTWISE_TOL: f64 = 1e-10;
/// Agreement between symbolic expectation values and quadrature.
pub const EXPECTATION_QUAD_TOL: f64 = 1e-10;
/// Trapezoid error on band-limited integrands once the node count exceeds
/// the bandwidth; machine precision apart from rounding in the sum.
pub const QUAD_EXACT_TOL: f64 = 1e-12;
/// Normalization check tolerance.
pub const NORM_TOL: f64 = 1e-12;
/// Within-family perturbations must leave the expectation unchanged to this.
pub const FAMILY_PROBE_TOL: f64 = 1e-10;
/// Off-family perturbations count as detected above this.
pub const DETECT_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumlabError {
    #[error("symbolic constant '{0}' is not bound to a value")]
    UnboundConstant(String),
    #[error("grid must have at least 4 nodes, got {0}")]
    GridTooSmall(usize),
    #[error("probe requires at least one trial")]
    NoTrials,
}

/// Rational values for the symbolic constants of an expression.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Binding {
    values: BTreeMap<String, BigRational>,
}

impl Binding {
    pub fn new() -> Self {
        Binding::default()
    }

    pub fn bind(mut self, name: &str, value: BigRational) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn bind_int(self, name: &str, value: i64) -> Self {
        self.bind(name, BigRational::from_integer(value.into()))
    }

    pub fn get(&self, name: &str) -> Option<&BigRational> {
        self.values.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}

/// Uniform grid of `n_nodes` points on `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    n_nodes: usize,
}

impl GridSpec {
    pub fn new(n_nodes: usize) -> Result<Self, NumlabError> {
        if n_nodes < 4 {
            return Err(NumlabError::GridTooSmall(n_nodes));
        }
        Ok(GridSpec { n_nodes })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn node(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_nodes as f64
    }

    pub fn step(&self) -> f64 {
        2.0 * PI / self.n_nodes as f64
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { n_nodes: 64 }
    }
}

/// Evaluates a scalar polynomial with every constant bound to its rational
/// value.
pub fn eval_const(c: &ConstPoly, b: &Binding) -> Result<Complex64, NumlabError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (mono, coeff) in c.terms() {
        let mut factor = 1.0_f64;
        for (name, exp) in mono.pairs() {
            let value = b
                .get(name)
                .ok_or_else(|| NumlabError::UnboundConstant(name.clone()))?
                .to_f64()
                .unwrap_or(f64::NAN);
            factor *= value.powi(*exp as i32);
        }
        acc += coeff.to_c64() * factor;
    }
    Ok(acc)
}

/// Evaluates `Σₖ cₖ(b) e^{ikφ}` in floating point.
pub fn eval_fourier(f: &FourierPoly, b: &Binding, phi: f64) -> Result<Complex64, NumlabError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, c) in f.modes() {
        acc += eval_const(c, b)? * Complex64::from_polar(1.0, k as f64 * phi);
    }
    Ok(acc)
}

/// ψ(φ) = ρ e^{iφ}.
pub fn eval_wave(w: &WaveSpec, phi: f64) -> Complex64 {
    Complex64::from_polar(w.rho(), phi)
}

/// Trapezoidal quadrature of `ψ*·(p·ψ)` over one period.
///
/// `p·ψ` is computed through the exact per-mode derivative rule (no finite
/// differences): the engine folds the ψ mode into a Fourier polynomial and
/// this routine evaluates it at the nodes. Summation runs in ascending node
/// order for reproducibility.
pub fn quad_expectation(
    p: &DiffOp,
    w: &WaveSpec,
    b: &Binding,
    g: &GridSpec,
) -> Result<Complex64, NumlabError> {
    let action = p.apply_unit();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..g.n_nodes() {
        let phi = g.node(j);
        let p_psi = eval_fourier(&action, b, phi)? * w.rho();
        acc += eval_wave(w, phi).conj() * p_psi;
    }
    Ok(acc * g.step())
}

/// Quadrature of `|ψ|²`; equals `2πρ²` up to rounding (1 for the normalized
/// wave).
pub fn check_normalization(w: &WaveSpec, g: &GridSpec) -> f64 {
    let mut acc = 0.0;
    for j in 0..g.n_nodes() {
        acc += eval_wave(w, g.node(j)).norm_sqr();
    }
    acc * g.step()
}

/// Largest pointwise deviation over the grid between two routes to `p·ψ`
/// for the unit-amplitude wave: per-order numeric summation
/// `Σₙ Aₙ(φ)·iⁿ·ψ(φ)` versus the exact symbol evaluated once. This is the
/// numeric check of the derivative rule `∂ⁿψ = iⁿψ`.
pub fn max_symbol_deviation(p: &DiffOp, b: &Binding, g: &GridSpec) -> Result<f64, NumlabError> {
    let symbol = p.symbol();
    let mut worst = 0.0_f64;
    for j in 0..g.n_nodes() {
        let phi = g.node(j);
        let psi = Complex64::from_polar(1.0, phi);
        let mut per_order = Complex64::new(0.0, 0.0);
        for (n, f) in p.coeffs() {
            per_order += eval_fourier(f, b, phi)? * Complex64::i().powu(n) * psi;
        }
        let via_symbol = eval_fourier(&symbol, b, phi)? * psi;
        worst = worst.max((per_order - via_symbol).norm());
    }
    Ok(worst)
}

/// Outcome of a Monte-Carlo perturbation probe.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub trials: u32,
    pub family_only: bool,
    /// max |δL̄| over all trials.
    pub max_abs_delta: f64,
    /// Number of trials with |δL̄| above [`DETECT_THRESHOLD`].
    pub detected: u32,
}

impl ProbeReport {
    pub fn detected_fraction(&self) -> f64 {
        self.detected as f64 / self.trials as f64
    }
}

fn probe_trial(
    p: &DiffOp,
    family_only: bool,
    seed: u64,
    trial: u32,
    b: &Binding,
    g: &GridSpec,
    w: &WaveSpec,
) -> Result<f64, NumlabError> {
    let mut rng = sample::trial_rng(seed, trial);
    let dp = if family_only {
        let db2 = sample::fourier_poly_scalar(&mut rng, 4);
        conserved_family(ConstPoly::zero(), db2)
    } else {
        sample::diff_op_scalar(&mut rng, 4, 4)
    };
    let base = quad_expectation(p, w, b, g)?;
    let perturbed = quad_expectation(&(p + &dp), w, b, g)?;
    Ok((perturbed - base).norm())
}

fn reduce_probe(trials: u32, family_only: bool, deltas: Vec<f64>) -> ProbeReport {
    let mut max_abs_delta = 0.0_f64;
    let mut detected = 0;
    for d in deltas {
        max_abs_delta = max_abs_delta.max(d);
        if d > DETECT_THRESHOLD {
            detected += 1;
        }
    }
    ProbeReport {
        trials,
        family_only,
        max_abs_delta,
        detected,
    }
}

/// Draws `trials` random perturbations of `p` (within the conserved family
/// when `family_only`, arbitrary otherwise; scalar coefficients over small
/// rationals, bandwidth ≤ 4) against the normalized wave and reports how the
/// quadrature expectation responds. Sequential reference path.
pub fn probe_ensemble_seq(
    p: &DiffOp,
    family_only: bool,
    trials: u32,
    seed: u64,
    b: &Binding,
    g: &GridSpec,
) -> Result<ProbeReport, NumlabError> {
    if trials == 0 {
        return Err(NumlabError::NoTrials);
    }
    let w = WaveSpec::normalized();
    let deltas = (0..trials)
        .map(|t| probe_trial(p, family_only, seed, t, b, g, &w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(reduce_probe(trials, family_only, deltas))
}

/// Parallel version of [`probe_ensemble_seq`]; per-trial streams depend only
/// on `(seed, trial)` and the reduction runs in trial order, so the report is
/// bit-identical to the sequential one.
#[cfg(feature = "parallel")]
pub fn probe_ensemble(
    p: &DiffOp,
    family_only: bool,
    trials: u32,
    seed: u64,
    b: &Binding,
    g: &GridSpec,
) -> Result<ProbeReport, NumlabError> {
    if trials == 0 {
        return Err(NumlabError::NoTrials);
    }
    let w = WaveSpec::normalized();
    let deltas = (0..trials)
        .into_par_iter()
        .map(|t| probe_trial(p, family_only, seed, t, b, g, &w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(reduce_probe(trials, family_only, deltas))
}

#[cfg(not(feature = "parallel"))]
pub fn probe_ensemble(
    p: &DiffOp,
    family_only: bool,
    trials: u32,
    seed: u64,
    b: &Binding,
    g: &GridSpec,
) -> Result<ProbeReport, NumlabError> {
    probe_ensemble_seq(p, family_only, trials, seed, b, g)
}
