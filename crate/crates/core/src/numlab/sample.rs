//! Seeded random generators for operators and their building blocks.
//!
//! All values are drawn over small rationals so products stay small and
//! numeric comparisons stay far from the tolerance floor. Streams are
//! deterministic functions of the seed; [`trial_rng`] derives independent
//! per-trial streams from `(seed, trial index)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffop::DiffOp;
use crate::exactnum::{ConstPoly, GaussRat};
use crate::fourier::FourierPoly;

/// RNG for one Monte-Carlo trial, independent of all other trials.
pub fn trial_rng(seed: u64, trial: u32) -> ChaCha8Rng {
    // splitmix64 step keeps nearby (seed, trial) pairs uncorrelated.
    let mut z = seed ^ (u64::from(trial).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero-denominator rational with numerator in −4..=4.
pub fn rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.gen_range(-4_i64..=4);
    let den = rng.gen_range(1_i64..=4);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn gauss_rat(rng: &mut ChaCha8Rng) -> GaussRat {
    GaussRat::new(rational(rng), rational(rng))
}

fn nonzero_gauss_rat(rng: &mut ChaCha8Rng) -> GaussRat {
    loop {
        let g = gauss_rat(rng);
        if !g.is_zero() {
            return g;
        }
    }
}

/// Polynomial over the given symbols: up to three terms, exponents ≤ 2.
pub fn const_poly(rng: &mut ChaCha8Rng, symbols: &[&str]) -> ConstPoly {
    let n_terms = rng.gen_range(1..=3);
    let mut acc = ConstPoly::zero();
    for _ in 0..n_terms {
        let mut term = ConstPoly::constant(gauss_rat(rng));
        if !symbols.is_empty() && rng.gen_bool(0.6) {
            let sym = symbols[rng.gen_range(0..symbols.len())];
            let exp = rng.gen_range(1..=2);
            for _ in 0..exp {
                term = term * ConstPoly::symbol(sym);
            }
        }
        acc = acc + term;
    }
    acc
}

/// Fourier polynomial with frequencies in −bandwidth..=bandwidth and
/// coefficients over the given symbols.
pub fn fourier_poly(rng: &mut ChaCha8Rng, bandwidth: i64, symbols: &[&str]) -> FourierPoly {
    let n_modes = rng.gen_range(1..=3);
    let mut acc = FourierPoly::zero();
    for _ in 0..n_modes {
        let k = rng.gen_range(-bandwidth..=bandwidth);
        acc = &acc + &FourierPoly::mode(k, const_poly(rng, symbols));
    }
    acc
}

/// Scalar-coefficient Fourier polynomial (no symbolic constants), for
/// perturbations that must be evaluable under any binding. Always includes a
/// nonzero constant mode, so zero-mean symbols arise only from cross-order
/// cancellation of independently drawn rationals and stay measure-rare.
pub fn fourier_poly_scalar(rng: &mut ChaCha8Rng, bandwidth: i64) -> FourierPoly {
    let mut acc = FourierPoly::constant(ConstPoly::constant(nonzero_gauss_rat(rng)));
    let extra_modes = rng.gen_range(0..=2);
    for _ in 0..extra_modes {
        let k = rng.gen_range(-bandwidth..=bandwidth);
        if k == 0 {
            continue;
        }
        acc = &acc + &FourierPoly::mode(k, ConstPoly::constant(nonzero_gauss_rat(rng)));
    }
    acc
}

/// Operator with derivative orders ≤ `max_order` and the given coefficient
/// bandwidth, over the given symbols.
pub fn diff_op(rng: &mut ChaCha8Rng, max_order: u32, bandwidth: i64, symbols: &[&str]) -> DiffOp {
    let n_terms = rng.gen_range(1..=4);
    let mut acc = DiffOp::zero();
    for _ in 0..n_terms {
        let order = rng.gen_range(0..=max_order);
        acc = &acc + &DiffOp::term(order, fourier_poly(rng, bandwidth, symbols));
    }
    acc
}

/// Scalar-coefficient operator, always evaluable.
pub fn diff_op_scalar(rng: &mut ChaCha8Rng, max_order: u32, bandwidth: i64) -> DiffOp {
    let n_terms = rng.gen_range(1..=4);
    let mut acc = DiffOp::zero();
    for _ in 0..n_terms {
        let order = rng.gen_range(0..=max_order);
        acc = &acc + &DiffOp::term(order, fourier_poly_scalar(rng, bandwidth));
    }
    acc
}
