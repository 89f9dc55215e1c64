//! Shared proptest strategies over the exact types.
//!
//! Values stay small (rationals with |numerator| ≤ 4, denominators ≤ 4,
//! bandwidth ≤ 4, exponents ≤ 2 over the symbols A and B) so products remain
//! well inside exact-arithmetic comfort and numeric comparisons sit far from
//! the tolerance floor.

// Each test binary compiles this module separately and uses its own subset.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use consop::diffop::DiffOp;
use consop::exactnum::{ConstPoly, GaussRat, Monomial};
use consop::fourier::FourierPoly;
use consop::numlab::Binding;

pub fn arb_rational() -> impl Strategy<Value = BigRational> {
    (-4_i64..=4, 1_i64..=4).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

pub fn arb_gauss() -> impl Strategy<Value = GaussRat> {
    (arb_rational(), arb_rational()).prop_map(|(re, im)| GaussRat::new(re, im))
}

pub fn arb_monomial() -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(
        (
            prop_oneof![Just("A".to_string()), Just("B".to_string())],
            1_u32..=2,
        ),
        0..=2,
    )
    .prop_map(Monomial::from_pairs)
}

pub fn arb_const_poly() -> impl Strategy<Value = ConstPoly> {
    proptest::collection::vec((arb_monomial(), arb_gauss()), 0..3).prop_map(ConstPoly::from_terms)
}

pub fn arb_fourier(bandwidth: i64) -> impl Strategy<Value = FourierPoly> {
    proptest::collection::vec((-bandwidth..=bandwidth, arb_const_poly()), 0..4)
        .prop_map(FourierPoly::from_modes)
}

pub fn arb_diff_op(max_order: u32, bandwidth: i64) -> impl Strategy<Value = DiffOp> {
    proptest::collection::vec((0..=max_order, arb_fourier(bandwidth)), 0..4)
        .prop_map(DiffOp::from_coeffs)
}

/// Constant-coefficient operator (every Aₙ constant in φ).
pub fn arb_const_coeff_op(max_order: u32) -> impl Strategy<Value = DiffOp> {
    proptest::collection::vec((0..=max_order, arb_const_poly()), 0..4).prop_map(|pairs| {
        DiffOp::from_coeffs(
            pairs
                .into_iter()
                .map(|(n, c)| (n, FourierPoly::constant(c))),
        )
    })
}

/// Binding covering every symbol the strategies can emit.
pub fn test_binding() -> Binding {
    Binding::new()
        .bind("A", BigRational::new(BigInt::from(5), BigInt::from(3)))
        .bind("B", BigRational::new(BigInt::from(-2), BigInt::from(7)))
}
