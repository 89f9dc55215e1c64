//! Conservation analysis: which operators keep their expectation value
//! invariant under variation of the operator's form, and what shapes the
//! conserved ones can take.
//!
//! An operator is *conserved* when, after [collapse](crate::diffop::DiffOp::collapse),
//! `B₁ = −i B₂` exactly and `A₀` is a constant function of φ. Every conserved
//! operator has the form `A − iB₂(φ)∂ + B₂(φ)∂²`, acts on ψ as multiplication
//! by the constant `A`, and therefore has expectation `A` for the normalized
//! wave. Solving the six special cases of that form under pointwise
//! equivalence leaves exactly three nonzero families: constant (`α̂ = A`),
//! first-derivative (`β̂ = −iA∂`) and second-derivative (`γ̂ = A∂²`).

use std::fmt;

use thiserror::Error;

use crate::diffop::{DiffOp, WaveSpec};
use crate::exactnum::{ConstPoly, GaussRat};
use crate::fourier::FourierPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConservationError {
    #[error("special case index {0} is out of range 1..=6")]
    CaseOutOfRange(u8),
    #[error("no physical form exists for the {0} family")]
    NoPhysicalForm(&'static str),
}

/// Builds the general conserved operator `A − iB₂(φ)∂ + B₂(φ)∂²`.
pub fn conserved_family(a: ConstPoly, b2: FourierPoly) -> DiffOp {
    DiffOp::from_coeffs([
        (0, FourierPoly::constant(a)),
        (1, b2.scale(&-ConstPoly::i())),
        (2, b2),
    ])
}

/// True iff after collapse `b1 = −i·b2` exactly and `a0` is constant in φ.
pub fn is_conserved(p: &DiffOp) -> bool {
    let c = p.collapse();
    c.b1 == c.b2.scale(&-ConstPoly::i()) && c.a0.is_constant()
}

/// Exact expectation value `⟨ψ|L̂|ψ⟩ = 2πρ² · mean(σ)`.
///
/// The wave must carry an exact norm (see [`WaveSpec::exact_norm`]); for the
/// normalized wave the factor is 1 and the result is the mean of the symbol.
/// For any member of [`conserved_family`] that is exactly the constant `A`.
///
/// # Panics
///
/// Panics when the wave was built from a bare floating-point amplitude, since
/// no exact scale factor exists then.
pub fn expectation(p: &DiffOp, w: &WaveSpec) -> ConstPoly {
    let norm = w
        .exact_norm()
        .expect("expectation requires a wave with an exact norm");
    p.symbol()
        .mean()
        .scale(&GaussRat::from_rational(norm.clone()))
}

/// The variational probe `δL̄`: change in expectation when `p` is perturbed
/// by `dp`, computed exactly as `expectation(p + dp) − expectation(p)`.
pub fn delta_expectation(p: &DiffOp, dp: &DiffOp, w: &WaveSpec) -> ConstPoly {
    expectation(&(p + dp), w) - expectation(p, w)
}

/// Equivalence notion used when solving the special cases: equality of
/// expectation (the integral condition fixes only the mean of B₂) or equality
/// of action on ψ at every φ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivalenceMode {
    Integral,
    Pointwise,
}

impl fmt::Display for EquivalenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceMode::Integral => write!(f, "integral"),
            EquivalenceMode::Pointwise => write!(f, "pointwise"),
        }
    }
}

/// Structural content of a solved special case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    /// The case holds for every B₂ (case 1 contains no B₂ at all).
    Identity,
    /// Integral mode: `mean(B₂) = value`.
    MeanEquals(ConstPoly),
    /// Pointwise mode: `B₂ ≡ value`.
    B2Equals(FourierPoly),
    /// The case forces `A = 0`, leaving B₂ unconstrained (case 6).
    ForcesConstantZero,
}

/// Result of solving one of the six special cases against the general
/// conserved form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseConstraint {
    pub case_index: u8,
    pub mode: EquivalenceMode,
    /// Human-readable statement of the condition on B₂ and A.
    pub condition: String,
    pub constraint: ConstraintKind,
}

impl CaseConstraint {
    /// The case template instantiated with its pointwise solution, using the
    /// symbolic constant `A` (and `B2` for the unconstrained case-6 factor).
    /// `None` for integral-mode constraints, which pin only the mean.
    pub fn solved_operator(&self) -> Option<DiffOp> {
        let a = ConstPoly::symbol("A");
        match (self.case_index, &self.constraint) {
            (1, ConstraintKind::Identity) => Some(DiffOp::term(0, FourierPoly::constant(a))),
            (_, ConstraintKind::B2Equals(b2)) => Some(instantiate_case(self.case_index, &a, b2)),
            (6, ConstraintKind::ForcesConstantZero) => Some(instantiate_case(
                6,
                &ConstPoly::zero(),
                &FourierPoly::constant(ConstPoly::symbol("B2")),
            )),
            _ => None,
        }
    }
}

/// The k-th special-case template with concrete `A` and `B₂`.
fn instantiate_case(k: u8, a: &ConstPoly, b2: &FourierPoly) -> DiffOp {
    let a0 = FourierPoly::constant(a.clone());
    let first = b2.scale(&-ConstPoly::i());
    let second = b2.clone();
    match k {
        1 => DiffOp::term(0, a0),
        2 => DiffOp::term(1, first),
        3 => DiffOp::term(2, second),
        4 => DiffOp::from_coeffs([(0, a0), (1, first)]),
        5 => DiffOp::from_coeffs([(0, a0), (2, second)]),
        6 => DiffOp::from_coeffs([(1, first), (2, second)]),
        _ => unreachable!("case index validated by solve_special_case"),
    }
}

/// Solves special case `k` (1..=6): under which condition on B₂ and A does
/// the case agree with the general conserved form?
///
/// The integral condition compares expectations and fixes only `mean(B₂)`;
/// the pointwise condition requires equal action on ψ at every φ and pins
/// B₂ itself. Case 1 holds identically; case 6 forces `A = 0` in both modes.
pub fn solve_special_case(
    k: u8,
    mode: EquivalenceMode,
) -> Result<CaseConstraint, ConservationError> {
    if !(1..=6).contains(&k) {
        return Err(ConservationError::CaseOutOfRange(k));
    }
    let a = ConstPoly::symbol("A");
    // Difference of symbols σ₀ − σₖ, as a function of A and B₂:
    //   σ₀ = A; σ₂ = B₂; σ₃ = −B₂; σ₄ = A + B₂; σ₅ = A − B₂; σ₆ = 0.
    let (condition, constraint) = match (k, mode) {
        (1, _) => (
            "no constraint (holds identically)".to_string(),
            ConstraintKind::Identity,
        ),
        (2, EquivalenceMode::Integral) => {
            ("mean(B2) = A".to_string(), ConstraintKind::MeanEquals(a))
        }
        (2, EquivalenceMode::Pointwise) => (
            "B2 = A".to_string(),
            ConstraintKind::B2Equals(FourierPoly::constant(a)),
        ),
        (3, EquivalenceMode::Integral) => {
            ("mean(B2) = -A".to_string(), ConstraintKind::MeanEquals(-a))
        }
        (3, EquivalenceMode::Pointwise) => (
            "B2 = -A".to_string(),
            ConstraintKind::B2Equals(FourierPoly::constant(-a)),
        ),
        (4 | 5, EquivalenceMode::Integral) => (
            "mean(B2) = 0".to_string(),
            ConstraintKind::MeanEquals(ConstPoly::zero()),
        ),
        (4 | 5, EquivalenceMode::Pointwise) => (
            "B2 = 0".to_string(),
            ConstraintKind::B2Equals(FourierPoly::zero()),
        ),
        (6, _) => (
            "A = 0 (B2 unconstrained)".to_string(),
            ConstraintKind::ForcesConstantZero,
        ),
        _ => unreachable!(),
    };
    Ok(CaseConstraint {
        case_index: k,
        mode,
        condition,
        constraint,
    })
}

/// Tag for the classification outcome, without the attached constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyKind {
    Alpha,
    Beta,
    Gamma,
    GeneralConserved,
    NullSymbol,
    NotConserved,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Alpha => "Alpha",
            FamilyKind::Beta => "Beta",
            FamilyKind::Gamma => "Gamma",
            FamilyKind::GeneralConserved => "GeneralConserved",
            FamilyKind::NullSymbol => "NullSymbol",
            FamilyKind::NotConserved => "NotConserved",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classification of an operator by its collapsed shape.
///
/// The three canonical families carry their (nonzero) constant `A`;
/// `GeneralConserved` carries the constant of a conserved operator whose B₂
/// is not one of the canonical shapes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Alpha(ConstPoly),
    Beta(ConstPoly),
    Gamma(ConstPoly),
    GeneralConserved(ConstPoly),
    NullSymbol,
    NotConserved,
}

impl Family {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Family::Alpha(_) => FamilyKind::Alpha,
            Family::Beta(_) => FamilyKind::Beta,
            Family::Gamma(_) => FamilyKind::Gamma,
            Family::GeneralConserved(_) => FamilyKind::GeneralConserved,
            Family::NullSymbol => FamilyKind::NullSymbol,
            Family::NotConserved => FamilyKind::NotConserved,
        }
    }

    /// The matched constant; zero for `NullSymbol` and `NotConserved`.
    pub fn constant(&self) -> ConstPoly {
        match self {
            Family::Alpha(a) | Family::Beta(a) | Family::Gamma(a) | Family::GeneralConserved(a) => {
                a.clone()
            }
            Family::NullSymbol | Family::NotConserved => ConstPoly::zero(),
        }
    }
}

/// Classifies an operator by collapsing it and matching the canonical shapes.
///
/// Operators whose symbol vanishes (they act as zero on ψ, including formally
/// conserved ones with `A = 0` and the zero operator itself) classify as
/// `NullSymbol`; checking that before the general conserved pattern keeps the
/// classification a function of the collapsed triple alone, so it is
/// invariant under collapse.
pub fn classify(p: &DiffOp) -> Family {
    let c = p.collapse();
    if c.b1.is_zero() && c.b2.is_zero() && c.a0.is_constant() && !c.a0.is_zero() {
        return Family::Alpha(c.a0.mean());
    }
    if c.a0.is_zero() && c.b2.is_zero() && c.b1.is_constant() && !c.b1.is_zero() {
        // b1 = −iA, so A = i·b1.
        return Family::Beta(c.b1.mean() * ConstPoly::i());
    }
    if c.a0.is_zero() && c.b1.is_zero() && c.b2.is_constant() && !c.b2.is_zero() {
        return Family::Gamma(c.b2.mean());
    }
    if p.symbol().is_zero() {
        return Family::NullSymbol;
    }
    if c.b1 == c.b2.scale(&-ConstPoly::i()) && c.a0.is_constant() {
        return Family::GeneralConserved(c.a0.mean());
    }
    Family::NotConserved
}

/// Renders a canonical family in a named variable with the shared constant
/// bound to a named physical constant, e.g. `Beta` with (`x`, `hbar`) gives
/// the momentum-operator form `-i*hbar*d/dx`.
pub fn substitute_physical(
    f: &Family,
    var_name: &str,
    constant_name: &str,
) -> Result<String, ConservationError> {
    match f {
        Family::Alpha(_) => Ok(constant_name.to_string()),
        Family::Beta(_) => Ok(format!("-i*{constant_name}*d/d{var_name}")),
        Family::Gamma(_) => Ok(format!("{constant_name}*d^2/d{var_name}^2")),
        other => Err(ConservationError::NoPhysicalForm(other.kind().name())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> ConstPoly {
        ConstPoly::symbol("A")
    }

    fn e(k: i64) -> FourierPoly {
        FourierPoly::harmonic(k)
    }

    fn w() -> WaveSpec {
        WaveSpec::normalized()
    }

    #[test]
    fn family_members_are_conserved() {
        let p = conserved_family(a(), e(2).scale(&ConstPoly::from_int(3)));
        assert!(is_conserved(&p));
        assert_eq!(
            p.coeff(1),
            e(2).scale(&(-ConstPoly::i() * ConstPoly::from_int(3)))
        );
    }

    #[test]
    fn family_degenerate_shapes() {
        assert_eq!(
            conserved_family(a(), FourierPoly::zero()),
            DiffOp::term(0, FourierPoly::constant(a()))
        );
        let case6 = conserved_family(ConstPoly::zero(), FourierPoly::constant(a()));
        assert_eq!(case6.coeff(0), FourierPoly::zero());
        assert_eq!(case6.coeff(1), FourierPoly::constant(-ConstPoly::i() * a()));
        assert_eq!(case6.coeff(2), FourierPoly::constant(a()));
    }

    #[test]
    fn bare_derivative_is_not_conserved() {
        // b1 = 1 but b2 = 0, violating B₁ = −iB₂.
        assert!(!is_conserved(&DiffOp::term(1, FourierPoly::one())));
    }

    #[test]
    fn oscillating_a0_is_not_conserved() {
        assert!(!is_conserved(&DiffOp::term(0, FourierPoly::mode(1, a()))));
    }

    #[test]
    fn expectation_of_family_is_the_constant() {
        let p = conserved_family(a(), e(1).scale(&ConstPoly::from_int(2)));
        assert_eq!(expectation(&p, &w()), a());
    }

    #[test]
    fn expectation_of_momentum_shape() {
        let p = DiffOp::term(1, FourierPoly::constant(-ConstPoly::i() * a()));
        assert_eq!(expectation(&p, &w()), a());
    }

    #[test]
    fn expectation_of_oscillation_vanishes() {
        assert!(expectation(&DiffOp::term(0, e(3)), &w()).is_zero());
    }

    #[test]
    fn expectation_scales_with_norm() {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        let p = conserved_family(a(), FourierPoly::zero());
        let scaled = WaveSpec::with_norm(BigRational::from_integer(BigInt::from(4)));
        assert_eq!(expectation(&p, &scaled), a().scale(&GaussRat::from_int(4)));
    }

    #[test]
    fn delta_expectation_within_family_vanishes() {
        let p = conserved_family(a(), e(2));
        let dp = conserved_family(ConstPoly::zero(), &e(1) + &e(-3));
        assert!(delta_expectation(&p, &dp, &w()).is_zero());
    }

    #[test]
    fn delta_expectation_detects_offsets() {
        let p = conserved_family(a(), e(2));
        let c = ConstPoly::from_int(7);
        let dp = DiffOp::term(0, FourierPoly::constant(c.clone()));
        assert_eq!(delta_expectation(&p, &dp, &w()), c);

        let dp = DiffOp::term(1, FourierPoly::one());
        assert_eq!(delta_expectation(&p, &dp, &w()), ConstPoly::i());
    }

    #[test]
    fn special_cases_match_the_table() {
        use ConstraintKind::*;
        let integral: Vec<_> = (1..=6)
            .map(|k| {
                solve_special_case(k, EquivalenceMode::Integral)
                    .unwrap()
                    .constraint
            })
            .collect();
        assert_eq!(
            integral,
            vec![
                Identity,
                MeanEquals(a()),
                MeanEquals(-a()),
                MeanEquals(ConstPoly::zero()),
                MeanEquals(ConstPoly::zero()),
                ForcesConstantZero,
            ]
        );

        let pw = solve_special_case(2, EquivalenceMode::Pointwise).unwrap();
        assert_eq!(pw.constraint, B2Equals(FourierPoly::constant(a())));
        let op = pw.solved_operator().unwrap();
        assert_eq!(
            op,
            DiffOp::term(1, FourierPoly::constant(-ConstPoly::i() * a()))
        );
        assert_eq!(classify(&op), Family::Beta(a()));
    }

    #[test]
    fn case_out_of_range_is_rejected() {
        assert_eq!(
            solve_special_case(0, EquivalenceMode::Integral),
            Err(ConservationError::CaseOutOfRange(0))
        );
        assert!(solve_special_case(7, EquivalenceMode::Pointwise).is_err());
    }

    #[test]
    fn case6_symbol_difference_is_a() {
        // σ₀ − σ₆ = A: the integral condition reads mean(A) = 0, forcing A = 0.
        let b2 = &e(1).scale(&ConstPoly::from_int(2)) + &e(-2);
        let general = conserved_family(a(), b2.clone());
        let case6 = instantiate_case(6, &ConstPoly::zero(), &b2);
        let diff = (&general - &case6).symbol();
        assert_eq!(diff, FourierPoly::constant(a()));
    }

    #[test]
    fn classify_canonical_shapes() {
        let hbar = ConstPoly::symbol("hbar");
        let beta = DiffOp::term(1, FourierPoly::constant(-ConstPoly::i() * hbar.clone()));
        assert_eq!(classify(&beta), Family::Beta(hbar.clone()));

        let alpha = DiffOp::term(0, FourierPoly::constant(a()));
        assert_eq!(classify(&alpha), Family::Alpha(a()));

        let gamma = DiffOp::term(2, FourierPoly::constant(a()));
        assert_eq!(classify(&gamma), Family::Gamma(a()));
    }

    #[test]
    fn classify_reduces_higher_orders() {
        // i∂³ collapses to b1 = −i, i.e. −i∂ on ψ: Beta with A = 1.
        let p = DiffOp::term(3, FourierPoly::constant(ConstPoly::i()));
        assert_eq!(classify(&p), Family::Beta(ConstPoly::one()));
        // Brute-force cross-check: the symbol is i·i³ = 1 = A.
        assert_eq!(p.symbol(), FourierPoly::one());
    }

    #[test]
    fn classify_null_and_general() {
        // Zero symbol without being conserved-shaped: 1 + ∂².
        let p = DiffOp::from_coeffs([(0, FourierPoly::one()), (2, FourierPoly::one())]);
        assert_eq!(classify(&p), Family::NullSymbol);

        // Conserved with A = 0 and B₂ ≠ 0 also acts as zero on ψ.
        let case6 = conserved_family(ConstPoly::zero(), e(1));
        assert_eq!(classify(&case6), Family::NullSymbol);

        // Conserved with φ-dependent B₂ and nonzero A.
        let p = conserved_family(a(), e(1));
        assert_eq!(classify(&p), Family::GeneralConserved(a()));

        // The shape patterns are purely structural: ∂ = −i·(i)·∂ matches the
        // first-derivative family with constant i.
        assert_eq!(
            classify(&DiffOp::term(1, FourierPoly::one())),
            Family::Beta(ConstPoly::i())
        );

        // Constant symbol but B₁ ≠ −iB₂: expectation is φ-invariant yet the
        // conservation condition fails.
        let p = DiffOp::from_coeffs([
            (0, FourierPoly::constant(ConstPoly::from_int(2))),
            (1, FourierPoly::constant(ConstPoly::i())),
        ]);
        assert_eq!(classify(&p), Family::NotConserved);

        assert_eq!(classify(&DiffOp::term(0, e(1))), Family::NotConserved);
        assert_eq!(classify(&DiffOp::zero()), Family::NullSymbol);
    }

    #[test]
    fn physical_forms() {
        let beta = Family::Beta(a());
        assert_eq!(
            substitute_physical(&beta, "x", "hbar").unwrap(),
            "-i*hbar*d/dx"
        );
        assert_eq!(
            substitute_physical(&Family::Alpha(a()), "x", "hbar").unwrap(),
            "hbar"
        );
        assert_eq!(
            substitute_physical(&Family::Gamma(a()), "x", "hbar").unwrap(),
            "hbar*d^2/dx^2"
        );
        assert_eq!(
            substitute_physical(&Family::NotConserved, "x", "hbar"),
            Err(ConservationError::NoPhysicalForm("NotConserved"))
        );
    }
}
