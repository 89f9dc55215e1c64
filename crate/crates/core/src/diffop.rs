//! Differential-operator algebra on the periodic wave `ψ(φ) = ρ e^{iφ}`.
//!
//! A [`DiffOp`] is a finite sum `Σₙ Aₙ(φ) ∂ⁿ/∂φⁿ` with Fourier-polynomial
//! coefficients. On ψ every derivative acts as multiplication by a power of
//! i, so each operator has a *symbol* σ(φ) with `L̂ψ = σ(φ)ψ`, and every
//! operator is equivalent on ψ to a second-order [`CollapsedOp`]. Equality
//! of action on ψ (equality of symbols) is the ambient equivalence relation
//! wherever operators are compared; it is strictly weaker than operator
//! identity.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::exactnum::{ConstPoly, GaussRat};
use crate::fourier::FourierPoly;

/// Finite-order differential operator `Σₙ Aₙ(φ) ∂ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiffOp {
    coeffs: BTreeMap<u32, FourierPoly>,
}

impl DiffOp {
    pub fn zero() -> Self {
        DiffOp {
            coeffs: BTreeMap::new(),
        }
    }

    /// Single term `f(φ) ∂ⁿ`.
    pub fn term(order: u32, f: FourierPoly) -> Self {
        let mut coeffs = BTreeMap::new();
        if !f.is_zero() {
            coeffs.insert(order, f);
        }
        DiffOp { coeffs }
    }

    /// Canonical rebuild from arbitrary (order, coefficient) pairs.
    pub fn from_coeffs<I: IntoIterator<Item = (u32, FourierPoly)>>(pairs: I) -> Self {
        let mut coeffs: BTreeMap<u32, FourierPoly> = BTreeMap::new();
        for (n, f) in pairs {
            if f.is_zero() {
                continue;
            }
            match coeffs.entry(n) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(f);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get() + &f;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        DiffOp { coeffs }
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &FourierPoly)> {
        self.coeffs.iter().map(|(n, f)| (*n, f))
    }

    /// Coefficient function at derivative order `n` (zero when absent).
    pub fn coeff(&self, n: u32) -> FourierPoly {
        self.coeffs
            .get(&n)
            .cloned()
            .unwrap_or_else(FourierPoly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest derivative order present; `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, s: &ConstPoly) -> Self {
        if s.is_zero() {
            return DiffOp::zero();
        }
        DiffOp::from_coeffs(self.coeffs.iter().map(|(&n, f)| (n, f.scale(s))))
    }

    /// The symbol σ(φ) with `L̂ψ = σ(φ)ψ`: since `∂ⁿψ = iⁿψ`,
    /// `σ = Σₙ Aₙ(φ) iⁿ`, exactly.
    pub fn symbol(&self) -> FourierPoly {
        let mut acc = FourierPoly::zero();
        for (&n, f) in &self.coeffs {
            acc = &acc + &f.scale(&ConstPoly::constant(i_pow(n)));
        }
        acc
    }

    /// The action on the unit-amplitude wave `e^{iφ}`, as a Fourier
    /// polynomial: `σ(φ)·e^{iφ}`. The amplitude ρ is irrational for the
    /// normalized wave, so it is applied at numeric-evaluation time rather
    /// than folded into the exact coefficients.
    pub fn apply_unit(&self) -> FourierPoly {
        &self.symbol() * &FourierPoly::harmonic(1)
    }

    /// Reduction to the equivalent second-order form using the alternating
    /// odd/even series: `b1 = A₁ − A₃ + A₅ − …`, `b2 = A₂ − A₄ + A₆ − …`.
    /// The symbol is preserved exactly.
    pub fn collapse(&self) -> CollapsedOp {
        let mut a0 = FourierPoly::zero();
        let mut b1 = FourierPoly::zero();
        let mut b2 = FourierPoly::zero();
        for (&n, f) in &self.coeffs {
            if n == 0 {
                a0 = &a0 + f;
            } else if n % 2 == 1 {
                let sign = if (n - 1) / 2 % 2 == 0 { 1 } else { -1 };
                b1 = &b1 + &f.scale(&ConstPoly::from_int(sign));
            } else {
                let sign = if (n - 2) / 2 % 2 == 0 { 1 } else { -1 };
                b2 = &b2 + &f.scale(&ConstPoly::from_int(sign));
            }
        }
        CollapsedOp { a0, b1, b2 }
    }

    /// Operator product `self ∘ rhs` (rhs applied first), expanded with the
    /// Leibniz rule: `∂ⁿ ∘ (f·∂ᵐ) = Σⱼ C(n,j) f⁽ʲ⁾ ∂^{n−j+m}`.
    pub fn compose(&self, rhs: &DiffOp) -> DiffOp {
        let mut pairs = Vec::new();
        for (&n, f) in &self.coeffs {
            for (&m, g) in &rhs.coeffs {
                let mut g_deriv = g.clone();
                for j in 0..=n {
                    let c = binomial(n, j);
                    let coeff = (f * &g_deriv).scale(&ConstPoly::constant(c));
                    pairs.push((n - j + m, coeff));
                    if j < n {
                        g_deriv = g_deriv.diff();
                    }
                }
            }
        }
        DiffOp::from_coeffs(pairs)
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = self.coeffs.values().flat_map(|f| f.symbols()).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// iⁿ as an exact scalar.
fn i_pow(n: u32) -> GaussRat {
    match n % 4 {
        0 => GaussRat::one(),
        1 => GaussRat::i(),
        2 => GaussRat::from_int(-1),
        _ => -GaussRat::i(),
    }
}

fn binomial(n: u32, k: u32) -> GaussRat {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= BigInt::from(n - j);
        den *= BigInt::from(j + 1);
    }
    GaussRat::from_rational(BigRational::new(num, den))
}

impl Add for DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: DiffOp) -> DiffOp {
        (&self).add(&rhs)
    }
}

impl<'a> Add<&'a DiffOp> for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &'a DiffOp) -> DiffOp {
        DiffOp::from_coeffs(
            self.coeffs
                .iter()
                .chain(rhs.coeffs.iter())
                .map(|(&n, f)| (n, f.clone())),
        )
    }
}

impl Sub for DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: DiffOp) -> DiffOp {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a DiffOp> for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &'a DiffOp) -> DiffOp {
        self + &(-rhs.clone())
    }
}

impl Neg for DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp {
            coeffs: self.coeffs.into_iter().map(|(n, f)| (n, -f)).collect(),
        }
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print_operator(self))
    }
}

/// The reduced second-order form `(A₀, B₁, B₂)`. Carries no conservation
/// assumption: any triple is a legal collapsed operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapsedOp {
    pub a0: FourierPoly,
    pub b1: FourierPoly,
    pub b2: FourierPoly,
}

impl CollapsedOp {
    /// Back to an operator: `{0: A₀, 1: B₁, 2: B₂}`.
    pub fn expand(&self) -> DiffOp {
        DiffOp::from_coeffs([
            (0, self.a0.clone()),
            (1, self.b1.clone()),
            (2, self.b2.clone()),
        ])
    }
}

/// The wave `ψ(φ) = ρ e^{iφ}` on `[0, 2π)`.
///
/// The squared norm `⟨ψ|ψ⟩ = 2πρ²` is tracked exactly when it is rational,
/// which covers the normalized wave (ρ = (2π)^{-1/2}, norm 1) and all its
/// rational rescalings. Amplitudes given directly as floats keep only the
/// numeric ρ and cannot participate in exact expectation values.
#[derive(Clone, Debug)]
pub struct WaveSpec {
    rho: f64,
    exact_norm: Option<BigRational>,
}

impl WaveSpec {
    /// The normalized wave: `ρ = (2π)^{-1/2}`, `⟨ψ|ψ⟩ = 1`.
    pub fn normalized() -> Self {
        WaveSpec {
            rho: 1.0 / (2.0 * std::f64::consts::PI).sqrt(),
            exact_norm: Some(BigRational::one()),
        }
    }

    /// Wave with an exact squared norm `⟨ψ|ψ⟩ = 2πρ² = norm`. Panics unless
    /// `norm > 0`.
    pub fn with_norm(norm: BigRational) -> Self {
        assert!(norm.is_positive(), "wave norm must be positive");
        let rho = (norm.to_f64().unwrap() / (2.0 * std::f64::consts::PI)).sqrt();
        WaveSpec {
            rho,
            exact_norm: Some(norm),
        }
    }

    /// Wave with a plain floating-point amplitude. Panics unless `rho > 0`.
    pub fn with_rho(rho: f64) -> Self {
        assert!(rho > 0.0 && rho.is_finite(), "amplitude must be positive");
        WaveSpec {
            rho,
            exact_norm: None,
        }
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Exact `⟨ψ|ψ⟩` when known.
    pub fn exact_norm(&self) -> Option<&BigRational> {
        self.exact_norm.as_ref()
    }

    pub fn is_normalized(&self) -> bool {
        self.exact_norm.as_ref().is_some_and(BigRational::is_one)
    }
}

impl Default for WaveSpec {
    fn default() -> Self {
        WaveSpec::normalized()
    }
}
