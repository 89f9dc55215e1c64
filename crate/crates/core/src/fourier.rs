//! Finite Fourier polynomials `Σₖ cₖ e^{ikφ}` with [`ConstPoly`] coefficients.
//!
//! This is the class of admissible coefficient functions: closed under sums,
//! products, differentiation and conjugation, and periodic by construction.
//! The representation is canonical (sorted frequencies, no zero coefficients),
//! so structural equality is equality as functions of φ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::exactnum::{ConstPoly, GaussRat};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FourierPoly {
    modes: BTreeMap<i64, ConstPoly>,
}

impl FourierPoly {
    pub fn zero() -> Self {
        FourierPoly {
            modes: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        FourierPoly::constant(ConstPoly::one())
    }

    /// Frequency-0 embedding of a scalar.
    pub fn constant(c: ConstPoly) -> Self {
        FourierPoly::mode(0, c)
    }

    /// The single harmonic `e^{ikφ}`.
    pub fn harmonic(k: i64) -> Self {
        FourierPoly::mode(k, ConstPoly::one())
    }

    /// `c · e^{ikφ}`.
    pub fn mode(k: i64, c: ConstPoly) -> Self {
        let mut modes = BTreeMap::new();
        if !c.is_zero() {
            modes.insert(k, c);
        }
        FourierPoly { modes }
    }

    /// Canonical rebuild from arbitrary (frequency, coefficient) pairs.
    pub fn from_modes<I: IntoIterator<Item = (i64, ConstPoly)>>(pairs: I) -> Self {
        let mut modes: BTreeMap<i64, ConstPoly> = BTreeMap::new();
        for (k, c) in pairs {
            if c.is_zero() {
                continue;
            }
            match modes.entry(k) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get() + &c;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        FourierPoly { modes }
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, &ConstPoly)> {
        self.modes.iter().map(|(k, c)| (*k, c))
    }

    /// Coefficient at frequency `k` (zero when absent).
    pub fn coeff(&self, k: i64) -> ConstPoly {
        self.modes.get(&k).cloned().unwrap_or_else(ConstPoly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    /// True iff only frequency 0 is present (or the polynomial is zero).
    pub fn is_constant(&self) -> bool {
        self.modes.keys().all(|&k| k == 0)
    }

    /// Largest |frequency| present.
    pub fn bandwidth(&self) -> i64 {
        self.modes.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    /// d/dφ applied mode-wise: `cₖ e^{ikφ} ↦ (ik) cₖ e^{ikφ}`.
    pub fn diff(&self) -> Self {
        FourierPoly::from_modes(self.modes.iter().map(|(&k, c)| {
            let ik = GaussRat::new(
                BigRational::default(),
                BigRational::from_integer(BigInt::from(k)),
            );
            (k, c.scale(&ik))
        }))
    }

    /// Complex conjugate as a function of real φ: `cₖ ↦ conj(c₋ₖ)`.
    pub fn conj(&self) -> Self {
        FourierPoly::from_modes(self.modes.iter().map(|(&k, c)| (-k, c.conj())))
    }

    /// Mean over one period: the frequency-0 coefficient. All oscillatory
    /// modes integrate to zero over `[0, 2π)`.
    pub fn mean(&self) -> ConstPoly {
        self.coeff(0)
    }

    pub fn scale(&self, s: &ConstPoly) -> Self {
        if s.is_zero() {
            return FourierPoly::zero();
        }
        FourierPoly::from_modes(self.modes.iter().map(|(&k, c)| (k, c * s)))
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = self.modes.values().flat_map(|c| c.symbols()).collect();
        out.sort();
        out.dedup();
        out
    }
}

impl From<ConstPoly> for FourierPoly {
    fn from(c: ConstPoly) -> Self {
        FourierPoly::constant(c)
    }
}

impl Add for FourierPoly {
    type Output = FourierPoly;
    fn add(self, rhs: FourierPoly) -> FourierPoly {
        (&self).add(&rhs)
    }
}

impl<'a> Add<&'a FourierPoly> for &FourierPoly {
    type Output = FourierPoly;
    fn add(self, rhs: &'a FourierPoly) -> FourierPoly {
        FourierPoly::from_modes(
            self.modes
                .iter()
                .chain(rhs.modes.iter())
                .map(|(&k, c)| (k, c.clone())),
        )
    }
}

impl Sub for FourierPoly {
    type Output = FourierPoly;
    fn sub(self, rhs: FourierPoly) -> FourierPoly {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a FourierPoly> for &FourierPoly {
    type Output = FourierPoly;
    fn sub(self, rhs: &'a FourierPoly) -> FourierPoly {
        self + &(-rhs.clone())
    }
}

impl Mul for FourierPoly {
    type Output = FourierPoly;
    fn mul(self, rhs: FourierPoly) -> FourierPoly {
        (&self).mul(&rhs)
    }
}

impl<'a> Mul<&'a FourierPoly> for &FourierPoly {
    type Output = FourierPoly;
    fn mul(self, rhs: &'a FourierPoly) -> FourierPoly {
        // e^{ikφ} · e^{imφ} = e^{i(k+m)φ}: convolution over frequencies.
        let mut pairs = Vec::with_capacity(self.modes.len() * rhs.modes.len());
        for (&ka, ca) in &self.modes {
            for (&kb, cb) in &rhs.modes {
                pairs.push((ka + kb, ca * cb));
            }
        }
        FourierPoly::from_modes(pairs)
    }
}

impl Neg for FourierPoly {
    type Output = FourierPoly;
    fn neg(self) -> FourierPoly {
        FourierPoly {
            modes: self.modes.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl fmt::Display for FourierPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print_fourier_poly(self))
    }
}
