//! Exact scalar arithmetic: Gaussian rationals and multivariate polynomials
//! in named symbolic constants.
//!
//! [`GaussRat`] is ℚ(i): a complex number with rational real and imaginary
//! parts, stored in lowest terms. [`ConstPoly`] extends it to the polynomial
//! ring over named constants such as `A` or `hbar`. The constants are
//! declared real, so conjugation only conjugates the numeric coefficients.
//!
//! Both types keep a canonical representation at all times (no zero terms,
//! monomials in a fixed lexicographic order), so structural equality is
//! mathematical equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact element of ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussRat::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::new(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::zero(),
        )
    }

    /// Exact rational `num/den`. Panics when `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussRat::new(re, BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.re.is_zero() && !self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(GaussRat::new(&self.re / &norm, -(&self.im / &norm)))
    }

    /// Scale by an exact rational.
    pub fn scale(&self, q: &BigRational) -> Self {
        GaussRat::new(&self.re * q, &self.im * q)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Sign used for canonical printing: the sign of the real part when it is
    /// nonzero, otherwise the sign of the imaginary part.
    pub fn print_sign_negative(&self) -> bool {
        if !self.re.is_zero() {
            self.re.is_negative()
        } else {
            self.im.is_negative()
        }
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: GaussRat) -> GaussRat {
        GaussRat::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<'a> Add<&'a GaussRat> for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &'a GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: GaussRat) -> GaussRat {
        GaussRat::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: GaussRat) -> GaussRat {
        (&self).mul(&rhs)
    }
}

impl<'a> Mul<&'a GaussRat> for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &'a GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if !self.re.is_zero() {
            parts.push(self.re.to_string());
        }
        if !self.im.is_zero() {
            if self.im.is_one() {
                parts.push("i".to_string());
            } else if (-&self.im).is_one() {
                parts.push("-i".to_string());
            } else {
                parts.push(format!("{}*i", self.im));
            }
        }
        let mut out = String::new();
        for (idx, p) in parts.iter().enumerate() {
            if idx == 0 {
                out.push_str(p);
            } else if let Some(stripped) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        write!(f, "{out}")
    }
}

/// Product of named constants with positive integer exponents, kept sorted by
/// name. The empty monomial is the multiplicative identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    /// Builds a monomial from (name, exponent) pairs, merging duplicates and
    /// dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (String, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<String, u32> = BTreeMap::new();
        for (name, exp) in pairs {
            if exp > 0 {
                *map.entry(name).or_insert(0) += exp;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(String, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(self.0.iter().chain(other.0.iter()).cloned())
    }
}

/// Polynomial in named real symbolic constants with [`GaussRat`] coefficients.
///
/// This is the scalar ring for every coefficient in the engine. Canonical
/// form (no zero coefficients, monomials in lexicographic order) is restored
/// by every operation, so `==` decides mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ConstPoly {
    terms: BTreeMap<Monomial, GaussRat>,
}

impl ConstPoly {
    pub fn zero() -> Self {
        ConstPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        ConstPoly::constant(GaussRat::one())
    }

    /// The imaginary unit as a degree-0 polynomial.
    pub fn i() -> Self {
        ConstPoly::constant(GaussRat::i())
    }

    pub fn constant(c: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(), c);
        }
        ConstPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        ConstPoly::constant(GaussRat::from_int(n))
    }

    /// A single symbolic constant, e.g. `ConstPoly::symbol("A")`.
    pub fn symbol(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(name), GaussRat::one());
        ConstPoly { terms }
    }

    /// Rebuilds canonical form from arbitrary (monomial, coefficient) pairs,
    /// merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, GaussRat)>>(pairs: I) -> Self {
        let mut terms: BTreeMap<Monomial, GaussRat> = BTreeMap::new();
        for (m, c) in pairs {
            if c.is_zero() {
                continue;
            }
            match terms.entry(m) {
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
        ConstPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when only the empty monomial appears: the polynomial is a numeric
    /// literal. A bare symbol such as `A` is *not* constant in this sense.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_unit)
    }

    /// The numeric value when [`is_constant`](Self::is_constant) holds.
    pub fn constant_value(&self) -> Option<GaussRat> {
        if self.terms.is_empty() {
            return Some(GaussRat::zero());
        }
        if self.is_constant() {
            self.terms.get(&Monomial::unit()).cloned()
        } else {
            None
        }
    }

    /// Names of all symbolic constants appearing in the polynomial.
    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|(n, _)| n.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Conjugation: the constants are real, so only coefficients flip.
    pub fn conj(&self) -> Self {
        ConstPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.conj()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &GaussRat) -> Self {
        if s.is_zero() {
            return ConstPoly::zero();
        }
        ConstPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * s)))
    }
}

impl From<GaussRat> for ConstPoly {
    fn from(c: GaussRat) -> Self {
        ConstPoly::constant(c)
    }
}

impl Add for ConstPoly {
    type Output = ConstPoly;
    fn add(self, rhs: ConstPoly) -> ConstPoly {
        (&self).add(&rhs)
    }
}

impl<'a> Add<&'a ConstPoly> for &ConstPoly {
    type Output = ConstPoly;
    fn add(self, rhs: &'a ConstPoly) -> ConstPoly {
        ConstPoly::from_terms(
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }
}

impl Sub for ConstPoly {
    type Output = ConstPoly;
    fn sub(self, rhs: ConstPoly) -> ConstPoly {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a ConstPoly> for &ConstPoly {
    type Output = ConstPoly;
    fn sub(self, rhs: &'a ConstPoly) -> ConstPoly {
        self + &(-rhs.clone())
    }
}

impl Mul for ConstPoly {
    type Output = ConstPoly;
    fn mul(self, rhs: ConstPoly) -> ConstPoly {
        (&self).mul(&rhs)
    }
}

impl<'a> Mul<&'a ConstPoly> for &ConstPoly {
    type Output = ConstPoly;
    fn mul(self, rhs: &'a ConstPoly) -> ConstPoly {
        let mut pairs = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                pairs.push((ma.mul(mb), ca * cb));
            }
        }
        ConstPoly::from_terms(pairs)
    }
}

impl Neg for ConstPoly {
    type Output = ConstPoly;
    fn neg(self) -> ConstPoly {
        ConstPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl fmt::Display for ConstPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print_const_poly(self))
    }
}
