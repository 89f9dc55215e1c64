//! Textual operator language: parser and canonical printer.
//!
//! Surface syntax:
//!
//! ```text
//! operator := ['-'] term (('+' | '-') term)*
//! term     := coeff ('*' 'D' INT)? | 'D' INT
//! coeff    := factor ('*' factor)*
//! factor   := NUMBER | NUMBER '/' NUMBER | 'i' | IDENT | 'E(' SINT ')'
//!           | '(' coeff-sum ')'
//! ```
//!
//! `Dn` is the n-th derivative in φ, `E(k)` is `e^{ikφ}`, `i` the imaginary
//! unit, and any other identifier a symbolic real constant (implicitly
//! declared on first use). Parenthesized sums may appear only in coefficient
//! position and never contain a derivative. Whitespace is insignificant.
//!
//! The printer emits a fixed canonical form (ascending derivative order,
//! ascending frequency inside each coefficient, rationals as `a/b`), and
//! `parse(print(p)) == p` for every operator.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::diffop::DiffOp;
use crate::exactnum::{ConstPoly, GaussRat, Monomial};
use crate::fourier::FourierPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at {line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            line: pos.line,
            col: pos.col,
            message: message.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Number(BigInt),
    Ident(String),
    ImagUnit,
    Deriv(u32),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Number(n) => write!(f, "number '{n}'"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::ImagUnit => write!(f, "'i'"),
            Tok::Deriv(n) => write!(f, "'D{n}'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = src.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let pos = Pos { line, col };
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '+' | '-' | '*' | '/' | '(' | ')' => {
                chars.next();
                col += 1;
                out.push((
                    match ch {
                        '+' => Tok::Plus,
                        '-' => Tok::Minus,
                        '*' => Tok::Star,
                        '/' => Tok::Slash,
                        '(' => Tok::LParen,
                        _ => Tok::RParen,
                    },
                    pos,
                ));
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let n: BigInt = digits.parse().expect("digit run parses as integer");
                out.push((Tok::Number(n), pos));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        word.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let tok = if word == "i" {
                    Tok::ImagUnit
                } else if word == "D" {
                    return Err(ParseError::new(pos, "expected derivative order after 'D'"));
                } else if let Some(rest) = word.strip_prefix('D') {
                    if rest.chars().all(|d| d.is_ascii_digit()) {
                        let order: u32 = rest.parse().map_err(|_| {
                            ParseError::new(pos, format!("derivative order '{rest}' is too large"))
                        })?;
                        Tok::Deriv(order)
                    } else {
                        Tok::Ident(word)
                    }
                } else {
                    Tok::Ident(word)
                };
                out.push((tok, pos));
            }
            other => {
                return Err(ParseError::new(
                    pos,
                    format!("unexpected character '{other}'"),
                ));
            }
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

/// Surface syntax tree, prior to conversion into a canonical [`DiffOp`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorExpr {
    pub terms: Vec<(Sign, TermExpr)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Pos,
    Neg,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermExpr {
    /// Coefficient factors; empty for a bare `Dn` term (coefficient 1).
    pub factors: Vec<FactorExpr>,
    /// Derivative order; `None` means order 0.
    pub deriv_order: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorExpr {
    Rational(BigRational),
    ImagUnit,
    Constant(String),
    /// `E(k)`.
    Mode(i64),
    /// Parenthesized operator-free sum of factor products.
    Group(Vec<(Sign, Vec<FactorExpr>)>),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::new(
                self.pos(),
                format!("expected {what}, found {}", self.peek()),
            ))
        }
    }

    fn parse_operator(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                Sign::Neg
            }
            _ => Sign::Pos,
        };
        loop {
            terms.push((sign, self.parse_term()?));
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    sign = Sign::Pos;
                }
                Tok::Minus => {
                    self.bump();
                    sign = Sign::Neg;
                }
                Tok::Eof => break,
                other => {
                    return Err(ParseError::new(
                        self.pos(),
                        format!("expected '+', '-' or end of input, found {other}"),
                    ));
                }
            }
        }
        Ok(OperatorExpr { terms })
    }

    fn parse_term(&mut self) -> Result<TermExpr, ParseError> {
        if let Tok::Deriv(n) = *self.peek() {
            self.bump();
            return Ok(TermExpr {
                factors: Vec::new(),
                deriv_order: Some(n),
            });
        }
        let mut factors = vec![self.parse_factor(false)?];
        let mut deriv_order = None;
        while *self.peek() == Tok::Star {
            self.bump();
            if let Tok::Deriv(n) = *self.peek() {
                self.bump();
                deriv_order = Some(n);
                if *self.peek() == Tok::Star {
                    return Err(ParseError::new(
                        self.pos(),
                        "nothing may follow the derivative inside a term",
                    ));
                }
                break;
            }
            factors.push(self.parse_factor(false)?);
        }
        Ok(TermExpr {
            factors,
            deriv_order,
        })
    }

    fn parse_factor(&mut self, in_coeff_group: bool) -> Result<FactorExpr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Number(n) => {
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Tok::Number(d) => {
                            if d.is_zero() {
                                Err(ParseError::new(dpos, "denominator must be nonzero"))
                            } else {
                                Ok(FactorExpr::Rational(BigRational::new(n, d)))
                            }
                        }
                        other => Err(ParseError::new(
                            dpos,
                            format!("expected denominator after '/', found {other}"),
                        )),
                    }
                } else {
                    Ok(FactorExpr::Rational(BigRational::from_integer(n)))
                }
            }
            Tok::ImagUnit => Ok(FactorExpr::ImagUnit),
            Tok::Ident(name) => {
                if name == "E" && *self.peek() == Tok::LParen {
                    self.bump();
                    let neg = match self.peek() {
                        Tok::Minus => {
                            self.bump();
                            true
                        }
                        Tok::Plus => {
                            self.bump();
                            false
                        }
                        _ => false,
                    };
                    let kpos = self.pos();
                    match self.bump() {
                        Tok::Number(n) => {
                            let k: i64 = n.try_into().map_err(|_| {
                                ParseError::new(kpos, "mode frequency is too large")
                            })?;
                            self.expect(&Tok::RParen, "')' after mode frequency")?;
                            Ok(FactorExpr::Mode(if neg { -k } else { k }))
                        }
                        other => Err(ParseError::new(
                            kpos,
                            format!("expected integer mode frequency, found {other}"),
                        )),
                    }
                } else {
                    Ok(FactorExpr::Constant(name))
                }
            }
            Tok::LParen => {
                let group = self.parse_coeff_sum()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(FactorExpr::Group(group))
            }
            Tok::Deriv(_) => Err(ParseError::new(
                pos,
                if in_coeff_group {
                    "derivative operator is not allowed inside a coefficient"
                } else {
                    "derivative must be attached to its coefficient with '*'"
                },
            )),
            other => Err(ParseError::new(
                pos,
                format!("expected a coefficient factor, found {other}"),
            )),
        }
    }

    fn parse_coeff_sum(&mut self) -> Result<Vec<(Sign, Vec<FactorExpr>)>, ParseError> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                Sign::Neg
            }
            _ => Sign::Pos,
        };
        loop {
            let mut factors = vec![self.parse_factor(true)?];
            while *self.peek() == Tok::Star {
                self.bump();
                factors.push(self.parse_factor(true)?);
            }
            terms.push((sign, factors));
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    sign = Sign::Pos;
                }
                Tok::Minus => {
                    self.bump();
                    sign = Sign::Neg;
                }
                _ => break,
            }
        }
        Ok(terms)
    }
}

/// Parses surface syntax without lowering.
pub fn parse_expr(src: &str) -> Result<OperatorExpr, ParseError> {
    let toks = tokenize(src)?;
    if toks.len() == 1 {
        return Err(ParseError::new(toks[0].1, "empty input"));
    }
    let mut p = Parser { toks, at: 0 };
    p.parse_operator()
}

impl FactorExpr {
    fn to_fourier(&self) -> FourierPoly {
        match self {
            FactorExpr::Rational(q) => {
                FourierPoly::constant(ConstPoly::constant(GaussRat::from_rational(q.clone())))
            }
            FactorExpr::ImagUnit => FourierPoly::constant(ConstPoly::i()),
            FactorExpr::Constant(name) => FourierPoly::constant(ConstPoly::symbol(name)),
            FactorExpr::Mode(k) => FourierPoly::harmonic(*k),
            FactorExpr::Group(terms) => sum_products(terms),
        }
    }
}

fn product(factors: &[FactorExpr]) -> FourierPoly {
    factors
        .iter()
        .fold(FourierPoly::one(), |acc, f| &acc * &f.to_fourier())
}

fn sum_products(terms: &[(Sign, Vec<FactorExpr>)]) -> FourierPoly {
    let mut acc = FourierPoly::zero();
    for (sign, factors) in terms {
        let p = product(factors);
        acc = match sign {
            Sign::Pos => &acc + &p,
            Sign::Neg => &acc - &p,
        };
    }
    acc
}

impl OperatorExpr {
    /// Lowers the surface tree into a canonical operator.
    pub fn to_diff_op(&self) -> DiffOp {
        let mut acc = DiffOp::zero();
        for (sign, term) in &self.terms {
            let coeff = product(&term.factors);
            let order = term.deriv_order.unwrap_or(0);
            let contrib = DiffOp::term(order, coeff);
            acc = match sign {
                Sign::Pos => &acc + &contrib,
                Sign::Neg => &acc + &(-contrib),
            };
        }
        acc
    }
}

/// Parses operator surface syntax into a canonical [`DiffOp`].
pub fn parse_operator(src: &str) -> Result<DiffOp, ParseError> {
    Ok(parse_expr(src)?.to_diff_op())
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

/// One printable product: a sign and the `*`-joined factor strings.
#[derive(Clone, Debug)]
struct Chain {
    neg: bool,
    factors: Vec<String>,
}

impl Chain {
    fn render(&self) -> String {
        self.factors.join("*")
    }
}

fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn chain(q: &BigRational, imag: bool, mono: &Monomial, k: i64) -> Chain {
    let neg = q.is_negative();
    let mag = q.abs();
    let mut factors = Vec::new();
    if !mag.is_one() {
        factors.push(rational_string(&mag));
    }
    if imag {
        factors.push("i".to_string());
    }
    for (name, exp) in mono.pairs() {
        for _ in 0..*exp {
            factors.push(name.clone());
        }
    }
    if k != 0 {
        factors.push(format!("E({k})"));
    }
    if factors.is_empty() {
        factors.push("1".to_string());
    }
    Chain { neg, factors }
}

/// Flattens a Fourier polynomial into printable chains: ascending frequency,
/// then ascending monomial, real part before imaginary part.
fn fourier_chains(f: &FourierPoly) -> Vec<Chain> {
    let mut out = Vec::new();
    for (k, c) in f.modes() {
        for (mono, s) in c.terms() {
            if !s.re().is_zero() {
                out.push(chain(s.re(), false, mono, k));
            }
            if !s.im().is_zero() {
                out.push(chain(s.im(), true, mono, k));
            }
        }
    }
    out
}

fn join_chains(chains: &[Chain]) -> String {
    let mut s = String::new();
    for (idx, ch) in chains.iter().enumerate() {
        if idx == 0 {
            if ch.neg {
                s.push('-');
            }
        } else {
            s.push_str(if ch.neg { " - " } else { " + " });
        }
        s.push_str(&ch.render());
    }
    s
}

/// Canonical rendering of a scalar polynomial (`"0"` when zero).
pub fn print_const_poly(c: &ConstPoly) -> String {
    print_fourier_poly(&FourierPoly::constant(c.clone()))
}

/// Canonical rendering of a coefficient function (`"0"` when zero).
pub fn print_fourier_poly(f: &FourierPoly) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    join_chains(&fourier_chains(f))
}

/// Canonical rendering of an operator; `parse_operator` inverts it exactly.
pub fn print_operator(p: &DiffOp) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut chains: Vec<Chain> = Vec::new();
    for (order, f) in p.coeffs() {
        if order == 0 {
            chains.extend(fourier_chains(f));
            continue;
        }
        let deriv = format!("D{order}");
        let mut inner = fourier_chains(f);
        if inner.len() == 1 {
            let mut only = inner.pop().expect("nonzero coefficient has a chain");
            if only.factors == ["1"] {
                only.factors.clear();
            }
            only.factors.push(deriv);
            chains.push(only);
        } else {
            chains.push(Chain {
                neg: false,
                factors: vec![format!("({})", join_chains(&inner)), deriv],
            });
        }
    }
    join_chains(&chains)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(src: &str) -> String {
        print_operator(&parse_operator(src).unwrap())
    }

    #[test]
    fn parses_pure_derivative() {
        assert_eq!(
            parse_operator("D3").unwrap(),
            DiffOp::term(3, FourierPoly::one())
        );
    }

    #[test]
    fn parses_conserved_shape() {
        let p = parse_operator("A - i*B*D1 + B*D2").unwrap();
        let b = FourierPoly::constant(ConstPoly::symbol("B"));
        let expected = DiffOp::from_coeffs([
            (0, FourierPoly::constant(ConstPoly::symbol("A"))),
            (1, b.scale(&-ConstPoly::i())),
            (2, b),
        ]);
        assert_eq!(p, expected);
    }

    #[test]
    fn parses_phi_dependent_family() {
        let p = parse_operator("2 - i*E(1)*D1 + E(1)*D2").unwrap();
        assert_eq!(p.coeff(0), FourierPoly::constant(ConstPoly::from_int(2)));
        assert_eq!(p.coeff(1), FourierPoly::harmonic(1).scale(&-ConstPoly::i()));
        assert_eq!(p.coeff(2), FourierPoly::harmonic(1));
        assert!(crate::conservation::is_conserved(&p));
    }

    #[test]
    fn parses_rationals_and_groups() {
        let p = parse_operator("3/2*A*A*E(-2)*D5").unwrap();
        assert_eq!(roundtrip("3/2*A*A*E(-2)*D5"), "3/2*A*A*E(-2)*D5");
        assert_eq!(p.order(), Some(5));

        let q = parse_operator("(1 + E(2))*D1").unwrap();
        assert_eq!(q.coeff(1), &FourierPoly::one() + &FourierPoly::harmonic(2));
    }

    #[test]
    fn print_examples() {
        assert_eq!(
            print_operator(&DiffOp::term(1, FourierPoly::constant(-ConstPoly::i()))),
            "-i*D1"
        );
        assert_eq!(print_operator(&DiffOp::zero()), "0");
        let p = DiffOp::from_coeffs([
            (0, FourierPoly::constant(ConstPoly::symbol("A"))),
            (2, FourierPoly::harmonic(-1)),
        ]);
        assert_eq!(print_operator(&p), "A + E(-1)*D2");
    }

    #[test]
    fn roundtrip_examples() {
        for src in [
            "D3",
            "0",
            "-i*D1",
            "A + E(-1)*D2",
            "2 - i*E(1)*D1 + E(1)*D2",
            "(1 + E(2))*D1",
            "(-1 + E(2))*D1",
            "1 + 2*i",
            "-3/4*A*A*B*E(-2)*D6",
            "(i + E(1))*D2",
        ] {
            assert_eq!(
                roundtrip(src),
                src,
                "canonical form should be a fixed point"
            );
        }
    }

    #[test]
    fn error_positions() {
        let err = parse_operator("A + $").unwrap_err();
        assert_eq!((err.line, err.col), (1, 5));

        let err = parse_operator("A *\n* D1").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn rejects_derivative_in_coefficient() {
        let err = parse_operator("(D1 + 1)*D2").unwrap_err();
        assert!(
            err.message.contains("inside a coefficient"),
            "{}",
            err.message
        );

        let err = parse_operator("A*D1*B").unwrap_err();
        assert!(err.message.contains("derivative"), "{}", err.message);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_operator("").is_err());
        assert!(parse_operator("D").is_err());
        assert!(parse_operator("1/0").is_err());
        assert!(parse_operator("E(").is_err());
        assert!(parse_operator("A B").is_err());
        assert!(parse_operator("A +").is_err());
    }

    #[test]
    fn bare_d_followed_by_minus_is_rejected() {
        // Negative derivative orders are unrepresentable: 'D' '-' '1' fails
        // at the bare 'D'.
        let err = parse_operator("D-1").unwrap_err();
        assert!(err.message.contains("derivative order"), "{}", err.message);
    }

    #[test]
    fn zero_literal_parses_to_zero_operator() {
        assert!(parse_operator("0").unwrap().is_zero());
        assert!(parse_operator("A - A").unwrap().is_zero());
    }
}
