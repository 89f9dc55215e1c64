//! Exact operator algebra for periodic wavefunctions, plus a floating-point
//! oracle that cross-checks every symbolic result.
//!
//! The engine works with differential operators `Σₙ Aₙ(φ) ∂ⁿ/∂φⁿ` whose
//! coefficient functions are finite Fourier polynomials over an exact scalar
//! ring (Gaussian rationals extended by named real constants). Acting on the
//! periodic wave `ψ(φ) = ρ e^{iφ}`, every such operator is equivalent to a
//! second-order one; the engine mechanizes that reduction and the analysis
//! built on top of it:
//!
//! * [`exactnum`]: Gaussian rationals and polynomials in named constants.
//! * [`fourier`]: the coefficient-function ring `Σₖ cₖ e^{ikφ}`.
//! * [`diffop`]: operator arithmetic, composition, symbols, order collapse.
//! * [`conservation`]: conservation predicate, expectation values, the
//!   variational probe, special-case solving and classification into the
//!   three canonical families.
//! * [`numlab`]: grid evaluation, trapezoidal quadrature, Monte-Carlo
//!   perturbation probes, and seeded random samplers.
//! * [`syntax`]: the textual operator language (parser and printer).
//! * [`verify`]: a built-in corpus of operators with symbolic-vs-numeric
//!   cross-checks over all of the above.
//!
//! With the `parallel` feature (on by default) the ensemble probe and the
//! verification corpus fan out over rayon; the sequential paths remain
//! available as `*_seq` functions and produce bit-identical results.

pub mod conservation;
pub mod diffop;
pub mod exactnum;
pub mod fourier;
pub mod numlab;
pub mod syntax;
pub mod verify;

pub use conservation::{classify, conserved_family, expectation, is_conserved, Family, FamilyKind};
pub use diffop::{CollapsedOp, DiffOp, WaveSpec};
pub use exactnum::{ConstPoly, GaussRat};
pub use fourier::FourierPoly;
pub use syntax::{parse_operator, print_operator};
