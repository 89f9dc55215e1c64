//! Built-in verification corpus: a fixed set of operators pushed through
//! every route the engine provides, with the symbolic and numeric answers
//! compared at pinned tolerances.
//!
//! Per entry: parse → print → reparse identity; pointwise symbol soundness
//! on a 32-node grid; exact collapse equivalence plus classification
//! invariance under collapse; and symbolic expectation against trapezoidal
//! quadrature at 64 nodes. Self-contained and fast: no files, no network.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::conservation::{classify, expectation};
use crate::diffop::WaveSpec;
use crate::numlab::{
    eval_const, eval_fourier, quad_expectation, Binding, GridSpec, NumlabError,
    EXPECTATION_QUAD_TOL, SYMBOL_POINTWISE_TOL,
};
use crate::syntax::{parse_operator, print_operator};

/// Operators covering the shapes the engine must handle: the three canonical
/// families, general conserved members (constant and φ-dependent B₂),
/// higher-order collapses, zero-symbol operators, and plain non-conserved
/// ones.
pub const CORPUS: &[(&str, &str)] = &[
    ("constant", "A"),
    ("momentum shape", "-i*hbar*D1"),
    ("energy shape", "hbar*D2"),
    ("family, constant B2", "A - i*B*D1 + B*D2"),
    ("family, oscillating B2", "2 - i*E(1)*D1 + E(1)*D2"),
    ("family, mixed B2", "A - i*(B + E(2))*D1 + (B + E(2))*D2"),
    ("pure third derivative", "D3"),
    ("beta via collapse", "i*D3"),
    ("cancelling even orders", "D2 + D4"),
    ("zero symbol, non-conserved", "1 + D2"),
    ("oscillating multiplier", "E(3)"),
    ("rational coefficient", "3/2*E(-2)*D2"),
    ("grouped coefficient", "A + (1 + E(1))*D1"),
    ("wide band", "1/2 + A*A*E(2)*D6 - E(-4)*D1"),
    ("derivative ladder", "D1 - D3 + D5"),
    ("case-6 shape", "-i*B*D1 + B*D2"),
];

/// Rational values used for the corpus constants.
pub fn corpus_binding() -> Binding {
    Binding::new()
        .bind_int("A", 2)
        .bind("B", num_rational::BigRational::new(1.into(), 2.into()))
        .bind_int("hbar", 3)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub expr: &'static str,
    pub passed: bool,
    /// Empty when passed; otherwise one line per failed check.
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

fn check_entry(name: &'static str, expr: &'static str) -> CheckOutcome {
    let mut failures = Vec::new();
    match run_entry(expr, &mut failures) {
        Ok(()) => {}
        Err(e) => failures.push(format!("oracle error: {e}")),
    }
    CheckOutcome {
        name,
        expr,
        passed: failures.is_empty(),
        failures,
    }
}

fn run_entry(expr: &str, failures: &mut Vec<String>) -> Result<(), NumlabError> {
    let p = match parse_operator(expr) {
        Ok(p) => p,
        Err(e) => {
            failures.push(format!("parse: {e}"));
            return Ok(());
        }
    };

    let printed = print_operator(&p);
    match parse_operator(&printed) {
        Ok(back) if back == p => {}
        Ok(_) => failures.push(format!("round-trip changed the operator: '{printed}'")),
        Err(e) => failures.push(format!("printed form '{printed}' fails to parse: {e}")),
    }

    let b = corpus_binding();
    let g32 = GridSpec::new(32).expect("32 >= 4");
    let dev = crate::numlab::max_symbol_deviation(&p, &b, &g32)?;
    if dev >= SYMBOL_POINTWISE_TOL {
        failures.push(format!("symbol deviation {dev:.3e} over tolerance"));
    }

    let collapsed = p.collapse().expand();
    if collapsed.symbol() != p.symbol() {
        failures.push("collapse changed the symbol".to_string());
    }
    if classify(&collapsed) != classify(&p) {
        failures.push("classification not invariant under collapse".to_string());
    }

    let w = WaveSpec::normalized();
    let symbolic_value = eval_const(&expectation(&p, &w), &b)?;
    let g64 = GridSpec::new(64).expect("64 >= 4");
    let numeric = quad_expectation(&p, &w, &b, &g64)?;
    let diff = (numeric - symbolic_value).norm();
    if diff >= EXPECTATION_QUAD_TOL {
        failures.push(format!("expectation mismatch {diff:.3e} over tolerance"));
    }

    // The evaluator itself must agree with the printed form reparsed.
    let reparsed = parse_operator(&printed).unwrap_or_else(|_| p.clone());
    let v1 = eval_fourier(&p.apply_unit(), &b, 1.0)?;
    let v2 = eval_fourier(&reparsed.apply_unit(), &b, 1.0)?;
    if (v1 - v2).norm() != 0.0 {
        failures.push("reparsed operator evaluates differently".to_string());
    }
    Ok(())
}

/// Runs every corpus entry sequentially.
pub fn run_corpus_seq() -> VerifyReport {
    VerifyReport {
        outcomes: CORPUS.iter().map(|&(n, e)| check_entry(n, e)).collect(),
    }
}

/// Runs the corpus, fanning entries out over rayon when the `parallel`
/// feature is enabled. Entry order in the report is fixed either way.
#[cfg(feature = "parallel")]
pub fn run_corpus() -> VerifyReport {
    VerifyReport {
        outcomes: CORPUS.par_iter().map(|&(n, e)| check_entry(n, e)).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn run_corpus() -> VerifyReport {
    run_corpus_seq()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_passes() {
        let report = run_corpus();
        for o in &report.outcomes {
            assert!(o.passed, "{} ({}) failed: {:?}", o.name, o.expr, o.failures);
        }
    }

    #[test]
    fn parallel_and_sequential_reports_match() {
        assert_eq!(run_corpus(), run_corpus_seq());
    }
}
