//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured margin. Run with
//! `cargo test -p opcli --test acceptance -- --nocapture`.

use std::collections::BTreeSet;
use std::process::{Command, Output};

use num_complex::Complex64;
use num_rational::BigRational;

use consop::conservation::{
    classify, conserved_family, delta_expectation, expectation, is_conserved, solve_special_case,
    substitute_physical, ConstraintKind, EquivalenceMode, Family, FamilyKind,
};
use consop::diffop::{DiffOp, WaveSpec};
use consop::exactnum::{ConstPoly, GaussRat};
use consop::fourier::FourierPoly;
use consop::numlab::{
    check_normalization, eval_const, max_symbol_deviation, quad_expectation, sample, Binding,
    GridSpec, EXPECTATION_QUAD_TOL, NORM_TOL, QUAD_EXACT_TOL, SYMBOL_POINTWISE_TOL,
};
use consop::syntax::{parse_operator, print_operator};

fn binding() -> Binding {
    Binding::new()
        .bind("A", BigRational::new(5.into(), 3.into()))
        .bind("B", BigRational::new((-2).into(), 7.into()))
        .bind("hbar", BigRational::new(1.into(), 2.into()))
}

fn w() -> WaveSpec {
    WaveSpec::normalized()
}

fn opcli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opcli"))
        .args(args)
        .output()
        .expect("binary runs")
}

// Criterion 1: for 500 seeded random operators (order ≤ 8, bandwidth ≤ 4),
// per-order numeric evaluation of p·ψ matches the symbol route at 32 nodes
// within 1e-10.
#[test]
fn criterion_1_symbol_soundness() {
    let mut rng = sample::rng(101);
    let b = binding();
    let g = GridSpec::new(32).unwrap();
    let mut worst = 0.0_f64;
    for _ in 0..500 {
        let p = sample::diff_op(&mut rng, 8, 4, &["A", "B"]);
        let dev = max_symbol_deviation(&p, &b, &g).unwrap();
        worst = worst.max(dev);
        assert!(
            dev < SYMBOL_POINTWISE_TOL,
            "deviation {dev} for {}",
            print_operator(&p)
        );
    }
    println!(
        "criterion 1 PASS: symbol soundness, 500 operators, max deviation {worst:.3e} < 1e-10"
    );
}

// Criterion 2: the collapsed operator has exactly the same symbol, and the
// pure derivatives ∂³, ∂⁵, ∂⁴, ∂⁶ collapse with alternating signs.
#[test]
fn criterion_2_collapse_equivalence() {
    let mut rng = sample::rng(202);
    for _ in 0..500 {
        let p = sample::diff_op(&mut rng, 8, 4, &["A", "B"]);
        assert_eq!(
            p.collapse().expand().symbol(),
            p.symbol(),
            "collapse changed the symbol of {}",
            print_operator(&p)
        );
    }

    let pure = |n: u32| DiffOp::term(n, FourierPoly::one()).collapse();
    let one = FourierPoly::one();
    assert_eq!(pure(3).b1, -one.clone());
    assert!(pure(3).b2.is_zero());
    assert_eq!(pure(5).b1, one.clone());
    assert_eq!(pure(4).b2, -one.clone());
    assert!(pure(4).b1.is_zero());
    assert_eq!(pure(6).b2, one);
    println!(
        "criterion 2 PASS: collapse equivalence on 500 operators; D3/D5/D4/D6 signs -1/+1/-1/+1"
    );
}

// Criterion 3: expectation of the conserved family is exactly its constant,
// and quadrature with bound constants agrees within 1e-10 at 64 nodes.
#[test]
fn criterion_3_conserved_family_expectation() {
    let mut rng = sample::rng(303);
    let b = binding();
    let g = GridSpec::new(64).unwrap();
    let mut worst = 0.0_f64;
    for trial in 0..200 {
        let a = if trial % 2 == 0 {
            ConstPoly::symbol("A").scale(&GaussRat::from_rational(sample::rational(&mut rng)))
        } else {
            ConstPoly::constant(sample::gauss_rat(&mut rng))
        };
        let b2 = sample::fourier_poly(&mut rng, 4, &["A", "B"]);
        let p = conserved_family(a.clone(), b2);

        assert!(is_conserved(&p));
        assert_eq!(
            expectation(&p, &w()),
            a,
            "expectation must equal the constant exactly"
        );

        let numeric = quad_expectation(&p, &w(), &b, &g).unwrap();
        let exact = eval_const(&a, &b).unwrap();
        let err = (numeric - exact).norm();
        worst = worst.max(err);
        assert!(err < EXPECTATION_QUAD_TOL, "quadrature off by {err}");
    }
    println!("criterion 3 PASS: 200 family members, expectation exact, max quadrature error {worst:.3e} < 1e-10");
}

// Criterion 4: within-family perturbations leave the expectation unchanged
// exactly (100 random cases); the fixed off-family perturbations 1, D1, D2
// shift it by 1, i, -1, each confirmed by quadrature within 1e-10.
#[test]
fn criterion_4_variational_invariance() {
    let mut rng = sample::rng(404);
    let p = conserved_family(
        ConstPoly::symbol("A"),
        FourierPoly::mode(2, ConstPoly::from_int(3)),
    );
    for _ in 0..100 {
        let db2 = sample::fourier_poly(&mut rng, 4, &["A", "B"]);
        let dp = conserved_family(ConstPoly::zero(), db2);
        assert!(delta_expectation(&p, &dp, &w()).is_zero());
    }

    let b = binding();
    let g = GridSpec::new(64).unwrap();
    let base = quad_expectation(&p, &w(), &b, &g).unwrap();
    let expected = [
        (
            DiffOp::term(0, FourierPoly::one()),
            ConstPoly::one(),
            Complex64::new(1.0, 0.0),
        ),
        (
            DiffOp::term(1, FourierPoly::one()),
            ConstPoly::i(),
            Complex64::new(0.0, 1.0),
        ),
        (
            DiffOp::term(2, FourierPoly::one()),
            ConstPoly::from_int(-1),
            Complex64::new(-1.0, 0.0),
        ),
    ];
    let mut worst = 0.0_f64;
    for (dp, symbolic, numeric_expected) in expected {
        assert_eq!(delta_expectation(&p, &dp, &w()), symbolic);
        let moved = quad_expectation(&(&p + &dp), &w(), &b, &g).unwrap();
        let err = ((moved - base) - numeric_expected).norm();
        worst = worst.max(err);
        assert!(err < EXPECTATION_QUAD_TOL, "numeric delta off by {err}");
    }
    println!("criterion 4 PASS: 100 family perturbations exact; offsets 1/D1/D2 give 1, i, -1 (max numeric error {worst:.3e})");
}

// Criterion 5: pointwise solving of the six special cases classifies to
// exactly {Alpha, Beta, Gamma} with case 6 giving NullSymbol; integral-mode
// constraints match the table.
#[test]
fn criterion_5_three_forms() {
    let mut kinds = BTreeSet::new();
    for k in 1..=6 {
        let c = solve_special_case(k, EquivalenceMode::Pointwise).unwrap();
        let fam = classify(&c.solved_operator().unwrap());
        if k == 6 {
            assert_eq!(
                fam.kind(),
                FamilyKind::NullSymbol,
                "case 6 must act as zero on the wave"
            );
        } else {
            kinds.insert(fam.kind());
        }
    }
    assert_eq!(
        kinds,
        [FamilyKind::Alpha, FamilyKind::Beta, FamilyKind::Gamma]
            .into_iter()
            .collect::<BTreeSet<_>>()
    );

    let a = ConstPoly::symbol("A");
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
            ConstraintKind::Identity,
            ConstraintKind::MeanEquals(a.clone()),
            ConstraintKind::MeanEquals(-a),
            ConstraintKind::MeanEquals(ConstPoly::zero()),
            ConstraintKind::MeanEquals(ConstPoly::zero()),
            ConstraintKind::ForcesConstantZero,
        ]
    );
    println!("criterion 5 PASS: pointwise cases classify to {{Alpha, Beta, Gamma}}, case 6 NullSymbol, integral table matches");
}

// Criterion 6: the momentum shape classifies as Beta(hbar) and the three
// physical renderings come out verbatim.
#[test]
fn criterion_6_physical_substitution() {
    let p = parse_operator("-i*hbar*D1").unwrap();
    let family = classify(&p);
    assert_eq!(family, Family::Beta(ConstPoly::symbol("hbar")));

    assert_eq!(
        substitute_physical(&Family::Alpha(ConstPoly::symbol("A")), "x", "hbar").unwrap(),
        "hbar"
    );
    assert_eq!(
        substitute_physical(&family, "x", "hbar").unwrap(),
        "-i*hbar*d/dx"
    );
    assert_eq!(
        substitute_physical(&Family::Gamma(ConstPoly::symbol("A")), "x", "hbar").unwrap(),
        "hbar*d^2/dx^2"
    );

    let out = opcli(&["phys", "--expr", "-i*hbar*D1", "--json"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        r#"{"constant":"hbar","form":"-i*hbar*d/dx","kind":"Beta","var":"x"}"#
    );
    println!(
        "criterion 6 PASS: classify(-i*hbar*D1) = Beta(hbar); alpha/beta/gamma render verbatim"
    );
}

// Criterion 7: trapezoid quadrature is below 1e-12 at 32 nodes for
// bandwidth-≤4 integrands, and the default wave normalizes to 1 ± 1e-12.
#[test]
fn criterion_7_quadrature_exactness() {
    let mut rng = sample::rng(707);
    let b = binding();
    let g = GridSpec::new(32).unwrap();
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let p = sample::diff_op(&mut rng, 6, 4, &["A", "B"]);
        let exact = eval_const(&expectation(&p, &w()), &b).unwrap();
        let numeric = quad_expectation(&p, &w(), &b, &g).unwrap();
        let err = (numeric - exact).norm();
        worst = worst.max(err);
        assert!(
            err < QUAD_EXACT_TOL,
            "error {err} for {}",
            print_operator(&p)
        );
    }

    let norm = check_normalization(&w(), &g);
    assert!((norm - 1.0).abs() < NORM_TOL);
    println!("criterion 7 PASS: 200 integrands, max trapezoid error {worst:.3e} < 1e-12; normalization {norm}");
}

// Criterion 8: parse∘print identity on 500 seeded operators; the verify
// subcommand exits 0; JSON outputs are byte-stable across consecutive runs.
#[test]
fn criterion_8_parser_and_cli_contract() {
    let mut rng = sample::rng(808);
    for _ in 0..500 {
        let p = sample::diff_op(&mut rng, 8, 4, &["A", "B", "hbar"]);
        let printed = print_operator(&p);
        assert_eq!(
            parse_operator(&printed).unwrap(),
            p,
            "round-trip failed for {printed}"
        );
    }

    let verify = opcli(&["verify"]);
    assert_eq!(
        verify.status.code(),
        Some(0),
        "verify must exit 0 on the built-in corpus"
    );

    for args in [
        ["classify", "--expr", "-i*hbar*D1", "--json"].as_slice(),
        ["reduce", "--expr", "2 - i*E(1)*D1 + E(1)*D2", "--json"].as_slice(),
        [
            "expect",
            "--expr",
            "A - i*E(1)*D1 + E(1)*D2",
            "--numeric",
            "--bind",
            "A=3/2",
            "--json",
        ]
        .as_slice(),
    ] {
        let first = opcli(args);
        let second = opcli(args);
        assert!(first.status.success());
        assert_eq!(
            first.stdout, second.stdout,
            "JSON output must be byte-stable"
        );
    }
    println!("criterion 8 PASS: 500 round-trips, verify exit 0, JSON byte-stable across runs");
}
