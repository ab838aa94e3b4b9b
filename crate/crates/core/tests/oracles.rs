//! Independent oracles for values the library computes by other routes.

use framecheck_core::einv::{
    adams_target, bernoulli_top, chern_top_pairing, dimension_audit, e_from_chern, e_proposition, e_theorem,
    factorial, im_j_order,
};
use framecheck_core::laurent::Assignment;
use framecheck_core::su::builders::{build_matrix, MatrixKind};
use framecheck_core::su::identities::random_valid_assignment;
use framecheck_core::su::{check_identity, IdentityTag, SymMatrix};
use framecheck_core::{Polynomial, Rational, RelationConfig, Status, SymbolId};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Classical `B_0..=B_n` from `sum_{k<=n} C(n+1, k) B_k = 0`.
fn bernoulli_by_recurrence(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::one()];
    for k in 1..=n {
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (i, bi) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bi;
            binom = binom * BigInt::from(k + 1 - i) / BigInt::from(i + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(k + 1)));
    }
    b
}

#[test]
fn bernoulli_top_matches_recurrence() {
    let b = bernoulli_by_recurrence(24);
    assert_eq!(b[1], BigRational::new((-1).into(), 2.into()));
    for l in 1..=12u64 {
        let got = bernoulli_top(l).unwrap();
        assert_eq!(got.as_big(), &b[2 * l as usize].abs(), "l={l}");
    }
}

#[test]
fn im_j_orders_for_small_l() {
    let got: Vec<BigInt> = (1..=4).map(|l| im_j_order(l).unwrap()).collect();
    let want: Vec<BigInt> = [24, 240, 504, 480].map(BigInt::from).to_vec();
    assert_eq!(got, want);
}

#[test]
fn e_values_against_targets() {
    let t2 = e_theorem(2).unwrap();
    assert_eq!(t2.value.class_rep(), &Rational::reduce(239, 240).unwrap());
    assert_eq!(t2.value.order(), BigInt::from(240));
    let p1 = e_proposition(1).unwrap();
    assert_eq!(p1.value.class_rep(), &Rational::reduce(119, 120).unwrap());
    assert_eq!(p1.value.order(), BigInt::from(120));
    for n in 2..=6 {
        assert_eq!(e_theorem(n).unwrap().value, adams_target(n * n).unwrap(), "n={n}");
    }
    for n in 1..=6 {
        assert_eq!(e_proposition(n).unwrap().value, adams_target(n * n + n).unwrap(), "n={n}");
    }
}

#[test]
fn chern_calibration_and_zero() {
    for l in 1..=10u64 {
        let sign = if l % 2 == 1 { 1 } else { -1 };
        let c: BigInt = factorial(2 * l - 1).into();
        assert_eq!(e_from_chern(l, &c, sign).unwrap(), adams_target(l).unwrap(), "l={l}");
        assert!(e_from_chern(l, &BigInt::zero(), sign).unwrap().signed_value().is_zero());
    }
}

#[test]
fn chern_pairing_is_factorial() {
    let mut f = 1u64;
    for n in 1..=6u32 {
        f *= n as u64;
        assert_eq!(chern_top_pairing(n, true).unwrap(), f.into());
    }
}

#[test]
fn dimension_audit_counts() {
    for m in 3..=8u64 {
        let a = dimension_audit(m).unwrap();
        assert!(a.ok, "{a:?}");
        let quotient = if m % 2 == 0 { m * m - 2 } else { m * m - 3 };
        assert_eq!(a.dim_base, quotient);
        // circle bundle over the quotient
        assert_eq!(a.dim_manifold, quotient + 1);
        assert_eq!(a.dim_manifold, 4 * a.l - 1);
    }
}

fn eval_matrix(m: &SymMatrix, a: &Assignment) -> DMatrix<Complex64> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m.get(i, j).eval(a).unwrap())
}

fn symbols_of(m: &SymMatrix) -> std::collections::BTreeSet<SymbolId> {
    m.entries().iter().flat_map(|p| p.symbols()).collect()
}

#[test]
fn builder_matrices_evaluate_into_su() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in 2..=4 {
        for kind in MatrixKind::all_for(m) {
            let sym = build_matrix(&kind, RelationConfig::FULL).unwrap();
            let syms = symbols_of(&sym);
            for _ in 0..5 {
                let a = random_valid_assignment(syms.iter(), &mut rng);
                let g = eval_matrix(&sym, &a);
                let gram = &g * g.adjoint();
                let unit = (gram - DMatrix::identity(m, m)).norm();
                let det = (g.determinant() - Complex64::new(1.0, 0.0)).norm();
                assert!(unit < 1e-10 && det < 1e-10, "{} {}: {unit:e} {det:e}", kind.tag(), kind.params());
            }
        }
    }
}

#[test]
fn symbolic_det_routes_agree() {
    for kind in MatrixKind::all_for(3) {
        let sym = build_matrix(&kind, RelationConfig::FULL).unwrap();
        assert_eq!(sym.det().unwrap(), sym.det_leibniz().unwrap(), "{}", kind.tag());
    }
}

#[test]
fn erratum_witness_vanishes_at_real_circle_points() {
    let zp = SymbolId::circle("zp");
    for m in 4..=6 {
        let reports = check_identity(IdentityTag::Sec3Displayed, m, RelationConfig::FULL).unwrap();
        assert!(!reports.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
        for r in reports {
            assert_eq!(r.status, Status::ExpectedFailConfirmed);
            let diff: Polynomial = r.witness.unwrap().poly.unwrap();
            assert!(!diff.is_zero());
            let syms = diff.symbols();
            for sign in [1.0, -1.0] {
                let mut a = random_valid_assignment(syms.iter(), &mut rng);
                a.circle("zp", Complex64::new(sign, 0.0));
                assert!(diff.eval(&a).unwrap().norm() < 1e-12, "m={m} zp={sign}");
            }
            // away from zp = +-1 the difference is genuinely nonzero
            let mut a = random_valid_assignment(syms.iter(), &mut rng);
            a.circle("zp", Complex64::from_polar(1.0, 0.7));
            assert!(diff.eval(&a).unwrap().norm() > 1e-6);
            assert!(syms.contains(&zp) || syms.contains(&zp.conj()));
        }
    }
}

#[test]
fn eq1_is_relation_independent() {
    for m in 2..=5 {
        for rel in [RelationConfig::FULL, RelationConfig::CIRCLE_ONLY] {
            let reports = check_identity(IdentityTag::Eq1, m, rel).unwrap();
            assert!(reports.iter().all(|r| r.status == Status::Pass), "m={m} {rel:?}");
        }
    }
}
