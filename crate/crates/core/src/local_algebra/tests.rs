use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::curve::{expand_paper_psi, Branch, Normalization, PlaneCurve};
use crate::curve::paper_curve_polynomial;

fn q(n: i64) -> Q {
    Q::from_int(n)
}

fn mono(a: u32, b: u32, c: i64) -> Polynomial2 {
    Polynomial2::monomial(a, b, q(c))
}

fn paper() -> Arc<PlaneCurve> {
    Arc::new(PlaneCurve::new(paper_curve_polynomial()).unwrap())
}

fn paper_nz(n: usize) -> Normalization {
    Normalization::new(paper(), vec![expand_paper_psi(n)]).unwrap()
}

/// Rank over Q of a dense integer-or-rational matrix, by plain Gaussian
/// elimination (real parts only; the oracle is used on real systems).
fn rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = &m[i][c] / &m[r][c];
                for k in c..cols {
                    let v = &m[i][k] - &(&factor * &m[r][k]);
                    m[i][k] = v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Oracle for "target = Σ h_i g_i exactly with deg h_i ≤ D": compares every
/// monomial of degree ≤ D + max deg g_i through rank([G]) = rank([G | t]).
fn brute_force_member(target: &Polynomial2, gens: &[Polynomial2], d: u32) -> bool {
    let top = d + gens.iter().filter_map(Polynomial2::degree).max().unwrap_or(0);
    let rows = Monomial::all_in_degrees(0, top);
    let real = |c: Q| -> BigRational {
        assert!(c.is_real());
        c.re().clone()
    };
    let mut cols: Vec<Vec<BigRational>> = Vec::new();
    for g in gens {
        for m in Monomial::all_in_degrees(0, d) {
            let p = g.mul(&Polynomial2::term(m, Q::one()));
            cols.push(rows.iter().map(|r| real(p.coeff(r))).collect());
        }
    }
    let t: Vec<BigRational> = rows.iter().map(|r| real(target.coeff(r))).collect();
    let mat = |with_t: bool| -> Vec<Vec<BigRational>> {
        (0..rows.len())
            .map(|i| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
                if with_t {
                    row.push(t[i].clone());
                }
                row
            })
            .collect()
    };
    rank(mat(false)) == rank(mat(true))
}

#[test]
fn minus_f_is_a_multiple_of_f() {
    let f = paper_curve_polynomial();
    for d in 0..4 {
        let r = ideal_membership(&f.neg(), std::slice::from_ref(&f), d);
        assert!(r.verdict.verify());
        assert_eq!(r.multipliers.unwrap(), vec![Polynomial2::constant(q(-1))]);
    }
}

#[test]
fn one_is_not_in_the_maximal_ideal() {
    let r = ideal_membership(&Polynomial2::one(), &[Polynomial2::x(), Polynomial2::y()], 3);
    assert_eq!(r.verdict.status(), Feasibility::Infeasible);
    assert!(r.verdict.verify());
    assert_eq!(r.verdict.witness_entries(), vec![("1", &q(1))]);
}

#[test]
fn x_squared_is_not_in_the_jacobian_ideal() {
    let c = paper();
    let gens = c.jacobian_generators();
    let target = mono(2, 0, 1);
    assert!(!brute_force_member(&target, &gens, 4));
    let r = ideal_membership(&target, &gens, 4);
    assert_eq!(r.verdict.status(), Feasibility::Infeasible);
    assert!(r.verdict.verify());
}

#[test]
fn t4_is_minus_x_minus_y() {
    let nz = paper_nz(40);
    let t4 = USeries::monomial(4, q(1), 40);
    let v = subalgebra_membership(&[t4], &nz, 40).unwrap();
    assert!(v.is_strong() && v.verdict.verify());
    assert_eq!(v.g.unwrap(), mono(1, 0, -1).add(&mono(0, 1, -1)));
}

#[test]
fn t_is_certified_not_strong_at_every_order() {
    for n in [10, 20, 40] {
        let nz = paper_nz(n);
        let v = subalgebra_membership(&[USeries::var(n)], &nz, n).unwrap();
        assert_eq!(v.status, Strength::CertifiedNotStrong, "N = {n}");
        assert!(v.verdict.verify());
        assert!(v.g.is_none());
    }
}

#[test]
fn cusp_coordinate() {
    let f = mono(0, 2, 1).sub(&mono(3, 0, 1));
    let c = Arc::new(PlaneCurve::new(f).unwrap());
    let b = Branch::new(USeries::monomial(2, q(1), 12), USeries::monomial(3, q(1), 12)).unwrap();
    let nz = Normalization::new(c, vec![b]).unwrap();
    let v = subalgebra_membership(&[USeries::monomial(2, q(1), 12)], &nz, 12).unwrap();
    assert_eq!(v.g.unwrap(), Polynomial2::x());
    // s is missing from the semigroup <2, 3>.
    let v = subalgebra_membership(&[USeries::var(12)], &nz, 12).unwrap();
    assert!(!v.is_strong());
}

#[test]
fn subalgebra_checks_shapes() {
    let nz = paper_nz(10);
    assert_eq!(
        subalgebra_membership(&[], &nz, 10).unwrap_err(),
        AlgebraError::TargetCount { expected: 1, found: 0 }
    );
    assert_eq!(
        subalgebra_membership(&[USeries::var(8)], &nz, 10).unwrap_err(),
        AlgebraError::OrderMismatch { expected: 10, found: 8 }
    );
    assert_eq!(
        subalgebra_membership(&[USeries::var(12)], &nz, 12).unwrap_err(),
        AlgebraError::OrderMismatch { expected: 12, found: 10 }
    );
}

#[test]
fn constrained_vector_field_reduces_to_three_equations() {
    let c = paper();
    let r = vector_field_equation_solve(&c, 5, &VfUnknown::paper_constraints());
    assert_eq!(r.verdict.status(), Feasibility::Infeasible);
    assert!(r.verdict.verify());
    assert_eq!(r.reduced.columns, vec!["A:x", "B:y"]);
    let rows: Vec<&str> = r.reduced.rows.iter().map(|r| r.monomial.as_str()).collect();
    assert_eq!(rows, vec!["x^4", "y^5", "x*y^4"]);
    let expect: Vec<Vec<Q>> = [[5, 1, 1], [1, 6, 1], [2, 5, 1]].iter().map(|r| r.iter().map(|&c| q(c)).collect()).collect();
    assert_eq!(r.reduced.augmented(), expect);
    assert_eq!(r.reduced.determinant, Some(q(-1)));
}

#[test]
fn unconstrained_vector_field_first_fails_at_degree_5() {
    let c = paper();
    let r = vector_field_equation_solve(&c, 4, &[]);
    assert!(r.verdict.is_feasible());
    for k in 5..=8 {
        let r = vector_field_equation_solve(&c, k, &[]);
        assert_eq!(r.verdict.status(), Feasibility::Infeasible, "K = {k}");
        assert!(r.verdict.verify());
    }
}

#[test]
fn smooth_curve_vector_field() {
    let c = PlaneCurve::new(Polynomial2::x()).unwrap();
    let r = vector_field_equation_solve(&c, 4, &[]);
    let (a, b) = r.field.expect("feasible");
    // Recombine independently: f − ∂(fA)/∂x − ∂(fB)/∂y has no terms of degree ≤ 4.
    let f = c.f();
    let lhs = f.mul(&a).partial(Var::X).add(&f.mul(&b).partial(Var::Y));
    assert!(f.sub(&lhs).truncate_degree(4).is_zero());
}

fn arb_poly(max_deg: u32, terms: usize) -> impl Strategy<Value = Polynomial2> {
    prop::collection::vec(((0..=max_deg), (0..=max_deg), -3i64..=3), 0..terms).prop_map(move |ts| {
        Polynomial2::from_terms(
            ts.into_iter().filter(|(a, b, _)| a + b <= max_deg).map(|(a, b, c)| (Monomial::new(a, b), q(c))),
        )
    })
}

fn arb_generator() -> impl Strategy<Value = Polynomial2> {
    arb_poly(3, 4).prop_filter("no constant term", |p| p.constant_term().is_zero() && !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ideal_verdicts_certify_and_recombine(
        target in arb_poly(4, 5),
        gens in prop::collection::vec(arb_generator(), 1..3),
        d in 0u32..3,
    ) {
        let r = ideal_membership(&target, &gens, d);
        prop_assert!(r.verdict.verify());
        if let (Some(hs), Truncation::Degree(top)) = (&r.multipliers, r.verdict.truncation()) {
            let combo = hs.iter().zip(&gens).fold(Polynomial2::zero(), |acc, (h, g)| acc.add(&h.mul(g)));
            prop_assert!(combo.sub(&target).truncate_degree(top).is_zero());
        }
    }

    #[test]
    fn ideal_infeasibility_is_monotone(
        target in arb_poly(3, 4),
        gens in prop::collection::vec(arb_generator(), 1..3),
        d in 0u32..3,
    ) {
        if !ideal_membership(&target, &gens, d).verdict.is_feasible() {
            prop_assert!(!ideal_membership(&target, &gens, d + 1).verdict.is_feasible());
        }
    }

    #[test]
    fn ideal_membership_of_products(h in arb_poly(2, 3), gens in prop::collection::vec(arb_generator(), 1..3), d in 0u32..3) {
        // h·g_0 is always a member.
        let target = h.mul(&gens[0]);
        let r = ideal_membership(&target, &gens, d);
        prop_assert!(r.verdict.is_feasible());
    }

    #[test]
    fn subalgebra_negative_verdicts_are_monotone(k in 1usize..12, c in -3i64..=3) {
        // s^k (+ c s^(k+1)) on the quintic branch: raising N never turns a
        // certified negative into a positive.
        let target = |n: usize| USeries::from_terms([(k, q(1)), (k + 1, q(c))], n);
        let small = subalgebra_membership(&[target(14)], &paper_nz(14), 14).unwrap();
        let large = subalgebra_membership(&[target(20)], &paper_nz(20), 20).unwrap();
        prop_assert!(small.verdict.verify() && large.verdict.verify());
        if !small.is_strong() {
            prop_assert!(!large.is_strong());
        }
    }
}

#[test]
fn big_rational_oracle_sanity() {
    let one = BigRational::from_integer(BigInt::one());
    assert_eq!(rank(vec![vec![one.clone(), one.clone()], vec![one.clone(), one]]), 1);
}
