//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Every comparison is exact; there are no floating-point tolerances.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use rh_core::connection::{classify, solve_frame_on_branch, Connection, Status};
use rh_core::curve::{expand_paper_psi, make_line_union, verify_branch, Branch, Normalization, PlaneCurve};
use rh_core::forms::{d_function, d_oneform, is_closed, CurveOneForm};
use rh_core::local_algebra::{
    exactness_solve, ideal_membership, subalgebra_membership, vector_field_equation_solve, Feasibility, Strength,
    VfUnknown,
};
use rh_core::paper::{alpha, denominator_identities, g_series, paper_curve};
use rh_core::suites::{line_union_suite, node_suite, random_polynomial, rng};
use rh_core::{GaussianRational as Q, Monomial, Polynomial2, USeries};

const N: usize = 40;
const CAP: u32 = 8;
const SUITE_ORDER: usize = 24;
const SUITE_CASES: usize = 50;
const NODE_SEED: u64 = 0x5eed_0012;
const LINES_SEED: u64 = 0x5eed_0013;
const ORACLE_SEED: u64 = 0x5eed_0014;

type Outcome = Result<String, String>;

fn q(n: i64) -> Q {
    Q::from_int(n)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn paper_setup(n: usize) -> (Arc<PlaneCurve>, Branch, Normalization) {
    let c = paper_curve();
    let psi = expand_paper_psi(n);
    let nz = Normalization::new(c.clone(), vec![psi.clone()]).unwrap();
    (c, psi, nz)
}

/// Truncated products of dense rational coefficient vectors.
fn rmul(a: &[BigRational], b: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().take(n.saturating_sub(i)) {
            out[i + j] += x * y;
        }
    }
    out
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `(1+t)^{-k}` from the binomial series `Σ (−1)^n C(n+k−1, n) t^n`.
fn inv_one_plus_t(k: u32, n: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n);
    let mut c = BigRational::one();
    for m in 0..n {
        out.push(if m % 2 == 0 { c.clone() } else { -c.clone() });
        c = c * rat(m as i64 + k as i64, m as i64 + 1);
    }
    out
}

fn shifted(v: Vec<BigRational>, by: usize, scale: BigRational, n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in v.into_iter().enumerate().take(n.saturating_sub(by)) {
        out[i + by] = c * &scale;
    }
    out
}

fn add(a: Vec<BigRational>, b: Vec<BigRational>) -> Vec<BigRational> {
    a.into_iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `G = ∫ψ*α` written out by hand: with `u = 1/(1+t)`, `x = −t⁵u`,
/// `y = −t⁴u`, the coefficient of `dx` is `−t²⁴u⁵ + t²⁵u⁶/5 + t²⁴u⁶/6` and
/// `x' = −5t⁴u + t⁵u²`.
fn g_oracle(n: usize) -> Vec<BigRational> {
    let a = add(
        add(shifted(inv_one_plus_t(5, n), 24, rat(-1, 1), n), shifted(inv_one_plus_t(6, n), 25, rat(1, 5), n)),
        shifted(inv_one_plus_t(6, n), 24, rat(1, 6), n),
    );
    let dx = add(shifted(inv_one_plus_t(1, n), 4, rat(-5, 1), n), shifted(inv_one_plus_t(2, n), 5, rat(1, 1), n));
    let integrand = rmul(&a, &dx, n);
    let mut g = vec![BigRational::zero(); n];
    for k in 1..n {
        g[k] = &integrand[k - 1] / BigInt::from(k);
    }
    g
}

fn exp_oracle(u: &USeries) -> USeries {
    let n = u.order();
    let mut out = USeries::zero(n);
    let mut power = USeries::one(n);
    let mut fact = q(1);
    for k in 0..n {
        out = out.add(&power.scale(&fact.inv().unwrap()));
        power = power.mul(u);
        fact = &fact * &q(k as i64 + 1);
    }
    out
}

fn crit1() -> Outcome {
    let (c, psi, _) = paper_setup(N);
    let r = verify_branch(&c, &psi);
    let direct = psi.pullback(c.f());
    ensure(r.is_infinite() && direct.is_zero(), format!("residual order {r}"))?;
    Ok(format!("f(psi) = 0 mod t^{N}, residual order {r}"))
}

fn crit2() -> Outcome {
    let (_, psi, _) = paper_setup(N);
    let h = psi.pullback(&Polynomial2::x().add(&Polynomial2::y()).neg());
    ensure(h == USeries::monomial(4, q(1), N), format!("got {h}"))?;
    Ok(format!("-(x+y)(psi) = t^4 mod t^{N}"))
}

fn crit3() -> Outcome {
    let (_, psi, _) = paper_setup(N);
    let ids = denominator_identities();
    ensure(ids.len() == 12, format!("{} identities", ids.len()))?;
    for id in &ids {
        // t = x/y along ψ: t^i·m = rhs  ⇔  m·x^i = rhs·y^i.
        let m = psi.pullback(&Polynomial2::term(id.monomial, q(1)));
        let lhs = m.mul(&psi.x().pow(id.power));
        let rhs = psi.pullback(&id.rhs).mul(&psi.y().pow(id.power));
        ensure(lhs == rhs && id.residual(&psi).is_zero(), format!("{} fails", id.label()))?;
    }
    Ok(format!("12 identities exact mod t^{N}"))
}

fn crit4() -> Outcome {
    let vf = vector_field_equation_solve(&paper_curve(), 5, &VfUnknown::paper_constraints());
    let expect: Vec<Vec<Q>> = [[5, 1, 1], [1, 6, 1], [2, 5, 1]].iter().map(|r| r.iter().map(|&c| q(c)).collect()).collect();
    let aug = vf.reduced.augmented();
    ensure(aug == expect, format!("augmented system {aug:?}"))?;
    // Cofactor expansion by hand.
    let m = &expect;
    let det = &(&(&m[0][0] * &(&(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1])))
        - &(&m[0][1] * &(&(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]))))
        + &(&m[0][2] * &(&(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0])));
    ensure(det == q(-1) && vf.reduced.determinant == Some(q(-1)), format!("determinant {det}"))?;
    ensure(vf.verdict.status() == Feasibility::Infeasible && vf.verdict.verify(), "verdict not a verified Infeasible")?;
    Ok("augmented [[5,1|1],[1,6|1],[2,5|1]], det -1, Infeasible (verified)".into())
}

fn crit5() -> Outcome {
    let c = paper_curve();
    let statuses: Vec<Feasibility> = (1..=8).map(|k| vector_field_equation_solve(&c, k, &[]).verdict.status()).collect();
    let first = statuses.iter().position(|s| *s == Feasibility::Infeasible).map(|i| i as u32 + 1);
    let Some(k) = first else { return Err("feasible for every K <= 8".into()) };
    ensure(statuses[k as usize - 1..].iter().all(|s| *s == Feasibility::Infeasible), "not monotone in K")?;
    let v = vector_field_equation_solve(&c, k, &[]).verdict;
    ensure(v.verify(), "witness does not verify")?;
    Ok(format!("first Infeasible at K = {k}, Infeasible for every K in {k}..=8"))
}

fn crit6() -> Outcome {
    let c = paper_curve();
    let a = alpha(&c);
    for d in 1..=6 {
        let v = exactness_solve(&a, d).verdict;
        ensure(v.status() == Feasibility::Infeasible && v.verify(), format!("D = {d}: {:?}", v.status()))?;
    }
    Ok("alpha not exact, verified certificates for D = 1..=6".into())
}

fn crit7() -> Outcome {
    let c = paper_curve();
    let a = alpha(&c);
    let closed = is_closed(&a, CAP);
    ensure(closed.verdict.is_feasible() && closed.verdict.verify(), "not closed")?;
    let coefficient = d_oneform(&a).c().clone();
    ensure(coefficient.add(c.f()).is_zero(), "d(alpha) != -f dx^dy")?;
    let r = ideal_membership(&coefficient, std::slice::from_ref(c.f()), CAP);
    let h = r.multipliers.map(|m| m[0].clone());
    ensure(h == Some(Polynomial2::constant(q(-1))), format!("h = {h:?}"))?;
    Ok("closed, h = -1 against generator f".into())
}

fn crit8() -> Outcome {
    let (c, psi, _) = paper_setup(N);
    let g = g_series(&psi, &c);
    let oracle = g_oracle(N);
    for k in 0..N {
        let got = g.coeff(k);
        ensure(got.is_real() && *got.re() == oracle[k], format!("t^{k}: {got} vs oracle {}", oracle[k]))?;
    }
    ensure((1..=24).all(|k| g.coeff(k).is_zero()), "nonzero coefficient in t^1..t^24")?;
    let first = oracle.iter().position(|c| !c.is_zero()).ok_or("G vanishes mod t^40")?;
    ensure(g.valuation() == Some(first), "valuation disagrees with oracle")?;
    ensure(oracle[first].is_positive(), "unexpected sign")?;
    Ok(format!("t^1..t^24 vanish; first nonzero exponent {first}, coefficient {}", g.coeff(first)))
}

fn crit9() -> Outcome {
    let (c, psi, nz) = paper_setup(N);
    let g = g_series(&psi, &c);
    let v = subalgebra_membership(std::slice::from_ref(&g), &nz, N).map_err(|e| e.to_string())?;
    ensure(v.status == Strength::StrongUpToOrder && v.verdict.verify(), format!("{:?}", v.status))?;
    let p = v.g.ok_or("no polynomial")?;
    ensure(psi.pullback(&p) == g, "g(psi) != G")?;
    Ok(format!("StrongUpToOrder at N = {N}, G = g(psi) with {} terms in g", p.terms().count()))
}

fn crit10() -> Outcome {
    let (c, psi, nz) = paper_setup(N);
    let conn = Connection::rank_one(alpha(&c));
    let cl = classify(&conn, &nz, N, CAP).map_err(|e| e.to_string())?;
    ensure(cl.status == Status::NonTame, format!("status {:?}", cl.status))?;
    let w = cl.witness.ok_or("no witness")?;
    ensure(w.reverify(&conn, &nz), "witness does not re-verify")?;
    // Independent pullback of ω = a dx + b dy: a(ψ)·x' + b(ψ)·y'.
    let omega = alpha(&c).sub(&d_function(&w.h, &c));
    ensure(omega == w.torsion_form, "torsion form is not alpha - dH")?;
    let n1 = N - 1;
    let pulled = psi
        .pullback(omega.dx())
        .truncate(n1)
        .mul(&psi.x().derive())
        .add(&psi.pullback(omega.dy()).truncate(n1).mul(&psi.y().derive()));
    ensure(pulled.is_zero() && pulled.order() == n1, "pullback of alpha - dH is nonzero mod t^39")?;
    ensure(w.is_torsion.torsion && w.is_torsion.order_checked == n1, "torsion check")?;
    ensure(w.is_zero.status() == Feasibility::Infeasible && w.is_zero.verify(), "is_zero not a verified Infeasible")?;
    Ok(format!("NonTame; alpha - dH vanishes mod t^{n1}, nonzero at cap {CAP} (witness verified)"))
}

fn crit11() -> Outcome {
    let c = paper_curve();
    let conn = Connection::rank_one(alpha(&c));
    for d in 1..=6 {
        let p = rh_core::connection::parallel_section_at_origin(&conn, d).map_err(|e| e.to_string())?;
        ensure(p.verdict.status() == Feasibility::Infeasible && p.verdict.verify(), format!("D = {d}"))?;
    }
    Ok("no unit parallel section, verified for D = 1..=6".into())
}

fn suite_line(r: &rh_core::suites::SuiteReport) -> Outcome {
    let fails: Vec<String> =
        r.cases.iter().filter(|c| !c.passed).map(|c| format!("#{} {:?} {:?}: {}", c.index, c.status, c.error, c.description)).collect();
    ensure(r.total() == SUITE_CASES && fails.is_empty(), fails.join("; "))?;
    Ok(format!("{}/{} StrongFrame at N = {}, seed {:#x}", r.passed(), r.total(), r.order, r.seed))
}

fn crit12() -> Outcome {
    let r = node_suite(NODE_SEED, SUITE_CASES, SUITE_ORDER, CAP);
    ensure(r.cases.iter().any(|c| c.rank == 2), "no rank-2 case")?;
    suite_line(&r)
}

fn crit13() -> Outcome {
    suite_line(&line_union_suite(LINES_SEED, SUITE_CASES, SUITE_ORDER, CAP))
}

fn oracle_branches(n: usize) -> Vec<(Arc<PlaneCurve>, Branch)> {
    let cusp = Arc::new(PlaneCurve::new(Polynomial2::monomial(0, 2, q(1)).sub(&Polynomial2::monomial(3, 0, q(1)))).unwrap());
    let (node, nz) = make_line_union(&[(q(1), q(0)), (q(0), q(1))], n).unwrap();
    let (lines, lz) = make_line_union(&[(q(1), q(2)), (q(1), q(-1)), (q(0), q(1))], n).unwrap();
    vec![
        (paper_curve(), expand_paper_psi(n)),
        (cusp, Branch::new(USeries::monomial(2, q(1), n), USeries::monomial(3, q(1), n)).unwrap()),
        (node, nz.branches()[1].clone()),
        (lines, lz.branches()[0].clone()),
    ]
}

fn random_invertible(rng: &mut impl Rng) -> Vec<Vec<Q>> {
    loop {
        let m: Vec<i64> = (0..4).map(|_| rng.gen_range(-3..=3)).collect();
        if m[0] * m[3] - m[1] * m[2] != 0 {
            return vec![vec![q(m[0]), q(m[1])], vec![q(m[2]), q(m[3])]];
        }
    }
}

fn crit14() -> Outcome {
    let n = SUITE_ORDER;
    let mut rng = rng(ORACLE_SEED);
    let branches = oracle_branches(n);
    for case in 0..25 {
        let (curve, b) = &branches[case % branches.len()];
        let g = random_polynomial(&mut rng, 1, 4);
        let conn = Connection::rank_one(d_function(&g, curve));
        let frame = solve_frame_on_branch(&conn, b, &vec![vec![q(1)]], n).map_err(|e| e.to_string())?;
        let gb = b.pullback(&g);
        ensure(frame.s[0][0] == exp_oracle(&gb.scale(&q(-1))), format!("case {case}: frame != exp(-g(b)) for g = {g}"))?;
        // S' + (g∘b)'·S, computed without the library's form pullback.
        let s = &frame.s[0][0];
        let residual = s.derive().add(&gb.derive().mul(&s.truncate(n - 1)));
        ensure(frame.residual_ok && residual.is_zero(), format!("case {case}: ODE residual"))?;

        // Gauge: solving from S0·C gives (solution from S0)·C.
        let h = random_polynomial(&mut rng, 0, 3);
        let k = random_polynomial(&mut rng, 0, 3);
        let w = |p: &Polynomial2| CurveOneForm::new(curve.clone(), p.clone(), Polynomial2::y().mul(p));
        let rank2 = Connection::new(curve.clone(), vec![vec![d_function(&g, curve), w(&h)], vec![w(&k), CurveOneForm::zero(curve.clone())]])
            .map_err(|e| e.to_string())?;
        let s0 = random_invertible(&mut rng);
        let cm = random_invertible(&mut rng);
        let s0c: Vec<Vec<Q>> =
            (0..2).map(|i| (0..2).map(|j| &(&s0[i][0] * &cm[0][j]) + &(&s0[i][1] * &cm[1][j])).collect()).collect();
        let plain = solve_frame_on_branch(&rank2, b, &s0, n).map_err(|e| e.to_string())?;
        let moved = solve_frame_on_branch(&rank2, b, &s0c, n).map_err(|e| e.to_string())?;
        for i in 0..2 {
            for j in 0..2 {
                let expect = plain.s[i][0].scale(&cm[0][j]).add(&plain.s[i][1].scale(&cm[1][j]));
                ensure(moved.s[i][j] == expect, format!("case {case}: gauge equivariance at ({i},{j})"))?;
            }
        }
        ensure(plain.residual_ok && moved.residual_ok, format!("case {case}: rank-2 residual"))?;
    }
    Ok(format!("25 cases exact at N = {n}, seed {ORACLE_SEED:#x}"))
}

/// Checks a witness semantically: it pairs to zero with the pullback of
/// every monomial of degree `≤ n` and to one with `t`.
fn witness_kills_monomials(v: &rh_core::local_algebra::MembershipVerdict, psi: &Branch, n: usize) -> bool {
    let Some(y) = v.witness() else { return false };
    let rows = v.system().row_labels();
    let pair = |s: &USeries| -> Q {
        rows.iter().zip(y).fold(q(0), |acc, (label, c)| {
            let k: usize = label.strip_prefix("b0:s^").and_then(|e| e.parse().ok()).expect("row label b0:s^k");
            &acc + &(c * &s.coeff(k))
        })
    };
    let kills = Monomial::all_in_degrees(0, n as u32).into_iter().all(|m| pair(&psi.pullback(&Polynomial2::term(m, q(1)))).is_zero());
    kills && pair(&USeries::var(n)) == q(1)
}

fn crit15() -> Outcome {
    for n in [10, 20, 40] {
        let (_, psi, nz) = paper_setup(n);
        let v = subalgebra_membership(&[USeries::var(n)], &nz, n).map_err(|e| e.to_string())?;
        ensure(v.status == Strength::CertifiedNotStrong, format!("N = {n}: {:?}", v.status))?;
        ensure(v.verdict.verify() && witness_kills_monomials(&v.verdict, &psi, n), format!("N = {n}: witness"))?;
    }
    Ok("t CertifiedNotStrong at N = 10, 20, 40 (witnesses checked against every monomial)".into())
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 15] = [
        (1, "branch lies on the curve", crit1),
        (2, "universal denominator t^4", crit2),
        (3, "denominator identities", crit3),
        (4, "constrained vector field system", crit4),
        (5, "unconstrained vector field equation", crit5),
        (6, "alpha is not exact", crit6),
        (7, "alpha is closed", crit7),
        (8, "support of G", crit8),
        (9, "G is strongly holomorphic", crit9),
        (10, "d + alpha is non-tame", crit10),
        (11, "no parallel unit section", crit11),
        (12, "node suite", crit12),
        (13, "line-union suite", crit13),
        (14, "exponential oracle and gauge", crit14),
        (15, "negative certificate stability", crit15),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} [exact, {secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {detail} [exact, {secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 15 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
