//! Seeded random flat connections on unions of lines, and the suites that
//! classify them.
//!
//! Rank-one flat connections are generated as `A = dg + (∫c dx)·dy` with
//! `c = p·f + q·f_x + r·f_y`, so that `dA = c·dx∧dy` lies in `(f, f_x, f_y)`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeff_series::{GaussianRational as Q, Monomial, Polynomial2, Var};
use crate::connection::{classify, Connection, Status};
use crate::curve::{make_line_union, Normalization, PlaneCurve};
use crate::error::ConnectionError;
use crate::forms::{d_function, CurveOneForm};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Coefficients in `-3..=3` on monomials of degree `lo..=hi`, about half
/// of them zero.
pub fn random_polynomial(rng: &mut impl Rng, lo: u32, hi: u32) -> Polynomial2 {
    if lo > hi {
        return Polynomial2::zero();
    }
    Polynomial2::from_terms(Monomial::all_in_degrees(lo, hi).into_iter().filter_map(|m| {
        let c: i64 = rng.gen_range(-3..=3);
        (c != 0 && rng.gen_bool(0.5)).then(|| (m, Q::from_int(c)))
    }))
}

/// `∫ p dx` with zero constant of integration in `x`.
fn integrate_x(p: &Polynomial2) -> Polynomial2 {
    Polynomial2::from_terms(
        p.terms().map(|(m, c)| (Monomial::new(m.x + 1, m.y), c * &Q::from_int(m.x as i64 + 1).inv().expect("nonzero"))),
    )
}

/// A flat rank-one connection form with coefficients of degree `≤ max_degree`.
pub fn random_flat_form(rng: &mut impl Rng, curve: &Arc<PlaneCurve>, max_degree: u32) -> CurveOneForm {
    let g = random_polynomial(rng, 1, max_degree + 1);
    let n = curve.f().degree().unwrap_or(0);
    // deg ∫c dx = deg c + 1 ≤ max_degree.
    let budget = max_degree as i64 - 1;
    let multiplier = |rng: &mut _, factor_degree: u32| {
        let top = budget - factor_degree as i64;
        if top < 0 {
            Polynomial2::zero()
        } else {
            random_polynomial(rng, 0, top as u32)
        }
    };
    let p = multiplier(rng, n);
    let q = multiplier(rng, n - 1);
    let r = multiplier(rng, n - 1);
    let c = p.mul(curve.f()).add(&q.mul(curve.fx())).add(&r.mul(curve.fy()));
    let extra = CurveOneForm::new(curve.clone(), Polynomial2::zero(), integrate_x(&c));
    d_function(&g, curve).add(&extra)
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteCase {
    pub index: usize,
    pub description: String,
    pub rank: usize,
    pub status: Option<Status>,
    pub error: Option<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub seed: u64,
    pub order: usize,
    pub degree_cap: u32,
    pub cases: Vec<SuiteCase>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.passed).count()
    }

    pub fn total(&self) -> usize {
        self.cases.len()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.total()
    }
}

fn run_case(index: usize, description: String, conn: &Connection, nz: &Normalization, order: usize, cap: u32) -> SuiteCase {
    let outcome: Result<Status, ConnectionError> = classify(conn, nz, order, cap).map(|c| c.status);
    SuiteCase {
        index,
        description,
        rank: conn.rank(),
        passed: matches!(outcome, Ok(Status::StrongFrame)),
        status: outcome.as_ref().ok().copied(),
        error: outcome.err().map(|e| e.to_string()),
    }
}

/// Flat connections on the node `xy = 0`: every third case is `d + dg·Id`
/// in rank 2, the rest are rank one of degree `≤ 3`.
pub fn node_suite(seed: u64, cases: usize, order: usize, cap: u32) -> SuiteReport {
    let mut rng = rng(seed);
    let (curve, nz) = make_line_union(&[(Q::from_int(1), Q::from_int(0)), (Q::from_int(0), Q::from_int(1))], order)
        .expect("node");
    let cases = (0..cases)
        .map(|i| {
            let (conn, description) = if i % 3 == 2 {
                let g = random_polynomial(&mut rng, 1, 4);
                let description = format!("d + d({g})·Id");
                (Connection::scalar(d_function(&g, &curve), 2), description)
            } else {
                let w = random_flat_form(&mut rng, &curve, 3);
                let description = format!("d + {w}");
                (Connection::rank_one(w), description)
            };
            run_case(i, description, &conn, &nz, order, cap)
        })
        .collect();
    SuiteReport { name: "node", seed, order, degree_cap: cap, cases }
}

/// Random flat rank-one connections on unions of 2, 3 and 4 distinct lines
/// through the origin with small integer directions.
pub fn line_union_suite(seed: u64, cases: usize, order: usize, cap: u32) -> SuiteReport {
    let mut rng = rng(seed);
    let cases = (0..cases)
        .map(|i| {
            let lines = 2 + i % 3;
            let mut dirs: Vec<(Q, Q)> = Vec::new();
            let mut raw: Vec<(i64, i64)> = Vec::new();
            while dirs.len() < lines {
                let (a, b): (i64, i64) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
                if (a, b) == (0, 0) || raw.iter().any(|&(c, d)| a * d - b * c == 0) {
                    continue;
                }
                raw.push((a, b));
                dirs.push((Q::from_int(a), Q::from_int(b)));
            }
            let (curve, nz) = make_line_union(&dirs, order).expect("distinct directions");
            let degree = curve.f().degree().unwrap_or(0) + 2;
            let w = random_flat_form(&mut rng, &curve, degree);
            let description = format!("lines {raw:?}: d + {w}");
            run_case(i, description, &Connection::rank_one(w), &nz, order, cap)
        })
        .collect();
    SuiteReport { name: "line-union", seed, order, degree_cap: cap, cases }
}

/// Curvature-free by construction: `d(∫c dx · dy) = c·dx∧dy`.
pub fn curvature_density(w: &CurveOneForm) -> Polynomial2 {
    w.dy().partial(Var::X).sub(&w.dx().partial(Var::Y))
}
