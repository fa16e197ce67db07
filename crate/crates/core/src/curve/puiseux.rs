//! Newton–Puiseux branch computation for curves whose characteristic
//! roots all lie in `Q(i)`.
//!
//! Each edge of the Newton polygon with weights `(α, β)` yields branches
//! `x = u·s^α`, `y = s^β·(v + z(s))`. Simple roots are lifted by solving
//! for `z` coefficient by coefficient; multiple roots recurse on the
//! transformed polynomial in `(s, z)`.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::roots::{ext_gcd, gaussian_rational_roots, UPoly};
use super::{verify_branch, Branch, Normalization, PlaneCurve, ResidualOrder};
use crate::coeff_series::{GaussianRational as Q, Monomial, Polynomial2, USeries};
use crate::error::CurveError;

/// All branches of `curve` at the origin, to order `order`.
///
/// The caller asserts `f` is square-free; otherwise some branches may be
/// missing but every returned branch is still verified.
pub fn newton_puiseux(curve: Arc<PlaneCurve>, order: usize) -> Result<Normalization, CurveError> {
    let raw = branches_of(curve.f(), order, true, 0)?;
    let mut branches = Vec::with_capacity(raw.len());
    for (j, (x, y)) in raw.into_iter().enumerate() {
        let b = Branch::new(x, y)?;
        if let ResidualOrder::Finite(r) = verify_branch(&curve, &b) {
            return Err(CurveError::NotOnCurve { branch: j, residual: r, order });
        }
        branches.push(b);
    }
    Normalization::new(curve, branches)
}

fn divide_out(g: &Polynomial2, dx: u32, dy: u32) -> Polynomial2 {
    Polynomial2::from_terms(g.terms().map(|(m, c)| (Monomial::new(m.x - dx, m.y - dy), c.clone())))
}

struct Edge {
    start: (u32, u32),
    end: (u32, u32),
}

/// Lower convex hull from the pure `y` power to the pure `x` power.
fn newton_polygon(g: &Polynomial2) -> Vec<Edge> {
    let points: Vec<(u32, u32)> = g.terms().map(|(m, _)| (m.x, m.y)).collect();
    let j0 = points.iter().filter(|p| p.0 == 0).map(|p| p.1).min().expect("pure y term");
    let mut current = (0u32, j0);
    let mut edges = Vec::new();
    while current.1 > 0 {
        let mut best: Option<(u32, u32)> = None;
        for &p in &points {
            if p.0 <= current.0 || p.1 >= current.1 {
                continue;
            }
            best = match best {
                None => Some(p),
                Some(b) => {
                    // slope(p) < slope(b)  <=>  (cj - pj)/(pi - ci) > (cj - bj)/(bi - ci)
                    let lhs = (current.1 - p.1) as i64 * (b.0 - current.0) as i64;
                    let rhs = (current.1 - b.1) as i64 * (p.0 - current.0) as i64;
                    if lhs > rhs || (lhs == rhs && p.0 > b.0) {
                        Some(p)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        let next = best.expect("hull reaches the x axis");
        edges.push(Edge { start: current, end: next });
        current = next;
    }
    edges
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

type Parametrization = (USeries, USeries);

/// Branches of `g(x, y) = 0` through the origin along which `x` is not
/// identically zero, unless `allow_x_axis` also admits the `y` axis.
fn branches_of(g: &Polynomial2, order: usize, allow_x_axis: bool, depth: usize) -> Result<Vec<Parametrization>, CurveError> {
    let mut out = Vec::new();
    let mut g = g.clone();

    let ymin = g.terms().map(|(m, _)| m.y).min().unwrap_or(0);
    if ymin > 0 {
        out.push((USeries::var(order), USeries::zero(order)));
        g = divide_out(&g, 0, ymin);
    }
    let xmin = g.terms().map(|(m, _)| m.x).min().unwrap_or(0);
    if xmin > 0 {
        if allow_x_axis {
            out.push((USeries::zero(order), USeries::var(order)));
        }
        g = divide_out(&g, xmin, 0);
    }
    if !g.constant_term().is_zero() {
        return Ok(out);
    }

    for edge in newton_polygon(&g) {
        let (i1, j1) = edge.start;
        let (i2, j2) = edge.end;
        let (di, dj) = (i2 - i1, j1 - j2);
        let h = gcd(di, dj);
        // x has weight alpha, y has weight beta; alpha*i + beta*j is constant on the edge.
        let (alpha, beta) = (dj / h, di / h);
        let c = alpha * i1 + beta * j1;
        let mut phi = vec![Q::zero(); (dj / alpha) as usize + 1];
        for (m, a) in g.terms() {
            if alpha * m.x + beta * m.y == c {
                phi[((m.y - j2) / alpha) as usize] = a.clone();
            }
        }
        let phi = UPoly(phi);
        let split = gaussian_rational_roots(&phi);
        if split.unsplit_degree > 0 {
            let found: usize = split.roots.iter().map(|r| r.1).sum();
            return Err(CurveError::IrrationalLeadingCoefficient {
                edge: format!(
                    "edge ({i1},{j1})-({i2},{j2}) at depth {depth}: characteristic polynomial {phi} has {found} of {} roots in Q(i)",
                    phi.degree()
                ),
            });
        }
        let (_, p, q) = ext_gcd(alpha as i64, beta as i64);
        // alpha*p + beta*q = 1: v = w^p, u = w^(-q) gives v^alpha / u^beta = w.
        for (w, mult) in split.roots {
            let u = w.powi(-q).expect("characteristic roots are nonzero");
            let v = w.powi(p).expect("characteristic roots are nonzero");
            let px = Polynomial2::monomial(alpha, 0, u.clone());
            let py = Polynomial2::monomial(beta, 0, v.clone()).add(&Polynomial2::monomial(beta, 1, Q::one()));
            let g2 = divide_out(&g.compose(&px, &py), c, 0);
            let x_of = |s: &USeries| s.pow(alpha).scale(&u);
            let y_of = |s: &USeries, z: &USeries| s.pow(beta).mul(&USeries::constant(v.clone(), s.order()).add(z));
            if mult == 1 {
                let z = lift_simple_root(&g2, order);
                let s = USeries::var(order);
                out.push((x_of(&s), y_of(&s, &z)));
            } else {
                for (s, z) in branches_of(&g2, order, false, depth + 1)? {
                    out.push((x_of(&s), y_of(&s, &z)));
                }
            }
        }
    }
    Ok(out)
}

/// Solves `g(s, z(s)) = 0` with `z(0) = 0` when `∂g/∂z(0,0) ≠ 0`.
fn lift_simple_root(g: &Polynomial2, order: usize) -> USeries {
    let gz = g.coeff(&Monomial::new(0, 1));
    let gz_inv = gz.inv().expect("simple root has nonzero z-derivative");
    let mut z = USeries::zero(order);
    for n in 1..order {
        let s = USeries::var(n + 1);
        let r = g.eval_on_branch(&s, &z.truncate(n + 1));
        let c = -(&r.coeff(n) * &gz_inv);
        let mut coeffs = z.coeffs().to_vec();
        coeffs[n] = c;
        z = USeries::new(coeffs);
    }
    z
}
