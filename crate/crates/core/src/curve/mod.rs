//! Plane curves through the origin and their local branches.
//!
//! A branch is a primitive parametrization `s ↦ (x(s), y(s))` known
//! modulo `s^N`. Branches are either supplied (and machine-verified) or
//! computed by [`newton_puiseux`] when every characteristic root is a
//! Gaussian rational.

mod puiseux;
mod roots;

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::coeff_series::{GaussianRational as Q, Monomial, Polynomial2, USeries, Var};
use crate::error::CurveError;

pub use puiseux::newton_puiseux;

/// The germ at `0` of `{f = 0}`, with cached partial derivatives.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlaneCurve {
    f: Polynomial2,
    fx: Polynomial2,
    fy: Polynomial2,
}

impl PlaneCurve {
    pub fn new(f: Polynomial2) -> Result<Self, CurveError> {
        if f.is_zero() {
            return Err(CurveError::ZeroPolynomial);
        }
        let c = f.constant_term();
        if !c.is_zero() {
            return Err(CurveError::NotThroughOrigin(c.to_string()));
        }
        let fx = f.partial(Var::X);
        let fy = f.partial(Var::Y);
        Ok(Self { f, fx, fy })
    }

    pub fn f(&self) -> &Polynomial2 {
        &self.f
    }

    pub fn fx(&self) -> &Polynomial2 {
        &self.fx
    }

    pub fn fy(&self) -> &Polynomial2 {
        &self.fy
    }

    /// Generators `f, ∂f/∂x, ∂f/∂y` of the ideal two-forms are taken modulo.
    pub fn jacobian_generators(&self) -> Vec<Polynomial2> {
        vec![self.f.clone(), self.fx.clone(), self.fy.clone()]
    }
}

impl fmt::Display for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{} = 0}}", self.f)
    }
}

/// `ord_s f(x(s), y(s))`, or `Infinite` when it vanishes mod `s^N`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ResidualOrder {
    Finite(usize),
    Infinite,
}

impl ResidualOrder {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ResidualOrder::Infinite)
    }
}

impl fmt::Display for ResidualOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidualOrder::Finite(k) => write!(f, "{k}"),
            ResidualOrder::Infinite => write!(f, "infinity"),
        }
    }
}

impl Serialize for ResidualOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ResidualOrder::Finite(k) => s.serialize_u64(*k as u64),
            ResidualOrder::Infinite => s.serialize_str("infinity"),
        }
    }
}

/// A primitive parametrization of a local branch, centered at the origin.
#[derive(Clone, PartialEq, Eq)]
pub struct Branch {
    x: USeries,
    y: USeries,
}

impl Branch {
    /// Validates centering, nontriviality and primitivity. Both
    /// components are truncated to the smaller of their orders.
    pub fn new(x: USeries, y: USeries) -> Result<Self, CurveError> {
        let n = x.order().min(y.order());
        let (x, y) = (x.truncate(n), y.truncate(n));
        if !x.coeff(0).is_zero() || !y.coeff(0).is_zero() {
            return Err(CurveError::NotCentered);
        }
        if x.is_zero() && y.is_zero() {
            return Err(CurveError::ZeroBranch(n));
        }
        let g = x.terms().chain(y.terms()).fold(0u64, |g, (k, _)| g.gcd(&(k as u64)));
        if g != 1 {
            return Err(CurveError::NotPrimitive(g));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &USeries {
        &self.x
    }

    pub fn y(&self) -> &USeries {
        &self.y
    }

    pub fn order(&self) -> usize {
        self.x.order()
    }

    /// `(ord x, ord y)`, with `None` for an identically vanishing component.
    pub fn orders(&self) -> (Option<usize>, Option<usize>) {
        (self.x.valuation(), self.y.valuation())
    }

    pub fn truncate(&self, order: usize) -> Result<Self, CurveError> {
        Self::new(self.x.truncate(order), self.y.truncate(order))
    }

    /// Pullback of a polynomial function.
    pub fn pullback(&self, p: &Polynomial2) -> USeries {
        p.eval_on_branch(&self.x, &self.y)
    }
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Branch(x = {}, y = {})", self.x, self.y)
    }
}

/// Residual order of `f` along a branch.
pub fn verify_branch(curve: &PlaneCurve, branch: &Branch) -> ResidualOrder {
    match curve.f.eval_on_branch(&branch.x, &branch.y).valuation() {
        Some(k) => ResidualOrder::Finite(k),
        None => ResidualOrder::Infinite,
    }
}

/// A finite set of verified, pairwise distinct branches of one curve,
/// all known to the same order.
#[derive(Clone, Debug)]
pub struct Normalization {
    curve: Arc<PlaneCurve>,
    branches: Vec<Branch>,
}

impl Normalization {
    pub fn new(curve: Arc<PlaneCurve>, branches: Vec<Branch>) -> Result<Self, CurveError> {
        let Some(first) = branches.first() else {
            return Err(CurveError::NoBranches);
        };
        let n = first.order();
        for (j, b) in branches.iter().enumerate() {
            if b.order() != n {
                return Err(CurveError::OrderMismatch(n, b.order()));
            }
            if let ResidualOrder::Finite(r) = verify_branch(&curve, b) {
                return Err(CurveError::NotOnCurve { branch: j, residual: r, order: n });
            }
        }
        for i in 0..branches.len() {
            for j in i + 1..branches.len() {
                if branches[i] == branches[j] {
                    return Err(CurveError::DuplicateBranch(i, j));
                }
            }
        }
        Ok(Self { curve, branches })
    }

    pub fn curve(&self) -> &Arc<PlaneCurve> {
        &self.curve
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn order(&self) -> usize {
        self.branches[0].order()
    }

    /// The same branches truncated to a lower order.
    pub fn truncate(&self, order: usize) -> Result<Self, CurveError> {
        let branches = self.branches.iter().map(|b| b.truncate(order)).collect::<Result<Vec<_>, _>>()?;
        Self::new(self.curve.clone(), branches)
    }
}

/// `x^4 + x·y^4 + y^5`.
pub fn paper_curve_polynomial() -> Polynomial2 {
    Polynomial2::from_terms([
        (Monomial::new(4, 0), Q::one()),
        (Monomial::new(1, 4), Q::one()),
        (Monomial::new(0, 5), Q::one()),
    ])
}

/// Closed-form expansion of `t ↦ (−t⁵/(1+t), −t⁴/(1+t))` modulo `t^order`.
///
/// Panics if `order < 6` (the `x` component would not be visible).
pub fn expand_paper_psi(order: usize) -> Branch {
    assert!(order >= 6, "the closed-form desingularization needs order >= 6");
    let geometric = |shift: usize| {
        USeries::from_fn(order, |k| {
            if k < shift {
                Q::zero()
            } else if (k - shift) % 2 == 0 {
                -Q::one()
            } else {
                Q::one()
            }
        })
    };
    Branch::new(geometric(5), geometric(4)).expect("closed-form branch is primitive")
}

/// The union of lines `{b_j·x − a_j·y = 0}` with branches `(a_j·s, b_j·s)`.
///
/// The defining product is rescaled to be monic in the highest monomial.
pub fn make_line_union(directions: &[(Q, Q)], order: usize) -> Result<(Arc<PlaneCurve>, Normalization), CurveError> {
    if directions.is_empty() {
        return Err(CurveError::NoBranches);
    }
    for (i, (a, b)) in directions.iter().enumerate() {
        if a.is_zero() && b.is_zero() {
            return Err(CurveError::ZeroDirection(i));
        }
        for (j, (c, d)) in directions.iter().enumerate().skip(i + 1) {
            if (a * d - b * c).is_zero() {
                return Err(CurveError::DuplicateDirection(i, j));
            }
        }
    }
    let f = directions.iter().fold(Polynomial2::one(), |acc, (a, b)| {
        acc.mul(&Polynomial2::x().scale(b).sub(&Polynomial2::y().scale(a)))
    });
    // Normalized so the term with the highest power of x has coefficient 1.
    let lead = f.terms().last().map(|(_, c)| c.clone()).expect("nonempty product");
    let f = f.scale(&lead.inv().expect("nonzero"));
    let curve = Arc::new(PlaneCurve::new(f)?);
    let branches = directions
        .iter()
        .map(|(a, b)| Branch::new(USeries::monomial(1, a.clone(), order), USeries::monomial(1, b.clone(), order)))
        .collect::<Result<Vec<_>, _>>()?;
    let nz = Normalization::new(curve.clone(), branches)?;
    Ok((curve, nz))
}
