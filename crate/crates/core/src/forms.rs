//! Differential forms on a plane curve, stored as ambient representatives.
//!
//! One-forms are taken modulo `R¹ = ⟨f·dx, f·dy, df⟩` and two-forms
//! `c·dx∧dy` modulo the ideal `(f, f_x, f_y)`. No normal form is kept;
//! every semantic question goes through a membership test.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::coeff_series::{Polynomial2, USeries, Var};
use crate::curve::{Branch, Normalization, PlaneCurve};
use crate::local_algebra::{ideal_membership, GradedBuilder, IdealMembership, MembershipVerdict, Truncation};

/// `a·dx + b·dy` on a curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveOneForm {
    dx: Polynomial2,
    dy: Polynomial2,
    curve: Arc<PlaneCurve>,
}

impl CurveOneForm {
    pub fn new(curve: Arc<PlaneCurve>, dx: Polynomial2, dy: Polynomial2) -> Self {
        Self { dx, dy, curve }
    }

    pub fn zero(curve: Arc<PlaneCurve>) -> Self {
        Self::new(curve, Polynomial2::zero(), Polynomial2::zero())
    }

    pub fn dx(&self) -> &Polynomial2 {
        &self.dx
    }

    pub fn dy(&self) -> &Polynomial2 {
        &self.dy
    }

    pub fn curve(&self) -> &Arc<PlaneCurve> {
        &self.curve
    }

    pub fn same_curve(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.curve, &other.curve) || self.curve == other.curve
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(self.same_curve(other));
        Self::new(self.curve.clone(), self.dx.add(&other.dx), self.dy.add(&other.dy))
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert!(self.same_curve(other));
        Self::new(self.curve.clone(), self.dx.sub(&other.dx), self.dy.sub(&other.dy))
    }

    /// `g·ω`.
    pub fn mul_function(&self, g: &Polynomial2) -> Self {
        Self::new(self.curve.clone(), self.dx.mul(g), self.dy.mul(g))
    }

    /// `ω ∧ η` as the coefficient of `dx∧dy`.
    pub fn wedge(&self, other: &Self) -> CurveTwoForm {
        CurveTwoForm::new(self.curve.clone(), self.dx.mul(&other.dy).sub(&self.dy.mul(&other.dx)))
    }

    /// `a(b(s))·x'(s) + b(b(s))·y'(s)`, mod `s^{N-1}` for a branch of order `N`.
    pub fn pullback(&self, branch: &Branch) -> USeries {
        let a = branch.pullback(&self.dx);
        let b = branch.pullback(&self.dy);
        let n = branch.order().saturating_sub(1);
        a.truncate(n).mul(&branch.x().derive()).add(&b.truncate(n).mul(&branch.y().derive()))
    }
}

impl fmt::Display for CurveOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*dx + ({})*dy", self.dx, self.dy)
    }
}

impl Serialize for CurveOneForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("dx", &self.dx.to_string())?;
        map.serialize_entry("dy", &self.dy.to_string())?;
        map.end()
    }
}

/// `c·dx∧dy` on a curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveTwoForm {
    c: Polynomial2,
    curve: Arc<PlaneCurve>,
}

impl CurveTwoForm {
    pub fn new(curve: Arc<PlaneCurve>, c: Polynomial2) -> Self {
        Self { c, curve }
    }

    pub fn c(&self) -> &Polynomial2 {
        &self.c
    }

    pub fn curve(&self) -> &Arc<PlaneCurve> {
        &self.curve
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.curve.clone(), self.c.add(&other.c))
    }

    /// Membership of `c` in `(f, f_x, f_y)`; `Infeasible` certifies the
    /// form is nonzero on the curve.
    pub fn is_zero(&self, degree_cap: u32) -> IdealMembership {
        ideal_membership(&self.c, &self.curve.jacobian_generators(), degree_cap)
    }
}

pub fn d_function(g: &Polynomial2, curve: &Arc<PlaneCurve>) -> CurveOneForm {
    CurveOneForm::new(curve.clone(), g.partial(Var::X), g.partial(Var::Y))
}

/// `d(a·dx + b·dy) = (b_x − a_y)·dx∧dy`.
pub fn d_oneform(w: &CurveOneForm) -> CurveTwoForm {
    CurveTwoForm::new(w.curve.clone(), w.dy.partial(Var::X).sub(&w.dx.partial(Var::Y)))
}

/// `dω ≡ 0` on the curve; multipliers are for `(f, f_x, f_y)`.
pub fn is_closed(w: &CurveOneForm, degree_cap: u32) -> IdealMembership {
    d_oneform(w).is_zero(degree_cap)
}

/// Membership of `ω` in `R¹` modulo degree `> D + deg f`; `Infeasible`
/// certifies `ω ≠ 0` in the module of forms of the curve.
pub fn is_zero_oneform(w: &CurveOneForm, degree_cap: u32) -> MembershipVerdict {
    let top = degree_cap + w.curve.f().degree().unwrap_or(0);
    let mut b = GradedBuilder::new(&["dx", "dy"], top);
    b.push_relations(0, &w.curve);
    let (system, _) = b.build(&[w.dx.clone(), w.dy.clone()]);
    MembershipVerdict::decide(system, Truncation::Degree(top))
}

/// Branchwise vanishing of a pullback.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionCheck {
    pub torsion: bool,
    /// Pullbacks are compared mod `s^order_checked`.
    pub order_checked: usize,
    /// Per-branch order of the pullback, `None` when it vanishes.
    pub valuations: Vec<Option<usize>>,
}

/// Whether `ω` pulls back to zero on every branch of `nz`.
///
/// This decides torsion only if `nz` lists every branch of the curve.
pub fn is_torsion(w: &CurveOneForm, nz: &Normalization) -> TorsionCheck {
    let valuations: Vec<Option<usize>> = nz.branches().iter().map(|b| w.pullback(b).valuation()).collect();
    TorsionCheck {
        torsion: valuations.iter().all(Option::is_none),
        order_checked: nz.order().saturating_sub(1),
        valuations,
    }
}
