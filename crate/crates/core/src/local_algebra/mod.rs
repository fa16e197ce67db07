//! Truncated membership problems decided by exact linear algebra.
//!
//! Degree caps follow one rule: a problem at cap `D` compares all
//! monomials of total degree `≤ T` (operation-specific `T ≥ D`) and
//! contains every unknown that can reach degree `T`. An `Infeasible`
//! verdict is therefore a certificate in the local analytic ring, while
//! `Feasible` only asserts solvability modulo terms of degree `> T`.
//! [`subalgebra_membership`] is the exception: its degree cap is
//! exhaustive for the given series order.

mod graded;
mod linear;

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

pub(crate) use graded::{decode, GradedBuilder};
pub use linear::{LinearSystem, Solution};
pub(crate) use linear::determinant;

use crate::coeff_series::{powers_series, GaussianRational as Q, Monomial, Polynomial2, USeries, Var};
use crate::curve::{Normalization, PlaneCurve};
use crate::error::AlgebraError;
use crate::forms::CurveOneForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Feasibility {
    Feasible,
    Infeasible,
}

/// What a verdict compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// Polynomial identities modulo terms of total degree above the bound.
    Degree(u32),
    /// Series identities modulo `s^N`.
    Order(usize),
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truncation::Degree(t) => write!(f, "degree <= {t}"),
            Truncation::Order(n) => write!(f, "mod s^{n}"),
        }
    }
}

/// A decided linear system together with its certificate.
///
/// The system is kept so the certificate can be rechecked with
/// [`MembershipVerdict::verify`] without trusting the solver.
#[derive(Clone, Debug)]
pub struct MembershipVerdict {
    status: Feasibility,
    truncation: Truncation,
    solution: Option<Vec<Q>>,
    witness: Option<Vec<Q>>,
    system: Arc<LinearSystem>,
}

impl MembershipVerdict {
    pub fn decide(system: LinearSystem, truncation: Truncation) -> Self {
        let outcome = system.solve();
        let system = Arc::new(system);
        match outcome {
            Solution::Feasible(x) => {
                Self { status: Feasibility::Feasible, truncation, solution: Some(x), witness: None, system }
            }
            Solution::Infeasible(y) => {
                Self { status: Feasibility::Infeasible, truncation, solution: None, witness: Some(y), system }
            }
        }
    }

    pub fn status(&self) -> Feasibility {
        self.status
    }

    pub fn is_feasible(&self) -> bool {
        self.status == Feasibility::Feasible
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// Dense values per column, present iff feasible.
    pub fn solution(&self) -> Option<&[Q]> {
        self.solution.as_deref()
    }

    /// Dense row functional normalized to pair to 1 with the target,
    /// present iff infeasible.
    pub fn witness(&self) -> Option<&[Q]> {
        self.witness.as_deref()
    }

    pub fn system(&self) -> &LinearSystem {
        &self.system
    }

    /// Nonzero solution entries by column label.
    pub fn solution_entries(&self) -> Vec<(&str, &Q)> {
        labeled(self.system.col_labels(), self.solution.as_deref())
    }

    /// Nonzero witness entries by row label.
    pub fn witness_entries(&self) -> Vec<(&str, &Q)> {
        labeled(self.system.row_labels(), self.witness.as_deref())
    }

    /// Rechecks the certificate against the stored system.
    pub fn verify(&self) -> bool {
        match (self.status, &self.solution, &self.witness) {
            (Feasibility::Feasible, Some(x), None) => self.system.check_solution(x),
            (Feasibility::Infeasible, None, Some(y)) => self.system.check_witness(y),
            _ => false,
        }
    }
}

fn labeled<'a>(labels: &'a [String], values: Option<&'a [Q]>) -> Vec<(&'a str, &'a Q)> {
    values
        .map(|v| labels.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(l, c)| (l.as_str(), c)).collect())
        .unwrap_or_default()
}

struct LabeledMap<'a>(Vec<(&'a str, &'a Q)>);

impl Serialize for LabeledMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for MembershipVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("status", &self.status)?;
        map.serialize_entry("truncation", &self.truncation.to_string())?;
        map.serialize_entry("rows", &self.system.num_rows())?;
        map.serialize_entry("columns", &self.system.num_cols())?;
        if self.solution.is_some() {
            map.serialize_entry("solution", &LabeledMap(self.solution_entries()))?;
        }
        if self.witness.is_some() {
            map.serialize_entry("witness", &LabeledMap(self.witness_entries()))?;
        }
        map.end()
    }
}

/// Result of [`ideal_membership`].
#[derive(Clone, Debug)]
pub struct IdealMembership {
    pub verdict: MembershipVerdict,
    /// One multiplier per generator when feasible.
    pub multipliers: Option<Vec<Polynomial2>>,
}

/// Is `target ≡ Σ h_i·g_i` modulo degree `> D + max deg g_i`?
///
/// Multipliers range over every monomial that can reach the compared
/// degrees, so `Infeasible` certifies non-membership in the local ring.
pub fn ideal_membership(target: &Polynomial2, generators: &[Polynomial2], degree_cap: u32) -> IdealMembership {
    let top = degree_cap + generators.iter().filter_map(Polynomial2::degree).max().unwrap_or(0);
    let mut b = GradedBuilder::new(&["c"], top);
    for (i, g) in generators.iter().enumerate() {
        b.push_multiples(i, &format!("h{i}"), std::slice::from_ref(g));
    }
    let (system, keys) = b.build(std::slice::from_ref(target));
    let verdict = MembershipVerdict::decide(system, Truncation::Degree(top));
    let multipliers = verdict.solution().map(|x| decode(&keys, x, generators.len()));
    IdealMembership { verdict, multipliers }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Strength {
    StrongUpToOrder,
    CertifiedNotStrong,
}

/// Whether per-branch series are the restriction of one ambient function.
#[derive(Clone, Debug)]
pub struct StrongHolomorphyVerdict {
    pub status: Strength,
    /// Ambient polynomial of degree `≤ N` matching every target mod `s^N`.
    pub g: Option<Polynomial2>,
    pub verdict: MembershipVerdict,
}

impl StrongHolomorphyVerdict {
    pub fn is_strong(&self) -> bool {
        self.status == Strength::StrongUpToOrder
    }
}

impl Serialize for StrongHolomorphyVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("status", &self.status)?;
        if let Some(g) = &self.g {
            map.serialize_entry("g", &g.to_string())?;
        }
        map.serialize_entry("membership", &self.verdict)?;
        map.end()
    }
}

/// Searches a polynomial `g` with `g(branch_j) ≡ targets[j] mod s^N`.
///
/// Monomials of degree `≥ N` vanish mod `s^N` on every branch, so the
/// search is exhaustive: `CertifiedNotStrong` rules out every analytic
/// `g`, while `StrongUpToOrder` is a statement mod `s^N` only.
pub fn subalgebra_membership(
    targets: &[USeries],
    nz: &Normalization,
    order: usize,
) -> Result<StrongHolomorphyVerdict, AlgebraError> {
    let branches = nz.branches();
    if targets.len() != branches.len() {
        return Err(AlgebraError::TargetCount { expected: branches.len(), found: targets.len() });
    }
    if nz.order() < order {
        return Err(AlgebraError::OrderMismatch { expected: order, found: nz.order() });
    }
    if let Some(t) = targets.iter().find(|t| t.order() != order) {
        return Err(AlgebraError::OrderMismatch { expected: order, found: t.order() });
    }

    let top = order as u32;
    let powers: Vec<(Vec<USeries>, Vec<USeries>)> = branches
        .iter()
        .map(|b| (powers_series(&b.x().truncate(order), top), powers_series(&b.y().truncate(order), top)))
        .collect();
    let mut row_labels = Vec::new();
    for j in 0..branches.len() {
        row_labels.extend((0..order).map(|k| format!("b{j}:s^{k}")));
    }
    let mut col_labels = Vec::new();
    let mut keys = Vec::new();
    let mut columns = Vec::new();
    for m in Monomial::all_in_degrees(0, top) {
        let mut col = Vec::new();
        for (j, (xs, ys)) in powers.iter().enumerate() {
            let (px, py) = (&xs[m.x as usize], &ys[m.y as usize]);
            if px.is_zero() || py.is_zero() {
                continue;
            }
            let pull = px.mul(py);
            col.extend(pull.terms().map(|(k, c)| (j * order + k, c.clone())));
        }
        if !col.is_empty() {
            col_labels.push(format!("g:{m}"));
            keys.push((0, m));
            columns.push(col);
        }
    }
    let target = targets
        .iter()
        .enumerate()
        .flat_map(|(j, t)| t.terms().map(move |(k, c)| (j * order + k, c.clone())))
        .collect();
    let system = LinearSystem::new(row_labels, col_labels, columns, target);
    let verdict = MembershipVerdict::decide(system, Truncation::Order(order));
    let g = verdict.solution().map(|x| decode(&keys, x, 1).remove(0));
    let status = if verdict.is_feasible() { Strength::StrongUpToOrder } else { Strength::CertifiedNotStrong };
    Ok(StrongHolomorphyVerdict { status, g, verdict })
}

/// A coefficient of the vector field `A ∂/∂x + B ∂/∂y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VfUnknown {
    A(Monomial),
    B(Monomial),
}

impl VfUnknown {
    /// `A(0) = B(0) = 0`, no `y` in `A`, no `x` in `B`.
    pub fn paper_constraints() -> Vec<VfUnknown> {
        vec![
            VfUnknown::A(Monomial::ONE),
            VfUnknown::B(Monomial::ONE),
            VfUnknown::A(Monomial::new(0, 1)),
            VfUnknown::B(Monomial::new(1, 0)),
        ]
    }
}

impl fmt::Display for VfUnknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VfUnknown::A(m) => write!(f, "A:{m}"),
            VfUnknown::B(m) => write!(f, "B:{m}"),
        }
    }
}

/// The subsystem of equations involving only linear coefficients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReducedSystem {
    pub columns: Vec<String>,
    pub rows: Vec<ReducedRow>,
    /// Determinant of the augmented matrix when it is square.
    pub determinant: Option<Q>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReducedRow {
    pub monomial: String,
    pub coefficients: Vec<Q>,
    pub rhs: Q,
}

impl ReducedSystem {
    /// Rows as `[coefficients..., rhs]`.
    pub fn augmented(&self) -> Vec<Vec<Q>> {
        self.rows
            .iter()
            .map(|r| r.coefficients.iter().cloned().chain(std::iter::once(r.rhs.clone())).collect())
            .collect()
    }
}

/// Result of [`vector_field_equation_solve`].
#[derive(Clone, Debug)]
pub struct VectorFieldSolve {
    pub verdict: MembershipVerdict,
    pub reduced: ReducedSystem,
    /// `(A, B)` when feasible.
    pub field: Option<(Polynomial2, Polynomial2)>,
}

/// Solves `f = ∂(f·A)/∂x + ∂(f·B)/∂y` in all homogeneous degrees `≤ K`.
///
/// Coefficients of degree `≤ K + 1 − ord f` are unknown (higher ones only
/// reach degree `> K`); `constraints` are forced to zero.
pub fn vector_field_equation_solve(curve: &PlaneCurve, k: u32, constraints: &[VfUnknown]) -> VectorFieldSolve {
    let f = curve.f();
    let ord = f.ord().unwrap_or(0) as i64;
    let mut b = GradedBuilder::new(&["c"], k);
    for (group, name) in [(0, "A"), (1, "B")] {
        for m in graded::monomials_up_to(k as i64 + 1 - ord) {
            let u = if group == 0 { VfUnknown::A(m) } else { VfUnknown::B(m) };
            if constraints.contains(&u) {
                continue;
            }
            let fm = f.mul(&Polynomial2::term(m, Q::from_int(1)));
            let var = if group == 0 { Var::X } else { Var::Y };
            b.push(group, name, m, vec![fm.partial(var)]);
        }
    }
    let (system, keys) = b.build(std::slice::from_ref(f));
    let reduced = reduce_linear_block(&system, &keys);
    let verdict = MembershipVerdict::decide(system, Truncation::Degree(k));
    let field = verdict.solution().map(|x| {
        let mut ab = decode(&keys, x, 2);
        let bb = ab.pop().expect("two groups");
        (ab.pop().expect("two groups"), bb)
    });
    VectorFieldSolve { verdict, reduced, field }
}

fn reduce_linear_block(system: &LinearSystem, keys: &[(usize, Monomial)]) -> ReducedSystem {
    let linear: Vec<bool> = keys.iter().map(|(_, m)| m.degree() == 1).collect();
    let dense = system.dense_rows();
    let rhs = system.dense_target();
    let keep: Vec<usize> = (0..system.num_rows())
        .filter(|&r| {
            let support: Vec<usize> = (0..system.num_cols()).filter(|&j| !dense[r][j].is_zero()).collect();
            !support.is_empty() && support.iter().all(|&j| linear[j])
        })
        .collect();
    let cols: Vec<usize> = (0..system.num_cols()).filter(|&j| linear[j] && keep.iter().any(|&r| !dense[r][j].is_zero())).collect();
    let rows: Vec<ReducedRow> = keep
        .iter()
        .map(|&r| ReducedRow {
            monomial: system.row_labels()[r].clone(),
            coefficients: cols.iter().map(|&j| dense[r][j].clone()).collect(),
            rhs: rhs[r].clone(),
        })
        .collect();
    let mut out = ReducedSystem { columns: cols.iter().map(|&j| system.col_labels()[j].clone()).collect(), rows, determinant: None };
    if out.rows.len() == out.columns.len() + 1 {
        out.determinant = Some(linear::determinant(out.augmented()));
    }
    out
}

/// A primitive: `ω ≡ dH + h·df + f·(β_x dx + β_y dy)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Primitive {
    pub h_big: Polynomial2,
    pub h: Polynomial2,
    pub beta: (Polynomial2, Polynomial2),
}

/// Result of [`exactness_solve`].
#[derive(Clone, Debug)]
pub struct ExactnessSolve {
    pub verdict: MembershipVerdict,
    pub primitive: Option<Primitive>,
}

/// Is `ω` exact on its curve modulo degree `> D + deg f`?
///
/// `Infeasible` certifies that `ω` is not exact near the origin.
pub fn exactness_solve(omega: &CurveOneForm, degree_cap: u32) -> ExactnessSolve {
    let curve = omega.curve();
    let top = degree_cap + curve.f().degree().unwrap_or(0);
    let mut b = GradedBuilder::new(&["dx", "dy"], top);
    b.push_differentials(0, "H");
    b.push_relations(1, curve);
    let (system, keys) = b.build(&[omega.dx().clone(), omega.dy().clone()]);
    let verdict = MembershipVerdict::decide(system, Truncation::Degree(top));
    let primitive = verdict.solution().map(|x| {
        let p = decode(&keys, x, 4);
        Primitive { h_big: p[0].clone(), h: p[3].clone(), beta: (p[1].clone(), p[2].clone()) }
    });
    ExactnessSolve { verdict, primitive }
}

#[cfg(test)]
mod tests;
