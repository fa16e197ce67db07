//! Connections `∇ = d + A` on free modules over a plane curve: flatness,
//! parallel frames along branches, and the strong-holomorphy
//! classification of those frames.
//!
//! Sections are column vectors, so a frame `S` is parallel when
//! `dS + A·S = 0`; along a branch with `A = M(s)·ds` this is `S' = −M·S`.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::coeff_series::{GaussianRational as Q, Polynomial2, USeries};
use crate::curve::{Branch, Normalization, PlaneCurve};
use crate::error::ConnectionError;
use crate::forms::{d_function, d_oneform, is_torsion, is_zero_oneform, CurveOneForm, CurveTwoForm, TorsionCheck};
use crate::local_algebra::{
    determinant, subalgebra_membership, GradedBuilder, MembershipVerdict, StrongHolomorphyVerdict, Truncation,
};

pub type Matrix = Vec<Vec<Q>>;
pub type SeriesMatrix = Vec<Vec<USeries>>;

pub fn identity(r: usize) -> Matrix {
    (0..r).map(|i| (0..r).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

/// `∇ = d + A` with `A` an `r×r` matrix of one-forms on one curve.
#[derive(Clone, Debug)]
pub struct Connection {
    a: Vec<Vec<CurveOneForm>>,
    curve: Arc<PlaneCurve>,
}

impl Connection {
    pub fn new(curve: Arc<PlaneCurve>, a: Vec<Vec<CurveOneForm>>) -> Result<Self, ConnectionError> {
        let r = a.len();
        if r == 0 || a.iter().any(|row| row.len() != r) {
            return Err(ConnectionError::Shape(r));
        }
        let probe = CurveOneForm::zero(curve.clone());
        if a.iter().flatten().any(|w| !w.same_curve(&probe)) {
            return Err(ConnectionError::CurveMismatch);
        }
        Ok(Self { a, curve })
    }

    pub fn rank_one(form: CurveOneForm) -> Self {
        Self { curve: form.curve().clone(), a: vec![vec![form]] }
    }

    /// `d + ω·Id` in rank `r`.
    pub fn scalar(form: CurveOneForm, r: usize) -> Self {
        let zero = CurveOneForm::zero(form.curve().clone());
        let a = (0..r).map(|i| (0..r).map(|j| if i == j { form.clone() } else { zero.clone() }).collect()).collect();
        Self { curve: form.curve().clone(), a }
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &CurveOneForm {
        &self.a[i][j]
    }

    pub fn entries(&self) -> &[Vec<CurveOneForm>] {
        &self.a
    }

    pub fn curve(&self) -> &Arc<PlaneCurve> {
        &self.curve
    }

    /// `F = dA + A∧A`, entrywise.
    pub fn curvature(&self) -> Vec<Vec<CurveTwoForm>> {
        let r = self.rank();
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|k| (0..r).fold(d_oneform(&self.a[i][k]), |acc, j| acc.add(&self.a[i][j].wedge(&self.a[j][k]))))
                    .collect()
            })
            .collect()
    }

    /// `M(s)` with `A = M(s)·ds` along the branch, mod `s^{N-1}`.
    pub fn pullback_matrix(&self, branch: &Branch) -> SeriesMatrix {
        self.a.iter().map(|row| row.iter().map(|w| w.pullback(branch)).collect()).collect()
    }

    /// `∇P = dP + A·P` for a matrix of functions.
    pub fn covariant_derivative(&self, p: &[Vec<Polynomial2>]) -> Vec<Vec<CurveOneForm>> {
        let r = self.rank();
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|k| {
                        (0..r).fold(d_function(&p[i][k], &self.curve), |acc, j| acc.add(&self.a[i][j].mul_function(&p[j][k])))
                    })
                    .collect()
            })
            .collect()
    }
}

/// One verdict per curvature entry (row-major); all feasible means flat
/// up to the cap, any infeasible certifies non-flatness.
pub fn is_flat(conn: &Connection, degree_cap: u32) -> Vec<MembershipVerdict> {
    conn.curvature().into_iter().flatten().map(|c| c.is_zero(degree_cap).verdict).collect()
}

/// A parallel frame along one branch.
#[derive(Clone, Debug)]
pub struct BranchFrame {
    pub s0: Matrix,
    /// Entries known mod `s^N`.
    pub s: SeriesMatrix,
    /// Pullback of `A`, mod `s^{N-1}`.
    pub m: SeriesMatrix,
    /// `S' + M·S ≡ 0 mod s^{N-1}` and `S(0) = S0`, checked after solving.
    pub residual_ok: bool,
}

impl BranchFrame {
    pub fn order(&self) -> usize {
        self.s[0][0].order()
    }

    /// `S' + M·S`, mod `s^{N-1}`.
    pub fn ode_residual(&self) -> SeriesMatrix {
        let r = self.s.len();
        let n = self.order().saturating_sub(1);
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|k| {
                        (0..r).fold(self.s[i][k].derive(), |acc, j| acc.add(&self.m[i][j].mul(&self.s[j][k].truncate(n))))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Solves `S' = −M·S`, `S(0) = S0` by `S_{n+1} = −(Σ M_i S_{n−i})/(n+1)`.
pub fn solve_frame_on_branch(
    conn: &Connection,
    branch: &Branch,
    s0: &Matrix,
    order: usize,
) -> Result<BranchFrame, ConnectionError> {
    let r = conn.rank();
    if order < 2 {
        return Err(ConnectionError::OrderTooSmall(order));
    }
    if s0.len() != r || s0.iter().any(|row| row.len() != r) {
        return Err(ConnectionError::Shape(r));
    }
    if branch.order() < order {
        return Err(ConnectionError::BranchTooShort { have: branch.order(), want: order });
    }
    if determinant(s0.clone()).is_zero() {
        return Err(ConnectionError::SingularInitialValue);
    }
    let branch = branch.truncate(order).expect("order within branch");
    let m = conn.pullback_matrix(&branch);
    let mut coeffs: Vec<Matrix> = vec![s0.clone()];
    for n in 0..order - 1 {
        let scale = Q::from_int(-(n as i64 + 1)).inv().expect("nonzero");
        let mut next = vec![vec![Q::zero(); r]; r];
        for (i, row) in next.iter_mut().enumerate() {
            for (k, cell) in row.iter_mut().enumerate() {
                let mut acc = Q::zero();
                for d in 0..=n {
                    let sk = &coeffs[n - d];
                    for j in 0..r {
                        let mij = &m[i][j].coeffs()[d];
                        if !mij.is_zero() && !sk[j][k].is_zero() {
                            acc += &(mij * &sk[j][k]);
                        }
                    }
                }
                *cell = &acc * &scale;
            }
        }
        coeffs.push(next);
    }
    let s: SeriesMatrix =
        (0..r).map(|i| (0..r).map(|k| USeries::new(coeffs.iter().map(|c| c[i][k].clone()).collect())).collect()).collect();
    let mut frame = BranchFrame { s0: s0.clone(), s, m, residual_ok: false };
    let at_zero = (0..r).all(|i| (0..r).all(|k| frame.s[i][k].coeff(0) == s0[i][k]));
    frame.residual_ok = at_zero && frame.ode_residual().iter().flatten().all(USeries::is_zero);
    Ok(frame)
}

/// Parallel frames on every branch with the common value `S0 = Id`,
/// with a strong-holomorphy verdict per matrix entry.
#[derive(Clone, Debug)]
pub struct CurveFrame {
    pub frames: Vec<BranchFrame>,
    /// Row-major `r×r`.
    pub strong: Vec<Vec<StrongHolomorphyVerdict>>,
}

impl CurveFrame {
    pub fn is_strong(&self) -> bool {
        self.strong.iter().flatten().all(StrongHolomorphyVerdict::is_strong)
    }

    /// The ambient polynomial frame when every entry is strong.
    pub fn polynomial_frame(&self) -> Option<Vec<Vec<Polynomial2>>> {
        self.strong.iter().map(|row| row.iter().map(|v| v.g.clone()).collect()).collect()
    }
}

pub fn build_continuous_frame(conn: &Connection, nz: &Normalization, order: usize) -> Result<CurveFrame, ConnectionError> {
    let r = conn.rank();
    let s0 = identity(r);
    let frames = nz
        .branches()
        .iter()
        .map(|b| solve_frame_on_branch(conn, b, &s0, order))
        .collect::<Result<Vec<_>, _>>()?;
    let mut strong = Vec::with_capacity(r);
    for i in 0..r {
        let mut row = Vec::with_capacity(r);
        for k in 0..r {
            let targets: Vec<USeries> = frames.iter().map(|f| f.s[i][k].clone()).collect();
            row.push(subalgebra_membership(&targets, nz, order)?);
        }
        strong.push(row);
    }
    Ok(CurveFrame { frames, strong })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    FlatnessFailed,
    StrongFrame,
    NonTame,
    NoStrongFrameUpToOrder,
}

/// A section whose covariant derivative is a nonzero torsion form.
#[derive(Clone, Debug)]
pub struct NonTameWitness {
    /// `H` with `H(0) = 0` and `dH ≡ A` on every branch; the section is `exp(−H)`.
    pub h: Polynomial2,
    /// `ω = A − dH`, so that `∇ exp(−H) = exp(−H)·ω`.
    pub torsion_form: CurveOneForm,
    pub is_zero: MembershipVerdict,
    pub is_torsion: TorsionCheck,
}

impl NonTameWitness {
    /// Recomputes both certificates from `conn` and `nz`.
    pub fn reverify(&self, conn: &Connection, nz: &Normalization) -> bool {
        let expected = conn.entry(0, 0).sub(&d_function(&self.h, conn.curve()));
        expected == self.torsion_form
            && self.h.constant_term().is_zero()
            && self.is_zero.verify()
            && !self.is_zero.is_feasible()
            && is_torsion(&self.torsion_form, nz).torsion
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub status: Status,
    pub order: usize,
    pub degree_cap: u32,
    /// Curvature verdicts, row-major.
    pub flatness: Vec<MembershipVerdict>,
    pub frame: Option<CurveFrame>,
    /// Strong primitive search for rank 1 (targets `∫ M ds` per branch).
    pub primitive: Option<StrongHolomorphyVerdict>,
    /// Vanishing tests of the covariant derivative of the strong frame
    /// (rank 1: of `A − dH`).
    pub parallel_check: Vec<MembershipVerdict>,
    pub strong_frame: Option<Vec<Vec<Polynomial2>>>,
    pub witness: Option<NonTameWitness>,
    pub note: Option<String>,
}

/// Flatness, continuous frame, strong holomorphy, then a parallelism test
/// of the strong extension on the curve itself.
///
/// A strong frame whose covariant derivative is nonzero in the module of
/// forms, yet vanishes on every branch, witnesses non-tameness (rank 1).
pub fn classify(conn: &Connection, nz: &Normalization, order: usize, degree_cap: u32) -> Result<Classification, ConnectionError> {
    let flatness = is_flat(conn, degree_cap);
    let mut out = Classification {
        status: Status::FlatnessFailed,
        order,
        degree_cap,
        flatness,
        frame: None,
        primitive: None,
        parallel_check: Vec::new(),
        strong_frame: None,
        witness: None,
        note: None,
    };
    if !out.flatness.iter().all(MembershipVerdict::is_feasible) {
        return Ok(out);
    }
    let frame = build_continuous_frame(conn, nz, order)?;
    out.strong_frame = frame.polynomial_frame();
    let frame_strong = frame.is_strong();
    out.status = Status::NoStrongFrameUpToOrder;

    if conn.rank() == 1 {
        let targets: Vec<USeries> = frame.frames.iter().map(|f| f.m[0][0].integrate(Q::zero())).collect();
        let primitive = subalgebra_membership(&targets, nz, order)?;
        if let Some(h) = primitive.g.clone() {
            let omega = conn.entry(0, 0).sub(&d_function(&h, conn.curve()));
            let zero = is_zero_oneform(&omega, degree_cap);
            if zero.is_feasible() {
                if frame_strong {
                    out.status = Status::StrongFrame;
                }
            } else {
                let torsion = is_torsion(&omega, nz);
                if torsion.torsion {
                    out.status = Status::NonTame;
                    out.witness = Some(NonTameWitness { h, torsion_form: omega, is_zero: zero.clone(), is_torsion: torsion });
                }
            }
            out.parallel_check.push(zero);
        }
        out.primitive = Some(primitive);
    } else if let Some(p) = &out.strong_frame {
        let top = degree_cap + conn.curve().f().degree().unwrap_or(0);
        let p: Vec<Vec<Polynomial2>> = p.iter().map(|row| row.iter().map(|g| g.truncate_degree(top + 1)).collect()).collect();
        out.parallel_check =
            conn.covariant_derivative(&p).iter().flatten().map(|w| is_zero_oneform(w, degree_cap)).collect();
        if out.parallel_check.iter().all(MembershipVerdict::is_feasible) {
            out.status = Status::StrongFrame;
        } else {
            out.note = Some(format!("strong frame is not parallel on the curve; witness search needs rank 1 (rank {})", conn.rank()));
        }
    } else {
        out.note = Some(format!("no strong frame; witness search needs rank 1 (rank {})", conn.rank()));
    }
    out.frame = Some(frame);
    Ok(out)
}

/// Result of [`parallel_section_at_origin`].
#[derive(Clone, Debug)]
pub struct ParallelSection {
    pub verdict: MembershipVerdict,
    /// `s` with `s(0) = 1` when feasible.
    pub section: Option<Polynomial2>,
}

/// Is there a unit germ `s`, `s(0) = 1`, with `ds + s·A ≡ 0` on the curve
/// modulo degree `> D + deg f`? `Infeasible` certifies that the kernel of
/// `∇` has no generator at the origin.
pub fn parallel_section_at_origin(conn: &Connection, degree_cap: u32) -> Result<ParallelSection, ConnectionError> {
    if conn.rank() != 1 {
        return Err(ConnectionError::RankNotSupported(conn.rank()));
    }
    let a = conn.entry(0, 0);
    let curve = conn.curve();
    let top = degree_cap + curve.f().degree().unwrap_or(0);
    let mut b = GradedBuilder::new(&["dx", "dy"], top);
    for m in crate::coeff_series::Monomial::all_in_degrees(1, top + 1) {
        let p = Polynomial2::term(m, Q::one());
        let w = d_function(&p, curve).add(&a.mul_function(&p));
        b.push(0, "s", m, vec![w.dx().clone(), w.dy().clone()]);
    }
    b.push_relations(1, curve);
    // s = 1 + s': ds' + s'·A − r = −A.
    let (system, keys) = b.build(&[a.dx().neg(), a.dy().neg()]);
    let verdict = MembershipVerdict::decide(system, Truncation::Degree(top));
    let section = verdict.solution().map(|x| crate::local_algebra::decode(&keys, x, 4).remove(0).add(&Polynomial2::one()));
    Ok(ParallelSection { verdict, section })
}
