//! Builders for linear systems that compare polynomial vectors up to a
//! fixed total degree.
//!
//! Every operation that produces an infeasibility certificate in the local
//! ring must push *all* unknown monomials whose image can reach degree
//! `≤ max_degree`; truncating an analytic solution then solves the system.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use super::linear::LinearSystem;
use crate::coeff_series::{GaussianRational as Q, Monomial, Polynomial2, Var};
use crate::curve::PlaneCurve;

pub(crate) struct GradedBuilder {
    components: &'static [&'static str],
    max_degree: u32,
    labels: Vec<String>,
    keys: Vec<(usize, Monomial)>,
    images: Vec<Vec<Polynomial2>>,
}

/// Monomials of degree `≤ top`, empty when `top < 0`.
pub(crate) fn monomials_up_to(top: i64) -> Vec<Monomial> {
    if top < 0 {
        Vec::new()
    } else {
        Monomial::all_in_degrees(0, top as u32)
    }
}

impl GradedBuilder {
    pub fn new(components: &'static [&'static str], max_degree: u32) -> Self {
        Self { components, max_degree, labels: Vec::new(), keys: Vec::new(), images: Vec::new() }
    }

    /// Adds the unknown `name·m`, whose contribution is `image` (one
    /// polynomial per component). Unknowns invisible below the cap are
    /// dropped.
    pub fn push(&mut self, group: usize, name: &str, m: Monomial, image: Vec<Polynomial2>) {
        debug_assert_eq!(image.len(), self.components.len());
        let image: Vec<Polynomial2> = image.iter().map(|p| p.truncate_degree(self.max_degree)).collect();
        if image.iter().all(Polynomial2::is_zero) {
            return;
        }
        self.labels.push(format!("{name}:{m}"));
        self.keys.push((group, m));
        self.images.push(image);
    }

    /// Pushes `m·generator` for every monomial `m` that can reach the cap.
    pub fn push_multiples(&mut self, group: usize, name: &str, generator: &[Polynomial2]) {
        let Some(ord) = generator.iter().filter_map(Polynomial2::ord).min() else {
            return;
        };
        for m in monomials_up_to(self.max_degree as i64 - ord as i64) {
            let image = generator.iter().map(|g| g.mul_monomial_truncated(&m, self.max_degree)).collect();
            self.push(group, name, m, image);
        }
    }

    /// Pushes the relation module of one-forms on `curve`:
    /// `u·f·dx + v·f·dy + w·df` as groups `first..first + 3`.
    pub fn push_relations(&mut self, first: usize, curve: &PlaneCurve) {
        debug_assert_eq!(self.components.len(), 2);
        let f = curve.f();
        let zero = Polynomial2::zero();
        self.push_multiples(first, "u", &[f.clone(), zero.clone()]);
        self.push_multiples(first + 1, "v", &[zero, f.clone()]);
        self.push_multiples(first + 2, "w", &[curve.fx().clone(), curve.fy().clone()]);
    }

    /// Pushes `d(m)` for every nonconstant monomial that can reach the cap.
    pub fn push_differentials(&mut self, group: usize, name: &str) {
        debug_assert_eq!(self.components.len(), 2);
        for m in Monomial::all_in_degrees(1, self.max_degree + 1) {
            let p = Polynomial2::term(m, Q::from_int(1));
            self.push(group, name, m, vec![p.partial(Var::X), p.partial(Var::Y)]);
        }
    }

    pub fn build(self, target: &[Polynomial2]) -> (LinearSystem, Vec<(usize, Monomial)>) {
        debug_assert_eq!(target.len(), self.components.len());
        let target: Vec<Polynomial2> = target.iter().map(|p| p.truncate_degree(self.max_degree)).collect();
        let mut rows: BTreeSet<(usize, Monomial)> = BTreeSet::new();
        for image in self.images.iter().chain(std::iter::once(&target)) {
            for (k, p) in image.iter().enumerate() {
                rows.extend(p.terms().map(|(m, _)| (k, *m)));
            }
        }
        let index: HashMap<(usize, Monomial), usize> = rows.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        let row_labels = rows
            .iter()
            .map(|(k, m)| if self.components.len() == 1 { m.to_string() } else { format!("{}:{m}", self.components[*k]) })
            .collect();
        let sparse = |image: &[Polynomial2]| -> Vec<(usize, Q)> {
            image
                .iter()
                .enumerate()
                .flat_map(|(k, p)| p.terms().map(move |(m, c)| (k, *m, c.clone())))
                .map(|(k, m, c)| (index[&(k, m)], c))
                .collect()
        };
        let columns = self.images.iter().map(|im| sparse(im)).collect();
        let target = sparse(&target);
        (LinearSystem::new(row_labels, self.labels, columns, target), self.keys)
    }
}

/// Reassembles per-group polynomials from a dense solution vector.
pub(crate) fn decode(keys: &[(usize, Monomial)], x: &[Q], groups: usize) -> Vec<Polynomial2> {
    let mut out = vec![Polynomial2::zero(); groups];
    for ((g, m), c) in keys.iter().zip(x) {
        if !c.is_zero() {
            out[*g].add_term(*m, c.clone());
        }
    }
    out
}
