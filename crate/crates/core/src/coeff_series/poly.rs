//! Sparse bivariate polynomials in the ambient coordinates `(x, y)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::{GaussianRational as Q, USeries};
use crate::error::ParseError;

/// `x^x · y^y`.
///
/// Ordered by total degree, then by ascending power of `x`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }

    pub fn degree(&self) -> u32 {
        self.x + self.y
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial { x: self.x + other.x, y: self.y + other.y }
    }

    /// All monomials of total degree in `lo..=hi`, in monomial order.
    pub fn all_in_degrees(lo: u32, hi: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in lo..=hi {
            for x in 0..=d {
                out.push(Monomial { x, y: d - x });
            }
        }
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then(self.x.cmp(&other.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factor = |v: &str, e: u32| match e {
            0 => None,
            1 => Some(v.to_string()),
            _ => Some(format!("{v}^{e}")),
        };
        let parts: Vec<String> = [factor("x", self.x), factor("y", self.y)].into_iter().flatten().collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl FromStr for Monomial {
    type Err = ParseError;

    /// Accepts `x^a*y^b` with either factor omitted; `1` or the empty
    /// string is the constant monomial.
    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |why: &str| ParseError::Monomial { key: raw.to_string(), reason: why.to_string() };
        let mut m = Monomial::ONE;
        if s.is_empty() || s == "1" {
            return Ok(m);
        }
        let mut seen = [false; 2];
        for factor in s.split('*') {
            let (var, exp) = match factor.split_once('^') {
                Some((v, e)) => (v, e),
                None => (factor, "1"),
            };
            if exp.is_empty() || !exp.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("exponent must be a nonnegative integer"));
            }
            let e: u32 = exp.parse().map_err(|_| bad("exponent out of range"))?;
            let slot = match var {
                "x" => 0,
                "y" => 1,
                _ => return Err(bad("unknown variable (expected x or y)")),
            };
            if seen[slot] {
                return Err(bad("repeated variable"));
            }
            seen[slot] = true;
            if slot == 0 {
                m.x = e;
            } else {
                m.y = e;
            }
        }
        Ok(m)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    X,
    Y,
}

/// Polynomial in `x, y` with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Polynomial2 {
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// `c · x^a y^b`.
    pub fn monomial(a: u32, b: u32, c: Q) -> Self {
        Self::term(Monomial::new(a, b), c)
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, Q::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, Q::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Q::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::ONE)
    }

    /// Total degree; `None` is the `-∞` sentinel of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Lowest total degree of a stored term; `None` for zero.
    pub fn ord(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// Terms of total degree at most `max_degree`.
    pub fn truncate_degree(&self, max_degree: u32) -> Self {
        Self { terms: self.terms.iter().filter(|(m, _)| m.degree() <= max_degree).map(|(m, c)| (*m, c.clone())).collect() }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self { terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (*m, c.clone())).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                out.add_term(ma.mul(mb), a * b);
            }
        }
        out
    }

    /// Multiplies by a monomial and truncates to total degree `max_degree`.
    pub fn mul_monomial_truncated(&self, m: &Monomial, max_degree: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .filter(|(k, _)| k.degree() <= max_degree)
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative.
    pub fn partial(&self, var: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (e, dm) = match var {
                Var::X if m.x > 0 => (m.x, Monomial::new(m.x - 1, m.y)),
                Var::Y if m.y > 0 => (m.y, Monomial::new(m.x, m.y - 1)),
                _ => continue,
            };
            out.add_term(dm, c * &Q::from_int(e as i64));
        }
        out
    }

    /// Value at a point.
    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            acc += &(&(c * &x.pow(m.x)) * &y.pow(m.y));
        }
        acc
    }

    /// `p(px(u, v), py(u, v))` for polynomial substitutions.
    pub fn compose(&self, px: &Polynomial2, py: &Polynomial2) -> Polynomial2 {
        let max_x = self.terms.keys().map(|m| m.x).max().unwrap_or(0);
        let max_y = self.terms.keys().map(|m| m.y).max().unwrap_or(0);
        let xs = powers_poly(px, max_x);
        let ys = powers_poly(py, max_y);
        let mut out = Polynomial2::zero();
        for (m, c) in &self.terms {
            out = out.add(&xs[m.x as usize].mul(&ys[m.y as usize]).scale(c));
        }
        out
    }

    /// Pullback along a parametrization: `p(x(s), y(s))` truncated at the
    /// smaller order of `x` and `y`.
    pub fn eval_on_branch(&self, x: &USeries, y: &USeries) -> USeries {
        let n = x.order().min(y.order());
        let x = x.truncate(n);
        let y = y.truncate(n);
        let max_x = self.terms.keys().map(|m| m.x).max().unwrap_or(0);
        let max_y = self.terms.keys().map(|m| m.y).max().unwrap_or(0);
        let xs = powers_series(&x, max_x);
        let ys = powers_series(&y, max_y);
        let mut out = USeries::zero(n);
        for (m, c) in &self.terms {
            let t = xs[m.x as usize].mul(&ys[m.y as usize]).scale(c);
            out = out.add(&t);
        }
        out
    }
}

pub(crate) fn powers_series(s: &USeries, max: u32) -> Vec<USeries> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(USeries::one(s.order()));
    for k in 1..=max as usize {
        let next = out[k - 1].mul(s);
        out.push(next);
    }
    out
}

fn powers_poly(p: &Polynomial2, max: u32) -> Vec<Polynomial2> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(Polynomial2::one());
    for k in 1..=max as usize {
        let next = out[k - 1].mul(p);
        out.push(next);
    }
    out
}

impl fmt::Display for Polynomial2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_real() && c.re() < &num_rational::BigRational::zero() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let coeff = if mag.is_real() { mag.to_string() } else { format!("({mag})") };
            if *m == Monomial::ONE {
                write!(f, "{coeff}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{coeff}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
