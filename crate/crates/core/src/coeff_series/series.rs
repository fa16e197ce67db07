//! Truncated univariate power series over `Q(i)`.
//!
//! A `USeries` of order `N` is known modulo `s^N`. Binary operations
//! return the smaller of the two orders so no result claims more
//! precision than its inputs carry.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::GaussianRational as Q;
use crate::error::SeriesError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct USeries {
    coeffs: Vec<Q>,
}

impl USeries {
    /// Series with the given coefficients; its order is `coeffs.len()`.
    pub fn new(coeffs: Vec<Q>) -> Self {
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Q::zero(); order] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Q::one(), order)
    }

    pub fn constant(c: Q, order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// `c·s^k mod s^order`.
    pub fn monomial(k: usize, c: Q, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k < order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The parameter `s` itself.
    pub fn var(order: usize) -> Self {
        Self::monomial(1, Q::one(), order)
    }

    /// Builds a series from sparse `(exponent, coefficient)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (usize, Q)>>(terms: I, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in terms {
            if k < order {
                s.coeffs[k] += &c;
            }
        }
        s
    }

    /// `Σ_{k<order} c_k s^k` with `c_k` produced by `f`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Q) -> Self {
        Self { coeffs: (0..order).map(f).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Coefficient of `s^k`, zero beyond the stored order.
    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Q::is_zero)
    }

    /// Index of the first nonzero coefficient, `None` when `≡ 0 mod s^N`.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Nonzero `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise precision by truncation");
        Self { coeffs: self.coeffs[..order].to_vec() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplies by `s^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        Self::from_fn(n, |i| if i >= k { self.coeffs[i - k].clone() } else { Q::zero() })
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| &self.coeffs[k] + &other.coeffs[k])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| &self.coeffs[k] - &other.coeffs[k])
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Q::zero(); n];
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse mod `s^order`.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let n = self.order();
        let c0 = self.coeffs.first().ok_or(SeriesError::NotAUnit)?;
        let inv0 = c0.inv().ok_or(SeriesError::NotAUnit)?;
        let mut out: Vec<Q> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut acc = Q::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += &(a * &out[k - j]);
                }
            }
            out.push(-(&acc * &inv0));
        }
        Ok(Self { coeffs: out })
    }

    /// Formal derivative; the order drops by one.
    pub fn derive(&self) -> Self {
        let n = self.order().saturating_sub(1);
        Self::from_fn(n, |k| &self.coeffs[k + 1] * &Q::from_int(k as i64 + 1))
    }

    /// Antiderivative with constant term `constant`; the order rises by one.
    pub fn integrate(&self, constant: Q) -> Self {
        let n = self.order() + 1;
        Self::from_fn(n, |k| if k == 0 { constant.clone() } else { &self.coeffs[k - 1] / &Q::from_int(k as i64) })
    }

    /// `outer(inner(s))`, requiring `inner(0) = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if inner.coeffs.first().is_some_and(|c| !c.is_zero()) {
            return Err(SeriesError::InnerNotNilpotent);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        // Horner from the top coefficient down.
        let mut acc = Self::zero(n);
        for c in self.coeffs[..n].iter().rev() {
            acc = acc.mul(&inner);
            if n > 0 {
                acc.coeffs[0] += c;
            }
        }
        Ok(acc)
    }
}

impl Add for &USeries {
    type Output = USeries;
    fn add(self, rhs: &USeries) -> USeries {
        USeries::add(self, rhs)
    }
}

impl Sub for &USeries {
    type Output = USeries;
    fn sub(self, rhs: &USeries) -> USeries {
        USeries::sub(self, rhs)
    }
}

impl Mul for &USeries {
    type Output = USeries;
    fn mul(self, rhs: &USeries) -> USeries {
        USeries::mul(self, rhs)
    }
}

impl Neg for &USeries {
    type Output = USeries;
    fn neg(self) -> USeries {
        USeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for USeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*s")?,
                _ => write!(f, "({c})*s^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " mod s^{}", self.order())
    }
}

impl fmt::Debug for USeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn alt(order: usize) -> USeries {
        USeries::from_fn(order, |k| q(if k % 2 == 0 { 1 } else { -1 }))
    }

    fn geometric(order: usize) -> USeries {
        USeries::from_fn(order, |_| q(1))
    }

    /// Σ s^k / k! built from an explicit factorial, independent of `integrate`.
    fn exp_series(order: usize) -> USeries {
        let mut fact = 1i64;
        USeries::from_fn(order, |k| {
            if k > 0 {
                fact *= k as i64;
            }
            Q::ratio(1, fact)
        })
    }

    #[test]
    fn addition_examples() {
        let a = USeries::new(vec![q(1), q(1), q(0)]);
        let b = USeries::constant(q(-1), 3);
        assert_eq!(a.add(&b), USeries::var(3));
        assert_eq!(a.add(&USeries::zero(3)), a);
        let sum = alt(5).add(&geometric(5));
        assert_eq!(sum, USeries::new(vec![q(2), q(0), q(2), q(0), q(2)]));
    }

    #[test]
    fn multiplication_examples() {
        for n in [1, 4, 17] {
            let one_plus_s = USeries::new(vec![q(1), q(1)]).pad(n);
            assert_eq!(one_plus_s.mul(&alt(n)), USeries::one(n));
        }
        assert!(alt(6).mul(&USeries::zero(6)).is_zero());
        let p = USeries::monomial(2, q(1), 6).mul(&USeries::monomial(3, q(1), 6));
        assert_eq!(p, USeries::monomial(5, q(1), 6));
    }

    #[test]
    fn inverse_examples() {
        let one_plus_s = USeries::new(vec![q(1), q(1)]).pad(9);
        assert_eq!(one_plus_s.inverse().unwrap(), alt(9));
        assert_eq!(USeries::constant(q(4), 5).inverse().unwrap(), USeries::constant(Q::ratio(1, 4), 5));
        assert_eq!(USeries::var(5).inverse(), Err(SeriesError::NotAUnit));
    }

    #[test]
    fn calculus_examples() {
        assert_eq!(USeries::monomial(3, q(1), 5).derive(), USeries::monomial(2, q(3), 4));
        assert_eq!(USeries::one(3).integrate(q(0)), USeries::var(4));
        assert_eq!(exp_series(6).derive(), exp_series(5));
    }

    #[test]
    fn composition_examples() {
        let sq = USeries::monomial(2, q(1), 10);
        let expected = USeries::from_fn(10, |k| q(if k % 2 == 0 { 1 } else { 0 }));
        assert_eq!(geometric(10).compose(&sq).unwrap(), expected);
        let g = USeries::new(vec![q(0), q(3), q(-1), Q::ratio(2, 7)]);
        assert_eq!(USeries::var(4).compose(&g).unwrap(), g);
        let neg_s = USeries::monomial(1, q(-1), 6);
        let mut fact = 1i64;
        let expected = USeries::from_fn(6, |k| {
            if k > 0 {
                fact *= k as i64;
            }
            Q::ratio(if k % 2 == 0 { 1 } else { -1 }, fact)
        });
        assert_eq!(exp_series(6).compose(&neg_s).unwrap(), expected);
        assert_eq!(geometric(4).compose(&geometric(4)), Err(SeriesError::InnerNotNilpotent));
    }

    impl USeries {
        fn pad(&self, order: usize) -> USeries {
            USeries::from_fn(order, |k| self.coeff(k))
        }
    }

    fn arb_q() -> impl Strategy<Value = Q> {
        (-6i64..7, 1i64..5, -3i64..4).prop_map(|(n, d, im)| {
            &Q::ratio(n, d) + &(&Q::from_int(im) * &Q::i())
        })
    }

    fn arb_series(order: usize) -> impl Strategy<Value = USeries> {
        proptest::collection::vec(arb_q(), order).prop_map(USeries::new)
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_series(7), b in arb_series(7), c in arb_series(7)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        }

        #[test]
        fn truncation_commutes_with_product(a in arb_series(8), b in arb_series(8), n in 0usize..8) {
            prop_assert_eq!(a.mul(&b).truncate(n), a.truncate(n).mul(&b.truncate(n)));
        }

        #[test]
        fn leibniz(a in arb_series(8), b in arb_series(8)) {
            let lhs = a.mul(&b).derive();
            let rhs = a.derive().mul(&b.truncate(7)).add(&a.truncate(7).mul(&b.derive()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn inverse_is_two_sided(a in arb_series(8)) {
            prop_assume!(!a.coeff(0).is_zero());
            prop_assert_eq!(a.mul(&a.inverse().unwrap()), USeries::one(8));
        }

        #[test]
        fn derive_undoes_integrate(a in arb_series(6), c in arb_q()) {
            let i = a.integrate(c.clone());
            prop_assert_eq!(i.coeff(0), c);
            prop_assert_eq!(i.derive(), a);
        }
    }
}
