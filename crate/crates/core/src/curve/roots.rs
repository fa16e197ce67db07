//! Roots in `Q(i)` of univariate polynomials with Gaussian-rational
//! coefficients, found by the rational root test over `Z[i]`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::coeff_series::GaussianRational as Q;

/// Norms above this bound are not factored; roots whose numerator or
/// denominator would need them are reported as missing.
const NORM_LIMIT: u128 = 1 << 40;

/// A univariate polynomial as coefficients by ascending power.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct UPoly(pub Vec<Q>);

impl UPoly {
    fn trimmed(mut v: Vec<Q>) -> Self {
        while v.last().is_some_and(Q::is_zero) {
            v.pop();
        }
        UPoly(v)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, w: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * w) + c;
        }
        acc
    }

    /// Quotient by `(w - r)`, assuming `r` is a root.
    fn deflate(&self, r: &Q) -> Self {
        let n = self.0.len();
        let mut out = vec![Q::zero(); n - 1];
        let mut carry = Q::zero();
        for k in (1..n).rev() {
            carry = &(&carry * r) + &self.0[k];
            out[k - 1] = carry.clone();
        }
        UPoly::trimmed(out)
    }
}

impl std::fmt::Display for UPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*w"),
                _ => format!("({c})*w^{k}"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Roots with multiplicities and the degree of the part left unsplit.
pub(crate) struct RootSplit {
    pub roots: Vec<(Q, usize)>,
    pub unsplit_degree: usize,
}

type GInt = (BigInt, BigInt);

fn to_gaussian_integers(p: &UPoly) -> Vec<GInt> {
    let lcm = p.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator_lcm()));
    p.0.iter()
        .map(|c| {
            let re = c.re() * num_rational::BigRational::from_integer(lcm.clone());
            let im = c.im() * num_rational::BigRational::from_integer(lcm.clone());
            (re.to_integer(), im.to_integer())
        })
        .collect()
}

fn isqrt(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn divisors(n: u128) -> Vec<u128> {
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2u128;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            primes.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        primes.push((m, 1));
    }
    let mut out = vec![1u128];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = 1u128;
            for _ in 0..=e {
                next.push(d * pk);
                pk *= p;
            }
        }
        out = next;
    }
    out
}

/// Gaussian-integer divisors of `z`, one per associate class (first
/// quadrant, real part positive). `None` if the norm is too large.
fn gaussian_divisors(z: &GInt) -> Option<Vec<GInt>> {
    let norm = (&z.0 * &z.0 + &z.1 * &z.1).to_u128()?;
    if norm == 0 || norm > NORM_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    for k in divisors(norm) {
        let r = isqrt(k);
        for c in 1..=r {
            let rest = k - c * c;
            let d = isqrt(rest);
            if d * d != rest {
                continue;
            }
            let (c, d) = (BigInt::from(c), BigInt::from(d));
            // (c + di) | z  <=>  z·(c - di) ≡ 0 mod k
            let kk = BigInt::from(k);
            let re = &z.0 * &c + &z.1 * &d;
            let im = &z.1 * &c - &z.0 * &d;
            if (&re % &kk).is_zero() && (&im % &kk).is_zero() {
                out.push((c, d));
            }
        }
    }
    Some(out)
}

/// Splits off every root of `p` lying in `Q(i)`. `p` must be nonzero.
pub(crate) fn gaussian_rational_roots(p: &UPoly) -> RootSplit {
    let mut p = UPoly::trimmed(p.0.clone());
    let mut roots: Vec<(Q, usize)> = Vec::new();
    let zero_mult = p.0.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if zero_mult > 0 {
        roots.push((Q::zero(), zero_mult));
        p = UPoly(p.0[zero_mult..].to_vec());
    }
    if p.degree() == 0 {
        return RootSplit { roots, unsplit_degree: 0 };
    }
    let ints = to_gaussian_integers(&p);
    let (Some(nums), Some(dens)) = (gaussian_divisors(&ints[0]), gaussian_divisors(ints.last().unwrap())) else {
        return RootSplit { roots, unsplit_degree: p.degree() };
    };
    let units = [Q::one(), Q::i(), -Q::one(), -Q::i()];
    let mut tried: HashSet<Q> = HashSet::new();
    'outer: for a in &nums {
        for b in &dens {
            let num = Q::new(a.0.clone().into(), a.1.clone().into());
            let den = Q::new(b.0.clone().into(), b.1.clone().into());
            let base = &num / &den;
            for u in &units {
                let r = &base * u;
                if !tried.insert(r.clone()) {
                    continue;
                }
                let mut mult = 0;
                while p.degree() > 0 && p.eval(&r).is_zero() {
                    p = p.deflate(&r);
                    mult += 1;
                }
                if mult > 0 {
                    roots.push((r, mult));
                }
                if p.degree() == 0 {
                    break 'outer;
                }
            }
        }
    }
    RootSplit { roots, unsplit_degree: p.degree() }
}

/// `(g, p, q)` with `a·p + b·q = g = gcd(a, b)` for positive `a, b`.
pub(crate) fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, p, q) = ext_gcd(b, a.rem_euclid(b));
        (g, q, p - a.div_euclid(b) * q)
    }
}
