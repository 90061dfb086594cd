//! Value types the dynamic programs are generic over.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// A commutative semiring of partial-solution weights, with `shift`
/// recording one more selected edge.
pub trait Weight: Clone + PartialEq + std::fmt::Debug {
    /// The empty partial solution.
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn shift(&self) -> Self;
}

/// Counts indexed by solution size.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(pub Vec<BigUint>);

impl Poly {
    pub fn coeff(&self, s: usize) -> BigUint {
        self.0.get(s).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, s: usize, value: BigUint) {
        if self.0.len() <= s {
            self.0.resize(s + 1, BigUint::zero());
        }
        self.0[s] = value;
        self.trim();
    }

    /// Number of coefficients up to the last non-zero one.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }
}

impl Weight for Poly {
    fn one() -> Self {
        Poly(vec![BigUint::one()])
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    fn add_assign(&mut self, other: &Self) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), BigUint::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
        self.trim();
    }

    fn mul(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![BigUint::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        let mut p = Poly(out);
        p.trim();
        p
    }

    fn shift(&self) -> Self {
        if self.0.is_empty() {
            return self.clone();
        }
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(BigUint::zero());
        v.extend(self.0.iter().cloned());
        Poly(v)
    }
}

/// Feasibility only.
impl Weight for bool {
    fn one() -> Self {
        true
    }

    fn is_zero(&self) -> bool {
        !*self
    }

    fn add_assign(&mut self, other: &Self) {
        *self |= *other;
    }

    fn mul(&self, other: &Self) -> Self {
        *self && *other
    }

    fn shift(&self) -> Self {
        *self
    }
}

/// Smallest and largest size among the partial solutions; `None` is the
/// empty set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeRange(pub Option<(usize, usize)>);

impl Weight for SizeRange {
    fn one() -> Self {
        SizeRange(Some((0, 0)))
    }

    fn is_zero(&self) -> bool {
        self.0.is_none()
    }

    fn add_assign(&mut self, other: &Self) {
        self.0 = match (self.0, other.0) {
            (Some((a, b)), Some((c, d))) => Some((a.min(c), b.max(d))),
            (x, None) | (None, x) => x,
        };
    }

    fn mul(&self, other: &Self) -> Self {
        SizeRange(match (self.0, other.0) {
            (Some((a, b)), Some((c, d))) => Some((a + c, b + d)),
            _ => None,
        })
    }

    fn shift(&self) -> Self {
        SizeRange(self.0.map(|(a, b)| (a + 1, b + 1)))
    }
}
