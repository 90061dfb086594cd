use crate::error::{Error, Result};

pub const MAX_ARITY: usize = 24;

/// Boolean relation of arity `d`, stored as the set of accepted subsets of
/// `{0..d-1}`; bit `i` of a mask is coordinate `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    accepted: Vec<u32>,
}

impl Relation {
    pub fn new(arity: usize, masks: impl IntoIterator<Item = u32>) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::Budget(format!(
                "relation arity {arity} exceeds {MAX_ARITY}"
            )));
        }
        let mut accepted: Vec<u32> = masks.into_iter().collect();
        if let Some(&bad) = accepted.iter().find(|&&x| (x as u64) >> arity != 0) {
            return Err(Error::InvalidInstance(format!(
                "mask {bad:#x} does not fit arity {arity}"
            )));
        }
        accepted.sort_unstable();
        accepted.dedup();
        Ok(Relation { arity, accepted })
    }

    /// All `d`-bit masks whose popcount lies in `weights`.
    pub fn symmetric(arity: usize, weights: &[usize]) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::Budget(format!(
                "relation arity {arity} exceeds {MAX_ARITY}"
            )));
        }
        let masks = (0u32..(1u32 << arity)).filter(|x| weights.contains(&(x.count_ones() as usize)));
        Relation::new(arity, masks)
    }

    /// `EQ(d)`: all-zero or all-one.
    pub fn eq(arity: usize) -> Self {
        Relation::symmetric(arity, &[0, arity]).expect("arity checked by caller")
    }

    /// `HW=i` on `d` coordinates.
    pub fn hw_eq(arity: usize, weight: usize) -> Self {
        Relation::symmetric(arity, &[weight]).expect("arity checked by caller")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn accepted(&self) -> &[u32] {
        &self.accepted
    }

    pub fn len(&self) -> usize {
        self.accepted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accepted.is_empty()
    }

    pub fn contains(&self, mask: u32) -> bool {
        self.accepted.binary_search(&mask).is_ok()
    }

    /// Sorted distinct Hamming weights of the accepted masks.
    pub fn weights(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.accepted.iter().map(|x| x.count_ones() as usize).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// Acceptance depends only on the Hamming weight.
    pub fn is_symmetric(&self) -> bool {
        let weights = self.weights();
        let full = Relation::symmetric(self.arity, &weights).expect("arity already valid");
        full.accepted == self.accepted
    }

    /// Every accepted mask has even weight.
    pub fn is_even(&self) -> bool {
        self.accepted.iter().all(|x| x.count_ones() % 2 == 0)
    }

    /// `Some(c)` when all accepted masks share weight `c`.
    pub fn constant_weight(&self) -> Option<usize> {
        match self.weights().as_slice() {
            [c] => Some(*c),
            _ => None,
        }
    }

    /// Relabels coordinates: old coordinate `i` becomes `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Relation {
        assert_eq!(perm.len(), self.arity);
        let masks = self.accepted.iter().map(|&x| {
            (0..self.arity)
                .filter(|&i| x >> i & 1 == 1)
                .fold(0u32, |acc, i| acc | 1 << perm[i])
        });
        Relation::new(self.arity, masks).expect("permutation preserves arity")
    }

    /// Membership table indexed by mask, for hot loops.
    pub fn table(&self) -> Vec<bool> {
        let mut t = vec![false; 1usize << self.arity];
        for &x in &self.accepted {
            t[x as usize] = true;
        }
        t
    }

    /// Whether some accepted mask agrees with `value` on the bits in `known`.
    pub fn consistent(&self, known: u32, value: u32) -> bool {
        self.accepted.iter().any(|&x| x & known == value & known)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn symmetric_examples() {
        assert_eq!(Relation::symmetric(2, &[0, 2]).unwrap(), Relation::eq(2));
        assert_eq!(Relation::eq(2).accepted(), &[0b00, 0b11]);
        assert_eq!(Relation::symmetric(3, &[1]).unwrap().accepted(), &[0b001, 0b010, 0b100]);
        assert_eq!(Relation::symmetric(4, &[0, 4]).unwrap().accepted(), &[0, 0b1111]);
        assert!(Relation::symmetric(25, &[0]).is_err());
    }

    #[test]
    fn predicates() {
        let r = Relation::new(3, [0b011, 0b110]).unwrap();
        assert!(r.is_even());
        assert!(!r.is_symmetric());
        assert_eq!(r.constant_weight(), Some(2));
        assert_eq!(Relation::symmetric(3, &[0, 2]).unwrap().constant_weight(), None);
        assert!(Relation::new(2, [4]).is_err());
    }

    proptest! {
        #[test]
        fn symmetric_relations_are_permutation_closed(
            d in 1usize..8,
            weights in proptest::collection::vec(0usize..8, 0..4),
            seed in any::<u64>(),
        ) {
            let r = Relation::symmetric(d, &weights).unwrap();
            let mut perm: Vec<usize> = (0..d).collect();
            // Fisher-Yates driven by the seed
            let mut s = seed;
            for i in (1..d).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            prop_assert_eq!(r.permute(&perm), r.clone());
            prop_assert!(r.is_symmetric());
        }
    }
}
