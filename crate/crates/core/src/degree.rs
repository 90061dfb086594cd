use std::fmt;

/// Finite set of allowed degrees, kept sorted and deduplicated.
///
/// The empty list is legal and admits no solution at its vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DegreeList(Vec<usize>);

impl DegreeList {
    pub fn new(values: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = values.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        DegreeList(v)
    }

    pub fn empty() -> Self {
        DegreeList(Vec::new())
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, d: usize) -> bool {
        self.0.binary_search(&d).is_ok()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// `{b - j : b in B, b >= j}`: the list seen by a vertex that already
    /// carries `j` selected edges from outside.
    pub fn shift_down(&self, j: usize) -> DegreeList {
        DegreeList(self.0.iter().filter(|&&b| b >= j).map(|&b| b - j).collect())
    }

    pub fn has_even(&self) -> bool {
        self.0.iter().any(|b| b % 2 == 0)
    }

    pub fn has_odd(&self) -> bool {
        self.0.iter().any(|b| b % 2 == 1)
    }

    /// Largest gap between consecutive members, 0 when there are fewer
    /// than two members.
    pub fn maxgap(&self) -> usize {
        self.gap_witness().map_or(0, |(_, d)| d)
    }

    /// `(a, d)` with `d = maxgap` and `[a, a+d+1] ∩ B = {a, a+d+1}`;
    /// the smallest such `a`. `None` for fewer than two members.
    pub fn gap_witness(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for w in self.0.windows(2) {
            let d = w[1] - w[0] - 1;
            if best.map_or(true, |(_, bd)| d > bd) {
                best = Some((w[0], d));
            }
        }
        best
    }

    /// Membership bitmap over `0..=max`.
    pub fn bitmap(&self) -> Vec<bool> {
        let mut bits = vec![false; self.max().map_or(0, |m| m + 1)];
        for &b in &self.0 {
            bits[b] = true;
        }
        bits
    }
}

impl fmt::Display for DegreeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

impl From<&[usize]> for DegreeList {
    fn from(v: &[usize]) -> Self {
        DegreeList::new(v.iter().copied())
    }
}

impl<const N: usize> From<[usize; N]> for DegreeList {
    fn from(v: [usize; N]) -> Self {
        DegreeList::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Literal search over all `a in B` and `d >= 0`.
    fn maxgap_by_definition(b: &DegreeList) -> usize {
        let mut best = 0;
        let top = b.max().unwrap_or(0);
        for &a in b.values() {
            for d in 0..=top {
                let hits: Vec<usize> = (a..=a + d + 1).filter(|&x| b.contains(x)).collect();
                if hits == vec![a, a + d + 1] {
                    best = best.max(d);
                }
            }
        }
        best
    }

    #[test]
    fn maxgap_examples() {
        assert_eq!(DegreeList::from([1, 5, 6, 8]).maxgap(), 3);
        assert_eq!(DegreeList::from([0, 1, 2, 3]).maxgap(), 0);
        assert_eq!(DegreeList::from([0, 3]).maxgap(), 2);
        assert_eq!(DegreeList::from([1]).maxgap(), 0);
        assert_eq!(DegreeList::empty().maxgap(), 0);
    }

    #[test]
    fn maxgap_closed_form_matches_definition_exhaustively() {
        for mask in 0u32..(1 << 11) {
            let b = DegreeList::new((0..11).filter(|i| mask >> i & 1 == 1));
            assert_eq!(b.maxgap(), maxgap_by_definition(&b), "B = {b}");
        }
    }

    #[test]
    fn witness_and_shift() {
        assert_eq!(DegreeList::from([1, 4, 5]).gap_witness(), Some((1, 2)));
        assert_eq!(DegreeList::from([2, 6]).shift_down(3), DegreeList::from([3]));
        assert_eq!(DegreeList::from([0, 3]).shift_down(1), DegreeList::from([2]));
    }
}
