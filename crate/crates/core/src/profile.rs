use num_bigint::BigUint;
use num_traits::Zero;

/// Exact solution counts indexed by solution size `0..=m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SizeProfile {
    pub counts: Vec<BigUint>,
}

/// Decision, optimisation and counting answers derived from a profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileSummary {
    pub decide: bool,
    pub min_size: Option<usize>,
    pub max_size: Option<usize>,
    pub total: BigUint,
}

impl SizeProfile {
    pub fn zero(m: usize) -> Self {
        SizeProfile {
            counts: vec![BigUint::zero(); m + 1],
        }
    }

    pub fn from_u64(counts: &[u64]) -> Self {
        SizeProfile {
            counts: counts.iter().map(|&c| BigUint::from(c)).collect(),
        }
    }

    /// Pads (or truncates trailing zeros) to exactly `m + 1` entries.
    pub fn with_len(mut counts: Vec<BigUint>, m: usize) -> Self {
        debug_assert!(counts.iter().skip(m + 1).all(Zero::is_zero));
        counts.resize(m + 1, BigUint::zero());
        SizeProfile { counts }
    }

    pub fn m(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn summary(&self) -> ProfileSummary {
        profile_summary(self)
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.counts.iter().map(|c| c.to_str_radix(10)).collect()
    }
}

pub fn profile_summary(p: &SizeProfile) -> ProfileSummary {
    let nonzero = || p.counts.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(s, _)| s);
    let min_size = nonzero().next();
    let max_size = nonzero().last();
    ProfileSummary {
        decide: min_size.is_some(),
        min_size,
        max_size,
        total: p.total(),
    }
}
