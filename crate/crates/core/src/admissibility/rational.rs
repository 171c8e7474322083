use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// A rational number kept in lowest terms with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalQ(Ratio<i64>);

impl RationalQ {
    pub fn new(numerator: i64, denominator: i64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        // Ratio::new reduces and normalises the sign onto the numerator.
        Ok(Self(Ratio::new(numerator, denominator)))
    }

    pub fn integer(value: i64) -> Self {
        Self(Ratio::from_integer(value))
    }

    pub fn numerator(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> i64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator() as f64 / self.denominator() as f64
    }

    /// The `(s, k)` pair of the canonical representation `1 + s/(2k+1)`,
    /// for members of `A_set`.
    pub fn a_set_decomposition(&self) -> Option<(u64, u64)> {
        if !a_set_contains(*self) {
            return None;
        }
        let excess = self.0 - Ratio::from_integer(1);
        let s = *excess.numer() as u64;
        let k = ((*excess.denom() - 1) / 2) as u64;
        Some((s, k))
    }
}

impl fmt::Display for RationalQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator() == 1 {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

impl Serialize for RationalQ {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Membership in `A_set = { 1 + s/(2k+1) : s >= 1, k >= 0 }`.
///
/// `q - 1 = s/(2k+1)` has a solution exactly when `q > 1` and the reduced
/// denominator of `q - 1` is odd (take `s` the reduced numerator and
/// `2k+1` the reduced denominator).
pub fn a_set_contains(q: RationalQ) -> bool {
    let excess = q.0 - Ratio::from_integer(1);
    *excess.numer() > 0 && excess.denom() % 2 == 1
}

/// Members `1 + s/(2k+1)` with `s <= s_max`, `k <= k_max`, in increasing
/// order, without duplicates.
pub fn a_set_lattice(s_max: u64, k_max: u64) -> Vec<RationalQ> {
    let mut members: Vec<RationalQ> = (0..=k_max)
        .flat_map(|k| (1..=s_max).map(move |s| (s, 2 * k + 1)))
        .map(|(s, d)| RationalQ(Ratio::new((d + s) as i64, d as i64)))
        .collect();
    members.sort_unstable();
    members.dedup();
    members
}

/// Smallest lattice member strictly above `threshold`.
///
/// Equivalent to scanning [`a_set_lattice`] in order, but only looks at the
/// first candidate of each odd denominator.
pub fn a_set_successor(threshold: f64, s_max: u64, k_max: u64) -> Option<RationalQ> {
    (0..=k_max)
        .filter_map(|k| {
            let d = 2 * k + 1;
            let excess = (threshold - 1.0) * d as f64;
            let mut s = if excess < 0.0 { 1 } else { excess.floor() as u64 + 1 };
            s = s.max(1);
            // Guard against the float floor landing one short.
            while 1.0 + s as f64 / d as f64 <= threshold {
                s += 1;
            }
            (s <= s_max).then(|| RationalQ(Ratio::new((d + s) as i64, d as i64)))
        })
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(a_set_contains(RationalQ::integer(2)));
        assert!(!a_set_contains(RationalQ::integer(1)));
        assert!(!a_set_contains(RationalQ::new(3, 2).unwrap()));
        assert!(a_set_contains(RationalQ::new(4, 3).unwrap()));
        assert!(!a_set_contains(RationalQ::new(1, 2).unwrap()));
    }

    #[test]
    fn three_halves_has_no_lattice_representation() {
        // 1/2 = s/(2k+1) would need 2s = 2k + 1.
        for s in 1..=100u64 {
            for k in 0..=100u64 {
                assert_ne!(2 * s, 2 * k + 1);
            }
        }
    }

    #[test]
    fn lowest_terms_and_sign() {
        let q = RationalQ::new(6, -4).unwrap();
        assert_eq!((q.numerator(), q.denominator()), (-3, 2));
        assert!(RationalQ::new(1, 0).is_err());
    }

    #[test]
    fn decomposition_round_trips() {
        let q = RationalQ::new(12, 7).unwrap();
        let (s, k) = q.a_set_decomposition().unwrap();
        assert_eq!((s, k), (5, 3));
        assert_eq!(RationalQ::new(((2 * k + 1) + s) as i64, (2 * k + 1) as i64).unwrap(), q);
    }

    #[test]
    fn successor_matches_sorted_lattice() {
        let lattice = a_set_lattice(40, 40);
        for &t in &[1.0, 1.25, 2.0, 2.5, 3.7, 5.0, 11.3] {
            let scan = lattice.iter().copied().find(|q| q.to_f64() > t);
            assert_eq!(a_set_successor(t, 40, 40), scan, "threshold {t}");
        }
    }
}
