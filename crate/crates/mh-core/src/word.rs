//! Paths in the labeled tree 𝕋ₙ.
//!
//! A mutation word is a sequence of branch labels `1..=n` in which no two
//! consecutive labels agree: at every node the outgoing branches exclude the
//! incoming one, so immediate backtracking is not representable.

use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A finite path in 𝕋ₙ, stored as 1-based direction labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MutationWord {
    labels: Vec<usize>,
}

impl MutationWord {
    /// Wraps a label sequence, rejecting immediate repetitions and zeros.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        for (t, &w) in labels.iter().enumerate() {
            if w == 0 {
                return Err(Error::InvalidWord {
                    position: t,
                    reason: "labels are 1-based; 0 is not a direction".into(),
                });
            }
            if t > 0 && labels[t - 1] == w {
                return Err(Error::InvalidWord {
                    position: t,
                    reason: format!("label {w} repeats its predecessor"),
                });
            }
        }
        Ok(MutationWord { labels })
    }

    pub fn empty() -> Self {
        MutationWord { labels: Vec::new() }
    }

    /// The cyclic word 1, 2, …, n, 1, 2, … of the given length.
    pub fn cyclic(n: usize, len: usize) -> Self {
        Self::cyclic_from(n, len, 1)
    }

    /// Cyclic word starting at an arbitrary direction.
    pub fn cyclic_from(n: usize, len: usize, start: usize) -> Self {
        assert!(n >= 2 && (1..=n).contains(&start));
        let labels = (0..len).map(|t| (start - 1 + t) % n + 1).collect();
        MutationWord { labels }
    }

    /// Seeded uniform random word: each step draws uniformly from the labels
    /// allowed at that node (all of `1..=n` except the previous label).
    /// Identical seeds produce identical words.
    pub fn seeded_random(n: usize, len: usize, seed: u64) -> Self {
        assert!(n >= 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut labels = Vec::with_capacity(len);
        let mut prev = 0usize; // no incoming branch at the root
        for _ in 0..len {
            let choices = if prev == 0 { n } else { n - 1 };
            let mut pick = rng.random_range(0..choices) + 1;
            if prev != 0 && pick >= prev {
                pick += 1;
            }
            labels.push(pick);
            prev = pick;
        }
        MutationWord { labels }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Truncated copy containing the first `len` labels.
    pub fn prefix(&self, len: usize) -> Self {
        MutationWord {
            labels: self.labels[..len.min(self.labels.len())].to_vec(),
        }
    }

    /// The word read backwards. Reversal preserves validity.
    pub fn reversed(&self) -> Self {
        let mut labels = self.labels.clone();
        labels.reverse();
        MutationWord { labels }
    }

    /// Checks that every label lies in `1..=n`.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        for (t, &w) in self.labels.iter().enumerate() {
            if w > n {
                return Err(Error::InvalidWord {
                    position: t,
                    reason: format!("label {w} exceeds the direction count {n}"),
                });
            }
        }
        Ok(())
    }

    /// Windowed genericity test: every direction of `1..=n` must occur in
    /// each sliding window of length `window`. A word shorter than one
    /// window is tested as a single window. This approximates the notion of
    /// a word in which every direction appears infinitely often.
    pub fn is_generic_windowed(&self, n: usize, window: usize) -> bool {
        let w = window.max(n);
        if self.labels.len() <= w {
            return covers_all(&self.labels, n);
        }
        (0..=self.labels.len() - w).all(|start| covers_all(&self.labels[start..start + w], n))
    }

    /// Default genericity window, 4n.
    pub fn default_window(n: usize) -> usize {
        4 * n
    }

    /// Parses a comma-separated label list such as `2,1,3`.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Ok(Self::empty());
        }
        let mut labels = Vec::new();
        for (t, part) in trimmed.split(',').enumerate() {
            let w: usize = part.trim().parse().map_err(|_| Error::InvalidWord {
                position: t,
                reason: format!("cannot parse label {part:?}"),
            })?;
            labels.push(w);
        }
        Self::new(labels)
    }
}

fn covers_all(slice: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n + 1];
    for &w in slice {
        if w <= n {
            seen[w] = true;
        }
    }
    seen[1..=n].iter().all(|&b| b)
}

impl std::fmt::Display for MutationWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.labels.iter().map(|w| w.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_immediate_repetition() {
        assert!(MutationWord::new(vec![1, 2, 2]).is_err());
        assert!(MutationWord::new(vec![1, 2, 1]).is_ok());
    }

    #[test]
    fn cyclic_word_layout() {
        let w = MutationWord::cyclic(4, 6);
        assert_eq!(w.labels(), &[1, 2, 3, 4, 1, 2]);
        let w = MutationWord::cyclic_from(4, 5, 2);
        assert_eq!(w.labels(), &[2, 3, 4, 1, 2]);
    }

    #[test]
    fn seeded_random_is_reproducible_and_valid() {
        let a = MutationWord::seeded_random(4, 500, 42);
        let b = MutationWord::seeded_random(4, 500, 42);
        assert_eq!(a, b);
        assert!(MutationWord::new(a.labels().to_vec()).is_ok());
        a.validate_for(4).unwrap();
        let c = MutationWord::seeded_random(4, 500, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn genericity_window() {
        let w = MutationWord::cyclic(3, 30);
        assert!(w.is_generic_windowed(3, 12));
        // direction 3 never occurs
        let w = MutationWord::new(vec![1, 2, 1, 2, 1, 2, 1, 2]).unwrap();
        assert!(!w.is_generic_windowed(3, 12));
    }

    #[test]
    fn parse_round_trip() {
        let w = MutationWord::parse("2, 1, 3").unwrap();
        assert_eq!(w.labels(), &[2, 1, 3]);
        assert!(MutationWord::parse("").unwrap().is_empty());
        assert!(MutationWord::parse("1,1").is_err());
    }
}
