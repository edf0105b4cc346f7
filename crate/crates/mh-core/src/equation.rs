//! The generalized Markov-Hurwitz equation family and its Vieta mutations.
//!
//! An [`Equation`] is determined by the variable count `n`, a vector of
//! nonnegative interaction coefficients `lambda`, and two offsets `a`, `b`:
//!
//! ```text
//!   Σ xᵢ² + Σ λᵢ·∏_{j≠i} xⱼ  =  (a + Σ λᵢ)·∏ xᵢ + b
//! ```
//!
//! The default family has `a = n` and `b = 0`; its positive integer solutions
//! form a single mutation tree rooted at `(1, …, 1)`. Freezing all coordinates
//! but one turns the equation into a monic quadratic, and `mutate` replaces a
//! coordinate by the other root of that quadratic. Applying the same mutation
//! twice returns the original point.

use crate::error::{Error, Result};
use crate::word::MutationWord;
use rug::Integer;
use serde::de::Error as _;
use serde::ser::{Error as _, SerializeMap, SerializeSeq};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::str::FromStr;

/// Guard rails for chain-building operations.
///
/// `max_coord_bits` caps the bit length of any produced coordinate;
/// `max_chain_steps` caps descent length. Both exist to fail fast instead of
/// exhausting memory on runaway chains.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_coord_bits: u32,
    pub max_chain_steps: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_coord_bits: 1 << 20,
            max_chain_steps: 10_000,
        }
    }
}

impl Limits {
    pub fn with_coord_bits(max_coord_bits: u32) -> Self {
        Limits {
            max_coord_bits,
            ..Limits::default()
        }
    }

    fn check_bits(&self, value: &Integer) -> Result<()> {
        let bits = value.significant_bits();
        if bits > self.max_coord_bits {
            return Err(Error::ResourceLimit {
                what: "coordinate bits",
                got: bits as u64,
                cap: self.max_coord_bits as u64,
            });
        }
        Ok(())
    }
}

/// One equation of the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    n: usize,
    lambda: Vec<Integer>,
    a: Integer,
    b: Integer,
}

impl Equation {
    /// General constructor; `a` and `b` are the §5-style offsets.
    pub fn new(
        n: usize,
        lambda: Vec<Integer>,
        a: impl Into<Integer>,
        b: impl Into<Integer>,
    ) -> Result<Self> {
        let a = a.into();
        let b = b.into();
        if n < 3 {
            return Err(Error::InvalidEquation {
                reason: format!("n must be at least 3, got {n}"),
            });
        }
        if lambda.len() != n {
            return Err(Error::InvalidEquation {
                reason: format!("lambda has {} entries, expected {n}", lambda.len()),
            });
        }
        if lambda.iter().any(|l| *l < 0) {
            return Err(Error::InvalidEquation {
                reason: "lambda entries must be nonnegative".into(),
            });
        }
        if a < 0 || b < 0 {
            return Err(Error::InvalidEquation {
                reason: "offsets a and b must be nonnegative".into(),
            });
        }
        Ok(Equation { n, lambda, a, b })
    }

    /// The default family: `a = n`, `b = 0`.
    pub fn markov_hurwitz(lambda: Vec<Integer>) -> Result<Self> {
        let n = lambda.len();
        Self::new(n, lambda, n as u64, 0u64)
    }

    /// Convenience constructor from small coefficients.
    pub fn markov_hurwitz_u64(lambda: &[u64]) -> Result<Self> {
        Self::markov_hurwitz(lambda.iter().map(|&l| Integer::from(l)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &[Integer] {
        &self.lambda
    }

    pub fn a(&self) -> &Integer {
        &self.a
    }

    pub fn b(&self) -> &Integer {
        &self.b
    }

    /// The product coefficient `k_λ = a + Σ λᵢ`; equals `n + Σ λᵢ` for the
    /// default family. Ratio numbers along generic words converge to it.
    pub fn k_lambda(&self) -> Integer {
        let mut k = self.a.clone();
        for l in &self.lambda {
            k += l;
        }
        k
    }

    /// True for the default family (`a = n`, `b = 0`), whose mutation tree is
    /// rooted at the all-ones tuple.
    pub fn is_default_family(&self) -> bool {
        self.a == self.n as u64 && self.b == 0u64
    }

    /// Exact residual: LHS minus RHS. Zero iff `x` is a solution.
    pub fn residual(&self, x: &SolutionTuple) -> Result<Integer> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        let coords = x.coords();
        let cof = cofactor_products(coords);
        let mut acc = Integer::new();
        for c in coords {
            acc += Integer::from(c.square_ref());
        }
        for (l, p) in self.lambda.iter().zip(&cof) {
            acc += Integer::from(l * p);
        }
        let full_product = Integer::from(&cof[0] * &coords[0]);
        acc -= self.k_lambda() * full_product;
        acc -= &self.b;
        Ok(acc)
    }

    /// True iff the residual vanishes.
    pub fn is_solution(&self, x: &SolutionTuple) -> Result<bool> {
        Ok(self.residual(x)?.cmp0() == std::cmp::Ordering::Equal)
    }

    /// Vieta mutation in direction `i` (1-based), checked: the input must be
    /// a solution. The mutated coordinate is
    /// `xᵢ' = (Σ_{j≠i} xⱼ² + λᵢ·∏_{j≠i} xⱼ − b) / xᵢ`, computed by exact
    /// division.
    pub fn mutate(&self, x: &SolutionTuple, i: usize) -> Result<SolutionTuple> {
        let residual = self.residual(x)?;
        if residual.cmp0() != std::cmp::Ordering::Equal {
            return Err(Error::NotASolution { residual });
        }
        self.mutate_unchecked(x, i)
    }

    /// Vieta mutation without the solution precondition. Exactness of the
    /// division is still verified (`NonIntegralRoot` on failure) and the
    /// result must stay positive (`DeadEnd` otherwise, reachable for the
    /// extended family with `b > 0`).
    pub fn mutate_unchecked(&self, x: &SolutionTuple, i: usize) -> Result<SolutionTuple> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        check_direction(i, self.n)?;
        let coords = x.coords();
        let idx = i - 1;

        let mut numerator = Integer::new();
        let mut others_product = Integer::from(1u32);
        for (j, c) in coords.iter().enumerate() {
            if j != idx {
                numerator += Integer::from(c.square_ref());
                others_product *= c;
            }
        }
        numerator += Integer::from(&self.lambda[idx] * &others_product);
        numerator -= &self.b;

        let (quot, rem) = numerator.div_rem(coords[idx].clone());
        if rem.cmp0() != std::cmp::Ordering::Equal {
            return Err(Error::NonIntegralRoot {
                direction: i,
                remainder: rem,
            });
        }
        if quot <= 0u32 {
            return Err(Error::DeadEnd {
                direction: i,
                value: quot,
            });
        }
        let mut out = coords.to_vec();
        out[idx] = quot;
        Ok(SolutionTuple { coords: out })
    }

    /// The linear Vieta identity `xᵢ + xᵢ' = (a + Σλ)·∏_{j≠i} xⱼ −
    /// Σ_{j≠i} λⱼ·∏_{m≠i,j} x_m`, evaluated without any division. On
    /// solutions this equals `xᵢ + mutate(x, i)ᵢ` exactly; it is the second
    /// algebraic route used to cross-check the mutation.
    pub fn vieta_sum(&self, x: &SolutionTuple, i: usize) -> Result<Integer> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        check_direction(i, self.n)?;
        let coords = x.coords();
        let idx = i - 1;
        let mut others_product = Integer::from(1u32);
        for (j, c) in coords.iter().enumerate() {
            if j != idx {
                others_product *= c;
            }
        }
        let mut sum = self.k_lambda() * &others_product;
        for (j, c) in coords.iter().enumerate() {
            if j != idx {
                // ∏_{m≠i,j} x_m = others_product / x_j, exact by construction
                let reduced = Integer::from(&others_product / c);
                sum -= Integer::from(&self.lambda[j] * &reduced);
            }
        }
        Ok(sum)
    }

    /// Applies a word of mutations starting from `x0`, returning the whole
    /// chain (`word.len() + 1` points). Errors are annotated with the index
    /// of the failing step.
    pub fn apply_word(
        &self,
        x0: &SolutionTuple,
        word: &MutationWord,
        limits: &Limits,
    ) -> Result<Vec<SolutionTuple>> {
        let residual = self.residual(x0)?;
        if residual.cmp0() != std::cmp::Ordering::Equal {
            return Err(Error::NotASolution { residual });
        }
        word.validate_for(self.n)?;
        let mut chain = Vec::with_capacity(word.len() + 1);
        chain.push(x0.clone());
        let mut cur = x0.clone();
        for (t, &w) in word.labels().iter().enumerate() {
            let next = self
                .mutate_unchecked(&cur, w)
                .and_then(|y| {
                    limits.check_bits(&y.coords()[w - 1])?;
                    Ok(y)
                })
                .map_err(|e| Error::StepFailed {
                    step: t,
                    source: Box::new(e),
                })?;
            chain.push(next.clone());
            cur = next;
        }
        Ok(chain)
    }

    /// Descends from `x` by repeatedly mutating a largest coordinate while
    /// that strictly decreases the maximum. For the default family the
    /// descent provably terminates at `(1, …, 1)`; for the extended family it
    /// terminates at a fundamental solution (a point where the argmax
    /// mutation no longer shrinks the maximum, or leaves the positive
    /// orthant).
    pub fn descend(&self, x: &SolutionTuple, limits: &Limits) -> Result<Descent> {
        let residual = self.residual(x)?;
        if residual.cmp0() != std::cmp::Ordering::Equal {
            return Err(Error::NotASolution { residual });
        }
        let mut chain = vec![x.clone()];
        let mut word = Vec::new();
        let mut tie_count = 0usize;
        let mut cur = x.clone();
        loop {
            if word.len() >= limits.max_chain_steps {
                return Err(Error::ResourceLimit {
                    what: "descent steps",
                    got: word.len() as u64 + 1,
                    cap: limits.max_chain_steps as u64,
                });
            }
            let (dir, tie) = cur.argmax_with_tie();
            if tie && !cur.is_all_ones() {
                tie_count += 1;
            }
            let candidate = match self.mutate_unchecked(&cur, dir) {
                Ok(y) => y,
                // For b > 0 the other Vieta root can be nonpositive; such a
                // point cannot descend further and is terminal.
                Err(Error::DeadEnd { .. }) if !self.is_default_family() => break,
                Err(e) => return Err(e),
            };
            if candidate.max_coord() < cur.max_coord() {
                word.push(dir);
                chain.push(candidate.clone());
                cur = candidate;
            } else {
                break;
            }
        }
        if self.is_default_family() && !cur.is_all_ones() {
            return Err(Error::NonDecreasingStep {
                point: cur.coords().to_vec(),
                max: cur.max_coord().clone(),
            });
        }
        Ok(Descent {
            word: MutationWord::new(word).expect("descent never repeats a direction"),
            chain,
            tie_count,
        })
    }
}

impl std::fmt::Display for Equation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let lambda: Vec<String> = self.lambda.iter().map(|l| l.to_string()).collect();
        write!(
            f,
            "n={} lambda=({}) a={} b={}",
            self.n,
            lambda.join(","),
            self.a,
            self.b
        )
    }
}

/// Result of a descent: the applied directions, the full chain (starting at
/// the input, ending at the terminal point), and the number of argmax ties
/// observed away from the all-ones tuple.
#[derive(Clone, Debug)]
pub struct Descent {
    pub word: MutationWord,
    pub chain: Vec<SolutionTuple>,
    pub tie_count: usize,
}

impl Descent {
    pub fn terminal(&self) -> &SolutionTuple {
        self.chain.last().expect("chain contains the start point")
    }
}

/// An ordered tuple of strictly positive arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SolutionTuple {
    coords: Vec<Integer>,
}

impl SolutionTuple {
    pub fn new(coords: Vec<Integer>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint {
                reason: "empty coordinate list".into(),
            });
        }
        if let Some(bad) = coords.iter().position(|c| *c < 1) {
            return Err(Error::InvalidPoint {
                reason: format!("coordinate {} is not positive", bad + 1),
            });
        }
        Ok(SolutionTuple { coords })
    }

    pub fn from_u64s(coords: &[u64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Integer::from(c)).collect())
    }

    /// The all-ones tuple, root of every default-family tree.
    pub fn ones(n: usize) -> Self {
        SolutionTuple {
            coords: vec![Integer::from(1u32); n],
        }
    }

    pub fn coords(&self) -> &[Integer] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn max_coord(&self) -> &Integer {
        self.coords.iter().max().expect("tuple is nonempty")
    }

    pub fn is_all_ones(&self) -> bool {
        self.coords.iter().all(|c| *c == 1u32)
    }

    /// Largest bit length over the coordinates.
    pub fn max_bits(&self) -> u32 {
        self.coords
            .iter()
            .map(|c| c.significant_bits())
            .max()
            .unwrap_or(0)
    }

    /// 1-based index of the maximal coordinate, ties broken by smallest
    /// index.
    pub fn argmax(&self) -> usize {
        self.argmax_with_tie().0
    }

    /// Like [`argmax`](Self::argmax) but also reports whether the maximum is
    /// attained more than once. Away from the all-ones tuple a tie would
    /// contradict the uniqueness asserted by the descent lemma, so callers
    /// surface it as a diagnostic.
    pub fn argmax_with_tie(&self) -> (usize, bool) {
        let mut best = 0usize;
        let mut tie = false;
        for (j, c) in self.coords.iter().enumerate().skip(1) {
            if c > &self.coords[best] {
                best = j;
                tie = false;
            } else if c == &self.coords[best] {
                tie = true;
            }
        }
        (best + 1, tie)
    }

    /// Renders coordinates as decimal strings.
    pub fn decimal_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }
}

impl std::fmt::Display for SolutionTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.decimal_strings().join(","))
    }
}

// Coordinates are serialized as decimal strings, never as native numbers:
// they exceed 64 bits after a handful of mutations.
impl Serialize for SolutionTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coords.len()))?;
        for c in &self.coords {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for SolutionTuple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(deserializer)?;
        let mut coords = Vec::with_capacity(raw.len());
        for (j, s) in raw.iter().enumerate() {
            let v = Integer::from_str(s).map_err(|_| {
                D::Error::custom(format!("coordinate {} is not a decimal integer: {s:?}", j + 1))
            })?;
            coords.push(v);
        }
        SolutionTuple::new(coords).map_err(D::Error::custom)
    }
}

impl Serialize for Equation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        fn num<S: Serializer>(v: &Integer) -> std::result::Result<serde_json::Number, S::Error> {
            serde_json::Number::from_str(&v.to_string()).map_err(S::Error::custom)
        }
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("n", &self.n)?;
        let lambda: Vec<serde_json::Number> = self
            .lambda
            .iter()
            .map(|l| num::<S>(l))
            .collect::<std::result::Result<_, _>>()?;
        map.serialize_entry("lambda", &lambda)?;
        map.serialize_entry("a", &num::<S>(&self.a)?)?;
        map.serialize_entry("b", &num::<S>(&self.b)?)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for Equation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            lambda: Vec<serde_json::Number>,
            a: Option<serde_json::Number>,
            b: Option<serde_json::Number>,
        }
        fn int<E: serde::de::Error>(v: &serde_json::Number) -> std::result::Result<Integer, E> {
            Integer::from_str(&v.to_string())
                .map_err(|_| E::custom(format!("{v} is not an integer")))
        }
        let raw = Raw::deserialize(deserializer)?;
        let lambda = raw
            .lambda
            .iter()
            .map(int)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let a = match &raw.a {
            Some(v) => int(v)?,
            None => Integer::from(raw.n as u64),
        };
        let b = match &raw.b {
            Some(v) => int(v)?,
            None => Integer::new(),
        };
        Equation::new(raw.n, lambda, a, b).map_err(D::Error::custom)
    }
}

fn check_direction(i: usize, n: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::InvalidArgument {
            reason: format!("direction {i} outside 1..={n}"),
        });
    }
    Ok(())
}

/// All cofactor products `pᵢ = ∏_{j≠i} xⱼ`, computed with prefix/suffix
/// products in O(n) multiplications.
pub(crate) fn cofactor_products(coords: &[Integer]) -> Vec<Integer> {
    let n = coords.len();
    let mut prefix = vec![Integer::from(1u32); n + 1];
    for j in 0..n {
        prefix[j + 1] = Integer::from(&prefix[j] * &coords[j]);
    }
    let mut suffix = vec![Integer::from(1u32); n + 1];
    for j in (0..n).rev() {
        suffix[j] = Integer::from(&suffix[j + 1] * &coords[j]);
    }
    (0..n)
        .map(|j| Integer::from(&prefix[j] * &suffix[j + 1]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq4() -> Equation {
        Equation::markov_hurwitz_u64(&[0, 1, 2, 3]).unwrap()
    }

    fn tuple(coords: &[u64]) -> SolutionTuple {
        SolutionTuple::from_u64s(coords).unwrap()
    }

    #[test]
    fn residual_examples() {
        let eq = eq4();
        assert_eq!(eq.residual(&tuple(&[1, 1, 1, 1])).unwrap(), 0u32);
        // node two levels down the tree, via branches 1 then 2
        assert_eq!(eq.residual(&tuple(&[3, 14, 1, 1])).unwrap(), 0u32);
        assert_ne!(eq.residual(&tuple(&[2, 1, 1, 1])).unwrap(), 0u32);

        let markov = Equation::markov_hurwitz_u64(&[0, 0, 0]).unwrap();
        assert_eq!(markov.residual(&tuple(&[1, 1, 2])).unwrap(), 0u32);
    }

    #[test]
    fn residual_brute_force_small_triples() {
        // Independent check of the residual against a direct evaluation over
        // all triples with entries <= 2.
        let markov = Equation::markov_hurwitz_u64(&[0, 0, 0]).unwrap();
        for a in 1u64..=2 {
            for b in 1u64..=2 {
                for c in 1u64..=2 {
                    let direct = (a * a + b * b + c * c) as i64 - (3 * a * b * c) as i64;
                    let r = markov.residual(&tuple(&[a, b, c])).unwrap();
                    assert_eq!(r, direct);
                }
            }
        }
    }

    #[test]
    fn is_solution_examples() {
        let eq = eq4();
        assert!(eq.is_solution(&tuple(&[1, 1, 1, 1])).unwrap());
        assert!(eq.is_solution(&tuple(&[1, 4, 1, 1])).unwrap());
        assert!(!eq.is_solution(&tuple(&[1, 2, 3, 4])).unwrap());
    }

    #[test]
    fn mutate_examples() {
        let eq = eq4();
        assert_eq!(
            eq.mutate(&tuple(&[1, 1, 1, 1]), 2).unwrap(),
            tuple(&[1, 4, 1, 1])
        );
        assert_eq!(
            eq.mutate(&tuple(&[3, 1, 1, 1]), 3).unwrap(),
            tuple(&[3, 1, 17, 1])
        );
        let markov = Equation::markov_hurwitz_u64(&[0, 0, 0]).unwrap();
        let mutated = markov.mutate(&tuple(&[1, 1, 2]), 2).unwrap();
        assert_eq!(mutated, tuple(&[1, 5, 2]));
        assert_eq!(markov.residual(&mutated).unwrap(), 0u32);
    }

    #[test]
    fn mutate_rejects_non_solutions() {
        let eq = eq4();
        let e = eq.mutate(&tuple(&[1, 2, 3, 4]), 1).unwrap_err();
        assert_eq!(e.code(), "NotASolution");
    }

    #[test]
    fn mutate_unchecked_reports_non_integral_division() {
        let markov = Equation::markov_hurwitz_u64(&[0, 0, 0]).unwrap();
        // (1,1,3) is not a solution; mutating direction 3 divides 2 by 3.
        let e = markov.mutate_unchecked(&tuple(&[1, 1, 3]), 3).unwrap_err();
        assert_eq!(e.code(), "NonIntegralRoot");
    }

    #[test]
    fn dead_end_for_extended_family() {
        // a=0, b=3: at (1,1,1) the other root is (2-3)/1 = -1.
        let eq = Equation::new(
            3,
            vec![Integer::new(), Integer::new(), Integer::new()],
            0u32,
            3u32,
        )
        .unwrap();
        assert!(eq.is_solution(&tuple(&[1, 1, 1])).unwrap());
        let e = eq.mutate(&tuple(&[1, 1, 1]), 1).unwrap_err();
        assert_eq!(e.code(), "DeadEnd");
    }

    #[test]
    fn involution_on_examples() {
        let eq = eq4();
        for coords in [[1u64, 1, 1, 1], [3, 14, 1, 1], [1, 1, 5, 1]] {
            let x = tuple(&coords);
            for i in 1..=4 {
                let back = eq.mutate(&eq.mutate(&x, i).unwrap(), i).unwrap();
                assert_eq!(back, x);
            }
        }
    }

    #[test]
    fn vieta_sum_matches_division_route() {
        let eq = eq4();
        for coords in [[1u64, 1, 1, 1], [3, 14, 1, 1], [1, 4, 26, 1]] {
            let x = tuple(&coords);
            for i in 1..=4 {
                let y = eq.mutate(&x, i).unwrap();
                let total = Integer::from(&x.coords()[i - 1] + &y.coords()[i - 1]);
                assert_eq!(total, eq.vieta_sum(&x, i).unwrap());
            }
        }
    }

    #[test]
    fn argmax_examples() {
        assert_eq!(tuple(&[3, 14, 1, 1]).argmax(), 2);
        assert_eq!(tuple(&[1, 1, 1, 1]).argmax(), 1);
        assert_eq!(tuple(&[5, 2, 1]).argmax(), 1);
        let (dir, tie) = tuple(&[7, 7, 1]).argmax_with_tie();
        assert_eq!(dir, 1);
        assert!(tie);
    }

    #[test]
    fn descend_examples() {
        let eq = eq4();
        let limits = Limits::default();
        let d = eq.descend(&tuple(&[3, 14, 1, 1]), &limits).unwrap();
        assert_eq!(d.word.labels(), &[2, 1]);
        assert!(d.terminal().is_all_ones());
        assert_eq!(d.chain.len(), 3);

        let d = eq.descend(&tuple(&[1, 1, 1, 1]), &limits).unwrap();
        assert!(d.word.is_empty());
        assert_eq!(d.chain.len(), 1);

        let markov = Equation::markov_hurwitz_u64(&[0, 0, 0]).unwrap();
        let d = markov.descend(&tuple(&[1, 5, 2]), &limits).unwrap();
        assert_eq!(d.word.labels(), &[2, 3]);
        assert!(d.terminal().is_all_ones());
        for p in &d.chain {
            assert_eq!(markov.residual(p).unwrap(), 0u32);
        }
    }

    #[test]
    fn apply_word_examples() {
        let eq = eq4();
        let limits = Limits::default();
        let root = tuple(&[1, 1, 1, 1]);

        let chain = eq
            .apply_word(&root, &MutationWord::new(vec![4]).unwrap(), &limits)
            .unwrap();
        assert_eq!(chain.last().unwrap(), &tuple(&[1, 1, 1, 6]));

        let chain = eq
            .apply_word(&root, &MutationWord::empty(), &limits)
            .unwrap();
        assert_eq!(chain, vec![root.clone()]);

        let chain = eq
            .apply_word(&root, &MutationWord::new(vec![2, 1]).unwrap(), &limits)
            .unwrap();
        assert_eq!(chain.last().unwrap(), &tuple(&[18, 4, 1, 1]));
        assert!(chain.iter().all(|p| eq.is_solution(p).unwrap()));
    }

    #[test]
    fn apply_word_annotates_failing_step() {
        let eq = Equation::new(
            3,
            vec![Integer::new(), Integer::new(), Integer::new()],
            0u32,
            3u32,
        )
        .unwrap();
        let root = tuple(&[1, 1, 1]);
        let err = eq
            .apply_word(
                &root,
                &MutationWord::new(vec![1]).unwrap(),
                &Limits::default(),
            )
            .unwrap_err();
        match err {
            Error::StepFailed { step, source } => {
                assert_eq!(step, 0);
                assert_eq!(source.code(), "DeadEnd");
            }
            other => panic!("expected StepFailed, got {other:?}"),
        }
    }

    #[test]
    fn bit_cap_enforced_on_chains() {
        let eq = eq4();
        let limits = Limits {
            max_coord_bits: 16,
            max_chain_steps: 10_000,
        };
        let word = MutationWord::cyclic(4, 12);
        let err = eq
            .apply_word(&SolutionTuple::ones(4), &word, &limits)
            .unwrap_err();
        assert_eq!(err.code(), "ResourceLimit");
    }

    #[test]
    fn equation_json_round_trip() {
        let eq = eq4();
        let text = serde_json::to_string(&eq).unwrap();
        assert_eq!(text, r#"{"n":4,"lambda":[0,1,2,3],"a":4,"b":0}"#);
        let back: Equation = serde_json::from_str(&text).unwrap();
        assert_eq!(back, eq);
        // a and b default to n and 0 when omitted
        let short: Equation = serde_json::from_str(r#"{"n":3,"lambda":[0,0,0]}"#).unwrap();
        assert!(short.is_default_family());
    }

    #[test]
    fn tuple_json_uses_decimal_strings() {
        let x = tuple(&[3, 14, 1, 1]);
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(text, r#"["3","14","1","1"]"#);
        let back: SolutionTuple = serde_json::from_str(&text).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<SolutionTuple>(r#"["0","1"]"#).is_err());
    }
}
