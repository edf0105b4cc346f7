//! Empirical checks of the uniqueness conjecture and fundamental-solution
//! searches for the extended family.
//!
//! The conjecture is read literally: only tuples that are themselves sorted
//! non-increasingly participate, because the λ coefficients break permutation
//! symmetry; sorting an arbitrary tuple first would compare solutions of
//! different equations.

use crate::equation::{Equation, Limits, SolutionTuple};
use crate::error::{Error, Result};
use crate::tree::solutions_upto;
use rayon::prelude::*;
use rug::Integer;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

/// A pair of sorted solutions sharing their fixed (maximal) coordinate but
/// differing in the remaining coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub max_coordinate: Integer,
    pub tail_a: Vec<Integer>,
    pub tail_b: Vec<Integer>,
}

impl Serialize for Counterexample {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("max", &self.max_coordinate.to_string())?;
        let tail = |t: &[Integer]| t.iter().map(|v| v.to_string()).collect::<Vec<_>>();
        map.serialize_entry("tail_a", &tail(&self.tail_a))?;
        map.serialize_entry("tail_b", &tail(&self.tail_b))?;
        map.end()
    }
}

/// Outcome of a uniqueness sweep up to a bound.
#[derive(Clone, Debug)]
pub struct UniquenessReport {
    pub equation: Equation,
    pub bound: Integer,
    pub fixed_position: usize,
    pub groups_checked: usize,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed: Duration,
}

impl UniquenessReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// JSON per the report schema; pass `Duration::ZERO` as elapsed before
    /// serializing when byte-stable output matters.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

impl Serialize for UniquenessReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(5))?;
        map.serialize_entry("equation", &self.equation)?;
        map.serialize_entry("bound", &self.bound.to_string())?;
        map.serialize_entry("groups", &self.groups_checked)?;
        map.serialize_entry("counterexamples", &self.counterexamples)?;
        map.serialize_entry("elapsed_ms", &(self.elapsed.as_millis() as u64))?;
        map.end()
    }
}

/// Checks the uniqueness conjecture for the default family up to `bound`:
/// among solutions sorted non-increasingly, the first coordinate determines
/// the rest.
pub fn check_uniqueness(eq: &Equation, bound: &Integer, limits: &Limits) -> Result<UniquenessReport> {
    positional_uniqueness(eq, bound, 1, limits)
}

/// Same sweep with the fixed component at an arbitrary position: the fixed
/// coordinate must be the maximum and the remaining coordinates must be
/// non-increasing in their positions.
pub fn positional_uniqueness(
    eq: &Equation,
    bound: &Integer,
    fixed_position: usize,
    limits: &Limits,
) -> Result<UniquenessReport> {
    let n = eq.n();
    if fixed_position == 0 || fixed_position > n {
        return Err(Error::InvalidArgument {
            reason: format!("fixed position {fixed_position} outside 1..={n}"),
        });
    }
    let start = Instant::now();
    let solutions = solutions_upto(eq, bound, limits.max_coord_bits)?;

    let mut groups: BTreeMap<Integer, BTreeSet<Vec<Integer>>> = BTreeMap::new();
    for sol in &solutions {
        if !matches_pattern(sol, fixed_position) {
            continue;
        }
        let coords = sol.coords();
        let fixed = coords[fixed_position - 1].clone();
        let tail: Vec<Integer> = coords
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != fixed_position - 1)
            .map(|(_, v)| v.clone())
            .collect();
        groups.entry(fixed).or_default().insert(tail);
    }

    let mut counterexamples = Vec::new();
    for (max_coordinate, tails) in &groups {
        if tails.len() > 1 {
            let mut iter = tails.iter();
            let first = iter.next().expect("group is nonempty");
            for other in iter {
                // re-verify both members before reporting
                debug_assert!(verify_member(eq, max_coordinate, first, fixed_position));
                debug_assert!(verify_member(eq, max_coordinate, other, fixed_position));
                counterexamples.push(Counterexample {
                    max_coordinate: max_coordinate.clone(),
                    tail_a: first.clone(),
                    tail_b: other.clone(),
                });
            }
        }
    }
    // Counterexamples are re-verified as solutions at report time.
    for ce in &counterexamples {
        for tail in [&ce.tail_a, &ce.tail_b] {
            if !verify_member(eq, &ce.max_coordinate, tail, fixed_position) {
                return Err(Error::ConsistencyCheck {
                    what: "counterexample residual",
                    deviation: f64::NAN,
                });
            }
        }
    }
    Ok(UniquenessReport {
        equation: eq.clone(),
        bound: bound.clone(),
        fixed_position,
        groups_checked: groups.len(),
        counterexamples,
        elapsed: start.elapsed(),
    })
}

fn matches_pattern(sol: &SolutionTuple, fixed_position: usize) -> bool {
    let coords = sol.coords();
    let fixed = &coords[fixed_position - 1];
    if coords.iter().any(|c| c > fixed) {
        return false;
    }
    let rest: Vec<&Integer> = coords
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != fixed_position - 1)
        .map(|(_, v)| v)
        .collect();
    rest.windows(2).all(|w| w[0] >= w[1])
}

fn verify_member(eq: &Equation, fixed: &Integer, tail: &[Integer], fixed_position: usize) -> bool {
    let mut coords = tail.to_vec();
    coords.insert(fixed_position - 1, fixed.clone());
    match SolutionTuple::new(coords) {
        Ok(t) => eq.residual(&t).map(|r| r.cmp0() == std::cmp::Ordering::Equal).unwrap_or(false),
        Err(_) => false,
    }
}

/// Which descent rule defines a fundamental solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FundamentalCriterion {
    /// No strict decrease of the maximum via the argmax mutation.
    ArgmaxOnly,
    /// No strict decrease of the maximum via any single mutation.
    AnyDirection,
}

impl std::fmt::Display for FundamentalCriterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FundamentalCriterion::ArgmaxOnly => write!(f, "argmax"),
            FundamentalCriterion::AnyDirection => write!(f, "any-direction"),
        }
    }
}

/// Terminal points of descents from every in-box solution.
#[derive(Clone, Debug)]
pub struct FundamentalSet {
    pub equation: Equation,
    pub box_bound: u64,
    pub criterion: FundamentalCriterion,
    pub solutions: BTreeSet<SolutionTuple>,
    pub exhaustive_within_box: bool,
}

impl Serialize for FundamentalSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(5))?;
        map.serialize_entry("equation", &self.equation)?;
        map.serialize_entry("box_bound", &self.box_bound)?;
        map.serialize_entry("criterion", &self.criterion.to_string())?;
        map.serialize_entry("exhaustive_within_box", &self.exhaustive_within_box)?;
        struct Solutions<'a>(&'a BTreeSet<SolutionTuple>);
        impl Serialize for Solutions<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
                for s in self.0 {
                    seq.serialize_element(s)?;
                }
                seq.end()
            }
        }
        map.serialize_entry("solutions", &Solutions(&self.solutions))?;
        map.end()
    }
}

/// Scans every tuple with coordinates in `1..=box_bound`, keeps the
/// solutions, and descends each one to its terminal point. The scan is
/// exhaustive within the box; nothing is claimed beyond it.
pub fn find_fundamentals(
    eq: &Equation,
    box_bound: u64,
    criterion: FundamentalCriterion,
    limits: &Limits,
) -> Result<FundamentalSet> {
    if box_bound == 0 {
        return Err(Error::InvalidArgument {
            reason: "box bound must be at least 1".into(),
        });
    }
    let n = eq.n();
    let total = (box_bound as f64).powi(n as i32);
    if total > 2e9 {
        return Err(Error::ResourceLimit {
            what: "box tuples",
            got: total as u64,
            cap: 2_000_000_000,
        });
    }

    // Parallel over the first coordinate; merging into a set keeps the
    // result independent of scan order.
    let per_first: Vec<Result<BTreeSet<SolutionTuple>>> = (1..=box_bound)
        .into_par_iter()
        .map(|first| {
            let mut found = BTreeSet::new();
            let mut coords = vec![1u64; n];
            coords[0] = first;
            loop {
                let candidate = SolutionTuple::from_u64s(&coords)?;
                if eq.residual(&candidate)?.cmp0() == std::cmp::Ordering::Equal {
                    let terminal = descend_terminal(eq, &candidate, criterion, limits)?;
                    found.insert(terminal);
                }
                let mut pos = n;
                loop {
                    if pos == 1 {
                        return Ok(found);
                    }
                    pos -= 1;
                    if coords[pos] < box_bound {
                        coords[pos] += 1;
                        for slot in coords.iter_mut().skip(pos + 1) {
                            *slot = 1;
                        }
                        break;
                    }
                }
            }
        })
        .collect();

    let mut solutions = BTreeSet::new();
    for part in per_first {
        solutions.extend(part?);
    }
    Ok(FundamentalSet {
        equation: eq.clone(),
        box_bound,
        criterion,
        solutions,
        exhaustive_within_box: true,
    })
}

/// Descends to a terminal point under the chosen rule.
fn descend_terminal(
    eq: &Equation,
    x: &SolutionTuple,
    criterion: FundamentalCriterion,
    limits: &Limits,
) -> Result<SolutionTuple> {
    match criterion {
        FundamentalCriterion::ArgmaxOnly => Ok(eq.descend(x, limits)?.terminal().clone()),
        FundamentalCriterion::AnyDirection => {
            let mut cur = x.clone();
            let mut steps = 0usize;
            'outer: loop {
                if steps >= limits.max_chain_steps {
                    return Err(Error::ResourceLimit {
                        what: "descent steps",
                        got: steps as u64 + 1,
                        cap: limits.max_chain_steps as u64,
                    });
                }
                for dir in 1..=eq.n() {
                    let candidate = match eq.mutate_unchecked(&cur, dir) {
                        Ok(y) => y,
                        Err(Error::DeadEnd { .. }) => continue,
                        Err(e) => return Err(e),
                    };
                    if candidate.max_coord() < cur.max_coord() {
                        cur = candidate;
                        steps += 1;
                        continue 'outer;
                    }
                }
                return Ok(cur);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniqueness_for_classical_markov() {
        let markov = Equation::markov_hurwitz_u64(&[0, 0, 0]).unwrap();
        let report =
            check_uniqueness(&markov, &Integer::from(1000), &Limits::default()).unwrap();
        assert!(report.holds());
        assert!(report.groups_checked >= 5);
    }

    #[test]
    fn uniqueness_bound_one() {
        let markov = Equation::markov_hurwitz_u64(&[0, 0, 0]).unwrap();
        let report = check_uniqueness(&markov, &Integer::from(1), &Limits::default()).unwrap();
        assert_eq!(report.groups_checked, 1);
        assert!(report.holds());
    }

    #[test]
    fn positional_uniqueness_matches_for_symmetric_lambda() {
        let markov = Equation::markov_hurwitz_u64(&[0, 0, 0]).unwrap();
        let limits = Limits::default();
        let bound = Integer::from(1000);
        let pos1 = positional_uniqueness(&markov, &bound, 1, &limits).unwrap();
        let pos2 = positional_uniqueness(&markov, &bound, 2, &limits).unwrap();
        assert!(pos2.holds());
        assert_eq!(pos1.groups_checked, pos2.groups_checked);
    }

    #[test]
    fn positional_pattern_filter() {
        let sol = SolutionTuple::from_u64s(&[2, 5, 1]).unwrap();
        assert!(matches_pattern(&sol, 2)); // 5 is max, (2,1) non-increasing
        assert!(!matches_pattern(&sol, 1));
        let sol = SolutionTuple::from_u64s(&[1, 5, 2]).unwrap();
        assert!(!matches_pattern(&sol, 2)); // (1,2) increases
    }

    #[test]
    fn fundamentals_default_family_box5() {
        let limits = Limits::default();
        for lambda in [&[0u64, 0, 0][..], &[1, 1, 1], &[0, 1, 2]] {
            let eq = Equation::markov_hurwitz_u64(lambda).unwrap();
            let set =
                find_fundamentals(&eq, 5, FundamentalCriterion::ArgmaxOnly, &limits).unwrap();
            assert_eq!(set.solutions.len(), 1);
            assert!(set.solutions.contains(&SolutionTuple::ones(3)));
            assert!(set.exhaustive_within_box);
        }
    }

    #[test]
    fn fundamentals_scaled_markov() {
        // a=1, b=0: solutions are 3x the classical Markov triples, and the
        // unique fundamental in the box is (3,3,3).
        let eq = Equation::new(
            3,
            vec![Integer::new(), Integer::new(), Integer::new()],
            1u32,
            0u32,
        )
        .unwrap();
        let set =
            find_fundamentals(&eq, 10, FundamentalCriterion::ArgmaxOnly, &Limits::default())
                .unwrap();
        let expected: BTreeSet<SolutionTuple> =
            [SolutionTuple::from_u64s(&[3, 3, 3]).unwrap()].into();
        assert_eq!(set.solutions, expected);
    }

    #[test]
    fn fundamentals_with_positive_b() {
        // a=2, b=2 in a box of 8: fundamentals are the rotations of (1,1,2).
        let eq = Equation::new(
            3,
            vec![Integer::new(), Integer::new(), Integer::new()],
            2u32,
            2u32,
        )
        .unwrap();
        let set =
            find_fundamentals(&eq, 8, FundamentalCriterion::ArgmaxOnly, &Limits::default())
                .unwrap();
        let expected: BTreeSet<SolutionTuple> = [
            SolutionTuple::from_u64s(&[1, 1, 2]).unwrap(),
            SolutionTuple::from_u64s(&[1, 2, 1]).unwrap(),
            SolutionTuple::from_u64s(&[2, 1, 1]).unwrap(),
        ]
        .into();
        assert_eq!(set.solutions, expected);
    }

    #[test]
    fn fundamental_terminality() {
        // each reported fundamental: the argmax mutation does not shrink the
        // max (or dead-ends)
        let eq = Equation::new(
            3,
            vec![Integer::new(), Integer::new(), Integer::new()],
            2u32,
            2u32,
        )
        .unwrap();
        let set =
            find_fundamentals(&eq, 8, FundamentalCriterion::ArgmaxOnly, &Limits::default())
                .unwrap();
        for sol in &set.solutions {
            assert!(eq.residual(sol).unwrap().cmp0() == std::cmp::Ordering::Equal);
            let dir = sol.argmax();
            match eq.mutate_unchecked(sol, dir) {
                Ok(y) => assert!(y.max_coord() >= sol.max_coord()),
                Err(Error::DeadEnd { .. }) => {}
                Err(e) => panic!("unexpected error {e:?}"),
            }
        }
    }

    #[test]
    fn report_json_schema_keys() {
        let markov = Equation::markov_hurwitz_u64(&[0, 0, 0]).unwrap();
        let mut report =
            check_uniqueness(&markov, &Integer::from(100), &Limits::default()).unwrap();
        report.elapsed = Duration::ZERO;
        let json = report.to_json();
        let obj = json.as_object().unwrap();
        for key in ["equation", "bound", "groups", "counterexamples", "elapsed_ms"] {
            assert!(obj.contains_key(key), "missing key {key}");
        }
        assert!(obj["bound"].is_string());
        assert_eq!(obj["elapsed_ms"], 0);
    }
}
