//! Classical and k-deformed n-branched Euclid chains, comparison tuples, and
//! the interval machinery used to prove their asymptotic agreement.
//!
//! Everything here is exact rational arithmetic. The boundedness and
//! sandwich statements are algebraic identities, and the tests assert them
//! to exact equality; floating point would demote them to approximations.

use crate::error::{Error, Result};
use crate::word::MutationWord;
use rug::{Integer, Rational};

/// A point of a (possibly deformed) Euclid tree. Coordinates are exact
/// rationals; they are integers whenever the start point and every shift are.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EuclidPoint {
    coords: Vec<Rational>,
}

impl EuclidPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidPoint {
                reason: "a Euclid point needs at least two coordinates".into(),
            });
        }
        if let Some(bad) = coords.iter().position(|c| *c < 0) {
            return Err(Error::InvalidPoint {
                reason: format!("coordinate {} is negative", bad + 1),
            });
        }
        Ok(EuclidPoint { coords })
    }

    pub fn from_u64s(coords: &[u64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn from_integers(coords: &[Integer]) -> Result<Self> {
        Self::new(coords.iter().map(Rational::from).collect())
    }

    pub fn ones(n: usize) -> Self {
        EuclidPoint {
            coords: vec![Rational::from(1u32); n],
        }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.coords.iter().all(|c| *c > 0)
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.to_f64()).collect()
    }
}

impl std::fmt::Display for EuclidPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Right-shift parameters for a deformed chain, together with the declared
/// bounds `k_a <= k_t <= k_c` (with `k_a >= 0`).
#[derive(Clone, Debug)]
pub struct DeformationSchedule {
    values: ScheduleValues,
    k_a: Rational,
    k_c: Rational,
}

#[derive(Clone, Debug)]
enum ScheduleValues {
    Constant(Rational),
    Sequence(Vec<Rational>),
}

impl DeformationSchedule {
    /// Constant shift; `k_a = k_c = k`.
    pub fn constant(k: impl Into<Rational>) -> Result<Self> {
        let k = k.into();
        if k < 0 {
            return Err(Error::InvalidArgument {
                reason: "deformation parameter must be nonnegative".into(),
            });
        }
        Ok(DeformationSchedule {
            k_a: k.clone(),
            k_c: k.clone(),
            values: ScheduleValues::Constant(k),
        })
    }

    /// The classical tree: constant shift zero.
    pub fn classical() -> Self {
        Self::constant(Rational::new()).expect("zero is a valid shift")
    }

    /// Per-step shifts; bounds are taken as the extrema of the values.
    pub fn sequence(values: Vec<Rational>) -> Result<Self> {
        if let Some(bad) = values.iter().position(|k| *k < 0) {
            return Err(Error::InvalidArgument {
                reason: format!("shift {} is negative", bad + 1),
            });
        }
        let k_a = values.iter().min().cloned().unwrap_or_default();
        let k_c = values.iter().max().cloned().unwrap_or_default();
        Ok(DeformationSchedule {
            values: ScheduleValues::Sequence(values),
            k_a,
            k_c,
        })
    }

    pub fn k_a(&self) -> &Rational {
        &self.k_a
    }

    pub fn k_c(&self) -> &Rational {
        &self.k_c
    }

    /// The shift for step `t` (0-based). Constant schedules never run out.
    pub fn value_at(&self, t: usize) -> Result<Rational> {
        match &self.values {
            ScheduleValues::Constant(k) => Ok(k.clone()),
            ScheduleValues::Sequence(values) => {
                values.get(t).cloned().ok_or(Error::ScheduleExhausted {
                    needed: t + 1,
                    available: values.len(),
                })
            }
        }
    }
}

/// Replaces coordinate `i` (1-based) by the sum of the others plus `k`.
pub fn euclid_mutate(x: &EuclidPoint, i: usize, k: &Rational) -> Result<EuclidPoint> {
    let n = x.len();
    if i == 0 || i > n {
        return Err(Error::InvalidArgument {
            reason: format!("direction {i} outside 1..={n}"),
        });
    }
    let mut sum = k.clone();
    for (j, c) in x.coords.iter().enumerate() {
        if j != i - 1 {
            sum += c;
        }
    }
    let mut coords = x.coords.clone();
    coords[i - 1] = sum;
    Ok(EuclidPoint { coords })
}

/// A Euclid chain plus the sequence of newly changed coordinates.
#[derive(Clone, Debug)]
pub struct EuclidChain {
    pub points: Vec<EuclidPoint>,
    /// The value written at each step (the 𝔢-sequence).
    pub newly_changed: Vec<Rational>,
}

impl EuclidChain {
    pub fn last(&self) -> &EuclidPoint {
        self.points.last().expect("chain contains the start point")
    }
}

/// Runs the mutation chain along `word`, drawing shifts from the schedule.
pub fn euclid_chain(
    x0: &EuclidPoint,
    word: &MutationWord,
    schedule: &DeformationSchedule,
) -> Result<EuclidChain> {
    word.validate_for(x0.len())?;
    let mut points = Vec::with_capacity(word.len() + 1);
    let mut newly_changed = Vec::with_capacity(word.len());
    points.push(x0.clone());
    let mut cur = x0.clone();
    for (t, &dir) in word.labels().iter().enumerate() {
        let k = schedule.value_at(t)?;
        let next = euclid_mutate(&cur, dir, &k)?;
        newly_changed.push(next.coords[dir - 1].clone());
        points.push(next.clone());
        cur = next;
    }
    Ok(EuclidChain {
        points,
        newly_changed,
    })
}

/// Coordinatewise quotients of two chains at the same tree position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonTuple {
    values: Vec<Rational>,
}

impl ComparisonTuple {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidPoint {
                reason: "a comparison tuple needs at least two entries".into(),
            });
        }
        Ok(ComparisonTuple { values })
    }

    pub fn constant(n: usize, value: impl Into<Rational>) -> Self {
        ComparisonTuple {
            values: vec![value.into(); n],
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> &Rational {
        self.values.iter().min().expect("tuple is nonempty")
    }

    pub fn max(&self) -> &Rational {
        self.values.iter().max().expect("tuple is nonempty")
    }
}

impl std::fmt::Display for ComparisonTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `l_j = y_j / x_j`, fully reduced. `x` must be strictly positive
/// coordinatewise.
pub fn comparison_tuple(y: &EuclidPoint, x: &EuclidPoint) -> Result<ComparisonTuple> {
    if y.len() != x.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: y.len(),
        });
    }
    let mut values = Vec::with_capacity(x.len());
    for (j, (yj, xj)) in y.coords.iter().zip(&x.coords).enumerate() {
        if xj.cmp0() == std::cmp::Ordering::Equal {
            return Err(Error::DivisionByZero { index: j + 1 });
        }
        values.push(Rational::from(yj / xj));
    }
    ComparisonTuple::new(values)
}

/// The induced mutation in the comparison tree: entry `i` becomes the
/// `x`-weighted average of the other entries plus the right-shift `k / S_i`,
/// where `x` is the classical point before the step and `S_i` the sum of its
/// other coordinates.
pub fn comparison_mutate(
    l: &ComparisonTuple,
    x_before: &EuclidPoint,
    i: usize,
    k: &Rational,
) -> Result<ComparisonTuple> {
    let n = l.len();
    if x_before.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: x_before.len(),
        });
    }
    if i == 0 || i > n {
        return Err(Error::InvalidArgument {
            reason: format!("direction {i} outside 1..={n}"),
        });
    }
    let mut s_i = Rational::new();
    for (j, xj) in x_before.coords.iter().enumerate() {
        if j != i - 1 {
            s_i += xj;
        }
    }
    if s_i.cmp0() == std::cmp::Ordering::Equal {
        return Err(Error::DivisionByZero { index: i });
    }
    let mut acc = k.clone();
    for (j, (xj, lj)) in x_before.coords.iter().zip(&l.values).enumerate() {
        if j != i - 1 {
            acc += Rational::from(xj * lj);
        }
    }
    acc /= &s_i;
    let mut values = l.values.clone();
    values[i - 1] = acc;
    ComparisonTuple::new(values)
}

/// The interval spanned by comparison entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl TotalInterval {
    pub fn length(&self) -> Rational {
        Rational::from(&self.hi - &self.lo)
    }

    pub fn contains(&self, other: &TotalInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl std::fmt::Display for TotalInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Interval over all `n` entries; this is the variant used by convergence
/// reports.
pub fn total_interval(l: &ComparisonTuple) -> TotalInterval {
    TotalInterval {
        lo: l.min().clone(),
        hi: l.max().clone(),
    }
}

/// Interval over the `n - 1` entries other than `i`, as used when describing
/// a single mutation step.
pub fn total_interval_excluding(l: &ComparisonTuple, i: usize) -> Result<TotalInterval> {
    let n = l.len();
    if i == 0 || i > n {
        return Err(Error::InvalidArgument {
            reason: format!("direction {i} outside 1..={n}"),
        });
    }
    let rest: Vec<&Rational> = l
        .values
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i - 1)
        .map(|(_, v)| v)
        .collect();
    let lo = (*rest.iter().min().expect("n >= 2")).clone();
    let hi = (*rest.iter().max().expect("n >= 2")).clone();
    Ok(TotalInterval { lo, hi })
}

/// The auxiliary tuple `u_j = l_j + k / ((n-2)·x_j)`. Evolving `l` with
/// constant shift `k` makes `u` follow exactly the shift-free comparison
/// rule, which is the engine behind the boundedness argument.
pub fn auxiliary_tuple(
    l: &ComparisonTuple,
    x: &EuclidPoint,
    k: &Rational,
) -> Result<ComparisonTuple> {
    let n = l.len();
    if n < 3 {
        return Err(Error::InvalidArgument {
            reason: "auxiliary tuple needs n >= 3".into(),
        });
    }
    if x.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: x.len(),
        });
    }
    let mut values = Vec::with_capacity(n);
    for (j, (lj, xj)) in l.values.iter().zip(&x.coords).enumerate() {
        if xj.cmp0() == std::cmp::Ordering::Equal {
            return Err(Error::DivisionByZero { index: j + 1 });
        }
        let denom = Rational::from(xj * &Rational::from(n as u64 - 2));
        values.push(Rational::from(lj + &Rational::from(k / &denom)));
    }
    ComparisonTuple::new(values)
}

/// Companion data for a varying-shift chain with `k_t` in `[k_a, k_c]`: the
/// two constant-parameter chains both start at the current comparison point;
/// `lower` is evolved by the caller with shift `k_a`, `upper` with `k_c`.
/// The auxiliary tuples of the companions (initialized here) evolve by the
/// shift-free rule and sandwich the varying chain.
#[derive(Clone, Debug)]
pub struct EnvelopePair {
    pub lower: ComparisonTuple,
    pub upper: ComparisonTuple,
    pub lower_aux: ComparisonTuple,
    pub upper_aux: ComparisonTuple,
}

pub fn envelope_tuples(
    l: &ComparisonTuple,
    x: &EuclidPoint,
    k_a: &Rational,
    k_c: &Rational,
) -> Result<EnvelopePair> {
    if *k_a < 0 || k_a > k_c {
        return Err(Error::InvalidArgument {
            reason: "need 0 <= k_a <= k_c".into(),
        });
    }
    Ok(EnvelopePair {
        lower: l.clone(),
        upper: l.clone(),
        lower_aux: auxiliary_tuple(l, x, k_a)?,
        upper_aux: auxiliary_tuple(l, x, k_c)?,
    })
}

/// Re-indexing for a word whose direction `frozen` never occurs again:
/// drops coordinate `frozen`, relabels directions above it down by one, and
/// folds the frozen value into the shift. The newly-changed sequence of the
/// reduced chain equals that of the original tail.
pub fn reduce_frozen_direction(
    point: &EuclidPoint,
    tail: &MutationWord,
    frozen: usize,
    k: &Rational,
) -> Result<(EuclidPoint, MutationWord, Rational)> {
    let n = point.len();
    if frozen == 0 || frozen > n {
        return Err(Error::InvalidArgument {
            reason: format!("direction {frozen} outside 1..={n}"),
        });
    }
    if n < 3 {
        return Err(Error::InvalidArgument {
            reason: "cannot reduce below two coordinates".into(),
        });
    }
    tail.validate_for(n)?;
    if let Some(pos) = tail.labels().iter().position(|&w| w == frozen) {
        return Err(Error::InvalidWord {
            position: pos,
            reason: format!("direction {frozen} is not frozen in the tail"),
        });
    }
    let mut coords = point.coords.clone();
    let frozen_value = coords.remove(frozen - 1);
    let reduced_point = EuclidPoint { coords };
    let relabeled: Vec<usize> = tail
        .labels()
        .iter()
        .map(|&w| if w > frozen { w - 1 } else { w })
        .collect();
    let reduced_word = MutationWord::new(relabeled)?;
    let reduced_k = Rational::from(k + &frozen_value);
    Ok((reduced_point, reduced_word, reduced_k))
}
