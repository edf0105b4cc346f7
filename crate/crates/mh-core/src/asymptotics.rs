//! Ratio-number sequences, logarithms of huge solution coordinates, and the
//! asymptotic comparison with classical Euclid chains.
//!
//! Along any chain from the root, the newly mutated coordinate factors as
//! `k_t · ∏ (other coordinates)` for an exact rational `k_t` (the ratio
//! number). The sequence `k_t` is strictly increasing and bounded by
//! `k_λ = a + Σ λᵢ`, so taking coordinatewise logarithms turns the chain
//! into a deformed Euclid chain with shift schedule `log k_t`. Quotients of
//! the log-chain by the classical Euclid chain stabilize to a single scalar
//! `q` along generic words.

use crate::equation::{cofactor_products, Equation, Limits, SolutionTuple};
use crate::error::{Error, Result};
use crate::euclid::{euclid_chain, DeformationSchedule, EuclidPoint};
use crate::word::MutationWord;
use rug::{Integer, Rational};

/// Relative tolerance for the per-step log-mutation identity check.
const LOG_IDENTITY_RTOL: f64 = 1e-9;

/// The exact ratio number of one mutation: the new coordinate divided by the
/// product of the remaining coordinates of the pre-mutation point. The input
/// must be a solution.
pub fn ratio_number(eq: &Equation, x_before: &SolutionTuple, i: usize) -> Result<Rational> {
    let mutated = eq.mutate(x_before, i)?;
    let mut others = Integer::from(1u32);
    for (j, c) in x_before.coords().iter().enumerate() {
        if j != i - 1 {
            others *= c;
        }
    }
    Ok(Rational::from((
        mutated.coords()[i - 1].clone(),
        others,
    )))
}

/// Closed form for the same ratio number, derived by eliminating the sum of
/// squares through the equation itself:
/// `k = k_λ − (xᵢ² + Σ_{j≠i} λⱼ·∏_{m≠j} x_m) / ∏ x_m`.
/// Agrees with [`ratio_number`] exactly on solutions and never performs the
/// mutation, which makes it the independent cross-check route.
pub fn ratio_closed_form(eq: &Equation, x_before: &SolutionTuple, i: usize) -> Result<Rational> {
    if x_before.len() != eq.n() {
        return Err(Error::Dimension {
            expected: eq.n(),
            got: x_before.len(),
        });
    }
    if i == 0 || i > eq.n() {
        return Err(Error::InvalidArgument {
            reason: format!("direction {i} outside 1..={}", eq.n()),
        });
    }
    let coords = x_before.coords();
    let cof = cofactor_products(coords);
    let mut numerator = Integer::from(coords[i - 1].square_ref());
    for (j, (l, p)) in eq.lambda().iter().zip(&cof).enumerate() {
        if j != i - 1 {
            numerator += Integer::from(l * p);
        }
    }
    let full_product = Integer::from(&cof[0] * &coords[0]);
    let correction = Rational::from((numerator, full_product));
    Ok(Rational::from(eq.k_lambda()) - correction)
}

/// The ratio numbers along a chain, with the limit value `k_λ`.
#[derive(Clone, Debug)]
pub struct RatioSequence {
    pub values: Vec<Rational>,
    pub k_lambda: Integer,
    /// True when the chain started at the all-ones root; the strict
    /// monotonicity statement is only asserted for root starts.
    pub from_root: bool,
}

impl RatioSequence {
    /// `k_λ − k_t` for every step.
    pub fn gaps(&self) -> Vec<Rational> {
        self.values
            .iter()
            .map(|k| Rational::from(&self.k_lambda) - k.clone())
            .collect()
    }
}

/// Ratio numbers along `word` starting from the all-ones root.
pub fn ratio_sequence(eq: &Equation, word: &MutationWord, limits: &Limits) -> Result<RatioSequence> {
    let (_, ratios) = chain_with_ratios(eq, &SolutionTuple::ones(eq.n()), word, limits)?;
    Ok(RatioSequence {
        values: ratios,
        k_lambda: eq.k_lambda(),
        from_root: true,
    })
}

/// Ratio numbers along `word` from an arbitrary solution start.
pub fn ratio_sequence_from(
    eq: &Equation,
    x0: &SolutionTuple,
    word: &MutationWord,
    limits: &Limits,
) -> Result<RatioSequence> {
    let from_root = x0.is_all_ones();
    let (_, ratios) = chain_with_ratios(eq, x0, word, limits)?;
    Ok(RatioSequence {
        values: ratios,
        k_lambda: eq.k_lambda(),
        from_root,
    })
}

/// Shared chain driver: applies the word and extracts the exact ratio number
/// of each step, verifying the product form against the closed-form route.
fn chain_with_ratios(
    eq: &Equation,
    x0: &SolutionTuple,
    word: &MutationWord,
    limits: &Limits,
) -> Result<(Vec<SolutionTuple>, Vec<Rational>)> {
    let chain = eq.apply_word(x0, word, limits)?;
    let mut ratios = Vec::with_capacity(word.len());
    for (t, &dir) in word.labels().iter().enumerate() {
        let before = &chain[t];
        let after = &chain[t + 1];
        let mut others = Integer::from(1u32);
        for (j, c) in before.coords().iter().enumerate() {
            if j != dir - 1 {
                others *= c;
            }
        }
        let k_t = Rational::from((after.coords()[dir - 1].clone(), others.clone()));
        // Product form: the new coordinate must equal k_t times the product
        // of the remaining old coordinates, and the closed form must agree.
        let closed = ratio_closed_form(eq, before, dir)?;
        if closed != k_t {
            return Err(Error::ConsistencyCheck {
                what: "ratio number closed form",
                deviation: (Rational::from(&closed - &k_t)).to_f64(),
            });
        }
        ratios.push(k_t);
    }
    Ok((chain, ratios))
}

/// Natural logarithm of a positive big integer with relative error below
/// 1e-12: split off the top 64 significant bits as a mantissa in [1, 2) and
/// add `(bits − 1)·ln 2`.
pub fn big_log(v: &Integer) -> f64 {
    debug_assert!(*v >= 1u32, "big_log needs a positive integer");
    let bits = v.significant_bits();
    if bits <= 1 {
        return 0.0;
    }
    let take = bits.min(64);
    let top = Integer::from(v >> (bits - take))
        .to_u64()
        .expect("top 64 bits fit in u64");
    let mantissa = top as f64 / (1u64 << (take - 1)) as f64;
    mantissa.ln() + (bits as f64 - 1.0) * std::f64::consts::LN_2
}

/// Coordinatewise logarithm of a solution tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct LogPoint {
    pub values: Vec<f64>,
}

impl LogPoint {
    pub fn of(x: &SolutionTuple) -> Self {
        LogPoint {
            values: x.coords().iter().map(big_log).collect(),
        }
    }
}

/// A logarithmic chain together with its ratio numbers and the largest
/// relative deviation of the per-step deformed-Euclid identity.
#[derive(Clone, Debug)]
pub struct LogChain {
    pub points: Vec<LogPoint>,
    pub ratios: RatioSequence,
    pub max_identity_deviation: f64,
}

impl LogChain {
    pub fn last(&self) -> &LogPoint {
        self.points.last().expect("chain contains the start point")
    }
}

/// The logarithmic chain along `word` from the root. Each step is verified
/// against the deformed-Euclid identity
/// `log xᵢ' = Σ_{j≠i} log xⱼ + log k_t` within relative tolerance 1e-9.
pub fn log_chain(eq: &Equation, word: &MutationWord, limits: &Limits) -> Result<LogChain> {
    let (chain, ratios) = chain_with_ratios(eq, &SolutionTuple::ones(eq.n()), word, limits)?;
    let mut points = Vec::with_capacity(chain.len());
    points.push(LogPoint::of(&chain[0]));
    let mut max_dev = 0.0f64;
    for (t, &dir) in word.labels().iter().enumerate() {
        let prev = &points[t];
        let new_log = big_log(&chain[t + 1].coords()[dir - 1]);
        let mut expected = ratios[t].to_f64().ln();
        for (j, l) in prev.values.iter().enumerate() {
            if j != dir - 1 {
                expected += l;
            }
        }
        let deviation = (new_log - expected).abs() / new_log.abs().max(1.0);
        max_dev = max_dev.max(deviation);
        if deviation > LOG_IDENTITY_RTOL {
            return Err(Error::ConsistencyCheck {
                what: "logarithmic mutation identity",
                deviation,
            });
        }
        let mut values = prev.values.clone();
        values[dir - 1] = new_log;
        points.push(LogPoint { values });
    }
    Ok(LogChain {
        points,
        ratios: RatioSequence {
            values: ratios,
            k_lambda: eq.k_lambda(),
            from_root: true,
        },
        max_identity_deviation: max_dev,
    })
}

/// Coordinatewise quotient of the logarithmic chain by the classical Euclid
/// chain at a given depth.
#[derive(Clone, Debug)]
pub struct QEstimate {
    pub per_coordinate: Vec<f64>,
    pub spread: f64,
    pub q_mid: f64,
    pub depth: usize,
    /// Whether the word prefix passes the windowed genericity test.
    pub generic_prefix: bool,
}

/// Estimates the asymptotic scalar `q` at `depth` along `word`. Euclid
/// coordinates from the all-ones start are always at least 1, so the
/// quotients are well defined; at the root they are 0/1 = 0 by convention.
pub fn q_estimate(
    eq: &Equation,
    word: &MutationWord,
    depth: usize,
    limits: &Limits,
) -> Result<QEstimate> {
    if depth > word.len() {
        return Err(Error::InvalidArgument {
            reason: format!("depth {depth} exceeds word length {}", word.len()),
        });
    }
    let prefix = word.prefix(depth);
    let logs = log_chain(eq, &prefix, limits)?;
    let euclid = euclid_chain(
        &EuclidPoint::ones(eq.n()),
        &prefix,
        &DeformationSchedule::classical(),
    )?;
    let e_last = euclid.last().to_f64s();
    let l_last = &logs.last().values;
    let per_coordinate: Vec<f64> = l_last
        .iter()
        .zip(&e_last)
        .map(|(l, e)| l / e)
        .collect();
    let lo = per_coordinate.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = per_coordinate
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(QEstimate {
        per_coordinate,
        spread: hi - lo,
        q_mid: (hi + lo) / 2.0,
        depth,
        generic_prefix: prefix.is_generic_windowed(eq.n(), MutationWord::default_window(eq.n())),
    })
}

/// One row of a convergence report.
#[derive(Clone, Debug)]
pub struct ReportRow {
    pub step: usize,
    pub direction: usize,
    /// Exact ratio number k_t.
    pub ratio: Rational,
    /// Exact gap k_λ − k_t.
    pub gap: Rational,
    /// Length of the total interval of the log-comparison tuple over the
    /// n−1 entries not mutated at this step.
    pub interval_excl: f64,
    /// Spread of the q-quotients over all n entries.
    pub quotient_spread: f64,
}

/// Step-by-step convergence diagnostics along a word from the root.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub k_lambda: Integer,
    pub rows: Vec<ReportRow>,
}

pub fn convergence_report(
    eq: &Equation,
    word: &MutationWord,
    depth: usize,
    limits: &Limits,
) -> Result<ConvergenceReport> {
    if depth > word.len() {
        return Err(Error::InvalidArgument {
            reason: format!("depth {depth} exceeds word length {}", word.len()),
        });
    }
    let prefix = word.prefix(depth);
    let logs = log_chain(eq, &prefix, limits)?;
    let euclid = euclid_chain(
        &EuclidPoint::ones(eq.n()),
        &prefix,
        &DeformationSchedule::classical(),
    )?;
    let k_lambda = eq.k_lambda();
    let mut rows = Vec::with_capacity(depth);
    for (t, &dir) in prefix.labels().iter().enumerate() {
        let ratio = logs.ratios.values[t].clone();
        let gap = Rational::from(&k_lambda) - ratio.clone();
        let e = euclid.points[t + 1].to_f64s();
        let l = &logs.points[t + 1].values;
        let quotients: Vec<f64> = l.iter().zip(&e).map(|(a, b)| a / b).collect();
        let mut lo_all = f64::INFINITY;
        let mut hi_all = f64::NEG_INFINITY;
        let mut lo_excl = f64::INFINITY;
        let mut hi_excl = f64::NEG_INFINITY;
        for (j, q) in quotients.iter().enumerate() {
            lo_all = lo_all.min(*q);
            hi_all = hi_all.max(*q);
            if j != dir - 1 {
                lo_excl = lo_excl.min(*q);
                hi_excl = hi_excl.max(*q);
            }
        }
        rows.push(ReportRow {
            step: t + 1,
            direction: dir,
            ratio,
            gap,
            interval_excl: hi_excl - lo_excl,
            quotient_spread: hi_all - lo_all,
        });
    }
    Ok(ConvergenceReport { k_lambda, rows })
}
