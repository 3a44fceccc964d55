//! The cyclic copying process that governs WP message dynamics on free
//! cycles, as a standalone simulator plus an exact small-ring oracle.
//!
//! One round: draw a uniformly random permutation of the L ring positions
//! and visit them in that order; the visited position copies the current
//! value of its right neighbour (index + 1 mod L), so copies made earlier
//! in the round feed later ones. The all-zero and all-one states are
//! absorbing; the absorption time T counts rounds until one is reached.
//!
//! For rings up to length [`EXACT_MAX_L`] the full 2^L-state Markov chain
//! is built by enumerating all L! permutations per state, giving exact
//! rational absorption times and tail probabilities. Lengths up to
//! [`APPROX_MAX_L`] get a Monte-Carlo-marginalized transition matrix
//! instead, explicitly labeled approximate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::seeds;

/// Largest ring length with an exact permutation-enumerated chain.
pub const EXACT_MAX_L: usize = 6;
/// Largest ring length the oracle accepts at all; rows beyond the exact
/// range are Monte-Carlo-marginalized.
pub const APPROX_MAX_L: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycleError {
    #[error("ring length {0} is below the minimum of 2")]
    LengthTooSmall(usize),
    #[error("ring length {0} exceeds the oracle maximum of {APPROX_MAX_L}")]
    LengthTooLarge(usize),
    #[error("ring values must be 0 or 1")]
    BadBit,
}

/// State of the ring: L binary cells, positions mod L.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingState {
    bits: Vec<u8>,
}

impl RingState {
    pub fn new(bits: Vec<u8>) -> Result<Self, CycleError> {
        if bits.len() < 2 {
            return Err(CycleError::LengthTooSmall(bits.len()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(CycleError::BadBit);
        }
        Ok(RingState { bits })
    }

    /// Builds the state whose cell `i` is bit `i` of `mask`.
    pub fn from_mask(l: usize, mask: u64) -> Self {
        assert!((2..=63).contains(&l));
        RingState { bits: (0..l).map(|i| (mask >> i & 1) as u8).collect() }
    }

    pub fn random(l: usize, rng: &mut impl Rng) -> Self {
        assert!(l >= 2);
        RingState { bits: (0..l).map(|_| rng.random_bool(0.5) as u8).collect() }
    }

    /// Two-interval configuration: `ones` one-cells starting at `offset`,
    /// zeros elsewhere.
    pub fn two_interval(l: usize, ones: usize, offset: usize) -> Self {
        assert!(l >= 2 && ones >= 1 && ones < l);
        let mut bits = vec![0u8; l];
        for i in 0..ones {
            bits[(offset + i) % l] = 1;
        }
        RingState { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn mask(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &b)| m | (b as u64) << i)
    }

    pub fn is_absorbed(&self) -> bool {
        self.bits.iter().all(|&b| b == 0) || self.bits.iter().all(|&b| b == 1)
    }

    /// Number of maximal constant runs around the ring (an absorbed state
    /// counts as a single run).
    pub fn run_count(&self) -> usize {
        let l = self.len();
        let boundaries = (0..l).filter(|&i| self.bits[i] != self.bits[(i + 1) % l]).count();
        boundaries.max(1)
    }

    fn apply_order(&mut self, order: &[usize]) {
        let l = self.len();
        for &p in order {
            self.bits[p] = self.bits[(p + 1) % l];
        }
    }

    pub fn step_in_place(&mut self, rng: &mut impl Rng) {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.shuffle(rng);
        self.apply_order(&order);
    }

    /// One round of the copying process under a fresh random permutation.
    pub fn step(&self, rng: &mut impl Rng) -> RingState {
        let mut next = self.clone();
        next.step_in_place(rng);
        next
    }
}

/// Rounds until absorption, or None if `max_steps` rounds pass first.
/// An already absorbed state reports 0.
pub fn run_until_absorbed(
    state: &mut RingState,
    max_steps: u64,
    rng: &mut impl Rng,
) -> Option<u64> {
    assert!(max_steps >= 1);
    for t in 0..=max_steps {
        if state.is_absorbed() {
            return Some(t);
        }
        if t == max_steps {
            break;
        }
        state.step_in_place(rng);
    }
    None
}

/// Summary of Monte Carlo absorption trials from uniform random starts.
#[derive(Clone, Debug, Serialize)]
pub struct AbsorptionStats {
    pub l: usize,
    pub trials: u64,
    pub timeouts: u64,
    pub mean: f64,
    pub std_dev: f64,
    /// p50 / p90 / p99 of the absorbed samples.
    pub quantiles: [u64; 3],
    /// Fraction of absorbed trials that ended all-ones.
    pub all_ones_fraction: f64,
    #[serde(skip)]
    pub samples: Vec<u64>,
}

fn absorption_trial(l: usize, seed: u64, max_steps: u64) -> (Option<u64>, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = RingState::random(l, &mut rng);
    let t = run_until_absorbed(&mut state, max_steps, &mut rng);
    (t, state.bits()[0] == 1)
}

fn summarize(l: usize, outcomes: Vec<(Option<u64>, bool)>) -> AbsorptionStats {
    let trials = outcomes.len() as u64;
    let mut samples: Vec<u64> = Vec::with_capacity(outcomes.len());
    let mut ones = 0u64;
    let mut timeouts = 0u64;
    for (t, ended_ones) in outcomes {
        match t {
            Some(t) => {
                samples.push(t);
                if ended_ones {
                    ones += 1;
                }
            }
            None => timeouts += 1,
        }
    }
    let count = samples.len().max(1) as f64;
    let mean = samples.iter().sum::<u64>() as f64 / count;
    let var = samples.iter().map(|&t| (t as f64 - mean).powi(2)).sum::<f64>() / count;
    let mut sorted = samples.clone();
    sorted.sort_unstable();
    let q = |p: f64| {
        if sorted.is_empty() {
            0
        } else {
            sorted[((sorted.len() - 1) as f64 * p) as usize]
        }
    };
    AbsorptionStats {
        l,
        trials,
        timeouts,
        mean,
        std_dev: var.sqrt(),
        quantiles: [q(0.5), q(0.9), q(0.99)],
        all_ones_fraction: ones as f64 / samples.len().max(1) as f64,
        samples,
    }
}

/// Runs `trials` independent absorption trials from uniform random starts.
/// Each trial derives its own RNG from the master seed, so parallel and
/// sequential execution produce identical statistics.
pub fn sample_absorption(
    l: usize,
    trials: u64,
    master_seed: u64,
    max_steps: u64,
) -> AbsorptionStats {
    #[cfg(feature = "parallel")]
    let outcomes: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|i| absorption_trial(l, seeds::derive(master_seed, &[i]), max_steps))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<_> = (0..trials)
        .map(|i| absorption_trial(l, seeds::derive(master_seed, &[i]), max_steps))
        .collect();
    summarize(l, outcomes)
}

/// Sequential twin of [`sample_absorption`]; bit-identical results.
pub fn sample_absorption_seq(
    l: usize,
    trials: u64,
    master_seed: u64,
    max_steps: u64,
) -> AbsorptionStats {
    let outcomes: Vec<_> = (0..trials)
        .map(|i| absorption_trial(l, seeds::derive(master_seed, &[i]), max_steps))
        .collect();
    summarize(l, outcomes)
}

/// Ring with per-cell colors, used to track one interval through the
/// copying dynamics. Copying moves (value, color) pairs together.
#[derive(Clone, Debug)]
pub struct ColoredRing {
    values: Vec<u8>,
    colors: Vec<u32>,
}

impl ColoredRing {
    /// Assigns one color per maximal constant run of the state.
    /// The state must not be absorbed.
    pub fn from_state(state: &RingState) -> Self {
        assert!(!state.is_absorbed(), "colored tracking needs at least two runs");
        let l = state.len();
        let bits = state.bits();
        // start coloring at a run boundary so every run gets one color
        let start = (0..l)
            .find(|&i| bits[(i + l - 1) % l] != bits[i])
            .expect("non-absorbed state has a boundary");
        let mut colors = vec![0u32; l];
        let mut color = 0u32;
        for k in 0..l {
            let i = (start + k) % l;
            if k > 0 && bits[i] != bits[(i + l - 1) % l] {
                color += 1;
            }
            colors[i] = color;
        }
        ColoredRing { values: bits.to_vec(), colors }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn color_of(&self, pos: usize) -> u32 {
        self.colors[pos]
    }

    pub fn color_count(&self, color: u32) -> usize {
        self.colors.iter().filter(|&&c| c == color).count()
    }

    /// Leftmost cell of a (cyclically contiguous) color: the member whose
    /// left neighbour has a different color. None when the color is dead
    /// or fills the ring.
    pub fn left_endpoint(&self, color: u32) -> Option<usize> {
        let l = self.len();
        (0..l).find(|&p| self.colors[p] == color && self.colors[(p + l - 1) % l] != color)
    }

    fn apply_order(&mut self, order: &[usize]) {
        let l = self.len();
        for &p in order {
            let src = (p + 1) % l;
            self.values[p] = self.values[src];
            self.colors[p] = self.colors[src];
        }
    }

    pub fn step_in_place(&mut self, rng: &mut impl Rng) {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.shuffle(rng);
        self.apply_order(&order);
    }
}

/// Tracks the length of the colored interval containing `tracked_pos`
/// through the dynamics: the series starts at X_0 and stops once the
/// interval dies (length 0), fills the ring (length L), or `max_steps`
/// rounds pass.
pub fn interval_length_series(
    start: &RingState,
    tracked_pos: usize,
    max_steps: u64,
    rng: &mut impl Rng,
) -> Vec<usize> {
    let mut ring = ColoredRing::from_state(start);
    let tracked = ring.color_of(tracked_pos);
    let l = ring.len();
    let mut series = vec![ring.color_count(tracked)];
    for _ in 0..max_steps {
        let last = *series.last().expect("nonempty");
        if last == 0 || last == l {
            break;
        }
        ring.step_in_place(rng);
        series.push(ring.color_count(tracked));
    }
    series
}

/// Pooled one-step statistics of the tracked interval length, bucketed by
/// the current length.
#[derive(Clone, Debug, Serialize)]
pub struct DriftStat {
    pub length: usize,
    pub visits: usize,
    pub mean_step: f64,
    pub std_step: f64,
}

impl DriftStat {
    /// |mean| as a multiple of the standard error.
    pub fn drift_sigmas(&self) -> f64 {
        if self.visits == 0 || self.std_step == 0.0 {
            return 0.0;
        }
        self.mean_step.abs() / (self.std_step / (self.visits as f64).sqrt())
    }
}

/// Gathers interval-length transitions from two-interval starts (uniform
/// interval length and rotation) and buckets them by the current length.
pub fn interval_drift_stats(
    l: usize,
    runs: u64,
    master_seed: u64,
    max_steps: u64,
) -> Vec<DriftStat> {
    let mut transitions: Vec<Vec<f64>> = vec![Vec::new(); l];
    for run in 0..runs {
        let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(master_seed, &[run]));
        let ones = rng.random_range(1..l);
        let offset = rng.random_range(0..l);
        let start = RingState::two_interval(l, ones, offset);
        let tracked_pos = offset; // a one-cell
        let series = interval_length_series(&start, tracked_pos, max_steps, &mut rng);
        for w in series.windows(2) {
            transitions[w[0]].push(w[1] as f64 - w[0] as f64);
        }
    }
    transitions
        .into_iter()
        .enumerate()
        .filter(|(_, steps)| !steps.is_empty())
        .map(|(length, steps)| {
            let nf = steps.len() as f64;
            let mean = steps.iter().sum::<f64>() / nf;
            let var = steps.iter().map(|&s| (s - mean).powi(2)).sum::<f64>() / nf;
            DriftStat { length, visits: steps.len(), mean_step: mean, std_step: var.sqrt() }
        })
        .collect()
}

/// One-round advance statistics of the zero-interval's left endpoint in a
/// two-interval configuration.
#[derive(Clone, Debug, Serialize)]
pub struct ShiftLawStat {
    pub advance_at_least: usize,
    pub observed: f64,
    pub expected: f64,
    pub trials: u64,
}

/// Probability that the zero interval's left endpoint advances at least
/// `j` in one round, in a two-interval state with `ones` one-cells:
/// 1/j! - 1/((L - ones) + j)!.
pub fn zero_front_advance_probability(l: usize, ones: usize, j: usize) -> f64 {
    1.0 / factorial_f64(j) - 1.0 / factorial_f64(l - ones + j)
}

fn factorial_f64(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

fn factorial_u64(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Advance of the zero color's left endpoint over one round, measured by
/// color tracking. Death of the zero color counts as no advance;
/// saturation counts as eating the whole one-interval.
fn zero_front_advance(before: &ColoredRing, after: &ColoredRing, ones: usize) -> usize {
    let l = before.len();
    let zero_color = (0..l)
        .find(|&p| before.values[p] == 0)
        .map(|p| before.color_of(p))
        .expect("two-interval state has zeros");
    let old_left = before.left_endpoint(zero_color).expect("interval alive");
    let count = after.color_count(zero_color);
    if count == 0 {
        return 0;
    }
    if count == l {
        return ones;
    }
    let new_left = after.left_endpoint(zero_color).expect("alive, not full");
    let disp = (old_left + l - new_left) % l;
    // the front can eat at most the whole one-interval; anything larger is
    // a wrapped-around retreat
    if disp <= ones {
        disp
    } else {
        0
    }
}

/// Monte Carlo estimate of the advance law from the two-interval state
/// with `ones` one-cells, for advances 1..=max_j.
pub fn zero_front_advance_stats(
    l: usize,
    ones: usize,
    max_j: usize,
    trials: u64,
    master_seed: u64,
) -> Vec<ShiftLawStat> {
    assert!(ones >= 1 && ones < l);
    let mut at_least = vec![0u64; max_j + 1];
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(master_seed, &[trial]));
        let start = RingState::two_interval(l, ones, 0);
        let before = ColoredRing::from_state(&start);
        let mut after = before.clone();
        after.step_in_place(&mut rng);
        let adv = zero_front_advance(&before, &after, ones);
        for j in 1..=max_j.min(adv) {
            at_least[j] += 1;
        }
    }
    (1..=max_j)
        .map(|j| ShiftLawStat {
            advance_at_least: j,
            observed: at_least[j] as f64 / trials as f64,
            expected: zero_front_advance_probability(l, ones, j),
            trials,
        })
        .collect()
}

/// Exact Markov chain of the process on 2^L states, transition rows
/// enumerated over all L! permutations.
pub struct ExactChain {
    pub l: usize,
    transient: Vec<u64>,
    index_of: Vec<Option<usize>>,
    /// counts[s][t]: permutations taking transient state s to transient
    /// state t; rows sum to at most L!.
    counts: Vec<Vec<u64>>,
    perm_total: u64,
}

impl ExactChain {
    pub fn build(l: usize) -> Result<Self, CycleError> {
        use itertools::Itertools;
        if l < 2 {
            return Err(CycleError::LengthTooSmall(l));
        }
        if l > EXACT_MAX_L {
            return Err(CycleError::LengthTooLarge(l));
        }
        let states = 1u64 << l;
        let absorbed = [0u64, states - 1];
        let transient: Vec<u64> = (0..states).filter(|m| !absorbed.contains(m)).collect();
        let mut index_of = vec![None; states as usize];
        for (i, &m) in transient.iter().enumerate() {
            index_of[m as usize] = Some(i);
        }
        let perms: Vec<Vec<usize>> = (0..l).permutations(l).collect();
        let build_row = |&mask: &u64| -> Vec<u64> {
            let mut row = vec![0u64; transient.len()];
            let base = RingState::from_mask(l, mask);
            for perm in &perms {
                let mut s = base.clone();
                s.apply_order(perm);
                if let Some(t) = index_of[s.mask() as usize] {
                    row[t] += 1;
                }
            }
            row
        };
        #[cfg(feature = "parallel")]
        let counts: Vec<Vec<u64>> = transient.par_iter().map(build_row).collect();
        #[cfg(not(feature = "parallel"))]
        let counts: Vec<Vec<u64>> = transient.iter().map(build_row).collect();
        Ok(ExactChain { l, transient, index_of, counts, perm_total: factorial_u64(l) })
    }

    pub fn transient_states(&self) -> &[u64] {
        &self.transient
    }

    pub fn is_transient(&self, mask: u64) -> bool {
        self.index_of[mask as usize].is_some()
    }

    /// Exact expected absorption time per start mask (0 for absorbed
    /// states), solving (I - Q) x = 1 over the rationals.
    pub fn expected_absorption(&self) -> Vec<BigRational> {
        let k = self.transient.len();
        let total = BigInt::from(self.perm_total);
        // augmented [ perm_total * I - counts | perm_total ]
        let mut a: Vec<Vec<BigRational>> = (0..k)
            .map(|i| {
                (0..=k)
                    .map(|j| {
                        if j == k {
                            BigRational::from_integer(total.clone())
                        } else {
                            let diag = if i == j { total.clone() } else { BigInt::zero() };
                            BigRational::from_integer(diag - BigInt::from(self.counts[i][j]))
                        }
                    })
                    .collect()
            })
            .collect();
        gauss_solve(&mut a);
        let mut out = vec![BigRational::zero(); 1 << self.l];
        for (i, &mask) in self.transient.iter().enumerate() {
            out[mask as usize] = a[i][k].clone();
        }
        out
    }

    /// Exact P[T >= t] per start mask for each requested t (ascending).
    pub fn tail_probabilities(&self, ts: &[u64]) -> Vec<Vec<BigRational>> {
        assert!(ts.windows(2).all(|w| w[0] <= w[1]));
        let k = self.transient.len();
        let states = 1usize << self.l;
        // v[s] over perm_total^steps = P[still transient after `steps` rounds]
        let mut v: Vec<BigInt> = vec![BigInt::one(); k];
        let mut steps = 0u64;
        let mut out = Vec::with_capacity(ts.len());
        for &t in ts {
            assert!(t >= 1, "tail defined for t >= 1");
            while steps < t - 1 {
                v = (0..k)
                    .map(|i| {
                        let mut acc = BigInt::zero();
                        for (j, val) in v.iter().enumerate() {
                            let c = self.counts[i][j];
                            if c != 0 {
                                acc += BigInt::from(c) * val;
                            }
                        }
                        acc
                    })
                    .collect();
                steps += 1;
            }
            let denom = BigInt::from(self.perm_total).pow(steps as u32);
            let mut row = vec![BigRational::zero(); states];
            for (i, &mask) in self.transient.iter().enumerate() {
                row[mask as usize] = BigRational::new(v[i].clone(), denom.clone());
            }
            out.push(row);
        }
        out
    }
}

/// In-place Gaussian elimination over the rationals on an augmented matrix.
fn gauss_solve(a: &mut [Vec<BigRational>]) {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("nonsingular absorption system");
        a.swap(col, pivot);
        let inv = a[col][col].clone();
        for j in col..=n {
            a[col][j] = &a[col][j] / &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for j in col..=n {
                    let sub = &factor * &a[col][j];
                    a[r][j] = &a[r][j] - sub;
                }
            }
        }
    }
}

/// Absorption summary for presentation and bound checks.
#[derive(Clone, Debug, Serialize)]
pub struct AbsorptionTable {
    pub l: usize,
    /// False when rows were Monte-Carlo-marginalized (L > EXACT_MAX_L).
    pub exact: bool,
    /// Max over non-absorbed starts of E[T].
    pub max_expected: f64,
    /// Mean of E[T] over a uniform random start (absorbed states count 0).
    pub mean_expected: f64,
    pub tail: Vec<TailBound>,
    /// Whether E[T] <= 2 L^2 held for every start.
    pub expected_bound_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TailBound {
    pub a: u32,
    pub threshold: u64,
    /// Max over starts of P[T >= threshold].
    pub max_tail: f64,
    /// The reference bound L * 2^-a.
    pub bound: f64,
    pub holds: bool,
}

/// Oracle absorption summary: exact for L <= [`EXACT_MAX_L`], Monte-Carlo-
/// marginalized rows (labeled approximate, `samples_per_row` draws per
/// state) up to [`APPROX_MAX_L`], error beyond.
pub fn exact_absorption(l: usize, samples_per_row: u64) -> Result<AbsorptionTable, CycleError> {
    if l < 2 {
        return Err(CycleError::LengthTooSmall(l));
    }
    if l > APPROX_MAX_L {
        return Err(CycleError::LengthTooLarge(l));
    }
    let thresholds: Vec<(u32, u64)> =
        (1..=3u32).map(|a| (a, 4 * a as u64 * (l * l) as u64)).collect();
    if l <= EXACT_MAX_L {
        let chain = ExactChain::build(l)?;
        let expected = chain.expected_absorption();
        let bound = BigRational::from_integer(BigInt::from(2 * l * l));
        let expected_bound_holds = expected.iter().all(|e| e <= &bound);
        let max_expected = expected.iter().map(rational_to_f64).fold(0.0f64, f64::max);
        let mean_expected =
            expected.iter().map(rational_to_f64).sum::<f64>() / (1u64 << l) as f64;
        let ts: Vec<u64> = thresholds.iter().map(|&(_, t)| t).collect();
        let tails = chain.tail_probabilities(&ts);
        let tail = thresholds
            .iter()
            .zip(&tails)
            .map(|(&(a, threshold), row)| {
                let limit = BigRational::new(BigInt::from(l), BigInt::from(1u64 << a));
                TailBound {
                    a,
                    threshold,
                    max_tail: row.iter().map(rational_to_f64).fold(0.0f64, f64::max),
                    bound: l as f64 / (1u64 << a) as f64,
                    holds: row.iter().all(|p| p <= &limit),
                }
            })
            .collect();
        Ok(AbsorptionTable { l, exact: true, max_expected, mean_expected, tail, expected_bound_holds })
    } else {
        Ok(approx_absorption(l, samples_per_row, thresholds))
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    bigint_to_f64(r.numer()) / bigint_to_f64(r.denom())
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    // values reaching display are small; lossy conversion is fine
    x.to_string().parse::<f64>().unwrap_or(f64::INFINITY)
}

fn approx_absorption(
    l: usize,
    samples_per_row: u64,
    thresholds: Vec<(u32, u64)>,
) -> AbsorptionTable {
    assert!(samples_per_row >= 1);
    let states = 1u64 << l;
    let absorbed = [0u64, states - 1];
    let transient: Vec<u64> = (0..states).filter(|m| !absorbed.contains(m)).collect();
    let mut index_of = vec![None; states as usize];
    for (i, &m) in transient.iter().enumerate() {
        index_of[m as usize] = Some(i);
    }
    let row_of = |&mask: &u64| -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(mask, &[l as u64, 0x0ff1ce]));
        let mut row = vec![0f64; transient.len()];
        let base = RingState::from_mask(l, mask);
        for _ in 0..samples_per_row {
            let mut s = base.clone();
            s.step_in_place(&mut rng);
            if let Some(t) = index_of[s.mask() as usize] {
                row[t] += 1.0;
            }
        }
        for p in &mut row {
            *p /= samples_per_row as f64;
        }
        row
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<f64>> = transient.par_iter().map(row_of).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<f64>> = transient.iter().map(row_of).collect();

    // expected absorption: (I - Q) x = 1, dense f64 Gauss with pivoting
    let k = transient.len();
    let mut a: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut row: Vec<f64> = (0..k)
                .map(|j| (if i == j { 1.0 } else { 0.0 }) - rows[i][j])
                .collect();
            row.push(1.0);
            row
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("rows remain");
        a.swap(col, pivot);
        let inv = a[col][col];
        for j in col..=k {
            a[col][j] /= inv;
        }
        for r in 0..k {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    for j in col..=k {
                        a[r][j] -= f * a[col][j];
                    }
                }
            }
        }
    }
    let expected: Vec<f64> = (0..k).map(|i| a[i][k]).collect();
    let max_expected = expected.iter().copied().fold(0.0f64, f64::max);
    let mean_expected = expected.iter().sum::<f64>() / states as f64;
    let expected_bound_holds = max_expected <= 2.0 * (l * l) as f64;

    let mut tail = Vec::new();
    let mut v = vec![1.0f64; k];
    let mut steps = 0u64;
    for (a_param, threshold) in thresholds {
        while steps < threshold - 1 {
            v = (0..k)
                .map(|i| (0..k).map(|j| rows[i][j] * v[j]).sum())
                .collect();
            steps += 1;
        }
        let max_tail = v.iter().copied().fold(0.0f64, f64::max);
        let bound = l as f64 / (1u64 << a_param) as f64;
        tail.push(TailBound { a: a_param, threshold, max_tail, bound, holds: max_tail <= bound });
    }
    AbsorptionTable { l, exact: false, max_expected, mean_expected, tail, expected_bound_holds }
}
