//! Sampling of planted random 3-SAT instances.
//!
//! A hidden assignment is drawn uniformly, then every 3-clause it satisfies
//! is included independently with probability `p`. There are `7 * C(n,3)`
//! such clauses (8 polarity patterns per variable triple minus the one the
//! assignment falsifies), so the expected clause count at `p = d/n^2` is
//! `7dn/6` up to lower-order terms.
//!
//! Iterating the whole clause universe is infeasible beyond tiny `n`, so
//! sampling draws the clause count `K ~ Binomial(7*C(n,3), p)` first and
//! then picks `K` distinct satisfied clauses uniformly (rejection against a
//! hash set, or a direct subset draw when the universe is small). That is
//! distributionally identical to independent inclusion.

use std::collections::HashSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use thiserror::Error;

use crate::formula::{Assignment, Clause, Formula, Literal, Variable};

/// Universes up to this size are materialized and subsampled directly
/// instead of rejection-sampled, which keeps dense settings (large `p`,
/// small `n`) exact and fast.
const DIRECT_UNIVERSE_CAP: u64 = 2_000_000;

/// Largest supported variable count; keeps the clause-encoding key inside
/// u64 for the rejection sampler's dedup set.
pub const MAX_VARIABLES: u32 = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("need at least 3 variables, got {0}")]
    TooFewVariables(u32),
    #[error("variable count {0} exceeds {MAX_VARIABLES}")]
    TooManyVariables(u32),
    #[error("clause probability {0} outside [0, 1]")]
    InvalidProbability(f64),
}

/// Clause density, either directly as the per-clause inclusion probability
/// or as the ratio parameter `d` with `p = d / n^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Density {
    ClauseProb(f64),
    Ratio(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    pub n: u32,
    pub density: Density,
    pub seed: u64,
    /// Fix the planted assignment to all-TRUE instead of sampling it.
    pub planted_all_true: bool,
}

impl GenParams {
    pub fn new(n: u32, density: Density, seed: u64) -> Self {
        GenParams { n, density, seed, planted_all_true: false }
    }

    pub fn clause_probability(&self) -> f64 {
        match self.density {
            Density::ClauseProb(p) => p,
            Density::Ratio(d) => d / (self.n as f64 * self.n as f64),
        }
    }

    fn validate(&self) -> Result<f64, GenError> {
        if self.n < 3 {
            return Err(GenError::TooFewVariables(self.n));
        }
        if self.n > MAX_VARIABLES {
            return Err(GenError::TooManyVariables(self.n));
        }
        let p = self.clause_probability();
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(GenError::InvalidProbability(p));
        }
        Ok(p)
    }
}

/// A formula together with the hidden assignment that generated it.
#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub formula: Formula,
    pub planted: Assignment,
}

/// Number of 3-clauses over `n` variables satisfied by any fixed total
/// assignment: `7 * n(n-1)(n-2) / 6`.
pub fn universe_size(n: u32) -> u64 {
    let n = n as u64;
    7 * n * (n - 1) * (n - 2) / 6
}

pub fn generate(params: &GenParams) -> Result<PlantedInstance, GenError> {
    let p = params.validate()?;
    let n = params.n;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let planted = if params.planted_all_true {
        Assignment::all_true(n)
    } else {
        Assignment::new((0..n).map(|_| rng.random_bool(0.5)).collect())
    };

    let universe = universe_size(n);
    let count = Binomial::new(universe, p)
        .expect("validated probability")
        .sample(&mut rng) as usize;

    let mut clauses = if universe <= DIRECT_UNIVERSE_CAP {
        sample_direct(n, &planted, count, &mut rng)
    } else {
        sample_rejection(n, &planted, count, &mut rng)
    };
    clauses.shuffle(&mut rng);

    let formula = Formula::new(n, clauses).expect("sampled clauses are well-formed");
    debug_assert!(formula.eval(&planted));
    Ok(PlantedInstance { formula, planted })
}

/// Builds the clause for sorted variables `[a, b, c]` and an agreement
/// pattern: bit `t` set means literal `t` agrees with the planted value of
/// its variable. Patterns 1..=7 are exactly the satisfied clauses.
fn clause_for(vars: [Variable; 3], pattern: u8, planted: &Assignment) -> Clause {
    debug_assert!((1..=7).contains(&pattern));
    let lits = vars
        .iter()
        .enumerate()
        .map(|(t, &var)| {
            let agree = pattern >> t & 1 == 1;
            Literal { var, positive: agree == planted.get(var) }
        })
        .collect();
    Clause::new(lits).expect("distinct variables")
}

fn nth_triple(n: u32, mut index: u64) -> [Variable; 3] {
    // index in [0, C(n,3)); unrank the combination in lexicographic order.
    let mut picked = [0u32; 3];
    let mut next = 1u32;
    for k in (1..=3u64).rev() {
        // choose the smallest v such that C(n - v, k - 1) covers the rest
        loop {
            let remaining = n.saturating_sub(next) as u64;
            let block = binom(remaining, k - 1);
            if index < block {
                picked[(3 - k) as usize] = next;
                next += 1;
                break;
            }
            index -= block;
            next += 1;
        }
    }
    [Variable::new(picked[0]), Variable::new(picked[1]), Variable::new(picked[2])]
}

fn binom(n: u64, k: u64) -> u64 {
    match k {
        0 => 1,
        1 => n,
        2 => n * n.saturating_sub(1) / 2,
        _ => unreachable!("only needed up to k = 2"),
    }
}

fn sample_direct(n: u32, planted: &Assignment, count: usize, rng: &mut ChaCha8Rng) -> Vec<Clause> {
    let universe = universe_size(n) as usize;
    let chosen = rand::seq::index::sample(rng, universe, count);
    chosen
        .into_iter()
        .map(|ix| {
            let pattern = (ix % 7) as u8 + 1;
            let triple = nth_triple(n, (ix / 7) as u64);
            clause_for(triple, pattern, planted)
        })
        .collect()
}

fn sample_rejection(
    n: u32,
    planted: &Assignment,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Clause> {
    let mut seen: HashSet<u64> = HashSet::with_capacity(count * 2);
    let mut clauses = Vec::with_capacity(count);
    let base = n as u64 + 1;
    while clauses.len() < count {
        let mut vars = [0u32; 3];
        vars[0] = rng.random_range(1..=n);
        loop {
            vars[1] = rng.random_range(1..=n);
            if vars[1] != vars[0] {
                break;
            }
        }
        loop {
            vars[2] = rng.random_range(1..=n);
            if vars[2] != vars[0] && vars[2] != vars[1] {
                break;
            }
        }
        vars.sort_unstable();
        let pattern: u8 = rng.random_range(1..8);
        let key = ((vars[0] as u64 * base + vars[1] as u64) * base + vars[2] as u64) * 8
            + pattern as u64;
        if seen.insert(key) {
            let triple = [Variable::new(vars[0]), Variable::new(vars[1]), Variable::new(vars[2])];
            clauses.push(clause_for(triple, pattern, planted));
        }
    }
    clauses
}
