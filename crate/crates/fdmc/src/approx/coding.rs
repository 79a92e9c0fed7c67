//! Color-coding families: assignments of fair types to codes such that any
//! small set of types receives all-distinct codes in at least one member.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::RowType;

/// A map from each fair type to a code in `1..=num_codes`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeAssignment {
    pub codes: BTreeMap<RowType, usize>,
}

impl CodeAssignment {
    pub fn code_of(&self, t: &RowType) -> Option<usize> {
        self.codes.get(t).copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodingMode {
    /// Fewer types than codes: a single injective assignment covers all sets.
    Injective,
    /// All `num_codes ^ num_types` assignments; complete and deterministic.
    Exhaustive,
    /// Seeded random assignments with a per-set coverage guarantee.
    Random,
}

#[derive(Clone, Debug)]
pub struct CodingFamily {
    pub codings: Vec<CodeAssignment>,
    pub mode: CodingMode,
    pub num_codes: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct CodingOptions {
    pub seed: u64,
    /// Per-set failure probability bound for the random mode.
    pub delta: f64,
    /// Override the derived trial count.
    pub trials: Option<usize>,
    /// Switch to random mode once `num_codes ^ num_types` exceeds this.
    pub exhaustive_cap: u64,
}

impl Default for CodingOptions {
    fn default() -> Self {
        CodingOptions { seed: 0, delta: 1e-6, trials: None, exhaustive_cap: 250_000 }
    }
}

/// Trials needed so that a fixed set of `set_size` types receives
/// all-distinct codes out of `num_codes` with probability ≥ 1 − δ:
/// a single uniform coding succeeds with probability
/// `num_codes! / ((num_codes − set_size)! · num_codes^set_size)`.
pub fn trials_for(set_size: usize, num_codes: usize, delta: f64) -> usize {
    assert!(set_size <= num_codes);
    if set_size <= 1 {
        return 1;
    }
    let mut inv_p = 1f64; // 1 / success probability
    for i in 0..set_size {
        inv_p *= num_codes as f64 / (num_codes - i) as f64;
    }
    ((1.0 / delta).ln() * inv_p).ceil() as usize
}

/// Build a family of codings of `fair_types` into `1..=num_codes` such that
/// every subset of at most `num_codes` types is colorful (all codes
/// distinct) in at least one member — exactly for the injective and
/// exhaustive modes, with probability ≥ 1 − δ per set in the random mode.
pub fn generate_codings(
    fair_types: &[RowType],
    num_codes: usize,
    opts: CodingOptions,
) -> CodingFamily {
    assert!(num_codes >= 1);
    let t = fair_types.len();
    if t <= num_codes {
        let codes = fair_types
            .iter()
            .enumerate()
            .map(|(i, ty)| (ty.clone(), i + 1))
            .collect();
        return CodingFamily {
            codings: vec![CodeAssignment { codes }],
            mode: CodingMode::Injective,
            num_codes,
        };
    }

    let total = (num_codes as f64).powi(t as i32);
    if total <= opts.exhaustive_cap as f64 {
        let mut codings = Vec::with_capacity(total as usize);
        let mut digits = vec![0usize; t];
        loop {
            let codes = fair_types
                .iter()
                .zip(&digits)
                .map(|(ty, &d)| (ty.clone(), d + 1))
                .collect();
            codings.push(CodeAssignment { codes });
            let mut pos = t;
            loop {
                if pos == 0 {
                    return CodingFamily { codings, mode: CodingMode::Exhaustive, num_codes };
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < num_codes {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    let trials = opts
        .trials
        .unwrap_or_else(|| trials_for(num_codes.min(t), num_codes, opts.delta));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let codings = (0..trials)
        .map(|_| {
            let codes = fair_types
                .iter()
                .map(|ty| (ty.clone(), rng.gen_range(1..=num_codes)))
                .collect();
            CodeAssignment { codes }
        })
        .collect();
    CodingFamily { codings, mode: CodingMode::Random, num_codes }
}
