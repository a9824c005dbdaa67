//! Shared helpers for the integration suites.
#![allow(dead_code)]

pub mod table5;

use ehpack::ip::IpInstance;
use ehpack::params::ParameterSet;
use ehpack::rat::{rat, Rat};
use num::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random size in (0, 1]: mostly random fractions, some exact interval
/// boundaries (the classification edge cases), some tiny items.
pub fn random_size(rng: &mut ChaCha8Rng, p: &ParameterSet) -> Rat {
    match rng.gen_range(0..10u32) {
        0..=5 => {
            let den = rng.gen_range(2..10_000i128);
            let num = rng.gen_range(1..=den);
            rat(num, den)
        }
        6 => {
            // an exact boundary
            let i = rng.gen_range(1..=p.n() + 1);
            p.intervals.t[i]
        }
        7 => {
            // just above a boundary
            let i = rng.gen_range(1..=p.n());
            p.intervals.t[i + 1] + rat(1, 1_000_000_000)
        }
        _ => {
            // small item
            let m = p.m() as i128;
            let den = rng.gen_range(m..20 * m);
            rat(1, den)
        }
    }
}

pub fn random_stream(seed: u64, len: usize, p: &ParameterSet) -> Vec<Rat> {
    let mut r = rng(seed);
    (0..len).map(|_| random_size(&mut r, p)).collect()
}

/// Independent exhaustive optimum of a truncated instance: depth-first
/// enumeration over the integer box with row-feasibility pruning.
pub fn brute_force_optimum(inst: &IpInstance) -> (BigRational, Vec<u64>) {
    let n = inst.n_vars;
    let mut best = inst.f_const.clone();
    let mut best_x = vec![0u64; n];
    let mut x = vec![0u64; n];
    fn recurse(
        inst: &IpInstance,
        idx: usize,
        x: &mut Vec<u64>,
        best: &mut BigRational,
        best_x: &mut Vec<u64>,
    ) {
        if idx == inst.n_vars {
            if inst.feasible_exact(x) {
                let v = inst.objective_exact(x);
                if v > *best {
                    *best = v;
                    *best_x = x.clone();
                }
            }
            return;
        }
        for v in 0..=inst.ub[idx] {
            x[idx] = v;
            // prune: partial vector must stay feasible (coefficients >= 0)
            if !inst.feasible_exact(x) {
                x[idx] = 0;
                break;
            }
            recurse(inst, idx + 1, x, best, best_x);
        }
        x[idx] = 0;
    }
    recurse(inst, 0, &mut x, &mut best, &mut best_x);
    (best, best_x)
}
