//! Oracle against decider on every small structure of a family.
//!
//! Sizes up to a per-family threshold are enumerated exhaustively, one
//! structure per isomorphism type; larger sizes are sampled from a seeded
//! generator. Instances are keyed by `(size, index)` and merged in key order,
//! so the report does not depend on the number of worker threads.

use homog_core::deciders::{self, Verdict};
use homog_core::oracle::Oracle;
use homog_core::presentations::Presentation;
use homog_core::{Family, FiniteStructure, PartialMap, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest size enumerated in full; above it instances are sampled.
pub fn exhaustive_limit(f: Family) -> usize {
    match f {
        Family::Graph => 7,
        Family::TreePo | Family::TreePred => 9,
        Family::NestedEq(_) => 7,
        _ => 12,
    }
}

pub struct Outcome {
    pub n: usize,
    pub index: usize,
    pub structure: FiniteStructure,
    pub oracle: bool,
    pub decider: Verdict,
    pub counterexample: Option<PartialMap>,
}

impl Outcome {
    pub fn disagrees(&self) -> bool {
        self.decider.as_bool().is_some_and(|d| d != self.oracle)
    }
}

pub struct SizeRow {
    pub n: usize,
    pub sampled: bool,
    pub outcomes: Vec<Outcome>,
}

pub fn instances(f: Family, n: usize, seed: u64, samples: usize) -> Result<(bool, Vec<FiniteStructure>)> {
    if n <= exhaustive_limit(f) {
        return Ok((false, homog_core::enumerate::enumerate_structures(f, n)?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let v = (0..samples).map(|_| random_structure(f, n, &mut rng)).collect::<Result<_>>()?;
    Ok((true, v))
}

fn random_partition(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..n)).collect()
}

fn classes_of(ids: &[usize]) -> Vec<Vec<usize>> {
    let mut by = std::collections::BTreeMap::<usize, Vec<usize>>::new();
    for (x, &c) in ids.iter().enumerate() {
        by.entry(c).or_default().push(x);
    }
    by.into_values().collect()
}

pub fn random_structure(f: Family, n: usize, rng: &mut ChaCha8Rng) -> Result<FiniteStructure> {
    match f {
        Family::Order => {
            let mut seq: Vec<usize> = (0..n).collect();
            seq.shuffle(rng);
            FiniteStructure::order_from_sequence(&seq)
        }
        Family::Equivalence => FiniteStructure::equivalence(n, &classes_of(&random_partition(n, rng))),
        Family::Injection => {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            FiniteStructure::injection(perm)
        }
        Family::Graph => {
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            FiniteStructure::graph(n, &edges)
        }
        Family::TreePo | Family::TreePred => {
            let parent: Vec<Option<usize>> =
                (0..n).map(|i| if i == 0 { None } else { Some(rng.gen_range(0..i)) }).collect();
            if f == Family::TreePo {
                FiniteStructure::tree_po(&parent)
            } else {
                FiniteStructure::tree_pred(&parent)
            }
        }
        Family::NestedEq(k) => {
            // Finest classes get random ids; each level merges ids at random.
            let mut ids = random_partition(n, rng);
            let mut parts = vec![classes_of(&ids)];
            for _ in 1..k {
                let up: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
                ids = ids.iter().map(|&c| up[c]).collect();
                parts.push(classes_of(&ids));
            }
            parts.reverse();
            FiniteStructure::nested(n, &parts)
        }
    }
}

fn judge(oracle: &Oracle, s: &FiniteStructure) -> Result<(bool, Verdict, Option<PartialMap>)> {
    let o = oracle.is_uh(s)?;
    let d = deciders::analyze(&Presentation::of_structure(s)?)?;
    Ok((o.holds, d.uh, o.counterexample))
}

pub fn run(f: Family, cap: usize, seed: u64, samples: usize, jobs: usize) -> Result<Vec<SizeRow>> {
    let oracle = Oracle::with_cap(cap)?;
    let mut rows = Vec::new();
    for n in 1..=cap {
        let (sampled, structs) = instances(f, n, seed, samples)?;
        let jobs = jobs.max(1).min(structs.len().max(1));
        let chunk = structs.len().div_ceil(jobs).max(1);
        let judged: Vec<Result<Vec<_>>> = std::thread::scope(|sc| {
            let handles: Vec<_> = structs
                .chunks(chunk)
                .map(|part| sc.spawn(|| part.iter().map(|s| judge(&oracle, s)).collect::<Result<Vec<_>>>()))
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut outcomes = Vec::with_capacity(structs.len());
        let mut it = structs.into_iter().enumerate();
        for part in judged {
            for (oracle, decider, counterexample) in part? {
                let (index, structure) = it.next().expect("one result per instance");
                outcomes.push(Outcome {
                    n,
                    index,
                    structure,
                    oracle,
                    decider,
                    counterexample,
                });
            }
        }
        rows.push(SizeRow { n, sampled, outcomes });
    }
    Ok(rows)
}
