//! Synthetic trial data drawn from a known observed law; used by the test
//! suite and handy for demos.

use crate::ingest::{ControlCounts, TreatedCounts};
use rand::distributions::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Binomial;
use std::fmt::Write as _;
use surrbound::law::ObservedLaw;

fn binomial(rng: &mut ChaCha8Rng, n: u64, p: f64) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n, p).expect("probability in range").sample(rng)
}

/// Multinomial counts over the four control cells plus a binomial treated
/// arm, seeded.
pub fn sample_trial_counts(
    law: &ObservedLaw,
    n_control: u64,
    n_treated: u64,
    seed: u64,
) -> (ControlCounts, TreatedCounts) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probs = [law.p00, law.p10, law.p01, law.p11];
    let mut drawn = [0u64; 4];
    let mut remaining = n_control;
    let mut rest = 1.0;
    for k in 0..3 {
        let p = if rest > 0.0 { (probs[k] / rest).clamp(0.0, 1.0) } else { 0.0 };
        drawn[k] = binomial(&mut rng, remaining, p);
        remaining -= drawn[k];
        rest -= probs[k];
    }
    drawn[3] = remaining;
    let control = ControlCounts { cells: [[drawn[0], drawn[2]], [drawn[1], drawn[3]]] };
    let s1 = binomial(&mut rng, n_treated, law.s1_treated);
    (control, TreatedCounts { s1, total: n_treated })
}

/// Renders counts as the CSV files the ingestion layer expects.
pub fn control_csv(counts: &ControlCounts) -> String {
    let mut out = String::from("s,y\n");
    for y in 0..2 {
        for s in 0..2 {
            for _ in 0..counts.cells[y][s] {
                let _ = writeln!(out, "{s},{y}");
            }
        }
    }
    out
}

pub fn treated_csv(counts: &TreatedCounts) -> String {
    let mut out = String::from("s\n");
    for _ in 0..counts.s1 {
        out.push_str("1\n");
    }
    for _ in 0..counts.total - counts.s1 {
        out.push_str("0\n");
    }
    out
}
