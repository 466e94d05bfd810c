use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Outcome counts keyed by bitstring; the rightmost character is the lowest measured qubit.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MeasurementHistogram {
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}

/// Renders outcome `bits` (bit `k` = `k`-th measured qubit) as a `width`-character string.
pub fn bitstring(bits: usize, width: usize) -> String {
    (0..width).rev().map(|k| if bits >> k & 1 == 1 { '1' } else { '0' }).collect()
}

impl MeasurementHistogram {
    pub fn record(&mut self, outcome: String) {
        *self.counts.entry(outcome).or_insert(0) += 1;
        self.shots += 1;
    }

    pub fn frequency(&self, outcome: &str) -> f64 {
        if self.shots == 0 {
            return 0.0;
        }
        self.counts.get(outcome).copied().unwrap_or(0) as f64 / self.shots as f64
    }

    /// Half the L1 distance between the empirical distributions.
    pub fn tv_distance(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<&String> = self.counts.keys().chain(other.counts.keys()).collect();
        keys.into_iter().map(|k| (self.frequency(k) - other.frequency(k)).abs()).sum::<f64>() / 2.0
    }

    /// `outcome,count` rows sorted lexicographically.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("outcome,count\n");
        for (k, v) in &self.counts {
            writeln!(out, "{k},{v}").unwrap();
        }
        out
    }
}
