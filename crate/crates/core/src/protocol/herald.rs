use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Success,
    Failure,
    Postselected,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::Failure => "failure",
            Outcome::Postselected => "postselected",
        }
    }
}

/// How the ancilla measurement is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeraldMode {
    /// Always keep the success branch.
    #[default]
    Postselect,
    /// Draw the outcome from a seeded generator.
    Sample,
}

/// Outcome source for one trajectory.
#[derive(Debug, Clone)]
pub struct HeraldSampler {
    rng: Option<ChaCha8Rng>,
}

impl HeraldSampler {
    pub fn postselect() -> Self {
        Self { rng: None }
    }

    pub fn sample(seed: u64) -> Self {
        Self {
            rng: Some(ChaCha8Rng::seed_from_u64(seed)),
        }
    }

    pub fn new(mode: HeraldMode, seed: u64) -> Self {
        match mode {
            HeraldMode::Postselect => Self::postselect(),
            HeraldMode::Sample => Self::sample(seed),
        }
    }

    /// Resolves a herald with success probability `p`.
    pub fn resolve(&mut self, p: f64) -> Outcome {
        match &mut self.rng {
            None => Outcome::Postselected,
            Some(rng) => {
                if rng.random::<f64>() < p {
                    Outcome::Success
                } else {
                    Outcome::Failure
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeraldEntry {
    pub step: usize,
    pub substep: usize,
    pub p: f64,
    pub outcome: Outcome,
    /// Product of the success probabilities up to and including this entry.
    pub cumulative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeraldRecord {
    pub entries: Vec<HeraldEntry>,
    pub cumulative_success: f64,
    /// Product of the ledger factors applied at successful heralds.
    pub ledger_factor: f64,
}

impl Default for HeraldRecord {
    fn default() -> Self {
        Self {
            entries: Vec::new(),
            cumulative_success: 1.0,
            ledger_factor: 1.0,
        }
    }
}

impl HeraldRecord {
    pub fn push(&mut self, step: usize, substep: usize, p: f64, outcome: Outcome, factor: f64) {
        self.cumulative_success *= p;
        if outcome != Outcome::Failure {
            self.ledger_factor *= factor;
        }
        self.entries.push(HeraldEntry {
            step,
            substep,
            p,
            outcome,
            cumulative: self.cumulative_success,
        });
    }

    pub fn failed(&self) -> bool {
        self.entries.iter().any(|e| e.outcome == Outcome::Failure)
    }

    pub fn min_p(&self) -> Option<f64> {
        self.entries.iter().map(|e| e.p).reduce(f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_reproducible() {
        let draw = |seed| {
            let mut s = HeraldSampler::sample(seed);
            (0..64).map(|_| s.resolve(0.5)).collect::<Vec<_>>()
        };
        assert_eq!(draw(7), draw(7));
        assert_ne!(draw(7), draw(8));
    }

    #[test]
    fn cumulative_is_running_product() {
        let mut r = HeraldRecord::default();
        for (k, p) in [0.9, 0.8, 0.95].into_iter().enumerate() {
            r.push(0, k, p, Outcome::Postselected, 1.0);
        }
        assert!((r.cumulative_success - 0.684).abs() < 1e-15);
        assert_eq!(r.entries[1].cumulative, 0.9 * 0.8);
    }
}
