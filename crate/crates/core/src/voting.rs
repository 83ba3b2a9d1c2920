//! Binarization of a beam of `M` detections into a single macroscopic bit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum TiePolicy {
    ZeroWins,
    OneWins,
    /// Undecided beams output each bit with probability 1/2.
    #[default]
    FairCoin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VotingRule {
    /// `n0 >= n1` gives outcome 0, otherwise 1.
    Majority,
    /// `n0 >= t` gives outcome 0, otherwise 1.
    Threshold(usize),
    /// Outcome 0 iff `n1 = 0`, outcome 1 iff `n0 = 0`, else the tie policy.
    /// Experimental.
    Unanimous(TiePolicy),
}

impl VotingRule {
    /// Probability that a side declares outcome 0 given `n0` of its `m`
    /// particles landed in detector 0. Always 0, 1/2 or 1, and nondecreasing
    /// in `n0`.
    pub fn zero_weight(self, n0: usize, m: usize) -> f64 {
        match self {
            VotingRule::Majority => {
                if 2 * n0 >= m {
                    1.0
                } else {
                    0.0
                }
            }
            VotingRule::Threshold(t) => {
                if n0 >= t {
                    1.0
                } else {
                    0.0
                }
            }
            VotingRule::Unanimous(tie) => {
                if n0 == m {
                    1.0
                } else if n0 == 0 {
                    0.0
                } else {
                    match tie {
                        TiePolicy::ZeroWins => 1.0,
                        TiePolicy::OneWins => 0.0,
                        TiePolicy::FairCoin => 0.5,
                    }
                }
            }
        }
    }

    /// `zero_weight(n, m)` for `n = 0..=m`.
    pub fn weights(self, m: usize) -> Result<Vec<f64>> {
        self.check(m)?;
        Ok((0..=m).map(|n| self.zero_weight(n, m)).collect())
    }

    pub fn check(self, m: usize) -> Result<()> {
        if m == 0 {
            return Err(Error::ZeroCopies);
        }
        if let VotingRule::Threshold(t) = self {
            if t < 1 || t > m {
                return Err(Error::BadThreshold { t, m });
            }
        }
        Ok(())
    }

    /// True when the rule commutes with swapping detector labels on
    /// beams of `m` particles (no ties can occur).
    pub fn is_label_symmetric(self, m: usize) -> bool {
        (0..=m).all(|n| self.zero_weight(n, m) + self.zero_weight(m - n, m) == 1.0)
    }
}

impl fmt::Display for VotingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VotingRule::Majority => write!(f, "majority"),
            VotingRule::Threshold(t) => write!(f, "threshold:{t}"),
            VotingRule::Unanimous(TiePolicy::FairCoin) => write!(f, "unanimous"),
            VotingRule::Unanimous(TiePolicy::ZeroWins) => write!(f, "unanimous:zero"),
            VotingRule::Unanimous(TiePolicy::OneWins) => write!(f, "unanimous:one"),
        }
    }
}

impl FromStr for VotingRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadParams(format!("unknown voting rule '{s}'"));
        match s.split_once(':') {
            None if s == "majority" => Ok(VotingRule::Majority),
            None if s == "unanimous" => Ok(VotingRule::Unanimous(TiePolicy::FairCoin)),
            Some(("threshold", t)) => t.parse().map(VotingRule::Threshold).map_err(|_| bad()),
            Some(("unanimous", tie)) => match tie {
                "zero" => Ok(VotingRule::Unanimous(TiePolicy::ZeroWins)),
                "one" => Ok(VotingRule::Unanimous(TiePolicy::OneWins)),
                "coin" => Ok(VotingRule::Unanimous(TiePolicy::FairCoin)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}
