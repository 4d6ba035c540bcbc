//! The universal result type of every quantitative check.
//!
//! A [`Verdict`] reports a signed margin together with the combined
//! uncertainty of the oracles that produced it. Three comparison modes
//! are used, recorded on the verdict so a reader can interpret the
//! fields:
//!
//! * [`Comparison::Strict`] — a strict inequality `big > small`.
//!   `Holds` requires `margin > error`, `Violated` requires
//!   `margin < -error`, anything else is `Inconclusive`. Near-zero
//!   margins are never promoted to `Holds`.
//! * [`Comparison::NonStrict`] — a `≥` statement. It is `Violated` only
//!   when refuted beyond the error (`margin < -error`) and `Holds`
//!   otherwise; equality within error is consistent with the claim.
//! * [`Comparison::Equality`] — an identity with a stated allowance.
//!   Here `margin = allowance - |difference|` and `error = 0`; `Holds`
//!   iff the difference is within the allowance (`margin ≥ 0`).

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::geometry::{BodySpec, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictStatus {
    Holds,
    Violated,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Strict,
    NonStrict,
    Equality,
}

/// Concrete evidence attached to a `Violated` verdict. A point replays
/// through the gauge of the violated inclusion; a body pair replays
/// through the check that produced it.
#[derive(Clone, Debug)]
pub enum Witness {
    Point(Vector),
    BodyPair(Box<(BodySpec, BodySpec)>),
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub margin: f64,
    pub error: f64,
    pub comparison: Comparison,
    pub witness: Option<Witness>,
    /// Which oracles and resolutions produced the numbers.
    pub provenance: String,
    /// Named sub-verdicts (e.g. a lower-bound companion check).
    pub sub: Vec<(String, Verdict)>,
}

impl Verdict {
    /// Verdict for a strict inequality with signed `margin` and
    /// combined oracle `error`.
    pub fn strict(margin: f64, error: f64, provenance: String) -> Verdict {
        let status = if margin > error {
            VerdictStatus::Holds
        } else if margin < -error {
            VerdictStatus::Violated
        } else {
            VerdictStatus::Inconclusive
        };
        Verdict {
            status,
            margin,
            error,
            comparison: Comparison::Strict,
            witness: None,
            provenance,
            sub: Vec::new(),
        }
    }

    /// Verdict for a non-strict (`≥`) statement: `Violated` only when
    /// refuted beyond the error, `Holds` otherwise.
    pub fn non_strict(margin: f64, error: f64, provenance: String) -> Verdict {
        let status = if margin < -error {
            VerdictStatus::Violated
        } else {
            VerdictStatus::Holds
        };
        Verdict {
            status,
            margin,
            error,
            comparison: Comparison::NonStrict,
            witness: None,
            provenance,
            sub: Vec::new(),
        }
    }

    /// Verdict for an identity: `difference` must not exceed
    /// `allowance`. The margin is the remaining slack.
    pub fn equality(difference: f64, allowance: f64, provenance: String) -> Verdict {
        let margin = allowance - difference.abs();
        let status = if margin >= 0.0 {
            VerdictStatus::Holds
        } else {
            VerdictStatus::Violated
        };
        Verdict {
            status,
            margin,
            error: 0.0,
            comparison: Comparison::Equality,
            witness: None,
            provenance,
            sub: Vec::new(),
        }
    }

    /// Roll several named verdicts into one: `Violated` dominates, then
    /// `Inconclusive`; the margin reported is the weakest child margin.
    pub fn aggregate(children: Vec<(String, Verdict)>, provenance: String) -> Verdict {
        let mut status = VerdictStatus::Holds;
        let mut margin = f64::INFINITY;
        let mut error = 0.0f64;
        for (_, v) in &children {
            match v.status {
                VerdictStatus::Violated => status = VerdictStatus::Violated,
                VerdictStatus::Inconclusive if status != VerdictStatus::Violated => {
                    status = VerdictStatus::Inconclusive
                }
                _ => {}
            }
            if v.margin < margin {
                margin = v.margin;
                error = v.error;
            }
        }
        if children.is_empty() {
            margin = 0.0;
        }
        Verdict {
            status,
            margin,
            error,
            comparison: Comparison::NonStrict,
            witness: None,
            provenance,
            sub: children,
        }
    }

    pub fn with_sub(mut self, name: &str, v: Verdict) -> Verdict {
        self.sub.push((String::from(name), v));
        self
    }

    pub fn with_witness(mut self, w: Witness) -> Verdict {
        self.witness = Some(w);
        self
    }

    #[inline]
    pub fn is_holds(&self) -> bool {
        self.status == VerdictStatus::Holds
    }

    #[inline]
    pub fn is_violated(&self) -> bool {
        self.status == VerdictStatus::Violated
    }

    #[inline]
    pub fn is_inconclusive(&self) -> bool {
        self.status == VerdictStatus::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn strict_three_way() {
        assert!(Verdict::strict(1.0, 0.1, "t".to_string()).is_holds());
        assert!(Verdict::strict(-1.0, 0.1, "t".to_string()).is_violated());
        assert!(Verdict::strict(0.05, 0.1, "t".to_string()).is_inconclusive());
        assert!(Verdict::strict(-0.05, 0.1, "t".to_string()).is_inconclusive());
    }

    #[test]
    fn non_strict_tolerates_equality() {
        assert!(Verdict::non_strict(0.0, 0.1, "t".to_string()).is_holds());
        assert!(Verdict::non_strict(-0.05, 0.1, "t".to_string()).is_holds());
        assert!(Verdict::non_strict(-0.2, 0.1, "t".to_string()).is_violated());
    }

    #[test]
    fn equality_slack() {
        let v = Verdict::equality(0.0, 1e-10, "t".to_string());
        assert!(v.is_holds());
        assert!(Verdict::equality(1e-9, 1e-10, "t".to_string()).is_violated());
    }

    #[test]
    fn aggregate_takes_worst() {
        let ok = Verdict::strict(1.0, 0.1, "a".to_string());
        let bad = Verdict::strict(-1.0, 0.1, "b".to_string());
        let agg = Verdict::aggregate(
            alloc::vec![("a".to_string(), ok), ("b".to_string(), bad)],
            "agg".to_string(),
        );
        assert!(agg.is_violated());
        assert_eq!(agg.margin, -1.0);
    }
}
