//! Iterated doublings that certify a gap between the lower and upper
//! chromatic numbers at every order `2^t (v+1) - 1` above a seed order `v`.
//!
//! A system holding verified strict bicolorings with `k` and `k + 1` colors
//! witnesses `chi <= k < k + 1 <= chi-bar`. Doubling such a system and giving
//! the added points a fresh color in both witnesses yields the same gap one
//! order up, indefinitely.

use serde::{Deserialize, Serialize};

use crate::coloring::{verify_bicoloring, Coloring};
use crate::design::{double, find_subsystem, DoublingAssociation, TripleSystem};
use crate::error::{Error, Result};
use crate::extension::{trivial_doubling_colorings, DoublingInput, ExtensionCertificate};
use crate::factorization::circle_factorization;

/// A system together with two verified strict bicolorings whose color counts
/// are consecutive, witnessing different lower and upper chromatic numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiGapCertificate {
    pub system: TripleSystem,
    pub coloring_low: Coloring,
    pub coloring_high: Coloring,
    pub provenance_low: String,
    pub provenance_high: String,
}

impl ChiGapCertificate {
    /// Rechecks both colorings and the consecutive-count invariant.
    pub fn verify(&self) -> Result<()> {
        let low = verify_bicoloring(&self.system, &self.coloring_low)?;
        if !low.ok {
            return Err(Error::VerificationFailure {
                detail: format!(
                    "low coloring: {}",
                    low.violation.map(|w| w.to_string()).unwrap_or_default()
                ),
            });
        }
        let high = verify_bicoloring(&self.system, &self.coloring_high)?;
        if !high.ok {
            return Err(Error::VerificationFailure {
                detail: format!(
                    "high coloring: {}",
                    high.violation.map(|w| w.to_string()).unwrap_or_default()
                ),
            });
        }
        if self.coloring_high.k() != self.coloring_low.k() + 1 {
            return Err(Error::VerificationFailure {
                detail: format!(
                    "color counts {} and {} are not consecutive",
                    self.coloring_low.k(),
                    self.coloring_high.k()
                ),
            });
        }
        Ok(())
    }
}

/// Chain of gap certificates at orders `w_(t+1) = 2 w_t + 1`, each system
/// containing the previous one as a subsystem on its original indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub steps: Vec<ChiGapCertificate>,
}

impl ChainRecord {
    pub fn last(&self) -> Option<&ChiGapCertificate> {
        self.steps.last()
    }
}

/// Turns a verified extension certificate into the chain seed: the extended
/// k-bicoloring is the low witness, and the fresh-class (k+1)-bicoloring of
/// the same doubled system is the high witness.
pub fn seed_certificate(ext: &ExtensionCertificate) -> Result<ChiGapCertificate> {
    let (ok, transcript) = ext.verify();
    if !ok {
        let first_bad = transcript
            .iter()
            .find(|r| !r.ok)
            .map(|r| format!("{}: {}", r.check, r.detail))
            .unwrap_or_default();
        return Err(Error::VerificationFailure { detail: first_bad });
    }
    let trivial = trivial_doubling_colorings(DoublingInput::Certificate(ext))?;
    debug_assert_eq!(trivial.doubled, ext.doubled);
    let cert = ChiGapCertificate {
        system: ext.doubled.clone(),
        coloring_low: ext.extended_coloring.clone(),
        coloring_high: trivial.fresh_class,
        provenance_low: "extended".into(),
        provenance_high: "new-class".into(),
    };
    cert.verify()?;
    Ok(cert)
}

/// Where an [`advance_chain`] run stopped early.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainFailure {
    pub step: usize,
    pub detail: String,
}

/// Result of advancing a chain: the record extended as far as every doubling
/// verified, plus the failure if one aborted the run.
#[derive(Debug, Clone)]
pub struct ChainAdvance {
    pub record: ChainRecord,
    pub failure: Option<ChainFailure>,
}

/// Extends the chain by `steps` doublings. Each step doubles the last system
/// with the round-robin factorization and the identity association, adds a
/// fresh color class over the added points to both witnesses, and re-verifies
/// everything (both colorings, the doubled system, and the subsystem
/// nesting). A verification failure aborts and returns the partial chain.
pub fn advance_chain(record: &ChainRecord, steps: usize) -> ChainAdvance {
    let mut out = record.clone();
    for step in 0..steps {
        let Some(last) = out.last() else {
            return ChainAdvance {
                record: out,
                failure: Some(ChainFailure {
                    step,
                    detail: "empty chain has no seed".into(),
                }),
            };
        };
        if let Err(e) = last.verify() {
            return ChainAdvance {
                record: out,
                failure: Some(ChainFailure {
                    step,
                    detail: format!("seed of step failed verification: {e}"),
                }),
            };
        }
        let w = last.system.order();
        let next = (|| -> Result<ChiGapCertificate> {
            let f = circle_factorization(w + 1)?;
            let doubled = double(&last.system, &f, &DoublingAssociation::identity(w))?;
            let report = doubled.validate();
            if !report.valid {
                return Err(Error::VerificationFailure {
                    detail: format!(
                        "doubled system invalid: {}",
                        report.violation.map(|x| x.to_string()).unwrap_or_default()
                    ),
                });
            }
            let sub = find_subsystem(&doubled, &(0..w).collect::<Vec<_>>());
            if !sub.is_subsystem() {
                return Err(Error::VerificationFailure {
                    detail: "previous system is not a subsystem of the doubling".into(),
                });
            }
            let cert = ChiGapCertificate {
                system: doubled,
                coloring_low: last.coloring_low.extend_with_fresh_class(w + 1),
                coloring_high: last.coloring_high.extend_with_fresh_class(w + 1),
                provenance_low: format!("{} + new-class", last.provenance_low),
                provenance_high: format!("{} + new-class", last.provenance_high),
            };
            cert.verify()?;
            Ok(cert)
        })();
        match next {
            Ok(cert) => out.steps.push(cert),
            Err(e) => {
                return ChainAdvance {
                    record: out,
                    failure: Some(ChainFailure {
                        step,
                        detail: e.to_string(),
                    }),
                }
            }
        }
    }
    ChainAdvance {
        record: out,
        failure: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::coloring::{enumerate_bicolorings, pattern_of, Pattern};
    use crate::extension::{search_extension, ExtensionSearch, SolutionVector};
    use crate::fixtures;

    fn theorem5_certificate() -> ExtensionCertificate {
        let sts = fixtures::cyclic13();
        let result = enumerate_bicolorings(&sts, 3, &Budget::unlimited());
        let col = result
            .witnesses
            .values()
            .next()
            .expect("cyclic13 is 3-bicolorable")
            .sorted_by_class_size();
        let outcome = search_extension(
            &sts,
            &col,
            &SolutionVector(vec![4, 4, 6]),
            &Budget::new(100_000_000),
            1,
        )
        .unwrap();
        match outcome {
            ExtensionSearch::Found(cert) => *cert,
            other => panic!("expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn seed_from_order27_certificate() {
        let ext = theorem5_certificate();
        let seed = seed_certificate(&ext).unwrap();
        assert_eq!(seed.system.order(), 27);
        assert_eq!(pattern_of(&seed.coloring_low), Pattern::new([6, 9, 12]));
        assert_eq!(pattern_of(&seed.coloring_high), Pattern::new([2, 5, 6, 14]));
        assert_eq!(seed.provenance_low, "extended");
        assert_eq!(seed.provenance_high, "new-class");
        seed.verify().unwrap();
    }

    #[test]
    fn seed_rejects_tampered_certificate() {
        let mut ext = theorem5_certificate();
        ext.solution.0[0] += 1;
        assert!(matches!(
            seed_certificate(&ext),
            Err(Error::VerificationFailure { .. })
        ));
    }

    #[test]
    fn advancing_by_zero_steps_is_identity() {
        let ext = theorem5_certificate();
        let seed = seed_certificate(&ext).unwrap();
        let record = ChainRecord { steps: vec![seed] };
        let advanced = advance_chain(&record, 0);
        assert!(advanced.failure.is_none());
        assert_eq!(advanced.record, record);
    }

    #[test]
    fn chain_orders_and_color_counts() {
        let ext = theorem5_certificate();
        let seed = seed_certificate(&ext).unwrap();
        let record = ChainRecord { steps: vec![seed] };
        let advanced = advance_chain(&record, 2);
        assert!(advanced.failure.is_none(), "{:?}", advanced.failure);
        let orders: Vec<usize> = advanced
            .record
            .steps
            .iter()
            .map(|s| s.system.order())
            .collect();
        assert_eq!(orders, vec![27, 55, 111]);
        // w_t = 2^t * 28 - 1
        for (t, &w) in orders.iter().enumerate() {
            assert_eq!(w, (1 << t) * 28 - 1);
        }
        let counts: Vec<(usize, usize)> = advanced
            .record
            .steps
            .iter()
            .map(|s| (s.coloring_low.k(), s.coloring_high.k()))
            .collect();
        assert_eq!(counts, vec![(3, 4), (4, 5), (5, 6)]);
        for step in &advanced.record.steps {
            step.verify().unwrap();
        }
        // subsystem nesting
        for pair in advanced.record.steps.windows(2) {
            let prev_order = pair[0].system.order();
            let sub = crate::design::find_subsystem(
                &pair[1].system,
                &(0..prev_order).collect::<Vec<_>>(),
            );
            assert!(sub.is_subsystem());
        }
    }

    #[test]
    fn chain_from_example12_extension() {
        let (sts, col) = fixtures::example12();
        let ext = crate::extension::theorem3_extend(&sts, &col, 2, 1).unwrap();
        let seed = seed_certificate(&ext).unwrap();
        assert_eq!(seed.system.order(), 39);
        assert_eq!(pattern_of(&seed.coloring_low), Pattern::new([9, 14, 16]));
        assert_eq!(pattern_of(&seed.coloring_high), Pattern::new([4, 6, 9, 20]));
        let advanced = advance_chain(&ChainRecord { steps: vec![seed] }, 1);
        assert!(advanced.failure.is_none());
        assert_eq!(advanced.record.steps[1].system.order(), 79);
    }

    #[test]
    fn chain_json_round_trip() {
        let ext = theorem5_certificate();
        let seed = seed_certificate(&ext).unwrap();
        let record = ChainRecord { steps: vec![seed] };
        let json = serde_json::to_string(&record).unwrap();
        let back: ChainRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, record);
    }
}
