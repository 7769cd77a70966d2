//! Steiner triple systems: validation, the Bose and Skolem constructions,
//! the doubling construction, and subsystem detection.
//!
//! A Steiner triple system of order `v`, STS(v), is a set of 3-element blocks
//! ("triples") over points `0..v` such that every pair of distinct points lies
//! in exactly one triple. Systems exist exactly for `v ≡ 1, 3 (mod 6)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{validate_factorization, GraphKind, OneFactorization};

/// An order-`v` triple system candidate in canonical form: every triple is
/// sorted ascending and the triple list is sorted lexicographically, so two
/// equal systems serialize identically.
///
/// Construction does not validate; run [`validate_sts`] (or [`TripleSystem::validate`])
/// to check the STS axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleSystem {
    v: usize,
    triples: Vec<[usize; 3]>,
}

impl TripleSystem {
    /// Canonicalizes the given triples: sorts within each triple, then sorts
    /// the list. Duplicates are kept (validation reports them as pair clashes).
    pub fn new(v: usize, triples: impl IntoIterator<Item = [usize; 3]>) -> Self {
        let mut triples: Vec<[usize; 3]> = triples
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t
            })
            .collect();
        triples.sort_unstable();
        TripleSystem { v, triples }
    }

    pub fn order(&self) -> usize {
        self.v
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    pub fn validate(&self) -> ValidationReport {
        validate_sts(self.v, &self.triples)
    }

    /// Number of triples an STS(v) must have.
    pub fn expected_triple_count(v: usize) -> usize {
        v * v.saturating_sub(1) / 6
    }
}

// The reader tolerates unsorted input and canonicalizes it.
impl<'de> Deserialize<'de> for TripleSystem {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            v: usize,
            triples: Vec<[usize; 3]>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Ok(TripleSystem::new(raw.v, raw.triples))
    }
}

/// First violated STS invariant, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum StsViolation {
    /// `v` is not congruent to 1 or 3 mod 6.
    InadmissibleOrder { v: usize },
    /// A triple mentions a point outside `0..v`.
    PointOutOfRange { triple: [usize; 3], point: usize },
    /// A triple repeats a point.
    RepeatedPoint { triple: [usize; 3] },
    /// The triple count is not v(v-1)/6.
    WrongTripleCount { expected: usize, actual: usize },
    /// Some pair of points occurs in two triples.
    DuplicatePair { pair: (usize, usize) },
    /// Some pair of points occurs in no triple.
    UncoveredPair { pair: (usize, usize) },
}

impl std::fmt::Display for StsViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StsViolation::InadmissibleOrder { v } => {
                write!(f, "order {v} is not 1 or 3 mod 6")
            }
            StsViolation::PointOutOfRange { triple, point } => {
                write!(
                    f,
                    "triple {triple:?} uses point {point} outside the point set"
                )
            }
            StsViolation::RepeatedPoint { triple } => {
                write!(f, "triple {triple:?} repeats a point")
            }
            StsViolation::WrongTripleCount { expected, actual } => {
                write!(f, "expected {expected} triples, found {actual}")
            }
            StsViolation::DuplicatePair { pair } => {
                write!(
                    f,
                    "pair {{{}, {}}} occurs in more than one triple",
                    pair.0, pair.1
                )
            }
            StsViolation::UncoveredPair { pair } => {
                write!(f, "pair {{{}, {}}} occurs in no triple", pair.0, pair.1)
            }
        }
    }
}

/// Outcome of checking the STS axioms. Invalidity is data, not an error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violation: Option<StsViolation>,
}

impl ValidationReport {
    fn ok() -> Self {
        ValidationReport {
            valid: true,
            violation: None,
        }
    }

    fn fail(violation: StsViolation) -> Self {
        ValidationReport {
            valid: false,
            violation: Some(violation),
        }
    }
}

/// Checks the STS axioms on a raw candidate: admissible order, correct triple
/// count, and every pair of distinct points covered exactly once. On failure
/// the report names the first duplicated or uncovered pair.
pub fn validate_sts(v: usize, triples: &[[usize; 3]]) -> ValidationReport {
    if v == 0 || (v % 6 != 1 && v % 6 != 3) {
        return ValidationReport::fail(StsViolation::InadmissibleOrder { v });
    }
    for &t in triples {
        for &p in &t {
            if p >= v {
                return ValidationReport::fail(StsViolation::PointOutOfRange {
                    triple: t,
                    point: p,
                });
            }
        }
        if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
            return ValidationReport::fail(StsViolation::RepeatedPoint { triple: t });
        }
    }
    let expected = TripleSystem::expected_triple_count(v);
    if triples.len() != expected {
        return ValidationReport::fail(StsViolation::WrongTripleCount {
            expected,
            actual: triples.len(),
        });
    }
    // Pair coverage. Count occurrences; scan order makes the witness deterministic.
    let mut seen = vec![false; v * v];
    for &t in triples {
        for &(a, b) in &[(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let idx = lo * v + hi;
            if seen[idx] {
                return ValidationReport::fail(StsViolation::DuplicatePair { pair: (lo, hi) });
            }
            seen[idx] = true;
        }
    }
    for lo in 0..v {
        for hi in lo + 1..v {
            if !seen[lo * v + hi] {
                return ValidationReport::fail(StsViolation::UncoveredPair { pair: (lo, hi) });
            }
        }
    }
    ValidationReport::ok()
}

/// Bose construction for `v ≡ 3 (mod 6)`.
///
/// Points are `(x, i)` with `x` in the cyclic group of odd order `m = v/3`
/// and level `i` in `{0,1,2}`, flattened as `3x + i`. Triples are the `m`
/// verticals `{(x,0),(x,1),(x,2)}` together with `{(x,i),(y,i),((x+y)/2, i+1)}`
/// for `x < y`, where division by 2 is taken in the cyclic group. Deterministic
/// for fixed `v`.
pub fn bose_construction(v: usize) -> Result<TripleSystem> {
    if v % 6 != 3 {
        return Err(Error::OrderNotAdmissible {
            v,
            expected: "v ≡ 3 (mod 6), v ≥ 3",
        });
    }
    let m = v / 3; // odd
    let half = m.div_ceil(2); // inverse of 2 mod m
    let pt = |x: usize, i: usize| 3 * x + i;
    let mut triples = Vec::with_capacity(TripleSystem::expected_triple_count(v));
    for x in 0..m {
        triples.push([pt(x, 0), pt(x, 1), pt(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..m {
            for y in x + 1..m {
                let z = (x + y) * half % m;
                triples.push([pt(x, i), pt(y, i), pt(z, (i + 1) % 3)]);
            }
        }
    }
    Ok(TripleSystem::new(v, triples))
}

/// Skolem construction for `v ≡ 1 (mod 6)`, `v ≥ 7`.
///
/// Points are `(x, i)` with `x` in `0..2n` (where `v = 6n + 1`) and level `i`
/// in `{0,1,2}`, flattened as `3x + i`, plus a fixed point `v - 1`. The level
/// products use the half-idempotent commutative quasigroup on `0..2n` obtained
/// by relabeling cyclic addition so that `x ∘ x = x` for `x < n`. Deterministic
/// for fixed `v`.
pub fn skolem_construction(v: usize) -> Result<TripleSystem> {
    if v % 6 != 1 || v < 7 {
        return Err(Error::OrderNotAdmissible {
            v,
            expected: "v ≡ 1 (mod 6), v ≥ 7",
        });
    }
    let n = (v - 1) / 6;
    let tn = 2 * n;
    // Relabeled cyclic addition: even sums map to their halves, odd sums to n + (s-1)/2.
    let half = |e: usize| {
        if e.is_multiple_of(2) {
            e / 2
        } else {
            n + (e - 1) / 2
        }
    };
    let q = |i: usize, j: usize| half((i + j) % tn);
    let pt = |x: usize, i: usize| 3 * x + i;
    let inf = v - 1;
    let mut triples = Vec::with_capacity(TripleSystem::expected_triple_count(v));
    for i in 0..n {
        triples.push([pt(i, 0), pt(i, 1), pt(i, 2)]);
    }
    for i in 0..n {
        triples.push([inf, pt(n + i, 0), pt(i, 1)]);
        triples.push([inf, pt(n + i, 1), pt(i, 2)]);
        triples.push([inf, pt(n + i, 2), pt(i, 0)]);
    }
    for lvl in 0..3 {
        for i in 0..tn {
            for j in i + 1..tn {
                triples.push([pt(i, lvl), pt(j, lvl), pt(q(i, j), (lvl + 1) % 3)]);
            }
        }
    }
    Ok(TripleSystem::new(v, triples))
}

/// Pairing of base points with factors of the doubling: base point `i` uses
/// factor `map[i]` of the 1-factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingAssociation {
    pub map: Vec<usize>,
}

impl DoublingAssociation {
    pub fn identity(v: usize) -> Self {
        DoublingAssociation {
            map: (0..v).collect(),
        }
    }

    /// Total, injective and surjective onto `0..len`.
    pub fn check_bijection(&self, v: usize) -> Result<()> {
        if self.map.len() != v {
            return Err(Error::SizeMismatch {
                what: "association entries",
                expected: v,
                actual: self.map.len(),
            });
        }
        let mut hit = vec![false; v];
        for (i, &f) in self.map.iter().enumerate() {
            if f >= v {
                return Err(Error::InvalidAssociation {
                    detail: format!("point {i} maps to factor {f}, outside 0..{v}"),
                });
            }
            if hit[f] {
                return Err(Error::InvalidAssociation {
                    detail: format!("factor {f} is assigned to two points"),
                });
            }
            hit[f] = true;
        }
        Ok(())
    }
}

/// Doubling construction `v -> 2v + 1`.
///
/// Takes an STS(v), a 1-factorization of the complete graph on `v + 1` fresh
/// points, and an association of base points with factors. The new points get
/// indices `v..=2v`; factor vertex `x` becomes point `v + x`. Output triples
/// are the base triples plus `{i, v+x, v+y}` for every edge `{x, y}` of the
/// factor associated with base point `i`.
pub fn double(
    base: &TripleSystem,
    factorization: &OneFactorization,
    assoc: &DoublingAssociation,
) -> Result<TripleSystem> {
    let v = base.order();
    if factorization.vertex_count() != v + 1 {
        return Err(Error::SizeMismatch {
            what: "factorization vertex count",
            expected: v + 1,
            actual: factorization.vertex_count(),
        });
    }
    assoc.check_bijection(v)?;
    let report = validate_factorization(factorization, &GraphKind::Complete { m: v + 1 });
    if !report.valid {
        return Err(Error::InvalidFactorization {
            detail: report
                .violation
                .map(|w| w.to_string())
                .unwrap_or_else(|| "unknown defect".into()),
        });
    }
    let mut triples: Vec<[usize; 3]> = base.triples().to_vec();
    for (i, &fidx) in assoc.map.iter().enumerate() {
        for &(x, y) in factorization.factors()[fidx].edges() {
            triples.push([i, v + x, v + y]);
        }
    }
    Ok(TripleSystem::new(2 * v + 1, triples))
}

/// A point subset whose induced triples form an STS in their own right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemWitness {
    /// The subset, sorted ascending.
    pub points: Vec<usize>,
    /// The induced triples in the labels of the host system.
    pub induced_triples: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubsystemOutcome {
    Subsystem(SubsystemWitness),
    NotASubsystem { reason: String },
}

impl SubsystemOutcome {
    pub fn is_subsystem(&self) -> bool {
        matches!(self, SubsystemOutcome::Subsystem(_))
    }
}

/// Tests whether the triples of `sts` lying inside `subset` form an STS on the
/// subset (after re-indexing the subset's points as `0..|subset|`).
pub fn find_subsystem(sts: &TripleSystem, subset: &[usize]) -> SubsystemOutcome {
    let mut points: Vec<usize> = subset.to_vec();
    points.sort_unstable();
    points.dedup();
    if let Some(&p) = points.iter().find(|&&p| p >= sts.order()) {
        return SubsystemOutcome::NotASubsystem {
            reason: format!("point {p} is not a point of the host system"),
        };
    }
    let rank: std::collections::BTreeMap<usize, usize> =
        points.iter().enumerate().map(|(r, &p)| (p, r)).collect();
    let mut induced = Vec::new();
    let mut reindexed = Vec::new();
    for &t in sts.triples() {
        if t.iter().all(|p| rank.contains_key(p)) {
            induced.push(t);
            reindexed.push([rank[&t[0]], rank[&t[1]], rank[&t[2]]]);
        }
    }
    let report = validate_sts(points.len(), &reindexed);
    if report.valid {
        SubsystemOutcome::Subsystem(SubsystemWitness {
            points,
            induced_triples: induced,
        })
    } else {
        SubsystemOutcome::NotASubsystem {
            reason: report
                .violation
                .map(|w| format!("induced triples are not an STS: {w}"))
                .unwrap_or_else(|| "induced triples are not an STS".into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::circle_factorization;
    use crate::fixtures;

    #[test]
    fn fano_is_valid() {
        let report = fixtures::fano().validate();
        assert!(report.valid, "{:?}", report.violation);
    }

    #[test]
    fn fano_minus_a_triple_reports_uncovered_pair() {
        let fano = fixtures::fano();
        let rest: Vec<[usize; 3]> = fano.triples()[1..].to_vec();
        let report = validate_sts(7, &rest);
        assert!(!report.valid);
        assert!(matches!(
            report.violation,
            Some(StsViolation::WrongTripleCount {
                expected: 7,
                actual: 6
            })
        ));
        // Pad back to the right count with a duplicate so the pair check runs:
        // the duplicate surfaces first, and the removed triple's pairs stay uncovered.
        let mut padded = rest.clone();
        padded.push(rest[0]);
        let report = validate_sts(7, &padded);
        assert!(matches!(
            report.violation,
            Some(StsViolation::DuplicatePair { .. })
        ));
    }

    #[test]
    fn example12_is_a_valid_sts19() {
        let (sts, _) = fixtures::example12();
        assert_eq!(sts.order(), 19);
        assert_eq!(sts.triples().len(), 57);
        assert!(sts.validate().valid);
    }

    #[test]
    fn bose_small_orders() {
        let s3 = bose_construction(3).unwrap();
        assert_eq!(s3.triples(), &[[0, 1, 2]]);
        let s9 = bose_construction(9).unwrap();
        assert_eq!(s9.triples().len(), 12);
        assert!(s9.validate().valid);
        let s21 = bose_construction(21).unwrap();
        assert_eq!(s21.triples().len(), 70);
        assert!(s21.validate().valid);
        assert!(matches!(
            bose_construction(7),
            Err(Error::OrderNotAdmissible { .. })
        ));
    }

    #[test]
    fn skolem_small_orders() {
        let s7 = skolem_construction(7).unwrap();
        assert_eq!(s7.triples().len(), 7);
        assert!(s7.validate().valid);
        let s13 = skolem_construction(13).unwrap();
        assert_eq!(s13.triples().len(), 26);
        assert!(s13.validate().valid);
        assert!(matches!(
            skolem_construction(9),
            Err(Error::OrderNotAdmissible { .. })
        ));
    }

    #[test]
    fn constructions_validate_up_to_order_fifty() {
        for v in (3..=51).filter(|v| v % 6 == 3) {
            assert!(bose_construction(v).unwrap().validate().valid, "bose({v})");
        }
        for v in (7..=49).filter(|v| v % 6 == 1) {
            assert!(
                skolem_construction(v).unwrap().validate().valid,
                "skolem({v})"
            );
        }
    }

    #[test]
    fn doubling_sts3_gives_sts7() {
        let base = bose_construction(3).unwrap();
        let f = circle_factorization(4).unwrap();
        let doubled = double(&base, &f, &DoublingAssociation::identity(3)).unwrap();
        assert_eq!(doubled.order(), 7);
        assert!(doubled.validate().valid);
    }

    #[test]
    fn doubling_sts9_contains_base_subsystem() {
        let base = bose_construction(9).unwrap();
        let f = circle_factorization(10).unwrap();
        let doubled = double(&base, &f, &DoublingAssociation::identity(9)).unwrap();
        assert_eq!(doubled.order(), 19);
        assert!(doubled.validate().valid);
        let subset: Vec<usize> = (0..9).collect();
        match find_subsystem(&doubled, &subset) {
            SubsystemOutcome::Subsystem(w) => {
                assert_eq!(w.induced_triples.len(), 12);
                assert_eq!(w.induced_triples, base.triples());
            }
            other => panic!("expected subsystem, got {other:?}"),
        }
    }

    #[test]
    fn doubling_rejects_broken_factorization() {
        let base = bose_construction(9).unwrap();
        let mut f = circle_factorization(10).unwrap();
        f.factors_mut().pop();
        let err = double(&base, &f, &DoublingAssociation::identity(9)).unwrap_err();
        assert!(matches!(err, Error::InvalidFactorization { .. }), "{err}");
    }

    #[test]
    fn subsystem_detection_on_example12() {
        let (sts, _) = fixtures::example12();
        match find_subsystem(&sts, &[0, 1, 2, 3, 9, 10, 15]) {
            SubsystemOutcome::Subsystem(w) => assert_eq!(w.induced_triples.len(), 7),
            other => panic!("expected the sub-STS(7), got {other:?}"),
        }
        assert!(!find_subsystem(&sts, &[0, 1, 2, 3, 4, 5, 6]).is_subsystem());
        // any single triple is an STS(3)
        let t = sts.triples()[0];
        assert!(find_subsystem(&sts, &t).is_subsystem());
    }

    #[test]
    fn json_reader_canonicalizes() {
        let json =
            r#"{"v": 7, "triples": [[3,1,0],[2,1,4],[5,3,2],[6,4,3],[4,0,5],[1,6,5],[0,6,2]]}"#;
        let sts: TripleSystem = serde_json::from_str(json).unwrap();
        assert_eq!(sts, fixtures::fano());
        let out = serde_json::to_string(&sts).unwrap();
        let back: TripleSystem = serde_json::from_str(&out).unwrap();
        assert_eq!(back, sts);
    }
}
