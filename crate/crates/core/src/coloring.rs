//! Bicolorings of triple systems: verification, exhaustive enumeration of
//! color-class patterns, chromatic bounds, and independence numbers.
//!
//! A coloring of an STS is a *bicoloring* when every triple receives exactly
//! two distinct colors (no monochromatic and no polychromatic triple). A
//! strict k-bicoloring uses all k colors. The minimum and maximum k over all
//! strict bicolorings are the lower and upper chromatic numbers.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::budget::Budget;
use crate::design::TripleSystem;
use crate::error::{Error, Result};

/// A point-to-color assignment with a declared number of colors `k`.
/// Every entry is below `k`; strictness (all colors used) is checked by
/// [`verify_bicoloring`], not assumed here.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Coloring {
    k: usize,
    colors: Vec<usize>,
}

impl Serialize for Coloring {
    fn serialize<S>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error>
    where
        S: serde::Serializer,
    {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Coloring", 3)?;
        s.serialize_field("v", &self.colors.len())?;
        s.serialize_field("k", &self.k)?;
        s.serialize_field("colors", &self.colors)?;
        s.end()
    }
}

impl Coloring {
    pub fn new(k: usize, colors: Vec<usize>) -> Result<Self> {
        if let Some(&c) = colors.iter().find(|&&c| c >= k) {
            return Err(Error::InvalidInput {
                detail: format!("color {c} is not below k = {k}"),
            });
        }
        Ok(Coloring { k, colors })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Class sizes indexed by color (not sorted).
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &c in &self.colors {
            sizes[c] += 1;
        }
        sizes
    }

    /// Relabels colors so class sizes are ascending by color index
    /// (ties keep the original color order). The underlying partition is
    /// unchanged; this aligns color positions with the sorted pattern.
    pub fn sorted_by_class_size(&self) -> Coloring {
        let sizes = self.class_sizes();
        let mut order: Vec<usize> = (0..self.k).collect();
        order.sort_by_key(|&c| (sizes[c], c));
        let mut relabel = vec![0usize; self.k];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new;
        }
        Coloring {
            k: self.k,
            colors: self.colors.iter().map(|&c| relabel[c]).collect(),
        }
    }

    /// Appends `count` points of a single fresh color.
    pub fn extend_with_fresh_class(&self, count: usize) -> Coloring {
        let mut colors = self.colors.clone();
        colors.extend(std::iter::repeat_n(self.k, count));
        Coloring {
            k: self.k + 1,
            colors,
        }
    }
}

// JSON carries an explicit "v" alongside k and the color array.
impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            v: usize,
            k: usize,
            colors: Vec<usize>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.v != raw.colors.len() {
            return Err(serde::de::Error::custom(format!(
                "declared v = {} but {} colors given",
                raw.v,
                raw.colors.len()
            )));
        }
        Coloring::new(raw.k, raw.colors).map_err(serde::de::Error::custom)
    }
}

/// Sorted multiset of color-class sizes `n_1 <= n_2 <= ... <= n_k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Pattern {
    sizes: Vec<usize>,
}

impl Pattern {
    pub fn new(sizes: impl IntoIterator<Item = usize>) -> Self {
        let mut sizes: Vec<usize> = sizes.into_iter().collect();
        sizes.sort_unstable();
        Pattern { sizes }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({})",
            self.sizes
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Sorted class-size multiset of a coloring.
pub fn pattern_of(col: &Coloring) -> Pattern {
    Pattern::new(col.class_sizes())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BicoloringViolation {
    /// A triple whose points all share one color.
    Monochromatic {
        triple: [usize; 3],
        colors: [usize; 3],
    },
    /// A triple with three distinct colors.
    Polychromatic {
        triple: [usize; 3],
        colors: [usize; 3],
    },
    /// A declared color with an empty class (coloring is not strict).
    ColorUnused { color: usize },
}

impl std::fmt::Display for BicoloringViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BicoloringViolation::Monochromatic { triple, colors } => {
                write!(
                    f,
                    "triple {triple:?} is monochromatic with colors {colors:?}"
                )
            }
            BicoloringViolation::Polychromatic { triple, colors } => {
                write!(
                    f,
                    "triple {triple:?} is polychromatic with colors {colors:?}"
                )
            }
            BicoloringViolation::ColorUnused { color } => {
                write!(f, "color {color} is unused")
            }
        }
    }
}

/// Result of the strict-bicoloring check. `ok` iff every triple has exactly
/// two distinct colors and every declared color is used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicoloringReport {
    pub ok: bool,
    pub violation: Option<BicoloringViolation>,
}

/// Verifies the strict bicoloring condition. The first violation is
/// deterministic: the lexicographically first offending triple (the triple
/// list is canonically sorted), then unused colors in ascending order.
pub fn verify_bicoloring(sts: &TripleSystem, col: &Coloring) -> Result<BicoloringReport> {
    if col.len() != sts.order() {
        return Err(Error::LengthMismatch {
            expected: sts.order(),
            actual: col.len(),
        });
    }
    if let Some(&t) = sts.triples().iter().find(|t| t[2] >= sts.order()) {
        return Err(Error::InvalidInput {
            detail: format!("triple {t:?} leaves the point set 0..{}", sts.order()),
        });
    }
    for &t in sts.triples() {
        let cs = [col.colors[t[0]], col.colors[t[1]], col.colors[t[2]]];
        let distinct = {
            let mut s = cs;
            s.sort_unstable();
            1 + (s[0] != s[1]) as usize + (s[1] != s[2]) as usize
        };
        if distinct == 1 {
            return Ok(BicoloringReport {
                ok: false,
                violation: Some(BicoloringViolation::Monochromatic {
                    triple: t,
                    colors: cs,
                }),
            });
        }
        if distinct == 3 {
            return Ok(BicoloringReport {
                ok: false,
                violation: Some(BicoloringViolation::Polychromatic {
                    triple: t,
                    colors: cs,
                }),
            });
        }
    }
    let sizes = col.class_sizes();
    if let Some(color) = sizes.iter().position(|&s| s == 0) {
        return Ok(BicoloringReport {
            ok: false,
            violation: Some(BicoloringViolation::ColorUnused { color }),
        });
    }
    Ok(BicoloringReport {
        ok: true,
        violation: None,
    })
}

/// Largest admissible color count: the biggest `k` with `2^k - 1 <= v`.
/// A strict k-bicoloring needs at least `2^k - 1` points.
pub fn max_colors_bound(v: usize) -> usize {
    let mut k = 1usize;
    while (1usize << (k + 1)) - 1 <= v {
        k += 1;
    }
    k
}

/// Result of exhaustive bicoloring enumeration. `complete` is false when the
/// node budget ran out; the witnesses found so far are still returned.
#[derive(Debug, Clone)]
pub struct EnumerationResult {
    /// One canonical witness per realized pattern (the lexicographically
    /// least coloring in first-occurrence form).
    pub witnesses: BTreeMap<Pattern, Coloring>,
    pub complete: bool,
    pub nodes: u64,
}

impl EnumerationResult {
    pub fn patterns(&self) -> Vec<Pattern> {
        self.witnesses.keys().cloned().collect()
    }
}

/// Enumerates all strict k-bicolorings of `sts` up to color relabeling,
/// returning the realized patterns with one witness each.
///
/// Symmetry breaking: point 0 gets color 0 and new colors appear in
/// increasing order along the point sequence, so each labeled class partition
/// is visited exactly once.
pub fn enumerate_bicolorings(sts: &TripleSystem, k: usize, budget: &Budget) -> EnumerationResult {
    let v = sts.order();
    let mut by_max: Vec<Vec<[usize; 3]>> = vec![Vec::new(); v];
    for &t in sts.triples() {
        by_max[t[2]].push(t);
    }
    let mut colors = vec![0usize; v];
    let mut witnesses: BTreeMap<Pattern, Coloring> = BTreeMap::new();
    let mut nodes = 0u64;
    let complete = enumerate_rec(
        &by_max,
        v,
        k,
        0,
        0,
        &mut colors,
        &mut witnesses,
        budget,
        &mut nodes,
    );
    EnumerationResult {
        witnesses,
        complete,
        nodes,
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rec(
    by_max: &[Vec<[usize; 3]>],
    v: usize,
    k: usize,
    point: usize,
    used: usize,
    colors: &mut Vec<usize>,
    witnesses: &mut BTreeMap<Pattern, Coloring>,
    budget: &Budget,
    nodes: &mut u64,
) -> bool {
    if point == v {
        if used == k {
            let col = Coloring {
                k,
                colors: colors.clone(),
            };
            witnesses.entry(pattern_of(&col)).or_insert(col);
        }
        return true;
    }
    // remaining points must be able to introduce the missing colors
    if k - used > v - point {
        return true;
    }
    let limit = (used + 1).min(k);
    for c in 0..limit {
        *nodes += 1;
        if !budget.tick() {
            return false;
        }
        colors[point] = c;
        let ok = by_max[point].iter().all(|t| {
            let cs = [colors[t[0]], colors[t[1]], colors[t[2]]];
            let mut s = cs;
            s.sort_unstable();
            let distinct = 1 + (s[0] != s[1]) as usize + (s[1] != s[2]) as usize;
            distinct == 2
        });
        if ok {
            let new_used = used.max(c + 1);
            if !enumerate_rec(
                by_max,
                v,
                k,
                point + 1,
                new_used,
                colors,
                witnesses,
                budget,
                nodes,
            ) {
                return false;
            }
        }
    }
    colors[point] = 0;
    true
}

/// Chromatic information established within a budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChromaticOutcome {
    /// Every admissible k was searched to completion and none admits a strict
    /// bicoloring.
    Uncolorable,
    /// Both bounds are exact: chi is the least and chi_bar the greatest k
    /// admitting a strict k-bicoloring.
    Exact { chi: usize, chi_bar: usize },
    /// The budget ran out; only these bounds are established.
    Partial {
        chi_at_least: usize,
        chi_at_most: Option<usize>,
        chi_bar_at_least: Option<usize>,
        chi_bar_at_most: usize,
    },
}

/// Computes the lower and upper chromatic numbers by exhaustive enumeration
/// over every admissible color count, sharing one node budget. Unproved
/// values are never asserted: if the budget dies the outcome is `Partial`
/// with only the bounds established by completed searches.
pub fn chromatic_bounds(sts: &TripleSystem, budget: &Budget) -> ChromaticOutcome {
    let v = sts.order();
    if v == 1 {
        // one point, no triples: the single strict coloring uses one color
        return ChromaticOutcome::Exact { chi: 1, chi_bar: 1 };
    }
    let kmax = max_colors_bound(v);
    let mut lowest: Option<usize> = None;
    let mut highest: Option<usize> = None;
    let mut all_complete = true;
    let mut chi_at_least = 2;
    let mut prefix_complete = true;
    for k in 2..=kmax {
        let result = enumerate_bicolorings(sts, k, budget);
        let nonempty = !result.witnesses.is_empty();
        if nonempty {
            lowest.get_or_insert(k);
            highest = Some(k);
        }
        if !result.complete {
            all_complete = false;
        }
        if prefix_complete && result.complete && !nonempty && lowest.is_none() {
            chi_at_least = k + 1;
        }
        if !result.complete {
            prefix_complete = false;
        }
    }
    if all_complete {
        match (lowest, highest) {
            (Some(chi), Some(chi_bar)) => ChromaticOutcome::Exact { chi, chi_bar },
            _ => ChromaticOutcome::Uncolorable,
        }
    } else {
        ChromaticOutcome::Partial {
            chi_at_least,
            chi_at_most: lowest,
            chi_bar_at_least: highest,
            chi_bar_at_most: kmax,
        }
    }
}

/// Independence data: the largest point set containing no full triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceResult {
    /// Exact when `exact`, otherwise the best lower bound found.
    pub alpha: usize,
    pub witness: Vec<usize>,
    pub exact: bool,
    /// `3 * alpha <= v`, which rules out any bicoloring. Only asserted when
    /// the value is exact.
    pub uncolorable_flag: bool,
}

/// Branch-and-bound maximum independent set (no triple fully inside).
pub fn independence_number(sts: &TripleSystem, budget: &Budget) -> IndependenceResult {
    let v = sts.order();
    let mut by_max: Vec<Vec<(usize, usize)>> = vec![Vec::new(); v];
    for &t in sts.triples() {
        by_max[t[2]].push((t[0], t[1]));
    }
    let mut in_set = vec![false; v];
    let mut current: Vec<usize> = Vec::new();
    let mut best: Vec<usize> = Vec::new();
    let complete = independence_rec(&by_max, v, 0, &mut in_set, &mut current, &mut best, budget);
    let alpha = best.len();
    IndependenceResult {
        alpha,
        witness: best,
        exact: complete,
        uncolorable_flag: complete && 3 * alpha <= v,
    }
}

fn independence_rec(
    by_max: &[Vec<(usize, usize)>],
    v: usize,
    point: usize,
    in_set: &mut Vec<bool>,
    current: &mut Vec<usize>,
    best: &mut Vec<usize>,
    budget: &Budget,
) -> bool {
    if current.len() + (v - point) <= best.len() {
        return true;
    }
    if point == v {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return true;
    }
    if !budget.tick() {
        return false;
    }
    // include `point` unless it completes a triple
    if by_max[point]
        .iter()
        .all(|&(a, b)| !(in_set[a] && in_set[b]))
    {
        in_set[point] = true;
        current.push(point);
        let done = independence_rec(by_max, v, point + 1, in_set, current, best, budget);
        current.pop();
        in_set[point] = false;
        if !done {
            return false;
        }
    }
    independence_rec(by_max, v, point + 1, in_set, current, best, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::bose_construction;
    use crate::fixtures;

    #[test]
    fn example12_coloring_verifies_with_pattern_4_6_9() {
        let (sts, col) = fixtures::example12();
        let report = verify_bicoloring(&sts, &col).unwrap();
        assert!(report.ok, "{:?}", report.violation);
        assert_eq!(pattern_of(&col), Pattern::new([4, 6, 9]));
    }

    #[test]
    fn monochromatic_and_polychromatic_violations() {
        let fano = fixtures::fano();
        let mono = Coloring::new(1, vec![0; 7]).unwrap();
        let report = verify_bicoloring(&fano, &mono).unwrap();
        assert!(matches!(
            report.violation,
            Some(BicoloringViolation::Monochromatic { .. })
        ));
        let poly = Coloring::new(7, (0..7).collect()).unwrap();
        let report = verify_bicoloring(&fano, &poly).unwrap();
        assert!(matches!(
            report.violation,
            Some(BicoloringViolation::Polychromatic { .. })
        ));
        let short = Coloring::new(2, vec![0, 1]).unwrap();
        assert!(matches!(
            verify_bicoloring(&fano, &short),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn unused_color_is_reported() {
        // a valid bicoloring of the single triple, but declaring 3 colors
        let sts = bose_construction(3).unwrap();
        let col = Coloring::new(3, vec![0, 0, 1]).unwrap();
        let report = verify_bicoloring(&sts, &col).unwrap();
        assert!(matches!(
            report.violation,
            Some(BicoloringViolation::ColorUnused { color: 2 })
        ));
    }

    #[test]
    fn pattern_sorting_and_display() {
        let col = Coloring::new(
            3,
            vec![
                2, 2, 2, 2, 2, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2,
            ],
        )
        .unwrap();
        assert_eq!(pattern_of(&col).sizes(), &[5, 10, 10]);
        let single = Coloring::new(1, vec![0; 7]).unwrap();
        assert_eq!(pattern_of(&single).sizes(), &[7]);
    }

    #[test]
    fn sts9_has_exactly_one_bicoloring_pattern() {
        let sts9 = fixtures::sts9();
        let result = enumerate_bicolorings(&sts9, 3, &Budget::unlimited());
        assert!(result.complete);
        assert_eq!(result.patterns(), vec![Pattern::new([1, 4, 4])]);
        let witness = &result.witnesses[&Pattern::new([1, 4, 4])];
        assert!(verify_bicoloring(&sts9, witness).unwrap().ok);
    }

    #[test]
    fn fano_has_exactly_pattern_1_2_4() {
        let fano = fixtures::fano();
        let result = enumerate_bicolorings(&fano, 3, &Budget::unlimited());
        assert!(result.complete);
        assert_eq!(result.patterns(), vec![Pattern::new([1, 2, 4])]);
    }

    #[test]
    fn no_sts_in_corpus_is_two_bicolorable() {
        for sts in [fixtures::fano(), fixtures::sts9(), fixtures::cyclic13()] {
            let result = enumerate_bicolorings(&sts, 2, &Budget::unlimited());
            assert!(result.complete);
            assert!(result.witnesses.is_empty(), "v = {}", sts.order());
        }
    }

    #[test]
    fn cyclic13_has_exactly_pattern_2_5_6() {
        let sts = fixtures::cyclic13();
        let result = enumerate_bicolorings(&sts, 3, &Budget::unlimited());
        assert!(result.complete);
        assert_eq!(result.patterns(), vec![Pattern::new([2, 5, 6])]);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let sts = fixtures::cyclic13();
        let result = enumerate_bicolorings(&sts, 3, &Budget::new(10));
        assert!(!result.complete);
    }

    #[test]
    fn max_colors_bound_values() {
        assert_eq!(max_colors_bound(7), 3);
        assert_eq!(max_colors_bound(27), 4);
        assert_eq!(max_colors_bound(31), 5);
        assert_eq!(max_colors_bound(30), 4);
        assert_eq!(max_colors_bound(63), 6);
    }

    #[test]
    fn chromatic_bounds_small_systems() {
        assert_eq!(
            chromatic_bounds(&fixtures::fano(), &Budget::unlimited()),
            ChromaticOutcome::Exact { chi: 3, chi_bar: 3 }
        );
        assert_eq!(
            chromatic_bounds(&fixtures::sts9(), &Budget::unlimited()),
            ChromaticOutcome::Exact { chi: 3, chi_bar: 3 }
        );
    }

    #[test]
    fn uncolorable_systems_are_detected() {
        // this STS(15) admits no strict bicoloring for any k
        let sts = bose_construction(15).unwrap();
        let outcome = chromatic_bounds(&sts, &Budget::unlimited());
        assert_eq!(outcome, ChromaticOutcome::Uncolorable);
        // its independence number is 6, so the alpha <= v/3 shortcut
        // does not fire here; uncolorability needed the full search
        let ind = independence_number(&sts, &Budget::unlimited());
        assert!(ind.exact);
        assert_eq!(ind.alpha, 6);
        assert!(!ind.uncolorable_flag);
    }

    #[test]
    fn independence_numbers() {
        let fano = independence_number(&fixtures::fano(), &Budget::unlimited());
        assert!(fano.exact);
        assert_eq!(fano.alpha, 4);
        assert!(!fano.uncolorable_flag);

        let s3 = independence_number(&bose_construction(3).unwrap(), &Budget::unlimited());
        assert_eq!(s3.alpha, 2);

        let s9 = independence_number(&fixtures::sts9(), &Budget::unlimited());
        assert_eq!(s9.alpha, 4);
        assert!(!s9.uncolorable_flag);
    }

    #[test]
    fn example12_admits_only_its_three_bicoloring() {
        // chi = chi-bar = 3: the (4,6,9) pattern is this system's only one,
        // for any admissible color count
        let (sts, _) = fixtures::example12();
        assert_eq!(
            chromatic_bounds(&sts, &Budget::unlimited()),
            ChromaticOutcome::Exact { chi: 3, chi_bar: 3 }
        );
        let three = enumerate_bicolorings(&sts, 3, &Budget::unlimited());
        assert_eq!(three.patterns(), vec![Pattern::new([4, 6, 9])]);
    }

    #[test]
    fn chromatic_bounds_partial_on_tiny_budget() {
        let sts = fixtures::cyclic13();
        match chromatic_bounds(&sts, &Budget::new(5)) {
            ChromaticOutcome::Partial {
                chi_at_least,
                chi_bar_at_most,
                ..
            } => {
                assert!(chi_at_least >= 2);
                assert_eq!(chi_bar_at_most, max_colors_bound(13));
            }
            other => panic!("expected partial bounds, got {other:?}"),
        }
    }

    #[test]
    fn coloring_json_round_trip() {
        let col = Coloring::new(3, vec![0, 1, 2, 0, 0, 1, 1]).unwrap();
        let json = serde_json::to_string(&col).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["v"], 7);
        assert_eq!(parsed["k"], 3);
        let round: Coloring = serde_json::from_str(&json).unwrap();
        assert_eq!(round, col);
        // mismatched v is rejected
        assert!(
            serde_json::from_str::<Coloring>(r#"{"v": 6, "k": 3, "colors": [0,1,2,0,0,1,1]}"#)
                .is_err()
        );
    }
}
