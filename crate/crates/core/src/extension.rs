//! Extended bicolorings of doubled systems: the feasibility equation for the
//! per-color counts of the added points, the two elimination filters, the
//! constructive split-factorization extensions, the generic backtracking
//! search, and re-verifiable extension certificates.
//!
//! Setting: an STS(v) with a strict k-bicoloring of class sizes
//! `n_1, ..., n_k` is doubled to an STS(2v+1). An *extended* bicoloring
//! colors the `v + 1` added points with the same k colors so that the whole
//! doubled system is again a strict k-bicoloring agreeing with the base
//! coloring on the base points. Writing `c_i` for the number of added points
//! of color `i`, counting the pairs of added points by type forces
//!
//! ```text
//!     sum c_i = v + 1      and      sum c_i^2 + 2 sum n_i c_i = (v + 1)^2
//! ```
//!
//! because each factor paired with a base point of color `j` may contain only
//! pairs monochromatic in a color other than `j` or pairs joining color `j`
//! to another color.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::coloring::{pattern_of, verify_bicoloring, Coloring, Pattern};
use crate::design::{double, find_subsystem, DoublingAssociation, SubsystemOutcome, TripleSystem};
use crate::error::{Error, Result};
use crate::exact_cover::{DlxMatrix, DlxOutcome};
use crate::factorization::{
    recursive_split_factorization, theorem3_factorization, validate_factorization, GraphKind,
    OneFactor, OneFactorization, SplitFactorization,
};

/// Per-color counts `(c_1, ..., c_k)` of added points, indexed by color
/// position. Ordered tuples: vectors differing only by a permutation of
/// equal-size color classes are distinct solutions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SolutionVector(pub Vec<usize>);

impl SolutionVector {
    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }
}

impl std::fmt::Display for SolutionVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({})",
            self.0
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Checks both count conditions: `sum c = v + 1` and
/// `sum c^2 + 2 sum n c = (v+1)^2`.
pub fn eq1_holds(v: usize, n: &[usize], c: &[usize]) -> bool {
    if n.len() != c.len() {
        return false;
    }
    let m = (v + 1) as u64;
    let sum: u64 = c.iter().map(|&x| x as u64).sum();
    if sum != m {
        return false;
    }
    let lhs: u64 = c
        .iter()
        .zip(n.iter())
        .map(|(&ci, &ni)| (ci as u64) * (ci as u64) + 2 * (ni as u64) * (ci as u64))
        .sum();
    lhs == m * m
}

/// Enumerates every ordered tuple of non-negative per-color counts satisfying
/// the two count conditions, in lexicographic order. Exhaustive: the search
/// prunes only on the monotone partial sums.
pub fn enumerate_eq1_solutions(v: usize, n: &[usize]) -> Vec<SolutionVector> {
    let k = n.len();
    let target = ((v + 1) as u64) * ((v + 1) as u64);
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let mut c = vec![0usize; k];
    fn rec(
        n: &[usize],
        c: &mut Vec<usize>,
        idx: usize,
        remaining: usize,
        partial: u64,
        target: u64,
        out: &mut Vec<SolutionVector>,
    ) {
        let k = n.len();
        if idx == k - 1 {
            let ci = remaining as u64;
            let term = ci * ci + 2 * (n[idx] as u64) * ci;
            if partial + term == target {
                c[idx] = remaining;
                out.push(SolutionVector(c.clone()));
            }
            return;
        }
        for ci in 0..=remaining {
            let t = (ci as u64) * (ci as u64) + 2 * (n[idx] as u64) * (ci as u64);
            if partial + t > target {
                break; // monotone in ci
            }
            c[idx] = ci;
            rec(n, c, idx + 1, remaining - ci, partial + t, target, out);
        }
    }
    rec(n, &mut c, 0, v + 1, 0, target, &mut out);
    out
}

/// Counts solutions up to permuting color positions with equal class sizes
/// (the unordered convention for repeated pattern entries).
pub fn count_solutions_unordered(n: &[usize], solutions: &[SolutionVector]) -> usize {
    use std::collections::BTreeSet;
    let mut canon: BTreeSet<Vec<(usize, Vec<usize>)>> = BTreeSet::new();
    for sol in solutions {
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (&ni, &ci) in n.iter().zip(sol.counts()) {
            groups.entry(ni).or_default().push(ci);
        }
        let key: Vec<(usize, Vec<usize>)> = groups
            .into_iter()
            .map(|(ni, mut cs)| {
                cs.sort_unstable();
                (ni, cs)
            })
            .collect();
        canon.insert(key);
    }
    canon.len()
}

/// Why a solution vector was removed by [`filter_corollary2`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Corollary2Elimination {
    /// Some count is zero while another is odd: a factor paired with a point
    /// of the empty color can hold only monochromatic pairs, which forces
    /// every count to be even.
    ZeroForcesEven { zero_color: usize, odd_color: usize },
    /// Some count exceeds `(v+1)/2`: every perfect matching of the added
    /// points would then contain a monochromatic pair of that color, which is
    /// forbidden in the factors paired with that color.
    ExceedsHalf {
        color: usize,
        count: usize,
        bound: usize,
    },
}

impl std::fmt::Display for Corollary2Elimination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Corollary2Elimination::ZeroForcesEven {
                zero_color,
                odd_color,
            } => write!(
                f,
                "c[{zero_color}] = 0 forces all counts even, but c[{odd_color}] is odd"
            ),
            Corollary2Elimination::ExceedsHalf {
                color,
                count,
                bound,
            } => {
                write!(f, "c[{color}] = {count} exceeds (v+1)/2 = {bound}")
            }
        }
    }
}

/// Result of the parity/half-bound filter: survivors plus per-elimination
/// reasons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corollary2Outcome {
    pub survivors: Vec<SolutionVector>,
    pub eliminated: Vec<(SolutionVector, Corollary2Elimination)>,
}

/// Removes every vector with (a zero count alongside an odd count) or (a
/// count above `(v+1)/2`). Both rules are sound: they never remove a vector
/// that admits an extension.
pub fn filter_corollary2(solutions: &[SolutionVector], v: usize) -> Corollary2Outcome {
    let bound = v.div_ceil(2);
    let mut survivors = Vec::new();
    let mut eliminated = Vec::new();
    for sol in solutions {
        let c = sol.counts();
        if let Some(big) = c.iter().position(|&x| x > bound) {
            eliminated.push((
                sol.clone(),
                Corollary2Elimination::ExceedsHalf {
                    color: big,
                    count: c[big],
                    bound,
                },
            ));
            continue;
        }
        let zero = c.iter().position(|&x| x == 0);
        let odd = c.iter().position(|&x| x % 2 == 1);
        if let (Some(z), Some(o)) = (zero, odd) {
            eliminated.push((
                sol.clone(),
                Corollary2Elimination::ZeroForcesEven {
                    zero_color: z,
                    odd_color: o,
                },
            ));
            continue;
        }
        survivors.push(sol.clone());
    }
    Corollary2Outcome {
        survivors,
        eliminated,
    }
}

/// Pair-type profile of one factor whose paired base point has color
/// `point_color`: `cross_counts[m]` pairs join a `point_color` point to a
/// color-`m` point, and the remaining color-`m` points pair off
/// monochromatically. Valid profiles satisfy `sum_m cross[m] = c[point_color]`,
/// `cross[m] <= c[m]`, and `c[m] - cross[m]` even for every other color.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorProfile {
    pub point_color: usize,
    /// `(color, cross pair count)` for every color other than `point_color`.
    pub cross_counts: Vec<(usize, usize)>,
    /// `(color, monochromatic pair count)` for every color other than
    /// `point_color`.
    pub mono_counts: Vec<(usize, usize)>,
}

/// All valid factor profiles for a factor of the given point color.
pub fn enumerate_factor_profiles(point_color: usize, c: &[usize]) -> Vec<FactorProfile> {
    let k = c.len();
    let others: Vec<usize> = (0..k).filter(|&m| m != point_color).collect();
    let mut out = Vec::new();
    let mut t = vec![0usize; others.len()];
    fn rec(
        others: &[usize],
        c: &[usize],
        need: usize,
        idx: usize,
        t: &mut Vec<usize>,
        point_color: usize,
        out: &mut Vec<FactorProfile>,
    ) {
        if idx == others.len() {
            if need == 0 {
                out.push(FactorProfile {
                    point_color,
                    cross_counts: others.iter().copied().zip(t.iter().copied()).collect(),
                    mono_counts: others
                        .iter()
                        .zip(t.iter())
                        .map(|(&m, &tm)| (m, (c[m] - tm) / 2))
                        .collect(),
                });
            }
            return;
        }
        let m = others[idx];
        // parity: leftover color-m points pair among themselves
        let start = c[m] % 2;
        let mut tm = start;
        while tm <= c[m].min(need) {
            t[idx] = tm;
            rec(others, c, need - tm, idx + 1, t, point_color, out);
            tm += 2;
        }
    }
    rec(&others, c, c[point_color], 0, &mut t, point_color, &mut out);
    out
}

/// Verdict of the exact counting filter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountingVerdict {
    Feasible,
    Infeasible { reason: String },
}

impl CountingVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, CountingVerdict::Feasible)
    }
}

/// Exact aggregated-profile feasibility test, strictly stronger than
/// [`filter_corollary2`].
///
/// Feasible iff each color `j` admits a multiset of `n_j` factor profiles
/// such that, over all `v` factors, monochromatic color-`m` pairs total
/// exactly `C(c_m, 2)` and cross `{m, m'}` pairs total exactly `c_m * c_m'`,
/// with cross pairs placed only in factors of point color `m` or `m'`.
///
/// Decided by bounded integer enumeration over the per-color aggregate
/// cross-pair counts `u[j][m]` (sums of `n_j` profile rows): a vector is a
/// valid aggregate for color `j` iff each entry lies in
/// `[n_j * (c_m mod 2), n_j * c_m]` with the parity of `n_j * c_m` and the
/// entries sum to `n_j * c_j`; profile multisets realizing any such vector
/// always exist. Instances beyond `k <= 6` or `v <= 100` are not decided.
pub fn counting_filter(c: &SolutionVector, n: &[usize], v: usize) -> Result<CountingVerdict> {
    let k = n.len();
    if k > 6 || v > 100 {
        return Err(Error::InstanceTooLarge {
            detail: format!(
                "counting filter is exact only for k <= 6 and v <= 100 (got k = {k}, v = {v})"
            ),
        });
    }
    if c.counts().len() != k {
        return Err(Error::SizeMismatch {
            what: "solution vector length",
            expected: k,
            actual: c.counts().len(),
        });
    }
    let c = c.counts();
    // Edge parity consistency: the two ends of each cross-pair total must
    // admit compatible parities.
    for a in 0..k {
        for b in a + 1..k {
            let total = c[a] * c[b];
            let pa = n[a] * c[b];
            let pb = n[b] * c[a];
            if !(total + pa + pb).is_multiple_of(2) {
                return Ok(CountingVerdict::Infeasible {
                    reason: format!(
                        "cross pairs between colors {a} and {b}: total {total} cannot split with the forced parities"
                    ),
                });
            }
        }
    }
    // Per-entry boxes for the aggregates.
    let mut lo = vec![vec![0usize; k]; k];
    let mut hi = vec![vec![0usize; k]; k];
    for j in 0..k {
        for m in 0..k {
            if m == j {
                continue;
            }
            lo[j][m] = n[j] * (c[m] % 2);
            hi[j][m] = n[j] * c[m];
            if lo[j][m] > hi[j][m] {
                return Ok(CountingVerdict::Infeasible {
                    reason: format!(
                        "color {j} factors cannot absorb the forced cross pairs to color {m}"
                    ),
                });
            }
        }
    }
    let mut u = vec![vec![0usize; k]; k];
    if color_dfs(0, k, n, c, &lo, &hi, &mut u) {
        Ok(CountingVerdict::Feasible)
    } else {
        Ok(CountingVerdict::Infeasible {
            reason: "no aggregate assignment of cross-pair counts satisfies every color's factor profiles".into(),
        })
    }
}

fn color_dfs(
    j: usize,
    k: usize,
    n: &[usize],
    c: &[usize],
    lo: &[Vec<usize>],
    hi: &[Vec<usize>],
    u: &mut Vec<Vec<usize>>,
) -> bool {
    if j == k {
        return true;
    }
    let target = n[j] * c[j];
    // entries fixed by earlier colors: u[j][m] = c_j*c_m - u[m][j]
    let mut fixed = 0usize;
    for m in 0..j {
        let total = c[j] * c[m];
        let Some(val) = total.checked_sub(u[m][j]) else {
            return false;
        };
        if val < lo[j][m] || val > hi[j][m] || !(hi[j][m] - val).is_multiple_of(2) {
            return false;
        }
        u[j][m] = val;
        fixed += val;
    }
    if fixed > target {
        return false;
    }
    let free: Vec<usize> = (j + 1..k).collect();
    assign_free(j, &free, 0, fixed, target, k, n, c, lo, hi, u)
}

#[allow(clippy::too_many_arguments)]
fn assign_free(
    j: usize,
    free: &[usize],
    idx: usize,
    acc: usize,
    target: usize,
    k: usize,
    n: &[usize],
    c: &[usize],
    lo: &[Vec<usize>],
    hi: &[Vec<usize>],
    u: &mut Vec<Vec<usize>>,
) -> bool {
    if idx == free.len() {
        return acc == target && color_dfs(j + 1, k, n, c, lo, hi, u);
    }
    let m = free[idx];
    let rest_lo: usize = free[idx + 1..].iter().map(|&x| lo[j][x]).sum();
    let rest_hi: usize = free[idx + 1..].iter().map(|&x| hi[j][x]).sum();
    let mut val = lo[j][m];
    while val <= hi[j][m] {
        let now = acc + val;
        if now <= target && now + rest_lo <= target && target <= now + rest_hi {
            u[j][m] = val;
            if assign_free(j, free, idx + 1, now, target, k, n, c, lo, hi, u) {
                return true;
            }
        }
        if now > target {
            break;
        }
        val += 2; // box entries share the parity of n_j * c_m
    }
    false
}

/// One named certificate check and its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub ok: bool,
    pub detail: String,
}

/// Self-contained, re-verifiable witness of an extended bicoloring: the base
/// system and coloring, the chosen factorization and association, the added
/// points' colors, the doubled system, and the extended coloring, together
/// with the verification transcript produced when it was built.
///
/// [`ExtensionCertificate::verify`] rechecks every invariant from the raw
/// data and never trusts the stored transcript.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionCertificate {
    pub base: TripleSystem,
    pub base_coloring: Coloring,
    pub solution: SolutionVector,
    /// Colors of the added points (factorization vertex `x` is point `v + x`).
    pub new_point_coloring: Vec<usize>,
    pub factorization: OneFactorization,
    pub association: DoublingAssociation,
    pub doubled: TripleSystem,
    pub extended_coloring: Coloring,
    pub transcript: Vec<CheckRecord>,
}

impl ExtensionCertificate {
    /// Builds a certificate from the pieces, verifying everything. The stored
    /// transcript is the verification performed here.
    pub fn build(
        base: TripleSystem,
        base_coloring: Coloring,
        factorization: OneFactorization,
        association: DoublingAssociation,
        new_point_coloring: Vec<usize>,
    ) -> Result<Self> {
        let doubled = double(&base, &factorization, &association)?;
        let k = base_coloring.k();
        let mut extended = base_coloring.colors().to_vec();
        extended.extend_from_slice(&new_point_coloring);
        let extended_coloring = Coloring::new(k, extended)?;
        let mut counts = vec![0usize; k];
        for &c in &new_point_coloring {
            counts[c] += 1;
        }
        let mut cert = ExtensionCertificate {
            base,
            base_coloring,
            solution: SolutionVector(counts),
            new_point_coloring,
            factorization,
            association,
            doubled,
            extended_coloring,
            transcript: Vec::new(),
        };
        let (ok, transcript) = cert.verify();
        cert.transcript = transcript;
        if !ok {
            let first_bad = cert
                .transcript
                .iter()
                .find(|r| !r.ok)
                .map(|r| format!("{}: {}", r.check, r.detail))
                .unwrap_or_default();
            return Err(Error::ConstructionUnverified { detail: first_bad });
        }
        Ok(cert)
    }

    /// Extended pattern of the doubled system.
    pub fn extended_pattern(&self) -> Pattern {
        pattern_of(&self.extended_coloring)
    }

    /// Rechecks every invariant from the raw data. Returns overall success
    /// plus one record per check.
    pub fn verify(&self) -> (bool, Vec<CheckRecord>) {
        let mut records = Vec::new();
        let mut push = |check: &str, ok: bool, detail: String| {
            records.push(CheckRecord {
                check: check.into(),
                ok,
                detail,
            });
            ok
        };
        let v = self.base.order();
        let mut all = true;

        let r = self.base.validate();
        all &= push(
            "base-valid",
            r.valid,
            r.violation.map(|w| w.to_string()).unwrap_or_default(),
        );

        let r = validate_factorization(&self.factorization, &GraphKind::Complete { m: v + 1 });
        all &= push(
            "factorization-valid",
            r.valid,
            r.violation.map(|w| w.to_string()).unwrap_or_default(),
        );

        let bij = self.association.check_bijection(v);
        all &= push(
            "association-bijection",
            bij.is_ok(),
            bij.err().map(|e| e.to_string()).unwrap_or_default(),
        );
        if !all {
            return (false, records);
        }

        match double(&self.base, &self.factorization, &self.association) {
            Ok(rebuilt) => {
                all &= push(
                    "doubled-matches-construction",
                    rebuilt == self.doubled,
                    if rebuilt == self.doubled {
                        String::new()
                    } else {
                        "stored doubled system differs from the reconstruction".into()
                    },
                );
            }
            Err(e) => {
                all &= push("doubled-matches-construction", false, e.to_string());
            }
        }

        let r = self.doubled.validate();
        all &= push(
            "doubled-valid",
            r.valid,
            r.violation.map(|w| w.to_string()).unwrap_or_default(),
        );

        match verify_bicoloring(&self.base, &self.base_coloring) {
            Ok(r) => {
                all &= push(
                    "base-coloring-strict-bicoloring",
                    r.ok,
                    r.violation.map(|w| w.to_string()).unwrap_or_default(),
                );
            }
            Err(e) => {
                all &= push("base-coloring-strict-bicoloring", false, e.to_string());
            }
        }

        match verify_bicoloring(&self.doubled, &self.extended_coloring) {
            Ok(r) => {
                all &= push(
                    "extended-coloring-strict-bicoloring",
                    r.ok,
                    r.violation.map(|w| w.to_string()).unwrap_or_default(),
                );
            }
            Err(e) => {
                all &= push("extended-coloring-strict-bicoloring", false, e.to_string());
            }
        }

        all &= push(
            "same-color-count",
            self.extended_coloring.k() == self.base_coloring.k(),
            format!(
                "base k = {}, extended k = {}",
                self.base_coloring.k(),
                self.extended_coloring.k()
            ),
        );

        // length-tolerant comparisons: malformed certificates must fail
        // checks, never panic
        let ext = self.extended_coloring.colors();
        let restriction_ok = ext.len() == 2 * v + 1 && ext[..v] == *self.base_coloring.colors();
        all &= push(
            "restriction-matches-base",
            restriction_ok,
            if restriction_ok {
                String::new()
            } else {
                "extended coloring restricted to base points differs from base coloring".into()
            },
        );

        let new_ok = ext.len() == 2 * v + 1 && ext[v..] == *self.new_point_coloring.as_slice();
        all &= push("new-point-colors-match", new_ok, String::new());

        // counts re-derived from the certificate, not copied from input
        let mut counts = vec![0usize; self.base_coloring.k()];
        for &c in &self.new_point_coloring {
            if c < counts.len() {
                counts[c] += 1;
            }
        }
        let counts_ok = counts == self.solution.0;
        all &= push(
            "solution-counts-match",
            counts_ok,
            format!("recounted {counts:?}, stored {:?}", self.solution.0),
        );

        let n = self.base_coloring.class_sizes();
        let eq1 = eq1_holds(v, &n, &counts);
        all &= push(
            "solution-satisfies-count-equation",
            eq1,
            format!("n = {n:?}, c = {counts:?}, v = {v}"),
        );

        let sub = find_subsystem(&self.doubled, &(0..v).collect::<Vec<_>>());
        all &= push(
            "base-is-subsystem",
            sub.is_subsystem(),
            match sub {
                SubsystemOutcome::Subsystem(_) => String::new(),
                SubsystemOutcome::NotASubsystem { reason } => reason,
            },
        );

        (all, records)
    }
}

/// Color pairs `(i, j)` whose class sizes sum to `(v+1)/2` with that value
/// even: exactly the pairs the split-factorization extension applies to.
pub fn theorem3_eligible(n: &[usize], v: usize) -> Vec<(usize, usize)> {
    let m = v + 1;
    if !m.is_multiple_of(2) {
        return Vec::new();
    }
    let half = m / 2;
    if !half.is_multiple_of(2) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for i in 0..n.len() {
        for j in i + 1..n.len() {
            if n[i] + n[j] == half {
                out.push((i, j));
            }
        }
    }
    out
}

/// Constructive extension for an eligible color pair `(i, j)`:
/// `n_i + n_j = (v+1)/2`, even.
///
/// Builds the two-half split factorization, colors the first half with `i`
/// and the second with `j`, pairs the cross factors with the base points
/// colored `i` or `j` (ascending point index to ascending factor index) and
/// the combined factors with the remaining points. Every triple through an
/// `i`-or-`j` point then sees one point of each half, and every other triple
/// sees a monochromatic half pair, so the doubled system keeps a strict
/// k-bicoloring with `n'_i = n_i + (v+1)/2`, `n'_j = n_j + (v+1)/2`.
pub fn theorem3_extend(
    sts: &TripleSystem,
    col: &Coloring,
    i: usize,
    j: usize,
) -> Result<ExtensionCertificate> {
    let v = sts.order();
    let report = verify_bicoloring(sts, col)?;
    if !report.ok {
        return Err(Error::PreconditionViolated {
            detail: format!(
                "base coloring is not a strict bicoloring: {}",
                report.violation.map(|w| w.to_string()).unwrap_or_default()
            ),
        });
    }
    let k = col.k();
    if i == j || i >= k || j >= k {
        return Err(Error::PreconditionViolated {
            detail: format!("need two distinct colors below k = {k}, got ({i}, {j})"),
        });
    }
    let n = col.class_sizes();
    let m = v + 1;
    if !m.is_multiple_of(4) {
        return Err(Error::PreconditionViolated {
            detail: format!(
                "(v+1)/2 = {} is odd, the split factorization needs v+1 ≡ 0 (mod 4)",
                m / 2
            ),
        });
    }
    let half = m / 2;
    if n[i] + n[j] != half {
        return Err(Error::PreconditionViolated {
            detail: format!(
                "class sizes n[{i}] + n[{j}] = {} must equal (v+1)/2 = {half}",
                n[i] + n[j]
            ),
        });
    }
    let split = theorem3_factorization(v)?;
    build_split_certificate(sts, col, &split, &[i, j])
}

/// Layered constructive extension over a color sequence `k_1, ..., k_p`.
///
/// Requires `n[k_1] + n[k_2] = (v+1)/2^(p-1)` even, and
/// `n[k_i] = (v+1)/2^(p-i+1)` even for `i = 3..=p`. With `p = 2` this is
/// exactly [`theorem3_extend`]. For `p > 2` the factorization nests: block
/// `l` is colored with `k_(p-l+1)` and pairs with the cross factors at its
/// level; the two innermost blocks take `k_1` and `k_2`. The construction is
/// only trusted after the certificate verifies; a clean
/// `ConstructionUnverified` error is returned otherwise.
pub fn theorem4_extend(
    sts: &TripleSystem,
    col: &Coloring,
    sequence: &[usize],
) -> Result<ExtensionCertificate> {
    let v = sts.order();
    let p = sequence.len();
    let k = col.k();
    if p < 2 {
        return Err(Error::PreconditionViolated {
            detail: "color sequence needs at least two colors".into(),
        });
    }
    {
        let mut seen = vec![false; k];
        for &c in sequence {
            if c >= k || seen[c] {
                return Err(Error::PreconditionViolated {
                    detail: format!("color sequence must list distinct colors below k = {k}"),
                });
            }
            seen[c] = true;
        }
    }
    if p == 2 {
        return theorem3_extend(sts, col, sequence[0], sequence[1]);
    }
    let report = verify_bicoloring(sts, col)?;
    if !report.ok {
        return Err(Error::PreconditionViolated {
            detail: format!(
                "base coloring is not a strict bicoloring: {}",
                report.violation.map(|w| w.to_string()).unwrap_or_default()
            ),
        });
    }
    let n = col.class_sizes();
    let m = v + 1;
    let denom = 1usize << (p - 1);
    if !m.is_multiple_of(denom) {
        return Err(Error::PreconditionViolated {
            detail: format!("v + 1 = {m} is not divisible by 2^(p-1) = {denom}"),
        });
    }
    let innermost = m / denom;
    if !innermost.is_multiple_of(2) {
        return Err(Error::PreconditionViolated {
            detail: format!("(v+1)/2^(p-1) = {innermost} must be even"),
        });
    }
    if n[sequence[0]] + n[sequence[1]] != innermost {
        return Err(Error::PreconditionViolated {
            detail: format!(
                "n[k_1] + n[k_2] = {} must equal (v+1)/2^(p-1) = {innermost}",
                n[sequence[0]] + n[sequence[1]]
            ),
        });
    }
    for idx in 2..p {
        // the i-th sequence color (1-based i = idx + 1) must have class size (v+1)/2^(p-i+1), even
        let expected = m / (1usize << (p - idx));
        let size = n[sequence[idx]];
        if size != expected || !size.is_multiple_of(2) {
            return Err(Error::PreconditionViolated {
                detail: format!(
                    "class size n[k_{}] = {size} must equal (v+1)/2^{} = {expected} and be even",
                    idx + 1,
                    p - idx
                ),
            });
        }
    }
    let mut parts: Vec<usize> = (1..p).map(|l| m >> l).collect();
    parts.push(m >> (p - 1));
    let split = recursive_split_factorization(m, &parts)?;
    build_split_certificate(sts, col, &split, sequence)
}

/// Assigns colors to the blocks of a split factorization and pairs factors
/// with base points, then assembles and verifies the certificate.
///
/// `sequence` lists the involved colors `k_1, ..., k_p`: the innermost pair
/// of blocks takes `k_1`/`k_2`, and block `l` (outermost first) takes
/// `k_(p-l+1)`. Cross factors at each level pair with the base points of the
/// block's color; the innermost cross factors pair with points colored `k_1`
/// or `k_2`; the deepest combined factors pair with everything else.
fn build_split_certificate(
    sts: &TripleSystem,
    col: &Coloring,
    split: &SplitFactorization,
    sequence: &[usize],
) -> Result<ExtensionCertificate> {
    let v = sts.order();
    let m = v + 1;
    let p = sequence.len();
    let layers = &split.layers;
    debug_assert_eq!(layers.len(), p - 1);

    // color the factorization vertices block by block
    let mut ycol = vec![usize::MAX; m];
    for (l, layer) in layers.iter().enumerate() {
        let color = if l + 1 < p - 1 {
            sequence[p - l - 1] // outer levels: k_p, k_(p-1), ..., k_3
        } else {
            sequence[0] // innermost first block: k_1
        };
        for &x in &layer.block {
            ycol[x] = color;
        }
    }
    for &x in &split.tail_block {
        ycol[x] = sequence[1]; // innermost second block: k_2
    }
    debug_assert!(ycol.iter().all(|&c| c != usize::MAX));

    // pair factors with base points, most-constrained (outermost) level first
    let mut assignment = vec![usize::MAX; v]; // base point -> factor index
    let mut claimed = vec![false; v];
    for (l, layer) in layers.iter().enumerate() {
        let points: Vec<usize> = if l + 1 < p - 1 {
            let color = sequence[p - l - 1];
            (0..v).filter(|&q| col.colors()[q] == color).collect()
        } else {
            // innermost cross factors pair with both k_1- and k_2-colored points
            (0..v)
                .filter(|&q| col.colors()[q] == sequence[0] || col.colors()[q] == sequence[1])
                .collect()
        };
        if points.len() != layer.cross_indices.len() {
            return Err(Error::PreconditionViolated {
                detail: format!(
                    "level {l}: {} cross factors but {} base points of the matching colors",
                    layer.cross_indices.len(),
                    points.len()
                ),
            });
        }
        for (&q, &fidx) in points.iter().zip(layer.cross_indices.iter()) {
            assignment[q] = fidx;
            claimed[q] = true;
        }
    }
    let rest: Vec<usize> = (0..v).filter(|&q| !claimed[q]).collect();
    if rest.len() != split.combined_indices.len() {
        return Err(Error::PreconditionViolated {
            detail: format!(
                "{} combined factors but {} remaining base points",
                split.combined_indices.len(),
                rest.len()
            ),
        });
    }
    for (&q, &fidx) in rest.iter().zip(split.combined_indices.iter()) {
        assignment[q] = fidx;
    }

    ExtensionCertificate::build(
        sts.clone(),
        col.clone(),
        split.factorization.clone(),
        DoublingAssociation { map: assignment },
        ycol,
    )
}

/// Outcome of the backtracking extension search.
#[derive(Debug)]
pub enum ExtensionSearch {
    Found(Box<ExtensionCertificate>),
    /// The whole (symmetry-reduced) space was traversed: no extension with
    /// these counts exists for any doubling of this base coloring.
    Exhausted,
    /// The node budget ran out before the space was covered.
    BudgetExhausted,
}

impl ExtensionSearch {
    pub fn found(&self) -> Option<&ExtensionCertificate> {
        match self {
            ExtensionSearch::Found(cert) => Some(cert),
            _ => None,
        }
    }
}

/// Backtracking search for an extended bicoloring with the given per-color
/// counts.
///
/// The added points are colored canonically (contiguous color blocks in
/// ascending color order; points within a class are interchangeable, so only
/// the counts matter). The factorization is then found as an exact cover:
/// one constraint per vertex pair (it must land in exactly one factor) and
/// one per factor-vertex slot (each factor matches each vertex exactly once),
/// with a choice row for every (factor, pair) combination whose pair type the
/// factor admits: monochromatic in a color other than the factor's point
/// color, or joining the point color to another color. The dancing-links
/// solver always branches on the most constrained slot or pair, so dead ends
/// surface immediately; exhaustion means no compatible factorization exists
/// for any doubling of this base coloring.
///
/// Deterministic: columns, rows, and branching are ordered canonically, so
/// the first certificate found is the same on every run. `threads > 1`
/// splits the root branching across workers with the node budget divided
/// evenly among branches, which keeps the combined outcome
/// schedule-independent; the certificate returned is from the first
/// successful branch in canonical order, and exhaustion requires every
/// branch to complete.
pub fn search_extension(
    sts: &TripleSystem,
    col: &Coloring,
    c: &SolutionVector,
    budget: &Budget,
    threads: usize,
) -> Result<ExtensionSearch> {
    let v = sts.order();
    let report = verify_bicoloring(sts, col)?;
    if !report.ok {
        return Err(Error::PreconditionViolated {
            detail: format!(
                "base coloring is not a strict bicoloring: {}",
                report.violation.map(|w| w.to_string()).unwrap_or_default()
            ),
        });
    }
    let n = col.class_sizes();
    if !eq1_holds(v, &n, c.counts()) {
        return Err(Error::PreconditionViolated {
            detail: format!("counts {c} fail the count equation for n = {n:?}, v = {v}"),
        });
    }
    let k = col.k();
    let m = v + 1;
    // canonical coloring of the added points: contiguous blocks by color
    let mut ycol = Vec::with_capacity(m);
    for (color, &count) in c.counts().iter().enumerate() {
        ycol.extend(std::iter::repeat_n(color, count));
    }
    // factor groups: colors by descending count, ties by color index
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&j| (std::cmp::Reverse(c.counts()[j]), j));
    let mut factor_colors = Vec::with_capacity(v);
    for &j in &order {
        factor_colors.extend(std::iter::repeat_n(j, n[j]));
    }

    let ctx = SearchContext {
        m,
        v,
        ycol,
        factor_colors,
    };

    let outcome = if threads <= 1 {
        let (mut matrix, rows) = build_cover_matrix(&ctx);
        match matrix.search(budget) {
            DlxOutcome::Found(sol) => RawOutcome::Found(extract_factors(&ctx, &rows, &sol)),
            DlxOutcome::Exhausted => RawOutcome::Exhausted,
            DlxOutcome::BudgetExhausted => RawOutcome::Budget,
        }
    } else {
        parallel_root_search(&ctx, budget, threads)
    };

    match outcome {
        RawOutcome::Found(factors) => {
            let cert = assemble_certificate(sts, col, c, &ctx, factors)?;
            Ok(ExtensionSearch::Found(Box::new(cert)))
        }
        RawOutcome::Exhausted => Ok(ExtensionSearch::Exhausted),
        RawOutcome::Budget => Ok(ExtensionSearch::BudgetExhausted),
    }
}

struct SearchContext {
    m: usize,
    v: usize,
    /// color of each added point (factorization vertex)
    ycol: Vec<usize>,
    /// point color of each factor, in processing order
    factor_colors: Vec<usize>,
}

impl SearchContext {
    #[inline]
    fn allowed(&self, x: usize, y: usize, point_color: usize) -> bool {
        let cx = self.ycol[x];
        let cy = self.ycol[y];
        if cx == cy {
            cx != point_color
        } else {
            cx == point_color || cy == point_color
        }
    }

    /// Column ids: pairs in lexicographic order, then factor-vertex slots.
    fn pair_column(&self, x: usize, y: usize) -> usize {
        debug_assert!(x < y);
        // index of (x, y) among all ordered pairs of 0..m
        x * self.m - x * (x + 1) / 2 + (y - x - 1)
    }

    fn slot_column(&self, factor: usize, vertex: usize) -> usize {
        self.m * (self.m - 1) / 2 + factor * self.m + vertex
    }

    fn num_columns(&self) -> usize {
        self.m * (self.m - 1) / 2 + self.v * self.m
    }
}

/// Builds the exact-cover matrix. Rows are (factor, pair) in factor-major,
/// pair-lexicographic order; the metadata maps row ids back to their
/// placements.
fn build_cover_matrix(ctx: &SearchContext) -> (DlxMatrix, Vec<(usize, usize, usize)>) {
    let mut matrix = DlxMatrix::new(ctx.num_columns());
    let mut rows = Vec::new();
    for f in 0..ctx.v {
        let j = ctx.factor_colors[f];
        for x in 0..ctx.m {
            for y in x + 1..ctx.m {
                if ctx.allowed(x, y, j) {
                    matrix.add_row(&[
                        ctx.pair_column(x, y),
                        ctx.slot_column(f, x),
                        ctx.slot_column(f, y),
                    ]);
                    rows.push((f, x, y));
                }
            }
        }
    }
    (matrix, rows)
}

fn extract_factors(
    ctx: &SearchContext,
    rows: &[(usize, usize, usize)],
    solution: &[usize],
) -> Vec<Vec<(usize, usize)>> {
    let mut factors: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ctx.v];
    for &row_id in solution {
        let (f, x, y) = rows[row_id];
        factors[f].push((x, y));
    }
    factors
}

enum RawOutcome {
    Found(Vec<Vec<(usize, usize)>>),
    Exhausted,
    Budget,
}

/// Splits the root branching across worker threads: every solution places
/// exactly one pair on (factor 0, vertex 0), so those placement rows
/// partition the space. Each branch is searched with an equal share of the
/// node budget and the outcomes are combined in canonical row order, which
/// keeps the result independent of scheduling.
fn parallel_root_search(ctx: &SearchContext, budget: &Budget, threads: usize) -> RawOutcome {
    let (_, rows) = build_cover_matrix(ctx);
    let branches: Vec<usize> = rows
        .iter()
        .enumerate()
        .filter(|(_, &(f, x, _))| f == 0 && x == 0)
        .map(|(i, _)| i)
        .collect();
    if branches.is_empty() {
        return RawOutcome::Exhausted;
    }
    let share = (budget.limit() / branches.len() as u64).max(1);
    let mut results: Vec<Option<RawOutcome>> = Vec::new();
    results.resize_with(branches.len(), || None);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results = std::sync::Mutex::new(results);
    std::thread::scope(|scope| {
        for _ in 0..threads.min(branches.len()) {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if idx >= branches.len() {
                    break;
                }
                let row_id = branches[idx];
                let (f, x, y) = rows[row_id];
                let (mut matrix, _) = build_cover_matrix(ctx);
                matrix.force_row(&[
                    ctx.pair_column(x, y),
                    ctx.slot_column(f, x),
                    ctx.slot_column(f, y),
                ]);
                let branch_budget = Budget::new(share);
                let out = match matrix.search(&branch_budget) {
                    DlxOutcome::Found(mut sol) => {
                        sol.push(row_id);
                        RawOutcome::Found(extract_factors(ctx, &rows, &sol))
                    }
                    DlxOutcome::Exhausted => RawOutcome::Exhausted,
                    DlxOutcome::BudgetExhausted => RawOutcome::Budget,
                };
                budget.tick_many(branch_budget.used());
                results.lock().unwrap()[idx] = Some(out);
            });
        }
    });
    let results = results.into_inner().unwrap();
    let mut saw_budget = false;
    for out in results.into_iter() {
        match out.expect("every branch ran") {
            RawOutcome::Found(f) => return RawOutcome::Found(f),
            RawOutcome::Budget => saw_budget = true,
            RawOutcome::Exhausted => {}
        }
    }
    if saw_budget {
        RawOutcome::Budget
    } else {
        RawOutcome::Exhausted
    }
}

/// Reassembles the searched factors into a certificate: factors are handed to
/// base points color group by color group, ascending point index within each
/// group.
fn assemble_certificate(
    sts: &TripleSystem,
    col: &Coloring,
    c: &SolutionVector,
    ctx: &SearchContext,
    factors_in_order: Vec<Vec<(usize, usize)>>,
) -> Result<ExtensionCertificate> {
    let v = ctx.v;
    let mut assignment = vec![usize::MAX; v];
    // factors were generated grouped by factor_colors; hand each group to the
    // base points of that color in ascending order
    let mut group_start = 0;
    while group_start < v {
        let color = ctx.factor_colors[group_start];
        let mut group_end = group_start;
        while group_end < v && ctx.factor_colors[group_end] == color {
            group_end += 1;
        }
        let points: Vec<usize> = (0..v).filter(|&q| col.colors()[q] == color).collect();
        debug_assert_eq!(points.len(), group_end - group_start);
        for (offset, &q) in points.iter().enumerate() {
            assignment[q] = group_start + offset;
        }
        group_start = group_end;
    }
    let factors: Vec<OneFactor> = factors_in_order.into_iter().map(OneFactor::new).collect();
    let factorization = OneFactorization::new(ctx.m, factors);
    ExtensionCertificate::build(
        sts.clone(),
        col.clone(),
        factorization,
        DoublingAssociation { map: assignment },
        ctx.ycol.clone(),
    )
    .map_err(|e| Error::ConstructionUnverified {
        detail: format!("search result failed verification: {e}"),
    })
    .and_then(|cert| {
        if cert.solution != *c {
            return Err(Error::ConstructionUnverified {
                detail: "searched counts disagree with the requested solution vector".into(),
            });
        }
        Ok(cert)
    })
}

/// The two strict (k+1)-bicolorings every doubling of a bicolorable base
/// admits.
#[derive(Debug, Clone)]
pub struct TrivialDoublingColorings {
    pub doubled: TripleSystem,
    /// All added points in one fresh class: pattern gains `n_(k+1) = v + 1`.
    pub fresh_class: Coloring,
    /// Mirror coloring: each base point's color copied onto a paired added
    /// point plus one singleton fresh class, pattern `(2n_1, ..., 2n_k, 1)`.
    /// `None` when the given doubling admits no such pairing.
    pub mirrored: Option<Coloring>,
    pub mirror_error: Option<String>,
}

/// Input to [`trivial_doubling_colorings`]: an existing doubling or just a
/// base system (the operation then chooses the factorization itself).
pub enum DoublingInput<'a> {
    Certificate(&'a ExtensionCertificate),
    Doubling {
        base: &'a TripleSystem,
        base_coloring: &'a Coloring,
        factorization: &'a OneFactorization,
        association: &'a DoublingAssociation,
    },
    BaseOnly {
        base: &'a TripleSystem,
        base_coloring: &'a Coloring,
    },
}

/// Produces the two always-available (k+1)-bicolorings of a doubled system.
///
/// The fresh-class coloring verifies on any doubling. The mirror coloring
/// needs a compatible factorization: when only the base system is given, the
/// factorization is built from the base triples themselves (factor `i` pairs
/// the hub with the mirror of point `i` and mirrors the triples through `i`),
/// which makes every doubled triple echo a base triple. For a supplied
/// doubling, every choice of hub is tried; if none verifies, the mirror slot
/// reports the failure instead.
pub fn trivial_doubling_colorings(input: DoublingInput<'_>) -> Result<TrivialDoublingColorings> {
    let (base, base_coloring, factorization, association) = match input {
        DoublingInput::Certificate(cert) => (
            cert.base.clone(),
            cert.base_coloring.clone(),
            cert.factorization.clone(),
            cert.association.clone(),
        ),
        DoublingInput::Doubling {
            base,
            base_coloring,
            factorization,
            association,
        } => (
            base.clone(),
            base_coloring.clone(),
            factorization.clone(),
            association.clone(),
        ),
        DoublingInput::BaseOnly {
            base,
            base_coloring,
        } => {
            let (f, a) = aligned_doubling(base);
            (base.clone(), base_coloring.clone(), f, a)
        }
    };
    let report = verify_bicoloring(&base, &base_coloring)?;
    if !report.ok {
        return Err(Error::PreconditionViolated {
            detail: "base coloring is not a strict bicoloring".into(),
        });
    }
    let v = base.order();
    let doubled = double(&base, &factorization, &association)?;
    let fresh_class = base_coloring.extend_with_fresh_class(v + 1);
    let fresh_report = verify_bicoloring(&doubled, &fresh_class)?;
    if !fresh_report.ok {
        return Err(Error::ConstructionUnverified {
            detail: format!(
                "fresh-class coloring failed verification: {}",
                fresh_report
                    .violation
                    .map(|w| w.to_string())
                    .unwrap_or_default()
            ),
        });
    }

    let (mirrored, mirror_error) =
        match mirror_coloring(&base_coloring, &factorization, &association, &doubled) {
            Ok(col) => (Some(col), None),
            Err(e) => (None, Some(e.to_string())),
        };

    Ok(TrivialDoublingColorings {
        doubled,
        fresh_class,
        mirrored,
        mirror_error,
    })
}

/// Factorization of `K_{v+1}` read off the base system itself: factor `i`
/// pairs the hub (vertex `v`) with vertex `i` and contains `{x, y}` for every
/// base triple `{i, x, y}`. The triples through a point partition the other
/// points, so each factor is a perfect matching, and each pair `{x, y}`
/// appears exactly in the factor of the third point of its triple.
pub fn aligned_doubling(base: &TripleSystem) -> (OneFactorization, DoublingAssociation) {
    let v = base.order();
    let mut factors: Vec<Vec<(usize, usize)>> = (0..v).map(|i| vec![(i, v)]).collect();
    for &t in base.triples() {
        factors[t[0]].push((t[1], t[2]));
        factors[t[1]].push((t[0], t[2]));
        factors[t[2]].push((t[0], t[1]));
    }
    let factors: Vec<OneFactor> = factors.into_iter().map(OneFactor::new).collect();
    (
        OneFactorization::new(v + 1, factors),
        DoublingAssociation::identity(v),
    )
}

/// Tries every hub choice: the hub's partner in the factor paired with base
/// point `q` must take `q`'s color, which forces the whole coloring; the
/// first hub whose forced coloring verifies wins.
fn mirror_coloring(
    base_coloring: &Coloring,
    factorization: &OneFactorization,
    association: &DoublingAssociation,
    doubled: &TripleSystem,
) -> Result<Coloring> {
    let v = base_coloring.len();
    let m = v + 1;
    let k = base_coloring.k();
    for hub in 0..m {
        let mut ycol = vec![usize::MAX; m];
        ycol[hub] = k;
        for (q, &fidx) in association.map.iter().enumerate() {
            let factor = &factorization.factors()[fidx];
            let partner = factor.edges().iter().find_map(|&(a, b)| {
                if a == hub {
                    Some(b)
                } else if b == hub {
                    Some(a)
                } else {
                    None
                }
            });
            let Some(w) = partner else { break };
            ycol[w] = base_coloring.colors()[q];
        }
        if ycol.contains(&usize::MAX) {
            continue;
        }
        let mut colors = base_coloring.colors().to_vec();
        colors.extend_from_slice(&ycol);
        let candidate = Coloring::new(k + 1, colors)?;
        if verify_bicoloring(doubled, &candidate)?.ok {
            return Ok(candidate);
        }
    }
    Err(Error::ConstructionUnverified {
        detail: "no hub choice yields a verified mirror coloring for this factorization".into(),
    })
}
