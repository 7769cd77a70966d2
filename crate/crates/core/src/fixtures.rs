//! Built-in reference objects: small named systems, the order-19 system with
//! its 3-bicoloring, and the table of extendable colorings for the large
//! orders handled constructively.

use crate::coloring::Coloring;
use crate::design::TripleSystem;

/// The projective plane of order 2: the unique STS(7).
pub fn fano() -> TripleSystem {
    TripleSystem::new(
        7,
        [
            [0, 1, 3],
            [1, 2, 4],
            [2, 3, 5],
            [3, 4, 6],
            [4, 5, 0],
            [5, 6, 1],
            [6, 0, 2],
        ],
    )
}

/// The affine plane of order 3: the unique STS(9). Points are the cells of a
/// 3x3 grid (`3*row + column`); triples are the rows, columns, and both
/// diagonal directions.
pub fn sts9() -> TripleSystem {
    TripleSystem::new(
        9,
        [
            [0, 1, 2],
            [3, 4, 5],
            [6, 7, 8],
            [0, 3, 6],
            [1, 4, 7],
            [2, 5, 8],
            [0, 4, 8],
            [1, 5, 6],
            [2, 3, 7],
            [0, 5, 7],
            [1, 3, 8],
            [2, 4, 6],
        ],
    )
}

/// The cyclic STS(13) generated by the base blocks {0,1,4} and {0,2,7}
/// mod 13.
pub fn cyclic13() -> TripleSystem {
    let mut triples = Vec::with_capacity(26);
    for base in [[0usize, 1, 4], [0, 2, 7]] {
        for s in 0..13 {
            triples.push([(base[0] + s) % 13, (base[1] + s) % 13, (base[2] + s) % 13]);
        }
    }
    TripleSystem::new(13, triples)
}

/// An STS(19) with a sub-STS(7) on {0, 1, 2, 3, 9, 10, 15} and a strict
/// 3-bicoloring with classes {0..8}, {9..14}, {15..18} (pattern (4, 6, 9)).
pub fn example12() -> (TripleSystem, Coloring) {
    let triples = [
        [0, 1, 9],
        [2, 3, 9],
        [0, 2, 10],
        [1, 3, 10],
        [0, 3, 15],
        [1, 2, 15],
        [9, 10, 15],
        [0, 4, 11],
        [0, 5, 12],
        [0, 6, 13],
        [0, 7, 14],
        [0, 8, 16],
        [1, 4, 12],
        [1, 5, 11],
        [1, 6, 14],
        [1, 7, 13],
        [1, 8, 17],
        [2, 4, 13],
        [2, 5, 14],
        [2, 6, 11],
        [2, 7, 12],
        [2, 8, 18],
        [3, 4, 14],
        [3, 5, 16],
        [3, 6, 17],
        [3, 7, 18],
        [3, 8, 11],
        [4, 5, 9],
        [4, 6, 18],
        [4, 7, 16],
        [4, 8, 10],
        [5, 6, 10],
        [5, 7, 17],
        [5, 8, 13],
        [6, 7, 9],
        [6, 8, 12],
        [7, 8, 15],
        [9, 11, 16],
        [9, 12, 17],
        [9, 13, 18],
        [8, 9, 14],
        [7, 10, 11],
        [10, 12, 16],
        [10, 13, 17],
        [10, 14, 18],
        [11, 12, 18],
        [11, 13, 15],
        [11, 14, 17],
        [3, 12, 13],
        [12, 14, 15],
        [13, 14, 16],
        [6, 15, 16],
        [4, 15, 17],
        [5, 15, 18],
        [2, 16, 17],
        [1, 16, 18],
        [0, 17, 18],
    ];
    let sts = TripleSystem::new(19, triples);
    let mut colors = vec![0usize; 19];
    colors[9..15].fill(1);
    colors[15..19].fill(2);
    let coloring = Coloring::new(3, colors).expect("fixture coloring is well-formed");
    (sts, coloring)
}

/// One row of the extendable-colorings table: an order `w = 2v + 1`, a
/// bicoloring pattern of an STS(v), and the unique color pair (given by its
/// class sizes) that satisfies the pairwise extension condition
/// `n_i + n_j = (v+1)/2`, even.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Theorem9Row {
    pub order: usize,
    pub base_order: usize,
    pub pattern: Vec<usize>,
    /// The essential pair as class sizes `(n_i, n_j)`.
    pub bold_pair: (usize, usize),
}

/// The extendable colorings for orders 103..175, with the essential pair of
/// each row.
pub fn theorem9_table() -> Vec<Theorem9Row> {
    let rows: [(usize, &[usize], (usize, usize)); 14] = [
        (103, &[1, 2, 8, 16, 24], (2, 24)),
        (111, &[1, 2, 8, 20, 24], (8, 20)),
        (127, &[2, 14, 18, 29], (14, 18)),
        (127, &[4, 9, 22, 28], (4, 28)),
        (127, &[2, 5, 6, 20, 30], (2, 30)),
        (135, &[1, 2, 16, 16, 32], (2, 32)),
        (151, &[4, 12, 26, 33], (12, 26)),
        (151, &[1, 4, 10, 28, 32], (10, 28)),
        (159, &[4, 14, 25, 36], (4, 36)),
        (159, &[6, 10, 29, 34], (6, 34)),
        (159, &[1, 4, 12, 26, 36], (4, 36)),
        (159, &[1, 2, 16, 24, 36], (16, 24)),
        (175, &[4, 17, 26, 40], (4, 40)),
        (175, &[2, 5, 10, 34, 36], (10, 34)),
    ];
    rows.into_iter()
        .map(|(order, pattern, bold_pair)| Theorem9Row {
            order,
            base_order: (order - 1) / 2,
            pattern: pattern.to_vec(),
            bold_pair,
        })
        .collect()
}

/// A named fixture, for the command-line lookup.
pub enum Fixture {
    System(TripleSystem),
    SystemWithColoring(TripleSystem, Coloring),
    Table(Vec<Theorem9Row>),
}

/// Known names: `fano`, `sts9`, `cyclic13`, `example12`, `theorem9_table`.
pub fn lookup(name: &str) -> Option<Fixture> {
    match name {
        "fano" => Some(Fixture::System(fano())),
        "sts9" => Some(Fixture::System(sts9())),
        "cyclic13" => Some(Fixture::System(cyclic13())),
        "example12" => {
            let (sts, col) = example12();
            Some(Fixture::SystemWithColoring(sts, col))
        }
        "theorem9_table" => Some(Fixture::Table(theorem9_table())),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{pattern_of, verify_bicoloring, Pattern};
    use crate::extension::theorem3_eligible;

    #[test]
    fn every_fixture_system_is_valid() {
        for (name, sts) in [
            ("fano", fano()),
            ("sts9", sts9()),
            ("cyclic13", cyclic13()),
            ("example12", example12().0),
        ] {
            let report = sts.validate();
            assert!(report.valid, "{name}: {:?}", report.violation);
        }
    }

    #[test]
    fn example12_coloring_verifies() {
        let (sts, col) = example12();
        assert!(verify_bicoloring(&sts, &col).unwrap().ok);
        assert_eq!(pattern_of(&col), Pattern::new([4, 6, 9]));
    }

    #[test]
    fn table_rows_pass_the_eligibility_check_on_their_bold_pair() {
        for row in theorem9_table() {
            assert_eq!(row.order, 2 * row.base_order + 1);
            assert_eq!(
                row.pattern.iter().sum::<usize>(),
                row.base_order,
                "row {}: pattern must sum to the base order",
                row.order
            );
            let eligible = theorem3_eligible(&row.pattern, row.base_order);
            let found = eligible.iter().any(|&(i, j)| {
                (row.pattern[i], row.pattern[j]) == row.bold_pair
                    || (row.pattern[j], row.pattern[i]) == row.bold_pair
            });
            assert!(
                found,
                "row {} {:?}: bold pair {:?} not eligible (eligible: {:?})",
                row.order, row.pattern, row.bold_pair, eligible
            );
        }
    }
}
