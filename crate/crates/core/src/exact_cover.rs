//! Dancing-links exact cover, used as the engine of the extension search.
//!
//! The matrix is built once per search: columns are the constraints (each
//! must be covered exactly once), rows are the choices. The solver always
//! branches on a column with the fewest remaining rows (ties broken by the
//! lowest column id) and tries that column's rows in insertion order, so
//! searches are deterministic and the first solution found is canonical.

use crate::budget::Budget;

const NIL: usize = usize::MAX;

/// Sparse 0/1 matrix in the doubly-linked four-way representation.
pub struct DlxMatrix {
    // node links; indices 0..num_cols are column headers, num_cols is the root
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col_of: Vec<usize>,
    row_of: Vec<usize>,
    size: Vec<usize>,
    num_cols: usize,
    num_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DlxOutcome {
    /// Row ids of the first solution, in selection order.
    Found(Vec<usize>),
    /// The whole tree was traversed without a solution.
    Exhausted,
    /// The node budget ran out first.
    BudgetExhausted,
}

impl DlxMatrix {
    pub fn new(num_cols: usize) -> Self {
        let n = num_cols + 1; // headers plus root
        let root = num_cols;
        let mut m = DlxMatrix {
            left: (0..n).map(|i| if i == 0 { root } else { i - 1 }).collect(),
            right: (0..n).map(|i| (i + 1) % n).collect(),
            up: (0..n).collect(),
            down: (0..n).collect(),
            col_of: (0..n).collect(),
            row_of: vec![NIL; n],
            size: vec![0; num_cols],
            num_cols,
            num_rows: 0,
        };
        m.left[0] = root;
        m.right[root] = 0;
        m
    }

    /// Appends a row covering the given columns. Returns the row id.
    pub fn add_row(&mut self, cols: &[usize]) -> usize {
        let row_id = self.num_rows;
        self.num_rows += 1;
        let mut first = NIL;
        for &c in cols {
            debug_assert!(c < self.num_cols);
            let node = self.left.len();
            // vertical insertion above the header keeps rows in id order
            let above = self.up[c];
            self.up.push(above);
            self.down.push(c);
            self.down[above] = node;
            self.up[c] = node;
            self.col_of.push(c);
            self.row_of.push(row_id);
            self.size[c] += 1;
            if first == NIL {
                first = node;
                self.left.push(node);
                self.right.push(node);
            } else {
                let prev = self.left[first];
                self.left.push(prev);
                self.right.push(first);
                self.right[prev] = node;
                self.left[first] = node;
            }
        }
        row_id
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col_of[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col_of[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    /// Pre-selects a row (for splitting the root branching externally).
    pub fn force_row(&mut self, row_node_cols: &[usize]) {
        for &c in row_node_cols {
            self.cover(c);
        }
    }

    /// Finds the first solution in canonical order, or proves there is none.
    pub fn search(&mut self, budget: &Budget) -> DlxOutcome {
        let mut solution = Vec::new();
        self.search_rec(budget, &mut solution)
    }

    fn search_rec(&mut self, budget: &Budget, solution: &mut Vec<usize>) -> DlxOutcome {
        if !budget.tick() {
            return DlxOutcome::BudgetExhausted;
        }
        let root = self.num_cols;
        if self.right[root] == root {
            return DlxOutcome::Found(solution.clone());
        }
        // min-size column, ties to the lowest id (scan order is id order only
        // within the uncovered list, so compare explicitly)
        let mut best = NIL;
        let mut c = self.right[root];
        while c != root {
            if best == NIL
                || self.size[c] < self.size[best]
                || (self.size[c] == self.size[best] && c < best)
            {
                best = c;
            }
            c = self.right[c];
        }
        if self.size[best] == 0 {
            return DlxOutcome::Exhausted;
        }
        self.cover(best);
        let mut r = self.down[best];
        while r != best {
            solution.push(self.row_of[r]);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.col_of[j]);
                j = self.right[j];
            }
            let out = self.search_rec(budget, solution);
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.col_of[j]);
                j = self.left[j];
            }
            solution.pop();
            match out {
                DlxOutcome::Exhausted => {}
                other => {
                    self.uncover(best);
                    return other;
                }
            }
            r = self.down[r];
        }
        self.uncover(best);
        DlxOutcome::Exhausted
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knuth_example() {
        // the classic 6-row example: unique solution {row 0, row 3, row 4}
        let mut m = DlxMatrix::new(7);
        let rows = [
            vec![2, 4, 5],
            vec![0, 3, 6],
            vec![1, 2, 5],
            vec![0, 3],
            vec![1, 6],
            vec![3, 4, 6],
        ];
        for r in &rows {
            m.add_row(r);
        }
        match m.search(&Budget::unlimited()) {
            DlxOutcome::Found(mut sol) => {
                sol.sort_unstable();
                assert_eq!(sol, vec![0, 3, 4]);
            }
            other => panic!("expected a solution, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_matrix_exhausts() {
        let mut m = DlxMatrix::new(3);
        m.add_row(&[0, 1]);
        m.add_row(&[1, 2]);
        // column coverage conflicts: no exact cover
        assert_eq!(m.search(&Budget::unlimited()), DlxOutcome::Exhausted);
    }

    #[test]
    fn budget_exhaustion() {
        let mut m = DlxMatrix::new(2);
        m.add_row(&[0]);
        m.add_row(&[1]);
        assert_eq!(m.search(&Budget::new(0)), DlxOutcome::BudgetExhausted);
    }

    #[test]
    fn search_is_repeatable_after_backtracking() {
        let mut m = DlxMatrix::new(4);
        m.add_row(&[0, 1]);
        m.add_row(&[2, 3]);
        m.add_row(&[0, 2]);
        m.add_row(&[1, 3]);
        let first = m.search(&Budget::unlimited());
        let second = m.search(&Budget::unlimited());
        assert_eq!(first, second);
        assert!(matches!(first, DlxOutcome::Found(_)));
    }
}
