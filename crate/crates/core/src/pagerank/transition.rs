use super::Graph;
use crate::kernel::Matrix;

/// Column-stochastic transition matrix `H`, stored by column.
///
/// Column `j` spreads node `j`'s rank evenly over its out-neighbours.
/// A node with no out-neighbours gets the uniform column `1/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    n: usize,
    /// `(row, weight)` pairs per column; empty for dangling columns.
    columns: Vec<Vec<(usize, f64)>>,
}

pub fn build_transition(g: &Graph) -> TransitionMatrix {
    let n = g.node_count();
    let columns = g
        .out_neighbors()
        .into_iter()
        .map(|targets| {
            let w = 1.0 / targets.len() as f64;
            targets.into_iter().map(|i| (i, w)).collect()
        })
        .collect();
    TransitionMatrix { n, columns }
}

impl TransitionMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn is_dangling(&self, col: usize) -> bool {
        self.columns[col].is_empty()
    }

    pub fn column(&self, col: usize) -> &[(usize, f64)] {
        &self.columns[col]
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        if self.is_dangling(col) {
            return 1.0 / self.n as f64;
        }
        self.columns[col]
            .iter()
            .find(|&&(r, _)| r == row)
            .map_or(0.0, |&(_, w)| w)
    }

    pub fn column_sum(&self, col: usize) -> f64 {
        if self.is_dangling(col) {
            (0..self.n).map(|_| 1.0 / self.n as f64).sum()
        } else {
            self.columns[col].iter().map(|&(_, w)| w).sum()
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.n]; self.n];
        for j in 0..self.n {
            if self.is_dangling(j) {
                for row in out.iter_mut() {
                    row[j] = 1.0 / self.n as f64;
                }
            } else {
                for &(i, w) in &self.columns[j] {
                    out[i][j] = w;
                }
            }
        }
        out
    }

    /// Single-precision dense copy for loading onto the fabric.
    pub fn to_matrix_f32(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for j in 0..self.n {
            if self.is_dangling(j) {
                let u = (1.0 / self.n as f64) as f32;
                for i in 0..self.n {
                    m.set(i, j, u);
                }
            } else {
                for &(i, w) in &self.columns[j] {
                    m.set(i, j, w as f32);
                }
            }
        }
        m
    }
}
