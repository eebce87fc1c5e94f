use super::DenseMatrix;
use crate::scalar::Ring;

/// Compressed-row sparse matrix. Entries within a row are sorted by column.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(usize, T)>>,
}

impl<T: Ring> SparseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: vec![Vec::new(); rows] }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut entries: Vec<Vec<(usize, T)>> = vec![Vec::new(); rows];
        for (i, j, v) in triplets {
            assert!(i < rows && j < cols, "triplet ({i}, {j}) outside {rows}x{cols}");
            entries[i].push((j, v));
        }
        for row in &mut entries {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, T)> = Vec::with_capacity(row.len());
            for (j, v) in row.drain(..) {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 = last.1.clone() + v,
                    _ => merged.push((j, v)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            *row = merged;
        }
        SparseMatrix { rows, cols, entries }
    }

    pub fn from_dense(m: &DenseMatrix<T>) -> Self {
        let mut trip = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_zero() {
                    trip.push((i, j, m[(i, j)].clone()));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), trip)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, T)] {
        &self.entries[i]
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i]
            .binary_search_by_key(&j, |e| e.0)
            .map(|p| self.entries[i][p].1.clone())
            .unwrap_or_else(|_| T::zero())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.entries.iter().enumerate().flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "dimension mismatch in sparse product");
        self.entries
            .iter()
            .map(|row| {
                let mut acc = T::zero();
                for (j, v) in row {
                    if !x[*j].is_zero() {
                        acc = acc + v.clone() * x[*j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// `selfᵀ x`
    pub fn tmul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.rows, "dimension mismatch in transposed product");
        let mut out = vec![T::zero(); self.cols];
        for (i, row) in self.entries.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            for (j, v) in row {
                out[*j] = out[*j].clone() + v.clone() * x[i].clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.triplets().map(|(i, j, v)| (j, i, v.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in sparse product");
        let mut trip = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            let mut acc: Vec<T> = vec![T::zero(); other.cols];
            let mut touched = Vec::new();
            for (k, a) in row {
                for (j, b) in &other.entries[*k] {
                    if acc[*j].is_zero() {
                        touched.push(*j);
                    }
                    acc[*j] = acc[*j].clone() + a.clone() * b.clone();
                }
            }
            touched.sort_unstable();
            touched.dedup();
            for j in touched {
                if !acc[j].is_zero() {
                    trip.push((i, j, acc[j].clone()));
                }
            }
        }
        Self::from_triplets(self.rows, other.cols, trip)
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v.clone();
        }
        m
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> SparseMatrix<U> {
        SparseMatrix::from_triplets(self.rows, self.cols, self.triplets().map(|(i, j, v)| (i, j, f(v))))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Vec::is_empty)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, T::one())))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_triplets(
            self.rows,
            self.cols,
            self.triplets().chain(other.triplets()).map(|(i, j, v)| (i, j, v.clone())),
        )
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_cancel() {
        let m = SparseMatrix::from_triplets(2, 2, vec![(0, 1, 2i64), (0, 1, -2), (1, 0, 3), (1, 0, 1)]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 0), 4);
        assert_eq!(m.mul_vec(&[1, 5]), vec![0, 4]);
        assert_eq!(m.tmul_vec(&[1, 1]), vec![4, 0]);
        assert_eq!(m.transpose().get(0, 1), 4);
    }

    #[test]
    fn sparse_product_matches_dense() {
        let a = SparseMatrix::from_triplets(2, 3, vec![(0, 0, 1i64), (0, 2, 2), (1, 1, -1)]);
        let b = SparseMatrix::from_triplets(3, 2, vec![(0, 1, 4i64), (1, 0, 1), (2, 0, 3)]);
        assert_eq!(a.mul(&b).to_dense(), a.to_dense().mul(&b.to_dense()));
    }
}
