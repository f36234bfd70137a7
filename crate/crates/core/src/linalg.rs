//! Dense exact linear algebra over the scalar field.
//!
//! Row-major matrices with Gauss-Jordan elimination. Pivoting is
//! deterministic (first nonzero entry in column order), which keeps every
//! downstream basis choice reproducible.

use alloc::vec::Vec;

use crate::scalar::{FieldSpec, Scalar};

#[derive(Clone, Debug)]
pub struct MatK {
    pub rows: usize,
    pub cols: usize,
    field: FieldSpec,
    data: Vec<Scalar>,
}

impl MatK {
    pub fn zero(rows: usize, cols: usize, field: FieldSpec) -> MatK {
        MatK { rows, cols, field, data: alloc::vec![field.zero(); rows * cols] }
    }

    pub fn identity(n: usize, field: FieldSpec) -> MatK {
        let mut m = MatK::zero(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, field: FieldSpec) -> MatK {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        MatK { rows: r, cols: c, field, data }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }

    pub fn mul(&self, other: &MatK) -> MatK {
        assert_eq!(self.cols, other.rows);
        let mut out = MatK::zero(self.rows, other.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(i, j).add(&a.mul(b).unwrap()).unwrap();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// In-place reduced row echelon form. Returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // first nonzero entry at or below row r
            let Some(pr) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self.at(r, c).inv().unwrap();
            for j in c..self.cols {
                let v = self.at(r, j).mul(&inv).unwrap();
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.at(i, c).is_zero() {
                    continue;
                }
                let factor = self.at(i, c).clone();
                for j in c..self.cols {
                    let v = self.at(i, j).sub(&self.at(r, j).mul(&factor).unwrap()).unwrap();
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace `{v : M·v = 0}` (column vectors), in the
    /// canonical RREF parametrization ordered by free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = alloc::vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = alloc::vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (pi, &pc) in pivots.iter().enumerate() {
                v[pc] = m.at(pi, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the row space, as the nonzero rows of the RREF.
    pub fn row_basis(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        (0..pivots.len()).map(|i| m.row(i).to_vec()).collect()
    }

    /// Solves `x·M = b` for a row vector `b`, returning one solution.
    ///
    /// This is the natural orientation for row-vector/right-multiplication
    /// module maps. Returns `None` when the system is inconsistent.
    pub fn solve_left(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.cols);
        // transpose system: Mᵀ · xᵀ = bᵀ; do elimination on [Mᵀ | b]
        let mut aug = MatK::zero(self.cols, self.rows + 1, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(j, i, self.at(i, j).clone());
            }
        }
        for j in 0..self.cols {
            aug.set(j, self.rows, b[j].clone());
        }
        let pivots = aug.rref();
        // inconsistent iff a pivot lands in the augmented column
        if pivots.contains(&self.rows) {
            return None;
        }
        let mut x = alloc::vec![self.field.zero(); self.rows];
        for (pi, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(pi, self.rows).clone();
        }
        Some(x)
    }

    /// Whether the square scalar matrix is invertible.
    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// Span tracker: an incrementally-extended row space with canonical
/// reduction, used for minimal-generator selection and membership tests.
pub struct RowSpan {
    cols: usize,
    #[allow(dead_code)]
    field: FieldSpec,
    // rows kept in reduced echelon form; pivot_of[i] = pivot column of row i
    rows: Vec<Vec<Scalar>>,
    pivot_of: Vec<usize>,
}

impl RowSpan {
    pub fn new(cols: usize, field: FieldSpec) -> RowSpan {
        RowSpan { cols, field, rows: Vec::new(), pivot_of: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the span; the remainder is returned (zero iff the
    /// vector was already in the span).
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivot_of) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for j in 0..self.cols {
                v[j] = v[j].sub(&row[j].mul(&factor).unwrap()).unwrap();
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|s| s.is_zero())
    }

    /// Inserts a vector; returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|s| !s.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().unwrap();
        for x in r.iter_mut() {
            *x = x.mul(&inv).unwrap();
        }
        // back-substitute into existing rows to keep reduced form
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for j in 0..self.cols {
                row[j] = row[j].sub(&r[j].mul(&factor).unwrap()).unwrap();
            }
        }
        self.rows.push(r);
        self.pivot_of.push(p);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f101() -> FieldSpec {
        FieldSpec::prime(101).unwrap()
    }

    fn m(rows: &[&[i64]], f: FieldSpec) -> MatK {
        MatK::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect(),
            f,
        )
    }

    #[test]
    fn rank_and_nullspace() {
        let f = f101();
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]], f);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        // check A·v = 0
        for i in 0..a.rows {
            let mut acc = f.zero();
            for j in 0..a.cols {
                acc = acc.add(&a.at(i, j).mul(&ns[0][j]).unwrap()).unwrap();
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn solve_left_orientation() {
        let f = FieldSpec::Rationals;
        // x·M = b with M = [[1,1],[0,1]]: x = (b0, b1 - b0)
        let mat = m(&[&[1, 1], &[0, 1]], f);
        let b = alloc::vec![f.from_int(3), f.from_int(5)];
        let x = mat.solve_left(&b).unwrap();
        assert_eq!(x, alloc::vec![f.from_int(3), f.from_int(2)]);
        // inconsistent system
        let sing = m(&[&[1, 1], &[2, 2]], f);
        assert!(sing.solve_left(&[f.from_int(0), f.from_int(1)]).is_none());
    }

    #[test]
    fn rowspan_membership() {
        let f = f101();
        let mut span = RowSpan::new(3, f);
        assert!(span.insert(&[f.from_int(1), f.from_int(2), f.from_int(0)]));
        assert!(span.insert(&[f.from_int(0), f.from_int(1), f.from_int(1)]));
        assert!(!span.insert(&[f.from_int(1), f.from_int(3), f.from_int(1)]));
        assert_eq!(span.dim(), 2);
        assert!(span.contains(&[f.from_int(2), f.from_int(4), f.from_int(0)]));
        assert!(!span.contains(&[f.from_int(0), f.from_int(0), f.from_int(1)]));
    }

    #[test]
    fn rational_rref_exactness() {
        let f = FieldSpec::Rationals;
        let a = m(&[&[2, 4], &[3, 7]], f);
        assert!(a.is_invertible());
        let id = MatK::identity(2, f);
        let prod = a.mul(&id);
        assert_eq!(prod.at(1, 0), &f.from_int(3));
    }
}
