//! Exact dense linear algebra over a number field.

use crate::nf::{Fe, Field};

/// Row-major dense matrix over a number field.
#[derive(Clone, Debug)]
pub struct Mat {
    pub field: Field,
    pub ncols: usize,
    pub rows: Vec<Vec<Fe>>,
}

impl Mat {
    pub fn new(field: &Field, ncols: usize, rows: Vec<Vec<Fe>>) -> Mat {
        for r in &rows {
            assert_eq!(r.len(), ncols);
        }
        Mat {
            field: field.clone(),
            ncols,
            rows,
        }
    }

    pub fn zero(field: &Field, nrows: usize, ncols: usize) -> Mat {
        Mat {
            field: field.clone(),
            ncols,
            rows: vec![vec![Fe::zero(field); ncols]; nrows],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.rows[i][i] = Fe::one(field);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(&self.field, self.ncols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                t.rows[j][i] = x.clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.ncols, other.nrows());
        let mut out = Mat::zero(&self.field, self.nrows(), other.ncols);
        for i in 0..self.nrows() {
            for k in 0..self.ncols {
                if self.rows[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let t = &self.rows[i][k] * &other.rows[k][j];
                    out.rows[i][j] = &out.rows[i][j] + &t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(self.ncols, v.len());
        self.rows
            .iter()
            .map(|r| {
                let mut acc = Fe::zero(&self.field);
                for (a, b) in r.iter().zip(v) {
                    if !a.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = vec![];
        let mut row = 0;
        for col in 0..self.ncols {
            let piv = (row..self.nrows()).find(|&r| !self.rows[r][col].is_zero());
            let Some(piv) = piv else { continue };
            self.rows.swap(row, piv);
            let inv = self.rows[row][col].inverse().unwrap();
            for j in col..self.ncols {
                self.rows[row][j] = &self.rows[row][j] * &inv;
            }
            for r in 0..self.nrows() {
                if r != row && !self.rows[r][col].is_zero() {
                    let f = self.rows[r][col].clone();
                    for j in col..self.ncols {
                        let t = &f * &self.rows[row][j];
                        self.rows[r][j] = &self.rows[r][j] - &t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.nrows() {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel {v : Av = 0}.
    pub fn kernel(&self) -> Vec<Vec<Fe>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let is_pivot: Vec<bool> = {
            let mut p = vec![false; self.ncols];
            for &c in &pivots {
                p[c] = true;
            }
            p
        };
        let mut basis = vec![];
        for free in 0..self.ncols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Fe::zero(&self.field); self.ncols];
            v[free] = Fe::one(&self.field);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m.rows[r][free];
            }
            basis.push(v);
        }
        basis
    }

    /// A particular solution of Ax = b, if any.
    pub fn solve(&self, b: &[Fe]) -> Option<Vec<Fe>> {
        assert_eq!(b.len(), self.nrows());
        let mut aug = Mat::zero(&self.field, self.nrows(), self.ncols + 1);
        for i in 0..self.nrows() {
            aug.rows[i][..self.ncols].clone_from_slice(&self.rows[i]);
            aug.rows[i][self.ncols] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.ncols) {
            return None; // inconsistent
        }
        let mut x = vec![Fe::zero(&self.field); self.ncols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.rows[r][self.ncols].clone();
        }
        Some(x)
    }

    pub fn determinant(&self) -> Fe {
        assert_eq!(self.nrows(), self.ncols);
        let mut m = self.clone();
        let n = m.nrows();
        let mut det = Fe::one(&self.field);
        for col in 0..n {
            let piv = (col..n).find(|&r| !m.rows[r][col].is_zero());
            let Some(piv) = piv else {
                return Fe::zero(&self.field);
            };
            if piv != col {
                m.rows.swap(col, piv);
                det = -&det;
            }
            det = &det * &m.rows[col][col];
            let inv = m.rows[col][col].inverse().unwrap();
            for r in col + 1..n {
                if m.rows[r][col].is_zero() {
                    continue;
                }
                let f = &m.rows[r][col] * &inv;
                for j in col..n {
                    let t = &f * &m.rows[col][j];
                    m.rows[r][j] = &m.rows[r][j] - &t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.nrows(), self.ncols);
        let n = self.nrows();
        let mut aug = Mat::zero(&self.field, n, 2 * n);
        for i in 0..n {
            aug.rows[i][..n].clone_from_slice(&self.rows[i]);
            aug.rows[i][n + i] = Fe::one(&self.field);
        }
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let rows = aug.rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(Mat::new(&self.field, n, rows))
    }
}

/// Incrementally maintained row echelon basis of a growing row space.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    ncols: usize,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: &Field, ncols: usize) -> Echelon {
        Echelon {
            field: field.clone(),
            ncols,
            rows: vec![],
            pivots: vec![],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot column of each basis row, in insertion order.
    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `row` against the basis; inserts the residue if nonzero.
    /// Returns true when the rank grew.
    pub fn insert(&mut self, mut row: Vec<Fe>) -> bool {
        assert_eq!(row.len(), self.ncols);
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(r) {
                    let t = &f * y;
                    *x = &*x - &t;
                }
            }
        }
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[p].inverse().unwrap();
        for x in row.iter_mut() {
            *x = &*x * &inv;
        }
        self.rows.push(row);
        self.pivots.push(p);
        true
    }

    /// True when `row` lies in the current row space.
    pub fn contains(&self, row: &[Fe]) -> bool {
        let mut probe = self.clone();
        !probe.insert(row.to_vec())
    }

    /// Right kernel of the accumulated row space (as a constraint matrix).
    pub fn kernel(&self) -> Vec<Vec<Fe>> {
        Mat::new(&self.field, self.ncols, self.rows.clone()).kernel()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::NumberField;
    use crate::rat::rat_int;

    fn q() -> Field {
        NumberField::rationals()
    }

    fn fe(v: i64) -> Fe {
        Fe::from_rat(&q(), rat_int(v))
    }

    fn mat(rows: &[&[i64]]) -> Mat {
        let ncols = rows[0].len();
        Mat::new(
            &q(),
            ncols,
            rows.iter()
                .map(|r| r.iter().map(|&v| fe(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernel() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        for r in &m.rows {
            let mut acc = Fe::zero(&q());
            for (a, b) in r.iter().zip(&k[0]) {
                acc = &acc + &(a * b);
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = mat(&[&[1, 1], &[1, -1]]);
        let x = m.solve(&[fe(3), fe(1)]).unwrap();
        assert_eq!(x, vec![fe(2), fe(1)]);
        let s = mat(&[&[1, 1], &[2, 2]]);
        assert!(s.solve(&[fe(1), fe(3)]).is_none());
    }

    #[test]
    fn determinant_and_inverse() {
        let m = mat(&[&[2, 1], &[5, 3]]);
        assert_eq!(m.determinant(), fe(1));
        let inv = m.inverse().unwrap();
        let prod = m.mul(&inv);
        assert_eq!(prod.rows, Mat::identity(&q(), 2).rows);
        let sing = mat(&[&[1, 2], &[2, 4]]);
        assert!(sing.inverse().is_none());
        assert!(sing.determinant().is_zero());
    }

    #[test]
    fn echelon_incremental() {
        let mut e = Echelon::new(&q(), 3);
        assert!(e.insert(vec![fe(1), fe(2), fe(3)]));
        assert!(!e.insert(vec![fe(2), fe(4), fe(6)]));
        assert!(e.insert(vec![fe(0), fe(1), fe(0)]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&[fe(1), fe(0), fe(3)]));
        assert!(!e.contains(&[fe(0), fe(0), fe(1)]));
        assert_eq!(e.kernel().len(), 1);
    }
}
