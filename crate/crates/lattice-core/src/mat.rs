use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Q = Ratio<i128>;

/// Dense integer matrix whose rows and columns are labelled by vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMat {
    row_ids: Vec<usize>,
    col_ids: Vec<usize>,
    data: Vec<i64>,
}

impl IntMat {
    pub fn new(row_ids: Vec<usize>, col_ids: Vec<usize>, data: Vec<i64>) -> Self {
        assert_eq!(row_ids.len() * col_ids.len(), data.len(), "shape mismatch");
        IntMat { row_ids, col_ids, data }
    }

    /// Rows and columns labelled 0..m, 0..n.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(m * n);
        for r in rows {
            assert_eq!(r.len(), n, "ragged rows");
            data.extend_from_slice(r);
        }
        IntMat::new((0..m).collect(), (0..n).collect(), data)
    }

    pub fn zeros(row_ids: Vec<usize>, col_ids: Vec<usize>) -> Self {
        let len = row_ids.len() * col_ids.len();
        IntMat::new(row_ids, col_ids, vec![0; len])
    }

    pub fn identity(ids: Vec<usize>) -> Self {
        let mut m = IntMat::zeros(ids.clone(), ids);
        for i in 0..m.nrows() {
            m.set(i, i, 1);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_ids.len()
    }

    pub fn row_ids(&self) -> &[usize] {
        &self.row_ids
    }

    pub fn col_ids(&self) -> &[usize] {
        &self.col_ids
    }

    pub fn with_ids(mut self, row_ids: Vec<usize>, col_ids: Vec<usize>) -> Self {
        assert_eq!(row_ids.len(), self.row_ids.len());
        assert_eq!(col_ids.len(), self.col_ids.len());
        self.row_ids = row_ids;
        self.col_ids = col_ids;
        self
    }

    /// Entry by position.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.ncols() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        let n = self.ncols();
        self.data[i * n + j] = v;
    }

    /// Entry by row/column label.
    pub fn at(&self, row_id: usize, col_id: usize) -> i64 {
        let i = self.row_pos(row_id).expect("row label not present");
        let j = self.col_pos(col_id).expect("column label not present");
        self.get(i, j)
    }

    pub fn row_pos(&self, id: usize) -> Option<usize> {
        self.row_ids.iter().position(|&r| r == id)
    }

    pub fn col_pos(&self, id: usize) -> Option<usize> {
        self.col_ids.iter().position(|&c| c == id)
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.nrows())
            .map(|i| (0..self.ncols()).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.nrows()).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.ncols()).map(|j| self.column(j)).collect()
    }

    pub fn from_columns(row_ids: Vec<usize>, col_ids: Vec<usize>, cols: &[Vec<i64>]) -> Self {
        let mut m = IntMat::zeros(row_ids, col_ids);
        assert_eq!(cols.len(), m.ncols());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), m.nrows());
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.col_ids.clone(), self.row_ids.clone());
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn neg(&self) -> IntMat {
        IntMat::new(
            self.row_ids.clone(),
            self.col_ids.clone(),
            self.data.iter().map(|v| -v).collect(),
        )
    }

    /// Matrix product; the column labels of `self` must equal the row labels of `rhs`.
    pub fn mul(&self, rhs: &IntMat) -> IntMat {
        assert_eq!(
            self.col_ids, rhs.row_ids,
            "index sets do not match in matrix product"
        );
        let mut out = IntMat::zeros(self.row_ids.clone(), rhs.col_ids.clone());
        for i in 0..self.nrows() {
            for k in 0..self.ncols() {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.ncols() {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.ncols(), "vector length mismatch");
        (0..self.nrows())
            .map(|i| (0..self.ncols()).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Submatrix selected by labels, in the given label order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMat {
        let mut out = IntMat::zeros(rows.to_vec(), cols.to_vec());
        for (a, &r) in rows.iter().enumerate() {
            let i = self.row_pos(r).expect("row label not present");
            for (b, &c) in cols.iter().enumerate() {
                let j = self.col_pos(c).expect("column label not present");
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.nrows() == self.ncols()
            && (0..self.nrows())
                .all(|i| (0..self.ncols()).all(|j| self.get(i, j) == i64::from(i == j)))
    }

    pub fn to_rational(&self) -> Vec<Vec<Q>> {
        self.rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| Q::from_integer(v as i128)).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.to_rational();
        row_reduce(&mut m).len()
    }

    pub fn det(&self) -> Result<i64> {
        if self.nrows() != self.ncols() {
            return Err(Error::Usage("determinant of a non-square matrix".into()));
        }
        let n = self.nrows();
        let mut m = self.to_rational();
        let mut det = Q::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Ok(0);
            };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            let piv = m[col][col];
            det *= piv;
            for r in col + 1..n {
                let f = m[r][col] / piv;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m[col][c];
                    m[r][c] -= f * v;
                }
            }
        }
        debug_assert!(det.is_integer());
        Ok(*det.numer() as i64)
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// In-place reduced row echelon form; returns the pivot columns.
pub fn row_reduce(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let piv = m[r][c];
        for v in m[r].iter_mut() {
            *v /= piv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..cols {
                    let v = m[r][j];
                    m[i][j] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact inverse of a unimodular integer matrix.
pub fn int_inverse(m: &IntMat) -> Result<IntMat> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Usage("inverse of a non-square matrix".into()));
    }
    let det = m.det()?;
    if det.abs() != 1 {
        return Err(Error::InvariantViolation(format!(
            "matrix {m} is not unimodular (determinant {det})"
        )));
    }
    let mut aug: Vec<Vec<Q>> = m
        .to_rational()
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    row_reduce(&mut aug);
    let mut out = IntMat::zeros(m.col_ids().to_vec(), m.row_ids().to_vec());
    for i in 0..n {
        for j in 0..n {
            let v = aug[i][n + j];
            debug_assert!(v.is_integer());
            out.set(i, j, *v.numer() as i64);
        }
    }
    Ok(out)
}
