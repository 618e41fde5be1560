use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mat::IntMat;

/// Arbitrary-precision counterpart of [`IntMat`], for matrices whose entries
/// grow without bound under repeated mutation (exchange, C- and G-matrices).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BigMat {
    row_ids: Vec<usize>,
    col_ids: Vec<usize>,
    data: Vec<BigInt>,
}

impl BigMat {
    pub fn new(row_ids: Vec<usize>, col_ids: Vec<usize>, data: Vec<BigInt>) -> Self {
        assert_eq!(row_ids.len() * col_ids.len(), data.len(), "shape mismatch");
        BigMat { row_ids, col_ids, data }
    }

    pub fn zeros(row_ids: Vec<usize>, col_ids: Vec<usize>) -> Self {
        let len = row_ids.len() * col_ids.len();
        BigMat::new(row_ids, col_ids, vec![BigInt::zero(); len])
    }

    pub fn identity(ids: Vec<usize>) -> Self {
        let mut m = BigMat::zeros(ids.clone(), ids);
        for i in 0..m.nrows() {
            m.set(i, i, BigInt::one());
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.ncols() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        let n = self.ncols();
        self.data[i * n + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.nrows()).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> BigMat {
        let mut t = BigMat::zeros(self.col_ids.clone(), self.row_ids.clone());
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &BigMat) -> BigMat {
        assert_eq!(
            self.col_ids, rhs.row_ids,
            "index sets do not match in matrix product"
        );
        let mut out = BigMat::zeros(self.row_ids.clone(), rhs.col_ids.clone());
        for i in 0..self.nrows() {
            for k in 0..self.ncols() {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.ncols() {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.ncols() + j;
                    out.data[idx] += a * b;
                }
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BigMat {
        let mut out = BigMat::zeros(rows.to_vec(), cols.to_vec());
        for (a, &r) in rows.iter().enumerate() {
            let i = self.row_ids.iter().position(|&x| x == r).expect("row label");
            for (b, &c) in cols.iter().enumerate() {
                let j = self.col_ids.iter().position(|&x| x == c).expect("column label");
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.nrows() == self.ncols()
            && (0..self.nrows()).all(|i| {
                (0..self.ncols()).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// Rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<BigInt>> = (0..self.nrows())
            .map(|i| (0..self.ncols()).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut rank = 0;
        for c in 0..self.ncols() {
            let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(p, rank);
            let piv = rows[rank][c].clone();
            for i in rank + 1..rows.len() {
                let f = rows[i][c].clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..self.ncols() {
                    let v = &rows[i][j] * &piv - &f * &rows[rank][j];
                    rows[i][j] = v;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_default()
    }

    /// Narrowing conversion; fails when an entry exceeds the 64-bit range.
    pub fn to_int(&self) -> Result<IntMat> {
        let data = self
            .data
            .iter()
            .map(|v| {
                v.to_i64().ok_or_else(|| {
                    Error::Config(format!("matrix entry {v} exceeds the 64-bit range"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMat::new(self.row_ids.clone(), self.col_ids.clone(), data))
    }
}

impl From<&IntMat> for BigMat {
    fn from(m: &IntMat) -> Self {
        let data = m
            .rows()
            .into_iter()
            .flatten()
            .map(BigInt::from)
            .collect();
        BigMat::new(m.row_ids().to_vec(), m.col_ids().to_vec(), data)
    }
}

impl fmt::Display for BigMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.nrows() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.ncols() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
