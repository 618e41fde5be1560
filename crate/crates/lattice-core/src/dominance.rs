use num_traits::Zero;

use crate::error::{Error, Result};
use crate::mat::{IntMat, Q};
use crate::vec::{ExpVec, UfVec};

/// Precomputed exact solver for `delta = Bt·n` with a full-column-rank `Bt`.
///
/// A maximal set of independent rows S is fixed once and its adjugate stored,
/// so a solve is an integer product, a divisibility test and a check against
/// the remaining rows. All arithmetic is fraction-free in i128.
#[derive(Clone, Debug)]
pub struct Dominance {
    bt: IntMat,
    pivot_rows: Vec<usize>,
    adj: Vec<Vec<i128>>,
    det: i128,
    grading: Vec<Q>,
}

impl Dominance {
    pub fn new(bt: &IntMat) -> Result<Self> {
        let r = bt.ncols();
        let pivot_rows = independent_rows(bt);
        if pivot_rows.len() != r {
            return Err(Error::Config(format!(
                "exchange matrix {bt} does not have full column rank"
            )));
        }
        let sq: Vec<Vec<i128>> = pivot_rows
            .iter()
            .map(|&i| (0..r).map(|j| bt.get(i, j) as i128).collect())
            .collect();
        let det = bareiss_det(&sq);
        let adj = adjugate(&sq);
        // λ supported on S: λ_S = 1ᵀ S⁻¹
        let mut grading = vec![Q::zero(); bt.nrows()];
        for (b, &i) in pivot_rows.iter().enumerate() {
            let s: i128 = (0..r).map(|a| adj[a][b]).sum();
            grading[i] = Q::new(s, det);
        }
        Ok(Dominance {
            bt: bt.clone(),
            pivot_rows,
            adj,
            det,
            grading,
        })
    }

    pub fn bt(&self) -> &IntMat {
        &self.bt
    }

    // det·n, if the system is consistent
    fn scaled_solution(&self, delta: &[i64]) -> Option<Vec<i128>> {
        assert_eq!(delta.len(), self.bt.nrows(), "length mismatch");
        let r = self.bt.ncols();
        let rhs: Vec<i128> = self.pivot_rows.iter().map(|&i| delta[i] as i128).collect();
        let n: Vec<i128> = (0..r)
            .map(|a| (0..r).map(|b| self.adj[a][b] * rhs[b]).sum())
            .collect();
        for i in 0..self.bt.nrows() {
            let lhs: i128 = (0..r).map(|j| self.bt.get(i, j) as i128 * n[j]).sum();
            if lhs != self.det * delta[i] as i128 {
                return None;
            }
        }
        Some(n)
    }

    /// Rational n with `delta = Bt·n`, if the system is consistent.
    pub fn solve_rational(&self, delta: &[i64]) -> Option<Vec<Q>> {
        let n = self.scaled_solution(delta)?;
        Some(n.into_iter().map(|v| Q::new(v, self.det)).collect())
    }

    /// Integer n with `delta = Bt·n`, if one exists (no sign condition).
    pub fn solve_integer(&self, delta: &[i64]) -> Option<UfVec> {
        let n = self.scaled_solution(delta)?;
        if n.iter().all(|v| v % self.det == 0) {
            Some(UfVec(n.iter().map(|v| (v / self.det) as i64).collect()))
        } else {
            None
        }
    }

    /// The n ≥ 0 with `g_from = g_to + Bt·n`, i.e. the witness of `g_from ⪯ g_to`.
    pub fn solve(&self, g_from: &ExpVec, g_to: &ExpVec) -> Option<UfVec> {
        let delta = g_from - g_to;
        self.solve_integer(&delta.0).filter(|n| n.is_nonneg())
    }

    /// `lo ⪯ hi`.
    pub fn dominated(&self, lo: &ExpVec, hi: &ExpVec) -> bool {
        self.solve(lo, hi).is_some()
    }

    /// `lo ≺ hi`.
    pub fn strictly_dominated(&self, lo: &ExpVec, hi: &ExpVec) -> bool {
        lo != hi && self.dominated(lo, hi)
    }

    /// `{ g + Bt·m : 0 ≤ m ≤ n }` where `eta = g + Bt·n`; empty if `eta ⋠ g`.
    pub fn interval(&self, eta: &ExpVec, g: &ExpVec) -> Vec<ExpVec> {
        let Some(n) = self.solve(eta, g) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let mut m = vec![0i64; n.len()];
        loop {
            out.push(g + &ExpVec(self.bt.mul_vec(&m)));
            let mut k = 0;
            while k < m.len() && m[k] == n[k] {
                m[k] = 0;
                k += 1;
            }
            if k == m.len() {
                break;
            }
            m[k] += 1;
        }
        out.sort();
        out
    }

    pub fn image(&self, n: &UfVec) -> ExpVec {
        ExpVec(self.bt.mul_vec(&n.0))
    }

    /// A linear functional λ with `λ·Bt = (1,…,1)`, so `λ(g + Bt·n) = λ(g) + |n|`.
    pub fn grading(&self) -> &[Q] {
        &self.grading
    }

    pub fn level(&self, e: &ExpVec) -> Q {
        self.grading
            .iter()
            .zip(&e.0)
            .filter(|(l, _)| !l.is_zero())
            .fold(Q::zero(), |acc, (l, &c)| acc + *l * Q::from_integer(c as i128))
    }
}

// Greedy choice of rows that are linearly independent, by fraction-free elimination.
fn independent_rows(bt: &IntMat) -> Vec<usize> {
    let r = bt.ncols();
    let mut basis: Vec<(usize, Vec<i128>)> = Vec::new();
    let mut chosen = Vec::new();
    for i in 0..bt.nrows() {
        let mut v: Vec<i128> = (0..r).map(|j| bt.get(i, j) as i128).collect();
        for (piv, b) in &basis {
            if v[*piv] != 0 {
                let (a, c) = (b[*piv], v[*piv]);
                let g = gcd(a, c);
                for j in 0..r {
                    v[j] = v[j] * (a / g) - b[j] * (c / g);
                }
                let cg = v.iter().fold(0, |acc, &x| gcd(acc, x));
                if cg > 1 {
                    v.iter_mut().for_each(|x| *x /= cg);
                }
            }
        }
        if let Some(piv) = v.iter().position(|&x| x != 0) {
            basis.push((piv, v));
            chosen.push(i);
            if chosen.len() == r {
                break;
            }
        }
    }
    chosen
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn bareiss_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn adjugate(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i128>> = (0..n)
                .filter(|&a| a != i)
                .map(|a| (0..n).filter(|&b| b != j).map(|b| m[a][b]).collect())
                .collect();
            let c = bareiss_det(&minor);
            adj[j][i] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    adj
}

/// Convenience wrapper: checks rank on every call.
pub fn solve_dominance(g_from: &ExpVec, g_to: &ExpVec, bt: &IntMat) -> Result<Option<UfVec>> {
    Ok(Dominance::new(bt)?.solve(g_from, g_to))
}

pub fn interval(eta: &ExpVec, g: &ExpVec, bt: &IntMat) -> Result<Vec<ExpVec>> {
    Ok(Dominance::new(bt)?.interval(eta, g))
}
