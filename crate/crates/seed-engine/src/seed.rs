use std::fmt;
use std::sync::{Arc, OnceLock};

use lattice_core::{BigMat, Dominance, Error, ExpVec, IntMat, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational entry of an exchange matrix.
pub type Rat = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

fn pos(x: i64) -> i64 {
    x.max(0)
}

fn pos_big(x: BigInt) -> BigInt {
    if x.is_positive() {
        x
    } else {
        BigInt::zero()
    }
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

fn small(v: &BigInt) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::Config(format!("entry {v} exceeds the 64-bit range")))
}

/// A seed: exchange matrix with skew-symmetrizer and frozen/unfrozen split.
///
/// Entries are arbitrary precision because they grow quickly under mutation
/// of wild seeds; 64-bit views are produced on demand.
#[derive(Clone)]
pub struct Seed {
    n: usize,
    unfrozen: Vec<usize>,
    d: Vec<i64>,
    b: Vec<Rat>,
    labels: Option<Vec<String>>,
    dom: Arc<OnceLock<std::result::Result<Dominance, Error>>>,
}

impl PartialEq for Seed {
    fn eq(&self, o: &Seed) -> bool {
        self.n == o.n && self.unfrozen == o.unfrozen && self.d == o.d && self.b == o.b
    }
}

impl Eq for Seed {}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Seed")
            .field("n", &self.n)
            .field("unfrozen", &self.unfrozen)
            .field("d", &self.d)
            .field("b", &self.rows_display())
            .finish()
    }
}

impl Seed {
    pub fn new(
        n: usize,
        unfrozen: Vec<usize>,
        d: Vec<i64>,
        rows: Vec<Vec<Rat>>,
        labels: Option<Vec<String>>,
    ) -> Result<Seed> {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Config(format!("exchange matrix must be {n}x{n}")));
        }
        if d.len() != n {
            return Err(Error::Config(format!("expected {n} weights, got {}", d.len())));
        }
        if let Some(i) = d.iter().position(|&w| w <= 0) {
            return Err(Error::Config(format!("weight d_{} must be positive", i + 1)));
        }
        let mut uf = unfrozen;
        uf.sort_unstable();
        uf.dedup();
        if uf.is_empty() {
            return Err(Error::Config("no unfrozen vertices".into()));
        }
        if let Some(&k) = uf.iter().find(|&&k| k >= n) {
            return Err(Error::Config(format!("unfrozen index {} out of range", k + 1)));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::Config(format!("expected {n} labels")));
            }
        }
        let b: Vec<Rat> = rows.into_iter().flatten().collect();
        let is_uf = |i: usize| uf.binary_search(&i).is_ok();
        for i in 0..n {
            for j in 0..n {
                let lhs = &b[i * n + j] * rat(d[i]);
                let rhs = -(&b[j * n + i] * rat(d[j]));
                if lhs != rhs {
                    return Err(Error::Config(format!(
                        "not skew-symmetrizable at pair ({},{}): d_i*b_ij = {lhs} but -d_j*b_ji = {rhs}",
                        i + 1,
                        j + 1,
                    )));
                }
                if (is_uf(i) || is_uf(j)) && !b[i * n + j].is_integer() {
                    return Err(Error::Config(format!(
                        "entry b_{},{} = {} must be an integer",
                        i + 1,
                        j + 1,
                        b[i * n + j]
                    )));
                }
            }
        }
        let s = Seed {
            n,
            unfrozen: uf,
            d,
            b,
            labels,
            dom: Arc::new(OnceLock::new()),
        };
        let r = s.btilde_big().rank();
        if r != s.rank() {
            return Err(Error::Config(format!(
                "the I x I_uf block has rank {r}, expected full column rank {}",
                s.rank()
            )));
        }
        Ok(s)
    }

    /// Integer matrix with the given unfrozen set and weights.
    pub fn from_int(rows: &[Vec<i64>], unfrozen: Vec<usize>, d: Vec<i64>) -> Result<Seed> {
        let n = rows.len();
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| rat(v)).collect())
            .collect();
        Seed::new(n, unfrozen, d, rows, None)
    }

    /// All vertices unfrozen, unit weights.
    pub fn skew_symmetric(rows: &[Vec<i64>]) -> Result<Seed> {
        let n = rows.len();
        Seed::from_int(rows, (0..n).collect(), vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.unfrozen.len()
    }

    pub fn unfrozen(&self) -> &[usize] {
        &self.unfrozen
    }

    pub fn frozen(&self) -> Vec<usize> {
        (0..self.n).filter(|i| !self.is_unfrozen(*i)).collect()
    }

    pub fn is_unfrozen(&self, k: usize) -> bool {
        self.unfrozen.binary_search(&k).is_ok()
    }

    /// Position of `k` within the unfrozen list.
    pub fn uf_pos(&self, k: usize) -> Option<usize> {
        self.unfrozen.binary_search(&k).ok()
    }

    pub fn d(&self) -> &[i64] {
        &self.d
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Self {
        self.labels = labels;
        self
    }

    pub fn b(&self, i: usize, j: usize) -> &Rat {
        &self.b[i * self.n + j]
    }

    /// Integer entry as i64; valid when one index is unfrozen and the entry is small.
    pub fn bint(&self, i: usize, j: usize) -> i64 {
        self.try_bint(i, j).expect("integer exchange-matrix entry")
    }

    pub fn try_bint(&self, i: usize, j: usize) -> Result<i64> {
        let v = self.b(i, j);
        if !v.is_integer() {
            return Err(Error::Usage(format!("b_{},{} is not an integer", i + 1, j + 1)));
        }
        small(v.numer())
    }

    fn bbig(&self, i: usize, j: usize) -> BigInt {
        self.b(i, j).to_integer()
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.b(i, j).clone()).collect())
            .collect()
    }

    fn rows_display(&self) -> Vec<Vec<String>> {
        self.rows()
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect())
            .collect()
    }

    /// The I × I_uf block at full precision.
    pub fn btilde_big(&self) -> BigMat {
        let mut m = BigMat::zeros((0..self.n).collect(), self.unfrozen.clone());
        for i in 0..self.n {
            for (q, &k) in self.unfrozen.iter().enumerate() {
                m.set(i, q, self.bbig(i, k));
            }
        }
        m
    }

    /// Dominance solver for B̃; fails if entries exceed the 64-bit range.
    pub fn try_dominance(&self) -> Result<&Dominance> {
        self.dom
            .get_or_init(|| Dominance::new(&self.btilde_big().to_int()?))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn dominance(&self) -> &Dominance {
        self.try_dominance()
            .expect("exchange matrix within the 64-bit range")
    }

    /// The I × I_uf block.
    pub fn btilde(&self) -> &IntMat {
        self.dominance().bt()
    }

    /// The I_uf × I_uf block.
    pub fn principal(&self) -> IntMat {
        self.btilde().submatrix(&self.unfrozen, &self.unfrozen)
    }

    /// Principal part skew-symmetric.
    pub fn is_skew_symmetric(&self) -> bool {
        self.unfrozen.iter().all(|&i| {
            self.unfrozen
                .iter()
                .all(|&j| *self.b(i, j) == -self.b(j, i))
        })
    }

    fn check_unfrozen(&self, k: usize) -> Result<()> {
        if k >= self.n {
            return Err(Error::Usage(format!("vertex {} out of range", k + 1)));
        }
        if !self.is_unfrozen(k) {
            return Err(Error::Usage(format!("vertex {} is frozen", k + 1)));
        }
        Ok(())
    }

    /// Exponent vector of y_k, the column of B̃ at k.
    pub fn y_exponent(&self, k: usize) -> Result<ExpVec> {
        self.check_unfrozen(k)?;
        (0..self.n)
            .map(|i| self.try_bint(i, k))
            .collect::<Result<Vec<_>>>()
            .map(ExpVec)
    }

    pub fn mutate(&self, k: usize) -> Result<Seed> {
        self.check_unfrozen(k)?;
        let b = mutate_matrix(&self.rows(), k).into_iter().flatten().collect();
        // rank is preserved: B̃' = Ẽ·B̃·F with Ẽ, F invertible
        Ok(Seed {
            n: self.n,
            unfrozen: self.unfrozen.clone(),
            d: self.d.clone(),
            b,
            labels: self.labels.clone(),
            dom: Arc::new(OnceLock::new()),
        })
    }

    pub fn mutate_path(&self, steps: &[usize]) -> Result<Seed> {
        let mut s = self.clone();
        for &k in steps {
            s = s.mutate(k)?;
        }
        Ok(s)
    }

    /// `(Ẽ_{k,ε}, F_{k,ε})`: Ẽ is I×I, F is I_uf×I_uf.
    pub fn ef_matrices(&self, k: usize, eps: Sign) -> Result<(BigMat, BigMat)> {
        self.check_unfrozen(k)?;
        let e = BigInt::from(eps.value());
        let mut em = BigMat::identity((0..self.n).collect());
        em.set(k, k, -BigInt::one());
        for i in 0..self.n {
            if i != k {
                em.set(i, k, pos_big(-&e * self.bbig(i, k)));
            }
        }
        let mut fm = BigMat::identity(self.unfrozen.clone());
        let kq = self.uf_pos(k).unwrap();
        fm.set(kq, kq, -BigInt::one());
        for (jq, &j) in self.unfrozen.iter().enumerate() {
            if j != k {
                fm.set(kq, jq, pos_big(&e * self.bbig(k, j)));
            }
        }
        Ok((em, fm))
    }

    /// The tropical transformation φ at k, from this seed to μ_k of it.
    pub fn tropical_transform(&self, g: &ExpVec, k: usize) -> Result<ExpVec> {
        self.check_unfrozen(k)?;
        if g.len() != self.n {
            return Err(Error::Usage(format!("degree {g} has wrong length")));
        }
        let gk = g[k];
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.n {
            out.push(if i == k {
                -gk
            } else {
                let bik = self.try_bint(i, k)?;
                g[i] + pos(bik) * pos(gk) - pos(-bik) * pos(-gk)
            });
        }
        Ok(ExpVec(out))
    }

    pub fn opposite(&self) -> Seed {
        let rows = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| -v).collect())
            .collect();
        Seed::new(self.n, self.unfrozen.clone(), self.d.clone(), rows, self.labels.clone())
            .expect("negation preserves seed invariants")
    }

    /// Langlands dual: b_ij(t^∨) = −b_ji(t), weights d/d_i with d = lcm.
    pub fn langlands_dual(&self) -> Seed {
        let l = self.d.iter().fold(1i64, |a, &b| a.lcm(&b));
        let d = self.d.iter().map(|&w| l / w).collect();
        let rows = (0..self.n)
            .map(|i| (0..self.n).map(|j| -self.b(j, i)).collect())
            .collect();
        Seed::new(self.n, self.unfrozen.clone(), d, rows, self.labels.clone())
            .expect("dual of a valid seed is valid")
    }

    /// Appends a frozen copy i' of each unfrozen i (except `excluded`) with
    /// b_{i',i} = 1 and b_{i,i'} = −1.
    pub fn principal_framing(&self, excluded: Option<usize>) -> Result<Seed> {
        if let Some(k) = excluded {
            self.check_unfrozen(k)?;
        }
        let copies: Vec<usize> = self
            .unfrozen
            .iter()
            .copied()
            .filter(|&i| Some(i) != excluded)
            .collect();
        let m = self.n + copies.len();
        let mut rows = vec![vec![Rat::zero(); m]; m];
        for i in 0..self.n {
            for j in 0..self.n {
                rows[i][j] = self.b(i, j).clone();
            }
        }
        let mut d = self.d.clone();
        for (p, &i) in copies.iter().enumerate() {
            let ip = self.n + p;
            rows[ip][i] = rat(1);
            rows[i][ip] = rat(-1);
            d.push(self.d[i]);
        }
        Seed::new(m, self.unfrozen.clone(), d, rows, None)
    }
}

/// Matrix mutation μ_k on a bare square matrix; no seed invariants are needed.
pub fn mutate_matrix(b: &[Vec<Rat>], k: usize) -> Vec<Vec<Rat>> {
    mutate_matrix_eps(b, k, Sign::Plus)
}

/// Matrix mutation with an explicit sign; the result does not depend on it.
pub fn mutate_matrix_eps(b: &[Vec<Rat>], k: usize, eps: Sign) -> Vec<Vec<Rat>> {
    let n = b.len();
    let e = rat(eps.value());
    let plus = |x: Rat| if x.is_positive() { x } else { Rat::zero() };
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == k || j == k {
                        -&b[i][j]
                    } else {
                        &b[i][j]
                            + &b[i][k] * plus(&e * &b[k][j])
                            + plus(-&e * &b[i][k]) * &b[k][j]
                    }
                })
                .collect()
        })
        .collect()
}

/// Completes an I × I_uf matrix to a seed: frozen weights are the lcm d of the
/// unfrozen ones, b_kf = −(d/d_k)·b_fk and frozen-frozen entries vanish.
///
/// The column labels of `bt` name the unfrozen vertices; `d_uf` follows them.
pub fn extend_full_matrix(bt: &IntMat, d_uf: &[i64]) -> Result<Seed> {
    let n = bt.nrows();
    let uf = bt.col_ids().to_vec();
    if d_uf.len() != uf.len() {
        return Err(Error::Config("one weight per unfrozen vertex required".into()));
    }
    if bt.row_ids() != (0..n).collect::<Vec<_>>().as_slice() {
        return Err(Error::Config("rows must be labelled 0..n".into()));
    }
    let l = d_uf.iter().fold(1i64, |a, &b| a.lcm(&b));
    let mut d = vec![l; n];
    for (p, &k) in uf.iter().enumerate() {
        d[k] = d_uf[p];
    }
    let mut rows = vec![vec![Rat::zero(); n]; n];
    for (p, &k) in uf.iter().enumerate() {
        for i in 0..n {
            rows[i][k] = rat(bt.get(i, p));
        }
    }
    for f in (0..n).filter(|i| !uf.contains(i)) {
        for (p, &k) in uf.iter().enumerate() {
            rows[k][f] = rat(-(l / d_uf[p]) * bt.get(f, p));
        }
    }
    Seed::new(n, uf, d, rows, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kron() -> Seed {
        Seed::skew_symmetric(&[vec![0, -2], vec![2, 0]]).unwrap()
    }

    fn a2() -> Seed {
        Seed::skew_symmetric(&[vec![0, -1], vec![1, 0]]).unwrap()
    }

    fn ints(m: &BigMat) -> Vec<Vec<i64>> {
        m.to_int().unwrap().rows()
    }

    #[test]
    fn mutation_examples() {
        assert_eq!(kron().mutate(0).unwrap().principal().rows(), vec![vec![0, 2], vec![-2, 0]]);
        assert_eq!(a2().mutate(0).unwrap().mutate(0).unwrap(), a2());
        // rank-deficient, so only the bare matrix operation applies
        let r = |rows: &[[i64; 3]]| -> Vec<Vec<Rat>> {
            rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
        };
        let b = r(&[[0, -1, 0], [1, 0, -1], [0, 1, 0]]);
        let want = r(&[[0, 1, -1], [-1, 0, 1], [1, -1, 0]]);
        assert_eq!(mutate_matrix_eps(&b, 1, Sign::Plus), want);
        assert_eq!(mutate_matrix_eps(&b, 1, Sign::Minus), want);
    }

    #[test]
    fn ef_examples() {
        let (e, f) = kron().ef_matrices(0, Sign::Plus).unwrap();
        assert_eq!(ints(&e), vec![vec![-1, 0], vec![0, 1]]);
        assert_eq!(ints(&f), vec![vec![-1, 0], vec![0, 1]]);
        let (e, f) = a2().ef_matrices(1, Sign::Plus).unwrap();
        assert_eq!(ints(&e), vec![vec![1, 1], vec![0, -1]]);
        assert_eq!(ints(&f), vec![vec![1, 0], vec![1, -1]]);
        let prod = e.mul(&a2().btilde_big()).mul(&f);
        assert_eq!(prod, a2().mutate(1).unwrap().btilde_big());
    }

    #[test]
    fn tropical_examples() {
        let k = kron();
        assert_eq!(k.tropical_transform(&ExpVec(vec![1, 0]), 0).unwrap(), ExpVec(vec![-1, 2]));
        assert_eq!(k.tropical_transform(&ExpVec(vec![-1, 0]), 0).unwrap(), ExpVec(vec![1, 0]));
        assert_eq!(k.tropical_transform(&ExpVec(vec![0, 0]), 1).unwrap(), ExpVec(vec![0, 0]));
    }

    #[test]
    fn frozen_vertex_rejected() {
        let s = Seed::from_int(&[vec![0, -1], vec![1, 0]], vec![0], vec![1, 1]).unwrap();
        assert!(matches!(s.mutate(1), Err(Error::Usage(_))));
    }

    #[test]
    fn validation_names_pair() {
        let err = Seed::from_int(&[vec![0, -1], vec![1, 0]], vec![0, 1], vec![1, 2]).unwrap_err();
        assert!(err.to_string().contains("(1,2)"), "{err}");
        let err = Seed::from_int(&[vec![0, 0], vec![0, 0]], vec![0, 1], vec![1, 1]).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn derived_seeds() {
        let k = kron();
        assert_eq!(k.opposite().principal().rows(), vec![vec![0, 2], vec![-2, 0]]);
        assert_eq!(k.opposite().opposite(), k);
        assert_eq!(k.langlands_dual(), k);
        let b2 = Seed::from_int(&[vec![0, -1], vec![2, 0]], vec![0, 1], vec![2, 1]).unwrap();
        let dual = b2.langlands_dual();
        assert_eq!(dual.principal().rows(), vec![vec![0, -2], vec![1, 0]]);
        assert_eq!(dual.d(), &[1, 2]);
        let pf = k.principal_framing(None).unwrap();
        assert_eq!(pf.n(), 4);
        assert_eq!(pf.bint(2, 0), 1);
        assert_eq!(pf.bint(0, 2), -1);
        assert_eq!(pf.bint(3, 1), 1);
        assert_eq!(pf.bint(3, 0), 0);
        let pf1 = k.principal_framing(Some(0)).unwrap();
        assert_eq!(pf1.n(), 3);
        assert_eq!(pf1.bint(2, 1), 1);
        assert_eq!(pf1.bint(2, 0), 0);
    }

    #[test]
    fn extension_recipe() {
        // B2 with one frozen row
        let bt = IntMat::new(vec![0, 1, 2], vec![0, 1], vec![0, -1, 2, 0, 1, 3]);
        let s = extend_full_matrix(&bt, &[2, 1]).unwrap();
        assert_eq!(s.d(), &[2, 1, 2]);
        assert_eq!(s.bint(0, 2), -1);
        assert_eq!(s.bint(1, 2), -6);
        assert!(s.b(2, 2).is_zero());
        let bt = IntMat::from_rows(&[vec![0, -2], vec![2, 0]]);
        assert_eq!(extend_full_matrix(&bt, &[1, 1]).unwrap(), kron());
    }
}
