use std::fmt;

use lattice_core::{BigMat, Error, ExpVec, IntMat, Result, UfVec};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::seed::{Seed, Sign};

/// A mutation sequence from a base seed with its C-matrix and extended G-matrix.
#[derive(Clone, Debug)]
pub struct TrackedPath {
    steps: Vec<usize>,
    seeds: Vec<Seed>,
    c: BigMat,
    gext: BigMat,
    signs: Vec<Sign>,
}

impl TrackedPath {
    pub fn new(base: Seed) -> Self {
        let c = BigMat::identity(base.unfrozen().to_vec());
        let gext = BigMat::identity((0..base.n()).collect());
        TrackedPath {
            steps: Vec::new(),
            seeds: vec![base],
            c,
            gext,
            signs: Vec::new(),
        }
    }

    pub fn from_steps(base: &Seed, steps: &[usize]) -> Result<Self> {
        let mut p = TrackedPath::new(base.clone());
        for &k in steps {
            p.push(k)?;
        }
        Ok(p)
    }

    pub fn base(&self) -> &Seed {
        &self.seeds[0]
    }

    pub fn current(&self) -> &Seed {
        self.seeds.last().unwrap()
    }

    /// Seeds visited, starting with the base.
    pub fn seeds(&self) -> &[Seed] {
        &self.seeds
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn c(&self) -> &BigMat {
        &self.c
    }

    pub fn gext(&self) -> &BigMat {
        &self.gext
    }

    /// 64-bit view of C.
    pub fn c_int(&self) -> Result<IntMat> {
        self.c.to_int()
    }

    /// 64-bit view of the extended G-matrix.
    pub fn gext_int(&self) -> Result<IntMat> {
        self.gext.to_int()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// The unfrozen block of the G-matrix.
    pub fn principal_g(&self) -> BigMat {
        let uf = self.base().unfrozen();
        self.gext.submatrix(uf, uf)
    }

    /// Sign of the c-vector at vertex k, or an error when it is zero or mixed.
    pub fn c_sign(&self, k: usize) -> Result<Sign> {
        let q = self
            .current()
            .uf_pos(k)
            .ok_or_else(|| Error::Usage(format!("vertex {} is frozen", k + 1)))?;
        let col = self.c.column(q);
        if col.iter().all(|v| !v.is_negative()) && col.iter().any(|v| v.is_positive()) {
            Ok(Sign::Plus)
        } else if col.iter().all(|v| !v.is_positive()) && col.iter().any(|v| v.is_negative()) {
            Ok(Sign::Minus)
        } else {
            Err(Error::InvariantViolation(format!(
                "c-vector at vertex {} after steps {:?} is not sign-coherent: {:?}",
                k + 1,
                self.steps.iter().map(|s| s + 1).collect::<Vec<_>>(),
                col.iter().map(|v| v.to_string()).collect::<Vec<_>>()
            )))
        }
    }

    pub fn push(&mut self, k: usize) -> Result<()> {
        let cur = self.current().clone();
        if k >= cur.n() || !cur.is_unfrozen(k) {
            return Err(Error::Usage(format!("cannot mutate at vertex {}", k + 1)));
        }
        let eps = self.c_sign(k)?;
        let (e, f) = cur.ef_matrices(k, eps)?;
        self.c = self.c.mul(&f);
        self.gext = self.gext.mul(&e);
        self.seeds.push(cur.mutate(k)?);
        self.steps.push(k);
        self.signs.push(eps);
        Ok(())
    }

    pub fn extend(&self, k: usize) -> Result<Self> {
        let mut p = self.clone();
        p.push(k)?;
        Ok(p)
    }

    /// The same mutations walked backwards, based at this path's endpoint.
    pub fn reversed(&self) -> Result<Self> {
        let steps: Vec<usize> = self.steps.iter().rev().copied().collect();
        TrackedPath::from_steps(self.current(), &steps)
    }

    /// Extended g-vectors of the endpoint with respect to the base.
    pub fn g_vectors(&self) -> Result<Vec<ExpVec>> {
        Ok(self.gext_int()?.columns().into_iter().map(ExpVec).collect())
    }

    pub fn c_vectors(&self) -> Result<Vec<UfVec>> {
        Ok(self.c_int()?.columns().into_iter().map(UfVec).collect())
    }
}

/// Composite tropical transformation along `p`, from its base to its endpoint.
pub fn phi(g: &ExpVec, p: &TrackedPath) -> Result<ExpVec> {
    let mut g = g.clone();
    for (s, &k) in p.steps().iter().enumerate() {
        g = p.seeds()[s].tropical_transform(&g, k)?;
    }
    Ok(g)
}

/// The linear map ψ whose i-th column is φ(f_i) along `p`.
pub fn psi_matrix(p: &TrackedPath) -> Result<IntMat> {
    let n = p.base().n();
    let cols = (0..n)
        .map(|i| phi(&ExpVec::unit(n, i), p).map(|v| v.0))
        .collect::<Result<Vec<_>>>()?;
    let m = IntMat::from_columns((0..n).collect(), (0..n).collect(), &cols);
    let det = m.det()?;
    if det.abs() != 1 {
        return Err(Error::InvariantViolation(format!(
            "degree transformation {m} is not unimodular"
        )));
    }
    Ok(m)
}

/// A permutation of the unfrozen positions 0..r.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::Usage(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(r: usize) -> Self {
        Permutation {
            images: (0..r).collect(),
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, k: usize) -> usize {
        self.images[k]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// (P_σ)_{ik} = δ_{i,σ(k)}.
    pub fn matrix(&self, ids: Vec<usize>) -> IntMat {
        let mut m = IntMat::zeros(ids.clone(), ids);
        for (k, &i) in self.images.iter().enumerate() {
            m.set(i, k, 1);
        }
        m
    }

    /// Cycle notation on 1-based positions, "id" for the identity.
    pub fn cycles(&self) -> String {
        if self.is_identity() {
            return "id".into();
        }
        let mut seen = vec![false; self.images.len()];
        let mut out = String::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push((i + 1).to_string());
                i = self.images[i];
            }
            out.push_str(&format!("({})", cyc.join(" ")));
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycles())
    }
}

/// σ with C = −P_σ, if the endpoint C-matrix has that form.
pub fn green_to_red_check(p: &TrackedPath) -> Result<Option<Permutation>> {
    let c = p.c();
    let r = c.ncols();
    let mut images = Vec::with_capacity(r);
    for k in 0..r {
        let col = c.column(k);
        let nz: Vec<usize> = (0..r).filter(|&i| !col[i].is_zero()).collect();
        if nz.len() != 1 || col[nz[0]] != -BigInt::one() {
            return Ok(None);
        }
        images.push(nz[0]);
    }
    let Ok(sigma) = Permutation::new(images) else {
        return Ok(None);
    };
    // d'_k = d'_σ(k), with the base seed's unfrozen weights
    let base = p.base();
    let d: Vec<i64> = base.unfrozen().iter().map(|&k| base.d()[k]).collect();
    for k in 0..r {
        if d[k] != d[sigma.apply(k)] {
            return Err(Error::InvariantViolation(format!(
                "green-to-red permutation {sigma} does not preserve the weights {d:?}"
            )));
        }
    }
    Ok(Some(sigma))
}

/// Iterative-deepening search for a green-to-red sequence starting at `s`.
///
/// Green vertices are tried first and the previous vertex is never repeated.
/// `None` only means nothing was found within `max_depth`.
pub fn find_green_to_red(s: &Seed, max_depth: usize) -> Result<Option<TrackedPath>> {
    for depth in 1..=max_depth {
        let mut p = TrackedPath::new(s.clone());
        if let Some(found) = g2r_dfs(&mut p, depth)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

fn g2r_dfs(p: &mut TrackedPath, depth: usize) -> Result<Option<TrackedPath>> {
    if p.len() == depth {
        return Ok(green_to_red_check(p)?.map(|_| p.clone()));
    }
    let uf = p.current().unfrozen().to_vec();
    let last = p.steps().last().copied();
    let mut order: Vec<(bool, usize)> = Vec::new();
    for &k in &uf {
        if Some(k) == last {
            continue;
        }
        let green = p.c_sign(k)? == Sign::Plus;
        order.push((!green, k));
    }
    order.sort();
    for (_, k) in order {
        let mut q = p.extend(k)?;
        if let Some(found) = g2r_dfs(&mut q, depth)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Finds t₋ and a path from t₋ to `s` whose endpoint C-matrix is −P_σ, so
/// that t₋ = s[−1]. Candidate sequences are enumerated by length and then
/// lexicographically; each is checked by replaying it from t₋.
pub fn find_coreachable(s: &Seed, max_depth: usize) -> Result<Option<TrackedPath>> {
    let uf = s.unfrozen().to_vec();
    for len in 1..=max_depth {
        let mut seq: Vec<usize> = Vec::with_capacity(len);
        if let Some(p) = coreach_enum(s, &uf, len, &mut seq)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

fn coreach_enum(
    s: &Seed,
    uf: &[usize],
    len: usize,
    seq: &mut Vec<usize>,
) -> Result<Option<TrackedPath>> {
    if seq.len() == len {
        let back: Vec<usize> = seq.iter().rev().copied().collect();
        let t_minus = s.mutate_path(&back)?;
        let p = TrackedPath::from_steps(&t_minus, seq)?;
        if green_to_red_check(&p)?.is_some() {
            debug_assert_eq!(p.current(), s);
            return Ok(Some(p));
        }
        return Ok(None);
    }
    for &k in uf {
        if seq.last() == Some(&k) {
            continue;
        }
        seq.push(k);
        let found = coreach_enum(s, uf, len, seq)?;
        seq.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}
