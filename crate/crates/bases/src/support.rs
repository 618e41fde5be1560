use std::fmt;

use lattice_core::{int_inverse, Error, ExpVec, IntMat, Result, UfVec};
use laurent_ring::{degree, is_pointed, transport, DegreeCert, LaurentPoly};
use seed_engine::{green_to_red_check, phi, psi_matrix, Seed, TrackedPath};
use serde::Serialize;

/// Three-valued answer for checks that may run into series truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    pub fn is_true(self) -> bool {
        self == Tri::True
    }

    /// Conjunction where a definite `False` wins over `Unknown`.
    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::Unknown, _) | (_, Tri::Unknown) => Tri::Unknown,
            _ => Tri::True,
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::True => "true",
            Tri::False => "false",
            Tri::Unknown => "unknown",
        })
    }
}

/// Mutation sequences of length 1..=max_len from `s` with no vertex repeated
/// twice in a row.
pub fn reduced_paths(s: &Seed, max_len: usize) -> Vec<Vec<usize>> {
    let uf = s.unfrozen();
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &layer {
            for &k in uf {
                if p.last() != Some(&k) {
                    let mut q = p.clone();
                    q.push(k);
                    next.push(q);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A verified path from t[−1] to t, with the maps between the two seeds.
#[derive(Clone, Debug)]
pub struct Coreach {
    path: TrackedPath,
    back: TrackedPath,
    psi_inv: IntMat,
}

impl Coreach {
    /// `coreach` must end at `t` and be green-to-red.
    pub fn new(t: &Seed, coreach: &TrackedPath) -> Result<Self> {
        if coreach.current() != t {
            return Err(Error::Usage("coreach path does not end at the given seed".into()));
        }
        if green_to_red_check(coreach)?.is_none() {
            return Err(Error::Usage(
                "coreach path is not green-to-red, so its base is not t[-1]".into(),
            ));
        }
        let back = coreach.reversed()?;
        let psi_inv = int_inverse(&psi_matrix(&back)?)?;
        Ok(Coreach {
            path: coreach.clone(),
            back,
            psi_inv,
        })
    }

    pub fn t(&self) -> &Seed {
        self.path.current()
    }

    pub fn t_minus(&self) -> &Seed {
        self.path.base()
    }

    /// The path from t[−1] to t.
    pub fn path(&self) -> &TrackedPath {
        &self.path
    }

    /// The path from t to t[−1].
    pub fn back(&self) -> &TrackedPath {
        &self.back
    }

    /// φ_{t[−1],t}: degrees at t to degrees at t[−1].
    pub fn phi(&self, g: &ExpVec) -> Result<ExpVec> {
        phi(g, &self.back)
    }

    /// ψ_{t[−1],t}^{−1}·φ_{t[−1],t}(g), the forced codegree at t.
    pub fn codegree_of(&self, g: &ExpVec) -> Result<ExpVec> {
        Ok(ExpVec(self.psi_inv.mul_vec(&self.phi(g)?.0)))
    }

    pub fn support_dimension(&self, g: &ExpVec) -> Result<UfVec> {
        let v = self.codegree_of(g)?;
        self.t().dominance().solve(&v, g).ok_or_else(|| {
            Error::InvariantViolation(format!(
                "no nonnegative integer support dimension for {g}: {v} is not below it"
            ))
        })
    }

    pub fn interval(&self, g: &ExpVec) -> Result<Vec<ExpVec>> {
        let eta = self.codegree_of(g)?;
        self.support_dimension(g)?;
        Ok(self.t().dominance().interval(&eta, g))
    }
}

/// The n ≥ 0 with ψ^{−1}φ(g) = g + B̃(t)·n.
pub fn support_dimension_of_degree(g: &ExpVec, t: &Seed, coreach: &TrackedPath) -> Result<UfVec> {
    Coreach::new(t, coreach)?.support_dimension(g)
}

/// The bidegree interval between g and its forced codegree.
pub fn bidegree_interval(g: &ExpVec, t: &Seed, coreach: &TrackedPath) -> Result<Vec<ExpVec>> {
    Coreach::new(t, coreach)?.interval(g)
}

/// Which seeds the strict order of a deformation factor quantifies over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// t and t[−1].
    Pair,
    /// t, t[−1] and every seed reachable from t by a reduced path of length ≤ depth.
    Seeds { depth: usize },
}

impl Default for Scope {
    fn default() -> Self {
        Scope::Seeds { depth: 8 }
    }
}

/// Degrees of the bidegree interval strictly below `g` at every seed of the scope.
pub fn deformation_factor(
    g: &ExpVec,
    t: &Seed,
    coreach: &TrackedPath,
    scope: Scope,
) -> Result<Vec<ExpVec>> {
    factor_with(&Coreach::new(t, coreach)?, g, scope)
}

pub(crate) fn factor_with(cr: &Coreach, g: &ExpVec, scope: Scope) -> Result<Vec<ExpVec>> {
    let tm = cr.t_minus().dominance();
    let pg = cr.phi(g)?;
    let mut out = Vec::new();
    for h in cr.interval(g)? {
        if &h != g && tm.strictly_dominated(&cr.phi(&h)?, &pg) {
            out.push(h);
        }
    }
    if let Scope::Seeds { depth } = scope {
        for steps in reduced_paths(cr.t(), depth) {
            if out.is_empty() {
                break;
            }
            let q = TrackedPath::from_steps(cr.t(), &steps)?;
            let dom = q.current().dominance();
            let qg = phi(g, &q)?;
            let mut kept = Vec::with_capacity(out.len());
            for h in out {
                if dom.strictly_dominated(&phi(&h, &q)?, &qg) {
                    kept.push(h);
                }
            }
            out = kept;
        }
    }
    Ok(out)
}

/// Whether `z`, written at the common base of `paths`, expands at each endpoint
/// to an element pointed at the φ-image of its degree.
///
/// Truncated transports that cannot decide give `Unknown`; raise `order` and retry.
pub fn is_compatibly_pointed(z: &LaurentPoly, paths: &[TrackedPath], order: u32) -> Result<Tri> {
    let mut acc = Tri::True;
    for q in paths {
        let s = q.base();
        if !is_pointed(z, s) {
            return Ok(Tri::False);
        }
        let g = degree(z, s).expect("pointed");
        let want = phi(&g, q)?;
        let series = transport(z, &q.reversed()?, order)?;
        acc = acc.and(match series.degree_certificate() {
            DegreeCert::Pointed(h) if h == want => Tri::True,
            DegreeCert::Unknown => Tri::Unknown,
            _ => Tri::False,
        });
        if acc == Tri::False {
            break;
        }
    }
    Ok(acc)
}
