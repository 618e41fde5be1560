use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use lattice_core::{int_inverse, Error, ExpVec, IntMat, Result};
use laurent_ring::{cluster_variables_along, degree, is_pointed, transport, LaurentPoly};
use seed_engine::{phi, Seed, TrackedPath};

use crate::support::{factor_with, Coreach, Scope};

/// A lazily evaluated family of elements indexed by degrees at one seed.
pub trait PointedFamily: Send + Sync {
    fn seed(&self) -> &Seed;

    fn name(&self) -> String;

    /// Which degrees the family covers, in words.
    fn domain(&self) -> String;

    /// The element at `g`, or `None` outside the domain. Unchecked.
    fn raw(&self, g: &ExpVec) -> Result<Option<LaurentPoly>>;
}

/// The element at `g`, checked to be pointed at `g`.
pub fn element(fam: &dyn PointedFamily, g: &ExpVec) -> Result<Option<LaurentPoly>> {
    let Some(z) = fam.raw(g)? else {
        return Ok(None);
    };
    let s = fam.seed();
    if !is_pointed(&z, s) || degree(&z, s).as_ref() != Some(g) {
        return Err(Error::FamilyContract {
            degree: g.to_string(),
            msg: format!("{} produced {z}, which is not pointed at {g}", fam.name()),
        });
    }
    Ok(Some(z))
}

// one cluster with its g-vectors as columns, and the inverse
#[derive(Clone, Debug)]
struct Cluster {
    vars: Vec<LaurentPoly>,
    g_inv: IntMat,
}

/// Localized cluster monomials of the clusters reachable within `depth` steps.
#[derive(Clone, Debug)]
pub struct ClusterMonomialFamily {
    seed: Seed,
    depth: usize,
    clusters: Vec<Cluster>,
}

impl ClusterMonomialFamily {
    pub fn new(seed: &Seed, depth: usize) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut clusters = Vec::new();
        for steps in maximal_reduced_paths(seed, depth) {
            let p = TrackedPath::from_steps(seed, &steps)?;
            for vars in cluster_variables_along(&p)? {
                let gs: Vec<ExpVec> = vars
                    .iter()
                    .map(|x| {
                        degree(x, seed).ok_or_else(|| {
                            Error::InvariantViolation(format!("cluster variable {x} is not pointed"))
                        })
                    })
                    .collect::<Result<_>>()?;
                let mut key = gs.clone();
                key.sort();
                if !seen.insert(key) {
                    continue;
                }
                let n = seed.n();
                let cols: Vec<Vec<i64>> = gs.into_iter().map(|g| g.0).collect();
                let g_mat = IntMat::from_columns((0..n).collect(), (0..n).collect(), &cols);
                clusters.push(Cluster {
                    vars,
                    g_inv: int_inverse(&g_mat)?,
                });
            }
        }
        Ok(ClusterMonomialFamily {
            seed: seed.clone(),
            depth,
            clusters,
        })
    }

    /// Number of distinct clusters found.
    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    /// Cluster variables of every enumerated cluster.
    pub fn clusters(&self) -> impl Iterator<Item = &[LaurentPoly]> {
        self.clusters.iter().map(|c| c.vars.as_slice())
    }

    /// Exponents of `g` in the first cluster whose g-vector cone contains it.
    fn locate(&self, g: &ExpVec) -> Option<(&Cluster, Vec<i64>)> {
        self.clusters.iter().find_map(|c| {
            let a = c.g_inv.mul_vec(&g.0);
            let ok = self.seed.unfrozen().iter().all(|&k| a[k] >= 0);
            ok.then_some((c, a))
        })
    }

    pub fn contains(&self, g: &ExpVec) -> bool {
        self.locate(g).is_some()
    }
}

impl PointedFamily for ClusterMonomialFamily {
    fn seed(&self) -> &Seed {
        &self.seed
    }

    fn name(&self) -> String {
        "cluster-monomials".into()
    }

    fn domain(&self) -> String {
        format!(
            "g-vector cones of the {} clusters within {} mutations",
            self.clusters.len(),
            self.depth
        )
    }

    fn raw(&self, g: &ExpVec) -> Result<Option<LaurentPoly>> {
        let Some((c, a)) = self.locate(g) else {
            return Ok(None);
        };
        let n = self.seed.n();
        let mut m = LaurentPoly::one(n);
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            if self.seed.is_unfrozen(i) {
                m = &m * &c.vars[i].pow(ai as u32);
            } else {
                m = m.shift(&ExpVec::unit(n, i).scale(ai));
            }
        }
        Ok(Some(m))
    }
}

fn maximal_reduced_paths(s: &Seed, depth: usize) -> Vec<Vec<usize>> {
    if depth == 0 {
        return vec![vec![]];
    }
    crate::support::reduced_paths(s, depth)
        .into_iter()
        .filter(|p| p.len() == depth)
        .collect()
}

/// The Kronecker family: z^d on the ray d·δ and cluster monomials elsewhere.
#[derive(Clone, Debug)]
pub struct KroneckerGenericFamily {
    monomials: ClusterMonomialFamily,
    z: LaurentPoly,
    delta: ExpVec,
}

impl KroneckerGenericFamily {
    pub const DEFAULT_DEPTH: usize = 12;

    pub fn new(t0: &Seed) -> Result<Self> {
        KroneckerGenericFamily::with_depth(t0, Self::DEFAULT_DEPTH)
    }

    pub fn with_depth(t0: &Seed, depth: usize) -> Result<Self> {
        let kron = Seed::skew_symmetric(&[vec![0, -2], vec![2, 0]])?;
        if t0.btilde() != kron.btilde() {
            return Err(Error::Config(
                "the Kronecker family needs the exchange matrix [[0,-2],[2,0]]".into(),
            ));
        }
        let z = LaurentPoly::from_terms(
            2,
            [
                (ExpVec(vec![1, -1]), 1),
                (ExpVec(vec![-1, -1]), 1),
                (ExpVec(vec![-1, 1]), 1),
            ],
        );
        Ok(KroneckerGenericFamily {
            monomials: ClusterMonomialFamily::new(t0, depth)?,
            z,
            delta: ExpVec(vec![1, -1]),
        })
    }

    pub fn z(&self) -> &LaurentPoly {
        &self.z
    }

    pub fn delta(&self) -> &ExpVec {
        &self.delta
    }

    /// d with g = d·δ, for d ≥ 1.
    pub fn ray_multiple(&self, g: &ExpVec) -> Option<u32> {
        (g[0] > 0 && g[0] == -g[1]).then_some(g[0] as u32)
    }
}

impl PointedFamily for KroneckerGenericFamily {
    fn seed(&self) -> &Seed {
        self.monomials.seed()
    }

    fn name(&self) -> String {
        "kronecker-generic".into()
    }

    fn domain(&self) -> String {
        "all of Z^2".into()
    }

    fn raw(&self, g: &ExpVec) -> Result<Option<LaurentPoly>> {
        if let Some(d) = self.ray_multiple(g) {
            return Ok(Some(self.z.pow(d)));
        }
        match self.monomials.raw(g)? {
            Some(m) => Ok(Some(m)),
            None => Err(Error::Config(format!(
                "degree {g} is in no enumerated g-vector cone; raise the cone depth"
            ))),
        }
    }
}

/// s_g = base(g) + Σ b_{g,g'}·base(g'), with every g' in the pair deformation factor of g.
pub struct DeformedFamily {
    base: Arc<dyn PointedFamily>,
    deformation: BTreeMap<ExpVec, BTreeMap<ExpVec, i64>>,
}

/// Deforms `base` by integer combinations inside the {t, t[−1]} deformation factors.
pub fn deformed_family(
    base: Arc<dyn PointedFamily>,
    deformation: BTreeMap<ExpVec, BTreeMap<ExpVec, i64>>,
    t: &Seed,
    coreach: &TrackedPath,
) -> Result<DeformedFamily> {
    if base.seed() != t {
        return Err(Error::Usage("family and seed differ".into()));
    }
    let cr = Coreach::new(t, coreach)?;
    for (g, terms) in &deformation {
        let factor = factor_with(&cr, g, Scope::Pair)?;
        for h in terms.keys() {
            if !factor.contains(h) {
                return Err(Error::FamilyContract {
                    degree: g.to_string(),
                    msg: format!("deformation key {h} is outside the deformation factor"),
                });
            }
        }
    }
    Ok(DeformedFamily { base, deformation })
}

impl PointedFamily for DeformedFamily {
    fn seed(&self) -> &Seed {
        self.base.seed()
    }

    fn name(&self) -> String {
        format!("deformed {}", self.base.name())
    }

    fn domain(&self) -> String {
        self.base.domain()
    }

    fn raw(&self, g: &ExpVec) -> Result<Option<LaurentPoly>> {
        let Some(mut z) = element(self.base.as_ref(), g)? else {
            return Ok(None);
        };
        if let Some(terms) = self.deformation.get(g) {
            for (h, &b) in terms {
                let s = element(self.base.as_ref(), h)?.ok_or_else(|| Error::FamilyContract {
                    degree: g.to_string(),
                    msg: format!("deformation key {h} is outside the base family's domain"),
                })?;
                z = &z + &s.scale(b);
            }
        }
        Ok(Some(z))
    }
}

/// A family at the base of `path`, re-expressed at its endpoint: the element
/// at g is the inner element at φ(g) along the reversed path.
pub struct TransportedFamily {
    inner: Arc<dyn PointedFamily>,
    back: TrackedPath,
    order: u32,
}

impl TransportedFamily {
    pub fn new(inner: Arc<dyn PointedFamily>, path: &TrackedPath, order: u32) -> Result<Self> {
        if inner.seed() != path.base() {
            return Err(Error::Usage("family and path base differ".into()));
        }
        Ok(TransportedFamily {
            inner,
            back: path.reversed()?,
            order,
        })
    }
}

impl PointedFamily for TransportedFamily {
    fn seed(&self) -> &Seed {
        self.back.base()
    }

    fn name(&self) -> String {
        format!("{} (transported)", self.inner.name())
    }

    fn domain(&self) -> String {
        format!("image of: {}", self.inner.domain())
    }

    fn raw(&self, g: &ExpVec) -> Result<Option<LaurentPoly>> {
        let h = phi(g, &self.back)?;
        let Some(z) = element(self.inner.as_ref(), &h)? else {
            return Ok(None);
        };
        // the inner element is written at the endpoint of `back`
        let series = transport(&z, &self.back, self.order)?;
        match series.to_poly() {
            Some(p) => Ok(Some(p.clone())),
            None => Err(Error::FamilyContract {
                degree: g.to_string(),
                msg: format!("{z} is not a Laurent polynomial at the target seed"),
            }),
        }
    }
}

/// `base` with some elements replaced outright; nothing is validated until access.
pub struct OverrideFamily {
    base: Arc<dyn PointedFamily>,
    overrides: BTreeMap<ExpVec, LaurentPoly>,
}

impl OverrideFamily {
    pub fn new(base: Arc<dyn PointedFamily>, overrides: BTreeMap<ExpVec, LaurentPoly>) -> Self {
        OverrideFamily { base, overrides }
    }
}

impl PointedFamily for OverrideFamily {
    fn seed(&self) -> &Seed {
        self.base.seed()
    }

    fn name(&self) -> String {
        format!("{} with {} overrides", self.base.name(), self.overrides.len())
    }

    fn domain(&self) -> String {
        self.base.domain()
    }

    fn raw(&self, g: &ExpVec) -> Result<Option<LaurentPoly>> {
        match self.overrides.get(g) {
            Some(z) => Ok(Some(z.clone())),
            None => self.base.raw(g),
        }
    }
}
