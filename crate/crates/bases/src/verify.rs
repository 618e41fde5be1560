use lattice_core::{ExpVec, Result};
use laurent_ring::{bidegree_of, is_pointed, LaurentPoly};
use rayon::prelude::*;
use seed_engine::{Seed, TrackedPath};
use serde::Serialize;

use crate::family::{element, ClusterMonomialFamily, PointedFamily};
use crate::support::{is_compatibly_pointed, reduced_paths, Coreach, Tri};

/// Tuning for `verify_basis_candidate`.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// y-order for transports that turn out not to be Laurent.
    pub order: u32,
    /// Reduced paths from t up to this length make up the Δ⁺ check.
    pub delta_depth: usize,
    /// Depth of the cluster enumeration for the cluster-monomial check.
    pub cluster_depth: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            order: 8,
            delta_depth: 3,
            cluster_depth: 6,
        }
    }
}

/// Checks at one degree of the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRecord {
    pub degree: Vec<i64>,
    pub present: bool,
    pub pointed: bool,
    pub bipointed: bool,
    pub supp_dim: Option<Vec<i64>>,
    pub expected_supp_dim: Vec<i64>,
    /// Compatibly pointed at t[−1].
    pub pair_compatible: Tri,
    /// Compatibly pointed at the seeds of the Δ⁺ sample.
    pub delta_compatible: Tri,
    /// `None` when the degree is not a sampled cluster-monomial degree.
    pub cluster_monomial: Option<bool>,
    pub error: Option<String>,
    pub pass: bool,
    pub delta_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub family: String,
    pub window: (i64, i64),
    pub records: Vec<DegreeRecord>,
}

impl VerifyReport {
    pub fn failures(&self) -> Vec<&DegreeRecord> {
        self.records.iter().filter(|r| !r.pass).collect()
    }

    pub fn delta_failures(&self) -> Vec<&DegreeRecord> {
        self.records.iter().filter(|r| !r.delta_pass).collect()
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
}

/// Every integer point of the box [lo, hi]^n, in lexicographic order.
pub fn window_points(n: usize, lo: i64, hi: i64) -> Vec<ExpVec> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (lo..=hi).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(ExpVec).collect()
}

/// Checks bipointedness, support dimensions, compatibility at t[−1] and on a
/// Δ⁺ sample, and agreement with cluster monomials on the window [lo, hi]^n.
pub fn verify_basis_candidate(
    fam: &dyn PointedFamily,
    window: (i64, i64),
    t: &Seed,
    coreach: &TrackedPath,
    opts: VerifyOptions,
) -> Result<VerifyReport> {
    let cr = Coreach::new(t, coreach)?;
    let monomials = ClusterMonomialFamily::new(t, opts.cluster_depth)?;
    let mut delta_paths = vec![cr.back().clone()];
    for steps in reduced_paths(t, opts.delta_depth) {
        delta_paths.push(TrackedPath::from_steps(t, &steps)?);
    }
    let pair_paths = [cr.back().clone()];
    let records = window_points(t.n(), window.0, window.1)
        .par_iter()
        .map(|g| check_degree(fam, g, &cr, &monomials, &pair_paths, &delta_paths, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        family: fam.name(),
        window,
        records,
    })
}

fn check_degree(
    fam: &dyn PointedFamily,
    g: &ExpVec,
    cr: &Coreach,
    monomials: &ClusterMonomialFamily,
    pair_paths: &[TrackedPath],
    delta_paths: &[TrackedPath],
    opts: VerifyOptions,
) -> Result<DegreeRecord> {
    let t = cr.t();
    let expected = cr.support_dimension(g)?;
    let mut rec = DegreeRecord {
        degree: g.0.clone(),
        present: false,
        pointed: false,
        bipointed: false,
        supp_dim: None,
        expected_supp_dim: expected.0.clone(),
        pair_compatible: Tri::Unknown,
        delta_compatible: Tri::Unknown,
        cluster_monomial: None,
        error: None,
        pass: false,
        delta_pass: false,
    };
    let z: LaurentPoly = match fam.raw(g) {
        Ok(Some(z)) => z,
        Ok(None) => {
            rec.error = Some("degree outside the family's domain".into());
            return Ok(rec);
        }
        Err(e) => {
            rec.error = Some(e.to_string());
            return Ok(rec);
        }
    };
    rec.present = true;
    rec.pointed = is_pointed(&z, t) && element(fam, g).is_ok();
    if !rec.pointed {
        rec.error = Some(format!("{z} is not pointed at {g}"));
        return Ok(rec);
    }
    let bideg = bidegree_of(&z, t);
    rec.bipointed = bideg.is_some();
    rec.supp_dim = bideg.map(|b| b.supp_dim.0);
    rec.pair_compatible = is_compatibly_pointed(&z, pair_paths, opts.order)?;
    rec.delta_compatible = is_compatibly_pointed(&z, delta_paths, opts.order)?;
    if let Some(m) = monomials.raw(g)? {
        rec.cluster_monomial = Some(m == z);
    }
    rec.pass = rec.bipointed
        && rec.supp_dim.as_ref() == Some(&rec.expected_supp_dim)
        && rec.pair_compatible != Tri::False
        && rec.cluster_monomial != Some(false);
    rec.delta_pass = rec.pass && rec.delta_compatible != Tri::False;
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_enumeration() {
        let w = window_points(2, -1, 1);
        assert_eq!(w.len(), 9);
        assert_eq!(w[0], ExpVec(vec![-1, -1]));
        assert_eq!(w[8], ExpVec(vec![1, 1]));
    }
}
