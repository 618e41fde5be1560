use std::collections::BTreeMap;
use std::sync::Arc;

use lattice_core::{Error, ExpVec, Result};
use laurent_ring::{maximal_degrees, transport, LaurentPoly};
use seed_engine::{phi, TrackedPath};

use crate::family::{element, PointedFamily, TransportedFamily};

/// Outcome of peeling an element against a pointed family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompResult {
    pub coefficients: BTreeMap<ExpVec, i64>,
    /// Zero exactly when the decomposition finished.
    pub residual: LaurentPoly,
    pub iterations: usize,
    /// A maximal degree of the residual the family does not cover.
    pub domain_gap: Option<ExpVec>,
}

impl DecompResult {
    pub fn is_complete(&self) -> bool {
        self.residual.is_zero()
    }
}

/// The dominance-order decomposition z = Σ α(g)·s_g, built by repeatedly
/// subtracting c·s_g at a maximal degree g of the residual.
pub fn dominance_decompose(
    z: &LaurentPoly,
    fam: &dyn PointedFamily,
    max_iter: usize,
) -> Result<DecompResult> {
    if max_iter == 0 {
        return Err(Error::Usage("max_iter must be at least 1".into()));
    }
    let s = fam.seed();
    let mut residual = z.clone();
    let mut coefficients = BTreeMap::new();
    let mut iterations = 0;
    while !residual.is_zero() && iterations < max_iter {
        iterations += 1;
        for g in maximal_degrees(&residual, s) {
            let c = residual.coeff(&g);
            if c == 0 {
                continue;
            }
            let Some(sg) = element(fam, &g)? else {
                return Ok(DecompResult {
                    coefficients,
                    residual,
                    iterations,
                    domain_gap: Some(g),
                });
            };
            *coefficients.entry(g).or_insert(0) += c;
            residual = &residual - &sg.scale(c);
        }
    }
    coefficients.retain(|_, c| *c != 0);
    Ok(DecompResult {
        coefficients,
        residual,
        iterations,
        domain_gap: None,
    })
}

/// Σ α(g)·fam(g) + residual.
pub fn reconstruct(r: &DecompResult, fam: &dyn PointedFamily) -> Result<LaurentPoly> {
    let mut out = r.residual.clone();
    for (g, &c) in &r.coefficients {
        let sg = element(fam, g)?.ok_or_else(|| Error::FamilyContract {
            degree: g.to_string(),
            msg: "coefficient at a degree outside the family".into(),
        })?;
        out = &out + &sg.scale(c);
    }
    Ok(out)
}

/// Decomposes `z` at the base of `p` and its expansion at the endpoint against
/// the transported family, and compares the coefficient maps under φ.
pub fn decomposition_seed_independence(
    z: &LaurentPoly,
    fam: Arc<dyn PointedFamily>,
    p: &TrackedPath,
    order: u32,
    max_iter: usize,
) -> Result<bool> {
    let here = dominance_decompose(z, fam.as_ref(), max_iter)?;
    let series = transport(z, &p.reversed()?, order)?;
    let moved = series.to_poly().ok_or_else(|| {
        Error::InvariantViolation(format!("{z} is not Laurent at the endpoint seed"))
    })?;
    let there_fam = TransportedFamily::new(fam, p, order)?;
    let there = dominance_decompose(moved, &there_fam, max_iter)?;
    if !here.is_complete() || !there.is_complete() {
        return Ok(false);
    }
    let mapped = here
        .coefficients
        .iter()
        .map(|(g, &c)| Ok((phi(g, p)?, c)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(mapped == there.coefficients)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{ClusterMonomialFamily, KroneckerGenericFamily};
    use seed_engine::Seed;

    fn kron() -> Seed {
        Seed::skew_symmetric(&[vec![0, -2], vec![2, 0]]).unwrap()
    }

    fn a2() -> Seed {
        Seed::skew_symmetric(&[vec![0, -1], vec![1, 0]]).unwrap()
    }

    fn e(v: [i64; 2]) -> ExpVec {
        ExpVec(v.to_vec())
    }

    #[test]
    fn a2_exchange_product() {
        let f = ClusterMonomialFamily::new(&a2(), 6).unwrap();
        let z = LaurentPoly::parse("1 + x2", 2).unwrap();
        let r = dominance_decompose(&z, &f, 10).unwrap();
        assert!(r.is_complete());
        assert_eq!(r.coefficients, BTreeMap::from([(e([0, 0]), 1), (e([0, 1]), 1)]));
        assert_eq!(reconstruct(&r, &f).unwrap(), z);
    }

    #[test]
    fn family_elements_decompose_to_themselves() {
        let f = KroneckerGenericFamily::new(&kron()).unwrap();
        for g in [e([2, -2]), e([-2, 1]), e([1, 1])] {
            let z = f.raw(&g).unwrap().unwrap();
            let r = dominance_decompose(&z, &f, 5).unwrap();
            assert_eq!(r.coefficients, BTreeMap::from([(g, 1)]));
        }
    }

    #[test]
    fn domain_gaps_stop_the_peeling() {
        let f = ClusterMonomialFamily::new(&kron(), 4).unwrap();
        let z = LaurentPoly::parse("x1*x2^-1 + x1^-1*x2^-1 + x1^-1*x2", 2).unwrap();
        let r = dominance_decompose(&z, &f, 5).unwrap();
        assert_eq!(r.domain_gap, Some(e([1, -1])));
        assert_eq!(r.residual, z);
    }

    #[test]
    fn seed_independence_examples() {
        let fam: Arc<dyn PointedFamily> = Arc::new(ClusterMonomialFamily::new(&a2(), 6).unwrap());
        let z = LaurentPoly::parse("1 + x2", 2).unwrap();
        let p = TrackedPath::from_steps(&a2(), &[0]).unwrap();
        assert!(decomposition_seed_independence(&z, fam, &p, 6, 20).unwrap());
        let fam: Arc<dyn PointedFamily> = Arc::new(KroneckerGenericFamily::new(&kron()).unwrap());
        let z = LaurentPoly::parse("x1^2*x2^-1 + x2^-1 + x2", 2).unwrap();
        let p = TrackedPath::from_steps(&kron(), &[1]).unwrap();
        assert!(decomposition_seed_independence(&z, fam, &p, 6, 20).unwrap());
    }
}
