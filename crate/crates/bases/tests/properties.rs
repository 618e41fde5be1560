use std::collections::BTreeMap;
use std::sync::Arc;

use bases::{
    bidegree_interval, decomposition_seed_independence, deformation_factor, deformed_family,
    dominance_decompose, element, reconstruct, ClusterMonomialFamily, Coreach,
    KroneckerGenericFamily, PointedFamily, Scope,
};
use lattice_core::ExpVec;
use laurent_ring::{bidegree_of, cluster_variables_along, maximal_degrees, LaurentPoly};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seed_engine::{find_coreachable, Seed, TrackedPath};

fn kron() -> Seed {
    Seed::skew_symmetric(&[vec![0, -2], vec![2, 0]]).unwrap()
}

fn a2() -> Seed {
    Seed::skew_symmetric(&[vec![0, -1], vec![1, 0]]).unwrap()
}

fn e(a: i64, b: i64) -> ExpVec {
    ExpVec(vec![a, b])
}

fn box2(r: i64) -> Vec<ExpVec> {
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            out.push(e(a, b));
        }
    }
    out
}

fn is_strict_subset(a: &[ExpVec], b: &[ExpVec]) -> bool {
    a.len() < b.len() && a.iter().all(|x| b.contains(x))
}

#[test]
fn deformation_factor_is_interval_inclusion() {
    for t in [kron(), a2()] {
        let p = find_coreachable(&t, 6).unwrap().unwrap();
        for g in box2(3) {
            let ig = bidegree_interval(&g, &t, &p).unwrap();
            let factor = deformation_factor(&g, &t, &p, Scope::Pair).unwrap();
            let mut candidates = ig.clone();
            candidates.extend(box2(1).into_iter().map(|h| &g + &h));
            for h in candidates {
                let ih = bidegree_interval(&h, &t, &p).unwrap();
                assert_eq!(factor.contains(&h), is_strict_subset(&ih, &ig), "g={g} h={h}");
            }
        }
    }
}

#[test]
fn kronecker_factor_sizes_against_oracle() {
    let t = kron();
    let p = find_coreachable(&t, 4).unwrap().unwrap();
    for d in 1..=8i64 {
        let f = deformation_factor(&e(d, -d), &t, &p, Scope::default()).unwrap();
        let want: Vec<ExpVec> = (1..=d / 2).rev().map(|k| e(d - 2 * k, 2 * k - d)).collect();
        assert_eq!(f, want, "d={d}");
    }
}

#[test]
fn deformed_elements_have_forced_bidegrees() {
    let t = kron();
    let p = find_coreachable(&t, 4).unwrap().unwrap();
    let cr = Coreach::new(&t, &p).unwrap();
    let base: Arc<dyn PointedFamily> = Arc::new(KroneckerGenericFamily::new(&t).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let window = box2(4);
    let mut deformed_count = 0;
    for _ in 0..100 {
        let g = window.choose(&mut rng).unwrap().clone();
        let factor = deformation_factor(&g, &t, &p, Scope::Pair).unwrap();
        let mut terms = BTreeMap::new();
        for h in &factor {
            if rng.gen_bool(0.6) {
                terms.insert(h.clone(), rng.gen_range(-3..=3));
            }
        }
        deformed_count += usize::from(terms.values().any(|&c| c != 0));
        let fam = deformed_family(base.clone(), BTreeMap::from([(g.clone(), terms)]), &t, &p).unwrap();
        let s = element(&fam, &g).unwrap().unwrap();
        let b = bidegree_of(&s, &t).expect("bipointed");
        assert_eq!(b.deg, g);
        assert_eq!(b.codeg, cr.codegree_of(&g).unwrap());
    }
    assert!(deformed_count > 30);
}

fn random_combination(
    rng: &mut ChaCha8Rng,
    fam: &dyn PointedFamily,
    window: &[ExpVec],
) -> (BTreeMap<ExpVec, i64>, LaurentPoly) {
    let n = fam.seed().n();
    let mut coeffs = BTreeMap::new();
    let mut z = LaurentPoly::zero(n);
    for _ in 0..rng.gen_range(1..=4) {
        let g = window.choose(rng).unwrap().clone();
        let c = [-2, -1, 1, 2, 3].choose(rng).copied().unwrap();
        *coeffs.entry(g.clone()).or_insert(0) += c;
        z = &z + &element(fam, &g).unwrap().unwrap().scale(c);
    }
    coeffs.retain(|_, c| *c != 0);
    (coeffs, z)
}

#[test]
fn decompositions_reconstruct_and_are_unitriangular() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let fams: Vec<Box<dyn PointedFamily>> = vec![
        Box::new(ClusterMonomialFamily::new(&a2(), 6).unwrap()),
        Box::new(KroneckerGenericFamily::new(&kron()).unwrap()),
    ];
    let window = box2(3);
    for fam in &fams {
        let s = fam.seed();
        for _ in 0..60 {
            let (coeffs, z) = random_combination(&mut rng, fam.as_ref(), &window);
            // the interval bound: no more rounds than support points
            let bound = z.len().max(1) * 4;
            let r = dominance_decompose(&z, fam.as_ref(), bound).unwrap();
            assert!(r.is_complete(), "did not terminate within {bound} rounds: {z}");
            assert_eq!(reconstruct(&r, fam.as_ref()).unwrap(), z);
            assert_eq!(r.coefficients, coeffs);
            let maxes = maximal_degrees(&z, s);
            for m in &maxes {
                assert_eq!(r.coefficients.get(m).copied(), Some(z.coeff(m)));
            }
            for g in r.coefficients.keys() {
                assert!(maxes.iter().any(|m| s.dominance().dominated(g, m)));
            }
        }
    }
}

fn cluster_variables(s: &Seed, depth: usize) -> Vec<LaurentPoly> {
    let mut out: Vec<LaurentPoly> = Vec::new();
    for start in 0..2 {
        let steps: Vec<usize> = (0..depth).map(|i| (start + i) % 2).collect();
        let p = TrackedPath::from_steps(s, &steps).unwrap();
        for c in cluster_variables_along(&p).unwrap() {
            for x in c {
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
    }
    out
}

#[test]
fn decomposition_is_seed_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let cases: Vec<(Seed, Arc<dyn PointedFamily>)> = vec![
        (a2(), Arc::new(ClusterMonomialFamily::new(&a2(), 6).unwrap())),
        (kron(), Arc::new(KroneckerGenericFamily::new(&kron()).unwrap())),
    ];
    for (s, fam) in cases {
        let vars = cluster_variables(&s, 3);
        for _ in 0..10 {
            let mut z = LaurentPoly::one(2);
            for _ in 0..rng.gen_range(1..=3) {
                z = &z * vars.choose(&mut rng).unwrap();
            }
            for k in 0..2 {
                let p = TrackedPath::from_steps(&s, &[k]).unwrap();
                assert!(
                    decomposition_seed_independence(&z, fam.clone(), &p, 8, 200).unwrap(),
                    "{z} across [{}]",
                    k + 1
                );
            }
        }
    }
}
