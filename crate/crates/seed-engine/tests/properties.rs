use lattice_core::{int_inverse, BigMat, ExpVec, IntMat};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seed_engine::{phi, psi_matrix, Rat, Seed, Sign, TrackedPath};

// Skew-symmetric principal part of rank r plus `frozen` random frozen rows.
fn random_seed(rng: &mut ChaCha8Rng, r: usize, frozen: usize, bound: i64) -> Option<Seed> {
    let n = r + frozen;
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..r {
        for j in i + 1..r {
            let v = rng.gen_range(-bound..=bound);
            b[i][j] = v;
            b[j][i] = -v;
        }
    }
    for f in r..n {
        for k in 0..r {
            let v = rng.gen_range(-bound..=bound);
            b[f][k] = v;
            b[k][f] = -v;
        }
    }
    Seed::from_int(&b, (0..r).collect(), vec![1; n]).ok()
}

// Skew-symmetrizable rank-2 seeds with a frozen row, weights (a, 1).
fn random_sym2(rng: &mut ChaCha8Rng) -> Option<Seed> {
    let a = rng.gen_range(1..=3i64);
    let c = rng.gen_range(-2..=2i64);
    let f0 = rng.gen_range(-2..=2i64);
    let f1 = rng.gen_range(-2..=2i64);
    // d_1 b_12 = -d_2 b_21 with d = (a, 1, a): b_12 = c, b_21 = -a c
    let l = a;
    let b = vec![
        vec![0, c, -(l / a) * f0],
        vec![-a * c, 0, -l * f1],
        vec![f0, f1, 0],
    ];
    Seed::from_int(&b, vec![0, 1], vec![a, 1, l]).ok()
}

fn random_path(rng: &mut ChaCha8Rng, s: &Seed, max_len: usize) -> TrackedPath {
    let len = rng.gen_range(0..=max_len);
    let uf = s.unfrozen().to_vec();
    let mut p = TrackedPath::new(s.clone());
    for _ in 0..len {
        let k = uf[rng.gen_range(0..uf.len())];
        p.push(k).expect("tracked mutation");
    }
    p
}

// Classical quiver-mutation form of the exchange rule, used as an oracle.
fn oracle_mutate(b: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let n = b.len();
    let mut out = b.to_vec();
    for i in 0..n {
        for j in 0..n {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else {
                b[i][j] + b[i][k].signum() * (b[i][k] * b[k][j]).max(0)
            };
        }
    }
    out
}

fn int_rows(s: &Seed) -> Vec<Vec<i64>> {
    s.rows()
        .iter()
        .map(|r| r.iter().map(|v| v.to_integer().to_i64().unwrap()).collect())
        .collect()
}

fn is_sign_coherent(c: &BigMat) -> bool {
    (0..c.ncols()).all(|j| {
        let col: Vec<BigInt> = c.column(j);
        col.iter().all(|v| !v.is_negative()) || col.iter().all(|v| !v.is_positive())
    })
}

#[test]
fn sign_coherence_on_random_rank3_paths() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 1000 {
        let Some(s) = random_seed(&mut rng, 3, 1, 2) else {
            continue;
        };
        let len = rng.gen_range(0..=12);
        let mut p = TrackedPath::new(s.clone());
        for _ in 0..len {
            let k = rng.gen_range(0..3);
            p.push(k).unwrap();
            assert!(is_sign_coherent(p.c()));
        }
        checked += 1;
    }
}

#[test]
fn mutation_matches_quiver_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let Some(s) = random_seed(&mut rng, 3, 2, 2) else {
            continue;
        };
        for k in 0..3 {
            assert_eq!(int_rows(&s.mutate(k).unwrap()), oracle_mutate(&int_rows(&s), k));
        }
    }
}

#[test]
fn ef_identities_skew_symmetrizable() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seen = 0;
    while seen < 200 {
        let Some(s) = random_sym2(&mut rng) else {
            continue;
        };
        seen += 1;
        let dprime = {
            let uf = s.unfrozen().to_vec();
            let mut m = IntMat::zeros(uf.clone(), uf.clone());
            for (q, &k) in uf.iter().enumerate() {
                m.set(q, q, s.d()[k]);
            }
            BigMat::from(&m)
        };
        for &k in s.unfrozen() {
            let mu = s.mutate(k).unwrap();
            assert_eq!(mu.mutate(k).unwrap(), s);
            for eps in [Sign::Plus, Sign::Minus] {
                let (e, f) = s.ef_matrices(k, eps).unwrap();
                assert!(e.mul(&e).is_identity());
                assert!(f.mul(&f).is_identity());
                assert_eq!(e.mul(&s.btilde_big()).mul(&f), mu.btilde_big());
                let euf = e.submatrix(s.unfrozen(), s.unfrozen());
                assert_eq!(euf.transpose().mul(&dprime).mul(&f), dprime);
            }
        }
    }
}

#[test]
fn duality_and_tropical_g_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut seen = 0;
    while seen < 200 {
        let r = rng.gen_range(2..=3);
        let Some(s) = random_seed(&mut rng, r, 1, 2) else {
            continue;
        };
        seen += 1;
        let p = random_path(&mut rng, &s, 8);
        // Gᵀ·C = Id
        assert!(p.principal_g().transpose().mul(p.c()).is_identity());
        // g-vectors are φ-images from the base: G̃^t(t') = φ_{t,t0} G̃^{t0}(t')
        let q = {
            let mut q = p.clone();
            let extra = rng.gen_range(0..=4);
            for _ in 0..extra {
                q.push(rng.gen_range(0..r)).unwrap();
            }
            q
        };
        let back = p.reversed().unwrap();
        let from_t = TrackedPath::from_steps(p.current(), &[back.steps(), q.steps()].concat())
            .unwrap();
        let via_phi: Vec<ExpVec> = q
            .g_vectors()
            .unwrap()
            .iter()
            .map(|g| phi(g, &p).unwrap())
            .collect();
        assert_eq!(from_t.g_vectors().unwrap(), via_phi);
        // ψ is unimodular and equals the G-matrix of the reversed path
        let psi = psi_matrix(&p).unwrap();
        assert!(int_inverse(&psi).is_ok());
        assert_eq!(psi, back.gext_int().unwrap());
    }
}

proptest! {
    #[test]
    fn mutation_is_involutive_and_sign_independent(
        entries in prop::collection::vec(-3i64..=3, 6),
        frozen in prop::collection::vec(-2i64..=2, 3),
        k in 0usize..3,
    ) {
        let mut b = vec![vec![0i64; 4]; 4];
        let mut it = entries.into_iter();
        for i in 0..3 {
            for j in i + 1..3 {
                let v = it.next().unwrap();
                b[i][j] = v;
                b[j][i] = -v;
            }
        }
        for (q, v) in frozen.into_iter().enumerate() {
            b[3][q] = v;
            b[q][3] = -v;
        }
        if let Ok(s) = Seed::from_int(&b, vec![0, 1, 2], vec![1; 4]) {
            prop_assert_eq!(s.mutate(k).unwrap().mutate(k).unwrap(), s.clone());
            let rows: Vec<Vec<Rat>> = s.rows();
            prop_assert_eq!(
                seed_engine::mutate_matrix_eps(&rows, k, Sign::Plus),
                seed_engine::mutate_matrix_eps(&rows, k, Sign::Minus)
            );
        }
    }

    #[test]
    fn tropical_transform_is_involutive(
        g in prop::collection::vec(-5i64..=5, 3),
        c in -3i64..=3,
        f in prop::collection::vec(-2i64..=2, 2),
        k in 0usize..2,
    ) {
        let b = vec![vec![0, c, -f[0]], vec![-c, 0, -f[1]], vec![f[0], f[1], 0]];
        if let Ok(s) = Seed::from_int(&b, vec![0, 1], vec![1; 3]) {
            let g = ExpVec(g);
            let h = s.tropical_transform(&g, k).unwrap();
            let mu = s.mutate(k).unwrap();
            prop_assert_eq!(mu.tropical_transform(&h, k).unwrap(), g);
        }
    }
}
