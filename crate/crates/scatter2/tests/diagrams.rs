use lattice_core::{Error, ExpVec};
use laurent_ring::{cluster_variables_along, LaurentPoly, TruncatedSeries};
use scatter2::{
    cluster_chambers, incoming_diagram, kappa, opposite_diagram, theta, Direction,
    ScatterDiagram2, C_MINUS, C_PLUS,
};
use seed_engine::{phi, Seed, TrackedPath};

fn a2() -> Seed {
    Seed::skew_symmetric(&[vec![0, -1], vec![1, 0]]).unwrap()
}

fn kron() -> Seed {
    Seed::skew_symmetric(&[vec![0, -2], vec![2, 0]]).unwrap()
}

fn completed(s: &Seed, order: u32) -> ScatterDiagram2 {
    incoming_diagram(s, order).unwrap().complete().unwrap()
}

fn poly(s: &str) -> LaurentPoly {
    LaurentPoly::parse(s, 2).unwrap()
}

fn mono(s: &Seed, m: [i64; 2], order: u32) -> TruncatedSeries {
    TruncatedSeries::monomial(s, ExpVec(m.to_vec()), order)
}

#[test]
fn incoming_walls() {
    let d = incoming_diagram(&a2(), 1).unwrap();
    assert_eq!(d.walls.len(), 4);
    for w in &d.walls {
        assert_eq!(w.logfn.len(), 1);
        assert_eq!(w.f, vec![1, 1]);
        assert_eq!(w.ray[0] * w.normal[0] + w.ray[1] * w.normal[1], 0);
    }
    assert!(incoming_diagram(&Seed::from_int(&[vec![0, -1], vec![2, 0]], vec![0, 1], vec![2, 1]).unwrap(), 3).is_err());
}

#[test]
fn a2_completion() {
    assert_eq!(completed(&a2(), 1).walls.len(), 4);
    for order in 2..=6 {
        let d = completed(&a2(), order);
        let extra: Vec<_> = d.walls.iter().filter(|w| w.normal == [1, 1]).collect();
        assert_eq!(d.walls.len(), 5);
        assert_eq!(extra.len(), 1);
        assert_eq!(extra[0].ray, [1, -1]);
        assert_eq!(extra[0].f_in_y(), poly("x1*x2 + 1"));
        assert!(d.is_consistent().unwrap());
    }
}

#[test]
fn a2_wall_crossing_values() {
    let s = a2();
    let d = completed(&s, 4);
    let op = d.path_product(C_PLUS, C_MINUS, Direction::Ccw).unwrap();
    let x1 = d.apply(&op, &mono(&s, [1, 0], 4)).unwrap();
    let x2 = d.apply(&op, &mono(&s, [0, 1], 4)).unwrap();
    assert_eq!(x1.to_poly().unwrap(), &(&poly("x1") * &poly("1 + x2 + x1^-1*x2")));
    assert_eq!(x2.to_poly().unwrap(), &(&poly("x2") * &poly("1 + x1^-1")));
    assert_eq!(x1.poly().to_string(), "x1*x2 + x1 + x2");
    // the clockwise arc agrees inside the truncation
    let cw = d.path_product(C_PLUS, C_MINUS, Direction::Cw).unwrap();
    assert_eq!(d.apply(&cw, &mono(&s, [1, 0], 4)).unwrap().poly(), x1.poly());
    let back = d.path_product(C_MINUS, C_PLUS, Direction::Ccw).unwrap();
    let r = d.apply(&back, &mono(&s, [-1, 0], 4)).unwrap();
    assert_eq!(r.poly(), &poly("x1^-1 + x1^-1*x2"));
    assert!(d.path_product(C_PLUS, [2, 3], Direction::Ccw).unwrap().is_identity());
    assert!(d.path_product([1, 0], C_PLUS, Direction::Ccw).is_err());
}

#[test]
fn crossing_single_walls() {
    let s = a2();
    let d = incoming_diagram(&s, 5).unwrap();
    let w = d.walls.iter().find(|w| w.ray == [0, 1]).unwrap();
    let z = mono(&s, [1, 0], 5);
    assert_eq!(d.cross(w, 1, &z).unwrap().poly(), &poly("x1 + x1*x2"));
    let fixed = mono(&s, [0, 3], 5);
    assert_eq!(d.cross(w, 1, &fixed).unwrap().poly(), fixed.poly());
    // x1·(1+x2)^{-1}, truncated
    let inv = d.cross(w, -1, &z).unwrap();
    assert!(inv.frontier_touched());
    let f = poly("1 + x2");
    let prod = &(inv.poly() * &f) - &poly("x1");
    assert!(prod.terms().all(|(e, _)| e[1] > 5));
    let big = mono(&s, [1, 0], 6);
    assert!(matches!(d.cross(w, 1, &big), Err(Error::Usage(_))));
}

#[test]
fn kronecker_completion() {
    let d = completed(&kron(), 6);
    assert!(d.is_consistent().unwrap());
    let rays: Vec<[i64; 2]> = d.walls.iter().filter(|w| !w.exact).map(|w| w.ray).collect();
    assert_eq!(rays, vec![[1, -2], [2, -3], [1, -1], [3, -2], [2, -1]]);
    for w in d.walls.iter().filter(|w| !w.exact) {
        // every outgoing ray lies in the fourth quadrant, toward (1,-1)
        assert!(w.ray[0] > 0 && w.ray[1] < 0);
    }
    let delta = d.walls.iter().find(|w| w.ray == [1, -1]).unwrap();
    assert_eq!(delta.f, vec![1, 2, 3, 4]);
    let dump = d.dump();
    assert!(dump.starts_with("# scatter order=6 walls=9\n"));
    assert_eq!(dump.lines().count(), 10);
}

#[test]
fn loop_image_of_incomplete_diagram_is_not_identity() {
    let d = incoming_diagram(&a2(), 3).unwrap();
    assert!(!d.is_consistent().unwrap());
}

#[test]
fn inverse_paths() {
    for s in [a2(), kron()] {
        let d = completed(&s, 6);
        for (from, to) in [(C_PLUS, C_MINUS), ([-1, 3], [3, -4]), ([2, 1], [-3, -1])] {
            for dir in [Direction::Ccw, Direction::Cw] {
                let op = d.path_product(from, to, dir).unwrap();
                for m in [[1, 0], [0, 1], [-1, 0], [0, -1], [1, 1]] {
                    let z = mono(&s, m, 6);
                    let there = d.apply(&op, &z).unwrap();
                    let back = d.apply(&op.inverse(), &there).unwrap();
                    assert_eq!(back.poly(), z.poly());
                }
            }
        }
    }
}

#[test]
fn opposite_diagrams() {
    let d = completed(&a2(), 4);
    let op = opposite_diagram(&d);
    assert!(op.walls.iter().any(|w| w.ray == [-1, 1] && w.normal == [1, 1]));
    assert_eq!(opposite_diagram(&op), d);
    // the opposite of the completion is the completion of the opposite seed
    for s in [a2(), kron()] {
        let d = completed(&s, 6);
        let mut a = opposite_diagram(&d).walls;
        let mut b = completed(&s.opposite(), 6).walls;
        for w in a.iter_mut().chain(b.iter_mut()) {
            w.logfn.sort();
        }
        assert_eq!(a, b);
    }
}

#[test]
fn opposite_wall_crossing() {
    for s in [a2(), kron()] {
        let d = completed(&s, 6);
        let op = opposite_diagram(&d);
        for (from, to) in [(C_PLUS, C_MINUS), ([1, 3], [3, -5]), ([-2, 1], [1, 2])] {
            let g = d.path_product(from, to, Direction::Ccw).unwrap();
            let kg = op
                .path_product([-from[0], -from[1]], [-to[0], -to[1]], Direction::Ccw)
                .unwrap();
            for m in [[1, 0], [0, 1], [-1, 0], [0, -1], [1, 1]] {
                let z = mono(&s, m, 6);
                let lhs = op.apply(&kg, &kappa(&z)).unwrap();
                let rhs = kappa(&d.apply(&g, &z).unwrap());
                assert_eq!(lhs.poly(), rhs.poly(), "m = {m:?}");
            }
        }
    }
    let s = a2();
    let d = completed(&s, 4);
    let op = opposite_diagram(&d);
    let kg = op.path_product(C_MINUS, C_PLUS, Direction::Ccw).unwrap();
    let r = op.apply(&kg, &mono(&s.opposite(), [-1, 0], 4)).unwrap();
    // x1^-1·(1 + x^{-v1} + x^{-v1-v2}) with v1 = (0,1), v2 = (-1,0)
    assert_eq!(r.poly(), &(&poly("x1^-1") * &poly("1 + x2^-1 + x1*x2^-1")));
}

fn all_cluster_variables(s: &Seed, depth: usize) -> Vec<LaurentPoly> {
    let mut out = Vec::new();
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
fn theta_matches_cluster_variables() {
    let s = a2();
    let d = completed(&s, 6);
    let vars = all_cluster_variables(&s, 5);
    assert_eq!(vars.len(), 5);
    for x in &vars {
        let g = laurent_ring::degree(x, &s).unwrap();
        let th = theta(&d, &g, C_PLUS).unwrap();
        assert_eq!(th.poly(), x, "g = {g}");
    }
    assert_eq!(theta(&d, &ExpVec(vec![1, 0]), C_PLUS).unwrap().poly(), &poly("x1"));
    assert_eq!(theta(&d, &ExpVec(vec![-1, 0]), C_PLUS).unwrap().poly(), &poly("x1^-1 + x1^-1*x2"));
}

#[test]
fn kronecker_theta_in_chambers() {
    let s = kron();
    let d = completed(&s, 6);
    for x in all_cluster_variables(&s, 6) {
        let g = laurent_ring::degree(&x, &s).unwrap();
        let th = theta(&d, &g, C_PLUS).unwrap();
        // exact below the cap
        let cap = *th.cap();
        let dom = s.dominance();
        let want = LaurentPoly::from_terms(2, x.terms().filter(|(e, _)| dom.level(e) <= cap).map(|(e, c)| (e.clone(), c)));
        assert_eq!(th.poly(), &want, "g = {g}");
    }
    assert!(matches!(theta(&d, &ExpVec(vec![2, -2]), C_PLUS), Err(Error::UnsupportedRegion(_))));
    assert!(cluster_chambers(&d, 6).unwrap().len() >= 12);
}

#[test]
fn theta_degrees_follow_phi() {
    // transported between chambers, θ keeps its degree under φ
    let s = a2();
    for steps in [vec![0], vec![1], vec![0, 1], vec![1, 0]] {
        let p = TrackedPath::from_steps(&s, &steps).unwrap();
        let t = p.current().clone();
        let dt = completed(&t, 6);
        let d0 = completed(&s, 6);
        for x in all_cluster_variables(&t, 5) {
            let g = laurent_ring::degree(&x, &t).unwrap();
            let th_t = theta(&dt, &g, C_PLUS).unwrap();
            let back = phi(&g, &p.reversed().unwrap()).unwrap();
            let th_0 = theta(&d0, &back, C_PLUS).unwrap();
            let moved = laurent_ring::transport(th_t.poly(), &p, 6).unwrap();
            assert_eq!(moved.to_poly(), Some(th_0.poly()));
        }
    }
}

#[test]
fn wild_seeds_report_unsupported_regions() {
    let s = Seed::skew_symmetric(&[vec![0, -3], vec![3, 0]]).unwrap();
    let d = completed(&s, 3);
    assert!(matches!(theta(&d, &ExpVec(vec![1, -1]), C_PLUS), Err(Error::UnsupportedRegion(_))));
    assert!(theta(&d, &ExpVec(vec![1, 0]), C_PLUS).is_ok());
}
