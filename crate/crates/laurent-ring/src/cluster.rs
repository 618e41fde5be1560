use lattice_core::{Error, ExpVec, Result, UfVec};
use seed_engine::{psi_matrix, Seed, TrackedPath};

use crate::order::{codegree, maximal_in};
use crate::poly::LaurentPoly;
use crate::series::{budget, DegreeCert, TruncatedSeries, YSeries};

/// The monomial y_k = x^{B̃ e_k}.
pub fn y_variable(s: &Seed, k: usize) -> Result<LaurentPoly> {
    Ok(LaurentPoly::monomial(s.y_exponent(k)?, 1))
}

/// The cluster at every seed along `p`, expressed in the base seed's variables.
///
/// Entry `s` is the cluster after `s` steps; frozen variables never change.
pub fn cluster_variables_along(p: &TrackedPath) -> Result<Vec<Vec<LaurentPoly>>> {
    let n = p.base().n();
    let mut cluster: Vec<LaurentPoly> = (0..n).map(|i| LaurentPoly::var(n, i)).collect();
    let mut out = vec![cluster.clone()];
    for (step, &k) in p.steps().iter().enumerate() {
        let s = &p.seeds()[step];
        let mut plus = LaurentPoly::one(n);
        let mut minus = LaurentPoly::one(n);
        for j in 0..n {
            let b = s.try_bint(j, k)?;
            if b > 0 {
                plus = &plus * &cluster[j].pow(b as u32);
            } else if b < 0 {
                minus = &minus * &cluster[j].pow((-b) as u32);
            }
        }
        let new = (&plus + &minus).div_exact(&cluster[k]).map_err(|e| {
            Error::InvariantViolation(format!(
                "exchange relation at step {} (vertex {}) is not Laurent: {e}",
                step + 1,
                k + 1
            ))
        })?;
        cluster[k] = new;
        out.push(cluster.clone());
    }
    Ok(out)
}

// z in the variables of μ_k(s), rewritten in those of s, if that is Laurent.
fn pull_back_step(z: &LaurentPoly, s: &Seed, k: usize) -> Result<Option<LaurentPoly>> {
    let n = s.n();
    let mut plus = vec![0i64; n];
    let mut minus = vec![0i64; n];
    for j in 0..n {
        let b = s.try_bint(j, k)?;
        if b > 0 {
            plus[j] = b;
        } else {
            minus[j] = -b;
        }
    }
    let binom = LaurentPoly::from_terms(n, [(ExpVec(plus), 1), (ExpVec(minus), 1)]);
    // x'^m·binom^a = x^{m - 2m_k e_k}·binom^{m_k + a}
    let a = z.terms().map(|(m, _)| (-m[k]).max(0)).max().unwrap_or(0);
    let mut powers = vec![LaurentPoly::one(n)];
    let mut num = LaurentPoly::zero(n);
    for (m, c) in z.terms() {
        let e = (m[k] + a) as usize;
        while powers.len() <= e {
            let next = powers.last().unwrap() * &binom;
            powers.push(next);
        }
        let mut shifted = m.clone();
        shifted.0[k] = -m[k];
        num = &num + &powers[e].shift(&shifted).scale(c);
    }
    for _ in 0..a {
        match num.div_exact(&binom) {
            Ok(q) => num = q,
            Err(_) => return Ok(None),
        }
    }
    Ok(Some(num))
}

// z in the endpoint variables of `p`, rewritten step by step in the base variables.
fn pull_back(z: &LaurentPoly, p: &TrackedPath) -> Result<Option<LaurentPoly>> {
    let mut cur = z.clone();
    for (s, &k) in p.seeds().iter().zip(p.steps()).rev() {
        match pull_back_step(&cur, s, k)? {
            Some(q) => cur = q,
            None => return Ok(None),
        }
    }
    Ok(Some(cur))
}

// x^{g_i}·F_i(y) for each variable of the endpoint cluster.
fn f_series(p: &TrackedPath, cluster: &[LaurentPoly], order: u32) -> Result<Vec<YSeries>> {
    let base = p.base();
    let dom = base.dominance();
    let g = p.g_vectors()?;
    let r = base.rank();
    cluster
        .iter()
        .zip(&g)
        .map(|(x, gi)| {
            let mut terms = Vec::new();
            for (e, c) in x.terms() {
                let n = dom.solve(e, gi).ok_or_else(|| {
                    Error::InvariantViolation(format!("{x} is not pointed at its g-vector {gi}"))
                })?;
                terms.push((n, c));
            }
            Ok(YSeries::from_terms(r, order, terms))
        })
        .collect()
}

/// Expands `z`, written in the endpoint variables of `p`, in the base seed's
/// variables to y-order `order` (the ι expansion into the positive completion).
///
/// The exchange relations are first undone one step at a time with exact
/// division; if some step is not Laurent, each monomial is expanded as
/// x^{G̃m}·∏F_i^{m_i} with the F-series inverted as needed.
pub fn transport(z: &LaurentPoly, p: &TrackedPath, order: u32) -> Result<TruncatedSeries> {
    let base = p.base();
    let n = base.n();
    if z.nvars() != n {
        return Err(Error::Usage(format!("expected a polynomial in {n} variables")));
    }
    if let Some(q) = pull_back(z, p)? {
        // exact, so the true maximal degrees are the tightest anchors
        // and the order is widened so nothing of the exact result is cut
        let dom = base.dominance();
        let tight = maximal_in(dom, q.support());
        let low = tight.iter().map(|a| dom.level(a)).min();
        let need = q
            .terms()
            .filter_map(|(e, _)| low.map(|l| (dom.level(e) - l).ceil().to_integer()))
            .max()
            .unwrap_or(0);
        let order = order.max(need as u32);
        return Ok(TruncatedSeries::new(base, q, tight, order, false));
    }

    let gext = p.gext_int()?;
    let anchors: Vec<ExpVec> = z
        .terms()
        .map(|(m, _)| ExpVec(gext.mul_vec(&m.0)))
        .collect();
    let cluster = cluster_variables_along(p)?.pop().unwrap();
    let dom = base.dominance();
    let bt = base.btilde();
    let probe = TruncatedSeries::new(base, LaurentPoly::zero(n), anchors.clone(), order, false);
    let cap = *probe.cap();
    let fs = f_series(p, &cluster, order)?;
    let mut total = LaurentPoly::zero(n);
    let mut touched = false;
    for ((m, c), anchor) in z.terms().zip(&anchors) {
        let room = budget(dom, &cap, anchor);
        if room < 0 {
            touched = true;
            continue;
        }
        let room = room as u32;
        let mut piece = YSeries::one(base.rank(), room);
        for i in 0..n {
            if m[i] == 0 || fs[i].is_one() {
                continue;
            }
            if m[i] < 0 || fs[i].top_degree() * m[i] as u32 > room {
                touched = true;
            }
            let f = YSeries::from_terms(base.rank(), room, fs[i].terms().map(|(k, v)| (k.clone(), v)));
            piece = piece.mul(&f.pow(m[i]));
        }
        for (nv, v) in piece.terms() {
            let e = anchor + &ExpVec(bt.mul_vec(&nv.0));
            total.add_term(e, c * v);
        }
    }
    Ok(TruncatedSeries::new(base, total, anchors, order, touched))
}

/// Checks deg^{t[−1]}(z) = ψ_{t[−1],t}(codeg^t z) for `z` written at the
/// endpoint t of a path from t[−1].
pub fn codeg_deg_swap_check(z: &LaurentPoly, p: &TrackedPath, order: u32) -> Result<bool> {
    let t = p.current();
    let Some(codeg) = codegree(z, t) else {
        return Ok(false);
    };
    let psi = psi_matrix(&p.reversed()?)?;
    let want = ExpVec(psi.mul_vec(&codeg.0));
    let series = transport(z, p, order)?;
    Ok(series.degree_certificate() == DegreeCert::Pointed(want))
}

/// Support dimension n with codeg = deg + B̃n, for a bipointed polynomial.
pub fn support_dimension(z: &LaurentPoly, s: &Seed) -> Option<UfVec> {
    crate::order::bidegree_of(z, s).map(|b| b.supp_dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{degree, is_bipointed};

    fn kron() -> Seed {
        Seed::skew_symmetric(&[vec![0, -2], vec![2, 0]]).unwrap()
    }

    fn a2() -> Seed {
        Seed::skew_symmetric(&[vec![0, -1], vec![1, 0]]).unwrap()
    }

    fn poly(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s, 2).unwrap()
    }

    #[test]
    fn y_variables() {
        assert_eq!(y_variable(&kron(), 0).unwrap(), poly("x2^2"));
        assert_eq!(y_variable(&kron(), 1).unwrap(), poly("x1^-2"));
        assert_eq!(y_variable(&a2(), 0).unwrap(), poly("x2"));
    }

    #[test]
    fn exchange_relations() {
        let p = TrackedPath::from_steps(&a2(), &[0]).unwrap();
        let c = cluster_variables_along(&p).unwrap();
        assert_eq!(c[1][0], poly("x1^-1 + x1^-1*x2"));
        let p = TrackedPath::from_steps(&kron(), &[0]).unwrap();
        let x = &cluster_variables_along(&p).unwrap()[1][0];
        assert_eq!(*x, poly("x1^-1 + x1^-1*x2^2"));
        assert_eq!(degree(x, &kron()), Some(ExpVec(vec![-1, 0])));
    }

    #[test]
    fn pentagon() {
        let p = TrackedPath::from_steps(&a2(), &[0, 1, 0, 1, 0]).unwrap();
        let c = cluster_variables_along(&p).unwrap();
        assert_eq!(c[5], vec![poly("x2"), poly("x1")]);
        let mut seen: Vec<String> = (1..=5).map(|s| c[s][p.steps()[s - 1]].to_string()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 5);
    }

    #[test]
    fn transports() {
        let p = TrackedPath::from_steps(&kron(), &[0]).unwrap();
        let t = transport(&poly("x1"), &p, 3).unwrap();
        assert!(!t.frontier_touched());
        assert_eq!(t.to_poly().unwrap(), &poly("x1^-1 + x1^-1*x2^2"));
        let empty = TrackedPath::new(kron());
        let m = poly("x1^3*x2^-2");
        assert_eq!(transport(&m, &empty, 0).unwrap().to_poly(), Some(&m));
        // x1' x2' / (1 + x1'^2) at μ_2 of Kronecker is a genuine series
        let p = TrackedPath::from_steps(&kron(), &[1]).unwrap();
        let t = transport(&poly("x1*x2^-1"), &p.reversed().unwrap(), 4).unwrap();
        assert!(t.frontier_touched());
        assert_eq!(t.degree_certificate(), DegreeCert::Pointed(ExpVec(vec![1, 1])));
        assert!(is_bipointed(&poly("x1"), &kron()));
    }

    #[test]
    fn kronecker_z_transport() {
        let z = poly("x1*x2^-1 + x1^-1*x2^-1 + x1^-1*x2");
        let p = TrackedPath::from_steps(&kron(), &[0]).unwrap();
        // z at the base, expanded at μ_1: transport along the reversed path
        let t = transport(&z, &p.reversed().unwrap(), 4).unwrap();
        let deg = seed_engine::phi(&ExpVec(vec![1, -1]), &p).unwrap();
        assert_eq!(t.degree_certificate(), DegreeCert::Pointed(deg));
    }
}
