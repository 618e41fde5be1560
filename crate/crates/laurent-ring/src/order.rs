use lattice_core::{Dominance, ExpVec, UfVec};
use seed_engine::Seed;

use crate::poly::LaurentPoly;

/// Degree, codegree and support dimension of a bipointed element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bidegree {
    pub deg: ExpVec,
    pub codeg: ExpVec,
    pub supp_dim: UfVec,
}

fn check_vars(z: &LaurentPoly, s: &Seed) {
    assert_eq!(z.nvars(), s.n(), "polynomial and seed have different variable counts");
}

// Support sorted by level, so anything dominating e precedes it.
fn by_level(dom: &Dominance, support: Vec<ExpVec>) -> Vec<ExpVec> {
    let mut keyed: Vec<_> = support.into_iter().map(|e| (dom.level(&e), e)).collect();
    keyed.sort();
    keyed.into_iter().map(|(_, e)| e).collect()
}

/// Dominance-maximal exponents of a finite support, in level order.
pub fn maximal_in(dom: &Dominance, support: Vec<ExpVec>) -> Vec<ExpVec> {
    let sorted = by_level(dom, support);
    let mut out: Vec<ExpVec> = Vec::new();
    for (i, e) in sorted.iter().enumerate() {
        if !sorted[..i].iter().any(|f| dom.dominated(e, f)) {
            out.push(e.clone());
        }
    }
    out
}

/// Dominance-minimal exponents of a finite support.
pub fn minimal_in(dom: &Dominance, support: Vec<ExpVec>) -> Vec<ExpVec> {
    let sorted = by_level(dom, support);
    let mut out: Vec<ExpVec> = Vec::new();
    for (i, e) in sorted.iter().enumerate() {
        if !sorted[i + 1..].iter().any(|f| dom.dominated(f, e)) {
            out.push(e.clone());
        }
    }
    out.sort();
    out
}

pub fn maximal_degrees(z: &LaurentPoly, s: &Seed) -> Vec<ExpVec> {
    check_vars(z, s);
    let mut m = maximal_in(s.dominance(), z.support());
    m.sort();
    m
}

pub fn minimal_degrees(z: &LaurentPoly, s: &Seed) -> Vec<ExpVec> {
    check_vars(z, s);
    minimal_in(s.dominance(), z.support())
}

fn unique(mut v: Vec<ExpVec>) -> Option<ExpVec> {
    if v.len() == 1 {
        v.pop()
    } else {
        None
    }
}

/// The unique dominance-maximal exponent, if there is one.
pub fn degree(z: &LaurentPoly, s: &Seed) -> Option<ExpVec> {
    unique(maximal_degrees(z, s))
}

/// The unique dominance-minimal exponent, if there is one.
pub fn codegree(z: &LaurentPoly, s: &Seed) -> Option<ExpVec> {
    unique(minimal_degrees(z, s))
}

pub fn is_pointed(z: &LaurentPoly, s: &Seed) -> bool {
    degree(z, s).is_some_and(|g| z.coeff(&g) == 1)
}

pub fn is_copointed(z: &LaurentPoly, s: &Seed) -> bool {
    codegree(z, s).is_some_and(|g| z.coeff(&g) == 1)
}

pub fn is_bipointed(z: &LaurentPoly, s: &Seed) -> bool {
    is_pointed(z, s) && is_copointed(z, s)
}

pub fn bidegree_of(z: &LaurentPoly, s: &Seed) -> Option<Bidegree> {
    if !is_bipointed(z, s) {
        return None;
    }
    let deg = degree(z, s)?;
    let codeg = codegree(z, s)?;
    let supp_dim = s.dominance().solve(&codeg, &deg)?;
    Some(Bidegree { deg, codeg, supp_dim })
}
