use std::collections::BTreeMap;

use lattice_core::{Dominance, ExpVec, Q, UfVec};
use num_integer::Integer;
use seed_engine::Seed;

use crate::order::{degree, maximal_in};
use crate::poly::LaurentPoly;

/// Power series in y_1..y_r with integer coefficients, truncated at total degree `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YSeries {
    r: usize,
    order: u32,
    terms: BTreeMap<UfVec, i64>,
}

fn total(n: &UfVec) -> u32 {
    n.0.iter().sum::<i64>() as u32
}

impl YSeries {
    pub fn one(r: usize, order: u32) -> Self {
        YSeries::from_terms(r, order, [(UfVec::zero(r), 1)])
    }

    /// Terms of degree above `order` are dropped.
    pub fn from_terms(r: usize, order: u32, terms: impl IntoIterator<Item = (UfVec, i64)>) -> Self {
        let mut map = BTreeMap::new();
        for (n, c) in terms {
            assert!(n.is_nonneg(), "y-exponents must be nonnegative");
            if total(&n) <= order && c != 0 {
                *map.entry(n).or_insert(0) += c;
            }
        }
        map.retain(|_, c: &mut i64| *c != 0);
        YSeries { r, order, terms: map }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&UfVec, i64)> {
        self.terms.iter().map(|(n, &c)| (n, c))
    }

    pub fn coeff(&self, n: &UfVec) -> i64 {
        self.terms.get(n).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(&UfVec::zero(self.r)) == 1
    }

    /// Highest total degree present.
    pub fn top_degree(&self) -> u32 {
        self.terms.keys().map(total).max().unwrap_or(0)
    }

    pub fn mul(&self, rhs: &YSeries) -> YSeries {
        let order = self.order.min(rhs.order);
        let mut map: BTreeMap<UfVec, i64> = BTreeMap::new();
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                let n = a + b;
                if total(&n) <= order {
                    let v = map.entry(n).or_insert(0);
                    *v = v.checked_add(ca.checked_mul(cb).expect("overflow")).expect("overflow");
                }
            }
        }
        map.retain(|_, c| *c != 0);
        YSeries { r: self.r, order, terms: map }
    }

    /// Multiplicative inverse; the constant term must be 1.
    pub fn inverse(&self) -> YSeries {
        assert_eq!(self.coeff(&UfVec::zero(self.r)), 1, "constant term must be 1");
        // 1/(1+g) = Σ (−g)^j, and (−g)^j has degree ≥ j
        let minus_g = YSeries::from_terms(
            self.r,
            self.order,
            self.terms().filter(|(n, _)| !n.is_zero()).map(|(n, c)| (n.clone(), -c)),
        );
        let mut acc = YSeries::one(self.r, self.order);
        let mut p = YSeries::one(self.r, self.order);
        for _ in 0..self.order {
            p = p.mul(&minus_g);
            if p.terms.is_empty() {
                break;
            }
            acc = acc.add(&p);
        }
        acc
    }

    pub fn add(&self, rhs: &YSeries) -> YSeries {
        let order = self.order.min(rhs.order);
        YSeries::from_terms(
            self.r,
            order,
            self.terms()
                .chain(rhs.terms())
                .map(|(n, c)| (n.clone(), c)),
        )
    }

    pub fn pow(&self, k: i64) -> YSeries {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = YSeries::one(self.r, self.order);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }
}

/// What can be said about the degree of a truncated series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeCert {
    /// Certainly pointed at this degree.
    Pointed(ExpVec),
    /// Certainly not pointed.
    NotPointed,
    /// The kept terms do not decide the question.
    Unknown,
}

/// A Laurent series `Σ_a x^a · (power series in y)` with all terms of level
/// above `cap` dropped, where the level is the grading λ of the seed
/// (so λ(x^a y^n) = λ(a) + |n|) and `cap = min λ(anchor) + order`.
///
/// Every term of the full series is dominated by one of the anchors, and
/// every kept term is exact.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    seed: Seed,
    poly: LaurentPoly,
    anchors: Vec<ExpVec>,
    order: u32,
    cap: Q,
    frontier_touched: bool,
}

/// Remaining y-degree below the cap at `e`, rounded down; negative past the cap.
pub fn budget(dom: &Dominance, cap: &Q, e: &ExpVec) -> i64 {
    let room = cap - dom.level(e);
    room.numer().div_floor(room.denom()) as i64
}

impl TruncatedSeries {
    /// `touched` records whether nonzero terms were already dropped upstream.
    pub fn new(
        seed: &Seed,
        poly: LaurentPoly,
        anchors: Vec<ExpVec>,
        order: u32,
        touched: bool,
    ) -> TruncatedSeries {
        let dom = seed.dominance();
        let base = anchors
            .iter()
            .map(|a| dom.level(a))
            .min()
            .unwrap_or_else(|| Q::from_integer(0));
        let cap = base + Q::from_integer(order as i128);
        let mut kept = LaurentPoly::zero(poly.nvars());
        let mut dropped = false;
        for (e, c) in poly.terms() {
            if dom.level(e) <= cap {
                kept.add_term(e.clone(), c);
            } else {
                dropped = true;
            }
        }
        TruncatedSeries {
            seed: seed.clone(),
            poly: kept,
            anchors,
            order,
            cap,
            frontier_touched: touched || dropped,
        }
    }

    /// x^m to the given order.
    pub fn monomial(seed: &Seed, m: ExpVec, order: u32) -> TruncatedSeries {
        let poly = LaurentPoly::monomial(m.clone(), 1);
        TruncatedSeries::new(seed, poly, vec![m], order, false)
    }

    /// A Laurent polynomial, anchored at its maximal degrees.
    pub fn from_poly(seed: &Seed, poly: LaurentPoly, order: u32) -> TruncatedSeries {
        let anchors = maximal_in(seed.dominance(), poly.support());
        TruncatedSeries::new(seed, poly, anchors, order, false)
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn anchors(&self) -> &[ExpVec] {
        &self.anchors
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn cap(&self) -> &Q {
        &self.cap
    }

    pub fn frontier_touched(&self) -> bool {
        self.frontier_touched
    }

    /// The exact Laurent polynomial, when nothing was truncated.
    pub fn to_poly(&self) -> Option<&LaurentPoly> {
        (!self.frontier_touched).then_some(&self.poly)
    }

    pub fn degree_certificate(&self) -> DegreeCert {
        let dom = self.seed.dominance();
        if !self.frontier_touched {
            return match degree(&self.poly, &self.seed) {
                Some(g) if self.poly.coeff(&g) == 1 => DegreeCert::Pointed(g),
                _ => DegreeCert::NotPointed,
            };
        }
        // anything dominating a kept term has smaller level, so is kept too
        let mut levels: Vec<(Q, &ExpVec)> =
            self.poly.terms().map(|(e, _)| (dom.level(e), e)).collect();
        levels.sort();
        let Some((low, g)) = levels.first().cloned() else {
            return DegreeCert::Unknown;
        };
        if levels.get(1).is_some_and(|(l, _)| *l == low) {
            return DegreeCert::NotPointed;
        }
        if levels.iter().any(|(_, e)| !dom.dominated(e, g)) || self.poly.coeff(g) != 1 {
            return DegreeCert::NotPointed;
        }
        if self.anchors.iter().all(|a| dom.dominated(a, g)) {
            DegreeCert::Pointed(g.clone())
        } else {
            DegreeCert::Unknown
        }
    }
}
