use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use lattice_core::{Error, ExpVec, Result, UfVec, Q};
use laurent_ring::{budget, LaurentPoly, TruncatedSeries, YSeries};
use num_traits::{One, Zero};
use seed_engine::Seed;

/// A wall through the origin on the ray R≥0·ray, contained in normal^⊥.
///
/// The crossing automorphism is x^m ↦ x^m·f^{±⟨m,normal⟩} with
/// log f = Σ j·c_j·s^j, s = y^normal, for the stored log terms (j, c_j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall2 {
    pub ray: [i64; 2],
    pub normal: [i64; 2],
    pub logfn: Vec<(u32, Q)>,
    /// Coefficients of f in s, up to the diagram's order.
    pub f: Vec<i64>,
    /// Whether `f` is known to be the whole function, not a truncation.
    pub exact: bool,
}

impl Wall2 {
    /// The multiplicative function as a polynomial in y1, y2.
    pub fn f_in_y(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            2,
            self.f.iter().enumerate().map(|(j, &c)| {
                let j = j as i64;
                (ExpVec(vec![j * self.normal[0], j * self.normal[1]]), c)
            }),
        )
    }

    fn weight(&self) -> i64 {
        self.normal[0] + self.normal[1]
    }
}

/// A rank-2 scattering diagram truncated at total y-degree `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScatterDiagram2 {
    pub walls: Vec<Wall2>,
    pub order: u32,
    pub seed: Seed,
}

/// Which way a path turns around the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Ccw,
    Cw,
    /// The shorter arc, counterclockwise on ties.
    Shorter,
}

/// One wall crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub wall: usize,
    pub ray: [i64; 2],
    pub sign: i64,
}

/// The ordered crossings of a path, first crossed first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PathOp {
    pub crossings: Vec<Crossing>,
}

impl PathOp {
    pub fn inverse(&self) -> PathOp {
        PathOp {
            crossings: self
                .crossings
                .iter()
                .rev()
                .map(|c| Crossing { sign: -c.sign, ..c.clone() })
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.crossings.is_empty()
    }
}

fn half(v: [i64; 2]) -> u8 {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
        0
    } else {
        1
    }
}

fn cross(a: [i64; 2], b: [i64; 2]) -> i128 {
    a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128
}

/// Compares directions by angle in [0, 2π), starting at (1,0).
pub fn cmp_angle(a: [i64; 2], b: [i64; 2]) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&cross(a, b)))
}

fn same_ray(a: [i64; 2], b: [i64; 2]) -> bool {
    cross(a, b) == 0 && a[0] * b[0] + a[1] * b[1] > 0
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn primitive(v: [i64; 2]) -> [i64; 2] {
    let g = gcd(v[0], v[1]);
    [v[0] / g, v[1] / g]
}

// f = exp(Σ j·c_j·s^j) to s-degree `deg`, over Q
fn exp_log_q(logfn: &[(u32, Q)], deg: usize) -> Vec<Q> {
    let mut l = vec![Q::zero(); deg + 1];
    for (j, c) in logfn {
        if (*j as usize) <= deg {
            l[*j as usize] += c * Q::from_integer(*j as i128);
        }
    }
    // k·f_k = Σ_{i=1..k} i·l_i·f_{k-i}
    let mut f = vec![Q::one()];
    for k in 1..=deg {
        let mut acc = Q::zero();
        for i in 1..=k {
            acc += Q::from_integer(i as i128) * l[i] * f[k - i];
        }
        f.push(acc / Q::from_integer(k as i128));
    }
    f
}

fn ser_mul(a: &[Q], b: &[Q], len: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

// f^k to `len` coefficients; f_0 = 1
fn ser_pow(f: &[Q], k: i64, len: usize) -> Vec<Q> {
    let base = if k < 0 {
        // 1/f by g_0 = 1, g_n = −Σ_{i≥1} f_i g_{n−i}
        let mut g = vec![Q::one()];
        for n in 1..len {
            let mut acc = Q::zero();
            for i in 1..=n.min(f.len() - 1) {
                acc -= f[i] * g[n - i];
            }
            g.push(acc);
        }
        g
    } else {
        f.to_vec()
    };
    let mut out = vec![Q::zero(); len];
    out[0] = Q::one();
    for _ in 0..k.unsigned_abs() {
        out = ser_mul(&out, &base, len);
    }
    out
}

fn exp_log(logfn: &[(u32, Q)], deg: usize) -> Result<Vec<i64>> {
    let mut f = exp_log_q(logfn, deg);
    while f.len() > 1 && f.last().is_some_and(|q| q.is_zero()) {
        f.pop();
    }
    f.into_iter()
        .enumerate()
        .map(|(k, q)| {
            if q.is_integer() {
                i64::try_from(q.to_integer())
                    .map_err(|_| Error::Config(format!("wall coefficient {q} overflows")))
            } else {
                Err(Error::InvariantViolation(format!(
                    "wall function has non-integer coefficient {q} at s^{k}"
                )))
            }
        })
        .collect()
}

fn check_seed(s: &Seed) -> Result<()> {
    if s.n() != 2 || s.rank() != 2 || !s.is_skew_symmetric() || s.d() != [1, 1] {
        return Err(Error::Config(
            "scattering diagrams need a rank-2 skew-symmetric seed with no frozen vertices and d = (1,1)"
                .into(),
        ));
    }
    Ok(())
}

impl ScatterDiagram2 {
    /// The two incoming walls e_k^⊥ with function 1 + y_k, each stored as two rays.
    pub fn incoming(s: &Seed, order: u32) -> Result<Self> {
        check_seed(s)?;
        let mut d = ScatterDiagram2 {
            walls: Vec::new(),
            order,
            seed: s.clone(),
        };
        // −Li₂(−s) = Σ (−1)^{j−1} s^j / j²
        let dilog: Vec<(u32, Q)> = (1..=order)
            .map(|j| {
                let sign = if j % 2 == 1 { 1 } else { -1 };
                (j, Q::new(sign, (j as i128) * (j as i128)))
            })
            .collect();
        for (normal, rays) in [([1, 0], [[0, 1], [0, -1]]), ([0, 1], [[1, 0], [-1, 0]])] {
            for ray in rays {
                let f = exp_log(&dilog, order as usize)?;
                d.walls.push(Wall2 {
                    ray,
                    normal,
                    logfn: dilog.clone(),
                    f,
                    exact: true,
                });
            }
        }
        d.sort();
        Ok(d)
    }

    fn sort(&mut self) {
        self.walls.sort_by(|a, b| cmp_angle(a.ray, b.ray));
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// y^n as an exponent of x, i.e. B·n.
    fn y_exp(&self, n: [i64; 2]) -> ExpVec {
        self.seed.dominance().image(&UfVec(n.to_vec()))
    }

    /// The outgoing ray of a wall with normal `n0`: R≥0·(−B·n0).
    pub fn outgoing_ray(&self, n0: [i64; 2]) -> [i64; 2] {
        let v = self.y_exp(n0);
        primitive([-v[0], -v[1]])
    }

    /// Applies the crossing of wall `w` with sign `eps` to `z`.
    pub fn cross(&self, w: &Wall2, eps: i64, z: &TruncatedSeries) -> Result<TruncatedSeries> {
        if z.order() > self.order {
            return Err(Error::Usage(format!(
                "series of order {} cannot cross walls known to order {}",
                z.order(),
                self.order
            )));
        }
        let dom = self.seed.dominance();
        let s_exp = self.y_exp(w.normal);
        let weight = w.weight();
        let f = YSeries::from_terms(
            1,
            w.f.len() as u32,
            w.f.iter().enumerate().map(|(j, &c)| (UfVec(vec![j as i64]), c)),
        );
        let mut out = LaurentPoly::zero(2);
        let mut touched = z.frontier_touched();
        for (m, c) in z.poly().terms() {
            let k = eps * (m[0] * w.normal[0] + m[1] * w.normal[1]);
            if k == 0 || w.f.len() == 1 {
                out.add_term(m.clone(), c);
                continue;
            }
            let room = budget(dom, z.cap(), m);
            if room < 0 {
                touched = true;
                continue;
            }
            let jmax = (room / weight) as u32;
            let fk = YSeries::from_terms(1, jmax, f.terms().map(|(n, v)| (n.clone(), v))).pow(k);
            let f_deg = w.f.len() as i64 - 1;
            if k < 0 || !w.exact || f_deg * k > jmax as i64 {
                touched = true;
            }
            for (n, v) in fk.terms() {
                out.add_term(m + &s_exp.scale(n[0]), c * v);
            }
        }
        Ok(TruncatedSeries::new(
            &self.seed,
            out,
            z.anchors().to_vec(),
            z.order(),
            touched,
        ))
    }

    /// Crossings of the arc from direction `from` to direction `to`.
    pub fn path_product(&self, from: [i64; 2], to: [i64; 2], dir: Direction) -> Result<PathOp> {
        for v in [from, to] {
            if v == [0, 0] {
                return Err(Error::Usage("chamber direction must be nonzero".into()));
            }
            if let Some(w) = self.walls.iter().find(|w| same_ray(w.ray, v)) {
                return Err(Error::Usage(format!(
                    "direction ({},{}) lies on the wall ray ({},{})",
                    v[0], v[1], w.ray[0], w.ray[1]
                )));
            }
        }
        if same_ray(from, to) {
            return Ok(PathOp::default());
        }
        let ccw = match dir {
            Direction::Ccw => true,
            Direction::Cw => false,
            // ccw sweep is ≤ π exactly when to is left of from, or opposite
            Direction::Shorter => cross(from, to) >= 0,
        };
        let (start, end) = if ccw { (from, to) } else { (to, from) };
        // walls strictly inside the ccw sweep from `start` to `end`
        let inside = |r: [i64; 2]| -> bool {
            let rel = |v: [i64; 2]| cmp_angle(start, v) == Ordering::Less;
            let after_start = rel(r);
            let before_end = cmp_angle(r, end) == Ordering::Less;
            if cmp_angle(start, end) == Ordering::Less {
                after_start && before_end
            } else {
                after_start || before_end
            }
        };
        let mut idx: Vec<usize> = (0..self.walls.len())
            .filter(|&i| inside(self.walls[i].ray))
            .collect();
        // ccw order from start
        idx.sort_by(|&a, &b| {
            let ka = cmp_angle(start, self.walls[a].ray) == Ordering::Less;
            let kb = cmp_angle(start, self.walls[b].ray) == Ordering::Less;
            kb.cmp(&ka)
                .then_with(|| cmp_angle(self.walls[a].ray, self.walls[b].ray))
        });
        if !ccw {
            idx.reverse();
        }
        let crossings = idx
            .into_iter()
            .map(|i| {
                let w = &self.walls[i];
                let r = w.ray;
                let tangent = if ccw { [-r[1], r[0]] } else { [r[1], -r[0]] };
                let pairing = tangent[0] * w.normal[0] + tangent[1] * w.normal[1];
                Crossing {
                    wall: i,
                    ray: r,
                    sign: -pairing.signum(),
                }
            })
            .collect();
        Ok(PathOp { crossings })
    }

    /// The full counterclockwise loop based just below the direction (1,0).
    pub fn loop_op(&self) -> PathOp {
        let crossings = (0..self.walls.len())
            .map(|i| {
                let w = &self.walls[i];
                let r = w.ray;
                let pairing = -r[1] * w.normal[0] + r[0] * w.normal[1];
                Crossing {
                    wall: i,
                    ray: r,
                    sign: -pairing.signum(),
                }
            })
            .collect();
        PathOp { crossings }
    }

    pub fn apply(&self, op: &PathOp, z: &TruncatedSeries) -> Result<TruncatedSeries> {
        let mut z = z.clone();
        for c in &op.crossings {
            let w = self.walls.get(c.wall).ok_or_else(|| {
                Error::Usage(format!("path refers to wall {} of another diagram", c.wall))
            })?;
            z = self.cross(w, c.sign, &z)?;
        }
        Ok(z)
    }

    /// Adds the log term c·s^j to the wall with normal `n0`, creating it on the outgoing ray.
    fn add_log_term(&mut self, n0: [i64; 2], j: u32, c: Q) -> Result<()> {
        let ray = self.outgoing_ray(n0);
        if let Some(w) = self.walls.iter_mut().find(|w| w.ray == ray) {
            if w.normal != n0 {
                return Err(Error::InvariantViolation(format!(
                    "correction with normal ({},{}) lands on the incoming ray ({},{})",
                    n0[0], n0[1], ray[0], ray[1]
                )));
            }
            w.logfn.push((j, c));
            w.exact = false;
        } else {
            self.walls.push(Wall2 {
                ray,
                normal: n0,
                logfn: vec![(j, c)],
                f: vec![1],
                exact: false,
            });
            self.sort();
        }
        Ok(())
    }

    // Loop applied to x^{f_i} to order k, with exact rational wall functions;
    // top coefficients of unfinished walls need not be integers.
    fn loop_image_q(&self, i: usize, k: u32) -> BTreeMap<ExpVec, Q> {
        let dom = self.seed.dominance();
        let m0 = ExpVec::unit(2, i);
        let cap = dom.level(&m0) + Q::from_integer(k as i128);
        let mut z = BTreeMap::from([(m0, Q::one())]);
        for c in self.loop_op().crossings {
            let w = &self.walls[c.wall];
            let weight = w.weight();
            let f = exp_log_q(&w.logfn, (k as i64 / weight) as usize);
            let s_exp = self.y_exp(w.normal);
            let mut out: BTreeMap<ExpVec, Q> = BTreeMap::new();
            for (m, a) in z {
                let kk = c.sign * (m[0] * w.normal[0] + m[1] * w.normal[1]);
                let room = budget(dom, &cap, &m);
                if room < 0 {
                    continue;
                }
                let fk = ser_pow(&f, kk, (room / weight) as usize + 1);
                for (j, v) in fk.into_iter().enumerate() {
                    if !v.is_zero() {
                        *out.entry(&m + &s_exp.scale(j as i64)).or_insert_with(Q::zero) += a * v;
                    }
                }
            }
            out.retain(|_, v| !v.is_zero());
            z = out;
        }
        z
    }

    /// Adds walls on outgoing rays, order by order, until the loop around the
    /// origin is the identity to the diagram's order.
    pub fn complete(&self) -> Result<ScatterDiagram2> {
        let mut d = self.clone();
        let dom = d.seed.dominance().clone();
        for k in 1..=d.order {
            // a_n: coefficient of x^{f_i}·y^n with |n| = k in the loop image
            let mut disc: BTreeMap<[i64; 2], [Q; 2]> = BTreeMap::new();
            for i in 0..2 {
                let m = ExpVec::unit(2, i);
                for (e, c) in d.loop_image_q(i, k) {
                    if e == m {
                        continue;
                    }
                    let n = dom.solve(&e, &m).ok_or_else(|| {
                        Error::InvariantViolation(format!("loop produced {e} below no y-power"))
                    })?;
                    if n.l1() != k as i64 {
                        return Err(Error::InvariantViolation(format!(
                            "loop not consistent below order {k}: term y^{n}"
                        )));
                    }
                    disc.entry([n[0], n[1]]).or_insert([Q::zero(), Q::zero()])[i] = c;
                }
            }
            for (n, a) in disc {
                let n0 = primitive(n);
                if n0[0] == 0 || n0[1] == 0 {
                    return Err(Error::InvariantViolation(format!(
                        "order {k} needs a correction y^({},{}) on an incoming ray",
                        n[0], n[1]
                    )));
                }
                let c1 = a[0] / Q::from_integer(n[0] as i128);
                let c2 = a[1] / Q::from_integer(n[1] as i128);
                if c1 != c2 {
                    return Err(Error::InvariantViolation(format!(
                        "inconsistent loop discrepancy at y^({},{}): {c1} vs {c2}",
                        n[0], n[1]
                    )));
                }
                let ray = d.outgoing_ray(n0);
                let pairing = -ray[1] * n0[0] + ray[0] * n0[1];
                let eps = -pairing.signum();
                let j = (n[0] / n0[0]) as u32;
                d.add_log_term(n0, j, -c1 * Q::from_integer(eps as i128))?;
            }
        }
        for w in &mut d.walls {
            w.f = exp_log(&w.logfn, (d.order as i64 / w.weight()) as usize)?;
        }
        Ok(d)
    }
    /// The counterclockwise loop applied to x^{f_i}.
    pub fn loop_image(&self, i: usize, order: u32) -> Result<TruncatedSeries> {
        let z = TruncatedSeries::monomial(&self.seed, ExpVec::unit(2, i), order);
        self.apply(&self.loop_op(), &z)
    }

    /// Whether the loop fixes x^{f_1} and x^{f_2} to the diagram's order.
    pub fn is_consistent(&self) -> Result<bool> {
        for i in 0..2 {
            let img = self.loop_image(i, self.order)?;
            if img.poly() != &LaurentPoly::monomial(ExpVec::unit(2, i), 1) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rays negated, functions kept, over the opposite seed.
    pub fn opposite(&self) -> ScatterDiagram2 {
        let mut d = ScatterDiagram2 {
            walls: self
                .walls
                .iter()
                .map(|w| Wall2 {
                    ray: [-w.ray[0], -w.ray[1]],
                    ..w.clone()
                })
                .collect(),
            order: self.order,
            seed: self.seed.opposite(),
        };
        d.sort();
        d
    }

    /// One line per wall in angle order, after an order-stamped header.
    pub fn dump(&self) -> String {
        let mut out = format!("# scatter order={} walls={}\n", self.order, self.walls.len());
        for w in &self.walls {
            let logs: Vec<String> = w.logfn.iter().map(|(j, c)| format!("{j}:{c}")).collect();
            let f = w.f_in_y().to_string().replace('x', "y");
            let _ = writeln!(
                out,
                "wall ray=({},{}) normal=({},{}) f={} log=[{}]",
                w.ray[0],
                w.ray[1],
                w.normal[0],
                w.normal[1],
                f,
                logs.join(", ")
            );
        }
        out
    }
}

/// κ(x^m) = x^{−m}, carrying a series over `seed` to one over its opposite.
pub fn kappa(z: &TruncatedSeries) -> TruncatedSeries {
    let op = z.seed().opposite();
    let poly = LaurentPoly::from_terms(z.poly().nvars(), z.poly().terms().map(|(e, c)| (-e, c)));
    let anchors = z.anchors().iter().map(|a| -a).collect();
    TruncatedSeries::new(&op, poly, anchors, z.order(), z.frontier_touched())
}

/// The incoming diagram of `s` to the given order.
pub fn incoming_diagram(s: &Seed, order: u32) -> Result<ScatterDiagram2> {
    ScatterDiagram2::incoming(s, order)
}

/// `d` made consistent to its order.
pub fn complete(d: &ScatterDiagram2) -> Result<ScatterDiagram2> {
    d.complete()
}

pub fn opposite_diagram(d: &ScatterDiagram2) -> ScatterDiagram2 {
    d.opposite()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        let mut v = vec![[0, -1], [1, 0], [-1, 1], [1, -1], [0, 1], [-1, -1]];
        v.sort_by(|a, b| cmp_angle(*a, *b));
        assert_eq!(v, vec![[1, 0], [0, 1], [-1, 1], [-1, -1], [0, -1], [1, -1]]);
        assert_eq!(primitive([4, -6]), [2, -3]);
    }

    #[test]
    fn exponentials() {
        // log(1+s) = Σ (−1)^{j−1} s^j / j, stored with the extra 1/j
        let dilog: Vec<(u32, Q)> = (1..=5).map(|j| (j, Q::new(if j % 2 == 1 { 1 } else { -1 }, (j * j) as i128))).collect();
        assert_eq!(exp_log(&dilog, 5).unwrap(), vec![1, 1]);
        assert!(exp_log(&[(1, Q::new(1, 2))], 2).is_err());
        let f = vec![Q::one(), Q::from_integer(2)];
        let inv = ser_pow(&f, -1, 4);
        assert_eq!(ser_mul(&inv, &f, 4), vec![Q::one(), Q::zero(), Q::zero(), Q::zero()]);
        assert_eq!(ser_pow(&f, 2, 3), vec![Q::one(), Q::from_integer(4), Q::from_integer(4)]);
    }
}
