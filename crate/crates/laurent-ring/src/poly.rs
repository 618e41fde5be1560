use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use lattice_core::{Error, ExpVec, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Sparse Laurent polynomial with integer coefficients in `nvars` variables.
///
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<ExpVec, i64>,
}

fn add_coeff(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("coefficient overflow")
}

fn mul_coeff(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("coefficient overflow")
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        LaurentPoly::constant(nvars, 1)
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        LaurentPoly::monomial(ExpVec::zero(nvars), c)
    }

    pub fn monomial(e: ExpVec, c: i64) -> Self {
        let mut p = LaurentPoly::zero(e.len());
        p.add_term(e, c);
        p
    }

    /// The variable x_i (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        LaurentPoly::monomial(ExpVec::unit(nvars, i), 1)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (ExpVec, i64)>) -> Self {
        let mut p = LaurentPoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in ascending lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExpVec, i64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &ExpVec) -> i64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<ExpVec> {
        self.terms.keys().cloned().collect()
    }

    /// The single term if this is a monomial.
    pub fn as_monomial(&self) -> Option<(&ExpVec, i64)> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, e: ExpVec, c: i64) {
        assert_eq!(e.len(), self.nvars, "exponent length mismatch");
        if c == 0 {
            return;
        }
        let v = self.terms.entry(e).or_insert(0);
        *v = add_coeff(*v, c);
        if *v == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return LaurentPoly::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), mul_coeff(c, k))).collect(),
        }
    }

    /// Multiplication by the monomial x^e.
    pub fn shift(&self, e: &ExpVec) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &c)| (m + e, c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = LaurentPoly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Componentwise minimum of the exponents; zero for the zero polynomial.
    pub fn min_exponents(&self) -> ExpVec {
        let mut lo = match self.terms.keys().next() {
            Some(e) => e.clone(),
            None => return ExpVec::zero(self.nvars),
        };
        for e in self.terms.keys() {
            for i in 0..self.nvars {
                lo[i] = lo[i].min(e[i]);
            }
        }
        lo
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|&c| c > 0)
    }

    /// Exact quotient `self / d`, or an invariant-violation error if `d` does
    /// not divide `self` in the Laurent polynomial ring.
    pub fn div_exact(&self, d: &LaurentPoly) -> Result<LaurentPoly> {
        if d.is_zero() {
            return Err(Error::InvariantViolation("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero(self.nvars));
        }
        let fail = || {
            Error::InvariantViolation(format!("{d} does not divide {self} as a Laurent polynomial"))
        };
        // after shifting, d0 has no monomial factor, so a Laurent quotient is polynomial
        let lo_d = d.min_exponents();
        let lo_p = self.min_exponents();
        let key = |e: &ExpVec| (e.0.iter().sum::<i64>(), e.clone());
        let d0: Vec<(ExpVec, i64)> = d.terms().map(|(e, c)| (e - &lo_d, c)).collect();
        let (lt_e, lt_c) = d0
            .iter()
            .max_by_key(|(e, _)| key(e))
            .cloned()
            .unwrap();
        let mut rem: BTreeMap<(i64, ExpVec), i64> =
            self.terms().map(|(e, c)| (key(&(e - &lo_p)), c)).collect();
        let mut q = LaurentPoly::zero(self.nvars);
        while let Some(((_, e), c)) = rem.pop_last() {
            let qe = &e - &lt_e;
            if !qe.is_nonneg() || c % lt_c != 0 {
                return Err(fail());
            }
            let qc = c / lt_c;
            for (de, dc) in &d0 {
                if *de == lt_e {
                    continue;
                }
                let m = &qe + de;
                let k = key(&m);
                let v = rem.entry(k.clone()).or_insert(0);
                *v = add_coeff(*v, -mul_coeff(qc, *dc));
                if *v == 0 {
                    rem.remove(&k);
                }
            }
            q.add_term(qe, qc);
        }
        Ok(q.shift(&(&lo_p - &lo_d)))
    }

    /// Value at a point with nonzero rational coordinates.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars, "point has wrong dimension");
        let mut acc = BigRational::zero();
        for (e, c) in self.terms() {
            let mut t = BigRational::from_integer(BigInt::from(c));
            for (x, &k) in point.iter().zip(&e.0) {
                let p = num_traits::pow(x.clone(), k.unsigned_abs() as usize);
                t = if k >= 0 { t * p } else { t / p };
            }
            acc += t;
        }
        acc
    }

    /// Parses the canonical text form, e.g. `x1*x2^-1 - 3*x2 + 2`.
    pub fn parse(s: &str, nvars: usize) -> Result<LaurentPoly> {
        let err = |msg: String| Error::Parse { line: 1, msg };
        let mut p = LaurentPoly::zero(nvars);
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(err("empty polynomial".into()));
        }
        if src == "0" {
            return Ok(p);
        }
        // split into signed terms; a sign right after '^' or '(' belongs to an exponent
        let bytes = src.as_bytes();
        let mut pieces = Vec::new();
        let mut start = 0;
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' && bytes[i - 1] != b'(' {
                pieces.push(&src[start..i]);
                start = i;
            }
        }
        pieces.push(&src[start..]);
        for piece in pieces {
            let (sign, body) = match piece.as_bytes()[0] {
                b'+' => (1, &piece[1..]),
                b'-' => (-1, &piece[1..]),
                _ => (1, piece),
            };
            if body.is_empty() {
                return Err(err(format!("dangling sign in {s:?}")));
            }
            let mut coeff: i64 = 1;
            let mut e = ExpVec::zero(nvars);
            for (pos, factor) in body.split('*').enumerate() {
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, exp) = match var.split_once('^') {
                        Some((i, k)) => (i, k.trim_matches(|c| c == '(' || c == ')')),
                        None => (var, "1"),
                    };
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| err(format!("bad variable {factor:?}")))?;
                    if idx == 0 || idx > nvars {
                        return Err(err(format!("variable x{idx} out of range 1..{nvars}")));
                    }
                    let k: i64 = exp
                        .parse()
                        .map_err(|_| err(format!("bad exponent in {factor:?}")))?;
                    e[idx - 1] += k;
                } else if pos == 0 {
                    coeff = factor
                        .parse()
                        .map_err(|_| err(format!("bad coefficient {factor:?}")))?;
                } else {
                    return Err(err(format!("unexpected factor {factor:?}")));
                }
            }
            p.add_term(e, sign * coeff);
        }
        Ok(p)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &ExpVec) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.0.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if k == 1 {
            write!(f, "x{}", i + 1)?;
        } else {
            write!(f, "x{}^{}", i + 1, k)?;
        }
    }
    Ok(())
}

/// Canonical form: terms in descending lexicographic exponent order.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms().rev().enumerate() {
            match (n, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.unsigned_abs();
            if e.is_zero() {
                write!(f, "{a}")?;
            } else {
                if a != 1 {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut acc: BTreeMap<ExpVec, i64> = BTreeMap::new();
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                let v = acc.entry(a + b).or_insert(0);
                *v = add_coeff(*v, mul_coeff(ca, cb));
            }
        }
        acc.retain(|_, c| *c != 0);
        LaurentPoly {
            nvars: self.nvars,
            terms: acc,
        }
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}
