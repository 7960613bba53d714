use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rational::{fmt_rational, parse_rational};
use crate::linalg::Rational;

/// `(P, Q)`: the `(x, y)`-degree and the `(u, v)`/`s`-degree.
pub type Bideg = (i32, i32);

pub fn add(a: Bideg, b: Bideg) -> Bideg {
    (a.0 + b.0, a.1 + b.1)
}

pub fn sub(a: Bideg, b: Bideg) -> Bideg {
    (a.0 - b.0, a.1 - b.1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseRing {
    /// `k[x, y]/(xy)`
    Crossing,
    /// `k[x, y, u, v]/(xy)`
    CrossingUv,
    /// `k[x^±, y^±][s]`
    LaurentS,
}

impl BaseRing {
    pub fn name(self) -> &'static str {
        match self {
            BaseRing::Crossing => "k[x,y]/(xy)",
            BaseRing::CrossingUv => "k[x,y,u,v]/(xy)",
            BaseRing::LaurentS => "k[x^-1,y^-1,x,y][s]",
        }
    }

    /// Whether a monomial is a nonzero normal form in this ring.
    pub fn admits(self, m: &Monomial) -> bool {
        match self {
            BaseRing::Crossing => m.x >= 0 && m.y >= 0 && !(m.x > 0 && m.y > 0) && m.u == 0 && m.v == 0 && m.s == 0,
            BaseRing::CrossingUv => m.x >= 0 && m.y >= 0 && !(m.x > 0 && m.y > 0) && m.s == 0,
            BaseRing::LaurentS => m.u == 0 && m.v == 0,
        }
    }

    /// True when the product `a * b` vanishes because of `xy = 0`.
    fn kills(self, m: &Monomial) -> bool {
        matches!(self, BaseRing::Crossing | BaseRing::CrossingUv) && m.x > 0 && m.y > 0
    }

    /// Monomials of bidegree `d` with Laurent exponents bounded below by
    /// `-pole`, in basis order.
    pub fn monomials(self, d: Bideg, pole: u32) -> Vec<Monomial> {
        let (p, q) = d;
        let mut out = Vec::new();
        match self {
            BaseRing::Crossing | BaseRing::CrossingUv => {
                if p < 0 || q < 0 || (self == BaseRing::Crossing && q != 0) {
                    return out;
                }
                let xy: Vec<(i32, i32)> = if p == 0 { vec![(0, 0)] } else { vec![(p, 0), (0, p)] };
                for (a, b) in xy {
                    for c in (0..=q as u32).rev() {
                        out.push(Monomial { x: a, y: b, u: c, v: q as u32 - c, s: 0 });
                    }
                }
            }
            BaseRing::LaurentS => {
                if q < 0 {
                    return out;
                }
                let l = pole as i32;
                let total = p - q;
                for a in (-l..=total + l).rev() {
                    let b = total - a;
                    if b >= -l {
                        out.push(Monomial { x: a, y: b, u: 0, v: 0, s: q as u32 });
                    }
                }
            }
        }
        out
    }
}

/// `x^x y^y u^u v^v s^s`; `x`, `y` may be negative in the Laurent ring.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub x: i32,
    pub y: i32,
    pub u: u32,
    pub v: u32,
    pub s: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0, u: 0, v: 0, s: 0 };

    pub fn x(e: i32) -> Self {
        Monomial { x: e, ..Self::ONE }
    }

    pub fn y(e: i32) -> Self {
        Monomial { y: e, ..Self::ONE }
    }

    pub fn u(e: u32) -> Self {
        Monomial { u: e, ..Self::ONE }
    }

    pub fn v(e: u32) -> Self {
        Monomial { v: e, ..Self::ONE }
    }

    pub fn s(e: u32) -> Self {
        Monomial { s: e, ..Self::ONE }
    }

    pub fn bideg(&self) -> Bideg {
        let s = self.s as i32;
        (self.x + self.y + s, self.u as i32 + self.v as i32 + s)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial { x: self.x + o.x, y: self.y + o.y, u: self.u + o.u, v: self.v + o.v, s: self.s + o.s }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (name, e) in [("x", self.x), ("y", self.y), ("u", self.u as i32), ("v", self.v as i32), ("s", self.s as i32)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// A ring element as a finite sum of monomials with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RingElem {
    terms: BTreeMap<Monomial, Rational>,
}

impl RingElem {
    pub fn zero() -> Self {
        RingElem::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), Monomial::ONE)
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        RingElem { terms }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Monomial::ONE)
    }

    pub fn var(m: Monomial) -> Self {
        Self::monomial(Rational::one(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Bidegree if homogeneous (zero counts as homogeneous of any degree).
    pub fn homogeneous_degree(&self) -> Option<Option<Bideg>> {
        let mut it = self.terms.keys().map(Monomial::bideg);
        let Some(first) = it.next() else { return Some(None) };
        it.all(|d| d == first).then_some(Some(first))
    }

    pub fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &RingElem) -> RingElem {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c);
        }
        r
    }

    pub fn neg(&self) -> RingElem {
        RingElem { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn sub(&self, o: &RingElem) -> RingElem {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> RingElem {
        let mut r = RingElem::zero();
        for (m, a) in &self.terms {
            r.add_term(*m, &(a * c));
        }
        r
    }

    pub fn mul_in(&self, o: &RingElem, ring: BaseRing) -> RingElem {
        let mut r = RingElem::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                if !ring.kills(&m) {
                    r.add_term(m, &(c1 * c2));
                }
            }
        }
        r
    }

    /// Drops the terms that vanish in `ring` (e.g. multiples of `xy`).
    pub fn reduce_in(&self, ring: BaseRing) -> RingElem {
        RingElem {
            terms: self.terms.iter().filter(|(m, _)| !ring.kills(m)).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// Substitutes numbers for `x` and `y`; needs nonnegative exponents of
    /// the remaining variables to be absent.
    pub fn eval_xy(&self, x: &Rational, y: &Rational) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            if m.u != 0 || m.v != 0 || m.s != 0 {
                return None;
            }
            let px = pow_int(x, m.x)?;
            let py = pow_int(y, m.y)?;
            acc += c * px * py;
        }
        Some(acc)
    }
}

impl RingElem {
    /// Substitutes a number for `y`, keeping the other variables.
    pub fn eval_y(&self, y: &Rational) -> Option<RingElem> {
        let mut out = RingElem::zero();
        for (m, c) in &self.terms {
            let py = pow_int(y, m.y)?;
            out.add_term(Monomial { y: 0, ..*m }, &(c * py));
        }
        Some(out)
    }

    /// Substitutes a number for `x`, keeping the other variables.
    pub fn eval_x(&self, x: &Rational) -> Option<RingElem> {
        let mut out = RingElem::zero();
        for (m, c) in &self.terms {
            let px = pow_int(x, m.x)?;
            out.add_term(Monomial { x: 0, ..*m }, &(c * px));
        }
        Some(out)
    }

    /// True when no variable appears with a negative exponent.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.x >= 0 && m.y >= 0)
    }

    /// Largest `k` with `x^k` dividing every term (`i32::MAX` for zero).
    pub fn x_order(&self) -> i32 {
        self.terms.keys().map(|m| m.x).min().unwrap_or(i32::MAX)
    }

    pub fn y_order(&self) -> i32 {
        self.terms.keys().map(|m| m.y).min().unwrap_or(i32::MAX)
    }
}

fn pow_int(a: &Rational, e: i32) -> Option<Rational> {
    if e >= 0 {
        Some(num_traits::pow(a.clone(), e as usize))
    } else if a.is_zero() {
        None
    } else {
        Some(num_traits::pow(a.recip(), (-e) as usize))
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for RingElem {
    type Err = Error;

    /// Parses sums such as `2*x^2 - 1/2*y*s + u`.
    fn from_str(src: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("ring element `{src}`: {msg}"));
        let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad("empty"));
        }
        let mut out = RingElem::zero();
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut prev: Option<char> = None;
        for ch in cleaned.chars() {
            if (ch == '+' || ch == '-') && prev.is_some_and(|p| p != '^' && p != '*') {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && prev.is_none() {
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        terms.push((neg, cur));
        for (neg, t) in terms {
            if t.is_empty() {
                return Err(bad("empty term"));
            }
            let mut coeff = Rational::one();
            let mut mono = Monomial::ONE;
            for factor in t.split('*') {
                if factor.is_empty() {
                    return Err(bad("empty factor"));
                }
                let first = factor.chars().next().unwrap();
                if first.is_ascii_digit() {
                    coeff *= parse_rational(factor).ok_or_else(|| bad("bad coefficient"))?;
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<i32>().map_err(|_| bad("bad exponent"))?),
                    None => (factor, 1),
                };
                let nonneg = || u32::try_from(exp).map_err(|_| bad("negative exponent"));
                match name {
                    "x" => mono.x += exp,
                    "y" => mono.y += exp,
                    "u" => mono.u += nonneg()?,
                    "v" => mono.v += nonneg()?,
                    "s" => mono.s += nonneg()?,
                    _ => return Err(bad(&format!("unknown variable `{name}`"))),
                }
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(mono, &coeff);
        }
        Ok(out)
    }
}

impl Serialize for RingElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RingElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A homogeneous map between free modules: entry `(i, j)` is the coefficient
/// of target generator `i` in the image of source generator `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<RingElem>,
}

impl RingMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RingMatrix { rows, cols, entries: vec![RingElem::zero(); rows * cols] }
    }

    pub fn scalar_identity(n: usize, e: &RingElem) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RingElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged ring matrix");
        RingMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn parse(rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| s.parse()).collect::<Result<Vec<RingElem>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_rows(rows))
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: RingElem) {
        self.entries[i * self.cols + j] = e;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingElem::is_zero)
    }

    pub fn add(&self, o: &RingMatrix) -> RingMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        RingMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &RingMatrix) -> RingMatrix {
        self.add(&o.map(RingElem::neg))
    }

    pub fn map(&self, f: impl Fn(&RingElem) -> RingElem) -> RingMatrix {
        RingMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn mul_in(&self, o: &RingMatrix, ring: BaseRing) -> RingMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = RingMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = RingElem::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul_in(o.get(k, j), ring));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Multiplies every entry by `e`.
    pub fn times(&self, e: &RingElem, ring: BaseRing) -> RingMatrix {
        self.map(|a| a.mul_in(e, ring))
    }

    pub fn block_diagonal(blocks: &[RingMatrix]) -> RingMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = RingMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn is_polynomial(&self) -> bool {
        self.entries.iter().all(RingElem::is_polynomial)
    }

    /// Evaluates at a point; `None` if some entry has a pole there.
    pub fn eval_xy(&self, x: &Rational, y: &Rational) -> Option<crate::linalg::ExactMatrix> {
        let mut out = crate::linalg::ExactMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).eval_xy(x, y)?);
            }
        }
        Some(out)
    }

    pub fn from_exact(m: &crate::linalg::ExactMatrix) -> RingMatrix {
        RingMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(|c| RingElem::constant(c.clone())).collect(),
        }
    }

    pub fn transpose(&self) -> RingMatrix {
        let mut out = RingMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> RingMatrix {
        let mut out = RingMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[RingMatrix]) -> RingMatrix {
        let cols = parts[0].cols;
        let mut entries = Vec::new();
        for p in parts {
            assert_eq!(p.cols, cols);
            entries.extend(p.entries.iter().cloned());
        }
        RingMatrix { rows: parts.iter().map(|p| p.rows).sum(), cols, entries }
    }

    pub fn hstack(parts: &[RingMatrix]) -> RingMatrix {
        let rows = parts[0].rows;
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = RingMatrix::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows);
            for i in 0..rows {
                for j in 0..p.cols {
                    out.set(i, c0 + j, p.get(i, j).clone());
                }
            }
            c0 += p.cols;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, q};

    #[test]
    fn monomial_counts() {
        assert_eq!(BaseRing::Crossing.monomials((0, 0), 0).len(), 1);
        assert_eq!(BaseRing::Crossing.monomials((2, 0), 0).len(), 2);
        assert_eq!(BaseRing::CrossingUv.monomials((1, 1), 0).len(), 4);
        // x^a y^b s^1 with a + b = 0, a, b >= -2
        assert_eq!(BaseRing::LaurentS.monomials((1, 1), 2).len(), 5);
    }

    #[test]
    fn xy_vanishes() {
        let x = RingElem::var(Monomial::x(1));
        let y = RingElem::var(Monomial::y(1));
        assert!(x.mul_in(&y, BaseRing::Crossing).is_zero());
        assert!(!x.mul_in(&y, BaseRing::LaurentS).is_zero());
    }

    #[test]
    fn parse_roundtrip() {
        let e: RingElem = "2*x^2 - 1/2*y*s + u - 3".parse().unwrap();
        assert_eq!(e.coeff(&Monomial::x(2)), int(2));
        assert_eq!(e.coeff(&Monomial { y: 1, s: 1, ..Monomial::ONE }), q(-1, 2));
        assert_eq!(e.coeff(&Monomial::ONE), int(-3));
        let back: RingElem = e.to_string().parse().unwrap();
        assert_eq!(back, e);
        let l: RingElem = "x^-1*s".parse().unwrap();
        assert_eq!(l.homogeneous_degree(), Some(Some((0, 1))));
        assert!("z".parse::<RingElem>().is_err());
    }

    #[test]
    fn evaluation() {
        let e: RingElem = "x^2 + 3*y - 1".parse().unwrap();
        assert_eq!(e.eval_xy(&int(2), &int(1)), Some(int(6)));
        let l: RingElem = "x^-1".parse().unwrap();
        assert_eq!(l.eval_xy(&int(0), &int(1)), None);
    }
}
