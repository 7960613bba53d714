use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::curve::{NodalCurve, Point};
use crate::error::{Error, Result};
use crate::linalg::rational::serde_rational_vec;
use crate::linalg::{ExactMatrix, QuotientPresentation, Rational, Subspace};

/// A polynomial in the affine coordinate `z`, coefficients in ascending
/// degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly(#[serde(with = "serde_rational_vec")] pub Vec<Rational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(vec![])
    }

    pub fn constant(c: Rational) -> Self {
        Poly(vec![c]).trimmed()
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect()).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }

    pub fn coeff(&self, k: i64) -> Rational {
        usize::try_from(k).ok().and_then(|k| self.0.get(k).cloned()).unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, p: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * p + c)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly(self.0.iter().map(|a| a * c).collect()).trimmed()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n as i64).map(|k| self.coeff(k) + o.coeff(k)).collect()).trimmed()
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trimmed()
    }
}

/// Matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolyMatrix(pub Vec<Vec<Poly>>);

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix(vec![vec![Poly::zero(); cols]; rows])
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &Rational::one())
    }

    pub fn scalar(n: usize, c: &Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.0[i][i] = Poly::constant(c.clone());
        }
        m
    }

    pub fn from_exact(m: &ExactMatrix) -> Self {
        PolyMatrix(
            (0..m.rows()).map(|i| (0..m.cols()).map(|j| Poly::constant(m.get(i, j).clone())).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.0.len()
    }

    pub fn cols(&self) -> usize {
        self.0.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.0[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(Poly::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolyMatrix(self.0.iter().map(|r| r.iter().map(|p| p.scale(c)).collect()).collect())
    }

    pub fn mul(&self, o: &PolyMatrix) -> PolyMatrix {
        let (n, k, m) = (self.rows(), self.cols(), o.cols());
        let mut out = Self::zeros(n, m);
        for i in 0..n {
            for j in 0..m {
                out.0[i][j] = (0..k).fold(Poly::zero(), |acc, l| acc.add(&self.0[i][l].mul(&o.0[l][j])));
            }
        }
        out
    }

    pub fn sub(&self, o: &PolyMatrix) -> PolyMatrix {
        let m1 = Rational::from_integer((-1).into());
        PolyMatrix(
            self.0
                .iter()
                .zip(&o.0)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(&y.scale(&m1))).collect())
                .collect(),
        )
    }

    pub fn eval(&self, p: &Rational) -> ExactMatrix {
        ExactMatrix::from_fn(self.rows(), self.cols(), |i, j| self.0[i][j].eval(p))
    }
}

/// A line bundle summand on one component: an integer degree, or on a
/// component of positive genus `O` or `K`. On positive genus a degree means
/// a general line bundle of that degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LineSummand {
    Degree(i64),
    Trivial,
    Canonical,
}

impl LineSummand {
    pub fn degree(self, genus: u32) -> i64 {
        match self {
            LineSummand::Degree(d) => d,
            LineSummand::Trivial => 0,
            LineSummand::Canonical => 2 * genus as i64 - 2,
        }
    }

    /// Normal form on a component of the given genus.
    pub fn normalize(self, genus: u32) -> Self {
        match (genus, self) {
            (0, s) => LineSummand::Degree(s.degree(0)),
            (1, LineSummand::Canonical) => LineSummand::Trivial,
            (_, s) => s,
        }
    }

    /// `(h⁰, h¹)` on a smooth curve of genus `g ≥ 1`. A bare degree stands
    /// for a general line bundle of that degree.
    pub fn cohomology(self, g: u32) -> (usize, usize) {
        let g64 = g as i64;
        match self.normalize(g) {
            LineSummand::Trivial => (1, g as usize),
            LineSummand::Canonical => (g as usize, 1),
            LineSummand::Degree(d) => {
                let chi = d + 1 - g64;
                let h0 = chi.max(0);
                (h0 as usize, (h0 - chi) as usize)
            }
        }
    }

    /// `L ⊗ K` on a component of genus `g` without special points.
    pub fn twist_canonical(self, g: u32) -> Self {
        match self.normalize(g) {
            LineSummand::Trivial => LineSummand::Canonical.normalize(g),
            LineSummand::Canonical => LineSummand::Degree(4 * g as i64 - 4).normalize(g),
            LineSummand::Degree(d) => LineSummand::Degree(d + 2 * g as i64 - 2),
        }
    }

    fn shift(self, k: i64) -> Self {
        match self {
            LineSummand::Degree(d) => LineSummand::Degree(d + k),
            s if k == 0 => s,
            _ => unreachable!("only rational components are twisted"),
        }
    }
}

impl fmt::Display for LineSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineSummand::Degree(d) => write!(f, "{d}"),
            LineSummand::Trivial => f.write_str("O"),
            LineSummand::Canonical => f.write_str("K"),
        }
    }
}

impl Serialize for LineSummand {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LineSummand::Degree(d) => s.serialize_i64(*d),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for LineSummand {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(LineSummand::Degree(n)),
            Raw::Str(s) if s == "O" => Ok(LineSummand::Trivial),
            Raw::Str(s) if s == "K" => Ok(LineSummand::Canonical),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("unknown line bundle class `{s}`"))),
        }
    }
}

/// A vector bundle on a nodal curve: split on each component, glued at the
/// nodes, with a subspace condition on the fiber at each marking.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafOnNodalCurve {
    pub rank: usize,
    pub summands: Vec<Vec<LineSummand>>,
    /// Per node: the fiber at branch `a` to the fiber at branch `b`.
    #[serde(default)]
    pub gluing: Vec<ExactMatrix>,
    /// Per marking: allowed fiber values; the full space when unconstrained.
    #[serde(default, skip_serializing_if = "all_full")]
    pub conditions: Vec<Subspace>,
}

fn all_full(c: &[Subspace]) -> bool {
    c.iter().all(Subspace::is_full)
}

impl SheafOnNodalCurve {
    /// `⊕ O(d_i)` on every component with identity gluing.
    pub fn split(curve: &NodalCurve, per_component: Vec<Vec<i64>>) -> Self {
        let rank = per_component.first().map_or(0, Vec::len);
        SheafOnNodalCurve {
            rank,
            summands: per_component
                .into_iter()
                .map(|v| v.into_iter().map(LineSummand::Degree).collect())
                .collect(),
            gluing: vec![ExactMatrix::identity(rank); curve.nodes.len()],
            conditions: vec![Subspace::full(rank); curve.markings.len()],
        }
    }

    pub fn validate(&self, curve: &NodalCurve) -> Result<()> {
        let err = |m: String| Error::InvalidCurve(m);
        if self.summands.len() != curve.components.len() {
            return Err(err(format!("{} summand lists for {} components", self.summands.len(), curve.components.len())));
        }
        for (c, s) in self.summands.iter().enumerate() {
            if s.len() != self.rank {
                return Err(err(format!("component {c} has {} summands, rank is {}", s.len(), self.rank)));
            }
            if curve.components[c].genus == 0 && s.iter().any(|l| !matches!(l, LineSummand::Degree(_))) {
                return Err(err(format!("component {c} is rational; give integer degrees")));
            }
        }
        if self.gluing.len() != curve.nodes.len() || self.conditions.len() != curve.markings.len() {
            return Err(err("gluing and conditions must match nodes and markings".into()));
        }
        if self.gluing.iter().any(|g| g.rows() != self.rank || !g.is_invertible()) {
            return Err(err("gluing matrices must be invertible".into()));
        }
        if self.conditions.iter().any(|s| s.ambient_dim() != self.rank) {
            return Err(err("marking conditions live in the fiber".into()));
        }
        Ok(())
    }

    pub fn degree(&self, curve: &NodalCurve) -> i64 {
        self.summands
            .iter()
            .zip(&curve.components)
            .map(|(s, c)| s.iter().map(|l| l.degree(c.genus)).sum::<i64>())
            .sum()
    }

    pub fn max_abs_degree(&self) -> i64 {
        self.summands.iter().flatten().map(|l| l.degree(1).abs()).max().unwrap_or(0)
    }

    /// Twists the summands on component `c` by `O(k·p)` at a point `p` of
    /// it, in the frame `(local coordinate)^{-k}` at `p`. Values at other
    /// finite points of `c` pick up `(q - p)^k`; the node gluings and the
    /// (scale-invariant) conditions are updated to match.
    pub fn twist_at(&mut self, curve: &NodalCurve, c: usize, p: &Point, k: i64) {
        if k == 0 {
            return;
        }
        for l in &mut self.summands[c] {
            *l = l.shift(k);
        }
        let Point::Finite(p0) = p else { return };
        let factor = |q: &Point| -> Option<Rational> {
            match q {
                Point::Finite(q) if q != p0 => Some(pow(&(q - p0), k)),
                _ => None,
            }
        };
        for (n, node) in curve.nodes.iter().enumerate() {
            if node.a.component == c {
                if let Some(s) = factor(&node.a.point) {
                    self.gluing[n] = self.gluing[n].scale(&s.recip());
                }
            }
            if node.b.component == c {
                if let Some(s) = factor(&node.b.point) {
                    self.gluing[n] = self.gluing[n].scale(&s);
                }
            }
        }
    }

    /// `⊗ O(Σ k_c D_c)|_Z` where `D_c` are the components of the special
    /// fiber: each node on `D_c` towards another component contributes
    /// `-k_c` on `D_c` and `+k_c` on the other branch.
    pub fn twist_vertical(&mut self, curve: &NodalCurve, k: &[i64]) {
        for node in &curve.nodes {
            let (a, b) = (&node.a, &node.b);
            if a.component == b.component {
                continue;
            }
            let shift = k[b.component] - k[a.component];
            self.twist_at(curve, a.component, &a.point, shift);
            self.twist_at(curve, b.component, &b.point, -shift);
        }
    }
}

fn pow(x: &Rational, k: i64) -> Rational {
    let base = if k < 0 { x.recip() } else { x.clone() };
    (0..k.unsigned_abs()).fold(Rational::one(), |acc, _| acc * &base)
}

/// A morphism of sheaves on a nodal curve: one polynomial matrix per
/// component, entry `(i, j)` a map `O(d_j) → O(d'_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SheafMap {
    pub blocks: Vec<PolyMatrix>,
}

impl SheafMap {
    pub fn zero(curve: &NodalCurve, rows: usize, cols: usize) -> Self {
        SheafMap { blocks: vec![PolyMatrix::zeros(rows, cols); curve.components.len()] }
    }

    pub fn constant(curve: &NodalCurve, m: &ExactMatrix) -> Self {
        SheafMap { blocks: vec![PolyMatrix::from_exact(m); curve.components.len()] }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(PolyMatrix::is_zero)
    }

    pub fn compose(&self, first: &SheafMap) -> SheafMap {
        SheafMap { blocks: self.blocks.iter().zip(&first.blocks).map(|(a, b)| a.mul(b)).collect() }
    }

    /// The map on fibers at `p ∈ C_c`, in the frames of the two sheaves.
    pub fn at(&self, c: usize, p: &Point, source: &SheafOnNodalCurve, target: &SheafOnNodalCurve) -> ExactMatrix {
        let m = &self.blocks[c];
        match p {
            Point::Finite(p) => m.eval(p),
            Point::Infinity => ExactMatrix::from_fn(m.rows(), m.cols(), |i, j| {
                let gap = target.summands[c][i].degree(0) - source.summands[c][j].degree(0);
                m.get(i, j).coeff(gap)
            }),
        }
    }

    pub fn validate(&self, curve: &NodalCurve, source: &SheafOnNodalCurve, target: &SheafOnNodalCurve) -> Result<()> {
        let err = |m: String| Error::InvalidCurve(m);
        if self.blocks.len() != curve.components.len() {
            return Err(err("one block per component".into()));
        }
        for (c, m) in self.blocks.iter().enumerate() {
            if m.rows() != target.rank || (target.rank > 0 && m.cols() != source.rank) {
                return Err(err(format!("block {c} has the wrong shape")));
            }
            let g = curve.components[c].genus;
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let p = m.get(i, j);
                    if p.is_zero() {
                        continue;
                    }
                    let (si, sj) = (target.summands[c][i], source.summands[c][j]);
                    if g > 0 {
                        if p.degree() != Some(0) || si.normalize(g) != sj.normalize(g) {
                            return Err(err(format!(
                                "component {c}: only scalars between equal classes on a genus-{g} component"
                            )));
                        }
                    } else if p.degree().unwrap_or(0) as i64 > si.degree(0) - sj.degree(0) {
                        return Err(err(format!(
                            "component {c}, entry ({i}, {j}): degree {:?} exceeds {}",
                            p.degree(),
                            si.degree(0) - sj.degree(0)
                        )));
                    }
                }
            }
        }
        for (n, node) in curve.nodes.iter().enumerate() {
            let ma = self.at(node.a.component, &node.a.point, source, target);
            let mb = self.at(node.b.component, &node.b.point, source, target);
            if &target.gluing[n] * &ma != &mb * &source.gluing[n] {
                return Err(err(format!("map is not compatible with the gluing at node {n}")));
            }
        }
        for (i, mk) in curve.markings.iter().enumerate() {
            let m = self.at(mk.component, &mk.point, source, target);
            if !target.conditions[i].contains_subspace(&source.conditions[i].image_under(&m)) {
                return Err(err(format!("map does not respect the condition at marking {i}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
enum Block {
    Rational { d: i64, u0: usize, u1: usize, cech: usize },
    Abstract { h0: usize, h1: usize, c0: usize, c1: usize },
}

/// A finite cochain complex `C⁰ → C¹` computing `RΓ` of a sheaf: the
/// truncated Čech complex of each rational summand for `{z ≠ ∞, z ≠ 0}`,
/// coned off against the node and marking conditions.
#[derive(Clone, Debug)]
pub struct SheafModel {
    pub bound: i64,
    pub dim0: usize,
    pub dim1: usize,
    pub d: ExactMatrix,
    blocks: Vec<Vec<Block>>,
    node_rows: Vec<usize>,
    marking_rows: Vec<(usize, ExactMatrix, ExactMatrix)>,
}

fn exps(lo: i64, hi: i64) -> usize {
    (hi - lo + 1).max(0) as usize
}

impl SheafModel {
    pub fn new(curve: &NodalCurve, sheaf: &SheafOnNodalCurve, bound: i64) -> Result<Self> {
        sheaf.validate(curve)?;
        let b = bound;
        let (mut dim0, mut dim1) = (0, 0);
        let mut blocks = Vec::new();
        for (c, comp) in curve.components.iter().enumerate() {
            let mut row = Vec::new();
            for l in &sheaf.summands[c] {
                if comp.genus > 0 {
                    let (h0, h1) = l.cohomology(comp.genus);
                    row.push(Block::Abstract { h0, h1, c0: dim0, c1: dim1 });
                    dim0 += h0;
                    dim1 += h1;
                } else {
                    let d = l.degree(0);
                    if d.abs() >= b {
                        return Err(Error::InvalidWindow(format!("Čech bound {b} too small for degree {d}")));
                    }
                    row.push(Block::Rational { d, u0: dim0, u1: dim0 + exps(0, d + b), cech: dim1 });
                    dim0 += exps(0, d + b) + exps(-b, d);
                    dim1 += exps(-b, d + b);
                }
            }
            blocks.push(row);
        }
        let r = sheaf.rank;
        let mut node_rows = Vec::new();
        for _ in &curve.nodes {
            node_rows.push(dim1);
            dim1 += r;
        }
        let mut marking_rows = Vec::new();
        for s in &sheaf.conditions {
            let q = s.annihilator();
            let lift = right_inverse(&q);
            marking_rows.push((dim1, q.clone(), lift));
            dim1 += q.rows();
        }
        let mut model = SheafModel {
            bound,
            dim0,
            dim1,
            d: ExactMatrix::zeros(dim1, dim0),
            blocks,
            node_rows,
            marking_rows,
        };
        let mut d = ExactMatrix::zeros(dim1, dim0);
        let one = Rational::one();
        for row in &model.blocks {
            for blk in row {
                if let Block::Rational { d: deg, u0, u1, cech } = *blk {
                    for k in 0..=deg + b {
                        d.set(cech + (k + b) as usize, u0 + k as usize, -one.clone());
                    }
                    for k in -b..=deg {
                        d.set(cech + (k + b) as usize, u1 + (k + b) as usize, one.clone());
                    }
                }
            }
        }
        for (n, node) in curve.nodes.iter().enumerate() {
            let ea = model.evaluation(sheaf, node.a.component, &node.a.point);
            let eb = model.evaluation(sheaf, node.b.component, &node.b.point);
            let rows = &eb - &(&sheaf.gluing[n] * &ea);
            for i in 0..r {
                for j in 0..dim0 {
                    d.set(model.node_rows[n] + i, j, rows.get(i, j).clone());
                }
            }
        }
        for (m, mk) in curve.markings.iter().enumerate() {
            let (off, q, _) = &model.marking_rows[m];
            let rows = q * &model.evaluation(sheaf, mk.component, &mk.point);
            for i in 0..rows.rows() {
                for j in 0..dim0 {
                    d.set(off + i, j, rows.get(i, j).clone());
                }
            }
        }
        model.d = d;
        Ok(model)
    }

    /// `C⁰ → E_p` for a point `p` of a rational component.
    pub fn evaluation(&self, sheaf: &SheafOnNodalCurve, c: usize, p: &Point) -> ExactMatrix {
        let mut e = ExactMatrix::zeros(sheaf.rank, self.dim0);
        for (i, blk) in self.blocks[c].iter().enumerate() {
            let Block::Rational { d, u0, u1, .. } = *blk else {
                unreachable!("validated: special points lie on rational components")
            };
            match p {
                Point::Finite(p) => {
                    let mut pk = Rational::one();
                    for k in 0..=d + self.bound {
                        e.set(i, u0 + k as usize, pk.clone());
                        pk *= p;
                    }
                }
                Point::Infinity => e.set(i, u1 + (d + self.bound) as usize, Rational::one()),
            }
        }
        e
    }

    /// The cochain map induced by a sheaf map, as `(C⁰ map, C¹ map)`.
    pub fn map_to(
        &self,
        target: &SheafModel,
        curve: &NodalCurve,
        f: &SheafMap,
        source_sheaf: &SheafOnNodalCurve,
        target_sheaf: &SheafOnNodalCurve,
    ) -> Result<(ExactMatrix, ExactMatrix)> {
        f.validate(curve, source_sheaf, target_sheaf)?;
        if self.bound != target.bound {
            return Err(Error::InvalidWindow("models must share the Čech bound".into()));
        }
        let b = self.bound;
        let mut m0 = ExactMatrix::zeros(target.dim0, self.dim0);
        let mut m1 = ExactMatrix::zeros(target.dim1, self.dim1);
        for (c, block) in f.blocks.iter().enumerate() {
            for i in 0..target_sheaf.rank {
                for j in 0..source_sheaf.rank {
                    let p = block.get(i, j);
                    if p.is_zero() {
                        continue;
                    }
                    match (self.blocks[c][j], target.blocks[c][i]) {
                        (Block::Rational { d: dj, u0, u1, cech }, Block::Rational { u0: t0, u1: t1, cech: tc, .. }) => {
                            for (m, coeff) in p.0.iter().enumerate() {
                                let m = m as i64;
                                for k in 0..=dj + b {
                                    add_to(&mut m0, t0 + (k + m) as usize, u0 + k as usize, coeff);
                                }
                                for k in -b..=dj {
                                    add_to(&mut m0, t1 + (k + m + b) as usize, u1 + (k + b) as usize, coeff);
                                }
                                for k in -b..=dj + b {
                                    add_to(&mut m1, tc + (k + m + b) as usize, cech + (k + b) as usize, coeff);
                                }
                            }
                        }
                        (Block::Abstract { h0, h1, c0, c1 }, Block::Abstract { c0: t0, c1: t1, .. }) => {
                            let lambda = p.coeff(0);
                            for k in 0..h0 {
                                add_to(&mut m0, t0 + k, c0 + k, &lambda);
                            }
                            for k in 0..h1 {
                                add_to(&mut m1, t1 + k, c1 + k, &lambda);
                            }
                        }
                        _ => unreachable!("same component"),
                    }
                }
            }
        }
        for (n, node) in curve.nodes.iter().enumerate() {
            let mb = f.at(node.b.component, &node.b.point, source_sheaf, target_sheaf);
            set_block(&mut m1, target.node_rows[n], self.node_rows[n], &mb);
        }
        for (k, mk) in curve.markings.iter().enumerate() {
            let m = f.at(mk.component, &mk.point, source_sheaf, target_sheaf);
            let (src_off, _, lift) = &self.marking_rows[k];
            let (tgt_off, q, _) = &target.marking_rows[k];
            let induced = &(q * &m) * lift;
            set_block(&mut m1, *tgt_off, *src_off, &induced);
        }
        debug_assert_eq!(&target.d * &m0, &m1 * &self.d);
        Ok((m0, m1))
    }
}

fn add_to(m: &mut ExactMatrix, i: usize, j: usize, c: &Rational) {
    let v = m.get(i, j) + c;
    m.set(i, j, v);
}

fn set_block(m: &mut ExactMatrix, row: usize, col: usize, block: &ExactMatrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            m.set(row + i, col + j, block.get(i, j).clone());
        }
    }
}

/// A right inverse of a matrix with independent rows.
pub(crate) fn right_inverse(q: &ExactMatrix) -> ExactMatrix {
    let n = q.cols();
    let cols: Vec<Vec<Rational>> = (0..q.rows())
        .map(|i| {
            let mut e = vec![Rational::zero(); q.rows()];
            e[i] = Rational::one();
            q.solve(&e).expect("independent rows")
        })
        .collect();
    if cols.is_empty() {
        ExactMatrix::zeros(n, 0)
    } else {
        ExactMatrix::from_columns(n, &cols)
    }
}

/// A Čech bound that works for all the given sheaves.
pub fn common_bound(sheaves: &[&SheafOnNodalCurve]) -> i64 {
    sheaves.iter().map(|s| s.max_abs_degree()).max().unwrap_or(0) + 1
}

/// `H⁰` and `H¹` with bases: `H⁰` as a subspace of `C⁰`, `H¹` as a
/// quotient of `C¹`.
#[derive(Clone, Debug)]
pub struct CurveCohomology {
    pub h0: Subspace,
    pub h1: QuotientPresentation,
}

impl CurveCohomology {
    pub fn dims(&self) -> (usize, usize) {
        (self.h0.dim(), self.h1.dim())
    }
}

pub fn curve_cohomology(curve: &NodalCurve, sheaf: &SheafOnNodalCurve) -> Result<CurveCohomology> {
    curve.validate()?;
    let model = SheafModel::new(curve, sheaf, common_bound(&[sheaf]))?;
    let h0 = model.d.kernel();
    let h1 = QuotientPresentation::new(Subspace::full(model.dim1), model.d.image())?;
    Ok(CurveCohomology { h0, h1 })
}
