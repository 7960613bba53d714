use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::lattice::{constant_part, eval_matrix, Coord, Lattice};
use super::monodromy::MonodromyDatum;
use crate::error::{Error, Result};
use crate::graded::ring::{BaseRing, Monomial, RingMatrix};
use crate::linalg::rational::{floor_i64, frac, serde_rational, serde_rational_vec};
use crate::linalg::{induced_map, ExactMatrix, QuotientPresentation, Rational, Subspace};
use crate::nilpotent::{
    graded_endomorphism, rank_sequence, weight_filtration, Flag, NilpotentEndo, WeightFiltration,
};

const RING: BaseRing = BaseRing::LaurentS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Horizontal,
    Vertical,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorComponent {
    pub id: String,
    pub kind: ComponentKind,
}

/// Global bookkeeping of the divisor `D = D_V + D_H` of a family over a
/// disk with base coordinate `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorModel {
    pub components: Vec<DivisorComponent>,
    pub crossings: Vec<(String, String)>,
    #[serde(default = "default_base")]
    pub base_coordinate: String,
}

fn default_base() -> String {
    "t".into()
}

impl DivisorModel {
    pub fn kind(&self, id: &str) -> Option<ComponentKind> {
        self.components.iter().find(|c| c.id == id).map(|c| c.kind)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for c in &self.components {
            if !seen.insert(c.id.as_str()) {
                return Err(Error::InvalidChart(format!("component `{}` listed twice", c.id)));
            }
        }
        for (a, b) in &self.crossings {
            let (ka, kb) = match (self.kind(a), self.kind(b)) {
                (Some(ka), Some(kb)) => (ka, kb),
                _ => return Err(Error::InvalidChart(format!("crossing {a}-{b} names an unknown component"))),
            };
            if a == b {
                return Err(Error::InvalidChart(format!("component `{a}` crosses itself")));
            }
            if ka == ComponentKind::Horizontal && kb == ComponentKind::Horizontal {
                return Err(Error::InvalidChart(format!("horizontal components `{a}` and `{b}` meet")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartComponent {
    pub id: String,
    pub kind: ComponentKind,
    /// The component is `{coord = 0}`.
    pub coord: Coord,
}

/// The base function in a surface chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseDirection {
    /// `t = y`
    Y,
    /// `t = xy` at a crossing of two vertical components.
    Xy,
}

/// A locally abelian parabolic Higgs bundle near the origin of a chart with
/// coordinates `x` (and `y`). The frame `e_g` spans the parabolic line `g`
/// at its own weights; `φ = φ_x ω_x + φ_y ω_y` with `ω = dz/z` along divisor
/// coordinates and `ω = dz` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolicChart {
    pub rank: usize,
    pub dim: usize,
    pub components: Vec<ChartComponent>,
    #[serde(default)]
    pub base: Option<BaseDirection>,
    /// `weights[g][k]`: weight of line `g` along component `k`, in `[0, 1)`.
    pub weights: Vec<LineWeights>,
    pub phi_x: RingMatrix,
    pub phi_y: RingMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LineWeights(#[serde(with = "serde_rational_vec")] pub Vec<Rational>);

impl ParabolicChart {
    pub fn component_index(&self, id: &str) -> Result<usize> {
        self.components
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::InvalidChart(format!("no component `{id}` in this chart")))
    }

    pub fn component_on(&self, c: Coord) -> Option<usize> {
        self.components.iter().position(|k| k.coord == c)
    }

    pub fn horizontal(&self) -> Option<usize> {
        self.components.iter().position(|k| k.kind == ComponentKind::Horizontal)
    }

    pub fn is_log(&self, c: Coord) -> bool {
        self.component_on(c).is_some()
    }

    pub fn phi(&self, c: Coord) -> &RingMatrix {
        match c {
            Coord::X => &self.phi_x,
            Coord::Y => &self.phi_y,
        }
    }

    pub fn weight(&self, g: usize, k: usize) -> &Rational {
        &self.weights[g].0[k]
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.rank;
        let err = |path: &str, message: String| Error::Validation { path: path.into(), message };
        if !(1..=2).contains(&self.dim) {
            return Err(err("dim", "charts are curves or surfaces".into()));
        }
        if self.components.len() > 2 {
            return Err(err("components", "at most two local components".into()));
        }
        let coords: BTreeSet<Coord> = self.components.iter().map(|c| c.coord).collect();
        if coords.len() != self.components.len() {
            return Err(err("components", "two components on one coordinate".into()));
        }
        let horizontal = self.components.iter().filter(|c| c.kind == ComponentKind::Horizontal).count();
        if horizontal > 1 {
            return Err(Error::InvalidChart("horizontal components meet".into()));
        }
        if self.dim == 1 {
            if coords.contains(&Coord::Y) || self.base.is_some() || !self.phi_y.is_zero() {
                return Err(err("dim", "a curve chart only has the coordinate x".into()));
            }
            if self.components.iter().any(|c| c.kind == ComponentKind::Vertical) {
                return Err(Error::InvalidChart("vertical components need a surface chart".into()));
            }
        }
        for c in &self.components {
            if c.kind == ComponentKind::Vertical {
                let divides = match self.base {
                    Some(BaseDirection::Y) => c.coord == Coord::Y,
                    Some(BaseDirection::Xy) => true,
                    None => false,
                };
                if !divides {
                    return Err(Error::InvalidChart(format!("vertical component `{}` is not in t = 0", c.id)));
                }
            }
        }
        if self.base == Some(BaseDirection::Y)
            && self.components.iter().any(|c| c.kind == ComponentKind::Horizontal && c.coord == Coord::Y)
        {
            return Err(Error::InvalidChart("a horizontal component cannot lie in t = 0".into()));
        }
        if self.base == Some(BaseDirection::Xy)
            && !(self.components.len() == 2 && self.components.iter().all(|c| c.kind == ComponentKind::Vertical))
        {
            return Err(Error::InvalidChart("t = xy needs two vertical components".into()));
        }
        if self.dim == 2 && self.base.is_none() {
            return Err(err("base", "a surface chart needs a base direction".into()));
        }
        if self.weights.len() != r {
            return Err(err("weights", format!("expected {r} lines")));
        }
        let zero = Rational::zero();
        let one = Rational::from_integer(1.into());
        for (g, w) in self.weights.iter().enumerate() {
            if w.0.len() != self.components.len() {
                return Err(err(&format!("weights[{g}]"), "one weight per component".into()));
            }
            if w.0.iter().any(|b| *b < zero || *b >= one) {
                return Err(err(&format!("weights[{g}]"), "weights lie in [0, 1)".into()));
            }
        }
        for (name, m) in [("phi_x", &self.phi_x), ("phi_y", &self.phi_y)] {
            if m.rows != r || m.cols != r {
                return Err(err(name, format!("expected a {r}x{r} matrix")));
            }
            for e in &m.entries {
                if !e.is_polynomial() || e.terms().any(|(m, _)| m.u != 0 || m.v != 0 || m.s != 0) {
                    return Err(err(name, format!("{e} is not a polynomial in x, y")));
                }
                if self.dim == 1 && e.terms().any(|(m, _)| m.y != 0) {
                    return Err(err(name, "curve charts only use x".into()));
                }
            }
        }
        self.check_logarithmic()?;
        let comm = self.phi_x.mul_in(&self.phi_y, RING).sub(&self.phi_y.mul_in(&self.phi_x, RING));
        if !comm.is_zero() {
            return Err(Error::NotCommuting("φ ∧ φ != 0".into()));
        }
        Ok(())
    }

    /// `φ` preserves `E_β` for every `β`: it suffices to test one level in
    /// each chamber of a period.
    fn check_logarithmic(&self) -> Result<()> {
        let chambers: Vec<Vec<Rational>> = (0..self.components.len())
            .map(|k| {
                let set: BTreeSet<Rational> = self.weights.iter().map(|w| w.0[k].clone()).collect();
                set.into_iter().collect()
            })
            .collect();
        let mut betas: Vec<Vec<Rational>> = vec![vec![]];
        for ch in &chambers {
            betas = betas
                .into_iter()
                .flat_map(|b| {
                    ch.iter().map(move |w| {
                        let mut b = b.clone();
                        b.push(w.clone());
                        b
                    })
                })
                .collect();
        }
        for beta in &betas {
            for c in [Coord::X, Coord::Y] {
                if !self.in_frame(self.phi(c), beta).is_polynomial() {
                    return Err(Error::InvalidChart(format!(
                        "φ_{} does not preserve E_β at β = {:?}",
                        c.name(),
                        beta.iter().map(|b| b.to_string()).collect::<Vec<_>>()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Exponents `n_g(β_k) = -⌊β_k - w_{g,k}⌋`, as monomials: the frame of
    /// `E_β` is `f_g = z^{n_g} e_g`.
    pub fn level_frame(&self, beta: &[Rational]) -> Vec<Monomial> {
        (0..self.rank)
            .map(|g| {
                let mut m = Monomial::ONE;
                for (k, comp) in self.components.iter().enumerate() {
                    let n = -floor_i64(&(&beta[k] - self.weight(g, k))) as i32;
                    m = m.mul(&comp.coord.monomial(n));
                }
                m
            })
            .collect()
    }

    /// `D^{-1} M D` for the frame `D` of `E_β`.
    pub fn in_frame(&self, m: &RingMatrix, beta: &[Rational]) -> RingMatrix {
        let frame = Lattice::diagonal(&self.level_frame(beta));
        frame.inverse().mul_in(&m.mul_in(frame.basis(), RING), RING)
    }

    /// `α(a)`: `a` along vertical components, `0` along horizontal ones.
    pub fn alpha(&self, a: &Rational) -> Vec<Rational> {
        self.components
            .iter()
            .map(|c| match c.kind {
                ComponentKind::Vertical => a.clone(),
                ComponentKind::Horizontal => Rational::zero(),
            })
            .collect()
    }

    /// Distinct weights along component `k` with multiplicities.
    pub fn jumps(&self, k: usize) -> Vec<(Rational, usize)> {
        let mut out: Vec<(Rational, usize)> = Vec::new();
        let mut ws: Vec<Rational> = self.weights.iter().map(|w| w.0[k].clone()).collect();
        ws.sort();
        for w in ws {
            match out.last_mut() {
                Some((last, n)) if *last == w => *n += 1,
                _ => out.push((w, 1)),
            }
        }
        out
    }

    pub fn monodromy(&self, k: usize) -> Vec<MonodromyDatum> {
        self.jumps(k).into_iter().map(|(w, n)| MonodromyDatum::new(w, n)).collect()
    }

    /// Lines jumping at level `b` along component `k`.
    pub fn jump_lines(&self, k: usize, b: &Rational) -> Vec<usize> {
        (0..self.rank).filter(|&g| frac(&(self.weight(g, k) - b)).is_zero()).collect()
    }
}

/// `E_β` as a lattice in the frame `e`.
pub fn level_representative(chart: &ParabolicChart, beta: &[Rational]) -> Result<Lattice> {
    if beta.len() != chart.components.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {} components",
            beta.len(),
            chart.components.len()
        )));
    }
    Ok(Lattice::diagonal(&chart.level_frame(beta)))
}

/// `Gr_{k,b} = E_β / E_{β-εδ^k}` at one point of the component `k`, with
/// the induced residue of `φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    pub component: String,
    pub level: Rational,
    /// Value of the other coordinate at the sample point.
    pub point: Rational,
    pub lines: Vec<usize>,
    pub space: QuotientPresentation,
    pub residue: NilpotentEndo,
    pub residual_parabolic: Vec<Rational>,
    /// At a crossing with another divisor component: the filtration of the
    /// fiber induced by the parabolic structure along that component.
    pub crossing_flag: Option<Flag>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedSummary {
    pub component: String,
    #[serde(with = "serde_rational")]
    pub level: Rational,
    pub dim: usize,
    pub jordan_type: Vec<usize>,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn summary(&self) -> GradedSummary {
        GradedSummary {
            component: self.component.clone(),
            level: self.level.clone(),
            dim: self.dim(),
            jordan_type: rank_sequence(&self.residue).jordan_type(),
        }
    }
}

pub fn graded_piece(chart: &ParabolicChart, k: &str, b: &Rational, point: &Rational) -> Result<GradedPiece> {
    let ki = chart.component_index(k)?;
    let comp = &chart.components[ki];
    let other = comp.coord.other();
    let oi = chart.component_on(other);
    let mut beta = vec![Rational::zero(); chart.components.len()];
    beta[ki] = b.clone();
    let m = chart.in_frame(chart.phi(comp.coord), &beta);
    let zero = Rational::zero();
    let at_divisor = eval_matrix(&m, comp.coord, &zero)
        .ok_or_else(|| Error::InvalidChart(format!("φ has a pole along `{k}`")))?;
    let at_point = if chart.dim == 2 {
        eval_matrix(&at_divisor, other, point)
            .ok_or_else(|| Error::InvalidChart(format!("φ has a pole at {} = {point}", other.name())))?
    } else {
        at_divisor
    };
    let full = constant_part(&at_point).expect("all variables specialised");
    let r = chart.rank;
    let lines = chart.jump_lines(ki, b);
    let unit = |g: usize| {
        let mut v = vec![Rational::zero(); r];
        v[g] = Rational::from_integer(1.into());
        v
    };
    let rest: Vec<Vec<Rational>> = (0..r).filter(|g| !lines.contains(g)).map(unit).collect();
    let space = QuotientPresentation::new(Subspace::full(r), Subspace::span(r, &rest))?;
    let residue_matrix = induced_map(&full, &space, &space)?;
    let residue = NilpotentEndo::new(residue_matrix).map_err(|_| {
        Error::NilpotenceViolated(format!("residue of φ along `{k}` at level {b} is not nilpotent"))
    })?;
    let residual_parabolic = match oi {
        Some(o) => {
            let mut w: Vec<Rational> = lines.iter().map(|&g| chart.weight(g, o).clone()).collect();
            w.sort();
            w
        }
        None => vec![],
    };
    let crossing_flag = match oi {
        Some(o) if chart.dim == 2 && point.is_zero() => {
            // frame level 0 along the other component: shifted weights in (-1, 0]
            let shifted: Vec<Rational> = lines
                .iter()
                .map(|&g| {
                    let w = chart.weight(g, o);
                    if w.is_zero() {
                        w.clone()
                    } else {
                        w - Rational::from_integer(1.into())
                    }
                })
                .collect();
            let levels: BTreeSet<Rational> = shifted.iter().cloned().collect();
            let mut steps = Vec::new();
            for c in &levels {
                let vs: Vec<Vec<Rational>> = lines
                    .iter()
                    .zip(&shifted)
                    .filter(|(_, s)| *s <= c)
                    .map(|(&g, _)| space.reduce(&unit(g)))
                    .collect::<Result<_>>()?;
                steps.push(Subspace::span(space.dim(), &vs));
            }
            Some(if steps.is_empty() { Flag::trivial(0) } else { Flag::new(steps)? })
        }
        _ => None,
    };
    Ok(GradedPiece {
        component: k.to_string(),
        level: b.clone(),
        point: point.clone(),
        lines,
        space,
        residue,
        residual_parabolic,
        crossing_flag,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstancyReport {
    pub reference: Vec<usize>,
    /// Rank sequence per sample (of `Gr^F(N)` at crossing samples).
    pub sequences: Vec<Vec<usize>>,
    pub pass: bool,
    pub note: Option<String>,
}

/// Compares the conjugacy class of the residue along one component at one
/// level across sample points.
pub fn constancy_audit(samples: &[GradedPiece]) -> ConstancyReport {
    let Some(first) = samples.first() else {
        return ConstancyReport { reference: vec![], sequences: vec![], pass: true, note: None };
    };
    if samples.iter().any(|s| s.component != first.component || s.level != first.level) {
        return ConstancyReport {
            reference: vec![],
            sequences: vec![],
            pass: false,
            note: Some("samples mix components or levels".into()),
        };
    }
    let mut sequences = Vec::new();
    for s in samples {
        let seq = match &s.crossing_flag {
            Some(flag) => match graded_endomorphism(&s.residue, flag) {
                Ok(g) => rank_sequence(&g).trimmed(),
                Err(e) => {
                    return ConstancyReport {
                        reference: vec![],
                        sequences,
                        pass: false,
                        note: Some(format!("residue does not preserve the crossing flag: {e}")),
                    }
                }
            },
            None => rank_sequence(&s.residue).trimmed(),
        };
        sequences.push(seq);
    }
    let reference = samples
        .iter()
        .zip(&sequences)
        .find(|(s, _)| s.crossing_flag.is_none())
        .map(|(_, q)| q.clone())
        .unwrap_or_else(|| sequences[0].clone());
    let pass = sequences.iter().all(|q| *q == reference);
    ConstancyReport { reference, sequences, pass, note: None }
}

/// `W_ℓ(H, E_{α(a)})`: preimages in `E_{α(a)}` of the monodromy weight
/// filtration of the residue on `Gr_{h,0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorizontalFiltration {
    pub base: Lattice,
    pub horizontal: Option<Coord>,
    /// `W(N)` on the graded piece, in frame coordinates of its lines.
    pub graded: Option<WeightFiltration>,
    lines: Vec<usize>,
}

impl HorizontalFiltration {
    pub fn max_weight(&self) -> i32 {
        self.graded.as_ref().map_or(0, WeightFiltration::max_weight)
    }

    pub fn level(&self, l: i32) -> Lattice {
        let (Some(h), Some(w)) = (self.horizontal, &self.graded) else {
            return self.base.clone();
        };
        let r = self.base.rank();
        let mut vs: Vec<Vec<Rational>> = (0..r)
            .filter(|g| !self.lines.contains(g))
            .map(|g| {
                let mut v = vec![Rational::zero(); r];
                v[g] = Rational::from_integer(1.into());
                v
            })
            .collect();
        for b in w.level(l).basis_vectors() {
            let mut v = vec![Rational::zero(); r];
            for (i, &g) in self.lines.iter().enumerate() {
                v[g] = b[i].clone();
            }
            vs.push(v);
        }
        self.base.preimage(h, &Subspace::span(r, &vs)).expect("subspace of the right size")
    }

    /// Lines of `Gr_{h,0}`.
    pub fn graded_lines(&self) -> &[usize] {
        &self.lines
    }
}

pub fn horizontal_weight_filtration(chart: &ParabolicChart, a: &Rational) -> Result<HorizontalFiltration> {
    let alpha = chart.alpha(a);
    let base = level_representative(chart, &alpha)?;
    let Some(hi) = chart.horizontal() else {
        return Ok(HorizontalFiltration { base, horizontal: None, graded: None, lines: vec![] });
    };
    let h = chart.components[hi].coord;
    let lines = chart.jump_lines(hi, &Rational::zero());
    let m = chart.in_frame(chart.phi(h), &alpha);
    let on_divisor = eval_matrix(&m, h, &Rational::zero())
        .ok_or_else(|| Error::InvalidChart("φ has a pole along the horizontal component".into()))?
        .select(&lines, &lines);
    let other = h.other();
    let samples: Vec<Rational> = if chart.dim == 1 {
        vec![Rational::zero()]
    } else {
        let degree = on_divisor
            .entries
            .iter()
            .flat_map(|e| e.terms().map(|(m, _)| if other == Coord::X { m.x } else { m.y }))
            .max()
            .unwrap_or(0)
            .max(0);
        let start = if chart.is_log(other) { 1 } else { 0 };
        (start..start + degree as i64 + 2).map(|c| Rational::from_integer(c.into())).collect()
    };
    let mut filtration: Option<WeightFiltration> = None;
    for c in &samples {
        let at = if chart.dim == 1 { on_divisor.clone() } else { eval_matrix(&on_divisor, other, c).expect("polynomial") };
        let n = constant_part(&at).expect("all variables specialised");
        let n = NilpotentEndo::new(n).map_err(|_| {
            Error::NilpotenceViolated(format!("residue along the horizontal component is not nilpotent at {c}"))
        })?;
        let w = weight_filtration(&n);
        match &filtration {
            None => filtration = Some(w),
            Some(prev) if *prev != w => {
                return Err(Error::InvalidChart(
                    "weight filtration of the residue moves along the horizontal component".into(),
                ))
            }
            _ => {}
        }
    }
    Ok(HorizontalFiltration { base, horizontal: Some(h), graded: filtration, lines })
}

/// Residue data of one component at one point as an exact matrix on the
/// whole fiber of `E_β`, for callers that need more than the graded piece.
pub fn residue_on_fiber(chart: &ParabolicChart, k: usize, beta: &[Rational], point: &Rational) -> Result<ExactMatrix> {
    let c = chart.components[k].coord;
    let m = chart.in_frame(chart.phi(c), beta);
    let on = eval_matrix(&m, c, &Rational::zero()).ok_or_else(|| Error::InvalidChart("pole along divisor".into()))?;
    let on = if chart.dim == 2 { eval_matrix(&on, c.other(), point).expect("polynomial") } else { on };
    Ok(constant_part(&on).expect("all variables specialised"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::ring::RingElem;
    use crate::linalg::rational::{int, q};
    use crate::parabolic::fixtures::*;

    fn zero2() -> RingMatrix {
        RingMatrix::zeros(2, 2)
    }

    #[test]
    fn rank_one_jumps_at_half() {
        let c = curve_chart(Some(&[q(1, 2)]), 1, RingMatrix::zeros(1, 1));
        c.validate().unwrap();
        let eps = q(1, 1000);
        let at = |b: Rational| level_representative(&c, &[b]).unwrap();
        for b in [q(1, 2), q(3, 2), q(-1, 2)] {
            assert!(!at(&b - &eps).same_as(&at(b.clone())), "jump at {b}");
        }
        for b in [q(1, 4), int(0), int(1)] {
            assert!(at(&b - &eps).same_as(&at(b.clone())), "no jump at {b}");
        }
    }

    #[test]
    fn graded_dims_follow_jumps() {
        let c = curve_chart(Some(&[int(0), q(1, 2)]), 2, zero2());
        c.validate().unwrap();
        let dim = |b| graded_piece(&c, "h", &b, &int(0)).unwrap().dim();
        assert_eq!((dim(int(0)), dim(q(1, 2)), dim(q(1, 4))), (1, 1, 0));
        let p = graded_piece(&c, "h", &q(1, 2), &int(0)).unwrap();
        assert!(p.residue.matrix().is_zero());
    }

    #[test]
    fn unipotent_residue_is_j2() {
        let c = unipotent_j2();
        c.validate().unwrap();
        let p = graded_piece(&c, "h", &int(0), &int(1)).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.summary().jordan_type, vec![2]);
    }

    #[test]
    fn non_nilpotent_residue_is_rejected() {
        let c = curve_chart(Some(&[int(0)]), 1, RingMatrix::parse(&[&["1"]]).unwrap());
        assert!(matches!(graded_piece(&c, "h", &int(0), &int(0)), Err(Error::NilpotenceViolated(_))));
    }

    #[test]
    fn non_logarithmic_field_is_rejected() {
        // line 1 has the larger weight, so the entry mapping e2 into e1 needs a factor x
        let c = curve_chart(Some(&[q(1, 2), int(0)]), 2, RingMatrix::parse(&[&["0", "1"], &["0", "0"]]).unwrap());
        assert!(matches!(c.validate(), Err(Error::InvalidChart(_))));
        let ok = curve_chart(Some(&[q(1, 2), int(0)]), 2, RingMatrix::parse(&[&["0", "x"], &["0", "0"]]).unwrap());
        ok.validate().unwrap();
    }

    #[test]
    fn periodicity_on_a_crossing() {
        let c = crossing_chart(&[int(0), q(1, 3)], &[q(1, 2), int(0)], zero2(), zero2());
        c.validate().unwrap();
        let beta = [q(1, 5), q(2, 3)];
        let l = level_representative(&c, &beta).unwrap();
        let shifted = level_representative(&c, &[q(6, 5), q(2, 3)]).unwrap();
        assert!(shifted.same_as(&l.twist(Coord::X, 1)));
    }

    #[test]
    fn horizontal_filtration_examples() {
        let z = int(0);
        // nonzero weight: empty graded piece
        let c = horizontal_chart(&[q(1, 3)], None, RingMatrix::zeros(1, 1), RingMatrix::zeros(1, 1));
        let w = horizontal_weight_filtration(&c, &z).unwrap();
        assert!(w.level(0).same_as(&w.base) && w.level(-2).same_as(&w.base));
        // weight 0, zero residue
        let c = horizontal_chart(std::slice::from_ref(&z), None, RingMatrix::zeros(1, 1), RingMatrix::zeros(1, 1));
        let w = horizontal_weight_filtration(&c, &z).unwrap();
        assert!(w.level(0).same_as(&w.base));
        assert!(w.level(-2).same_as(&w.base.twist(Coord::X, -1)));
        // J2: W_-1 = W_0 = <e1> + x<e2>, W_-2 = xE, W_1 = E
        let w = horizontal_weight_filtration(&unipotent_j2(), &z).unwrap();
        let half = Lattice::diagonal(&[Monomial::ONE, Monomial::x(1)]);
        assert!(w.level(1).same_as(&w.base));
        assert!(w.level(0).same_as(&half));
        assert!(w.level(-1).same_as(&half));
        assert!(w.level(-2).same_as(&w.base.twist(Coord::X, -1)));
    }

    #[test]
    fn filtration_nesting() {
        let w = horizontal_weight_filtration(&unipotent_j2(), &int(0)).unwrap();
        for l in -3..3 {
            assert!(w.level(l + 1).contains(&w.level(l)));
        }
        assert!(w.level(-2).contains(&w.base.twist(Coord::X, -1)));
    }

    fn crossing_sample(y_weights: &[Rational]) -> GradedPiece {
        let phi_x = RingMatrix::parse(&[&["0", "1"], &["0", "0"]]).unwrap();
        let c = horizontal_chart(&[int(0), int(0)], Some(y_weights), phi_x, zero2());
        c.validate().unwrap();
        graded_piece(&c, "h", &int(0), &int(0)).unwrap()
    }

    #[test]
    fn constancy_at_crossings() {
        let smooth_j2 = graded_piece(&unipotent_j2(), "h", &int(0), &int(1)).unwrap();
        let zero_chart = horizontal_chart(&[int(0), int(0)], None, zero2(), zero2());
        let smooth_zero = graded_piece(&zero_chart, "h", &int(0), &int(1)).unwrap();
        let good = crossing_sample(&[int(0), int(0)]);
        assert!(good.crossing_flag.is_some());
        assert!(constancy_audit(&[smooth_j2.clone(), good.clone()]).pass);
        assert!(!constancy_audit(&[smooth_zero.clone(), good]).pass);
        assert!(constancy_audit(std::slice::from_ref(&smooth_zero)).pass);
        // the off-diagonal entry vanishes at the crossing in the frame of E_(0,0)
        let bad = crossing_sample(&[int(0), q(1, 2)]);
        assert_eq!(bad.residual_parabolic, vec![int(0), q(1, 2)]);
        assert!(!constancy_audit(&[smooth_j2, bad]).pass);
    }

    #[test]
    fn conjugate_samples_pass() {
        let c = horizontal_chart(
            &[int(0), int(0)],
            None,
            RingMatrix::parse(&[&["0", "2"], &["0", "0"]]).unwrap(),
            zero2(),
        );
        let a = graded_piece(&c, "h", &int(0), &int(0)).unwrap();
        let b = graded_piece(&unipotent_j2(), "h", &int(0), &int(3)).unwrap();
        assert!(constancy_audit(&[a, b]).pass);
    }

    #[test]
    fn moving_filtration_is_reported() {
        let c = horizontal_chart(
            &[int(0), int(0)],
            None,
            RingMatrix::parse(&[&["0", "y"], &["0", "0"]]).unwrap(),
            zero2(),
        );
        c.validate().unwrap();
        assert!(horizontal_weight_filtration(&c, &int(0)).is_err());
        let _ = RingElem::one();
    }

    #[test]
    fn divisor_model_rules() {
        let comp = |id: &str, kind| DivisorComponent { id: id.into(), kind };
        let mut d = DivisorModel {
            components: vec![comp("h1", ComponentKind::Horizontal), comp("v", ComponentKind::Vertical)],
            crossings: vec![("h1".into(), "v".into())],
            base_coordinate: "t".into(),
        };
        d.validate().unwrap();
        d.components.push(comp("h2", ComponentKind::Horizontal));
        d.crossings.push(("h1".into(), "h2".into()));
        assert!(d.validate().is_err());
    }
}
