//! The relative `L²` parabolic Dolbeault complex and the absolute complex in
//! charts, with the short exact sequence relating them.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::ring::{BaseRing, Monomial, RingElem, RingMatrix};
use crate::linalg::{ExactMatrix, Rational};
use crate::parabolic::chart::{horizontal_weight_filtration, BaseDirection, ChartComponent, LineWeights, ParabolicChart};
use crate::parabolic::lattice::{constant_part, eval_matrix, Coord, Lattice};

const RING: BaseRing = BaseRing::LaurentS;

/// Which pair of horizontal weight levels the complex is built from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `[W_0 → W_{-2} ⊗ Ω¹]`
    #[default]
    Standard,
    /// `[W_1 → W_{-1} ⊗ Ω¹]`
    Zucker,
}

impl Variant {
    pub fn levels(self) -> (i32, i32) {
        match self {
            Variant::Standard => (0, -2),
            Variant::Zucker => (1, -1),
        }
    }
}

fn form_name(chart: &ParabolicChart, c: Coord) -> String {
    if chart.is_log(c) {
        format!("d{0}/{0}", c.name())
    } else {
        format!("d{}", c.name())
    }
}

fn identity(n: usize) -> RingMatrix {
    RingMatrix::scalar_identity(n, &RingElem::one())
}

fn scalar(n: usize, c: i64) -> RingMatrix {
    RingMatrix::scalar_identity(n, &RingElem::constant(Rational::from_integer(c.into())))
}

/// `φ` projected to the relative log forms, against the chosen generator.
pub fn relative_field(chart: &ParabolicChart) -> (RingMatrix, String) {
    match chart.base {
        Some(BaseDirection::Xy) => (chart.phi_x.sub(&chart.phi_y), "dx/x".into()),
        _ => (chart.phi_x.clone(), form_name(chart, Coord::X)),
    }
}

/// `[degree0 → degree1 ⊗ ω]` with `ω` a generator of `Ω¹_{X/Y}(log D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTermComplex {
    pub variant: Variant,
    pub degree0: Lattice,
    pub degree1: Lattice,
    pub form: String,
    /// `φ_rel` in the frame `e`.
    pub field: RingMatrix,
    /// `φ_rel` in the lattice bases.
    pub differential: RingMatrix,
}

impl TwoTermComplex {
    pub fn rank(&self) -> usize {
        self.degree0.rank()
    }

    /// Whether the section `v·ω` (`v` in the frame `e`) lies in degree 1.
    pub fn admits(&self, v: &[RingElem]) -> bool {
        self.degree1.contains_vectors(&column(v))
    }
}

fn column(v: &[RingElem]) -> RingMatrix {
    let mut m = RingMatrix::zeros(v.len(), 1);
    for (i, e) in v.iter().enumerate() {
        m.set(i, 0, e.clone());
    }
    m
}

pub fn build_relative_complex(chart: &ParabolicChart, a: &Rational, variant: Variant) -> Result<TwoTermComplex> {
    chart.validate()?;
    let w = horizontal_weight_filtration(chart, a)?;
    let (top, bottom) = variant.levels();
    let degree0 = w.level(top);
    let degree1 = w.level(bottom);
    let (field, form) = relative_field(chart);
    let differential = degree0
        .map_to(&degree1, &field)
        .map_err(|_| Error::InvalidChart(format!("φ does not map W_{top} into W_{bottom} ⊗ {form}")))?;
    Ok(TwoTermComplex { variant, degree0, degree1, form, field, differential })
}

/// One term `W_{-2,0}(H, E ⊗ Ωⁱ(log D))` of the absolute complex, as a
/// lattice in `E ⊗ Ωⁱ` with the listed form generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormTerm {
    pub forms: Vec<String>,
    pub lattice: Lattice,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsoluteComplexChart {
    pub variant: Variant,
    pub terms: Vec<FormTerm>,
    /// `∧φ` in the frames `e ⊗ forms`.
    pub differentials: Vec<RingMatrix>,
    /// `∧φ` in the lattice bases.
    pub lattice_differentials: Vec<RingMatrix>,
}

pub fn build_absolute_complex(chart: &ParabolicChart, a: &Rational, variant: Variant) -> Result<AbsoluteComplexChart> {
    if chart.dim == 1 {
        let rel = build_relative_complex(chart, a, variant)?;
        return Ok(AbsoluteComplexChart {
            variant,
            terms: vec![
                FormTerm { forms: vec![], lattice: rel.degree0.clone() },
                FormTerm { forms: vec![rel.form.clone()], lattice: rel.degree1.clone() },
            ],
            differentials: vec![rel.field.clone()],
            lattice_differentials: vec![rel.differential],
        });
    }
    chart.validate()?;
    let w = horizontal_weight_filtration(chart, a)?;
    let (top, bottom) = variant.levels();
    let w_top = w.level(top);
    let w_bottom = w.level(bottom);
    // log forms along the horizontal component must have residue in the lower level
    let restricted = match w.horizontal {
        Some(h) => w_top.preimage(h, &w_top.fiber_image(h, &w_bottom)?)?,
        None => w_top.clone(),
    };
    let slot = |c: Coord| if w.horizontal == Some(c) { &restricted } else { &w_top };
    let (fx, fy) = (form_name(chart, Coord::X), form_name(chart, Coord::Y));
    let terms = vec![
        FormTerm { forms: vec![], lattice: w_top.clone() },
        FormTerm { forms: vec![fx.clone(), fy.clone()], lattice: Lattice::direct_sum(&[slot(Coord::X), slot(Coord::Y)]) },
        FormTerm { forms: vec![format!("{fx}^{fy}")], lattice: restricted.clone() },
    ];
    let d0 = RingMatrix::vstack(&[chart.phi_x.clone(), chart.phi_y.clone()]);
    let d1 = RingMatrix::hstack(&[chart.phi_y.map(RingElem::neg), chart.phi_x.clone()]);
    if !d1.mul_in(&d0, RING).is_zero() {
        return Err(Error::NotCommuting("φ ∧ φ != 0".into()));
    }
    let mut lattice_differentials = Vec::new();
    for (i, d) in [&d0, &d1].into_iter().enumerate() {
        lattice_differentials.push(
            terms[i]
                .lattice
                .map_to(&terms[i + 1].lattice, d)
                .map_err(|_| Error::InvalidChart(format!("∧φ does not preserve the L² condition in degree {i}")))?,
        );
    }
    Ok(AbsoluteComplexChart { variant, terms, differentials: vec![d0, d1], lattice_differentials })
}

/// The chart decomposition of the degree-1 term: `W_{-2}` on the log form
/// along `D_H` and `W_0` on the other form.
pub fn split_degree_one(chart: &ParabolicChart, a: &Rational, variant: Variant) -> Result<Lattice> {
    let w = horizontal_weight_filtration(chart, a)?;
    let (top, bottom) = variant.levels();
    let (t, b) = (w.level(top), w.level(bottom));
    Ok(match w.horizontal {
        Some(Coord::X) => Lattice::direct_sum(&[&b, &t]),
        Some(Coord::Y) => Lattice::direct_sum(&[&t, &b]),
        None => Lattice::direct_sum(&[&t, &t]),
    })
}

/// Ranks and fiber checks of `0 → A^k → B^k → C^k → 0` in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SesDegree {
    pub degree: i32,
    pub ranks: (usize, usize, usize),
    pub composite_zero: bool,
    pub surjective_on_fiber: bool,
    pub injective_on_fiber: bool,
}

impl SesDegree {
    pub fn exact(&self) -> bool {
        self.composite_zero
            && self.surjective_on_fiber
            && self.injective_on_fiber
            && self.ranks.1 == self.ranks.0 + self.ranks.2
    }
}

/// `0 → Rel[-1] ⊗ f*Ω¹_Y(log Q) → Abs/I² → Rel → 0` in a surface chart.
/// `I² = 0` because the base is a curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelAbsSequence {
    pub relative: TwoTermComplex,
    pub absolute: AbsoluteComplexChart,
    /// Coefficients of `dt/t` (or `dt`) in the forms of the absolute complex.
    pub base_form: (i64, i64),
    /// `A^k → B^k` and `B^k → C^k` in lattice bases, `k = 0, 1, 2`.
    pub left: Vec<RingMatrix>,
    pub right: Vec<RingMatrix>,
    pub degrees: Vec<SesDegree>,
    /// Degrees where the image of the left map is not a subbundle.
    pub saturation_defects: Vec<i32>,
}

fn eval_origin(m: &RingMatrix) -> ExactMatrix {
    let z = Rational::zero();
    let at = eval_matrix(&eval_matrix(m, Coord::X, &z).expect("polynomial"), Coord::Y, &z).expect("polynomial");
    constant_part(&at).expect("all variables specialised")
}

pub fn ses_relative_absolute(chart: &ParabolicChart, a: &Rational, variant: Variant) -> Result<RelAbsSequence> {
    let Some(base) = chart.base else {
        return Err(Error::InvalidChart("a base direction is needed for the relative/absolute sequence".into()));
    };
    let rel = build_relative_complex(chart, a, variant)?;
    let abs = build_absolute_complex(chart, a, variant)?;
    let r = chart.rank;
    let tau = match base {
        BaseDirection::Y => (0, 1),
        BaseDirection::Xy => (1, 1),
    };
    let zero = |rows, cols| RingMatrix::zeros(rows, cols);
    // A = Rel[-1] ⊗ τ: A^1 = W_top, A^2 = W_bottom (ω_rel ∧ τ = ω_x ∧ ω_y)
    let a_terms = [Lattice::standard(0), rel.degree0.clone(), rel.degree1.clone()];
    let c_terms = [rel.degree0.clone(), rel.degree1.clone(), Lattice::standard(0)];
    let f_amb = [
        zero(r, 0),
        RingMatrix::vstack(&[scalar(r, tau.0), scalar(r, tau.1)]),
        identity(r),
    ];
    let proj = match base {
        BaseDirection::Y => RingMatrix::hstack(&[identity(r), zero(r, r)]),
        BaseDirection::Xy => RingMatrix::hstack(&[identity(r), scalar(r, -1)]),
    };
    let g_amb = [identity(r), proj, zero(0, r)];
    // chain maps: d_B f = f d_A and g d_B = d_C g
    let d_a = [zero(r, 0), rel.field.clone()];
    let d_c = [rel.field.clone(), zero(0, r)];
    for k in 0..2 {
        let lhs = abs.differentials[k].mul_in(&f_amb[k], RING);
        let rhs = f_amb[k + 1].mul_in(&d_a[k], RING);
        if lhs != rhs {
            return Err(Error::NonCommutingSquare(format!("left map is not a chain map in degree {k}")));
        }
        let lhs = g_amb[k + 1].mul_in(&abs.differentials[k], RING);
        let rhs = d_c[k].mul_in(&g_amb[k], RING);
        if lhs != rhs {
            return Err(Error::NonCommutingSquare(format!("right map is not a chain map in degree {k}")));
        }
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut degrees = Vec::new();
    let mut saturation_defects = Vec::new();
    for k in 0..3 {
        let b = &abs.terms[k].lattice;
        let f = a_terms[k].map_to(b, &f_amb[k]).map_err(|_| Error::NotExact {
            degree: k as i32,
            reason: "left map leaves the lattice".into(),
        })?;
        let g = b.map_to(&c_terms[k], &g_amb[k]).map_err(|_| Error::NotExact {
            degree: k as i32,
            reason: "right map leaves the lattice".into(),
        })?;
        let ranks = (a_terms[k].rank(), b.rank(), c_terms[k].rank());
        let d = SesDegree {
            degree: k as i32,
            ranks,
            composite_zero: g.mul_in(&f, RING).is_zero(),
            surjective_on_fiber: eval_origin(&g).rank() == ranks.2,
            injective_on_fiber: eval_origin(&f).rank() == ranks.0,
        };
        if !d.injective_on_fiber {
            saturation_defects.push(k as i32);
        }
        if !(d.composite_zero && d.surjective_on_fiber && ranks.1 == ranks.0 + ranks.2) {
            return Err(Error::NotExact {
                degree: k as i32,
                reason: format!(
                    "composite zero: {}, surjective: {}, ranks {:?}",
                    d.composite_zero, d.surjective_on_fiber, ranks
                ),
            });
        }
        left.push(f);
        right.push(g);
        degrees.push(d);
    }
    Ok(RelAbsSequence { relative: rel, absolute: abs, base_form: tau, left, right, degrees, saturation_defects })
}

/// The curve chart cut out by `y = c` from a surface chart with `t = y`,
/// in the frame of `E_{α(a)}` restricted to the fiber.
pub fn restrict_chart(chart: &ParabolicChart, a: &Rational, c: &Rational) -> Result<ParabolicChart> {
    if chart.base != Some(BaseDirection::Y) {
        return Err(Error::InvalidChart("fibers are coordinate slices only when t = y".into()));
    }
    let alpha = chart.alpha(a);
    let y_frame: Vec<Monomial> = chart
        .level_frame(&alpha)
        .into_iter()
        .map(|m| Monomial { x: 0, ..m })
        .collect();
    let frame = Lattice::diagonal(&y_frame);
    let conj = frame.inverse().mul_in(&chart.phi_x.mul_in(frame.basis(), RING), RING);
    let phi_x = eval_matrix(&conj, Coord::Y, c)
        .ok_or_else(|| Error::InvalidChart(format!("φ_x has a pole at y = {c}")))?;
    let components: Vec<ChartComponent> = chart.components.iter().filter(|k| k.coord == Coord::X).cloned().collect();
    let keep: Vec<usize> = chart
        .components
        .iter()
        .enumerate()
        .filter(|(_, k)| k.coord == Coord::X)
        .map(|(i, _)| i)
        .collect();
    let weights = chart
        .weights
        .iter()
        .map(|w| LineWeights(keep.iter().map(|&i| w.0[i].clone()).collect()))
        .collect();
    Ok(ParabolicChart {
        rank: chart.rank,
        dim: 1,
        components,
        base: None,
        weights,
        phi_x,
        phi_y: RingMatrix::zeros(chart.rank, chart.rank),
    })
}

/// The relative complex specialised to the fiber `y = c`, in lattice bases.
pub fn restrict_to_fiber(complex: &TwoTermComplex, c: &Rational) -> Result<RingMatrix> {
    eval_matrix(&complex.differential, Coord::Y, c)
        .ok_or_else(|| Error::InvalidChart(format!("differential has a pole at y = {c}")))
}

/// Independent form of the `L²` condition: a section `v·ω` of
/// `E_{α(a)} ⊗ Ω¹` is admitted iff its residue class on `Gr_{h,0}` lies in
/// the lower weight level, coefficient by coefficient along `D_h`.
pub fn residue_criterion(chart: &ParabolicChart, a: &Rational, variant: Variant, v: &[RingElem]) -> Result<bool> {
    let w = horizontal_weight_filtration(chart, a)?;
    let coords = w.base.coordinates(&column(v));
    if !coords.is_polynomial() {
        return Ok(false);
    }
    let (Some(h), Some(filtration)) = (w.horizontal, &w.graded) else {
        return Ok(true);
    };
    let on = eval_matrix(&coords, h, &Rational::zero()).expect("polynomial");
    let lines = w.graded_lines();
    let target = filtration.level(variant.levels().1);
    let mut exps: Vec<Monomial> = Vec::new();
    for &g in lines {
        for (m, _) in on.get(g, 0).terms() {
            if !exps.contains(m) {
                exps.push(*m);
            }
        }
    }
    for m in exps {
        let vec: Vec<Rational> = lines.iter().map(|&g| on.get(g, 0).coeff(&m)).collect();
        if !target.contains(&vec) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, q};
    use crate::parabolic::fixtures::*;

    fn z(n: usize) -> RingMatrix {
        RingMatrix::zeros(n, n)
    }

    #[test]
    fn trivial_rank_one_is_e_to_e() {
        let c = smooth_chart(1, z(1), z(1));
        let rel = build_relative_complex(&c, &int(0), Variant::Standard).unwrap();
        assert!(rel.degree0.same_as(&Lattice::standard(1)));
        assert!(rel.degree1.same_as(&Lattice::standard(1)));
        assert!(rel.differential.is_zero());
        assert_eq!(rel.form, "dx");
    }

    #[test]
    fn horizontal_weight_zero_twists_degree_one() {
        let c = horizontal_chart(&[int(0)], None, z(1), z(1));
        let rel = build_relative_complex(&c, &int(0), Variant::Standard).unwrap();
        assert!(rel.degree0.same_as(&Lattice::standard(1)));
        assert!(rel.degree1.same_as(&Lattice::standard(1).twist(Coord::X, -1)));
        assert_eq!(rel.form, "dx/x");
    }

    #[test]
    fn j2_degree_one_and_zucker_pair() {
        let c = unipotent_j2();
        let half = Lattice::diagonal(&[Monomial::ONE, Monomial::x(1)]);
        let rel = build_relative_complex(&c, &int(0), Variant::Standard).unwrap();
        assert!(rel.degree0.same_as(&half));
        assert!(rel.degree1.same_as(&Lattice::standard(2).twist(Coord::X, -1)));
        let zk = build_relative_complex(&c, &int(0), Variant::Zucker).unwrap();
        assert!(zk.degree0.same_as(&Lattice::standard(2)));
        assert!(zk.degree1.same_as(&half));
    }

    #[test]
    fn degree_one_term_splits() {
        for chart in [
            unipotent_j2(),
            horizontal_chart(&[int(0), q(1, 2)], Some(&[int(0), int(0)]), z(2), z(2)),
            crossing_chart(&[int(0)], &[int(0)], z(1), z(1)),
        ] {
            for v in [Variant::Standard, Variant::Zucker] {
                let abs = build_absolute_complex(&chart, &int(0), v).unwrap();
                assert!(abs.terms[1].lattice.same_as(&split_degree_one(&chart, &int(0), v).unwrap()));
            }
        }
    }

    #[test]
    fn curve_absolute_equals_relative() {
        let c = curve_chart(Some(&[int(0), int(0)]), 2, RingMatrix::parse(&[&["0", "1"], &["0", "0"]]).unwrap());
        let rel = build_relative_complex(&c, &int(0), Variant::Standard).unwrap();
        let abs = build_absolute_complex(&c, &int(0), Variant::Standard).unwrap();
        assert_eq!(abs.terms.len(), 2);
        assert!(abs.terms[0].lattice.same_as(&rel.degree0));
        assert!(abs.terms[1].lattice.same_as(&rel.degree1));
        assert_eq!(abs.lattice_differentials[0], rel.differential);
    }

    #[test]
    fn zero_field_gives_zero_differentials() {
        let c = horizontal_chart(&[int(0)], None, z(1), z(1));
        let abs = build_absolute_complex(&c, &int(0), Variant::Standard).unwrap();
        assert!(abs.lattice_differentials.iter().all(RingMatrix::is_zero));
    }

    #[test]
    fn sequences_are_exact() {
        let j2 = RingMatrix::parse(&[&["0", "1"], &["0", "0"]]).unwrap();
        for chart in [
            smooth_chart(1, z(1), z(1)),
            crossing_chart(&[int(0)], &[int(0)], z(1), z(1)),
            crossing_chart(&[int(0), int(0)], &[int(0), int(0)], j2.clone(), z(2)),
            unipotent_j2(),
            horizontal_chart(&[int(0), int(0)], Some(&[int(0), int(0)]), j2.clone(), j2.clone()),
        ] {
            let s = ses_relative_absolute(&chart, &int(0), Variant::Standard).unwrap();
            assert!(s.degrees.iter().all(SesDegree::exact), "{:?}", s.degrees);
            assert!(s.saturation_defects.is_empty());
        }
    }

    #[test]
    fn curve_chart_has_no_sequence() {
        let c = curve_chart(None, 1, z(1));
        assert!(ses_relative_absolute(&c, &int(0), Variant::Standard).is_err());
    }

    #[test]
    fn restriction_commutes_with_construction() {
        let j2 = RingMatrix::parse(&[&["0", "1"], &["0", "0"]]).unwrap();
        let charts = [
            unipotent_j2(),
            horizontal_chart(&[int(0), q(1, 2)], Some(&[int(0), q(1, 3)]), z(2), z(2)),
            horizontal_chart(&[int(0), int(0)], Some(&[int(0), int(0)]), j2.clone(), j2),
        ];
        for chart in &charts {
            for c in [int(0), int(1), int(3), q(-1, 2)] {
                let a = q(1, 4);
                let rel = build_relative_complex(chart, &a, Variant::Standard).unwrap();
                let restricted = build_relative_complex(&restrict_chart(chart, &a, &c).unwrap(), &int(0), Variant::Standard)
                    .unwrap();
                assert_eq!(restrict_to_fiber(&rel, &c).unwrap(), restricted.differential);
            }
        }
    }

    #[test]
    fn membership_matches_residue_criterion() {
        let c = unipotent_j2();
        let rel = build_relative_complex(&c, &int(0), Variant::Standard).unwrap();
        let cases = [["1", "0"], ["0", "1"], ["x", "0"], ["x", "x"], ["y", "x*y"], ["1 + x", "x"], ["x^2", "y"]];
        for [a, b] in cases {
            let v = [a.parse::<RingElem>().unwrap(), b.parse::<RingElem>().unwrap()];
            assert_eq!(rel.admits(&v), residue_criterion(&c, &int(0), Variant::Standard, &v).unwrap(), "{a}, {b}");
        }
        let zk = build_relative_complex(&c, &int(0), Variant::Zucker).unwrap();
        let e1 = ["1".parse::<RingElem>().unwrap(), RingElem::zero()];
        assert!(zk.admits(&e1) && !rel.admits(&e1));
        assert!(residue_criterion(&c, &int(0), Variant::Zucker, &e1).unwrap());
    }
}
