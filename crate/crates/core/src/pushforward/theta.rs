use serde::Serialize;

use super::complex::{connecting_map, SheafComplex, TotalComplex};
use super::curve::residue_scale;
use super::family::{fiber_data, FamilyFixture, FiberComplexData};
use super::sheaf::{common_bound, PolyMatrix, SheafMap, SheafOnNodalCurve};
use crate::error::{Error, Result};
use crate::graded::Window;
use crate::l2::{ses_relative_absolute, Variant};
use crate::linalg::rational::{int, serde_rational};
use crate::linalg::{ExactMatrix, Rational, Subspace};
use crate::nilpotent::{rank_sequence, NilpotentEndo};
use crate::vnearby::{nearby_cycles, GraphModule, Route};

fn vcat(top: &PolyMatrix, bottom: &PolyMatrix) -> PolyMatrix {
    PolyMatrix(top.0.iter().chain(&bottom.0).cloned().collect())
}

fn hcat(left: &PolyMatrix, right: &PolyMatrix) -> PolyMatrix {
    PolyMatrix(left.0.iter().zip(&right.0).map(|(l, r)| l.iter().chain(r).cloned().collect()).collect())
}

fn direct_sum(a: &Subspace, b: &Subspace) -> Subspace {
    let (m, n) = (a.ambient_dim(), b.ambient_dim());
    let mut vs: Vec<Vec<Rational>> = a
        .basis_vectors()
        .into_iter()
        .map(|mut v| {
            v.resize(m + n, int(0));
            v
        })
        .collect();
    vs.extend(b.basis_vectors().into_iter().map(|v| std::iter::repeat_n(int(0), m).chain(v).collect()));
    Subspace::span(m + n, &vs)
}

/// `Ω¹(log)|_Z ⊗ W_top = W_top dt/t ⊕ W_bottom ⊗ ω(log)`, glued so that
/// `dx/x = dt/t - dy/y` across each node.
fn absolute_middle(data: &FiberComplexData, f0: &SheafOnNodalCurve, f1: &SheafOnNodalCurve) -> SheafOnNodalCurve {
    let curve = &data.curve;
    let summands = f0.summands.iter().zip(&f1.summands).map(|(a, b)| a.iter().chain(b).copied().collect()).collect();
    let gluing = curve
        .nodes
        .iter()
        .zip(f0.gluing.iter().zip(&f1.gluing))
        .map(|(n, (g0, g1))| {
            let ca = residue_scale(&curve.special_points(n.a.component), &n.a.point);
            let r = g0.rows();
            g0.hstack(&g0.scale(&ca.recip())).vstack(&ExactMatrix::zeros(r, r).hstack(g1))
        })
        .collect();
    let conditions = f0.conditions.iter().zip(&f1.conditions).map(|(a, b)| direct_sum(a, b)).collect();
    SheafOnNodalCurve { rank: 2 * f0.rank, summands, gluing, conditions }
}

/// `0 → Rel[-1] ⊗ dt/t → Abs → Rel → 0` on the special fiber.
struct FiberSes {
    a: SheafComplex,
    b: SheafComplex,
    c: SheafComplex,
    f: Vec<SheafMap>,
    g: Vec<SheafMap>,
}

fn fiber_ses(data: &FiberComplexData, variant: Variant) -> FiberSes {
    let c = data.relative(variant);
    let (f0, f1) = (c.terms[0].clone(), c.terms[1].clone());
    let r = f0.rank;
    let middle = absolute_middle(data, &f0, &f1);
    let comps = data.curve.components.len();
    let per = |f: &dyn Fn(usize) -> PolyMatrix| SheafMap { blocks: (0..comps).map(f).collect() };
    let (phi_r, phi_t) = (&data.phi.blocks, &data.phi_base.blocks);
    let minus = int(-1);
    let id = PolyMatrix::identity(r);
    let zero = PolyMatrix::zeros(r, r);
    let d0 = per(&|k| vcat(&phi_t[k], &phi_r[k]));
    let d1 = per(&|k| hcat(&phi_r[k].scale(&minus), &phi_t[k]));
    FiberSes {
        a: SheafComplex { start: 1, terms: vec![f0.clone(), f1.clone()], maps: vec![per(&|k| phi_r[k].scale(&minus))] },
        b: SheafComplex { start: 0, terms: vec![f0.clone(), middle, f1.clone()], maps: vec![d0, d1] },
        f: vec![per(&|_| vcat(&id, &zero)), per(&|_| id.clone())],
        g: vec![per(&|_| id.clone()), per(&|_| hcat(&zero, &id))],
        c,
    }
}

/// Whether `s` acts nontrivially on `Ψ` of the local model at each node, and
/// `b₁` of the dual graph on the nodes where it does.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphCheck {
    pub active: Vec<bool>,
    pub betti: i64,
}

fn graph_check(family: &FamilyFixture, data: &FiberComplexData) -> Result<Option<GraphCheck>> {
    if family.crossings.is_empty() {
        return Ok(None);
    }
    let active = family
        .crossings
        .iter()
        .map(|fx| {
            let gm = GraphModule::new(fx.clone(), int(0), int(-1), Window::new(2, 2))?;
            let ny = nearby_cycles(&gm, Route::Generated)?;
            let s = gm.s_action();
            let w = ny.big_psi.window();
            for (d, _) in ny.big_psi.dims() {
                if w.interior(d) && !ny.big_psi.act(&s, d)?.is_zero() {
                    return Ok(true);
                }
            }
            Ok(false)
        })
        .collect::<Result<Vec<bool>>>()?;
    let betti = data.curve.graph_betti(|i| active[i]);
    Ok(Some(GraphCheck { active, betti }))
}

/// The residue at `t = 0` of the Gauss–Manin Higgs field on `ℍ^degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaussManinDatum {
    pub family: String,
    #[serde(with = "serde_rational")]
    pub level: Rational,
    pub variant: Variant,
    pub degree: i32,
    pub dim: usize,
    pub theta: ExactMatrix,
    pub rank: usize,
    pub nilpotent: bool,
    pub jordan_type: Option<Vec<usize>>,
    /// Local sequences on the family charts are exact away from these
    /// `(chart, degree)` saturation defects.
    pub saturation_defects: Vec<(usize, i32)>,
    pub graph: Option<GraphCheck>,
}

impl GaussManinDatum {
    /// `rank θ` against the cycles of the active dual graph, on `ℍ¹`.
    pub fn graph_agrees(&self) -> Option<bool> {
        self.graph.as_ref().filter(|_| self.degree == 1).map(|g| self.rank as i64 == g.betti)
    }
}

pub fn gauss_manin_theta(family: &FamilyFixture, a: &Rational, variant: Variant, degree: i32) -> Result<GaussManinDatum> {
    family.validate()?;
    if !(0..=2).contains(&degree) {
        return Err(Error::DimensionMismatch(format!("ℍ^{degree} of a curve complex vanishes")));
    }
    let special = family
        .special()
        .ok_or_else(|| Error::InconsistentFixture(format!("{}: no special fiber", family.name)))?;
    let mut saturation_defects = Vec::new();
    for (i, chart) in family.charts.iter().enumerate() {
        let seq = ses_relative_absolute(chart, a, variant)?;
        for d in &seq.degrees {
            if !(d.composite_zero && d.surjective_on_fiber) {
                return Err(Error::NotExact { degree: d.degree, reason: format!("chart {i}") });
            }
        }
        saturation_defects.extend(seq.saturation_defects.iter().map(|&d| (i, d)));
    }
    let data = fiber_data(special, a)?;
    let ses = fiber_ses(&data, variant);
    let curve = &data.curve;
    ses.b.validate(curve)?;
    let bound = common_bound(&ses.b.terms.iter().collect::<Vec<_>>());
    let ta = TotalComplex::new(curve, &ses.a, bound)?;
    let tb = TotalComplex::new(curve, &ses.b, bound)?;
    let tc = TotalComplex::new(curve, &ses.c, bound)?;
    let fm = ta.chain_map(curve, &ses.a, &tb, &ses.b, &ses.f)?;
    let gm = tb.chain_map(curve, &ses.b, &tc, &ses.c, &ses.g)?;
    let delta = connecting_map(&ta, &tb, &tc, &fm, &gm, degree)?;
    // Tot(A)^{n+1} and Tot(Rel)^n share coordinates and differ by a sign in
    // the differential
    if delta.source != delta.target {
        return Err(Error::DimensionMismatch("ℍ^{n+1}(A) and ℍ^n(Rel) presented differently".into()));
    }
    let theta = delta.matrix;
    let nil = NilpotentEndo::new(theta.clone()).ok();
    Ok(GaussManinDatum {
        family: family.name.clone(),
        level: a.clone(),
        variant,
        degree,
        dim: theta.rows(),
        rank: theta.rank(),
        nilpotent: nil.is_some(),
        jordan_type: nil.map(|n| rank_sequence(&n).jordan_type()),
        saturation_defects,
        graph: if degree == 1 { graph_check(family, &data)? } else { None },
        theta,
    })
}
