use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::complex::{fiber_hypercohomology, FiberCohomology, SheafComplex};
use super::curve::{residue_scale, NodalCurve};
use super::sheaf::{LineSummand, SheafMap, SheafOnNodalCurve};
use crate::error::{Error, Result};
use crate::l2::Variant;
use crate::linalg::rational::{floor_i64, fmt_rational, serde_rational, serde_rational_vec};
use crate::linalg::{induced_map, ExactMatrix, QuotientPresentation, Rational, Subspace};
use crate::nilpotent::{weight_filtration, NilpotentEndo};
use crate::parabolic::{monodromy_from_weight, ParabolicChart};
use crate::vnearby::CrossingFixture;

/// The fiber of a family over a disk at `t`. The bundle is `E` at
/// horizontal level 0 and at level `w_c` along each component of the special
/// fiber; `phi` is the relative Higgs field `E → E ⊗ ω(log)` in the frames of
/// `E` and of `E ⊗ ω(log)`, i.e. numerators over `Π (z - s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "RawSample")]
pub struct FiberSample {
    #[serde(with = "serde_rational")]
    pub t: Rational,
    pub curve: NodalCurve,
    pub bundle: SheafOnNodalCurve,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<SheafMap>,
    /// The `dt/t` part of `φ` on the special fiber, `E → E`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_base: Option<SheafMap>,
    #[serde(default, with = "serde_rational_vec", skip_serializing_if = "Vec::is_empty")]
    pub vertical_weights: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawSample {
    #[serde(with = "serde_rational")]
    t: Rational,
    curve: NodalCurve,
    bundle: SheafOnNodalCurve,
    #[serde(default)]
    phi: Option<SheafMap>,
    #[serde(default)]
    phi_base: Option<SheafMap>,
    #[serde(default, with = "serde_rational_vec")]
    vertical_weights: Vec<Rational>,
}

impl From<RawSample> for FiberSample {
    fn from(r: RawSample) -> Self {
        let mut bundle = r.bundle;
        if bundle.conditions.is_empty() {
            bundle.conditions = vec![Subspace::full(bundle.rank); r.curve.markings.len()];
        }
        FiberSample { t: r.t, curve: r.curve, bundle, phi: r.phi, phi_base: r.phi_base, vertical_weights: r.vertical_weights }
    }
}

impl FiberSample {
    pub fn is_special(&self) -> bool {
        self.t.is_zero()
    }

    fn phi_or_zero(&self, target: &SheafOnNodalCurve) -> SheafMap {
        self.phi.clone().unwrap_or_else(|| SheafMap::zero(&self.curve, target.rank, self.bundle.rank))
    }

    fn phi_base_or_zero(&self) -> SheafMap {
        self.phi_base.clone().unwrap_or_else(|| SheafMap::zero(&self.curve, self.bundle.rank, self.bundle.rank))
    }

    /// `(p_a, deg E, marking weights)`, which a flat family keeps constant.
    pub fn euler_data(&self) -> (i64, i64, Vec<Vec<Rational>>) {
        let mut w: Vec<Vec<Rational>> = self
            .curve
            .markings
            .iter()
            .map(|m| {
                let mut v = m.weights.clone();
                v.sort();
                v
            })
            .collect();
        w.sort();
        (self.curve.arithmetic_genus(), self.bundle.degree(&self.curve), w)
    }
}

/// A family over a disk with special fiber at `t = 0`, described by its
/// fibers at sample points together with local chart data along the special
/// fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFixture {
    pub name: String,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_generic: Option<[usize; 3]>,
    pub samples: Vec<FiberSample>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub charts: Vec<ParabolicChart>,
    /// Local models at the nodes of the special fiber, in node order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub crossings: Vec<CrossingFixture>,
}

impl FamilyFixture {
    pub fn special(&self) -> Option<&FiberSample> {
        self.samples.iter().find(|s| s.is_special())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Error::InconsistentFixture(format!("{}: {m}", self.name));
        if self.samples.is_empty() {
            return Err(bad("no sample points".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for s in &self.samples {
            if !seen.insert(s.t.clone()) {
                return Err(bad(format!("sample t = {} repeated", fmt_rational(&s.t))));
            }
            s.curve.validate()?;
            if s.bundle.rank != self.rank {
                return Err(bad(format!("bundle at t = {} has rank {}", fmt_rational(&s.t), s.bundle.rank)));
            }
            s.bundle.validate(&s.curve)?;
            if s.bundle.conditions.iter().any(|c| !c.is_full()) {
                return Err(bad("the bundle itself carries no marking conditions".into()));
            }
            if s.curve.markings.iter().any(|m| m.weights.len() != self.rank) {
                return Err(bad("every marking carries one weight per line".into()));
            }
            if s.is_special() {
                if s.vertical_weights.len() != s.curve.components.len() {
                    return Err(bad("one vertical weight per component of the special fiber".into()));
                }
                for w in &s.vertical_weights {
                    monodromy_from_weight(w, 1)?;
                }
                if !self.crossings.is_empty() && self.crossings.len() != s.curve.nodes.len() {
                    return Err(bad("one crossing model per node".into()));
                }
            } else {
                if s.curve.components.len() != 1 || !s.curve.nodes.is_empty() {
                    return Err(bad(format!("the fiber at t = {} should be smooth", fmt_rational(&s.t))));
                }
                if s.phi_base.is_some() {
                    return Err(bad("the dt/t part of φ is only read on the special fiber".into()));
                }
            }
        }
        let reference = self.samples[0].euler_data();
        for s in &self.samples[1..] {
            let data = s.euler_data();
            if data.0 != reference.0 {
                return Err(bad(format!("arithmetic genus {} at t = {} but {} at t = {}", data.0, fmt_rational(&s.t), reference.0, fmt_rational(&self.samples[0].t))));
            }
            if data.1 != reference.1 {
                return Err(bad(format!("degree {} at t = {} but {} at t = {}", data.1, fmt_rational(&s.t), reference.1, fmt_rational(&self.samples[0].t))));
            }
            if data.2 != reference.2 {
                return Err(bad(format!("marking weights differ at t = {}", fmt_rational(&s.t))));
            }
        }
        Ok(())
    }
}

/// The sheaves of the fiber complex at level `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberComplexData {
    pub t: Rational,
    pub curve: NodalCurve,
    /// `E_{α(a)}` restricted to the fiber.
    pub bundle: SheafOnNodalCurve,
    /// `E_{α(a)} ⊗ ω(log)`, residue frames converted to the model frames.
    pub twisted: SheafOnNodalCurve,
    /// Fiber conditions cutting out `W_ℓ` at each marking, for `ℓ = -2..=1`.
    pub levels: BTreeMap<i32, Vec<Subspace>>,
    pub phi: SheafMap,
    pub phi_base: SheafMap,
}

impl FiberComplexData {
    pub fn with_conditions(&self, sheaf: &SheafOnNodalCurve, level: i32) -> SheafOnNodalCurve {
        SheafOnNodalCurve { conditions: self.levels[&level].clone(), ..sheaf.clone() }
    }

    /// `[W_top → W_bottom ⊗ ω(log)]`.
    pub fn relative(&self, variant: Variant) -> SheafComplex {
        let (top, bottom) = variant.levels();
        SheafComplex::two_term(
            self.with_conditions(&self.bundle, top),
            self.with_conditions(&self.twisted, bottom),
            self.phi.clone(),
        )
    }

    /// Twists the special fiber by `O(Σ k_c D_c)`.
    pub fn twist_vertical(&mut self, k: &[i64]) {
        self.bundle.twist_vertical(&self.curve, k);
        self.twisted.twist_vertical(&self.curve, k);
    }
}

/// `ω(log)` of the fiber: `O(|S_c| - 2)` on rational components with the
/// gluing `-c_b / c_a` that makes residues at the two branches cancel.
pub fn log_canonical(curve: &NodalCurve) -> SheafOnNodalCurve {
    let summands = curve
        .components
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            if comp.genus > 0 {
                vec![LineSummand::Canonical.normalize(comp.genus)]
            } else {
                vec![LineSummand::Degree(curve.special_points(c).len() as i64 - 2)]
            }
        })
        .collect();
    let gluing = curve
        .nodes
        .iter()
        .map(|n| {
            let ca = residue_scale(&curve.special_points(n.a.component), &n.a.point);
            let cb = residue_scale(&curve.special_points(n.b.component), &n.b.point);
            ExactMatrix::from_rows(vec![vec![-(cb / ca)]])
        })
        .collect();
    SheafOnNodalCurve { rank: 1, summands, gluing, conditions: vec![Subspace::full(1); curve.markings.len()] }
}

fn tensor_line(curve: &NodalCurve, e: &SheafOnNodalCurve, l: &SheafOnNodalCurve) -> SheafOnNodalCurve {
    let summands = e
        .summands
        .iter()
        .zip(&l.summands)
        .zip(&curve.components)
        .map(|((row, line), comp)| {
            row.iter()
                .map(|s| match (comp.genus, line[0]) {
                    (0, LineSummand::Degree(k)) => LineSummand::Degree(s.degree(0) + k),
                    (g, _) => s.twist_canonical(g),
                })
                .collect()
        })
        .collect();
    let gluing = e.gluing.iter().zip(&l.gluing).map(|(g, s)| g.scale(s.get(0, 0))).collect();
    SheafOnNodalCurve { rank: e.rank, summands, gluing, conditions: e.conditions.clone() }
}

/// Fiber conditions of `W_ℓ(H, E)` at one marking: the non-jumping lines plus
/// the preimage of `W_ℓ(N)` on `Gr_{h,0}`.
fn marking_levels(lines: &ExactMatrix, weights: &[Rational], residue: &ExactMatrix) -> Result<BTreeMap<i32, Subspace>> {
    let r = weights.len();
    let other: Vec<Vec<Rational>> =
        weights.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(g, _)| lines.column(g)).collect();
    let u = Subspace::span(r, &other);
    if !u.contains_subspace(&u.image_under(residue)) {
        return Err(Error::NilpotenceViolated("the residue does not preserve the parabolic lines".into()));
    }
    let gr = QuotientPresentation::new(Subspace::full(r), u)?;
    let n = NilpotentEndo::new(induced_map(residue, &gr, &gr)?)
        .map_err(|_| Error::NilpotenceViolated("residue on Gr_{h,0} is not nilpotent".into()))?;
    let w = weight_filtration(&n);
    Ok((-2..=1).map(|l| (l, gr.preimage_of(&w.level(l)))).collect())
}

/// Restriction of `E_{α(a)}`, `ω(log)` and the weight levels to one fiber.
pub fn fiber_data(sample: &FiberSample, a: &Rational) -> Result<FiberComplexData> {
    let curve = &sample.curve;
    let mut bundle = sample.bundle.clone();
    let omega = log_canonical(curve);
    let mut twisted = tensor_line(curve, &bundle, &omega);
    let phi = sample.phi_or_zero(&twisted);
    phi.validate(curve, &bundle, &twisted)?;
    let phi_base = sample.phi_base_or_zero();
    phi_base.validate(curve, &bundle, &bundle)?;
    for (c, block) in phi.blocks.iter().enumerate() {
        if block.mul(&phi_base.blocks[c]) != phi_base.blocks[c].mul(block) {
            return Err(Error::NotCommuting("φ ∧ φ != 0 on the special fiber".into()));
        }
    }
    let mut levels: BTreeMap<i32, Vec<Subspace>> = (-2..=1).map(|l| (l, Vec::new())).collect();
    for mk in &curve.markings {
        let scale = residue_scale(&curve.special_points(mk.component), &mk.point);
        let residue = phi.at(mk.component, &mk.point, &bundle, &twisted).scale(&scale.recip());
        for (l, s) in marking_levels(&mk.line_basis(), &mk.weights, &residue)? {
            levels.get_mut(&l).expect("levels -2..=1").push(s);
        }
    }
    if sample.is_special() {
        let k: Vec<i64> = sample.vertical_weights.iter().map(|w| floor_i64(&(a - w))).collect();
        bundle.twist_vertical(curve, &k);
        twisted.twist_vertical(curve, &k);
    }
    Ok(FiberComplexData { t: sample.t.clone(), curve: curve.clone(), bundle, twisted, levels, phi, phi_base })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleRow {
    #[serde(with = "serde_rational")]
    pub t: Rational,
    pub special: bool,
    pub dims: [usize; 3],
    pub euler: i64,
    /// `(h⁰, h¹)` of the two terms.
    pub terms: [(usize, usize); 2],
    pub e2_agrees: bool,
}

impl SampleRow {
    fn new(t: &Rational, special: bool, h: FiberCohomology) -> Self {
        SampleRow { t: t.clone(), special, dims: h.dims, euler: h.euler(), terms: h.terms, e2_agrees: h.e2 == h.dims }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushforwardReport {
    pub family: String,
    #[serde(with = "serde_rational")]
    pub level: Rational,
    pub variant: Variant,
    pub rows: Vec<SampleRow>,
    pub declared_generic: Option<[usize; 3]>,
    pub local_freeness_pass: bool,
    pub base_change_pass: bool,
    pub euler_constant: bool,
}

impl PushforwardReport {
    pub fn dims(&self) -> Vec<[usize; 3]> {
        self.rows.iter().map(|r| r.dims).collect()
    }
}

fn report(family: &FamilyFixture, a: &Rational, variant: Variant, rows: Vec<SampleRow>) -> Result<PushforwardReport> {
    let generic: Vec<&SampleRow> = rows.iter().filter(|r| !r.special).collect();
    if let (Some(d), Some(g)) = (family.declared_generic, generic.first()) {
        let chi = d[0] as i64 - d[1] as i64 + d[2] as i64;
        if chi != g.euler {
            return Err(Error::InconsistentFixture(format!(
                "{}: declared generic dims {d:?} have χ = {chi}, the generic fiber has χ = {}",
                family.name, g.euler
            )));
        }
    }
    let reference = family.declared_generic.or(generic.first().map(|r| r.dims)).unwrap_or(rows[0].dims);
    Ok(PushforwardReport {
        family: family.name.clone(),
        level: a.clone(),
        variant,
        local_freeness_pass: rows.iter().all(|r| r.dims == rows[0].dims),
        base_change_pass: rows.iter().all(|r| r.dims == reference),
        euler_constant: rows.iter().all(|r| r.euler == rows[0].euler),
        declared_generic: family.declared_generic,
        rows,
    })
}

/// Fiberwise `ℍ` of the relative complex at level `a` at every sample.
pub fn direct_image_table(family: &FamilyFixture, a: &Rational, variant: Variant) -> Result<PushforwardReport> {
    family.validate()?;
    let rows = family
        .samples
        .par_iter()
        .map(|s| {
            let data = fiber_data(s, a)?;
            let h = fiber_hypercohomology(&data.curve, &data.relative(variant))?;
            Ok(SampleRow::new(&s.t, s.is_special(), h))
        })
        .collect::<Result<Vec<_>>>()?;
    report(family, a, variant, rows)
}

/// `F_{a-1}` computed directly against `F_a ⊗ O(-Z)` on the special fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicityReport {
    #[serde(with = "serde_rational")]
    pub level: Rational,
    pub direct: Vec<[usize; 3]>,
    pub twisted: Vec<[usize; 3]>,
    pub sheaves_agree: bool,
    pub pass: bool,
}

pub fn periodicity_audit(family: &FamilyFixture, a: &Rational, variant: Variant) -> Result<PeriodicityReport> {
    let below = a - Rational::one();
    let direct = direct_image_table(family, &below, variant)?;
    let mut sheaves_agree = true;
    let mut twisted = Vec::new();
    for s in &family.samples {
        let mut data = fiber_data(s, a)?;
        if s.is_special() {
            data.twist_vertical(&vec![-1; data.curve.components.len()]);
        }
        let fresh = fiber_data(s, &below)?;
        sheaves_agree &= data.bundle == fresh.bundle && data.twisted == fresh.twisted;
        twisted.push(fiber_hypercohomology(&data.curve, &data.relative(variant))?.dims);
    }
    let direct = direct.dims();
    Ok(PeriodicityReport { level: a.clone(), pass: sheaves_agree && direct == twisted, direct, twisted, sheaves_agree })
}

/// The `(W₀, W₋₂)` and `(W₁, W₋₁)` complexes on the same fibers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub standard: Vec<[usize; 3]>,
    pub zucker: Vec<[usize; 3]>,
    pub pass: bool,
}

pub fn duality_audit(family: &FamilyFixture, a: &Rational) -> Result<DualityReport> {
    let standard = direct_image_table(family, a, Variant::Standard)?.dims();
    let zucker = direct_image_table(family, a, Variant::Zucker)?.dims();
    Ok(DualityReport { pass: standard == zucker, standard, zucker })
}
