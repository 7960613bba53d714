use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::ring::{BaseRing, Bideg, Monomial, RingElem, RingMatrix};
use crate::graded::{direct_sum, homology, tensor_formula_module, BigradedModule, OperatorAction, Window};
use crate::linalg::{induced_map, ExactMatrix, QuotientPresentation, Subspace};

/// The two Koszul complexes compared at a crossing.
///
/// `Upper` is `M --φ--> M` (one-form bundle of rank 1). `Lower` is
/// `N --(v, u)--> N² --(u, -v)--> N` over `N = M[u,v]/(xu - yv - φ)M`
/// (rank 2). Slice `(P, i)` of the lower complex has its middle term in
/// bidegree `(P, i)`; the upper slice has `M_(P-1, i) → M_(P, i+1)`.
#[derive(Clone, Debug)]
pub enum KoszulComplex {
    Upper { m: BigradedModule, phi: OperatorAction },
    Lower { n: BigradedModule, n2: BigradedModule },
}

impl KoszulComplex {
    pub fn upper(m: BigradedModule, phi: OperatorAction) -> Result<Self> {
        if phi.shift != (1, 1) {
            return Err(Error::Validation { path: phi.name, message: "φ must have bidegree (1, 1)".into() });
        }
        m.check_linear(&m, &phi)?;
        Ok(KoszulComplex::Upper { m, phi })
    }

    pub fn lower(n: BigradedModule) -> Result<Self> {
        if n.ring() != BaseRing::CrossingUv {
            return Err(Error::Validation {
                path: "ring".into(),
                message: "lower Koszul complex needs a module over k[x,y,u,v]/(xy)".into(),
            });
        }
        let n2 = direct_sum(&[&n, &n])?;
        Ok(KoszulComplex::Lower { n, n2 })
    }

    pub fn bundle_rank(&self) -> usize {
        match self {
            KoszulComplex::Upper { .. } => 1,
            KoszulComplex::Lower { .. } => 2,
        }
    }

    fn rank(&self) -> usize {
        match self {
            KoszulComplex::Upper { m, .. } => m.free_module().rank(),
            KoszulComplex::Lower { n, .. } => n.free_module().rank(),
        }
    }

    fn d0(&self) -> OperatorAction {
        let r = self.rank();
        let u = RingMatrix::scalar_identity(r, &RingElem::var(Monomial::u(1)));
        let v = RingMatrix::scalar_identity(r, &RingElem::var(Monomial::v(1)));
        OperatorAction::new("d0", RingMatrix::vstack(&[v, u]), (0, 1))
    }

    fn d1(&self) -> OperatorAction {
        let r = self.rank();
        let u = RingMatrix::scalar_identity(r, &RingElem::var(Monomial::u(1)));
        let minus_v = RingMatrix::scalar_identity(r, &"-v".parse().expect("literal"));
        OperatorAction::new("d1", RingMatrix::hstack(&[u, minus_v]), (0, 1))
    }

    /// The terms of slice `(P, i)` as `(module, bidegree)` and the
    /// differentials between them in quotient coordinates.
    fn slice(&self, d: Bideg) -> Result<Slice> {
        let (p, i) = d;
        match self {
            KoszulComplex::Upper { m, phi } => {
                let src = (p - 1, i);
                let f = component_map(m, m, phi, src)?;
                Ok(Slice { maps: vec![f], dims: vec![dim_of(m, src), dim_of(m, (p, i + 1))] })
            }
            KoszulComplex::Lower { n, n2 } => {
                let f = component_map(n, n2, &self.d0(), (p, i - 1))?;
                let g = component_map(n2, n, &self.d1(), (p, i))?;
                Ok(Slice { maps: vec![f, g], dims: vec![dim_of(n, (p, i - 1)), dim_of(n2, (p, i)), dim_of(n, (p, i + 1))] })
            }
        }
    }

    fn window(&self) -> Window {
        match self {
            KoszulComplex::Upper { m, .. } => m.window(),
            KoszulComplex::Lower { n, .. } => n.window(),
        }
    }

    fn degree_range(&self) -> (std::ops::RangeInclusive<i32>, std::ops::RangeInclusive<i32>) {
        let w = self.window();
        let (p0, q0) = match self {
            KoszulComplex::Upper { m, .. } => mins(m),
            KoszulComplex::Lower { n, .. } => mins(n),
        };
        (p0..=w.d1, (q0 - 1)..=(w.d2 - 1))
    }

    /// Cohomology of one slice: quotients `ker / im` at each position.
    pub fn slice_cohomology(&self, d: Bideg) -> Result<Vec<QuotientPresentation>> {
        let s = self.slice(d)?;
        let k = s.dims.len();
        let mut out = Vec::with_capacity(k);
        for pos in 0..k {
            let f = if pos == 0 { ExactMatrix::zeros(s.dims[0], 0) } else { s.maps[pos - 1].clone() };
            let g = if pos + 1 == k { ExactMatrix::zeros(0, s.dims[pos]) } else { s.maps[pos].clone() };
            out.push(homology(&f, &g, s.dims[pos]).map_err(|_| Error::NotExact {
                degree: d.1,
                reason: format!("differentials do not compose to zero at {d:?}"),
            })?);
        }
        Ok(out)
    }

    /// Kernel of the outgoing differential at the middle of slice `d`, in the
    /// free coordinates of the middle term, relations included.
    pub fn middle_kernel(&self, d: Bideg) -> Result<Subspace> {
        let (module, pos) = match self {
            KoszulComplex::Upper { m, .. } => (m, 0),
            KoszulComplex::Lower { n2, .. } => (n2, 1),
        };
        let deg = if pos == 0 { (d.0 - 1, d.1) } else { d };
        let n = module.free_module().component_dim(deg);
        let Some(comp) = module.component(deg) else { return Ok(Subspace::zero(n)) };
        let s = self.slice(d)?;
        let lifted: Vec<_> = s.maps[pos].kernel().basis_vectors().iter().map(|v| comp.lift(v)).collect();
        Ok(Subspace::span(n, &lifted).sum(&module.denom(deg)))
    }

    /// Lift of a cohomology basis to readable representatives.
    fn representatives(&self, d: Bideg, pos: usize, h: &QuotientPresentation) -> Vec<String> {
        let (p, i) = d;
        let (module, deg) = match self {
            KoszulComplex::Upper { m, .. } => (m, if pos == 0 { (p - 1, i) } else { (p, i + 1) }),
            KoszulComplex::Lower { n, n2 } => match pos {
                0 => (n, (p, i - 1)),
                1 => (n2, (p, i)),
                _ => (n, (p, i + 1)),
            },
        };
        let Some(comp) = module.component(deg) else { return Vec::new() };
        h.section_basis()
            .columns()
            .iter()
            .map(|c| module.free_module().vector_string(deg, &comp.lift(c)))
            .collect()
    }
}

fn mins(m: &BigradedModule) -> (i32, i32) {
    let gens = m.free_module().gens();
    (gens.iter().map(|g| g.deg.0).min().unwrap_or(0), gens.iter().map(|g| g.deg.1).min().unwrap_or(0))
}

fn dim_of(m: &BigradedModule, d: Bideg) -> usize {
    m.dim(d)
}

fn component_map(src: &BigradedModule, dst: &BigradedModule, op: &OperatorAction, d: Bideg) -> Result<ExactMatrix> {
    let t = (d.0 + op.shift.0, d.1 + op.shift.1);
    if src.component(d).is_none() || dst.component(t).is_none() {
        return Ok(ExactMatrix::zeros(dst.dim(t), src.dim(d)));
    }
    src.map_to(dst, op, d)
}

struct Slice {
    maps: Vec<ExactMatrix>,
    dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyEntry {
    pub degree: Bideg,
    pub term_dims: Vec<usize>,
    pub h: Vec<usize>,
    pub representatives: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    pub bundle_rank: usize,
    pub entries: Vec<CohomologyEntry>,
}

impl CohomologyTable {
    pub fn get(&self, d: Bideg) -> Option<&CohomologyEntry> {
        self.entries.iter().find(|e| e.degree == d)
    }

    /// `P ↦ dim H^pos` along slices with index `i`.
    pub fn by_p(&self, i: i32, pos: usize) -> BTreeMap<i32, usize> {
        self.entries.iter().filter(|e| e.degree.1 == i).map(|e| (e.degree.0, e.h[pos])).collect()
    }
}

/// Cohomology of every slice whose terms lie in the window.
pub fn koszul_cohomology(k: &KoszulComplex) -> Result<CohomologyTable> {
    let (ps, is) = k.degree_range();
    let mut entries = Vec::new();
    for i in is {
        for p in ps.clone() {
            let s = k.slice((p, i))?;
            let hs = k.slice_cohomology((p, i))?;
            entries.push(CohomologyEntry {
                degree: (p, i),
                term_dims: s.dims.clone(),
                h: hs.iter().map(QuotientPresentation::dim).collect(),
                representatives: hs.iter().enumerate().map(|(pos, h)| k.representatives((p, i), pos, h)).collect(),
            });
        }
    }
    Ok(CohomologyTable { bundle_rank: k.bundle_rank(), entries })
}

/// The chain map from the upper complex (shifted into degrees 1, 2) to
/// the lower one: `m ↦ (xm, ym)` and the inclusion `M ⊂ N`.
#[derive(Clone, Debug)]
pub struct ComparisonMap {
    pub upper: KoszulComplex,
    pub lower: KoszulComplex,
    pub middle: OperatorAction,
    pub right: OperatorAction,
}

pub fn build_comparison_map(psi: &BigradedModule, phi_log: &OperatorAction, window: Window) -> Result<ComparisonMap> {
    let n = tensor_formula_module(psi, phi_log, window)?;
    let m = psi.truncate(Window::new(window.d1, psi.window().d2));
    let r = psi.free_module().rank();
    let x = RingMatrix::scalar_identity(r, &RingElem::var(Monomial::x(1)));
    let y = RingMatrix::scalar_identity(r, &RingElem::var(Monomial::y(1)));
    let middle = OperatorAction::new("(x, y)", RingMatrix::vstack(&[x, y]), (1, 0));
    let right = OperatorAction::new("incl", RingMatrix::scalar_identity(r, &RingElem::one()), (0, 0));
    let cm = ComparisonMap {
        upper: KoszulComplex::upper(m, phi_log.clone())?,
        lower: KoszulComplex::lower(n)?,
        middle,
        right,
    };
    cm.check_commutes()?;
    Ok(cm)
}

impl ComparisonMap {
    fn parts(&self) -> (&BigradedModule, &OperatorAction, &BigradedModule, &BigradedModule) {
        match (&self.upper, &self.lower) {
            (KoszulComplex::Upper { m, phi }, KoszulComplex::Lower { n, n2 }) => (m, phi, n, n2),
            _ => unreachable!("constructed with upper and lower complexes"),
        }
    }

    /// Vertical maps of slice `(P, i)` in quotient coordinates.
    fn verticals(&self, d: Bideg) -> Result<(ExactMatrix, ExactMatrix)> {
        let (m, _, n, n2) = self.parts();
        let (p, i) = d;
        let v1 = component_map(m, n2, &self.middle, (p - 1, i))?;
        let v2 = component_map(m, n, &self.right, (p, i + 1))?;
        Ok((v1, v2))
    }

    fn interior_degrees(&self) -> Vec<Bideg> {
        let w = self.lower.window();
        let (ps, is) = self.lower.degree_range();
        let mut out = Vec::new();
        for i in is {
            for p in ps.clone() {
                if w.interior((p, i + 1)) {
                    out.push((p, i));
                }
            }
        }
        out
    }

    /// `d1 ∘ (x, y) = incl ∘ φ` on every slice in the window.
    pub fn check_commutes(&self) -> Result<()> {
        let (ps, is) = self.lower.degree_range();
        for i in is {
            for p in ps.clone() {
                let (v1, v2) = self.verticals((p, i))?;
                let lower = self.lower.slice((p, i))?;
                let upper = self.upper.slice((p, i))?;
                let left = &lower.maps[1] * &v1;
                let right = &v2 * &upper.maps[0];
                if left != right {
                    return Err(Error::NonCommutingSquare(format!("slice {:?}", (p, i))));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    HypothesisFailed,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::HypothesisFailed => "hypothesis_failed",
        }
    }

    /// Worst of two statuses, ordered pass < fail < hypothesis_failed.
    pub fn combine(self, o: CheckStatus) -> CheckStatus {
        use CheckStatus::*;
        match (self, o) {
            (HypothesisFailed, _) | (_, HypothesisFailed) => HypothesisFailed,
            (Fail, _) | (_, Fail) => Fail,
            _ => Pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QisEntry {
    pub degree: Bideg,
    pub h_upper: [usize; 2],
    pub h_lower: [usize; 2],
    pub iso: [bool; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QisReport {
    pub status: CheckStatus,
    pub entries: Vec<QisEntry>,
    pub failures: Vec<Bideg>,
    /// `H^0` of the lower complex, which the comparison does not reach.
    pub lower_h0: BTreeMap<String, usize>,
    /// A degree holding an element killed by both `x` and `y`, if any.
    pub hypothesis_witness: Option<Bideg>,
}

/// Degrees `d` of `m` (with `d + (1, 0)` still in the window) containing a
/// nonzero element annihilated by both `x` and `y`.
pub fn xy_torsion_degree(m: &BigradedModule) -> Result<Option<Bideg>> {
    let r = m.free_module().rank();
    let x = OperatorAction::multiplication("x", r, Monomial::x(1));
    let y = OperatorAction::multiplication("y", r, Monomial::y(1));
    for d in m.degrees() {
        if m.dim(d) == 0 || d.0 >= m.window().d1 {
            continue;
        }
        let both = m.act(&x, d)?.vstack(&m.act(&y, d)?);
        if !both.kernel().is_zero() {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Checks that the comparison map induces isomorphisms `H^0(upper) ≅
/// H^1(lower)` and `H^1(upper) ≅ H^2(lower)` on every interior slice.
pub fn verify_qis(map: &ComparisonMap) -> Result<QisReport> {
    let (m, _, _, _) = map.parts();
    let witness = xy_torsion_degree(m)?;
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    let mut lower_h0 = BTreeMap::new();
    for d in map.interior_degrees() {
        let (v1, v2) = map.verticals(d)?;
        let hu = map.upper.slice_cohomology(d)?;
        let hl = map.lower.slice_cohomology(d)?;
        if hl[0].dim() > 0 {
            lower_h0.insert(format!("{},{}", d.0, d.1), hl[0].dim());
        }
        let iso = |v: &ExactMatrix, a: &QuotientPresentation, b: &QuotientPresentation| -> Result<bool> {
            Ok(induced_map(v, a, b)?.is_invertible())
        };
        let iso0 = iso(&v1, &hu[0], &hl[1])?;
        let iso1 = iso(&v2, &hu[1], &hl[2])?;
        if !(iso0 && iso1) {
            failures.push(d);
        }
        entries.push(QisEntry {
            degree: d,
            h_upper: [hu[0].dim(), hu[1].dim()],
            h_lower: [hl[1].dim(), hl[2].dim()],
            iso: [iso0, iso1],
        });
    }
    let status = if witness.is_some() {
        CheckStatus::HypothesisFailed
    } else if failures.is_empty() {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    Ok(QisReport { status, entries, failures, lower_h0, hypothesis_witness: witness })
}

/// Span of `seeds` under the ring variables inside a component, as a
/// subspace of the free coordinates (numerator included).
pub fn submodule_in(module: &BigradedModule, seeds: &[Vec<RingElem>], d: Bideg) -> Result<Subspace> {
    let g = crate::graded::generate_submodule(module, seeds, &[])?;
    Ok(g.module.numer(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vnearby::fixture::{CrossingFixture, SummandKind};

    fn setup(kinds: &[SummandKind], w: Window) -> (BigradedModule, OperatorAction) {
        let f = CrossingFixture::trivial(kinds);
        (f.psi(w).unwrap(), f.phi_log_action())
    }

    #[test]
    fn free_rank_one_slices() {
        let w = Window::new(3, 4);
        let (psi, phi) = setup(&[SummandKind::Full], w);
        let n = tensor_formula_module(&psi, &phi, w).unwrap();
        let t = koszul_cohomology(&KoszulComplex::lower(n).unwrap()).unwrap();
        for i in 1..=2 {
            assert!(t.by_p(i, 0).values().chain(t.by_p(i, 1).values()).chain(t.by_p(i, 2).values()).all(|&h| h == 0));
        }
        assert_eq!(t.by_p(0, 1), BTreeMap::from([(0, 0), (1, 1), (2, 2), (3, 2)]));
        assert_eq!(t.by_p(-1, 2), BTreeMap::from([(0, 1), (1, 2), (2, 2), (3, 2)]));
    }

    #[test]
    fn upper_with_zero_field() {
        let w = Window::new(2, 2);
        let (psi, phi) = setup(&[SummandKind::Full], w);
        let t = koszul_cohomology(&KoszulComplex::upper(psi, phi).unwrap()).unwrap();
        assert_eq!(t.by_p(0, 0), BTreeMap::from([(0, 0), (1, 1), (2, 2)]));
        assert_eq!(t.by_p(-1, 1), BTreeMap::from([(0, 1), (1, 2), (2, 2)]));
    }

    #[test]
    fn qis_for_free_module() {
        let w = Window::new(3, 3);
        let (psi, phi) = setup(&[SummandKind::Full], w);
        let r = verify_qis(&build_comparison_map(&psi, &phi, w).unwrap()).unwrap();
        assert_eq!(r.status, CheckStatus::Pass);
    }

    #[test]
    fn residue_field_fails_hypothesis() {
        let w = Window::new(3, 3);
        let f = crate::graded::FreeModule::new(
            BaseRing::Crossing,
            vec![crate::graded::Generator::new("e", (0, 0))],
            w,
        );
        let k = BigradedModule::presented(f, &[vec!["x".parse().unwrap()], vec!["y".parse().unwrap()]]).unwrap();
        let phi = OperatorAction::new("phi", RingMatrix::zeros(1, 1), (1, 1));
        let r = verify_qis(&build_comparison_map(&k, &phi, w).unwrap()).unwrap();
        assert_eq!(r.status, CheckStatus::HypothesisFailed);
        assert_eq!(r.hypothesis_witness, Some((0, 0)));
    }
}
