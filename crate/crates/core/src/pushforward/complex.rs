use serde::Serialize;

use super::curve::NodalCurve;
use super::sheaf::{common_bound, SheafMap, SheafModel, SheafOnNodalCurve};
use crate::error::{Error, Result};
use crate::graded::homology;
use crate::linalg::subspace::induced_map;
use crate::linalg::{ExactMatrix, QuotientPresentation};

/// A bounded complex of sheaves on a nodal curve, first term in degree
/// `start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafComplex {
    pub start: i32,
    pub terms: Vec<SheafOnNodalCurve>,
    pub maps: Vec<SheafMap>,
}

impl SheafComplex {
    pub fn two_term(f0: SheafOnNodalCurve, f1: SheafOnNodalCurve, phi: SheafMap) -> Self {
        SheafComplex { start: 0, terms: vec![f0, f1], maps: vec![phi] }
    }

    pub fn term(&self, degree: i32) -> Option<&SheafOnNodalCurve> {
        usize::try_from(degree - self.start).ok().and_then(|i| self.terms.get(i))
    }

    pub fn validate(&self, curve: &NodalCurve) -> Result<()> {
        if self.maps.len() + 1 != self.terms.len() {
            return Err(Error::InvalidCurve("a complex of n terms has n - 1 maps".into()));
        }
        for (i, m) in self.maps.iter().enumerate() {
            m.validate(curve, &self.terms[i], &self.terms[i + 1])?;
        }
        for i in 1..self.maps.len() {
            if !self.maps[i].compose(&self.maps[i - 1]).is_zero() {
                return Err(Error::NotExact { degree: self.start + i as i32, reason: "d ∘ d != 0".into() });
            }
        }
        Ok(())
    }
}

/// The total complex of `RΓ` applied termwise, with the sign `(-1)^p` on
/// the Čech differential of the degree-`p` term.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    pub start: i32,
    /// Dimensions of `Tot^n` for `n = start ..= start + terms`.
    pub spaces: Vec<usize>,
    /// `d[k] : Tot^{start+k} → Tot^{start+k+1}`.
    pub d: Vec<ExactMatrix>,
    models: Vec<SheafModel>,
    off0: Vec<usize>,
    off1: Vec<usize>,
}

/// Adds `dims` to `slots` pairwise, returning the previous values.
fn offsets(slots: &mut [usize], dims: impl Iterator<Item = usize>) -> Vec<usize> {
    slots.iter_mut().zip(dims).map(|(s, d)| std::mem::replace(s, *s + d)).collect()
}

impl TotalComplex {
    pub fn new(curve: &NodalCurve, cx: &SheafComplex, bound: i64) -> Result<Self> {
        cx.validate(curve)?;
        let models =
            cx.terms.iter().map(|t| SheafModel::new(curve, t, bound)).collect::<Result<Vec<_>>>()?;
        let n = cx.terms.len();
        let mut spaces = vec![0; n + 1];
        let off1 = offsets(&mut spaces[1..], models.iter().map(|m| m.dim1));
        let off0 = offsets(&mut spaces[..n], models.iter().map(|m| m.dim0));
        let mut d: Vec<ExactMatrix> = (0..n).map(|k| ExactMatrix::zeros(spaces[k + 1], spaces[k])).collect();
        for p in 0..n {
            let sign = if (cx.start + p as i32).rem_euclid(2) == 0 { 1 } else { -1 };
            let dm = if sign == 1 { models[p].d.clone() } else { -&models[p].d };
            put(&mut d[p], off1[p], off0[p], &dm);
            if p + 1 < n {
                let (m0, m1) = models[p].map_to(&models[p + 1], curve, &cx.maps[p], &cx.terms[p], &cx.terms[p + 1])?;
                put(&mut d[p], off0[p + 1], off0[p], &m0);
                put(&mut d[p + 1], off1[p + 1], off1[p], &m1);
            }
        }
        for k in 1..n {
            if !(&d[k] * &d[k - 1]).is_zero() {
                return Err(Error::NotExact { degree: cx.start + k as i32, reason: "total differential squares to a nonzero map".into() });
            }
        }
        Ok(TotalComplex { start: cx.start, spaces, d, models, off0, off1 })
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.start..=self.start + self.spaces.len() as i32 - 1
    }

    fn index(&self, n: i32) -> Option<usize> {
        usize::try_from(n - self.start).ok().filter(|&i| i < self.spaces.len())
    }

    pub fn space(&self, n: i32) -> usize {
        self.index(n).map_or(0, |i| self.spaces[i])
    }

    /// `d : Tot^n → Tot^{n+1}`.
    pub fn differential(&self, n: i32) -> ExactMatrix {
        match self.index(n) {
            Some(i) if i < self.d.len() => self.d[i].clone(),
            _ => ExactMatrix::zeros(self.space(n + 1), self.space(n)),
        }
    }

    pub fn cohomology(&self, n: i32) -> Result<QuotientPresentation> {
        homology(&self.differential(n - 1), &self.differential(n), self.space(n))
    }

    /// The map `Tot(A)^n → Tot(B)^n` induced by termwise sheaf maps
    /// `maps[k] : A^{a.start+k} → B^{a.start+k}`.
    pub fn chain_map(
        &self,
        curve: &NodalCurve,
        source: &SheafComplex,
        target_tot: &TotalComplex,
        target: &SheafComplex,
        maps: &[SheafMap],
    ) -> Result<Vec<ExactMatrix>> {
        let mut out: Vec<ExactMatrix> =
            self.degrees().map(|n| ExactMatrix::zeros(target_tot.space(n), self.space(n))).collect();
        for (k, f) in maps.iter().enumerate() {
            let deg = source.start + k as i32;
            let tp = usize::try_from(deg - target.start)
                .ok()
                .filter(|&i| i < target.terms.len())
                .ok_or_else(|| Error::DimensionMismatch(format!("target has no term in degree {deg}")))?;
            let (m0, m1) =
                self.models[k].map_to(&target_tot.models[tp], curve, f, &source.terms[k], &target.terms[tp])?;
            let i0 = self.index(deg).expect("term degree");
            put(&mut out[i0], target_tot.off0[tp], self.off0[k], &m0);
            put(&mut out[i0 + 1], target_tot.off1[tp], self.off1[k], &m1);
        }
        for n in self.degrees() {
            let i = self.index(n).expect("in range");
            let lhs = &target_tot.differential(n) * &out[i];
            let rhs = match self.index(n + 1) {
                Some(j) => &out[j] * &self.differential(n),
                None => ExactMatrix::zeros(target_tot.space(n + 1), self.space(n)),
            };
            if lhs != rhs {
                return Err(Error::NonCommutingSquare(format!("termwise maps are not a chain map in degree {n}")));
            }
        }
        Ok(out)
    }
}

fn put(m: &mut ExactMatrix, row: usize, col: usize, block: &ExactMatrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            m.set(row + i, col + j, block.get(i, j).clone());
        }
    }
}

/// `ℍ^n` of a two-term complex `[F0 → F1]`, with the `E₂` page of the
/// column spectral sequence alongside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberCohomology {
    pub dims: [usize; 3],
    /// `(h⁰, h¹)` of `F0` and of `F1`.
    pub terms: [(usize, usize); 2],
    /// `ker H⁰φ`, `coker H⁰φ ⊕ ker H¹φ`, `coker H¹φ`.
    pub e2: [usize; 3],
}

impl FiberCohomology {
    pub fn euler(&self) -> i64 {
        self.dims[0] as i64 - self.dims[1] as i64 + self.dims[2] as i64
    }
}

pub fn fiber_hypercohomology(curve: &NodalCurve, cx: &SheafComplex) -> Result<FiberCohomology> {
    curve.validate()?;
    if cx.terms.len() != 2 || cx.start != 0 {
        return Err(Error::DimensionMismatch("expected a two-term complex in degrees 0, 1".into()));
    }
    let bound = common_bound(&cx.terms.iter().collect::<Vec<_>>());
    let tot = TotalComplex::new(curve, cx, bound)?;
    let dims = [tot.cohomology(0)?.dim(), tot.cohomology(1)?.dim(), tot.cohomology(2)?.dim()];
    let (m0, m1) = (&tot.models[0], &tot.models[1]);
    let (phi0, phi1) = m0.map_to(m1, curve, &cx.maps[0], &cx.terms[0], &cx.terms[1])?;
    let h = |m: &SheafModel| -> Result<(QuotientPresentation, QuotientPresentation)> {
        let zero_in = ExactMatrix::zeros(m.dim0, 0);
        let zero_out = ExactMatrix::zeros(0, m.dim1);
        Ok((homology(&zero_in, &m.d, m.dim0)?, homology(&m.d, &zero_out, m.dim1)?))
    };
    let (a0, a1) = h(m0)?;
    let (b0, b1) = h(m1)?;
    let r0 = induced_map(&phi0, &a0, &b0)?.rank();
    let r1 = induced_map(&phi1, &a1, &b1)?.rank();
    let e2 = [a0.dim() - r0, (b0.dim() - r0) + (a1.dim() - r1), b1.dim() - r1];
    Ok(FiberCohomology { dims, terms: [(a0.dim(), a1.dim()), (b0.dim(), b1.dim())], e2 })
}

/// The connecting map `ℍ^n(C) → ℍ^{n+1}(A)` of a termwise short exact
/// sequence `0 → A → B → C → 0` of complexes, in the canonical bases.
#[derive(Clone, Debug)]
pub struct ConnectingMap {
    pub degree: i32,
    pub matrix: ExactMatrix,
    pub source: QuotientPresentation,
    pub target: QuotientPresentation,
}

/// Checks that `f` and `g` are injective, surjective and exact in the
/// middle in every total degree, then computes the connecting map in degree
/// `n`.
pub fn connecting_map(
    a: &TotalComplex,
    b: &TotalComplex,
    c: &TotalComplex,
    f: &[ExactMatrix],
    g: &[ExactMatrix],
    n: i32,
) -> Result<ConnectingMap> {
    for k in b.degrees() {
        let fk = pick(a, b, f, k);
        let gk = pick(b, c, g, k);
        let ok = fk.rank() == a.space(k)
            && gk.rank() == c.space(k)
            && (&gk * &fk).is_zero()
            && a.space(k) + c.space(k) == b.space(k);
        if !ok {
            return Err(Error::NotExact { degree: k, reason: "total complexes do not form a short exact sequence".into() });
        }
    }
    let source = c.cohomology(n)?;
    let target = a.cohomology(n + 1)?;
    let g_n = pick(b, c, g, n);
    let f_next = pick(a, b, f, n + 1);
    let db = b.differential(n);
    let mut cols = Vec::new();
    for v in source.section_basis().columns() {
        let lift = g_n.solve(&v).expect("g is surjective");
        let w = db.apply(&lift);
        let pre = f_next.solve(&w).ok_or_else(|| Error::NotExact {
            degree: n + 1,
            reason: "boundary of a lift is not in the image of f".into(),
        })?;
        cols.push(target.reduce(&pre)?);
    }
    let matrix = if cols.is_empty() {
        ExactMatrix::zeros(target.dim(), 0)
    } else {
        ExactMatrix::from_columns(target.dim(), &cols)
    };
    Ok(ConnectingMap { degree: n, matrix, source, target })
}

fn pick(src: &TotalComplex, dst: &TotalComplex, maps: &[ExactMatrix], n: i32) -> ExactMatrix {
    match src.index(n) {
        Some(i) => maps[i].clone(),
        None => ExactMatrix::zeros(dst.space(n), 0),
    }
}
