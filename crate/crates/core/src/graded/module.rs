use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ring::{add, sub, BaseRing, Bideg, Monomial, RingElem, RingMatrix};
use crate::error::{Error, Result};
use crate::linalg::{induced_map, ExactMatrix, QuotientPresentation, Rational, Subspace};

/// Truncation bounds: bidegrees `(P, Q)` with `P <= d1`, `Q <= d2`; in the
/// Laurent ring exponents of `x` and `y` are at least `-pole`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub d1: i32,
    pub d2: i32,
    #[serde(default)]
    pub pole: u32,
}

impl Window {
    pub fn new(d1: i32, d2: i32) -> Self {
        Window { d1, d2, pole: 0 }
    }

    pub fn with_pole(self, pole: u32) -> Self {
        Window { pole, ..self }
    }

    pub fn contains(&self, d: Bideg) -> bool {
        d.0 <= self.d1 && d.1 <= self.d2
    }

    /// Excludes the outermost layer, where generation may be clipped.
    pub fn interior(&self, d: Bideg) -> bool {
        d.0 < self.d1 && d.1 < self.d2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub deg: Bideg,
}

impl Generator {
    pub fn new(name: impl Into<String>, deg: Bideg) -> Self {
        Generator { name: name.into(), deg }
    }
}

/// One basis element of a free component: generator index and monomial.
pub type BasisLabel = (usize, Monomial);

#[derive(Clone, Debug)]
struct FreeComponent {
    basis: Vec<BasisLabel>,
    index: HashMap<BasisLabel, usize>,
}

/// The free module `⊕ R g_i` truncated to a window.
#[derive(Clone, Debug)]
pub struct FreeModule {
    ring: BaseRing,
    gens: Vec<Generator>,
    window: Window,
    comps: BTreeMap<Bideg, FreeComponent>,
}

impl PartialEq for FreeModule {
    fn eq(&self, o: &Self) -> bool {
        self.ring == o.ring && self.gens == o.gens && self.window == o.window
    }
}

impl FreeModule {
    pub fn new(ring: BaseRing, gens: Vec<Generator>, window: Window) -> Self {
        let mut comps = BTreeMap::new();
        if !gens.is_empty() {
            let p_min = gens.iter().map(|g| g.deg.0).min().unwrap();
            let q_min = gens.iter().map(|g| g.deg.1).min().unwrap();
            let p_low = match ring {
                BaseRing::LaurentS => p_min - 2 * window.pole as i32,
                _ => p_min,
            };
            for q in q_min..=window.d2 {
                for p in p_low..=window.d1 {
                    let mut basis = Vec::new();
                    for (i, g) in gens.iter().enumerate() {
                        for m in ring.monomials(sub((p, q), g.deg), window.pole) {
                            basis.push((i, m));
                        }
                    }
                    if !basis.is_empty() {
                        let index = basis.iter().enumerate().map(|(k, l)| (*l, k)).collect();
                        comps.insert((p, q), FreeComponent { basis, index });
                    }
                }
            }
        }
        FreeModule { ring, gens, window, comps }
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Bidegrees with a nonzero free component, in increasing `(Q, P)` order.
    pub fn degrees(&self) -> impl Iterator<Item = Bideg> + '_ {
        self.comps.keys().copied()
    }

    pub fn component_dim(&self, d: Bideg) -> usize {
        self.comps.get(&d).map_or(0, |c| c.basis.len())
    }

    pub fn basis(&self, d: Bideg) -> &[BasisLabel] {
        self.comps.get(&d).map_or(&[], |c| c.basis.as_slice())
    }

    pub fn index_of(&self, d: Bideg, label: &BasisLabel) -> Option<usize> {
        self.comps.get(&d)?.index.get(label).copied()
    }

    /// Coordinates of a homogeneous element `Σ c_i g_i`. Returns its bidegree
    /// (or `None` for zero) and the vector.
    pub fn element(&self, coeffs: &[RingElem]) -> Result<Option<(Bideg, Vec<Rational>)>> {
        if coeffs.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "element has {} coordinates, module has rank {}",
                coeffs.len(),
                self.rank()
            )));
        }
        let mut deg = None;
        let mut terms = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            for (m, a) in c.reduce_in(self.ring).terms() {
                if !self.ring.admits(m) {
                    return Err(Error::Parse(format!("monomial {m} is not in {}", self.ring.name())));
                }
                let d = add(m.bideg(), self.gens[i].deg);
                if *deg.get_or_insert(d) != d {
                    return Err(Error::Validation {
                        path: "element".into(),
                        message: "element is not homogeneous".into(),
                    });
                }
                terms.push(((i, *m), a.clone()));
            }
        }
        let Some(d) = deg else { return Ok(None) };
        let mut v = vec![Rational::zero(); self.component_dim(d)];
        for (label, a) in terms {
            let k = self.index_of(d, &label).ok_or_else(|| {
                Error::InvalidWindow(format!("element of degree {d:?} lies outside the window"))
            })?;
            v[k] += a;
        }
        Ok(Some((d, v)))
    }

    /// Matrix of a homogeneous map from component `d` of `self` into
    /// component `d + map.shift` of `target`. The flag lists source columns
    /// whose images lost terms to truncation.
    pub fn map_component(&self, target: &FreeModule, map: &OperatorAction, d: Bideg) -> (ExactMatrix, Vec<bool>) {
        let t = add(d, map.shift);
        let src = self.basis(d);
        let rows = target.component_dim(t);
        let mut m = ExactMatrix::zeros(rows, src.len());
        let mut lost = vec![false; src.len()];
        for (col, (j, mono)) in src.iter().enumerate() {
            for i in 0..map.matrix.rows {
                for (a, c) in map.matrix.get(i, *j).terms() {
                    let prod = a.mul(mono);
                    if !target.ring.admits(&prod) {
                        continue;
                    }
                    match target.index_of(t, &(i, prod)) {
                        Some(r) => {
                            let cur = m.get(r, col) + c;
                            m.set(r, col, cur);
                        }
                        None => lost[col] = true,
                    }
                }
            }
        }
        (m, lost)
    }

    pub fn label_string(&self, label: &BasisLabel) -> String {
        let (i, m) = label;
        if m.is_one() {
            self.gens[*i].name.clone()
        } else {
            format!("{m}*{}", self.gens[*i].name)
        }
    }

    /// Human-readable form of a coordinate vector in component `d`.
    pub fn vector_string(&self, d: Bideg, v: &[Rational]) -> String {
        let mut e = Vec::new();
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let label = self.label_string(&self.basis(d)[k]);
                e.push(if c == &Rational::from_integer(1.into()) {
                    label
                } else {
                    format!("{}*{label}", crate::linalg::rational::fmt_rational(c))
                });
            }
        }
        if e.is_empty() {
            "0".into()
        } else {
            e.join(" + ")
        }
    }
}

/// A homogeneous ring-linear map between free modules, given by a matrix of
/// ring elements and a bidegree shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorAction {
    pub name: String,
    pub matrix: RingMatrix,
    pub shift: Bideg,
}

impl OperatorAction {
    pub fn new(name: impl Into<String>, matrix: RingMatrix, shift: Bideg) -> Self {
        OperatorAction { name: name.into(), matrix, shift }
    }

    /// Multiplication by a monomial on a free module of the given rank.
    pub fn multiplication(name: &str, rank: usize, m: Monomial) -> Self {
        OperatorAction::new(name, RingMatrix::scalar_identity(rank, &RingElem::var(m)), m.bideg())
    }

    /// Verifies that every entry is compatible with the generator degrees.
    pub fn check_homogeneous(&self, src: &FreeModule, tgt: &FreeModule) -> Result<()> {
        if self.matrix.rows != tgt.rank() || self.matrix.cols != src.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} is {}x{}, expected {}x{}",
                self.name,
                self.matrix.rows,
                self.matrix.cols,
                tgt.rank(),
                src.rank()
            )));
        }
        for i in 0..self.matrix.rows {
            for j in 0..self.matrix.cols {
                for (m, _) in self.matrix.get(i, j).terms() {
                    if add(m.bideg(), tgt.gens[i].deg) != add(src.gens[j].deg, self.shift) {
                        return Err(Error::Validation {
                            path: format!("{}[{i}][{j}]", self.name),
                            message: format!("term {m} is not homogeneous of shift {:?}", self.shift),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn compose(&self, then: &OperatorAction, ring: BaseRing) -> OperatorAction {
        OperatorAction::new(
            format!("{}*{}", then.name, self.name),
            then.matrix.mul_in(&self.matrix, ring),
            add(self.shift, then.shift),
        )
    }
}

/// The multiplications by ring variables that every submodule is closed under.
pub fn ring_variable_ops(ring: BaseRing, rank: usize) -> Vec<OperatorAction> {
    let mut v = vec![
        OperatorAction::multiplication("x", rank, Monomial::x(1)),
        OperatorAction::multiplication("y", rank, Monomial::y(1)),
    ];
    if ring == BaseRing::CrossingUv {
        v.push(OperatorAction::multiplication("u", rank, Monomial::u(1)));
        v.push(OperatorAction::multiplication("v", rank, Monomial::v(1)));
    }
    v
}

/// A subquotient `numer / denom` of a truncated free module, one exact
/// quotient space per bidegree.
#[derive(Clone, Debug)]
pub struct BigradedModule {
    free: FreeModule,
    comps: BTreeMap<Bideg, QuotientPresentation>,
}

impl BigradedModule {
    pub fn free(free: FreeModule) -> Self {
        let comps = free
            .degrees()
            .map(|d| (d, QuotientPresentation::whole(free.component_dim(d))))
            .collect();
        BigradedModule { free, comps }
    }

    /// The free module modulo the submodule generated by `relations`.
    pub fn presented(free: FreeModule, relations: &[Vec<RingElem>]) -> Result<Self> {
        let ambient = BigradedModule::free(free);
        let rel = generate_submodule(&ambient, relations, &[])?;
        quotient_module(&ambient, &rel.module)
    }

    fn from_parts(free: FreeModule, numer: BTreeMap<Bideg, Subspace>, denom: BTreeMap<Bideg, Subspace>) -> Result<Self> {
        let mut comps = BTreeMap::new();
        for d in free.degrees().collect::<Vec<_>>() {
            let n = free.component_dim(d);
            let a = numer.get(&d).cloned().unwrap_or_else(|| Subspace::zero(n));
            let b = denom.get(&d).cloned().unwrap_or_else(|| Subspace::zero(n));
            comps.insert(d, QuotientPresentation::new(a, b)?);
        }
        Ok(BigradedModule { free, comps })
    }

    pub fn free_module(&self) -> &FreeModule {
        &self.free
    }

    pub fn ring(&self) -> BaseRing {
        self.free.ring
    }

    pub fn window(&self) -> Window {
        self.free.window
    }

    pub fn degrees(&self) -> impl Iterator<Item = Bideg> + '_ {
        self.comps.keys().copied()
    }

    pub fn component(&self, d: Bideg) -> Option<&QuotientPresentation> {
        self.comps.get(&d)
    }

    fn component_or_zero(&self, d: Bideg) -> QuotientPresentation {
        self.comps.get(&d).cloned().unwrap_or_else(|| QuotientPresentation::whole(0))
    }

    pub fn dim(&self, d: Bideg) -> usize {
        self.comps.get(&d).map_or(0, QuotientPresentation::dim)
    }

    /// Nonzero component dimensions.
    pub fn dims(&self) -> BTreeMap<Bideg, usize> {
        self.comps.iter().filter(|(_, c)| c.dim() > 0).map(|(d, c)| (*d, c.dim())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|c| c.dim() == 0)
    }

    pub fn numer(&self, d: Bideg) -> Subspace {
        self.comps.get(&d).map_or_else(|| Subspace::zero(0), |c| c.ambient().clone())
    }

    pub fn denom(&self, d: Bideg) -> Subspace {
        self.comps.get(&d).map_or_else(|| Subspace::zero(0), |c| c.sub().clone())
    }

    /// Matrix of the map induced by `op` from component `d` to component
    /// `d + op.shift` of `target`, in quotient coordinates.
    pub fn map_to(&self, target: &BigradedModule, op: &OperatorAction, d: Bideg) -> Result<ExactMatrix> {
        let t = add(d, op.shift);
        if !target.window().contains(t) {
            return Err(Error::InvalidWindow(format!("{} maps {d:?} outside the window", op.name)));
        }
        let (m, _) = self.free.map_component(&target.free, op, d);
        let src = self.component_or_zero(d);
        let dst = target.component_or_zero(t);
        if m.cols() != src.ambient_dim() || m.rows() != dst.ambient_dim() {
            return Err(Error::DimensionMismatch(format!("{} at {d:?}", op.name)));
        }
        induced_map(&m, &src, &dst)
    }

    /// Endomorphism version of [`map_to`](Self::map_to).
    pub fn act(&self, op: &OperatorAction, d: Bideg) -> Result<ExactMatrix> {
        self.map_to(self, op, d)
    }

    /// Checks that `op` induces a well-defined map on every component whose
    /// target lies in the window.
    pub fn check_linear(&self, target: &BigradedModule, op: &OperatorAction) -> Result<()> {
        op.check_homogeneous(&self.free, &target.free)?;
        for d in self.degrees() {
            let t = add(d, op.shift);
            if target.window().contains(t) {
                self.map_to(target, op, d).map_err(|_| {
                    Error::NotLinear(format!("{} is not well defined on degree {d:?}", op.name))
                })?;
            }
        }
        Ok(())
    }

    /// Restriction to a smaller window (same pole bound).
    pub fn truncate(&self, window: Window) -> BigradedModule {
        let w = Window {
            d1: window.d1.min(self.window().d1),
            d2: window.d2.min(self.window().d2),
            pole: self.window().pole,
        };
        let free = FreeModule::new(self.ring(), self.free.gens.clone(), w);
        let comps = free.degrees().map(|d| (d, self.comps[&d].clone())).collect();
        BigradedModule { free, comps }
    }

    /// Representatives of a basis of component `d`, as strings.
    pub fn basis_strings(&self, d: Bideg) -> Vec<String> {
        match self.comps.get(&d) {
            Some(c) => c
                .section_basis()
                .columns()
                .iter()
                .map(|v| self.free.vector_string(d, v))
                .collect(),
            None => Vec::new(),
        }
    }
}

pub fn direct_sum(parts: &[&BigradedModule]) -> Result<BigradedModule> {
    let first = parts.first().ok_or_else(|| Error::DimensionMismatch("empty direct sum".into()))?;
    let ring = first.ring();
    let window = first.window();
    if parts.iter().any(|p| p.ring() != ring || p.window() != window) {
        return Err(Error::DimensionMismatch("direct sum needs equal rings and windows".into()));
    }
    let gens: Vec<Generator> = parts.iter().flat_map(|p| p.free.gens.iter().cloned()).collect();
    let free = FreeModule::new(ring, gens, window);
    let mut numer = BTreeMap::new();
    let mut denom = BTreeMap::new();
    for d in free.degrees().collect::<Vec<_>>() {
        let n = free.component_dim(d);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        let mut offset = 0;
        for p in parts {
            let k = p.free.component_dim(d);
            let pad = |v: Vec<Rational>| {
                let mut w = vec![Rational::zero(); n];
                w[offset..offset + k].clone_from_slice(&v);
                w
            };
            a.extend(p.numer(d).basis_vectors().into_iter().filter(|v| v.len() == k).map(pad));
            b.extend(p.denom(d).basis_vectors().into_iter().filter(|v| v.len() == k).map(pad));
            offset += k;
        }
        numer.insert(d, Subspace::span(n, &a));
        denom.insert(d, Subspace::span(n, &b));
    }
    BigradedModule::from_parts(free, numer, denom)
}

/// Result of [`generate_submodule`].
#[derive(Clone, Debug)]
pub struct Generated {
    pub module: BigradedModule,
    /// Bidegrees from which an operator pushed nonzero elements past the
    /// window.
    pub clipped: BTreeSet<Bideg>,
}

impl Generated {
    pub fn window_clipping(&self) -> bool {
        !self.clipped.is_empty()
    }
}

/// Smallest submodule of `ambient` containing `seeds` and stable under the
/// ring variables and `ops`, computed degree by degree inside the window.
pub fn generate_submodule(
    ambient: &BigradedModule,
    seeds: &[Vec<RingElem>],
    ops: &[OperatorAction],
) -> Result<Generated> {
    let free = &ambient.free;
    let mut all_ops = ring_variable_ops(free.ring, free.rank());
    for op in ops {
        ambient.check_linear(ambient, op)?;
        all_ops.push(op.clone());
    }
    let mut span: BTreeMap<Bideg, Subspace> = ambient.degrees().map(|d| (d, ambient.denom(d))).collect();
    let mut pending: BTreeSet<(i32, Bideg)> = BTreeSet::new();
    for s in seeds {
        let Some((d, v)) = free.element(s)? else { continue };
        if !ambient.numer(d).contains(&v) {
            return Err(Error::ContainmentViolation(format!("seed of degree {d:?} is outside the module")));
        }
        let cur = span.get_mut(&d).expect("element() found this component");
        *cur = cur.sum(&Subspace::span(v.len(), &[v]));
        pending.insert((d.0 + d.1, d));
    }
    let mut matrices: Vec<HashMap<Bideg, (ExactMatrix, Vec<bool>)>> =
        all_ops.iter().map(|_| HashMap::new()).collect();
    let mut clipped = BTreeSet::new();
    while let Some((_, d)) = pending.pop_first() {
        let here = span[&d].clone();
        if here == ambient.denom(d) {
            continue;
        }
        for (k, op) in all_ops.iter().enumerate() {
            let t = add(d, op.shift);
            let (m, lost) = matrices[k].entry(d).or_insert_with(|| free.map_component(free, op, d));
            let touches_lost = |v: &Vec<Rational>| v.iter().zip(lost.iter()).any(|(c, l)| *l && !c.is_zero());
            if here.basis_vectors().iter().any(touches_lost) {
                clipped.insert(d);
            }
            if !span.contains_key(&t) {
                continue;
            }
            let image = here.image_under(m);
            let target = span.get_mut(&t).unwrap();
            if !target.contains_subspace(&image) {
                *target = target.sum(&image);
                pending.insert((t.0 + t.1, t));
            }
        }
    }
    let numer = span;
    let denom = ambient.degrees().map(|d| (d, ambient.denom(d))).collect();
    Ok(Generated { module: BigradedModule::from_parts(free.clone(), numer, denom)?, clipped })
}

/// `big / small` for a submodule `small` of `big` (same free cover).
pub fn quotient_module(big: &BigradedModule, small: &BigradedModule) -> Result<BigradedModule> {
    if big.free != small.free {
        return Err(Error::DimensionMismatch("quotient of modules with different free covers".into()));
    }
    let mut numer = BTreeMap::new();
    let mut denom = BTreeMap::new();
    for d in big.degrees() {
        let (bn, sn) = (big.numer(d), small.numer(d));
        if !bn.contains_subspace(&sn) || !sn.contains_subspace(&big.denom(d)) {
            return Err(Error::ContainmentViolation(format!("submodule not contained in degree {d:?}")));
        }
        numer.insert(d, bn);
        denom.insert(d, sn);
    }
    BigradedModule::from_parts(big.free.clone(), numer, denom)
}

/// Base change of a module over `k[x,y]/(xy)` to `k[x,y,u,v]/(xy)`:
/// `M[u,v]` with component `(P, Q)` equal to `⊕ M_(P, Q - j) u^a v^b`.
pub fn extend_uv(m: &BigradedModule, window: Window) -> Result<BigradedModule> {
    if m.ring() != BaseRing::Crossing {
        return Err(Error::Validation {
            path: "ring".into(),
            message: "u, v extension needs a module over k[x,y]/(xy)".into(),
        });
    }
    if window.d1 > m.window().d1 {
        return Err(Error::InvalidWindow("target window exceeds the (x,y)-window of the module".into()));
    }
    let free = FreeModule::new(BaseRing::CrossingUv, m.free.gens.clone(), window);
    let mut numer = BTreeMap::new();
    let mut denom = BTreeMap::new();
    for d in free.degrees().collect::<Vec<_>>() {
        let n = free.component_dim(d);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (src, comp) in &m.comps {
            if src.0 != d.0 || src.1 > d.1 {
                continue;
            }
            let j = (d.1 - src.1) as u32;
            for c in 0..=j {
                let uv = Monomial { u: c, v: j - c, ..Monomial::ONE };
                let lift = |vecs: Vec<Vec<Rational>>| -> Vec<Vec<Rational>> {
                    vecs.into_iter()
                        .map(|v| {
                            let mut w = vec![Rational::zero(); n];
                            for (k, x) in v.iter().enumerate() {
                                if !x.is_zero() {
                                    let (g, mono) = m.free.basis(*src)[k];
                                    let idx = free.index_of(d, &(g, mono.mul(&uv))).expect("monomial in window");
                                    w[idx] = x.clone();
                                }
                            }
                            w
                        })
                        .collect()
                };
                a.extend(lift(comp.ambient().basis_vectors()));
                b.extend(lift(comp.sub().basis_vectors()));
            }
        }
        numer.insert(d, Subspace::span(n, &a));
        denom.insert(d, Subspace::span(n, &b));
    }
    BigradedModule::from_parts(free, numer, denom)
}

/// `ψ[u,v] / (xu - yv - φ_log) ψ[u,v]`, truncated to `window`.
pub fn tensor_formula_module(psi: &BigradedModule, phi_log: &OperatorAction, window: Window) -> Result<BigradedModule> {
    if phi_log.shift != (1, 1) {
        return Err(Error::Validation {
            path: phi_log.name.clone(),
            message: format!("φ_log must have bidegree (1, 1), got {:?}", phi_log.shift),
        });
    }
    psi.check_linear(psi, phi_log)?;
    let ext = extend_uv(psi, window)?;
    let r = psi.free.rank();
    let w = RingMatrix::scalar_identity(r, &"x*u - y*v".parse()?).sub(&phi_log.matrix);
    let w_op = OperatorAction::new("xu-yv-phi", w, (1, 1));
    let mut denom = BTreeMap::new();
    for d in ext.degrees() {
        let mut sub_d = ext.denom(d);
        let s = sub(d, (1, 1));
        if ext.comps.contains_key(&s) {
            let (m, _) = ext.free.map_component(&ext.free, &w_op, s);
            sub_d = sub_d.sum(&ext.numer(s).image_under(&m));
        }
        denom.insert(d, sub_d);
    }
    let numer = ext.degrees().map(|d| (d, ext.numer(d))).collect();
    BigradedModule::from_parts(ext.free.clone(), numer, denom)
}

/// Cohomology `ker g / im f` of `A --f--> B --g--> C` in coordinates of `B`.
pub fn homology(f: &ExactMatrix, g: &ExactMatrix, dim_b: usize) -> Result<QuotientPresentation> {
    let ker = if g.rows() == 0 { Subspace::full(dim_b) } else { g.kernel() };
    let im = if f.cols() == 0 { Subspace::zero(dim_b) } else { f.image() };
    QuotientPresentation::new(ker, im)
        .map_err(|_| Error::NotExact { degree: 0, reason: "composite of differentials is nonzero".into() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elem(s: &str) -> RingElem {
        s.parse().unwrap()
    }

    fn a_module(window: Window) -> BigradedModule {
        BigradedModule::free(FreeModule::new(BaseRing::Crossing, vec![Generator::new("e", (0, 0))], window))
    }

    #[test]
    fn crossing_ring_components() {
        let a = a_module(Window::new(2, 0));
        assert_eq!((a.dim((0, 0)), a.dim((1, 0)), a.dim((2, 0))), (1, 2, 2));
        let auv = BigradedModule::free(FreeModule::new(
            BaseRing::CrossingUv,
            vec![Generator::new("e", (0, 0))],
            Window::new(1, 1),
        ));
        assert_eq!(auv.dim((1, 1)), 4);
        let x = OperatorAction::multiplication("x", 1, Monomial::x(1));
        let y = OperatorAction::multiplication("y", 1, Monomial::y(1));
        let n = BigradedModule::presented(
            FreeModule::new(BaseRing::CrossingUv, vec![Generator::new("e", (0, 0))], Window::new(1, 1)),
            &[vec![elem("x*u - y*v")]],
        )
        .unwrap();
        assert_eq!(n.dim((1, 1)), 3);
        let a2 = a_module(Window::new(3, 0));
        for p in 0..2 {
            let mx = a2.act(&x, (p, 0)).unwrap();
            let my = a2.act(&y, (p + 1, 0)).unwrap();
            assert!((&my * &mx).is_zero());
        }
    }

    #[test]
    fn residue_field_quotient() {
        let a = a_module(Window::new(2, 0));
        let m = generate_submodule(&a, &[vec![elem("x")], vec![elem("y")]], &[]).unwrap();
        let k = quotient_module(&a, &m.module).unwrap();
        assert_eq!(k.dims(), BTreeMap::from([((0, 0), 1)]));
        assert!(quotient_module(&a, &a).unwrap().is_zero());
        assert!(quotient_module(&m.module, &a).is_err());
    }

    #[test]
    fn zero_seed_generates_zero() {
        let a = a_module(Window::new(2, 0));
        let g = generate_submodule(&a, &[vec![RingElem::zero()]], &[]).unwrap();
        assert!(g.module.is_zero());
        assert!(!g.window_clipping());
    }

    #[test]
    fn four_block_basis() {
        let psi = a_module(Window::new(1, 0));
        let phi = OperatorAction::new("phi", RingMatrix::zeros(1, 1), (1, 1));
        let n = tensor_formula_module(&psi, &phi, Window::new(1, 1)).unwrap();
        assert_eq!(n.dim((0, 1)) + n.dim((1, 1)), 5);
        let psi_x = BigradedModule::presented(
            FreeModule::new(BaseRing::Crossing, vec![Generator::new("e", (0, 0))], Window::new(1, 0)),
            &[vec![elem("x")]],
        )
        .unwrap();
        let n = tensor_formula_module(&psi_x, &phi, Window::new(1, 1)).unwrap();
        assert_eq!(n.dim((1, 1)), 1);
        assert_eq!(n.basis_strings((1, 1)), vec!["y*u*e"]);
    }

    #[test]
    fn truncation_is_idempotent() {
        let a = a_module(Window::new(4, 0));
        let t = a.truncate(Window::new(2, 0));
        assert_eq!(t.dims(), t.truncate(Window::new(2, 0)).dims());
        assert_eq!(t.dims().len(), 3);
    }

    #[test]
    fn laurent_x_is_injective() {
        let f = FreeModule::new(BaseRing::LaurentS, vec![Generator::new("e", (0, 0))], Window::new(2, 2).with_pole(2));
        let m = BigradedModule::free(f);
        let x = OperatorAction::multiplication("x", 1, Monomial::x(1));
        let mx = m.act(&x, (0, 1)).unwrap();
        assert_eq!(mx.rank(), mx.cols());
    }

    #[test]
    fn direct_sums_add_dimensions() {
        let a = a_module(Window::new(2, 0));
        let s = direct_sum(&[&a, &a]).unwrap();
        assert_eq!(s.dim((1, 0)), 4);
    }
}
