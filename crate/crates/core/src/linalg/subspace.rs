use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::ExactMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

/// A linear subspace of `Q^n` stored in reduced column echelon form.
///
/// Column `i` of the basis has a 1 in its pivot row `p_i`, zeros above it and
/// zeros in every other pivot row; pivots increase with `i`. Two subspaces are
/// equal exactly when their representations are.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Subspace {
    ambient_dim: usize,
    basis: ExactMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { ambient_dim: n, basis: ExactMatrix::zeros(n, 0), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient_dim: n, basis: ExactMatrix::identity(n), pivots: (0..n).collect() }
    }

    pub fn span(n: usize, vectors: &[Vec<Rational>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(n);
        }
        let rows = ExactMatrix::from_rows(vectors.to_vec());
        assert_eq!(rows.cols(), n, "vector length must equal ambient dimension");
        let ech = rows.row_echelon();
        let k = ech.pivots.len();
        let idx: Vec<usize> = (0..k).collect();
        let basis = ech.reduced.select_rows(&idx).transpose();
        Subspace { ambient_dim: n, basis, pivots: ech.pivots }
    }

    /// Column space of `m`.
    pub fn column_span(m: &ExactMatrix) -> Self {
        Self::span(m.rows(), &m.columns())
    }

    /// Re-derives the canonical form from the stored basis.
    pub fn canonicalize(&self) -> Self {
        Self::span(self.ambient_dim, &self.basis.columns())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.columns()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the canonical basis, or `None` when `v` is not in
    /// the subspace. The pivot structure makes the candidate coordinates the
    /// pivot entries of `v`.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ambient_dim);
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let recon = self.basis.apply(&coords);
        (recon.as_slice() == v).then_some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        other.basis.columns().iter().all(|c| self.contains(c))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut v = self.basis_vectors();
        v.extend(other.basis_vectors());
        Subspace::span(self.ambient_dim, &v)
    }

    /// A matrix whose kernel is exactly this subspace.
    pub fn annihilator(&self) -> ExactMatrix {
        let k = self.basis.transpose().kernel();
        let rows = k.basis_vectors();
        if rows.is_empty() {
            ExactMatrix::zeros(0, self.ambient_dim)
        } else {
            ExactMatrix::from_rows(rows)
        }
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient_dim);
        }
        let ann = other.annihilator();
        if ann.rows() == 0 {
            return self.clone();
        }
        let coeffs = (&ann * &self.basis).kernel();
        Subspace::column_span(&(&self.basis * coeffs.basis()))
    }

    /// `{v : m v in self}` for `m : Q^k -> Q^n`.
    pub fn preimage(&self, m: &ExactMatrix) -> Subspace {
        assert_eq!(m.rows(), self.ambient_dim);
        let ann = self.annihilator();
        if ann.rows() == 0 {
            return Subspace::full(m.cols());
        }
        (&ann * m).kernel()
    }

    /// `m(self)` for `m : Q^n -> Q^k`.
    pub fn image_under(&self, m: &ExactMatrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient_dim);
        if self.is_zero() {
            return Subspace::zero(m.rows());
        }
        Subspace::column_span(&(m * &self.basis))
    }

    /// Vectors extending a basis of `sub` to one of `self`, chosen greedily
    /// from the canonical basis of `self`.
    pub fn complement_in(&self, sub: &Subspace) -> Vec<Vec<Rational>> {
        let mut acc = sub.clone();
        let mut out = Vec::new();
        for c in self.basis_vectors() {
            if acc.dim() == self.dim() {
                break;
            }
            if !acc.contains(&c) {
                acc = acc.sum(&Subspace::span(self.ambient_dim, std::slice::from_ref(&c)));
                out.push(c);
            }
        }
        out
    }
}

/// The quotient `ambient / sub` of two nested subspaces of a coordinate
/// space, together with a fixed section (complement basis).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientPresentation {
    ambient: Subspace,
    sub: Subspace,
    section_basis: ExactMatrix,
    /// `dim(quotient) x ambient_dim`: coordinates of a vector of `ambient`
    /// modulo `sub`, in terms of `section_basis`.
    projector: ExactMatrix,
}

impl QuotientPresentation {
    pub fn new(ambient: Subspace, sub: Subspace) -> Result<Self> {
        if !ambient.contains_subspace(&sub) {
            return Err(Error::ContainmentViolation(
                "quotient denominator is not contained in numerator".into(),
            ));
        }
        let n = ambient.ambient_dim();
        let section = ambient.complement_in(&sub);
        let q = section.len();
        let section_basis = ExactMatrix::from_columns(n, &section);
        let combined = sub.basis().hstack(&section_basis);
        let k = combined.cols();
        // rows of `combined` where it is invertible; read off coordinates there
        let ech = combined.transpose().row_echelon();
        let rows = ech.pivots.clone();
        let square = combined.select_rows(&rows);
        let inv = square.inverse().expect("selected rows form an invertible block");
        let mut projector = ExactMatrix::zeros(q, n);
        for i in 0..q {
            for (jj, &r) in rows.iter().enumerate() {
                projector.set(i, r, inv.get(k - q + i, jj).clone());
            }
        }
        Ok(QuotientPresentation { ambient, sub, section_basis, projector })
    }

    /// The whole coordinate space `Q^n`, modulo nothing.
    pub fn whole(n: usize) -> Self {
        Self::new(Subspace::full(n), Subspace::zero(n)).expect("0 is contained in everything")
    }

    pub fn ambient(&self) -> &Subspace {
        &self.ambient
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    pub fn section_basis(&self) -> &ExactMatrix {
        &self.section_basis
    }

    pub fn dim(&self) -> usize {
        self.section_basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient.ambient_dim()
    }

    /// Coordinates in the quotient of a vector lying in `ambient`.
    pub fn reduce(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if !self.ambient.contains(v) {
            return Err(Error::ContainmentViolation("vector outside quotient numerator".into()));
        }
        Ok(self.projector.apply(v))
    }

    /// Lift of quotient coordinates through the section.
    pub fn lift(&self, coords: &[Rational]) -> Vec<Rational> {
        self.section_basis.apply(coords)
    }

    /// `true` when the class of `v` is zero.
    pub fn is_zero_class(&self, v: &[Rational]) -> bool {
        self.sub.contains(v)
    }

    /// Pulls a subspace of the quotient (given in quotient coordinates) back
    /// to the ambient coordinate space; the result contains `sub`.
    pub fn preimage_of(&self, s: &Subspace) -> Subspace {
        assert_eq!(s.ambient_dim(), self.dim());
        let lifted = s.image_under(&self.section_basis);
        lifted.sum(&self.sub)
    }

    /// Image of a subspace of `ambient` in quotient coordinates.
    pub fn image_of(&self, s: &Subspace) -> Result<Subspace> {
        if !self.ambient.contains_subspace(s) {
            return Err(Error::ContainmentViolation("subspace outside quotient numerator".into()));
        }
        Ok(s.image_under(&self.projector))
    }
}

/// Matrix of the map `src.ambient/src.sub -> dst.ambient/dst.sub` induced by
/// `m`, in the section bases. The result does not depend on lifts.
pub fn induced_map(
    m: &ExactMatrix,
    src: &QuotientPresentation,
    dst: &QuotientPresentation,
) -> Result<ExactMatrix> {
    assert_eq!(m.cols(), src.ambient_dim());
    assert_eq!(m.rows(), dst.ambient_dim());
    let preserves = |from: &Subspace, to: &Subspace| {
        from.basis_vectors().iter().all(|c| to.contains(&m.apply(c)))
    };
    if !preserves(&src.ambient, &dst.ambient) || !preserves(&src.sub, &dst.sub) {
        return Err(Error::FiltrationNotPreserved);
    }
    Ok(&dst.projector * &(m * &src.section_basis))
}

pub fn is_identity(m: &ExactMatrix) -> bool {
    m.is_square()
        && (0..m.rows()).all(|i| {
            (0..m.cols()).all(|j| {
                let x = m.get(i, j);
                if i == j {
                    x.is_one()
                } else {
                    x.is_zero()
                }
            })
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::int;

    fn e(n: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        v[i] = Rational::one();
        v
    }

    #[test]
    fn canonical_form_is_representation_independent() {
        let a = Subspace::span(3, &[vec![int(1), int(1), int(0)], vec![int(0), int(1), int(1)]]);
        let b = Subspace::span(3, &[vec![int(1), int(2), int(1)], vec![int(1), int(0), int(-1)]]);
        assert_eq!(a, b);
        assert_eq!(a.canonicalize(), a);
    }

    #[test]
    fn intersection_and_preimage() {
        let a = Subspace::span(3, &[e(3, 0), e(3, 1)]);
        let b = Subspace::span(3, &[e(3, 1), e(3, 2)]);
        assert_eq!(a.intersection(&b), Subspace::span(3, &[e(3, 1)]));
        let n = ExactMatrix::jordan_block(3);
        // N^{-1}(span e0) = span(e0, e1)
        assert_eq!(Subspace::span(3, &[e(3, 0)]).preimage(&n), a);
    }

    #[test]
    fn quotient_roundtrip() {
        let qp = QuotientPresentation::new(Subspace::full(3), Subspace::span(3, &[e(3, 0)])).unwrap();
        assert_eq!(qp.dim(), 2);
        let v = vec![int(5), int(2), int(-1)];
        let c = qp.reduce(&v).unwrap();
        let back = qp.lift(&c);
        let diff: Vec<Rational> = v.iter().zip(&back).map(|(a, b)| a - b).collect();
        assert!(qp.is_zero_class(&diff));
    }

    #[test]
    fn induced_identity() {
        let qp = QuotientPresentation::new(Subspace::full(2), Subspace::span(2, &[e(2, 0)])).unwrap();
        let m = induced_map(&ExactMatrix::identity(2), &qp, &qp).unwrap();
        assert!(is_identity(&m));
    }

    #[test]
    fn jordan_block_drops_to_zero_on_quotient() {
        let qp = QuotientPresentation::new(Subspace::full(2), Subspace::span(2, &[e(2, 0)])).unwrap();
        let m = induced_map(&ExactMatrix::jordan_block(2), &qp, &qp).unwrap();
        assert_eq!(m, ExactMatrix::zeros(1, 1));
    }

    #[test]
    fn induced_map_rejects_non_preserving() {
        let qp = QuotientPresentation::new(Subspace::full(2), Subspace::span(2, &[e(2, 1)])).unwrap();
        let err = induced_map(&ExactMatrix::jordan_block(2), &qp, &qp).unwrap_err();
        assert_eq!(err.to_string(), "map does not preserve filtration");
    }

    #[test]
    fn quotient_requires_containment() {
        let a = Subspace::span(2, &[e(2, 0)]);
        let b = Subspace::span(2, &[e(2, 1)]);
        assert!(QuotientPresentation::new(a, b).is_err());
    }
}
