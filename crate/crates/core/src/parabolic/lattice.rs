use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::ring::{BaseRing, Monomial, RingElem, RingMatrix};
use crate::linalg::{ExactMatrix, Rational, Subspace};

const RING: BaseRing = BaseRing::LaurentS;

/// Local coordinate of a chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coord {
    X,
    Y,
}

impl Coord {
    pub fn name(self) -> &'static str {
        match self {
            Coord::X => "x",
            Coord::Y => "y",
        }
    }

    pub fn other(self) -> Coord {
        match self {
            Coord::X => Coord::Y,
            Coord::Y => Coord::X,
        }
    }

    pub fn monomial(self, e: i32) -> Monomial {
        match self {
            Coord::X => Monomial::x(e),
            Coord::Y => Monomial::y(e),
        }
    }

    pub fn order(self, e: &RingElem) -> i32 {
        match self {
            Coord::X => e.x_order(),
            Coord::Y => e.y_order(),
        }
    }

    pub fn eval(self, e: &RingElem, at: &Rational) -> Option<RingElem> {
        match self {
            Coord::X => e.eval_x(at),
            Coord::Y => e.eval_y(at),
        }
    }
}

pub(crate) fn diag(monomials: &[Monomial]) -> RingMatrix {
    let n = monomials.len();
    let mut m = RingMatrix::zeros(n, n);
    for (i, mono) in monomials.iter().enumerate() {
        m.set(i, i, RingElem::var(*mono));
    }
    m
}

fn inverse_monomial(m: &Monomial) -> Monomial {
    Monomial { x: -m.x, y: -m.y, ..Monomial::ONE }
}

pub(crate) fn eval_matrix(m: &RingMatrix, c: Coord, at: &Rational) -> Option<RingMatrix> {
    let mut out = RingMatrix::zeros(m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            out.set(i, j, c.eval(m.get(i, j), at)?);
        }
    }
    Some(out)
}

/// Entrywise constant matrix, if no entry involves a variable.
pub(crate) fn constant_part(m: &RingMatrix) -> Option<ExactMatrix> {
    let mut out = ExactMatrix::zeros(m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            let e = m.get(i, j);
            if e.terms().any(|(mono, _)| !mono.is_one()) {
                return None;
            }
            out.set(i, j, e.coeff(&Monomial::ONE));
        }
    }
    Some(out)
}

/// A full-rank free submodule of `k[x^±, y^±]^n` over `k[x, y]`, kept as a
/// basis matrix (columns are generators) together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    basis: RingMatrix,
    inverse: RingMatrix,
}

impl Lattice {
    pub fn standard(n: usize) -> Self {
        let id = RingMatrix::scalar_identity(n, &RingElem::one());
        Lattice { basis: id.clone(), inverse: id }
    }

    /// Lattice spanned by `m_i e_i`.
    pub fn diagonal(monomials: &[Monomial]) -> Self {
        let inv: Vec<Monomial> = monomials.iter().map(inverse_monomial).collect();
        Lattice { basis: diag(monomials), inverse: diag(&inv) }
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &RingMatrix {
        &self.basis
    }

    pub fn inverse(&self) -> &RingMatrix {
        &self.inverse
    }

    /// Changes basis by a constant invertible matrix on the right.
    pub fn then_constant(&self, c: &ExactMatrix) -> Result<Self> {
        let inv = c
            .inverse()
            .ok_or_else(|| Error::DimensionMismatch("basis change is not invertible".into()))?;
        Ok(Lattice {
            basis: self.basis.mul_in(&RingMatrix::from_exact(c), RING),
            inverse: RingMatrix::from_exact(&inv).mul_in(&self.inverse, RING),
        })
    }

    /// Rescales the `i`-th basis vector by `monomials[i]`.
    pub fn then_diagonal(&self, monomials: &[Monomial]) -> Self {
        let inv: Vec<Monomial> = monomials.iter().map(inverse_monomial).collect();
        Lattice {
            basis: self.basis.mul_in(&diag(monomials), RING),
            inverse: diag(&inv).mul_in(&self.inverse, RING),
        }
    }

    /// `L ⊗ O(k D)` for `D = {c = 0}`.
    pub fn twist(&self, c: Coord, k: i32) -> Self {
        self.then_diagonal(&vec![c.monomial(-k); self.rank()])
    }

    /// Coordinates of ambient vectors (columns of `v`) in the lattice basis.
    pub fn coordinates(&self, v: &RingMatrix) -> RingMatrix {
        self.inverse.mul_in(v, RING)
    }

    pub fn contains_vectors(&self, v: &RingMatrix) -> bool {
        self.coordinates(v).is_polynomial()
    }

    pub fn contains(&self, other: &Lattice) -> bool {
        self.contains_vectors(&other.basis)
    }

    pub fn same_as(&self, other: &Lattice) -> bool {
        self.contains(other) && other.contains(self)
    }

    /// Matrix of an ambient map `m` from `self` to `target` in the two
    /// lattice bases; fails unless the map sends `self` into `target`.
    pub fn map_to(&self, target: &Lattice, m: &RingMatrix) -> Result<RingMatrix> {
        let out = target.inverse.mul_in(&m.mul_in(&self.basis, RING), RING);
        if out.is_polynomial() {
            Ok(out)
        } else {
            Err(Error::ContainmentViolation("map does not send the lattice into the target lattice".into()))
        }
    }

    /// `{v ∈ L : v mod c·L ∈ S}` where `S` is given in lattice coordinates.
    pub fn preimage(&self, c: Coord, s: &Subspace) -> Result<Self> {
        let n = self.rank();
        if s.ambient_dim() != n {
            return Err(Error::DimensionMismatch(format!("subspace of {} in a rank-{n} lattice", s.ambient_dim())));
        }
        let mut cols = s.basis_vectors();
        let k = cols.len();
        cols.extend(Subspace::full(n).complement_in(s));
        let adapted = ExactMatrix::from_columns(n, &cols);
        let scale: Vec<Monomial> = (0..n).map(|i| if i < k { Monomial::ONE } else { c.monomial(1) }).collect();
        Ok(self.then_constant(&adapted)?.then_diagonal(&scale))
    }

    /// Image of `sub` in the fiber `L / c·L`, as a subspace of `k^n` in
    /// lattice coordinates; fails if it varies along `c = 0`.
    pub fn fiber_image(&self, c: Coord, sub: &Lattice) -> Result<Subspace> {
        let coords = self.coordinates(&sub.basis);
        if !coords.is_polynomial() {
            return Err(Error::ContainmentViolation("sublattice is not contained in the lattice".into()));
        }
        let at = eval_matrix(&coords, c, &Rational::from_integer(0.into())).expect("polynomial entries");
        let m = constant_part(&at)
            .ok_or_else(|| Error::InvalidChart(format!("image along {} = 0 is not constant", c.name())))?;
        Ok(m.image())
    }

    pub fn direct_sum(parts: &[&Lattice]) -> Self {
        let b: Vec<RingMatrix> = parts.iter().map(|l| l.basis.clone()).collect();
        let i: Vec<RingMatrix> = parts.iter().map(|l| l.inverse.clone()).collect();
        Lattice { basis: RingMatrix::block_diagonal(&b), inverse: RingMatrix::block_diagonal(&i) }
    }

    /// Basis with `c` specialised to a number.
    pub fn basis_at(&self, c: Coord, at: &Rational) -> Option<RingMatrix> {
        eval_matrix(&self.basis, c, at)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::int;

    #[test]
    fn twist_then_untwist() {
        let l = Lattice::diagonal(&[Monomial::x(1), Monomial::y(2)]);
        assert!(l.twist(Coord::X, 1).twist(Coord::X, -1).same_as(&l));
        assert!(l.twist(Coord::X, 1).contains(&l));
        assert!(!l.contains(&l.twist(Coord::Y, 1)));
    }

    #[test]
    fn preimage_of_line() {
        let e = Lattice::standard(2);
        let s = Subspace::span(2, &[vec![int(1), int(0)]]);
        let w = e.preimage(Coord::X, &s).unwrap();
        assert!(w.same_as(&Lattice::diagonal(&[Monomial::ONE, Monomial::x(1)])));
        assert_eq!(e.fiber_image(Coord::X, &w).unwrap(), s);
    }

    #[test]
    fn map_to_checks_containment() {
        let e = Lattice::standard(1);
        let xe = Lattice::diagonal(&[Monomial::x(1)]);
        let id = RingMatrix::scalar_identity(1, &RingElem::one());
        assert!(xe.map_to(&e, &id).is_ok());
        assert!(e.map_to(&xe, &id).is_err());
    }
}
