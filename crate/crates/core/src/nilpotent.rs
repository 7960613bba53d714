//! Nilpotent endomorphisms, their monodromy weight filtrations and orbit
//! invariants.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{induced_map, ExactMatrix, QuotientPresentation, Subspace};

/// A square matrix `N` with `N^dim = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentEndo {
    matrix: ExactMatrix,
}

impl NilpotentEndo {
    pub fn new(matrix: ExactMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch("endomorphism must be square".into()));
        }
        if matrix.nilpotency_index().is_none() {
            return Err(Error::NotNilpotent);
        }
        Ok(NilpotentEndo { matrix })
    }

    pub fn zero(n: usize) -> Self {
        NilpotentEndo { matrix: ExactMatrix::zeros(n, n) }
    }

    /// Direct sum of nilpotent Jordan blocks of the given sizes.
    pub fn jordan(sizes: &[usize]) -> Self {
        let blocks: Vec<ExactMatrix> = sizes.iter().map(|&s| ExactMatrix::jordan_block(s)).collect();
        NilpotentEndo { matrix: ExactMatrix::block_diagonal(&blocks) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    /// Smallest `k` with `N^k = 0`.
    pub fn index(&self) -> usize {
        self.matrix.nilpotency_index().expect("checked at construction")
    }

    /// `P N P^{-1}`.
    pub fn conjugate(&self, p: &ExactMatrix) -> Result<Self> {
        let inv = p
            .inverse()
            .ok_or_else(|| Error::DimensionMismatch("conjugating matrix is singular".into()))?;
        Ok(NilpotentEndo { matrix: &(p * &self.matrix) * &inv })
    }
}

/// Ranks of the powers `N^0, N^1, ..., N^dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RankSequence {
    pub ranks: Vec<usize>,
}

impl RankSequence {
    /// Jordan block sizes, largest first, recovered from the ranks.
    pub fn jordan_type(&self) -> Vec<usize> {
        // number of blocks of size >= j is r_{j-1} - r_j
        let r = &self.ranks;
        let mut at_least: Vec<usize> = (1..r.len()).map(|j| r[j - 1] - r[j]).collect();
        at_least.push(0);
        let mut sizes = Vec::new();
        for j in (1..at_least.len()).rev() {
            let exactly = at_least[j - 1] - at_least[j];
            sizes.extend(std::iter::repeat_n(j, exactly));
        }
        sizes
    }

    /// Trimmed form ending at the first zero, e.g. `(4, 2, 1, 0)`.
    pub fn trimmed(&self) -> Vec<usize> {
        match self.ranks.iter().position(|&r| r == 0) {
            Some(p) => self.ranks[..=p].to_vec(),
            None => self.ranks.clone(),
        }
    }
}

pub fn rank_sequence(n: &NilpotentEndo) -> RankSequence {
    let mut ranks = Vec::with_capacity(n.dim() + 1);
    let mut p = ExactMatrix::identity(n.dim());
    for _ in 0..=n.dim() {
        ranks.push(p.rank());
        p = &p * n.matrix();
    }
    RankSequence { ranks }
}

/// `true` iff the two endomorphisms are conjugate, decided by rank sequences.
pub fn same_orbit(a: &NilpotentEndo, b: &NilpotentEndo) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", a.dim(), b.dim())));
    }
    Ok(rank_sequence(a) == rank_sequence(b))
}

/// Increasing filtration `W_l`, centered at 0, of the space `N` acts on.
/// Levels below `-m` are zero and levels from `m` on are the whole space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFiltration {
    dim: usize,
    m: i32,
    levels: BTreeMap<i32, Subspace>,
}

impl WeightFiltration {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest weight with a nonzero graded piece (0 when `N = 0`).
    pub fn max_weight(&self) -> i32 {
        self.m
    }

    pub fn level(&self, l: i32) -> Subspace {
        if l < -self.m {
            Subspace::zero(self.dim)
        } else if l >= self.m {
            Subspace::full(self.dim)
        } else {
            self.levels[&l].clone()
        }
    }

    pub fn level_dims(&self, from: i32, to: i32) -> Vec<usize> {
        (from..=to).map(|l| self.level(l).dim()).collect()
    }

    pub fn graded(&self, l: i32) -> QuotientPresentation {
        QuotientPresentation::new(self.level(l), self.level(l - 1))
            .expect("weight filtration is increasing")
    }

    pub fn graded_dim(&self, l: i32) -> usize {
        self.level(l).dim() - self.level(l - 1).dim()
    }

    /// Checks the two defining properties against `n`.
    pub fn check_axioms(&self, n: &NilpotentEndo) -> std::result::Result<(), String> {
        let m = self.m;
        for l in (-m - 1)..=(m + 1) {
            if !self.level(l).contains_subspace(&self.level(l - 1)) {
                return Err(format!("W_{} not contained in W_{}", l - 1, l));
            }
            let image = self.level(l).image_under(n.matrix());
            if !self.level(l - 2).contains_subspace(&image) {
                return Err(format!("N W_{l} not contained in W_{}", l - 2));
            }
        }
        for l in 0..=m {
            let power = n.matrix().pow(l as u32);
            let map = induced_map(&power, &self.graded(l), &self.graded(-l))
                .map_err(|e| format!("N^{l} on Gr_{l}: {e}"))?;
            if !map.is_invertible() {
                return Err(format!("N^{l}: Gr_{l} -> Gr_-{l} is not an isomorphism"));
            }
        }
        Ok(())
    }
}

pub fn weight_filtration(n: &NilpotentEndo) -> WeightFiltration {
    let (m, levels) = filtration_levels(n.matrix());
    WeightFiltration { dim: n.dim(), m, levels }
}

fn filtration_levels(n: &ExactMatrix) -> (i32, BTreeMap<i32, Subspace>) {
    let d = n.rows();
    let k = n.nilpotency_index().expect("nilpotent input");
    let mut levels = BTreeMap::new();
    if k <= 1 {
        levels.insert(-1, Subspace::zero(d));
        levels.insert(0, Subspace::full(d));
        return (0, levels);
    }
    let m = (k - 1) as i32;
    let top = n.pow(m as u32);
    let kernel = top.kernel();
    let image = top.image();
    let middle = QuotientPresentation::new(kernel.clone(), image.clone())
        .expect("im N^m lies in ker N^m when m >= 1");
    let induced = induced_map(n, &middle, &middle).expect("N preserves ker N^m and im N^m");
    let (inner_m, inner) = filtration_levels(&induced);
    let inner_level = |l: i32| -> Subspace {
        if l < -inner_m {
            Subspace::zero(middle.dim())
        } else if l >= inner_m {
            Subspace::full(middle.dim())
        } else {
            inner[&l].clone()
        }
    };
    levels.insert(-m - 1, Subspace::zero(d));
    levels.insert(-m, image);
    for l in (-m + 1)..=(m - 2) {
        levels.insert(l, middle.preimage_of(&inner_level(l)));
    }
    levels.insert(m - 1, kernel);
    levels.insert(m, Subspace::full(d));
    (m, levels)
}

/// An increasing flag `0 ⊂ F_0 ⊆ F_1 ⊆ ... ⊆ F_k = V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    steps: Vec<Subspace>,
}

impl Flag {
    pub fn new(steps: Vec<Subspace>) -> Result<Self> {
        let Some(last) = steps.last() else {
            return Err(Error::DimensionMismatch("flag needs at least one step".into()));
        };
        if !last.is_full() {
            return Err(Error::DimensionMismatch("last flag step must be the whole space".into()));
        }
        for w in steps.windows(2) {
            if !w[1].contains_subspace(&w[0]) {
                return Err(Error::DimensionMismatch("flag steps must increase".into()));
            }
        }
        Ok(Flag { steps })
    }

    pub fn trivial(n: usize) -> Self {
        Flag { steps: vec![Subspace::full(n)] }
    }

    pub fn steps(&self) -> &[Subspace] {
        &self.steps
    }

    pub fn graded_pieces(&self) -> Vec<QuotientPresentation> {
        let n = self.steps[0].ambient_dim();
        let mut prev = Subspace::zero(n);
        let mut out = Vec::new();
        for s in &self.steps {
            out.push(QuotientPresentation::new(s.clone(), prev.clone()).expect("increasing"));
            prev = s.clone();
        }
        out
    }
}

/// Block-diagonal matrix of the endomorphism induced on `Gr^F`.
pub fn graded_endomorphism(n: &NilpotentEndo, flag: &Flag) -> Result<NilpotentEndo> {
    let blocks = flag
        .graded_pieces()
        .iter()
        .map(|g| induced_map(n.matrix(), g, g))
        .collect::<Result<Vec<_>>>()?;
    NilpotentEndo::new(ExactMatrix::block_diagonal(&blocks))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenerationReport {
    pub graded_ranks: Vec<usize>,
    pub expected_ranks: Vec<usize>,
    pub pass: bool,
}

/// Compares the orbit of `Gr^F(full)` with an expected rank sequence.
pub fn graded_degeneration_check(
    full: &NilpotentEndo,
    flag: &Flag,
    expected: &RankSequence,
) -> Result<DegenerationReport> {
    let graded = graded_endomorphism(full, flag)?;
    let got = rank_sequence(&graded);
    Ok(DegenerationReport {
        pass: got.trimmed() == expected.trimmed(),
        graded_ranks: got.trimmed(),
        expected_ranks: expected.trimmed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::int;

    #[test]
    fn zero_endomorphism_sits_in_weight_zero() {
        let w = weight_filtration(&NilpotentEndo::zero(2));
        assert_eq!(w.level_dims(-1, 0), vec![0, 2]);
    }

    #[test]
    fn jordan_two() {
        let n = NilpotentEndo::jordan(&[2]);
        let w = weight_filtration(&n);
        assert_eq!(w.level_dims(-2, 1), vec![0, 1, 1, 2]);
        w.check_axioms(&n).unwrap();
    }

    #[test]
    fn jordan_three_plus_one() {
        let n = NilpotentEndo::jordan(&[3, 1]);
        let w = weight_filtration(&n);
        assert_eq!(w.level_dims(-2, 2), vec![1, 1, 3, 3, 4]);
        assert_eq!((w.graded_dim(2), w.graded_dim(0), w.graded_dim(-2)), (1, 2, 1));
        w.check_axioms(&n).unwrap();
    }

    #[test]
    fn rank_sequences() {
        assert_eq!(rank_sequence(&NilpotentEndo::jordan(&[2])).trimmed(), vec![2, 1, 0]);
        assert_eq!(rank_sequence(&NilpotentEndo::jordan(&[3, 1])).trimmed(), vec![4, 2, 1, 0]);
        assert_eq!(rank_sequence(&NilpotentEndo::zero(3)).trimmed(), vec![3, 0]);
        assert_eq!(rank_sequence(&NilpotentEndo::jordan(&[3, 1])).jordan_type(), vec![3, 1]);
    }

    #[test]
    fn orbits() {
        let j2 = NilpotentEndo::jordan(&[2]);
        let p = ExactMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert!(same_orbit(&j2, &j2.conjugate(&p).unwrap()).unwrap());
        let a = NilpotentEndo::jordan(&[2, 2]);
        let b = NilpotentEndo::jordan(&[3, 1]);
        assert!(!same_orbit(&a, &b).unwrap());
        assert!(same_orbit(&NilpotentEndo::zero(2), &NilpotentEndo::zero(2)).unwrap());
        assert!(same_orbit(&NilpotentEndo::zero(2), &NilpotentEndo::zero(3)).is_err());
    }

    #[test]
    fn rejects_non_nilpotent() {
        assert_eq!(NilpotentEndo::new(ExactMatrix::identity(2)).unwrap_err(), Error::NotNilpotent);
    }

    #[test]
    fn degeneration_checks() {
        let j2 = NilpotentEndo::jordan(&[2]);
        let trivial = graded_degeneration_check(&j2, &Flag::trivial(2), &rank_sequence(&j2)).unwrap();
        assert!(trivial.pass);
        let two_step = Flag::new(vec![
            Subspace::span(2, &[vec![int(1), int(0)]]),
            Subspace::full(2),
        ])
        .unwrap();
        let r = graded_degeneration_check(&j2, &two_step, &rank_sequence(&j2)).unwrap();
        assert!(!r.pass);
        assert_eq!(r.graded_ranks, vec![2, 0]);
        let bad = Flag::new(vec![Subspace::span(2, &[vec![int(0), int(1)]]), Subspace::full(2)]).unwrap();
        assert_eq!(
            graded_degeneration_check(&j2, &bad, &rank_sequence(&j2)).unwrap_err(),
            Error::FiltrationNotPreserved
        );
    }
}
