use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::ring::{add, BaseRing, Bideg, Monomial, RingElem, RingMatrix};
use crate::graded::{BigradedModule, FreeModule, Generator, OperatorAction, Window};
use crate::linalg::rational::int;

/// Isomorphism type of one summand of `ψ = E_{b,b} / E_{b-ε,b-ε}` at a
/// crossing `xy = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SummandKind {
    /// `A = k[x,y]/(xy)`: the line jumps along both branches.
    #[serde(rename = "A")]
    Full,
    /// `A/(x) = k[y]`: the line jumps along `x = 0` only.
    #[serde(rename = "A/(x)")]
    ModX,
    /// `A/(y) = k[x]`: the line jumps along `y = 0` only.
    #[serde(rename = "A/(y)")]
    ModY,
}

impl SummandKind {
    pub const ALL: [SummandKind; 3] = [SummandKind::Full, SummandKind::ModX, SummandKind::ModY];

    /// Monomial generating the ideal `I` with `E_{b-ε,b-ε} = I e` on this line.
    pub fn ideal_generator(self) -> Monomial {
        match self {
            SummandKind::Full => Monomial { x: 1, y: 1, ..Monomial::ONE },
            SummandKind::ModX => Monomial::x(1),
            SummandKind::ModY => Monomial::y(1),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SummandKind::Full => "A",
            SummandKind::ModX => "A/(x)",
            SummandKind::ModY => "A/(y)",
        }
    }
}

fn divides(a: &Monomial, b: &Monomial) -> bool {
    a.x <= b.x && a.y <= b.y
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub kind: SummandKind,
    /// Bidegree of the frame vector `e_g`.
    pub deg: Bideg,
}

/// Local data of a Higgs bundle at a crossing of two vertical branches:
/// the frame of `E_{b,b}`, the jump type of each line, and the logarithmic
/// Higgs field `φ = B_x dx/x + B_y dy/y` with polynomial `B_x`, `B_y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingFixture {
    pub summands: Vec<Summand>,
    pub b_x: RingMatrix,
    pub b_y: RingMatrix,
}

impl CrossingFixture {
    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    /// Rank-`r` fixture with zero Higgs field and the given summand kinds,
    /// all frame vectors in bidegree `(0, 0)`.
    pub fn trivial(kinds: &[SummandKind]) -> Self {
        let r = kinds.len();
        CrossingFixture {
            summands: kinds.iter().map(|&kind| Summand { kind, deg: (0, 0) }).collect(),
            b_x: RingMatrix::zeros(r, r),
            b_y: RingMatrix::zeros(r, r),
        }
    }

    pub fn generators(&self) -> Vec<Generator> {
        self.summands.iter().enumerate().map(|(i, s)| Generator::new(format!("e{}", i + 1), s.deg)).collect()
    }

    /// `φ_log = B_x - B_y`, the relative Higgs field against `dx/x ≡ -dy/y`.
    pub fn phi_log(&self) -> RingMatrix {
        self.b_x.sub(&self.b_y)
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.rank();
        let err = |path: String, message: String| Error::Validation { path, message };
        for (name, b) in [("b_x", &self.b_x), ("b_y", &self.b_y)] {
            if b.rows != r || b.cols != r {
                return Err(err(name.into(), format!("expected a {r}x{r} matrix")));
            }
            for i in 0..r {
                for j in 0..r {
                    for (m, _) in b.get(i, j).terms() {
                        let path = format!("{name}[{i}][{j}]");
                        if m.x < 0 || m.y < 0 || m.u != 0 || m.v != 0 || m.s != 0 {
                            return Err(err(path, format!("{m} is not a monomial in x, y")));
                        }
                        if add(m.bideg(), self.summands[i].deg) != add(self.summands[j].deg, (1, 1)) {
                            return Err(err(path, format!("{m} does not have bidegree shift (1, 1)")));
                        }
                        let gi = self.summands[i].kind.ideal_generator();
                        let gj = self.summands[j].kind.ideal_generator();
                        if !divides(&gi, &m.mul(&gj)) {
                            return Err(Error::InconsistentFixture(format!(
                                "{path}: {m} does not preserve E_(b-ε,b-ε)"
                            )));
                        }
                    }
                }
            }
        }
        let ring = BaseRing::LaurentS;
        let comm = self.b_x.mul_in(&self.b_y, ring).sub(&self.b_y.mul_in(&self.b_x, ring));
        if !comm.is_zero() {
            return Err(Error::NotCommuting("B_x B_y != B_y B_x".into()));
        }
        Ok(())
    }

    /// `ψ = ⊕ A/I_g` as a module over `k[x,y]/(xy)`.
    pub fn psi(&self, window: Window) -> Result<BigradedModule> {
        let free = FreeModule::new(BaseRing::Crossing, self.generators(), window);
        let relations: Vec<Vec<RingElem>> = self
            .summands
            .iter()
            .enumerate()
            .filter(|(_, s)| s.kind != SummandKind::Full)
            .map(|(i, s)| {
                let mut v = vec![RingElem::zero(); self.rank()];
                v[i] = RingElem::var(s.kind.ideal_generator());
                v
            })
            .collect();
        BigradedModule::presented(free, &relations)
    }

    pub fn phi_log_action(&self) -> OperatorAction {
        OperatorAction::new("phi_log", self.phi_log().map(|e| e.reduce_in(BaseRing::Crossing)), (1, 1))
    }

    /// Shifts every frame degree so that the minimum `(P, Q)` is `(0, 0)`.
    pub fn normalized(mut self) -> Self {
        let p = self.summands.iter().map(|s| s.deg.0).min().unwrap_or(0);
        let q = self.summands.iter().map(|s| s.deg.1).min().unwrap_or(0);
        for s in &mut self.summands {
            s.deg = (s.deg.0 - p, s.deg.1 - q);
        }
        self
    }
}

fn random_entry(rng: &mut impl Rng, degree: i32) -> RingElem {
    let mut c = || int(rng.gen_range(-2..=2));
    let mut e = RingElem::zero();
    match degree {
        0 => e.add_term(Monomial::ONE, &c()),
        1 => {
            e.add_term(Monomial::x(1), &c());
            e.add_term(Monomial::y(1), &c());
        }
        2 => {
            e.add_term(Monomial::x(2), &c());
            e.add_term(Monomial::y(2), &c());
            e.add_term(Monomial { x: 1, y: 1, ..Monomial::ONE }, &c());
        }
        _ => {}
    }
    e
}

fn random_level_raising(rng: &mut impl Rng, summands: &[Summand]) -> RingMatrix {
    let r = summands.len();
    let mut m = RingMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            let (si, sj) = (&summands[i], &summands[j]);
            if si.deg.1 != sj.deg.1 + 1 {
                continue;
            }
            let degree = sj.deg.0 + 1 - si.deg.0;
            let gi = si.kind.ideal_generator();
            let gj = sj.kind.ideal_generator();
            let mut e = RingElem::zero();
            for (mono, c) in random_entry(rng, degree).terms() {
                if divides(&gi, &mono.mul(&gj)) {
                    e.add_term(*mono, c);
                }
            }
            m.set(i, j, e);
        }
    }
    m
}

/// A random valid fixture of the given rank: summand kinds, frame degrees
/// and commuting level-raising `B_x`, `B_y`. For rank at least 2 the draw is
/// repeated a few times to avoid a vanishing `φ_log`.
pub fn random_crossing_fixture(rng: &mut impl Rng, rank: usize) -> CrossingFixture {
    let mut last = None;
    for _ in 0..16 {
        let f = draw_fixture(rng, rank);
        if rank < 2 || !f.phi_log().is_zero() {
            return f;
        }
        last = Some(f);
    }
    last.expect("at least one draw")
}

fn draw_fixture(rng: &mut impl Rng, rank: usize) -> CrossingFixture {
    let levels = rng.gen_range(1..=rank.max(1)) as i32;
    let summands: Vec<Summand> = (0..rank)
        .map(|_| Summand {
            kind: SummandKind::ALL[rng.gen_range(0..3)],
            deg: (rng.gen_range(0..=1), rng.gen_range(0..levels)),
        })
        .collect();
    let b_x = random_level_raising(rng, &summands);
    let mut b_y = random_level_raising(rng, &summands);
    let ring = BaseRing::LaurentS;
    if !b_x.mul_in(&b_y, ring).sub(&b_y.mul_in(&b_x, ring)).is_zero() {
        let beta = RingElem::constant(int(rng.gen_range(-2..=2)));
        b_y = b_x.times(&beta, ring);
    }
    let f = CrossingFixture { summands, b_x, b_y }.normalized();
    debug_assert!(f.validate().is_ok());
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_fixtures_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for r in 1..=3 {
            for _ in 0..20 {
                random_crossing_fixture(&mut rng, r).validate().unwrap();
            }
        }
    }

    #[test]
    fn psi_dims() {
        let f = CrossingFixture::trivial(&[SummandKind::Full, SummandKind::ModX]);
        let psi = f.psi(Window::new(2, 0)).unwrap();
        assert_eq!((psi.dim((0, 0)), psi.dim((1, 0)), psi.dim((2, 0))), (2, 3, 3));
    }

    #[test]
    fn rejects_non_preserving_higgs_field() {
        let mut f = CrossingFixture::trivial(&[SummandKind::ModX, SummandKind::Full]);
        f.summands[1].deg = (1, 1);
        // e1 (jumps along x) -> e2 (jumps along both) needs a factor y
        f.b_x = RingMatrix::parse(&[&["0", "0"], &["1", "0"]]).unwrap();
        assert!(matches!(f.validate(), Err(Error::InconsistentFixture(_))));
        f.b_x = RingMatrix::parse(&[&["0", "0"], &["0", "0"]]).unwrap();
        f.validate().unwrap();
    }
}
