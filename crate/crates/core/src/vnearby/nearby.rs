use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::fixture::CrossingFixture;
use crate::error::{Error, Result};
use crate::graded::ring::{BaseRing, Bideg, Monomial, RingElem, RingMatrix};
use crate::graded::{
    generate_submodule, quotient_module, tensor_formula_module, BigradedModule, FreeModule, OperatorAction, Window,
};
use crate::linalg::Rational;

/// `Ẽ[s]` near a crossing together with the operators
/// `A_x = (B_x + s)/x` and `A_y = (B_y + s)/y` through which `u` and `v` act.
#[derive(Clone, Debug)]
pub struct GraphModule {
    fixture: CrossingFixture,
    /// Parabolic level of the frame (`E_{b,b}`) and of the previous jump.
    pub b: Rational,
    pub prev_b: Rational,
    window: Window,
    base: BigradedModule,
    a_x: OperatorAction,
    a_y: OperatorAction,
}

impl GraphModule {
    pub fn new(fixture: CrossingFixture, b: Rational, prev_b: Rational, window: Window) -> Result<Self> {
        fixture.validate()?;
        if b <= prev_b {
            return Err(Error::InconsistentFixture("previous jump must lie below b".into()));
        }
        let q_min = fixture.summands.iter().map(|s| s.deg.1).min().unwrap_or(0);
        let pole = (window.d2 - q_min).max(0) as u32 + 1;
        let window = window.with_pole(pole);
        let free = FreeModule::new(BaseRing::LaurentS, fixture.generators(), window);
        let r = fixture.rank();
        let ring = BaseRing::LaurentS;
        let s = RingMatrix::scalar_identity(r, &RingElem::var(Monomial::s(1)));
        let inv_x = RingElem::var(Monomial::x(-1));
        let inv_y = RingElem::var(Monomial::y(-1));
        let a_x = OperatorAction::new("A_x", fixture.b_x.add(&s).times(&inv_x, ring), (0, 1));
        let a_y = OperatorAction::new("A_y", fixture.b_y.add(&s).times(&inv_y, ring), (0, 1));
        a_x.check_homogeneous(&free, &free)?;
        a_y.check_homogeneous(&free, &free)?;
        let comm = a_x.matrix.mul_in(&a_y.matrix, ring).sub(&a_y.matrix.mul_in(&a_x.matrix, ring));
        if !comm.is_zero() {
            return Err(Error::NotCommuting("A_x A_y != A_y A_x".into()));
        }
        Ok(GraphModule { fixture, b, prev_b, window, base: BigradedModule::free(free), a_x, a_y })
    }

    pub fn fixture(&self) -> &CrossingFixture {
        &self.fixture
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn base(&self) -> &BigradedModule {
        &self.base
    }

    pub fn a_x(&self) -> &OperatorAction {
        &self.a_x
    }

    pub fn a_y(&self) -> &OperatorAction {
        &self.a_y
    }

    /// `s` as an operator; equals `x A_x - B_x` and `y A_y - B_y`.
    pub fn s_action(&self) -> OperatorAction {
        OperatorAction::multiplication("s", self.fixture.rank(), Monomial::s(1))
    }

    /// Generators of `E_{c,c}` for `c ∈ {b, prev_b}`.
    pub fn seeds(&self, c: &Rational) -> Result<Vec<Vec<RingElem>>> {
        let r = self.fixture.rank();
        let unit = |i: usize, m: Monomial| {
            let mut v = vec![RingElem::zero(); r];
            v[i] = RingElem::var(m);
            v
        };
        if *c == self.b {
            Ok((0..r).map(|i| unit(i, Monomial::ONE)).collect())
        } else if *c == self.prev_b {
            Ok(self.fixture.summands.iter().enumerate().map(|(i, s)| unit(i, s.kind.ideal_generator())).collect())
        } else {
            Err(Error::InconsistentFixture(format!("level {c} is neither b nor the previous jump")))
        }
    }
}

/// `V_{c-1}` inside `Ẽ[s]`: the span of `E_{c,c}` under `x`, `y`, `A_x`,
/// `A_y`. Levels use the `c - 1` convention: `c = b` seeds with `E_{b,b}`.
pub fn v_generate(gm: &GraphModule, c: &Rational) -> Result<crate::graded::Generated> {
    generate_submodule(&gm.base, &gm.seeds(c)?, &[gm.a_x.clone(), gm.a_y.clone()])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Generated,
    TensorFormula,
}

#[derive(Clone, Debug)]
pub struct NearbyCycles {
    pub route: Route,
    pub psi: BigradedModule,
    pub big_psi: BigradedModule,
    /// `u` and `v` as operators on `big_psi` (`A_x`, `A_y` on the
    /// generated route).
    pub mul_u: OperatorAction,
    pub mul_v: OperatorAction,
    pub clipped: BTreeSet<Bideg>,
}

impl NearbyCycles {
    pub fn interior_dims(&self) -> BTreeMap<Bideg, usize> {
        let w = self.big_psi.window();
        self.big_psi.dims().into_iter().filter(|(d, _)| w.interior(*d)).collect()
    }
}

/// `Ψ_{b-1} = V_{b-1} / V_{prev(b)-1}`, by generation or by the tensor
/// product formula `ψ[u,v] / (xu - yv - φ_log)`.
pub fn nearby_cycles(gm: &GraphModule, route: Route) -> Result<NearbyCycles> {
    let w = gm.window;
    let psi = gm.fixture.psi(Window::new(w.d1, w.d2))?;
    let r = gm.fixture.rank();
    match route {
        Route::Generated => {
            let top = v_generate(gm, &gm.b)?;
            let below = v_generate(gm, &gm.prev_b)?;
            let big_psi = quotient_module(&top.module, &below.module)?;
            let mut clipped = top.clipped;
            clipped.extend(below.clipped);
            Ok(NearbyCycles {
                route,
                psi,
                big_psi,
                mul_u: gm.a_x.clone(),
                mul_v: gm.a_y.clone(),
                clipped,
            })
        }
        Route::TensorFormula => {
            let big_psi = tensor_formula_module(&psi, &gm.fixture.phi_log_action(), Window::new(w.d1, w.d2))?;
            Ok(NearbyCycles {
                route,
                psi,
                big_psi,
                mul_u: OperatorAction::multiplication("u", r, Monomial::u(1)),
                mul_v: OperatorAction::multiplication("v", r, Monomial::v(1)),
                clipped: BTreeSet::new(),
            })
        }
    }
}

/// Per-bidegree comparison of the two routes on the window interior.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RouteComparison {
    pub generated: BTreeMap<String, usize>,
    pub tensor: BTreeMap<String, usize>,
    pub mismatches: Vec<Bideg>,
    pub pass: bool,
}

pub fn compare_routes(gm: &GraphModule) -> Result<RouteComparison> {
    let g = nearby_cycles(gm, Route::Generated)?;
    let t = nearby_cycles(gm, Route::TensorFormula)?;
    let w = gm.window;
    let mut degs: BTreeSet<Bideg> = g.interior_dims().keys().copied().collect();
    degs.extend(t.interior_dims().keys().copied());
    let mismatches: Vec<Bideg> = degs.into_iter().filter(|d| g.big_psi.dim(*d) != t.big_psi.dim(*d)).collect();
    let show = |m: &BigradedModule| {
        m.dims()
            .into_iter()
            .filter(|(d, _)| w.interior(*d))
            .map(|(d, n)| (format!("{},{}", d.0, d.1), n))
            .collect()
    };
    Ok(RouteComparison {
        generated: show(&g.big_psi),
        tensor: show(&t.big_psi),
        pass: mismatches.is_empty(),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, q};
    use crate::vnearby::fixture::SummandKind;

    fn gm(f: CrossingFixture, d: i32) -> GraphModule {
        GraphModule::new(f, int(0), q(-1, 2), Window::new(d, d)).unwrap()
    }

    #[test]
    fn rank_one_trivial_matches_presentation() {
        let g = gm(CrossingFixture::trivial(&[SummandKind::Full]), 3);
        let psi = nearby_cycles(&g, Route::Generated).unwrap();
        // A[u,v]/(xu - yv): Q + 1 at P = 0, Q + 2 at P = 1, 2 beyond
        for (d, n) in psi.interior_dims() {
            let expected = match d.0 {
                0 => d.1 + 1,
                1 => d.1 + 2,
                _ => 2,
            };
            assert_eq!(n as i32, expected, "degree {d:?}");
        }
        assert_eq!(psi.interior_dims().len(), 9);
    }

    #[test]
    fn seeds_come_from_the_frame_level() {
        let g = gm(CrossingFixture::trivial(&[SummandKind::ModX]), 2);
        assert_eq!(g.seeds(&int(0)).unwrap()[0][0], RingElem::one());
        assert_eq!(g.seeds(&q(-1, 2)).unwrap()[0][0], RingElem::var(Monomial::x(1)));
        assert!(g.seeds(&int(-1)).is_err());
    }

    #[test]
    fn zero_seed_gives_zero() {
        let g = gm(CrossingFixture::trivial(&[]), 2);
        assert!(nearby_cycles(&g, Route::Generated).unwrap().big_psi.is_zero());
        assert!(nearby_cycles(&g, Route::TensorFormula).unwrap().big_psi.is_zero());
    }

    #[test]
    fn jordan_pair_routes_agree() {
        let mut f = CrossingFixture::trivial(&[SummandKind::Full, SummandKind::Full]);
        f.summands[0].deg = (1, 1);
        f.b_x = RingMatrix::parse(&[&["0", "1"], &["0", "0"]]).unwrap();
        let c = compare_routes(&gm(f, 3)).unwrap();
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn s_is_recovered_from_a_x() {
        let mut f = CrossingFixture::trivial(&[SummandKind::Full, SummandKind::Full]);
        f.summands[0].deg = (1, 1);
        f.b_x = RingMatrix::parse(&[&["0", "1"], &["0", "0"]]).unwrap();
        let g = gm(f, 3);
        let ring = BaseRing::LaurentS;
        let x = RingMatrix::scalar_identity(2, &RingElem::var(Monomial::x(1)));
        let s = x.mul_in(&g.a_x().matrix, ring).sub(&g.fixture().b_x);
        assert_eq!(s, g.s_action().matrix);
    }
}
