//! Families used by tests, examples and scenario files.

use rand::Rng;

use super::curve::{Branch, CurveComponent, Marking, NodalCurve, Node, Point};
use super::family::{FamilyFixture, FiberSample};
use super::sheaf::{LineSummand, Poly, PolyMatrix, SheafMap, SheafOnNodalCurve};
use crate::graded::RingMatrix;
use crate::linalg::rational::{int, q};
use crate::linalg::{ExactMatrix, Rational, Subspace};
use crate::parabolic::fixtures::{crossing_chart, horizontal_chart, unipotent_j2};
use crate::vnearby::{CrossingFixture, SummandKind};

fn component(id: &str) -> CurveComponent {
    CurveComponent { id: id.into(), genus: 0 }
}

fn branch(component: usize, point: Point) -> Branch {
    Branch { component, point }
}

fn at(n: i64) -> Point {
    Point::Finite(int(n))
}

fn marking(component: usize, point: Point, weights: Vec<Rational>) -> Marking {
    Marking { component, point, weights, lines: None }
}

fn smooth_sample(t: Rational, curve: NodalCurve, bundle: SheafOnNodalCurve) -> FiberSample {
    FiberSample { t, curve, bundle, phi: None, phi_base: None, vertical_weights: vec![] }
}

/// A cycle of `n` lines, `0` on each glued to `∞` on the next; a nodal
/// rational curve for `n = 1`.
pub fn cycle_curve(n: usize) -> NodalCurve {
    NodalCurve {
        components: (0..n).map(|i| component(&format!("C{}", i + 1))).collect(),
        nodes: (0..n).map(|i| Node { a: branch(i, at(0)), b: branch((i + 1) % n, Point::Infinity) }).collect(),
        markings: vec![],
    }
}

/// Two rational curves meeting in two points.
pub fn i2_curve() -> NodalCurve {
    cycle_curve(2)
}

/// Elliptic curves degenerating to a cycle of `n` lines, with a flat rank 1
/// bundle: multidegree 0, random gluings, and one vertical weight shared by
/// all components. The generic fiber is trivial exactly when the gluings
/// multiply to 1 around the cycle.
pub fn random_cycle_family(rng: &mut impl Rng, n: usize) -> FamilyFixture {
    let curve = cycle_curve(n);
    let mut bundle = SheafOnNodalCurve::split(&curve, vec![vec![0]; n]);
    let scalars = [int(1), int(2), int(-1), q(1, 2)];
    let mut holonomy = int(1);
    for g in &mut bundle.gluing {
        let c = scalars[rng.gen_range(0..4)].clone();
        holonomy *= &c;
        *g = ExactMatrix::from_rows(vec![vec![c]]);
    }
    let generic = if holonomy == int(1) { LineSummand::Trivial } else { LineSummand::Degree(0) };
    let weights = [int(0), q(1, 3), q(1, 2)];
    let w = weights[rng.gen_range(0..3)].clone();
    let elliptic = SheafOnNodalCurve { rank: 1, summands: vec![vec![generic]], gluing: vec![], conditions: vec![] };
    FamilyFixture {
        name: format!("random-cycle-{n}"),
        rank: 1,
        declared_generic: None,
        samples: vec![
            smooth_sample(int(1), NodalCurve::smooth(1), elliptic),
            FiberSample { t: int(0), curve, bundle, phi: None, phi_base: None, vertical_weights: vec![w; n] },
        ],
        charts: vec![],
        crossings: vec![],
    }
}

/// Elliptic curves degenerating to `I₂` with the trivial rank 1 bundle and
/// `φ = 0`.
pub fn i2_family() -> FamilyFixture {
    let elliptic = SheafOnNodalCurve {
        rank: 1,
        summands: vec![vec![LineSummand::Trivial]],
        gluing: vec![],
        conditions: vec![],
    };
    let curve = i2_curve();
    let bundle = SheafOnNodalCurve::split(&curve, vec![vec![0], vec![0]]);
    let zero = || RingMatrix::zeros(1, 1);
    FamilyFixture {
        name: "i2".into(),
        rank: 1,
        declared_generic: Some([1, 2, 1]),
        samples: vec![
            smooth_sample(int(1), NodalCurve::smooth(1), elliptic.clone()),
            smooth_sample(q(1, 2), NodalCurve::smooth(1), elliptic),
            FiberSample { t: int(0), curve, bundle, phi: None, phi_base: None, vertical_weights: vec![int(0), int(0)] },
        ],
        charts: vec![crossing_chart(&[int(0)], &[int(0)], zero(), zero()); 2],
        crossings: vec![CrossingFixture::trivial(&[SummandKind::Full]); 2],
    }
}

/// `P¹` with four points of weight 1/2 and `E = O(-2)`, degenerating to a
/// chain of two lines carrying two points each.
pub fn four_marked_family() -> FamilyFixture {
    let half = || vec![q(1, 2)];
    let generic = |t: Rational, lambda: i64| {
        let mut curve = NodalCurve::smooth(0);
        curve.markings = [at(0), at(1), at(lambda), Point::Infinity].into_iter().map(|p| marking(0, p, half())).collect();
        let bundle = SheafOnNodalCurve::split(&curve, vec![vec![-2]]);
        smooth_sample(t, curve, bundle)
    };
    let chain = NodalCurve {
        components: vec![component("C1"), component("C2")],
        nodes: vec![Node { a: branch(0, Point::Infinity), b: branch(1, at(0)) }],
        markings: vec![
            marking(0, at(0), half()),
            marking(0, at(1), half()),
            marking(1, at(1), half()),
            marking(1, Point::Infinity, half()),
        ],
    };
    let bundle = SheafOnNodalCurve::split(&chain, vec![vec![-1], vec![-1]]);
    let zero = || RingMatrix::zeros(1, 1);
    FamilyFixture {
        name: "four-marked".into(),
        rank: 1,
        declared_generic: Some([0, 2, 0]),
        samples: vec![
            generic(int(1), 2),
            generic(int(2), 3),
            FiberSample {
                t: int(0),
                curve: chain,
                bundle,
                phi: None,
                phi_base: None,
                vertical_weights: vec![int(0), int(0)],
            },
        ],
        charts: vec![
            horizontal_chart(&[q(1, 2)], Some(&[int(0)]), zero(), zero()),
            crossing_chart(&[int(0)], &[int(0)], zero(), zero()),
        ],
        crossings: vec![CrossingFixture::trivial(&[SummandKind::Full])],
    }
}

/// `P¹ × Δ` with `φ = J₂ dz/z` along the two points `0`, `∞`, both lines of
/// weight 0.
pub fn j2_product_family() -> FamilyFixture {
    let mut curve = NodalCurve::smooth(0);
    curve.markings = vec![marking(0, at(0), vec![int(0), int(0)]), marking(0, Point::Infinity, vec![int(0), int(0)])];
    let bundle = SheafOnNodalCurve::split(&curve, vec![vec![0, 0]]);
    let j2 = SheafMap {
        blocks: vec![PolyMatrix(vec![vec![Poly::zero(), Poly::constant(int(1))], vec![Poly::zero(), Poly::zero()]])],
    };
    let sample = |t: Rational, vertical: Vec<Rational>| FiberSample {
        t,
        curve: curve.clone(),
        bundle: bundle.clone(),
        phi: Some(j2.clone()),
        phi_base: None,
        vertical_weights: vertical,
    };
    FamilyFixture {
        name: "j2-product".into(),
        rank: 2,
        declared_generic: Some([1, 0, 1]),
        samples: vec![sample(int(1), vec![]), sample(int(0), vec![int(0)])],
        charts: vec![unipotent_j2()],
        crossings: vec![],
    }
}

/// The I₂ family with the vertical weights moved to `(0, w)`.
pub fn i2_family_with_weights(w: Rational) -> FamilyFixture {
    let mut f = i2_family();
    f.name = "i2-weighted".into();
    for s in f.samples.iter_mut().filter(|s| s.is_special()) {
        s.vertical_weights = vec![int(0), w.clone()];
        s.bundle.conditions = vec![Subspace::full(1); s.curve.markings.len()];
    }
    f.charts.clear();
    f.crossings.clear();
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::l2::Variant;
    use crate::pushforward::family::{direct_image_table, duality_audit, periodicity_audit};
    use crate::pushforward::theta::gauss_manin_theta;

    #[test]
    fn i2_table_matches_generic() {
        let f = i2_family();
        let r = direct_image_table(&f, &int(0), Variant::Standard).unwrap();
        assert_eq!(r.dims(), vec![[1, 2, 1]; 3]);
        assert!(r.local_freeness_pass && r.base_change_pass && r.euler_constant);
        assert!(r.rows.iter().all(|row| row.e2_agrees));
    }

    #[test]
    fn four_marked_table() {
        let r = direct_image_table(&four_marked_family(), &int(0), Variant::Standard).unwrap();
        assert_eq!(r.dims(), vec![[0, 2, 0]; 3]);
        assert!(r.base_change_pass);
    }

    #[test]
    fn j2_duality() {
        let d = duality_audit(&j2_product_family(), &int(0)).unwrap();
        assert_eq!(d.standard, vec![[1, 0, 1]; 2]);
        assert!(d.pass);
    }

    #[test]
    fn periodicity() {
        for f in [i2_family(), four_marked_family(), i2_family_with_weights(q(1, 2))] {
            for a in [int(0), q(1, 2), q(-1, 3)] {
                let p = periodicity_audit(&f, &a, Variant::Standard).unwrap();
                assert!(p.pass, "{} at {a}", f.name);
            }
        }
    }

    #[test]
    fn i2_theta_is_a_jordan_block() {
        let g = gauss_manin_theta(&i2_family(), &int(0), Variant::Standard, 1).unwrap();
        assert_eq!(g.dim, 2);
        assert_eq!(g.rank, 1);
        assert_eq!(g.jordan_type, Some(vec![2]));
        assert_eq!(g.graph.as_ref().unwrap().betti, 1);
        assert_eq!(g.graph_agrees(), Some(true));
        assert!(g.saturation_defects.is_empty());
        for n in [0, 2] {
            let g = gauss_manin_theta(&i2_family(), &int(0), Variant::Standard, n).unwrap();
            assert_eq!((g.dim, g.rank), (1, 0));
        }
    }

    #[test]
    fn product_theta_vanishes() {
        for n in 0..=2 {
            let g = gauss_manin_theta(&j2_product_family(), &int(0), Variant::Standard, n).unwrap();
            assert!(g.theta.is_zero());
        }
        let g = gauss_manin_theta(&four_marked_family(), &int(0), Variant::Standard, 1).unwrap();
        assert!(g.nilpotent);
    }

    #[test]
    fn inconsistent_fixtures() {
        let mut f = i2_family();
        f.samples[2].bundle = SheafOnNodalCurve::split(&i2_curve(), vec![vec![1], vec![0]]);
        assert!(matches!(direct_image_table(&f, &int(0), Variant::Standard), Err(Error::InconsistentFixture(_))));
        let mut f = i2_family();
        f.declared_generic = Some([1, 1, 1]);
        assert!(matches!(direct_image_table(&f, &int(0), Variant::Standard), Err(Error::InconsistentFixture(_))));
        let mut f = four_marked_family();
        f.samples[0].curve.markings[0].weights = vec![q(1, 3)];
        assert!(matches!(direct_image_table(&f, &int(0), Variant::Standard), Err(Error::InconsistentFixture(_))));
    }

    #[test]
    fn non_nilpotent_residue_rejected() {
        let mut f = j2_product_family();
        for s in &mut f.samples {
            s.phi = Some(SheafMap { blocks: vec![PolyMatrix::identity(2)] });
        }
        assert!(matches!(direct_image_table(&f, &int(0), Variant::Standard), Err(Error::NilpotenceViolated(_))));
    }

    #[test]
    fn random_cycles_are_locally_free() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in 1..=4 {
            for _ in 0..4 {
                let f = random_cycle_family(&mut rng, n);
                let r = direct_image_table(&f, &q(1, 4), Variant::Standard).unwrap();
                assert!(r.euler_constant && r.local_freeness_pass && r.base_change_pass, "{f:?}");
                assert!(periodicity_audit(&f, &q(1, 4), Variant::Standard).unwrap().pass);
            }
        }
    }

    #[test]
    fn fixture_round_trip() {
        for f in [i2_family(), four_marked_family(), j2_product_family()] {
            let s = serde_json::to_string(&f).unwrap();
            let back: FamilyFixture = serde_json::from_str(&s).unwrap();
            assert_eq!(back, f);
        }
    }
}
