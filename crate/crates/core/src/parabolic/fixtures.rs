//! Small charts used by tests, examples and scenario files.

use super::chart::{BaseDirection, ChartComponent, ComponentKind, LineWeights, ParabolicChart};
use super::lattice::Coord;
use crate::graded::ring::RingMatrix;
use crate::linalg::Rational;

fn component(id: &str, kind: ComponentKind, coord: Coord) -> ChartComponent {
    ChartComponent { id: id.into(), kind, coord }
}

fn lines(per_component: &[&[Rational]]) -> Vec<LineWeights> {
    let r = per_component.first().map_or(0, |w| w.len());
    (0..r).map(|g| LineWeights(per_component.iter().map(|w| w[g].clone()).collect())).collect()
}

/// Curve chart with coordinate `x`; a marking `h = {x = 0}` when weights
/// are given.
pub fn curve_chart(horizontal: Option<&[Rational]>, rank: usize, phi_x: RingMatrix) -> ParabolicChart {
    let (components, weights) = match horizontal {
        Some(w) => (vec![component("h", ComponentKind::Horizontal, Coord::X)], lines(&[w])),
        None => (vec![], vec![LineWeights(vec![]); rank]),
    };
    ParabolicChart {
        rank,
        dim: 1,
        components,
        base: None,
        weights,
        phi_x,
        phi_y: RingMatrix::zeros(rank, rank),
    }
}

/// Surface chart with `h = {x = 0}` horizontal and `t = y`; when vertical
/// weights are given, `v = {y = 0}` is a vertical component.
pub fn horizontal_chart(
    h_weights: &[Rational],
    v_weights: Option<&[Rational]>,
    phi_x: RingMatrix,
    phi_y: RingMatrix,
) -> ParabolicChart {
    let rank = h_weights.len();
    let mut components = vec![component("h", ComponentKind::Horizontal, Coord::X)];
    let weights = match v_weights {
        Some(v) => {
            components.push(component("v", ComponentKind::Vertical, Coord::Y));
            lines(&[h_weights, v])
        }
        None => lines(&[h_weights]),
    };
    ParabolicChart { rank, dim: 2, components, base: Some(BaseDirection::Y), weights, phi_x, phi_y }
}

/// Crossing `xy = t` of vertical components `v1 = {x = 0}`, `v2 = {y = 0}`.
pub fn crossing_chart(wx: &[Rational], wy: &[Rational], phi_x: RingMatrix, phi_y: RingMatrix) -> ParabolicChart {
    ParabolicChart {
        rank: wx.len(),
        dim: 2,
        components: vec![
            component("v1", ComponentKind::Vertical, Coord::X),
            component("v2", ComponentKind::Vertical, Coord::Y),
        ],
        base: Some(BaseDirection::Xy),
        weights: lines(&[wx, wy]),
        phi_x,
        phi_y,
    }
}

/// Surface chart away from the divisor, `t = y`.
pub fn smooth_chart(rank: usize, phi_x: RingMatrix, phi_y: RingMatrix) -> ParabolicChart {
    ParabolicChart {
        rank,
        dim: 2,
        components: vec![],
        base: Some(BaseDirection::Y),
        weights: vec![LineWeights(vec![]); rank],
        phi_x,
        phi_y,
    }
}

/// Rank 2, both lines of weight 0 along `h = {x = 0}`, residue `J_2`.
pub fn unipotent_j2() -> ParabolicChart {
    let z = Rational::from_integer(0.into());
    let phi_x = RingMatrix::parse(&[&["0", "1"], &["0", "0"]]).expect("literal");
    horizontal_chart(&[z.clone(), z], None, phi_x, RingMatrix::zeros(2, 2))
}
