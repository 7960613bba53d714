use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::rational::{fmt_rational, parse_rational, serde_rational_vec};
use crate::linalg::{ExactMatrix, Rational};
use crate::parabolic::{monodromy_from_weight, MonodromyDatum};

/// A point of `P¹` in the affine coordinate `z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Finite(Rational),
    Infinity,
}

impl Point {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Point::Finite(p) => Some(p),
            Point::Infinity => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(p) => f.write_str(&fmt_rational(p)),
            Point::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" => Ok(Point::Infinity),
            t => parse_rational(t)
                .map(Point::Finite)
                .ok_or_else(|| Error::Parse(format!("bad point `{s}`"))),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Point::Finite(Rational::from_integer(n.into()))),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveComponent {
    pub id: String,
    #[serde(default)]
    pub genus: u32,
}

/// One side of a node: a point on a component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub component: usize,
    pub point: Point,
}

/// A node joining branch `a` to branch `b`. The branch coordinates `x`, `y`
/// (`z - p`, or `1/z` at infinity) satisfy `xy = t` in the total space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub a: Branch,
    pub b: Branch,
}

/// A horizontal point with parabolic weights along it. `lines` (columns, in
/// the fiber of the bundle) is the basis the weights refer to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marking {
    pub component: usize,
    pub point: Point,
    #[serde(with = "serde_rational_vec")]
    pub weights: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lines: Option<ExactMatrix>,
}

impl Marking {
    pub fn monodromy(&self) -> Result<Vec<MonodromyDatum>> {
        self.weights.iter().map(|w| monodromy_from_weight(w, 1)).collect()
    }

    pub fn line_basis(&self) -> ExactMatrix {
        self.lines.clone().unwrap_or_else(|| ExactMatrix::identity(self.weights.len()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodalCurve {
    pub components: Vec<CurveComponent>,
    #[serde(default)]
    pub nodes: Vec<Node>,
    #[serde(default)]
    pub markings: Vec<Marking>,
}

impl NodalCurve {
    pub fn smooth(genus: u32) -> Self {
        NodalCurve { components: vec![CurveComponent { id: "C".into(), genus }], nodes: vec![], markings: vec![] }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.components.len();
        if n == 0 {
            return Err(Error::InvalidCurve("no components".into()));
        }
        let ids: BTreeSet<&str> = self.components.iter().map(|c| c.id.as_str()).collect();
        if ids.len() != n {
            return Err(Error::InvalidCurve("duplicate component ids".into()));
        }
        let mut used = BTreeSet::new();
        let mut claim = |c: usize, p: &Point, what: &str| -> Result<()> {
            if c >= n {
                return Err(Error::InvalidCurve(format!("{what} on unknown component {c}")));
            }
            if self.components[c].genus > 0 {
                return Err(Error::InvalidCurve(format!(
                    "{what} on the genus-{} component {}; special points are supported on rational components only",
                    self.components[c].genus, self.components[c].id
                )));
            }
            if !used.insert((c, p.clone())) {
                return Err(Error::InvalidCurve(format!("{what} at {p} on {} collides with another point", self.components[c].id)));
            }
            Ok(())
        };
        for node in &self.nodes {
            claim(node.a.component, &node.a.point, "node")?;
            claim(node.b.component, &node.b.point, "node")?;
        }
        for m in &self.markings {
            claim(m.component, &m.point, "marking")?;
            if let Some(l) = &m.lines {
                if l.rows() != m.weights.len() || !l.is_invertible() {
                    return Err(Error::InvalidCurve("marking lines must form a basis of the fiber".into()));
                }
            }
            m.monodromy()?;
        }
        if self.connected_components(|_| true) != 1 {
            return Err(Error::InvalidCurve("dual graph is not connected".into()));
        }
        Ok(())
    }

    /// Points of component `c` that carry a log pole: its node branches and
    /// markings.
    pub fn special_points(&self, c: usize) -> Vec<Point> {
        let mut out = Vec::new();
        for node in &self.nodes {
            for br in [&node.a, &node.b] {
                if br.component == c {
                    out.push(br.point.clone());
                }
            }
        }
        out.extend(self.markings.iter().filter(|m| m.component == c).map(|m| m.point.clone()));
        out
    }

    pub fn arithmetic_genus(&self) -> i64 {
        let g: i64 = self.components.iter().map(|c| c.genus as i64).sum();
        g + self.first_betti()
    }

    /// `b₁` of the dual graph.
    pub fn first_betti(&self) -> i64 {
        self.graph_betti(|_| true)
    }

    /// `b₁` of the dual graph keeping only the nodes selected by `keep`.
    pub fn graph_betti(&self, keep: impl Fn(usize) -> bool) -> i64 {
        let edges = (0..self.nodes.len()).filter(|&i| keep(i)).count() as i64;
        edges - self.components.len() as i64 + self.connected_components(keep) as i64
    }

    fn connected_components(&self, keep: impl Fn(usize) -> bool) -> usize {
        let n = self.components.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            p[i] = r;
            r
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if keep(i) && node.a.component < n && node.b.component < n {
                let (a, b) = (find(&mut parent, node.a.component), find(&mut parent, node.b.component));
                parent[a] = b;
            }
        }
        (0..n).filter(|&i| find(&mut parent, i) == i).count()
    }

    /// Number of nodes joining two distinct components `c` and `d`, or the
    /// number of nodes from `c` to other components when `c == d`.
    pub fn intersection(&self, c: usize, d: usize) -> i64 {
        self.nodes
            .iter()
            .filter(|n| n.a.component != n.b.component)
            .filter(|n| {
                let (x, y) = (n.a.component, n.b.component);
                if c == d {
                    x == c || y == c
                } else {
                    (x == c && y == d) || (x == d && y == c)
                }
            })
            .count() as i64
    }
}

/// `Π (p - s)` over the finite points `s ≠ p` of `points`, or `-1` at
/// infinity: the ratio between the value of `P(z) dz / Π(z - s)` in the
/// `O(|S| - 2)` frame and its residue at `p`.
pub fn residue_scale(points: &[Point], p: &Point) -> Rational {
    match p {
        Point::Infinity => -Rational::from_integer(1.into()),
        Point::Finite(p) => points
            .iter()
            .filter_map(Point::finite)
            .filter(|s| *s != p)
            .fold(Rational::from_integer(1.into()), |acc, s| acc * (p - s)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, q};

    fn p(n: i64) -> Point {
        Point::Finite(int(n))
    }

    pub(crate) fn cycle(n: usize) -> NodalCurve {
        let components = (0..n).map(|i| CurveComponent { id: format!("C{}", i + 1), genus: 0 }).collect();
        let nodes = (0..n)
            .map(|i| Node {
                a: Branch { component: i, point: p(0) },
                b: Branch { component: (i + 1) % n, point: Point::Infinity },
            })
            .collect();
        NodalCurve { components, nodes, markings: vec![] }
    }

    #[test]
    fn point_round_trip() {
        for s in ["inf", "-3/2", "0"] {
            let pt: Point = s.parse().unwrap();
            assert_eq!(pt.to_string(), s);
        }
        let pt: Point = serde_json::from_str("4").unwrap();
        assert_eq!(pt, p(4));
        assert!("x".parse::<Point>().is_err());
    }

    #[test]
    fn cycles_have_genus_one() {
        for n in 1..5 {
            let c = cycle(n);
            c.validate().unwrap();
            assert_eq!(c.arithmetic_genus(), 1);
        }
        assert_eq!(cycle(2).graph_betti(|i| i == 0), 0);
        assert_eq!(NodalCurve::smooth(3).arithmetic_genus(), 3);
    }

    #[test]
    fn intersections() {
        let c = cycle(2);
        assert_eq!(c.intersection(0, 0), 2);
        assert_eq!(c.intersection(0, 1), 2);
        assert_eq!(cycle(1).intersection(0, 0), 0);
    }

    #[test]
    fn rejects_bad_curves() {
        let mut c = cycle(2);
        c.nodes.pop();
        c.nodes.push(Node { a: Branch { component: 0, point: p(0) }, b: Branch { component: 1, point: p(1) } });
        assert!(c.validate().is_err());
        let mut c = cycle(3);
        c.nodes.truncate(1);
        assert!(c.validate().is_err());
        let mut c = NodalCurve::smooth(1);
        c.markings.push(Marking { component: 0, point: p(0), weights: vec![int(0)], lines: None });
        assert!(c.validate().is_err());
        let mut c = NodalCurve::smooth(0);
        c.markings.push(Marking { component: 0, point: p(0), weights: vec![q(3, 2)], lines: None });
        assert!(c.validate().is_err());
    }

    #[test]
    fn residue_scales() {
        let pts = [p(0), p(2), Point::Infinity];
        assert_eq!(residue_scale(&pts, &p(0)), int(-2));
        assert_eq!(residue_scale(&pts, &p(2)), int(2));
        assert_eq!(residue_scale(&pts, &Point::Infinity), int(-1));
    }
}
