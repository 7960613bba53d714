//! Scenario files: loading, dispatch, seeded generation and reports.

mod generate;
mod report;
mod run;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::ring::{Bideg, RingElem};
use crate::l2::Variant;
use crate::linalg::rational::{serde_rational, serde_rational_vec};
use crate::linalg::Rational;
use crate::pushforward::FamilyFixture;
use crate::vnearby::{CrossingFixture, SummandKind};

pub use generate::{generate_fixture, size_bounds};
pub use report::{Check, Report, Status, REPORT_VERSION};
pub use run::{run_scenario, run_scenario_file};

pub const SCENARIO_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    WeightFiltration,
    Koszul,
    NearbyCycles,
    QisCheck,
    Pushforward,
    GaussManin,
}

impl Kind {
    pub const ALL: [Kind; 6] =
        [Kind::WeightFiltration, Kind::Koszul, Kind::NearbyCycles, Kind::QisCheck, Kind::Pushforward, Kind::GaussManin];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::WeightFiltration => "weight_filtration",
            Kind::Koszul => "koszul",
            Kind::NearbyCycles => "nearby_cycles",
            Kind::QisCheck => "qis_check",
            Kind::Pushforward => "pushforward",
            Kind::GaussManin => "gauss_manin",
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown scenario kind `{s}`")))
    }
}

/// One row of a rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Row(#[serde(with = "serde_rational_vec")] pub Vec<Rational>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightFiltrationPayload {
    pub matrix: Vec<Row>,
}

/// The module at a crossing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    /// A direct sum of `A`, `A/(x)`, `A/(y)` in degree 0 with `φ = 0`.
    Summands(Vec<SummandKind>),
    Fixture(CrossingFixture),
    /// A finitely presented module over `k[x,y]/(xy)` with `φ = 0`.
    Presented { generators: Vec<Bideg>, relations: Vec<Vec<RingElem>> },
    /// `count` fixtures of rank at most `rank` drawn from the scenario seed.
    Random { rank: usize, count: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Upper,
    #[default]
    Lower,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KoszulPayload {
    pub module: ModuleSpec,
    #[serde(default)]
    pub complex: Side,
    /// Generators (in the rank-2 middle term) of the expected kernel at
    /// `i = 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_generators: Option<Vec<Vec<RingElem>>>,
}

fn zero() -> Rational {
    Rational::from_integer(0.into())
}

fn minus_half() -> Rational {
    Rational::new((-1).into(), 2.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NearbyPayload {
    pub module: ModuleSpec,
    #[serde(default = "zero", with = "serde_rational")]
    pub b: Rational,
    #[serde(default = "minus_half", with = "serde_rational")]
    pub prev_b: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QisPayload {
    pub module: ModuleSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    /// `i2`, `four_marked`, `j2_product`.
    Builtin(String),
    Fixture(FamilyFixture),
    /// A cycle of `components` lines with random degrees, gluings and
    /// vertical weights, drawn from the scenario seed.
    Random { components: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PushforwardPayload {
    pub family: FamilySpec,
    #[serde(default = "zero", with = "serde_rational")]
    pub level: Rational,
    #[serde(default)]
    pub variant: Variant,
    #[serde(default)]
    pub duality: bool,
}

fn one_i32() -> i32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussManinPayload {
    pub family: FamilySpec,
    #[serde(default = "zero", with = "serde_rational")]
    pub level: Rational,
    #[serde(default)]
    pub variant: Variant,
    #[serde(default = "one_i32")]
    pub degree: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_jordan_type: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    WeightFiltration(WeightFiltrationPayload),
    Koszul(KoszulPayload),
    NearbyCycles(NearbyPayload),
    QisCheck(QisPayload),
    Pushforward(PushforwardPayload),
    GaussManin(GaussManinPayload),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    schema_version: u32,
    id: String,
    kind: Kind,
    #[serde(default)]
    window: Option<[i32; 2]>,
    #[serde(default)]
    seed: Option<u64>,
    payload: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Scenario {
    pub schema_version: u32,
    pub id: String,
    pub kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<[i32; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub payload: Payload,
}

fn typed<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| Error::Validation {
        path: format!("payload.{}", e.path()),
        message: e.inner().to_string(),
    })
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let h: Header = serde_path_to_error::deserialize(de).map_err(|e| {
            let inner = e.inner();
            Error::Parse(format!("line {} column {} at `{}`: {inner}", inner.line(), inner.column(), e.path()))
        })?;
        if h.schema_version != SCENARIO_VERSION {
            return Err(Error::Validation {
                path: "schema_version".into(),
                message: format!("expected {SCENARIO_VERSION}, found {}", h.schema_version),
            });
        }
        let payload = match h.kind {
            Kind::WeightFiltration => Payload::WeightFiltration(typed(h.payload)?),
            Kind::Koszul => Payload::Koszul(typed(h.payload)?),
            Kind::NearbyCycles => Payload::NearbyCycles(typed(h.payload)?),
            Kind::QisCheck => Payload::QisCheck(typed(h.payload)?),
            Kind::Pushforward => Payload::Pushforward(typed(h.payload)?),
            Kind::GaussManin => Payload::GaussManin(typed(h.payload)?),
        };
        let s = Scenario { schema_version: h.schema_version, id: h.id, kind: h.kind, window: h.window, seed: h.seed, payload };
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes") + "\n"
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |path: &str, message: String| Err(Error::Validation { path: path.into(), message });
        if self.id.trim().is_empty() {
            return bad("id", "must be nonempty".into());
        }
        if let Some([d1, d2]) = self.window {
            if d1 < 1 || d2 < 1 || d1 > 12 || d2 > 12 {
                return bad("window", format!("bounds must lie in 1..=12, got [{d1}, {d2}]"));
            }
        }
        let module = match &self.payload {
            Payload::WeightFiltration(p) => {
                let n = p.matrix.len();
                if n == 0 || p.matrix.iter().any(|r| r.0.len() != n) {
                    return bad("payload.matrix", "must be a nonempty square matrix".into());
                }
                None
            }
            Payload::Koszul(p) => Some(&p.module),
            Payload::NearbyCycles(p) => {
                if p.b <= p.prev_b {
                    return bad("payload.prev_b", "must lie below b".into());
                }
                Some(&p.module)
            }
            Payload::QisCheck(p) => Some(&p.module),
            Payload::Pushforward(PushforwardPayload { family, .. }) | Payload::GaussManin(GaussManinPayload { family, .. }) => {
                if let FamilySpec::Random { components } = family {
                    let (lo, hi) = size_bounds(self.kind);
                    if !(lo..=hi).contains(components) {
                        return bad("payload.family.random.components", format!("must lie in {lo}..={hi}"));
                    }
                }
                if let FamilySpec::Builtin(name) = family {
                    if run::builtin_family(name).is_none() {
                        return bad("payload.family.builtin", format!("unknown family `{name}`"));
                    }
                }
                None
            }
        };
        if let Some(ModuleSpec::Random { rank, count }) = module {
            if !(1..=3).contains(rank) || !(1..=64).contains(count) {
                return bad("payload.module.random", "rank must lie in 1..=3 and count in 1..=64".into());
            }
            if self.seed.is_none() {
                return bad("seed", "random modules need a seed".into());
            }
        }
        if let Some(ModuleSpec::Fixture(f)) = module {
            f.validate().map_err(|e| Error::Validation { path: "payload.module.fixture".into(), message: e.to_string() })?;
        }
        if matches!(self.kind, Kind::Koszul) {
            if let Some(ModuleSpec::Random { .. }) = module {
                return bad("payload.module", "koszul scenarios take a single module".into());
            }
        }
        Ok(())
    }
}
