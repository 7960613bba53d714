use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::linalg::rational::int;
use crate::linalg::ExactMatrix;
use crate::nilpotent::NilpotentEndo;
use crate::pushforward::fixtures::random_cycle_family;
use crate::vnearby::random_crossing_fixture;

/// Allowed `size` per kind: matrix dimension, crossing rank, or number of
/// components of the special fiber.
pub fn size_bounds(kind: Kind) -> (usize, usize) {
    match kind {
        Kind::WeightFiltration => (1, 8),
        Kind::Koszul | Kind::NearbyCycles | Kind::QisCheck => (1, 3),
        Kind::Pushforward | Kind::GaussManin => (1, 4),
    }
}

fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut left = n;
    let mut parts = Vec::new();
    while left > 0 {
        let k = rng.gen_range(1..=left);
        parts.push(k);
        left -= k;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Product of unitriangular matrices with small integer entries.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> ExactMatrix {
    let mut lower = ExactMatrix::identity(n);
    let mut upper = ExactMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            lower.set(i, j, int(rng.gen_range(-2..=2)));
            upper.set(j, i, int(rng.gen_range(-2..=2)));
        }
    }
    &lower * &upper
}

pub fn generate_fixture(kind: Kind, seed: u64, size: usize) -> Result<Scenario> {
    let (min, max) = size_bounds(kind);
    if !(min..=max).contains(&size) {
        return Err(Error::SizeOutOfBounds { size, min, max });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let payload = match kind {
        Kind::WeightFiltration => {
            let n = NilpotentEndo::jordan(&random_partition(&mut rng, size));
            let m = n.conjugate(&random_unimodular(&mut rng, size))?;
            let rows = (0..size).map(|i| Row(m.matrix().row(i).to_vec())).collect();
            Payload::WeightFiltration(WeightFiltrationPayload { matrix: rows })
        }
        Kind::Koszul => Payload::Koszul(KoszulPayload {
            module: ModuleSpec::Fixture(random_crossing_fixture(&mut rng, size)),
            complex: Side::Lower,
            kernel_generators: None,
        }),
        Kind::NearbyCycles => Payload::NearbyCycles(NearbyPayload {
            module: ModuleSpec::Fixture(random_crossing_fixture(&mut rng, size)),
            b: zero(),
            prev_b: minus_half(),
        }),
        Kind::QisCheck => {
            Payload::QisCheck(QisPayload { module: ModuleSpec::Fixture(random_crossing_fixture(&mut rng, size)) })
        }
        Kind::Pushforward => Payload::Pushforward(PushforwardPayload {
            family: FamilySpec::Fixture(random_cycle_family(&mut rng, size)),
            level: zero(),
            variant: Variant::Standard,
            duality: false,
        }),
        Kind::GaussManin => Payload::GaussManin(GaussManinPayload {
            family: FamilySpec::Fixture(random_cycle_family(&mut rng, size)),
            level: zero(),
            variant: Variant::Standard,
            degree: 1,
            expect_jordan_type: None,
        }),
    };
    Ok(Scenario {
        schema_version: SCENARIO_VERSION,
        id: format!("{}-seed{seed}-size{size}", kind.as_str()),
        kind,
        window: None,
        seed: Some(seed),
        payload,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{run_scenario, Status};

    #[test]
    fn deterministic_per_seed() {
        for kind in Kind::ALL {
            let (lo, _) = size_bounds(kind);
            let a = generate_fixture(kind, 0, lo).unwrap().to_json();
            let b = generate_fixture(kind, 0, lo).unwrap().to_json();
            assert_eq!(a, b);
            assert_eq!(Scenario::parse(&a).unwrap().to_json(), a);
        }
    }

    #[test]
    fn seeds_differ() {
        let all: std::collections::BTreeSet<String> = (0..8)
            .map(|s| serde_json::to_string(&generate_fixture(Kind::WeightFiltration, s, 6).unwrap().payload).unwrap())
            .collect();
        assert_eq!(all.len(), 8);
        let all: std::collections::BTreeSet<String> = (0..8)
            .map(|s| serde_json::to_string(&generate_fixture(Kind::QisCheck, s, 3).unwrap().payload).unwrap())
            .collect();
        assert!(all.len() > 1);
    }

    #[test]
    fn size_checked() {
        assert!(matches!(generate_fixture(Kind::Koszul, 0, 4), Err(Error::SizeOutOfBounds { .. })));
        assert!(generate_fixture(Kind::WeightFiltration, 0, 0).is_err());
    }

    #[test]
    fn generated_qis_fixture_passes() {
        let r = run_scenario(&generate_fixture(Kind::QisCheck, 0, 3).unwrap());
        assert_eq!(r.status, Status::Pass, "{}", r.to_text());
    }

    #[test]
    fn generated_weight_filtrations_pass() {
        for seed in 0..5 {
            let r = run_scenario(&generate_fixture(Kind::WeightFiltration, seed, 5).unwrap());
            assert_eq!(r.status, Status::Pass, "{}", r.to_text());
        }
    }
}
