//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use parahiggs::graded::ring::{BaseRing, RingElem, RingMatrix};
use parahiggs::graded::{tensor_formula_module, BigradedModule, FreeModule, Generator, OperatorAction, Window};
use parahiggs::l2::Variant;
use parahiggs::linalg::rational::{int, q};
use parahiggs::linalg::{ExactMatrix, Rational};
use parahiggs::nilpotent::{rank_sequence, weight_filtration, NilpotentEndo};
use parahiggs::pushforward::fixtures::{four_marked_family, i2_family, j2_product_family};
use parahiggs::pushforward::{direct_image_table, gauss_manin_theta, periodicity_audit, FamilyFixture};
use parahiggs::scenario::{FamilySpec, Payload, Scenario};
use parahiggs::vnearby::koszul::submodule_in;
use parahiggs::vnearby::{
    build_comparison_map, compare_routes, koszul_cohomology, random_crossing_fixture, verify_qis, CheckStatus,
    CrossingFixture, GraphModule, KoszulComplex, SummandKind,
};

type Outcome = Result<String, String>;

/// Number, check, and runtime limit in seconds.
type Criterion = (u32, fn() -> Outcome, Option<u64>);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn join<T: std::fmt::Display>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// `dim A_P` for `A = k[x,y]/(xy)` and the two quotients, by counting
/// monomials.
fn closed_form_dim(kind: SummandKind, p: i32) -> usize {
    match (kind, p) {
        (_, p) if p < 0 => 0,
        (_, 0) => 1,
        (SummandKind::Full, _) => 2,
        _ => 1,
    }
}

/// Koszul ledger for a single summand with `φ = 0`: returns per-`P` middle
/// and right cohomology dims after checking them against `closed_form_dim`.
fn koszul_ledger(kind: SummandKind, w: Window) -> Result<(KoszulComplex, Vec<usize>, Vec<usize>, usize), String> {
    let f = CrossingFixture::trivial(&[kind]);
    let psi = f.psi(w).map_err(e)?;
    let k = KoszulComplex::lower(tensor_formula_module(&psi, &f.phi_log_action(), w).map_err(e)?).map_err(e)?;
    let t = koszul_cohomology(&k).map_err(e)?;
    let mut exact_slices = 0;
    let (mut middle, mut right) = (Vec::new(), Vec::new());
    for entry in &t.entries {
        let (p, i) = entry.degree;
        match i {
            i if i >= 1 => {
                ensure(entry.h.iter().all(|&h| h == 0), format!("K_{i} not exact at P = {p}: {:?}", entry.h))?;
                exact_slices += 1;
            }
            0 => {
                ensure(entry.h[1] == closed_form_dim(kind, p - 1), format!("middle at P = {p}: {}", entry.h[1]))?;
                middle.push(entry.h[1]);
            }
            -1 => {
                ensure(entry.h[2] == closed_form_dim(kind, p), format!("right at P = {p}: {}", entry.h[2]))?;
                right.push(entry.h[2]);
            }
            _ => {}
        }
    }
    let top = t.entries.iter().map(|e| e.degree.1).max().unwrap_or(0);
    ensure(top >= 5, format!("slices reach only i = {top}"))?;
    Ok((k, middle, right, exact_slices))
}

fn criterion_1() -> Outcome {
    let (_, middle, right, exact) = koszul_ledger(SummandKind::Full, Window::new(4, 6))?;
    Ok(format!(
        "M = A, window (4, 6): K_i exact for 1 ≤ i ≤ 5 ({exact} slices); middle cohomology at i = 0 has dims {} \
         for P = 1..4 (A shifted by one); right cohomology at i = -1 has dims {} for P = 0..4",
        join(&middle[1..]),
        join(&right)
    ))
}

fn criterion_2() -> Outcome {
    let w = Window::new(4, 6);
    let (k, middle, _, _) = koszul_ledger(SummandKind::ModX, w)?;
    let KoszulComplex::Lower { n2, .. } = &k else { return Err("lower complex expected".into()) };
    let y_e2 = vec![vec![RingElem::zero(), "y".parse::<RingElem>().map_err(e)?]];
    let mut kernel_dims = Vec::new();
    for p in 0..=w.d1 {
        let d = (p, 0);
        let kernel = k.middle_kernel(d).map_err(e)?;
        let expected = submodule_in(n2, &y_e2, d).map_err(e)?.sum(&n2.denom(d));
        ensure(kernel == expected, format!("kernel differs from ⟨y·e₂⟩ at P = {p}"))?;
        kernel_dims.push(kernel.dim() - n2.denom(d).dim());
    }
    Ok(format!(
        "M = A/(x): kernel at i = 0 equals ⟨y·e₂⟩ by basis comparison for P = 0..{} (dims {}); middle cohomology dims {} match A/(x)",
        w.d1,
        join(&kernel_dims),
        join(&middle)
    ))
}

fn sweep_fixtures() -> Vec<CrossingFixture> {
    (0..24u64)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_crossing_fixture(&mut rng, 1 + (seed % 3) as usize)
        })
        .collect()
}

fn criterion_3() -> Outcome {
    let w = Window::new(3, 3);
    let fixtures = sweep_fixtures();
    let mut degrees = 0;
    for (i, f) in fixtures.iter().enumerate() {
        let gm = GraphModule::new(f.clone(), int(0), q(-1, 2), w).map_err(e)?;
        let r = compare_routes(&gm).map_err(e)?;
        ensure(r.pass, format!("fixture {i}: routes differ at {:?}", r.mismatches))?;
        degrees += r.generated.len();
    }
    Ok(format!("{} seeded fixtures of rank ≤ 3: generated and tensor routes agree on {degrees} interior bidegrees", fixtures.len()))
}

fn residue_field(w: Window) -> Result<(BigradedModule, OperatorAction), String> {
    let free = FreeModule::new(BaseRing::Crossing, vec![Generator::new("e1", (0, 0))], w);
    let rel = |s: &str| s.parse::<RingElem>().map(|r| vec![r]);
    let m = BigradedModule::presented(free, &[rel("x").map_err(e)?, rel("y").map_err(e)?]).map_err(e)?;
    Ok((m, OperatorAction::new("phi", RingMatrix::zeros(1, 1), (1, 1))))
}

fn criterion_4() -> Outcome {
    let w = Window::new(3, 3);
    let fixtures = sweep_fixtures();
    let mut slices = 0;
    for (i, f) in fixtures.iter().enumerate() {
        let map = build_comparison_map(&f.psi(w).map_err(e)?, &f.phi_log_action(), w).map_err(e)?;
        let r = verify_qis(&map).map_err(e)?;
        ensure(r.status == CheckStatus::Pass, format!("fixture {i}: {:?} at {:?}", r.status, r.failures))?;
        slices += r.entries.len();
    }
    let (k, phi) = residue_field(w)?;
    let r = verify_qis(&build_comparison_map(&k, &phi, w).map_err(e)?).map_err(e)?;
    ensure(r.status == CheckStatus::HypothesisFailed, format!("M = k gave {:?}", r.status))?;
    Ok(format!(
        "{} fixtures are quasiisomorphic on {slices} interior slices; M = k returns hypothesis_failed (witness {:?})",
        fixtures.len(),
        r.hypothesis_witness.unwrap_or_default()
    ))
}

fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut left = n;
    let mut parts = Vec::new();
    while left > 0 {
        let k = rng.gen_range(1..=left);
        parts.push(k);
        left -= k;
    }
    parts
}

/// Random invertible matrix: unitriangular factors with a random diagonal.
fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> ExactMatrix {
    let lower = ExactMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => int(1),
        std::cmp::Ordering::Greater => int(rng.gen_range(-3..=3)),
        std::cmp::Ordering::Less => int(0),
    });
    let upper = ExactMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => q(rng.gen_range(1..=3), rng.gen_range(1..=2)),
        std::cmp::Ordering::Less => int(rng.gen_range(-3..=3)),
        std::cmp::Ordering::Greater => int(0),
    });
    &lower * &upper
}

/// `dim Gr_ℓ` from a Jordan type: a block of size `k` has weights
/// `k-1, k-3, ..., 1-k`.
fn graded_from_jordan(jordan: &[usize], l: i32) -> usize {
    jordan.iter().filter(|&&k| (l.unsigned_abs() as usize) < k && (k as i32 - 1 - l) % 2 == 0).count()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut by_dim = BTreeMap::new();
    for trial in 0..200 {
        let n = rng.gen_range(1..=8);
        let mut jordan = random_partition(&mut rng, n);
        let endo = NilpotentEndo::jordan(&jordan).conjugate(&random_invertible(&mut rng, n)).map_err(e)?;
        let w = weight_filtration(&endo);
        w.check_axioms(&endo).map_err(|m| format!("trial {trial}: {m}"))?;
        jordan.sort_unstable_by(|a, b| b.cmp(a));
        ensure(rank_sequence(&endo).jordan_type() == jordan, format!("trial {trial}: Jordan type"))?;
        let top = n as i32;
        ensure(
            (-top..=top).all(|l| w.graded_dim(l) == graded_from_jordan(&jordan, l)),
            format!("trial {trial}: graded dims against Jordan type {jordan:?}"),
        )?;
        *by_dim.entry(n).or_insert(0) += 1;
        if trial < 50 {
            let p = random_invertible(&mut rng, n);
            let moved = weight_filtration(&endo.conjugate(&p).map_err(e)?);
            ensure(
                (-top..=top).all(|l| moved.level(l) == w.level(l).image_under(&p)),
                format!("trial {trial}: W(PNP^-1) != P W(N)"),
            )?;
        }
    }
    Ok(format!(
        "200 random nilpotents (count by dim: {}) satisfy both axioms and match their Jordan types; 50 conjugations are equivariant",
        join(by_dim.iter().map(|(d, c)| format!("{d}:{c}")))
    ))
}

fn criterion_6() -> Outcome {
    let f = i2_family();
    let r = direct_image_table(&f, &int(0), Variant::Standard).map_err(e)?;
    let special = r.rows.iter().find(|row| row.special).ok_or("no special fiber")?;
    // h⁰ and h¹ of O on an elliptic curve are 1 and 1, and φ = 0.
    let generic = [1, 2, 1];
    ensure(special.dims == generic, format!("special fiber {:?}", special.dims))?;
    ensure(r.declared_generic == Some(generic), "declared generic dims")?;
    ensure(r.local_freeness_pass && r.base_change_pass && r.euler_constant, format!("{:?}", r.dims()))?;
    Ok(format!(
        "I₂ family: dims {} at t = {}; local freeness, base change and Euler constancy hold",
        join(r.rows.iter().map(|row| format!("{:?}", row.dims))),
        join(r.rows.iter().map(|row| parahiggs::linalg::rational::fmt_rational(&row.t)))
    ))
}

fn criterion_7() -> Outcome {
    let f = four_marked_family();
    let r = direct_image_table(&f, &int(0), Variant::Standard).map_err(e)?;
    ensure(r.rows.iter().all(|row| row.dims == [0, 2, 0]), format!("{:?}", r.dims()))?;
    ensure(r.local_freeness_pass && r.base_change_pass, "audit flags")?;
    let components: Vec<usize> = f.samples.iter().map(|s| s.curve.components.len()).collect();
    Ok(format!(
        "4-marked P¹ family: dims [0, 2, 0] at all {} samples (components per fiber: {})",
        r.rows.len(),
        join(components)
    ))
}

fn criterion_8() -> Outcome {
    let g = gauss_manin_theta(&i2_family(), &int(0), Variant::Standard, 1).map_err(e)?;
    ensure(g.dim == 2, format!("ℍ¹ has dim {}", g.dim))?;
    ensure(g.nilpotent && g.rank == 1, format!("θ rank {} nilpotent {}", g.rank, g.nilpotent))?;
    ensure(g.jordan_type.as_deref() == Some(&[2][..]), format!("Jordan type {:?}", g.jordan_type))?;
    let graph = g.graph.as_ref().ok_or("no nearby-cycles cross-check")?;
    ensure(graph.betti == g.rank as i64 && g.graph_agrees() == Some(true), format!("b1 = {}", graph.betti))?;
    Ok(format!(
        "I₂: θ on ℍ¹ ≅ ℚ² is a single J₂ block, rank 1; nearby cycles mark {} of 2 nodes active, dual graph b1 = {}",
        graph.active.iter().filter(|&&a| a).count(),
        graph.betti
    ))
}

fn shipped_families() -> Result<Vec<FamilyFixture>, String> {
    let mut out = vec![i2_family(), four_marked_family(), j2_product_family()];
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut paths: Vec<_> = std::fs::read_dir(dir).map_err(e)?.map(|d| d.unwrap().path()).collect();
    paths.sort();
    for path in paths.iter().filter(|p| p.extension().is_some_and(|x| x == "json")) {
        let s = Scenario::parse(&std::fs::read_to_string(path).map_err(e)?).map_err(e)?;
        let spec = match &s.payload {
            Payload::Pushforward(p) => &p.family,
            Payload::GaussManin(p) => &p.family,
            _ => continue,
        };
        if let FamilySpec::Fixture(f) = spec {
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
    }
    Ok(out)
}

fn criterion_9() -> Outcome {
    let families = shipped_families()?;
    let levels: [Rational; 4] = [int(0), q(1, 3), q(1, 2), q(-1, 4)];
    let mut audits = 0;
    for f in &families {
        for a in &levels {
            for variant in [Variant::Standard, Variant::Zucker] {
                let r = periodicity_audit(f, a, variant).map_err(e)?;
                ensure(r.pass && r.direct == r.twisted, format!("{} at a = {a}: {:?} vs {:?}", f.name, r.direct, r.twisted))?;
                let below = direct_image_table(f, &(a - int(1)), variant).map_err(e)?;
                let here = direct_image_table(f, a, variant).map_err(e)?;
                ensure(below.dims() == here.dims(), format!("{} at a = {a}: tables differ", f.name))?;
                audits += 1;
            }
        }
    }
    Ok(format!(
        "{audits} audits over {} shipped families ({}), 4 levels, both variants: level a - 1 equals level a twisted by -Z",
        families.len(),
        join(families.iter().map(|f| f.name.as_str()))
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, criterion_1, Some(10)),
        (2, criterion_2, Some(5)),
        (3, criterion_3, Some(60)),
        (4, criterion_4, Some(120)),
        (5, criterion_5, Some(30)),
        (6, criterion_6, Some(10)),
        (7, criterion_7, Some(10)),
        (8, criterion_8, Some(20)),
        (9, criterion_9, None),
    ];
    let mut failed = 0;
    for (n, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let late = limit.filter(|&s| took > Duration::from_secs(s));
        let timing = match limit {
            Some(s) => format!("{:.2} s, limit {s} s", took.as_secs_f64()),
            None => format!("{:.2} s", took.as_secs_f64()),
        };
        match (outcome, late) {
            (Ok(detail), None) => println!("criterion {n}: PASS  {detail} ({timing})"),
            (Ok(detail), Some(_)) => {
                failed += 1;
                println!("criterion {n}: FAIL  over time: {detail} ({timing})");
            }
            (Err(why), _) => {
                failed += 1;
                println!("criterion {n}: FAIL  {why} ({timing})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria pass");
}
