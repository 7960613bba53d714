use std::collections::BTreeMap;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::report::{Report, Status};
use super::*;
use crate::graded::ring::{BaseRing, RingMatrix};
use crate::graded::{tensor_formula_module, BigradedModule, FreeModule, Generator, OperatorAction, Window};
use crate::linalg::rational::fmt_rational;
use crate::linalg::ExactMatrix;
use crate::nilpotent::{rank_sequence, weight_filtration, NilpotentEndo};
use crate::pushforward::fixtures::{four_marked_family, i2_family, j2_product_family, random_cycle_family};
use crate::pushforward::{direct_image_table, duality_audit, gauss_manin_theta, periodicity_audit};
use crate::vnearby::koszul::submodule_in;
use crate::vnearby::{
    build_comparison_map, compare_routes, koszul_cohomology, random_crossing_fixture, verify_qis, CheckStatus,
    GraphModule, KoszulComplex,
};

const DEFAULT_WINDOW: [i32; 2] = [3, 3];

pub(super) fn builtin_family(name: &str) -> Option<FamilyFixture> {
    match name {
        "i2" => Some(i2_family()),
        "four_marked" => Some(four_marked_family()),
        "j2_product" => Some(j2_product_family()),
        _ => None,
    }
}

fn rng(seed: Option<u64>) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.unwrap_or(0))
}

fn resolve_family(spec: &FamilySpec, seed: Option<u64>) -> FamilyFixture {
    match spec {
        FamilySpec::Builtin(name) => builtin_family(name).expect("validated"),
        FamilySpec::Fixture(f) => f.clone(),
        FamilySpec::Random { components } => random_cycle_family(&mut rng(seed), *components),
    }
}

fn crossing_fixtures(spec: &ModuleSpec, seed: Option<u64>) -> Vec<(String, CrossingFixture)> {
    match spec {
        ModuleSpec::Summands(kinds) => {
            let label = kinds.iter().map(|k| k.label()).collect::<Vec<_>>().join(" ⊕ ");
            vec![(label, CrossingFixture::trivial(kinds))]
        }
        ModuleSpec::Fixture(f) => vec![("fixture".into(), f.clone())],
        ModuleSpec::Random { rank, count } => {
            let mut r = rng(seed);
            (0..*count)
                .map(|i| {
                    let rk = rand::Rng::gen_range(&mut r, 1..=*rank);
                    (format!("fixture {i}"), random_crossing_fixture(&mut r, rk))
                })
                .collect()
        }
        ModuleSpec::Presented { .. } => Vec::new(),
    }
}

/// `(label, M, φ)` for each module the payload names.
fn modules(spec: &ModuleSpec, seed: Option<u64>, w: Window) -> Result<Vec<(String, BigradedModule, OperatorAction)>> {
    if let ModuleSpec::Presented { generators, relations } = spec {
        let gens = generators.iter().enumerate().map(|(i, d)| Generator::new(format!("e{}", i + 1), *d)).collect();
        let free = FreeModule::new(BaseRing::Crossing, gens, w);
        let r = generators.len();
        let m = BigradedModule::presented(free, relations)?;
        return Ok(vec![("M".into(), m, OperatorAction::new("phi", RingMatrix::zeros(r, r), (1, 1)))]);
    }
    crossing_fixtures(spec, seed)
        .into_iter()
        .map(|(label, f)| Ok((label, f.psi(w)?, f.phi_log_action())))
        .collect()
}

fn window_of(s: &Scenario) -> Window {
    let [d1, d2] = s.window.unwrap_or(DEFAULT_WINDOW);
    Window::new(d1, d2)
}

fn key(d: (i32, i32)) -> String {
    format!("{},{}", d.0, d.1)
}

/// Records a computation error as the matching non-pass status.
fn computation_error(report: &mut Report, module: &str, e: Error) {
    match e {
        Error::NilpotenceViolated(m) => report.check("Nilpotence Hypothesis", Status::HypothesisFailed, m),
        Error::NotNilpotent => report.check("Nilpotence Hypothesis", Status::HypothesisFailed, "not nilpotent"),
        Error::InconsistentFixture(m) => report.check("fixture consistency", Status::Fail, m),
        e => report.fail_with(Status::Fail, format!("{module}: {e}")),
    }
}

pub fn run_scenario_file(path: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(run_scenario(&Scenario::parse(&text)?))
}

pub fn run_scenario(s: &Scenario) -> Report {
    let mut report = Report::new(&s.id, s.kind, s.seed, s.window);
    let result = match &s.payload {
        Payload::WeightFiltration(p) => weight_filtration_scenario(&mut report, p),
        Payload::Koszul(p) => koszul_scenario(&mut report, s, p),
        Payload::NearbyCycles(p) => nearby_scenario(&mut report, s, p),
        Payload::QisCheck(p) => qis_scenario(&mut report, s, p),
        Payload::Pushforward(p) => pushforward_scenario(&mut report, s, p),
        Payload::GaussManin(p) => gauss_manin_scenario(&mut report, s, p),
    };
    if let Err(e) = result {
        computation_error(&mut report, s.kind.as_str(), e);
    }
    report
}

/// `dim Gr_ℓ` read off a Jordan type: a block of size `k` contributes to
/// weights `k-1, k-3, ..., 1-k`.
fn graded_dims_from_jordan(jordan: &[usize], l: i32) -> usize {
    jordan.iter().filter(|&&k| (l.unsigned_abs() as usize) < k && (k as i32 - 1 - l) % 2 == 0).count()
}

fn weight_filtration_scenario(report: &mut Report, p: &WeightFiltrationPayload) -> Result<()> {
    let m = ExactMatrix::from_rows(p.matrix.iter().map(|r| r.0.clone()).collect());
    let Ok(n) = NilpotentEndo::new(m) else {
        report.check("nilpotent", Status::HypothesisFailed, "N^dim != 0");
        return Ok(());
    };
    let w = weight_filtration(&n);
    let top = w.max_weight();
    let jordan = rank_sequence(&n).jordan_type();
    report.table("jordan_type", &jordan);
    report.table("level_range", [-top - 1, top]);
    report.table("level_dims", w.level_dims(-top - 1, top));
    let axioms = w.check_axioms(&n);
    report.check("weight filtration axioms", Status::from_bool(axioms.is_ok()), axioms.err().unwrap_or_else(|| "N W_l ⊆ W_(l-2) and N^l: Gr_l ≅ Gr_-l".into()));
    let graded_ok = (-top..=top).all(|l| w.graded_dim(l) == graded_dims_from_jordan(&jordan, l));
    report.check("graded dimensions", Status::from_bool(graded_ok), "dim Gr_l against the Jordan type");
    report.oracle("graded dimensions counted from the Jordan type of N");
    let dim = n.dim();
    let conj = ExactMatrix::from_fn(dim, dim, |i, j| if i <= j { Rational::from_integer(1.into()) } else { zero() });
    let moved = weight_filtration(&n.conjugate(&conj)?);
    let equivariant = (-top - 1..=top).all(|l| moved.level(l) == w.level(l).image_under(&conj));
    report.check("conjugation equivariance", Status::from_bool(equivariant), "W(PNP^-1) = P W(N)");
    Ok(())
}

fn koszul_scenario(report: &mut Report, s: &Scenario, p: &KoszulPayload) -> Result<()> {
    let w = window_of(s);
    let (label, psi, phi) = modules(&p.module, s.seed, w)?.remove(0);
    let phi_zero = phi.matrix.is_zero();
    let k = match p.complex {
        Side::Lower => KoszulComplex::lower(tensor_formula_module(&psi, &phi, w)?)?,
        Side::Upper => KoszulComplex::upper(psi.clone(), phi)?,
    };
    let t = koszul_cohomology(&k)?;
    let table: BTreeMap<String, &Vec<usize>> = t.entries.iter().map(|e| (key(e.degree), &e.h)).collect();
    report.table("cohomology", table);
    report.oracle("slice cohomology as ker/im of exact matrices per bidegree");
    let mut m_dims: BTreeMap<i32, usize> = BTreeMap::new();
    for (d, n) in psi.dims() {
        *m_dims.entry(d.0).or_default() += n;
    }
    let m_at = |pp: i32| m_dims.get(&pp).copied().unwrap_or(0);
    if p.complex == Side::Lower && phi_zero {
        report.table("module_dims", &m_dims);
        let positive: Vec<_> = t.entries.iter().filter(|e| e.degree.1 >= 1).collect();
        let top = positive.iter().map(|e| e.degree.1).max().unwrap_or(0);
        let exact = positive.iter().all(|e| e.h.iter().all(|&h| h == 0));
        report.check(
            format!("K_i exact for 1 ≤ i ≤ {top}"),
            Status::from_bool(exact),
            format!("{} slices", positive.len()),
        );
        let middle: Vec<_> = t.entries.iter().filter(|e| e.degree.1 == 0).collect();
        let ok = middle.iter().all(|e| e.h[1] == m_at(e.degree.0 - 1));
        let dims: Vec<String> = middle.iter().map(|e| e.h[1].to_string()).collect();
        report.check(
            format!("middle cohomology ≅ {label} at i = 0"),
            Status::from_bool(ok),
            format!("dims {} by P, against {label} shifted by one", dims.join(", ")),
        );
        let right: Vec<_> = t.entries.iter().filter(|e| e.degree.1 == -1).collect();
        let ok = right.iter().all(|e| e.h[2] == m_at(e.degree.0));
        let dims: Vec<String> = right.iter().map(|e| e.h[2].to_string()).collect();
        report.check(
            format!("right cohomology ≅ {label} at i = -1"),
            Status::from_bool(ok),
            format!("dims {} by P", dims.join(", ")),
        );
    }
    if let (Some(gens), KoszulComplex::Lower { n2, .. }) = (&p.kernel_generators, &k) {
        let mut ok = true;
        let mut dims = Vec::new();
        for e in t.entries.iter().filter(|e| e.degree.1 == 0) {
            let kernel = k.middle_kernel(e.degree)?;
            let expected = submodule_in(n2, gens, e.degree)?.sum(&n2.denom(e.degree));
            ok &= kernel == expected;
            dims.push(format!("{}", kernel.dim() - n2.denom(e.degree).dim()));
        }
        let shown: Vec<String> = gens
            .iter()
            .map(|g| format!("({})", g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        report.check(
            format!("kernel at i = 0 generated by {}", shown.join(", ")),
            Status::from_bool(ok),
            format!("basis match per P, kernel dims {}", dims.join(", ")),
        );
    }
    Ok(())
}

fn nearby_scenario(report: &mut Report, s: &Scenario, p: &NearbyPayload) -> Result<()> {
    let w = window_of(s);
    let fixtures = crossing_fixtures(&p.module, s.seed);
    if fixtures.is_empty() {
        return Err(Error::Validation { path: "payload.module".into(), message: "needs a crossing fixture".into() });
    }
    let results = fixtures
        .par_iter()
        .map(|(label, f)| {
            let gm = GraphModule::new(f.clone(), p.b.clone(), p.prev_b.clone(), w)?;
            Ok((label.clone(), compare_routes(&gm)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let agree = results.iter().filter(|(_, r)| r.pass).count();
    if let [(_, r)] = results.as_slice() {
        report.table("generated", &r.generated);
        report.table("tensor", &r.tensor);
    } else {
        let summary: BTreeMap<&str, usize> = results.iter().map(|(l, r)| (l.as_str(), r.mismatches.len())).collect();
        report.table("mismatches", summary);
    }
    report.check(
        "tensor product formula",
        Status::from_bool(agree == results.len()),
        format!("{agree}/{} fixtures agree on the window interior", results.len()),
    );
    report.oracle("Ψ by V-generation from E_(b,b) against ψ[u,v]/(xu - yv - φ_log)");
    Ok(())
}

fn qis_scenario(report: &mut Report, s: &Scenario, p: &QisPayload) -> Result<()> {
    let w = window_of(s);
    let mods = modules(&p.module, s.seed, w)?;
    let results = mods
        .par_iter()
        .map(|(label, m, phi)| Ok((label.clone(), verify_qis(&build_comparison_map(m, phi, w)?)?)))
        .collect::<Result<Vec<_>>>()?;
    for (label, r) in &results {
        let (status, detail) = match r.status {
            CheckStatus::Pass => (Status::Pass, format!("{} interior bidegrees", r.entries.len())),
            CheckStatus::Fail => (Status::Fail, format!("not an isomorphism at {:?}", r.failures)),
            CheckStatus::HypothesisFailed => {
                let d = r.hypothesis_witness.expect("witness");
                (Status::HypothesisFailed, format!("element killed by x and y in bidegree ({}, {})", d.0, d.1))
            }
        };
        report.check(format!("Koszul quasiisomorphism ({label})"), status, detail);
    }
    if let [(_, r)] = results.as_slice() {
        let table: BTreeMap<String, [[usize; 2]; 2]> =
            r.entries.iter().map(|e| (key(e.degree), [e.h_upper, e.h_lower])).collect();
        report.table("cohomology", table);
    }
    report.oracle("induced maps on slice cohomology checked for invertibility");
    Ok(())
}

fn pushforward_scenario(report: &mut Report, s: &Scenario, p: &PushforwardPayload) -> Result<()> {
    let family = resolve_family(&p.family, s.seed);
    let r = direct_image_table(&family, &p.level, p.variant)?;
    let rows: Vec<BTreeMap<&str, serde_json::Value>> = r
        .rows
        .iter()
        .map(|row| {
            BTreeMap::from([
                ("t", serde_json::json!(fmt_rational(&row.t))),
                ("dims", serde_json::json!(row.dims)),
                ("euler", serde_json::json!(row.euler)),
                ("terms", serde_json::json!(row.terms)),
            ])
        })
        .collect();
    report.table("fibers", rows);
    if let Some(d) = r.declared_generic {
        report.table("declared_generic", d);
    }
    let dims: Vec<String> = r.rows.iter().map(|row| format!("{:?}", row.dims)).collect();
    report.check("local freeness", Status::from_bool(r.local_freeness_pass), dims.join(" "));
    report.check(
        "base change",
        Status::from_bool(r.base_change_pass),
        match r.declared_generic {
            Some(d) => format!("every fiber against the declared {d:?}"),
            None => "every fiber against the generic fibers".into(),
        },
    );
    let chi: Vec<String> = r.rows.iter().map(|row| row.euler.to_string()).collect();
    report.check("Euler characteristic constant", Status::from_bool(r.euler_constant), format!("χ = {}", chi.join(", ")));
    let e2 = r.rows.iter().all(|row| row.e2_agrees);
    report.check("E2 degeneration", Status::from_bool(e2), "ℍ against ker/coker of H⁰φ and H¹φ");
    report.oracle("E2 page of the column spectral sequence");
    report.oracle("Riemann-Roch classes on smooth fibers");
    let per = periodicity_audit(&family, &p.level, p.variant)?;
    report.check(
        "parabolic periodicity",
        Status::from_bool(per.pass),
        format!("level {} against level {} twisted by -Z", fmt_rational(&(&p.level - Rational::from_integer(1.into()))), fmt_rational(&p.level)),
    );
    if p.duality {
        let d = duality_audit(&family, &p.level)?;
        report.table("zucker_dims", &d.zucker);
        report.check("(W0, W-2) against (W1, W-1)", Status::from_bool(d.pass), "fiber dims agree");
    }
    Ok(())
}

fn gauss_manin_scenario(report: &mut Report, s: &Scenario, p: &GaussManinPayload) -> Result<()> {
    let family = resolve_family(&p.family, s.seed);
    let g = gauss_manin_theta(&family, &p.level, p.variant, p.degree)?;
    let rows: Vec<Vec<String>> = (0..g.theta.rows()).map(|i| g.theta.row(i).iter().map(fmt_rational).collect()).collect();
    report.table("theta", rows);
    report.table("dim", g.dim);
    report.table("rank", g.rank);
    if let Some(j) = &g.jordan_type {
        report.table("jordan_type", j);
    }
    if !g.saturation_defects.is_empty() {
        report.table("saturation_defects", &g.saturation_defects);
    }
    report.check("θ residue nilpotent", Status::from_bool(g.nilpotent), format!("rank {} on ℍ^{}", g.rank, g.degree));
    if let (Some(ok), Some(graph)) = (g.graph_agrees(), &g.graph) {
        report.table("active_nodes", &graph.active);
        report.check(
            "rank θ = b1 of the active dual graph",
            Status::from_bool(ok),
            format!("rank {} against b1 = {}", g.rank, graph.betti),
        );
        report.oracle("s-action on Ψ at each node by V-generation");
    }
    if let Some(expected) = &p.expect_jordan_type {
        let ok = g.jordan_type.as_ref() == Some(expected);
        report.check("Jordan type", Status::from_bool(ok), format!("{:?} against {expected:?}", g.jordan_type));
    }
    report.oracle("connecting map of 0 → Rel[-1] dt/t → Abs → Rel → 0 on Čech total complexes");
    Ok(())
}
