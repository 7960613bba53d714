use std::path::{Path, PathBuf};

use parahiggs::scenario::{generate_fixture, run_scenario, size_bounds, Kind, Scenario};
use serde_json::Value;

fn root() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn load(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn validator(name: &str) -> jsonschema::Validator {
    jsonschema::validator_for(&load(&root().join("schema").join(name))).unwrap()
}

fn json_files(dir: &str) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(root().join(dir))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    out.sort();
    out
}

fn errors(v: &jsonschema::Validator, value: &Value) -> Vec<String> {
    v.iter_errors(value).map(|e| format!("{} at {}", e, e.instance_path)).collect()
}

#[test]
fn shipped_scenarios_match_schema() {
    let v = validator("scenario.schema.json");
    for path in json_files("scenarios").into_iter().chain(json_files("scenarios/negative")) {
        let value = load(&path);
        let errs = errors(&v, &value);
        let loads = Scenario::parse(&value.to_string()).is_ok();
        assert_eq!(errs.is_empty(), loads, "{}: {errs:?}", path.display());
    }
}

#[test]
fn generated_scenarios_match_schema() {
    let v = validator("scenario.schema.json");
    for kind in Kind::ALL {
        let (lo, hi) = size_bounds(kind);
        for size in [lo, hi] {
            let s = generate_fixture(kind, 5, size).unwrap();
            let value: Value = serde_json::from_str(&s.to_json()).unwrap();
            assert!(errors(&v, &value).is_empty(), "{kind:?} {size}: {:?}", errors(&v, &value));
        }
    }
}

#[test]
fn schema_kinds_match_the_binary() {
    let schema = load(&root().join("schema/scenario.schema.json"));
    let kinds: Vec<&str> = schema["properties"]["kind"]["enum"].as_array().unwrap().iter().map(|k| k.as_str().unwrap()).collect();
    assert_eq!(kinds, Kind::ALL.iter().map(|k| k.as_str()).collect::<Vec<_>>());
}

#[test]
fn reports_match_schema() {
    let v = validator("report.schema.json");
    for path in json_files("scenarios").into_iter().chain(json_files("scenarios/negative")) {
        let Ok(s) = Scenario::parse(&std::fs::read_to_string(&path).unwrap()) else { continue };
        if s.validate().is_err() {
            continue;
        }
        let value: Value = serde_json::from_str(&run_scenario(&s).to_json()).unwrap();
        assert!(errors(&v, &value).is_empty(), "{}: {:?}", path.display(), errors(&v, &value));
    }
}
