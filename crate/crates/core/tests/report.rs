use conemod_core::moduli::{ModuliConfig, StructureGroup, TangentConeSpec};
use conemod_core::p2::BundleExpr;
use conemod_core::report::verify::{verify, with_kernel_dim, VerifyInputs};
use conemod_core::report::{
    emit, error_exit_code, run, Command, ConfigDocument, RunConfig, SCHEMA_VERSION,
};
use conemod_core::{Error, Rate};

fn quick_inputs() -> VerifyInputs {
    let mut inputs = VerifyInputs::standard().unwrap();
    inputs.spectra = 20;
    inputs.weights_per_spectrum = 10;
    inputs.chern_samples = 20;
    inputs
}

fn fs_dim(points: usize) -> RunConfig {
    let mut c = RunConfig::new(Command::Dim);
    c.preset = Some("fubini-study".into());
    c.points = Some(points);
    c.mu = Some(Rate::ratio(-1, 2));
    c
}

#[test]
fn reports_are_deterministic() {
    let a = emit(&run(&fs_dim(3)).unwrap()).unwrap().unwrap();
    let b = emit(&run(&fs_dim(3)).unwrap()).unwrap().unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    assert_eq!(v["results"]["virt_dim"], 0);
}

#[test]
fn config_documents_round_trip() {
    let mu = Rate::ratio(-1, 2);
    let moduli = ModuliConfig::new(
        vec![
            TangentConeSpec::fubini_study(mu.clone()),
            TangentConeSpec::bundle(BundleExpr::Tangent, 8, mu),
        ],
        StructureGroup::Pu { n: 2 },
    )
    .unwrap();
    let doc = ConfigDocument {
        schema_version: SCHEMA_VERSION,
        operator: None,
        moduli: Some(moduli),
        bundle: Some("End(T)(-1)".parse().unwrap()),
        window: None,
        ker_hypothesis: Some(true),
    };
    let back = ConfigDocument::parse(&doc.to_json()).unwrap();
    assert_eq!(back, doc);
}

#[test]
fn config_documents_are_strict() {
    assert!(matches!(
        ConfigDocument::parse(r#"{"schema_version": 99}"#),
        Err(Error::InvalidConfig(_))
    ));
    assert!(matches!(
        ConfigDocument::parse(r#"{"schema_version": 1, "extra": 0}"#),
        Err(Error::Parse(_))
    ));
}

#[test]
fn dim_reads_a_config_file() {
    let dir = std::env::temp_dir().join(format!("conemod-report-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("config.json");
    let mu = Rate::ratio(-1, 2);
    let moduli = ModuliConfig::new(
        vec![TangentConeSpec::fubini_study(mu); 2],
        StructureGroup::Pu { n: 2 },
    )
    .unwrap();
    let doc = ConfigDocument {
        schema_version: SCHEMA_VERSION,
        operator: None,
        moduli: Some(moduli),
        bundle: None,
        window: None,
        ker_hypothesis: Some(true),
    };
    std::fs::write(&path, doc.to_json()).unwrap();
    let mut c = RunConfig::new(Command::Dim);
    c.config = Some(path);
    let report = run(&c).unwrap();
    assert_eq!(report.results["virt_dim"], 0);
    assert_eq!(report.results["obstruction"]["coker_dim"], 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn user_errors_and_internal_errors_have_distinct_codes() {
    let mut c = fs_dim(1);
    c.mu = Some(Rate::ratio(-1, 10));
    let err = run(&c).unwrap_err();
    assert_eq!(error_exit_code(&err), 1);
    assert_eq!(error_exit_code(&Error::Inconsistency("x".into())), 2);
}

#[test]
fn verify_passes_on_standard_inputs() {
    let summary = verify(&quick_inputs());
    assert!(summary.passed, "{:?}", summary.first_failure);
}

#[test]
fn verify_catches_a_corrupted_operator() {
    let mut inputs = quick_inputs();
    inputs.fs_operator = with_kernel_dim(&inputs.fs_operator, &Rate::int(-2), 5).unwrap();
    let summary = verify(&inputs);
    assert!(!summary.passed);
    assert!(!summary.suite("cross-formula-agreement").unwrap().passed);
}

#[test]
fn verify_catches_a_broken_duality_model() {
    let mut inputs = quick_inputs();
    inputs.duality_m[(0, 0)] += 1e-3;
    let summary = verify(&inputs);
    let suite = summary.suite("matrix-model-duality").unwrap();
    assert!(!suite.passed);
    assert!(
        suite.detail.to_lowercase().contains("precondition"),
        "{}",
        suite.detail
    );
}
