//! Run configurations, dispatch to the calculators, and JSON reports.

pub mod verify;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cone::presets::{self, FUBINI_STUDY};
use crate::cone::{critical_rates, ConeOperatorSpec, CriticalRateSet};
use crate::error::{Error, Result};
use crate::fredholm::{anchored_index, mu_bar, IndexAnchor, WeightVector};
use crate::moduli::{
    default_mu, virtual_dimension_report, ModuliConfig, StructureGroup, TangentConeSpec,
};
use crate::p2::{cohomology, BundleExpr};
use crate::rate::{Rate, Window};

pub const SCHEMA_VERSION: u32 = 1;

/// Default tolerance for the numerical checks run by `verify`.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Dim,
    Rates,
    Cohomology,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dim => "dim",
            Command::Rates => "rates",
            Command::Cohomology => "cohomology",
            Command::Verify => "verify",
        }
    }
}

/// One invocation of the calculator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Rate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub ker_hypothesis: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            preset: None,
            config: None,
            window: None,
            expr: None,
            points: None,
            mu: None,
            out: None,
            tol: None,
            ker_hypothesis: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(w) = &self.window {
            w.validate()?;
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "tolerance {t} must be positive and finite"
                )));
            }
        }
        if self.points == Some(0) {
            return Err(Error::InvalidConfig("--points must be at least 1".into()));
        }
        if self.preset.is_some() && self.config.is_some() {
            return Err(Error::InvalidConfig(
                "give either a preset or a config document, not both".into(),
            ));
        }
        Ok(())
    }
}

/// Input document read from `--config`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<ConeOperatorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moduli: Option<ModuliConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<BundleExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ker_hypothesis: Option<bool>,
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: ConfigDocument = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("config document: {e}")))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidConfig(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                doc.schema_version
            )));
        }
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        ConfigDocument::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config documents serialize")
    }
}

/// Names the formula behind one result field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub quantity: String,
    pub formula: String,
}

fn prov(quantity: &str, formula: &str) -> Provenance {
    Provenance {
        quantity: quantity.into(),
        formula: formula.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub inputs: RunConfig,
    pub results: Value,
    pub caveats: Vec<String>,
    pub provenance: Vec<Provenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl Report {
    /// Process exit status: 0 on success, 2 when a verification suite failed.
    pub fn exit_code(&self) -> i32 {
        if self.failure.is_some() {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Exit status for a failed run: 2 for internal inconsistencies, 1 otherwise.
pub fn error_exit_code(err: &Error) -> i32 {
    if err.is_internal() {
        2
    } else {
        1
    }
}

fn load_document(config: &RunConfig) -> Result<Option<ConfigDocument>> {
    config
        .config
        .as_deref()
        .map(ConfigDocument::load)
        .transpose()
}

pub fn run(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let doc = load_document(config)?;
    let (results, caveats, provenance, failure) = match config.command {
        Command::Dim => run_dim(config, doc.as_ref())?,
        Command::Rates => run_rates(config, doc.as_ref())?,
        Command::Cohomology => run_cohomology(config, doc.as_ref())?,
        Command::Verify => run_verify(config)?,
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: config.command.name().into(),
        inputs: config.clone(),
        results,
        caveats,
        provenance,
        failure,
    })
}

type Outcome = (Value, Vec<String>, Vec<Provenance>, Option<String>);

fn run_dim(config: &RunConfig, doc: Option<&ConfigDocument>) -> Result<Outcome> {
    let (moduli, ker_hypothesis) = match (doc, config.preset.as_deref()) {
        (Some(d), _) => {
            let m = d.moduli.clone().ok_or_else(|| {
                Error::InvalidConfig("config document has no `moduli` section".into())
            })?;
            (
                m,
                config.ker_hypothesis || d.ker_hypothesis.unwrap_or(false),
            )
        }
        (None, Some(FUBINI_STUDY)) => {
            let fs_bar: Rate = "2*sqrt(2)-3".parse()?;
            let mu = config.mu.clone().unwrap_or_else(|| default_mu(&fs_bar));
            let n = config.points.unwrap_or(1);
            let m = ModuliConfig::new(
                vec![TangentConeSpec::fubini_study(mu); n],
                StructureGroup::Pu { n: 2 },
            )?;
            (m, config.ker_hypothesis)
        }
        (None, Some(other)) => {
            presets::preset(other)?;
            return Err(Error::InvalidConfig(format!(
                "preset `{other}` does not describe a tangent cone"
            )));
        }
        (None, None) => {
            return Err(Error::InvalidConfig(
                "dim needs --preset fubini-study or --config".into(),
            ))
        }
    };
    let report = virtual_dimension_report(&moduli, ker_hypothesis)?;
    let caveats = report.caveats.clone();
    let results = serde_json::to_value(&report).expect("dimension reports serialize");
    let mut provenance = vec![
        prov("virt_dim", "6N + sum of dim m_i - sum of homogeneous kernel dimensions at critical rates in (-5/2, mu_i)"),
        prov("points[].kernel_sum", "sum of dim K_nu over critical rates nu in (-5/2, mu_i)"),
        prov("mu_bars", "min of the critical rates in (-1, 0), or 0 if there are none"),
        prov("obstruction", "coker = -6N + sum of (dim K_-3 + dim K_-4 - dim m_i), ker = 0 under the kernel hypothesis"),
        prov("rigidity", "sign of the PU(n) virtual dimension; zero exactly for Fubini-Study cones"),
    ];
    if report.virt_dim_pun.is_some() {
        provenance.push(prov(
            "virt_dim_pun",
            "sum of 6 + (8 - dim Stab_i) - 2 h1(End E_i) - 2 h1((End E_i)(-1))",
        ));
        provenance.push(prov(
            "points[].h1_end",
            "h1 = h0 + h2 - chi with stability vanishing, Serre duality and Riemann-Roch",
        ));
        provenance.push(prov(
            "universal_heuristic",
            "heuristic sum of 6 - 2 h1((End E_i)(-1))",
        ));
    }
    Ok((results, caveats, provenance, None))
}

fn operator_from(config: &RunConfig, doc: Option<&ConfigDocument>) -> Result<ConeOperatorSpec> {
    match (doc, config.preset.as_deref()) {
        (Some(d), _) => d.operator.clone().ok_or_else(|| {
            Error::InvalidConfig("config document has no `operator` section".into())
        }),
        (None, Some(name)) => presets::preset(name),
        (None, None) => Err(Error::InvalidConfig(
            "rates needs --preset or --config".into(),
        )),
    }
}

/// Index on each gap of the rate set, when the operator has a known anchor.
fn index_profile(op: &ConeOperatorSpec, set: &CriticalRateSet) -> Result<Option<Vec<Value>>> {
    let anchor = if op.self_adjoint() {
        IndexAnchor::self_adjoint_order_one()
    } else if op.is_laplacian_form() {
        IndexAnchor::laplacian()
    } else {
        return Ok(None);
    };
    let w = set.window();
    let mut cuts = vec![w.lo.clone()];
    cuts.extend(set.rates());
    cuts.push(w.hi.clone());
    let mut rows = Vec::new();
    for pair in cuts.windows(2) {
        let mid = pair[0].add(&pair[1]).mul(&Rate::ratio(1, 2));
        let index = anchored_index(op, &anchor, &WeightVector::single(mid))?;
        rows.push(json!({ "from": pair[0], "to": pair[1], "index": index }));
    }
    Ok(Some(rows))
}

fn run_rates(config: &RunConfig, doc: Option<&ConfigDocument>) -> Result<Outcome> {
    let op = operator_from(config, doc)?;
    let window = match (&config.window, doc.and_then(|d| d.window.clone())) {
        (Some(w), _) => w.clone(),
        (None, Some(w)) => w,
        (None, None) => Window::open(Rate::int(-5), Rate::int(0))?,
    };
    let set = critical_rates(&op, &window)?;
    let bar = mu_bar(&op)?;
    let mut caveats = Vec::new();
    if !set.is_complete() {
        caveats.push(format!(
            "the mode list does not certify that every critical rate in {window} is listed"
        ));
    }
    if !bar.certified {
        caveats.push("mu_bar is computed from a mode list that does not certify (-1, 0)".into());
    }
    let profile = index_profile(&op, &set)?;
    let mut results = json!({
        "window": window,
        "complete": set.is_complete(),
        "critical_rates": set.entries(),
        "mu_bar": bar,
    });
    let mut provenance = vec![
        prov("critical_rates", "simple real roots of the indicial polynomials sum_i c_i z^i with ascending coefficients c_i, kernel dimension = sum of mode multiplicities"),
        prov("mu_bar", "min of the critical rates in (-1, 0), or 0 if there are none"),
    ];
    if let Some(rows) = profile {
        results["index_profile"] = Value::Array(rows);
        provenance.push(prov(
            "index_profile",
            "anchor index 0 at the symmetric weight, changed by the kernel dimension of each critical rate crossed",
        ));
    }
    Ok((results, caveats, provenance, None))
}

fn run_cohomology(config: &RunConfig, doc: Option<&ConfigDocument>) -> Result<Outcome> {
    let expr: BundleExpr = match (&config.expr, doc.and_then(|d| d.bundle.clone())) {
        (Some(s), _) => s.parse()?,
        (None, Some(e)) => e,
        (None, None) => {
            return Err(Error::InvalidConfig(
                "cohomology needs --expr or a config with `bundle`".into(),
            ))
        }
    };
    let v = cohomology(&expr)?;
    let ch = expr.chern_character();
    let mut caveats = Vec::new();
    match v.certainty {
        crate::p2::Certainty::Exact => {}
        crate::p2::Certainty::ConditionalOnStability => {
            caveats.push(format!(
                "{expr}: valid only if the asserted stability holds"
            ));
        }
        crate::p2::Certainty::UserSupplied => {
            caveats.push(format!("{expr}: h0 and h2 were supplied by the caller"))
        }
    }
    let results = json!({
        "expr": expr.to_string(),
        "chern_character": ch,
        "euler_characteristic": expr.euler_characteristic()?,
        "cohomology": v,
    });
    let provenance = vec![
        prov("chern_character", "multiplicative Chern character over the expression tree"),
        prov("euler_characteristic", "Riemann-Roch on P^2: chi = ch2 + (3/2) c1 + rank"),
        prov(
            "cohomology",
            "Bott's formula for twisted forms; for (End E)(l), l in [-3, 0]: stability vanishing of h0, Serre duality for h2, h1 = h0 + h2 - chi",
        ),
    ];
    Ok((results, caveats, provenance, None))
}

fn run_verify(config: &RunConfig) -> Result<Outcome> {
    let mut inputs = verify::VerifyInputs::standard()?;
    if let Some(t) = config.tol {
        inputs.tol = t;
    }
    let summary = verify::verify(&inputs);
    let failure = summary.first_failure.clone();
    let results = serde_json::to_value(&summary).expect("verify summaries serialize");
    let provenance = vec![prov(
        "suites",
        "property checks of the calculator identities; see each suite's detail",
    )];
    Ok((results, Vec::new(), provenance, failure))
}

/// Writes the report to `out` or returns it for printing.
pub fn emit(report: &Report) -> Result<Option<String>> {
    let text = report.to_json();
    match &report.inputs.out {
        Some(path) => {
            std::fs::write(path, text + "\n").map_err(|e| {
                Error::InvalidConfig(format!("cannot write {}: {e}", path.display()))
            })?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dim_fubini_study() {
        let mut c = RunConfig::new(Command::Dim);
        c.preset = Some("fubini-study".into());
        c.points = Some(2);
        c.mu = Some(Rate::ratio(-1, 2));
        let r = run(&c).unwrap();
        assert_eq!(r.results["virt_dim"], json!(0));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn rates_laplacian_gap() {
        let mut c = RunConfig::new(Command::Rates);
        c.preset = Some("scalar-laplacian-s5".into());
        c.window = Some(Window::open(Rate::int(-4), Rate::int(0)).unwrap());
        let r = run(&c).unwrap();
        assert_eq!(r.results["critical_rates"], json!([]));
        assert_eq!(r.results["complete"], json!(true));
        assert_eq!(r.results["index_profile"][0]["index"], json!(0));
    }

    #[test]
    fn cohomology_end_tangent() {
        let mut c = RunConfig::new(Command::Cohomology);
        c.expr = Some("End(T)(-1)".into());
        let r = run(&c).unwrap();
        assert_eq!(r.results["cohomology"]["h1"], json!(3));
        assert_eq!(r.results["euler_characteristic"], json!(-3));
    }

    #[test]
    fn validation_errors() {
        let mut c = RunConfig::new(Command::Dim);
        assert!(matches!(run(&c), Err(Error::InvalidConfig(_))));
        c.preset = Some("nope".into());
        assert_eq!(run(&c), Err(Error::UnknownPreset("nope".into())));
        let mut c = RunConfig::new(Command::Rates);
        c.preset = Some("fubini-study".into());
        c.window = Some(Window {
            lo: Rate::int(-3),
            hi: Rate::int(-1),
            lo_closed: true,
            hi_closed: true,
        });
        match run(&c) {
            Err(e @ Error::EndpointCollision { .. }) => {
                assert_eq!(error_exit_code(&e), 1);
                assert!(e.to_string().contains("-3"));
            }
            other => panic!("expected a collision, got {other:?}"),
        }
    }

    #[test]
    fn run_config_round_trip() {
        let mut c = RunConfig::new(Command::Rates);
        c.preset = Some("fubini-study".into());
        c.window = Some(Window::open(Rate::int(-4), Rate::ratio(-1, 2)).unwrap());
        c.tol = Some(1e-10);
        let s = serde_json::to_string(&c).unwrap();
        let back: RunConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn config_document_schema_version() {
        assert!(matches!(
            ConfigDocument::parse(r#"{"schema_version": 2}"#),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            ConfigDocument::parse(r#"{"schema_version": 1, "bogus": 0}"#),
            Err(Error::Parse(_))
        ));
    }
}
