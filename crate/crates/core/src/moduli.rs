//! Virtual and obstruction dimensions for moduli of conically singular
//! instantons with prescribed tangent cones.
//!
//! At each singular point the tangent cone contributes `6 + dim 𝔪_i` and
//! loses the homogeneous kernels with rates in `(−5/2, μ_i)`. For cones
//! pulled back from bundles `E_i` on `P^2` those kernels are
//! `2 h^1((End E_i)(ν + 1))`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cone::presets::{self, FUBINI_STUDY};
use crate::cone::{critical_rates, CriticalRateSet, RateEntry};
use crate::error::{Error, Result};
use crate::fredholm::{mu_bar, mu_bar_from_rates, MuBar};
use crate::p2::{self, BundleExpr, Certainty, KernelDims};
use crate::rate::{Rate, Window};

/// Dimension of `SU(3)`.
pub const SU3_DIM: u32 = 8;

/// Real dimension of the space of positions of a singular point.
pub const POINT_DIM: i64 = 6;

/// The symmetric weight of the deformation operator.
pub fn symmetric_weight() -> Rate {
    Rate::ratio(-5, 2)
}

/// Where a tangent cone's spectral data comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeSource {
    Preset(String),
    /// Cone over the pullback of `PU(n)` data from a bundle on `P^2`.
    Bundle(BundleExpr),
    Rates(CriticalRateSet),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentConeSpec {
    pub source: ConeSource,
    /// `dim Stab_SU(3)(A_i)`.
    pub stab_dim: u32,
    /// Dimension of the complement of the stabilizer image; defaults to `8 − stab_dim`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_dim: Option<u32>,
    /// Decay rate `μ_i`.
    pub mu: Rate,
    /// Replaces the computed `μ̄_i` when the rate data cannot certify it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_bar: Option<Rate>,
}

impl TangentConeSpec {
    pub fn new(source: ConeSource, stab_dim: u32, mu: Rate) -> Self {
        TangentConeSpec {
            source,
            stab_dim,
            m_dim: None,
            mu,
            mu_bar: None,
        }
    }

    /// The Fubini–Study cone, whose connection is `SU(3)`-invariant.
    pub fn fubini_study(mu: Rate) -> Self {
        TangentConeSpec::new(ConeSource::Preset(FUBINI_STUDY.into()), SU3_DIM, mu)
    }

    pub fn bundle(e: BundleExpr, stab_dim: u32, mu: Rate) -> Self {
        TangentConeSpec::new(ConeSource::Bundle(e), stab_dim, mu)
    }

    pub fn rates(set: CriticalRateSet, stab_dim: u32, mu: Rate) -> Self {
        TangentConeSpec::new(ConeSource::Rates(set), stab_dim, mu)
    }

    pub fn with_m_dim(mut self, m_dim: u32) -> Self {
        self.m_dim = Some(m_dim);
        self
    }

    pub fn with_mu_bar(mut self, mu_bar: Rate) -> Self {
        self.mu_bar = Some(mu_bar);
        self
    }

    pub fn effective_m_dim(&self) -> u32 {
        self.m_dim.unwrap_or(SU3_DIM.saturating_sub(self.stab_dim))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StructureGroup {
    Pu {
        n: u32,
    },
    GenericCompact {
        #[serde(default)]
        center_dim: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuliConfig {
    pub points: Vec<TangentConeSpec>,
    pub group: StructureGroup,
}

impl ModuliConfig {
    pub fn new(points: Vec<TangentConeSpec>, group: StructureGroup) -> Result<Self> {
        let config = ModuliConfig { points, group };
        config.validate_shape()?;
        Ok(config)
    }

    fn validate_shape(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::InvalidConfig(
                "at least one singular point is required".into(),
            ));
        }
        match self.group {
            StructureGroup::Pu { n } if n < 2 => Err(Error::InvalidConfig(format!(
                "PU({n}) is trivial; n must be at least 2"
            ))),
            StructureGroup::GenericCompact { center_dim } if center_dim > 0 => {
                Err(Error::InvalidConfig(
                    "structure groups with positive-dimensional center are not supported".into(),
                ))
            }
            _ => Ok(()),
        }
    }
}

/// Spectral and cohomological data of one tangent cone, checked against its spec.
#[derive(Clone, Debug, PartialEq)]
struct ResolvedPoint {
    spec: TangentConeSpec,
    rates: CriticalRateSet,
    mu_bar: MuBar,
    bundle: Option<BundleExpr>,
    kernel_dims: Option<KernelDims>,
    user_rates: bool,
    caveats: Vec<String>,
}

impl ResolvedPoint {
    fn kernel_sum(&self) -> u64 {
        self.rates.jump_between(&symmetric_weight(), &self.spec.mu)
    }

    fn contribution(&self) -> i64 {
        POINT_DIM + i64::from(self.spec.effective_m_dim()) - self.kernel_sum() as i64
    }

    fn is_fs_type(&self) -> bool {
        self.bundle.as_ref().is_some_and(is_fs_type)
    }
}

/// Rank-2 bundles with discriminant 3, i.e. twists of the tangent bundle.
fn is_fs_type(e: &BundleExpr) -> bool {
    let ch = e.chern_character();
    ch.rank == 2 && ch.discriminant() == crate::rate::rational(3, 1)
}

fn fs_mu_bar() -> Rate {
    "2*sqrt(2)-3".parse().expect("valid surd literal")
}

/// Critical rates of a bundle-derived cone: the integer rates in `[−4, −1]`
/// with dimensions from cohomology, inside the window `(−5 − μ̄, μ̄)` that
/// duality and the definition of `μ̄` keep free of other rates.
fn bundle_rates(dims: &KernelDims, mu_bar: &MuBar) -> Result<CriticalRateSet> {
    let entries = dims
        .dims
        .iter()
        .filter(|(_, d)| **d > 0)
        .map(|(nu, d)| RateEntry {
            rate: Rate::int(*nu),
            kernel_dim: *d,
        })
        .collect();
    let window = Window::open(mu_bar.value.dual(), mu_bar.value.clone())?;
    CriticalRateSet::new(entries, window, mu_bar.certified)
}

fn resolve_point(
    index: usize,
    spec: &TangentConeSpec,
    group: &StructureGroup,
) -> Result<ResolvedPoint> {
    let mut caveats = Vec::new();
    if spec.stab_dim > SU3_DIM {
        return Err(Error::InvalidConfig(format!(
            "point {index}: stab_dim {} exceeds dim SU(3) = 8",
            spec.stab_dim
        )));
    }
    if let Some(m) = spec.m_dim {
        if m > SU3_DIM {
            return Err(Error::InvalidConfig(format!(
                "point {index}: m_dim {m} exceeds 8"
            )));
        }
        if m != SU3_DIM - spec.stab_dim {
            caveats.push(format!(
                "point {index}: m_dim = {m} overrides 8 - stab_dim = {}; the cone is treated as not infinitesimally irreducible",
                SU3_DIM - spec.stab_dim
            ));
        }
    }

    let (rates, mu_bar, bundle, kernel_dims, user_rates) = match &spec.source {
        ConeSource::Preset(name) if name == FUBINI_STUDY => {
            let op = presets::fubini_study()?;
            let rates = critical_rates(&op, &Window::open(Rate::int(-5), Rate::int(0))?)?;
            let kd = p2::kernel_dims_from_cohomology(&BundleExpr::Tangent)?;
            (
                rates,
                mu_bar(&op)?,
                Some(BundleExpr::Tangent),
                Some(kd),
                false,
            )
        }
        ConeSource::Preset(name) => {
            presets::preset(name)?;
            return Err(Error::InvalidConfig(format!(
                "preset `{name}` is not the deformation operator of a tangent cone"
            )));
        }
        ConeSource::Bundle(e) => {
            let kd = p2::kernel_dims_from_cohomology(e)?;
            let mb = if is_fs_type(e) {
                MuBar {
                    value: fs_mu_bar(),
                    certified: true,
                }
            } else if let Some(v) = &spec.mu_bar {
                caveats.push(format!("point {index}: mu_bar = {v} is user-supplied"));
                MuBar {
                    value: v.clone(),
                    certified: true,
                }
            } else {
                caveats.push(format!(
                    "point {index}: the critical rates of {e} in (-1, 0) are unknown; mu_bar = 0 is assumed"
                ));
                MuBar {
                    value: Rate::zero(),
                    certified: false,
                }
            };
            if kd.certainty != Certainty::Exact {
                caveats.push(format!(
                    "point {index}: cohomology of {e} is conditional on its asserted stability"
                ));
            }
            caveats.push(format!(
                "point {index}: critical rates in [-4, -1] are taken to be integers, with dimensions from cohomology"
            ));
            (
                bundle_rates(&kd, &mb)?,
                mb,
                Some(e.clone()),
                Some(kd),
                false,
            )
        }
        ConeSource::Rates(set) => {
            let mb = match &spec.mu_bar {
                Some(v) => {
                    caveats.push(format!("point {index}: mu_bar = {v} is user-supplied"));
                    MuBar {
                        value: v.clone(),
                        certified: true,
                    }
                }
                None => mu_bar_from_rates(set),
            };
            if !mb.certified {
                caveats.push(format!(
                    "point {index}: the rate data do not certify (-1, 0); mu_bar = {} may be too large",
                    mb.value
                ));
            }
            (set.clone(), mb, None, None, true)
        }
    };

    let mu_bar_range = Window::new(Rate::int(-1), Rate::zero(), false, true)?;
    if !mu_bar_range.contains(&mu_bar.value) {
        return Err(Error::InvalidConfig(format!(
            "point {index}: mu_bar = {} must lie in (-1, 0]",
            mu_bar.value
        )));
    }
    if let (StructureGroup::Pu { n }, Some(e)) = (group, &bundle) {
        let rank = e.chern_character().rank;
        if rank != i64::from(*n) {
            return Err(Error::InvalidConfig(format!(
                "point {index}: bundle {e} has rank {rank} but the group is PU({n})"
            )));
        }
    }
    if let Some(kd) = &kernel_dims {
        let rotations = SU3_DIM - spec.stab_dim;
        if u64::from(rotations) > kd.get(-1) {
            return Err(Error::InconsistentInput(format!(
                "point {index}: 8 - stab_dim = {rotations} exceeds 2 h1(End E) = {}; infinitesimal rotations must inject into deformations",
                kd.get(-1)
            )));
        }
    }

    let mu = &spec.mu;
    let admissible = Window::open(Rate::int(-1), mu_bar.value.clone())?;
    if !admissible.contains(mu) {
        return Err(Error::RateWindow(format!(
            "point {index}: mu = {mu} is outside the admissible window {admissible}"
        )));
    }
    if let Some(e) = rates.collision(mu) {
        return Err(Error::EndpointCollision {
            rate: e.rate.label(),
            what: format!("mu at point {index}"),
        });
    }
    if let Some(e) = rates.collision(&symmetric_weight()) {
        return Err(Error::EndpointCollision {
            rate: e.rate.label(),
            what: format!("the symmetric weight -5/2 at point {index}"),
        });
    }
    let needed = Window::open(symmetric_weight(), mu.clone())?;
    if !rates.window().covers(&needed) {
        return Err(Error::RateWindow(format!(
            "point {index}: rate data window {} does not cover {needed}",
            rates.window()
        )));
    }
    if !rates.is_complete() && user_rates {
        caveats.push(format!(
            "point {index}: rate data are not certified complete on {}",
            rates.window()
        ));
    }
    Ok(ResolvedPoint {
        spec: spec.clone(),
        rates,
        mu_bar,
        bundle,
        kernel_dims,
        user_rates,
        caveats,
    })
}

fn resolve(config: &ModuliConfig) -> Result<Vec<ResolvedPoint>> {
    config.validate_shape()?;
    config
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| resolve_point(i, p, &config.group))
        .collect()
}

/// `6N + Σ dim 𝔪_i − Σ_i Σ_{ν ∈ D_i ∩ (−5/2, μ_i)} dim K_ν`.
pub fn virt_dim_general(config: &ModuliConfig) -> Result<i64> {
    Ok(resolve(config)?
        .iter()
        .map(ResolvedPoint::contribution)
        .sum())
}

fn pun_contribution(point: &ResolvedPoint, index: usize) -> Result<i64> {
    let kd = point.kernel_dims.as_ref().ok_or_else(|| {
        Error::Precondition(format!(
            "point {index} has no bundle on P^2; the PU(n) formula does not apply"
        ))
    })?;
    // 2h1(End E) = dim K_{-1}, 2h1((End E)(-1)) = dim K_{-2}
    Ok(
        POINT_DIM + i64::from(SU3_DIM - point.spec.stab_dim)
            - kd.get(-1) as i64
            - kd.get(-2) as i64,
    )
}

/// `Σ 6 + (8 − dim Stab_i) − 2h^1(End E_i) − 2h^1((End E_i)(−1))`.
pub fn virt_dim_pun(config: &ModuliConfig) -> Result<i64> {
    if !matches!(config.group, StructureGroup::Pu { .. }) {
        return Err(Error::Precondition(
            "the PU(n) formula needs structure group PU(n)".into(),
        ));
    }
    let points = resolve(config)?;
    points
        .iter()
        .enumerate()
        .map(|(i, p)| pun_contribution(p, i))
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Obstruction {
    Available { ker_dim: u64, coker_dim: u64 },
    Unavailable { reason: String },
}

/// `(dim ker, dim coker)` of the linearized operator at the symmetric weight:
/// `ker = 0` and `coker = −6N + Σ_i (dim K_{−3} + dim K_{−4} − dim 𝔪_i)`.
pub fn obstruction_dims(config: &ModuliConfig, ker_hypothesis: bool) -> Result<Obstruction> {
    let points = resolve(config)?;
    obstruction_from(&points, ker_hypothesis)
}

fn obstruction_from(points: &[ResolvedPoint], ker_hypothesis: bool) -> Result<Obstruction> {
    if !ker_hypothesis {
        return Ok(Obstruction::Unavailable {
            reason:
                "the obstruction count needs the hypothesis that the kernel at weight -5/2 vanishes"
                    .into(),
        });
    }
    let band = Window::closed(Rate::int(-4), Rate::int(-1))?;
    let mut coker = -POINT_DIM * points.len() as i64;
    for (i, p) in points.iter().enumerate() {
        if !p.rates.window().covers(&band) {
            return Ok(Obstruction::Unavailable {
                reason: format!(
                    "point {i}: rate data window {} does not contain [-4, -1]",
                    p.rates.window()
                ),
            });
        }
        if let Some(e) = p
            .rates
            .entries()
            .iter()
            .find(|e| band.contains(&e.rate) && e.rate.as_integer().is_none())
        {
            return Ok(Obstruction::Unavailable {
                reason: format!(
                    "point {i}: critical rate {} in [-4, -1] is not an integer",
                    e.rate
                ),
            });
        }
        coker += (p.rates.kernel_dim_at(&Rate::int(-3)) + p.rates.kernel_dim_at(&Rate::int(-4)))
            as i64
            - i64::from(p.spec.effective_m_dim());
    }
    let user = points.iter().any(|p| p.user_rates);
    let fail = |msg: String| {
        if user {
            Error::InconsistentInput(msg)
        } else {
            Error::Inconsistency(msg)
        }
    };
    if coker < 0 {
        return Err(fail(format!("obstruction count is negative ({coker})")));
    }
    let virt: i64 = points.iter().map(ResolvedPoint::contribution).sum();
    if coker != -virt {
        return Err(fail(format!(
            "cokernel dimension {coker} does not equal minus the virtual dimension {virt}; the rate data violate the duality nu <-> -5 - nu"
        )));
    }
    Ok(Obstruction::Available {
        ker_dim: 0,
        coker_dim: coker as u64,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Rigidity {
    ZeroDimensionalFs,
    StrictlyNegative { value: i64 },
    NotApplicable { reason: String },
}

/// Non-positivity of the `PU(n)` virtual dimension, with equality exactly for
/// Fubini–Study cones.
pub fn classify_rigidity(config: &ModuliConfig) -> Result<Rigidity> {
    let points = resolve(config)?;
    rigidity_from(config, &points)
}

fn rigidity_from(config: &ModuliConfig, points: &[ResolvedPoint]) -> Result<Rigidity> {
    if !matches!(config.group, StructureGroup::Pu { .. }) {
        return Ok(Rigidity::NotApplicable {
            reason: "structure group is not PU(n)".into(),
        });
    }
    if let Some(i) = points.iter().position(|p| p.kernel_dims.is_none()) {
        return Ok(Rigidity::NotApplicable {
            reason: format!("point {i} has no bundle on P^2"),
        });
    }
    let value: i64 = points
        .iter()
        .enumerate()
        .map(|(i, p)| pun_contribution(p, i))
        .sum::<Result<i64>>()?;
    let all_fs = points
        .iter()
        .all(|p| p.is_fs_type() && p.spec.stab_dim == SU3_DIM);
    match value.cmp(&0) {
        Ordering::Greater => Err(Error::Inconsistency(format!(
            "PU(n) virtual dimension {value} is positive"
        ))),
        Ordering::Equal if all_fs => Ok(Rigidity::ZeroDimensionalFs),
        Ordering::Equal => Err(Error::Inconsistency(
            "PU(n) virtual dimension vanishes at a cone that is not of Fubini-Study type".into(),
        )),
        Ordering::Less => Ok(Rigidity::StrictlyNegative { value }),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointContribution {
    pub index: usize,
    pub source: String,
    pub mu: Rate,
    pub mu_bar: MuBar,
    pub stab_dim: u32,
    pub m_dim: u32,
    /// Critical rates in `(−5/2, μ)` with their kernel dimensions.
    pub rates_in_sum: Vec<RateEntry>,
    pub kernel_sum: u64,
    pub contribution: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_dims: Option<BTreeMap<i64, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1_end: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1_end_minus_one: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certainty: Option<Certainty>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VirtualDimensionReport {
    pub points: Vec<PointContribution>,
    pub virt_dim: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub virt_dim_pun: Option<i64>,
    pub obstruction: Obstruction,
    /// `ker(L_A)_{−5/2}`, known to vanish only under the kernel hypothesis.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ker_dim: Option<u64>,
    pub rigidity: Rigidity,
    /// Heuristic `Σ 6 − 2h^1((End E_i)(−1))` for universal moduli; not a theorem.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub universal_heuristic: Option<i64>,
    pub mu_bars: Vec<Rate>,
    pub caveats: Vec<String>,
}

fn describe(source: &ConeSource) -> String {
    match source {
        ConeSource::Preset(name) => format!("preset:{name}"),
        ConeSource::Bundle(e) => format!("bundle:{e}"),
        ConeSource::Rates(set) => format!(
            "rates:{} critical rates on {}",
            set.entries().len(),
            set.window()
        ),
    }
}

pub fn virtual_dimension_report(
    config: &ModuliConfig,
    ker_hypothesis: bool,
) -> Result<VirtualDimensionReport> {
    let points = resolve(config)?;
    let virt_dim: i64 = points.iter().map(ResolvedPoint::contribution).sum();
    let is_pu = matches!(config.group, StructureGroup::Pu { .. });
    let all_bundles = points.iter().all(|p| p.kernel_dims.is_some());
    let virt_dim_pun = if is_pu && all_bundles {
        let v = points
            .iter()
            .enumerate()
            .map(|(i, p)| pun_contribution(p, i))
            .sum::<Result<i64>>()?;
        if v != virt_dim {
            return Err(Error::Inconsistency(format!(
                "general formula gives {virt_dim} but the PU(n) formula gives {v}"
            )));
        }
        Some(v)
    } else {
        None
    };
    let obstruction = obstruction_from(&points, ker_hypothesis)?;
    let rigidity = rigidity_from(config, &points)?;
    let universal_heuristic = if is_pu && all_bundles {
        Some(
            points
                .iter()
                .map(|p| POINT_DIM - p.kernel_dims.as_ref().map_or(0, |k| k.get(-2)) as i64)
                .sum(),
        )
    } else {
        None
    };
    let mut caveats: Vec<String> = points
        .iter()
        .flat_map(|p| p.caveats.iter().cloned())
        .collect();
    if universal_heuristic.is_some() {
        caveats.push(
            "universal_heuristic is a heuristic count for universal moduli, not a proven dimension"
                .into(),
        );
    }
    let contributions = points
        .iter()
        .enumerate()
        .map(|(index, p)| PointContribution {
            index,
            source: describe(&p.spec.source),
            mu: p.spec.mu.clone(),
            mu_bar: p.mu_bar.clone(),
            stab_dim: p.spec.stab_dim,
            m_dim: p.spec.effective_m_dim(),
            rates_in_sum: p
                .rates
                .between(&symmetric_weight(), &p.spec.mu)
                .into_iter()
                .cloned()
                .collect(),
            kernel_sum: p.kernel_sum(),
            contribution: p.contribution(),
            kernel_dims: p.kernel_dims.as_ref().map(|k| k.dims.clone()),
            h1_end: p.kernel_dims.as_ref().map(|k| k.get(-1) / 2),
            h1_end_minus_one: p.kernel_dims.as_ref().map(|k| k.get(-2) / 2),
            certainty: p.kernel_dims.as_ref().map(|k| k.certainty),
        })
        .collect();
    let ker_dim = match obstruction {
        Obstruction::Available { ker_dim, .. } => Some(ker_dim),
        Obstruction::Unavailable { .. } => None,
    };
    Ok(VirtualDimensionReport {
        points: contributions,
        virt_dim,
        virt_dim_pun,
        obstruction,
        ker_dim,
        rigidity,
        universal_heuristic,
        mu_bars: points.iter().map(|p| p.mu_bar.value.clone()).collect(),
        caveats,
    })
}

/// `−1/2` when it is admissible, otherwise the midpoint of `(−1, μ̄)`.
pub fn default_mu(mu_bar: &Rate) -> Rate {
    let half = Rate::ratio(-1, 2);
    if half.cmp_tol(mu_bar) == Ordering::Less {
        half
    } else {
        mu_bar.add(&Rate::int(-1)).mul(&half.neg())
    }
}
