//! Dilation-invariant operators on the cone over `S^5`, described by their
//! cross-section spectral data.
//!
//! An order-`ℓ` conical operator acts on the `j`-th joint eigensection of the
//! cross-section operators as `r^{-ℓ} Σ_i ν_{ℓ-i,j} (r∂_r)^i`. Homogeneous
//! solutions `r^λ u_j` exist exactly when `λ` is a root of the indicial
//! polynomial `p_j(z) = Σ_i ν_{ℓ-i,j} z^i`.

pub mod duality;
pub mod poly;
pub mod presets;
mod residual;

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rate::{Rate, Window, RATE_TOL};

pub use duality::{eigen_duality_check, DualPair, DualityCheck};
pub use poly::{RationalPoly, RootIssue};
pub use residual::radial_residual;

/// Real dimension of the cone `C^3 \ {0} = R_{>0} × S^5`.
pub const CONE_DIMENSION: u32 = 6;

/// One joint eigenspace of the cross-section operators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeBlock {
    /// `coefficients[i]` multiplies `z^i` in the indicial polynomial.
    #[serde(with = "crate::rate::as_string::vec")]
    pub coefficients: Vec<Rate>,
    pub multiplicity: u64,
}

impl ModeBlock {
    pub fn new(coefficients: Vec<Rate>, multiplicity: u64) -> Self {
        ModeBlock {
            coefficients,
            multiplicity,
        }
    }

    /// Laplacian-type block `-z^2 - 4z + μ`.
    pub fn laplacian(cross_eigenvalue: BigRational, multiplicity: u64) -> Self {
        ModeBlock::new(
            vec![Rate::Exact(cross_eigenvalue), Rate::int(-4), Rate::int(-1)],
            multiplicity,
        )
    }

    /// First-order block `z - λ` with the single root `λ`.
    pub fn first_order(root: Rate, multiplicity: u64) -> Self {
        ModeBlock::new(vec![root.neg(), Rate::int(1)], multiplicity)
    }

    fn laplacian_eigenvalue(&self) -> Option<&BigRational> {
        match self.coefficients.as_slice() {
            [Rate::Exact(mu), b, a]
                if *b == Rate::int(-4) && *a == Rate::int(-1) && !mu.is_negative() =>
            {
                Some(mu)
            }
            _ => None,
        }
    }
}

/// What a finite mode list can certify about the full spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coverage {
    /// The modes are a sample; no window is certified.
    Truncated,
    /// Laplacian-form blocks listing every cross-section eigenvalue up to the
    /// largest one given. Roots move outward monotonically in the eigenvalue.
    LaplacianPrefix,
    /// Catalog data known to exhaust the critical rates inside this window.
    Certified(Window),
}

#[derive(Deserialize)]
struct RawSpec {
    order: u32,
    #[serde(default)]
    self_adjoint: bool,
    modes: Vec<ModeBlock>,
    #[serde(default = "default_coverage")]
    coverage: Coverage,
}

fn default_coverage() -> Coverage {
    Coverage::Truncated
}

/// Cross-section spectral data of a conical operator on the six-dimensional cone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct ConeOperatorSpec {
    order: u32,
    self_adjoint: bool,
    modes: Vec<ModeBlock>,
    coverage: Coverage,
}

impl TryFrom<RawSpec> for ConeOperatorSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        ConeOperatorSpec::new(raw.order, raw.self_adjoint, raw.modes, raw.coverage)
    }
}

impl ConeOperatorSpec {
    pub fn new(
        order: u32,
        self_adjoint: bool,
        modes: Vec<ModeBlock>,
        coverage: Coverage,
    ) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidOperator("order must be at least 1".into()));
        }
        if modes.is_empty() {
            return Err(Error::InvalidOperator(
                "at least one mode block is required".into(),
            ));
        }
        if self_adjoint && order != 1 {
            return Err(Error::InvalidOperator(
                "the self-adjoint flag is only meaningful for order 1".into(),
            ));
        }
        for (j, m) in modes.iter().enumerate() {
            if m.multiplicity < 1 {
                return Err(Error::InvalidOperator(format!(
                    "mode {j} has multiplicity 0"
                )));
            }
            indicial_polynomial_at(m, order, j)?;
        }
        match &coverage {
            Coverage::LaplacianPrefix => {
                if order != 2 || modes.iter().any(|m| m.laplacian_eigenvalue().is_none()) {
                    return Err(Error::InvalidOperator(
                        "laplacian-prefix coverage needs order 2 blocks of the form (mu, -4, -1) with mu >= 0".into(),
                    ));
                }
            }
            Coverage::Certified(w) => w.validate()?,
            Coverage::Truncated => {}
        }
        Ok(ConeOperatorSpec {
            order,
            self_adjoint,
            modes,
            coverage,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn self_adjoint(&self) -> bool {
        self.self_adjoint
    }

    pub fn modes(&self) -> &[ModeBlock] {
        &self.modes
    }

    pub fn coverage(&self) -> &Coverage {
        &self.coverage
    }

    pub fn dimension_of_cone(&self) -> u32 {
        CONE_DIMENSION
    }

    pub fn is_laplacian_form(&self) -> bool {
        self.order == 2
            && self
                .modes
                .iter()
                .all(|m| m.laplacian_eigenvalue().is_some())
    }

    /// Whether the mode list provably exhausts the critical rates in `window`.
    pub fn certifies(&self, window: &Window) -> bool {
        match &self.coverage {
            Coverage::Truncated => false,
            Coverage::Certified(w) => w.covers(window),
            Coverage::LaplacianPrefix => {
                let Some(max) = self
                    .modes
                    .iter()
                    .filter_map(|m| m.laplacian_eigenvalue())
                    .max()
                else {
                    return false;
                };
                match laplacian_cone_rates(max) {
                    Ok((upper, lower)) => Window {
                        lo: lower,
                        hi: upper,
                        lo_closed: true,
                        hi_closed: true,
                    }
                    .covers(window),
                    Err(_) => false,
                }
            }
        }
    }

    pub fn indicial_polynomial(&self, mode: usize) -> Result<IndicialPolynomial> {
        let block = self
            .modes
            .get(mode)
            .ok_or_else(|| Error::Precondition(format!("mode index {mode} out of range")))?;
        indicial_polynomial_at(block, self.order, mode)
    }

    /// Simple real roots of mode `mode`'s indicial polynomial.
    pub fn mode_roots(&self, mode: usize) -> Result<Vec<Rate>> {
        self.indicial_polynomial(mode)?.simple_real_roots(mode)
    }
}

/// Indicial polynomial with coefficients in ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicialPolynomial {
    coeffs: Vec<Rate>,
}

impl IndicialPolynomial {
    pub fn coeffs(&self) -> &[Rate] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: &Rate) -> Rate {
        self.coeffs
            .iter()
            .rev()
            .fold(Rate::zero(), |acc, c| acc.mul(z).add(c))
    }

    pub fn as_rational(&self) -> Option<RationalPoly> {
        self.coeffs
            .iter()
            .map(|c| c.as_rational().cloned())
            .collect::<Option<Vec<_>>>()
            .map(RationalPoly::new)
    }

    /// Whether `z` is a root, exactly when possible and within tolerance otherwise.
    pub fn vanishes_at(&self, z: &Rate) -> bool {
        let value = self.eval(z);
        if value.is_exact() {
            return value.is_zero();
        }
        let x = z.to_f64().abs();
        let scale = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_f64().abs() * x.powi(i as i32))
            .fold(1.0, f64::max);
        value.to_f64().abs() < RATE_TOL * scale
    }

    fn simple_real_roots(&self, mode: usize) -> Result<Vec<Rate>> {
        let violation = |detail: String| Error::AssumptionViolation { mode, detail };
        if let Some(p) = self.as_rational() {
            return p.simple_real_roots().map_err(|e| violation(e.to_string()));
        }
        if self.degree() == 1 {
            return Ok(vec![self.coeffs[0].neg().div(&self.coeffs[1])?]);
        }
        // Companion matrix of the monic normalization.
        let n = self.degree();
        let lead = self.coeffs[n].to_f64();
        let mut companion = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            companion[(i, n - 1)] = -self.coeffs[i].to_f64() / lead;
        }
        let eig = companion.complex_eigenvalues();
        let mut roots = Vec::with_capacity(n);
        for z in eig.iter() {
            if z.im.abs() > RATE_TOL * (1.0 + z.re.abs()) {
                return Err(violation(format!("non-real root {} + {}i", z.re, z.im)));
            }
            roots.push(z.re);
        }
        roots.sort_by(|a, b| a.total_cmp(b));
        if roots
            .windows(2)
            .any(|w| (w[1] - w[0]).abs() < RATE_TOL * (1.0 + w[0].abs()))
        {
            return Err(violation("repeated root".into()));
        }
        Ok(roots.into_iter().map(Rate::Float).collect())
    }
}

fn indicial_polynomial_at(
    block: &ModeBlock,
    order: u32,
    mode: usize,
) -> Result<IndicialPolynomial> {
    if block.coefficients.len() != order as usize + 1 {
        return Err(Error::InvalidOperator(format!(
            "mode {mode} has {} coefficients, expected {}",
            block.coefficients.len(),
            order + 1
        )));
    }
    if block.coefficients[order as usize].is_zero_tol(RATE_TOL) {
        return Err(Error::Ellipticity { mode });
    }
    Ok(IndicialPolynomial {
        coeffs: block.coefficients.clone(),
    })
}

/// `p(z) = Σ_i coefficients[i] z^i`, checked to have exact degree `order`.
pub fn indicial_polynomial(block: &ModeBlock, order: u32) -> Result<IndicialPolynomial> {
    indicial_polynomial_at(block, order, 0)
}

/// A critical rate together with the dimension of its homogeneous kernel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateEntry {
    pub rate: Rate,
    pub kernel_dim: u64,
}

#[derive(Deserialize)]
struct RawRateSet {
    entries: Vec<RateEntry>,
    window: Window,
    #[serde(default)]
    complete: bool,
}

/// Critical rates inside a window, strictly increasing, with kernel dimensions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRateSet")]
pub struct CriticalRateSet {
    entries: Vec<RateEntry>,
    window: Window,
    complete: bool,
}

impl TryFrom<RawRateSet> for CriticalRateSet {
    type Error = Error;

    fn try_from(raw: RawRateSet) -> Result<Self> {
        CriticalRateSet::new(raw.entries, raw.window, raw.complete)
    }
}

impl CriticalRateSet {
    pub fn new(entries: Vec<RateEntry>, window: Window, complete: bool) -> Result<Self> {
        window.validate()?;
        for e in &entries {
            if e.kernel_dim == 0 {
                return Err(Error::InvalidConfig(format!(
                    "critical rate {} has kernel dimension 0",
                    e.rate
                )));
            }
            if let Some(end) = window.closed_endpoint_hit(&e.rate) {
                return Err(Error::EndpointCollision {
                    rate: e.rate.label(),
                    what: format!("window endpoint {end}"),
                });
            }
            if !window.contains(&e.rate) {
                return Err(Error::InvalidConfig(format!(
                    "critical rate {} lies outside window {window}",
                    e.rate
                )));
            }
        }
        if entries
            .windows(2)
            .any(|w| w[0].rate.cmp_tol(&w[1].rate) != Ordering::Less)
        {
            return Err(Error::InvalidConfig(
                "critical rates must be strictly increasing".into(),
            ));
        }
        Ok(CriticalRateSet {
            entries,
            window,
            complete,
        })
    }

    pub fn entries(&self) -> &[RateEntry] {
        &self.entries
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rates(&self) -> Vec<Rate> {
        self.entries.iter().map(|e| e.rate.clone()).collect()
    }

    pub fn kernel_dim_at(&self, rate: &Rate) -> u64 {
        self.entries
            .iter()
            .find(|e| e.rate.approx_eq(rate))
            .map_or(0, |e| e.kernel_dim)
    }

    pub fn collision(&self, rate: &Rate) -> Option<&RateEntry> {
        self.entries.iter().find(|e| e.rate.approx_eq(rate))
    }

    /// Entries strictly between `lo` and `hi`.
    pub fn between(&self, lo: &Rate, hi: &Rate) -> Vec<&RateEntry> {
        self.entries
            .iter()
            .filter(|e| {
                e.rate.cmp_tol(lo) == Ordering::Greater && e.rate.cmp_tol(hi) == Ordering::Less
            })
            .collect()
    }

    /// Total kernel dimension strictly between `lo` and `hi`.
    pub fn jump_between(&self, lo: &Rate, hi: &Rate) -> u64 {
        self.between(lo, hi).iter().map(|e| e.kernel_dim).sum()
    }
}

/// Critical rates of `op` inside `window` with their kernel dimensions.
///
/// A root on a closed endpoint is an error; open endpoints may coincide with
/// roots, which are then excluded.
pub fn critical_rates(op: &ConeOperatorSpec, window: &Window) -> Result<CriticalRateSet> {
    window.validate()?;
    let mut found: Vec<RateEntry> = Vec::new();
    for (j, block) in op.modes.iter().enumerate() {
        for root in op.mode_roots(j)? {
            if let Some(end) = window.closed_endpoint_hit(&root) {
                return Err(Error::EndpointCollision {
                    rate: root.label(),
                    what: format!("closed window endpoint {end} (mode {j})"),
                });
            }
            if window.contains(&root) {
                found.push(RateEntry {
                    rate: root,
                    kernel_dim: block.multiplicity,
                });
            }
        }
    }
    found.sort_by(|a, b| a.rate.cmp_tol(&b.rate));
    let mut merged: Vec<RateEntry> = Vec::with_capacity(found.len());
    for e in found {
        match merged.last_mut() {
            Some(last) if last.rate.approx_eq(&e.rate) => {
                last.kernel_dim += e.kernel_dim;
                if !last.rate.is_exact() && e.rate.is_exact() {
                    last.rate = e.rate;
                }
            }
            _ => merged.push(e),
        }
    }
    let complete = op.certifies(window);
    CriticalRateSet::new(merged, window.clone(), complete)
}

/// `dim K(L)_λ`: total multiplicity of the modes whose indicial polynomial vanishes at `rate`.
pub fn homogeneous_kernel_dim(op: &ConeOperatorSpec, rate: &Rate) -> u64 {
    op.modes
        .iter()
        .enumerate()
        .filter(|(j, _)| {
            op.indicial_polynomial(*j)
                .is_ok_and(|p| p.vanishes_at(rate))
        })
        .map(|(_, m)| m.multiplicity)
        .sum()
}

/// Roots `(-2 + sqrt(4 + μ), -2 - sqrt(4 + μ))` of `-λ(λ + 4) + μ = 0`.
pub fn laplacian_cone_rates(cross_eigenvalue: &BigRational) -> Result<(Rate, Rate)> {
    if cross_eigenvalue.is_negative() {
        return Err(Error::Domain(format!(
            "cross-section Laplacian eigenvalue {cross_eigenvalue} is negative; the Laplacian is a nonnegative operator"
        )));
    }
    let root = Rate::sqrt_rational(&(cross_eigenvalue + BigRational::from_integer(4.into())))?;
    let center = Rate::int(-2);
    Ok((center.add(&root), center.sub(&root)))
}

/// The duality `λ ↦ −5 − λ` between homogeneous kernels of the deformation operator.
pub fn dualize_rate(rate: &Rate) -> Rate {
    rate.dual()
}

/// Whether a cross-section eigenvalue list is compatible with a nonnegative Laplacian.
pub fn is_nonnegative_spectrum(eigenvalues: &[BigRational]) -> bool {
    eigenvalues.iter().all(|m| !m.is_negative() || m.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rate::rational;

    fn lap(mu: i64) -> ModeBlock {
        ModeBlock::laplacian(rational(mu, 1), 1)
    }

    #[test]
    fn indicial_polynomial_examples() {
        for (mu, expected) in [
            (0, vec![Rate::int(-4), Rate::int(0)]),
            (5, vec![Rate::int(-5), Rate::int(1)]),
            (12, vec![Rate::int(-6), Rate::int(2)]),
        ] {
            let p = indicial_polynomial(&lap(mu), 2).unwrap();
            assert_eq!(p.degree(), 2);
            assert_eq!(p.coeffs()[2], Rate::int(-1));
            let roots = p.simple_real_roots(0).unwrap();
            assert_eq!(roots, expected);
        }
    }

    #[test]
    fn quadratic_roots_match_numeric_oracle() {
        // independent oracle: Newton iteration on -z^2 - 4z + mu from two starts
        for mu in [0i64, 5, 12, 2, 7] {
            let f = |z: f64| -z * z - 4.0 * z + mu as f64;
            let df = |z: f64| -2.0 * z - 4.0;
            let newton = |mut z: f64| {
                for _ in 0..100 {
                    z -= f(z) / df(z);
                }
                z
            };
            let oracle = [newton(-50.0), newton(50.0)];
            let roots = indicial_polynomial(&lap(mu), 2)
                .unwrap()
                .simple_real_roots(0)
                .unwrap();
            assert!((roots[0].to_f64() - oracle[0]).abs() < 1e-12);
            assert!((roots[1].to_f64() - oracle[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipticity_and_shape_errors() {
        let bad = ModeBlock::new(vec![Rate::int(1), Rate::int(2), Rate::int(0)], 1);
        assert_eq!(
            indicial_polynomial(&bad, 2),
            Err(Error::Ellipticity { mode: 0 })
        );
        assert!(matches!(
            indicial_polynomial(&bad, 1),
            Err(Error::InvalidOperator(_))
        ));
        assert!(ConeOperatorSpec::new(2, true, vec![lap(0)], Coverage::Truncated).is_err());
        assert!(ConeOperatorSpec::new(2, false, vec![], Coverage::Truncated).is_err());
        assert!(ConeOperatorSpec::new(
            2,
            false,
            vec![ModeBlock::laplacian(rational(1, 1), 0)],
            Coverage::Truncated
        )
        .is_err());
        let not_lap = ModeBlock::new(vec![Rate::int(1), Rate::int(0), Rate::int(1)], 1);
        assert!(ConeOperatorSpec::new(2, false, vec![not_lap], Coverage::LaplacianPrefix).is_err());
    }

    #[test]
    fn assumption_violations_are_reported() {
        let repeated = ModeBlock::new(vec![Rate::int(4), Rate::int(4), Rate::int(1)], 1);
        let op = ConeOperatorSpec::new(2, false, vec![repeated], Coverage::Truncated).unwrap();
        let w = Window::open(Rate::int(-10), Rate::int(10)).unwrap();
        assert!(matches!(
            critical_rates(&op, &w),
            Err(Error::AssumptionViolation { .. })
        ));
        let complex = ModeBlock::new(vec![Rate::int(1), Rate::int(0), Rate::int(1)], 1);
        let op = ConeOperatorSpec::new(2, false, vec![complex], Coverage::Truncated).unwrap();
        assert!(matches!(
            critical_rates(&op, &w),
            Err(Error::AssumptionViolation { .. })
        ));
    }

    #[test]
    fn closed_endpoint_collision() {
        let op = ConeOperatorSpec::new(2, false, vec![lap(5)], Coverage::Truncated).unwrap();
        let w = Window::closed(Rate::int(1), Rate::int(3)).unwrap();
        match critical_rates(&op, &w) {
            Err(Error::EndpointCollision { rate, .. }) => assert_eq!(rate, "1"),
            other => panic!("expected collision, got {other:?}"),
        }
        // the same endpoint is fine when open
        let w = Window::open(Rate::int(1), Rate::int(3)).unwrap();
        assert!(critical_rates(&op, &w).unwrap().is_empty());
    }

    #[test]
    fn merges_shared_roots() {
        let op = ConeOperatorSpec::new(
            1,
            true,
            vec![
                ModeBlock::first_order(Rate::int(-2), 3),
                ModeBlock::first_order(Rate::int(-2), 4),
            ],
            Coverage::Truncated,
        )
        .unwrap();
        let set = critical_rates(&op, &Window::open(Rate::int(-5), Rate::int(0)).unwrap()).unwrap();
        assert_eq!(
            set.entries(),
            &[RateEntry {
                rate: Rate::int(-2),
                kernel_dim: 7
            }]
        );
        assert!(!set.is_complete());
    }

    #[test]
    fn laplacian_rates() {
        assert_eq!(
            laplacian_cone_rates(&rational(0, 1)).unwrap(),
            (Rate::int(0), Rate::int(-4))
        );
        assert_eq!(
            laplacian_cone_rates(&rational(5, 1)).unwrap(),
            (Rate::int(1), Rate::int(-5))
        );
        let (a, b) = laplacian_cone_rates(&rational(2, 1)).unwrap();
        assert_eq!(a.label(), "sqrt(6)-2");
        assert_eq!(b.label(), "-sqrt(6)-2");
        // λ(λ+4) = μ
        let check = a.mul(&a.add(&Rate::int(4)));
        assert_eq!(check, Rate::int(2));
        assert!(matches!(
            laplacian_cone_rates(&rational(-1, 1)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn dualize_examples() {
        assert_eq!(dualize_rate(&Rate::int(-3)), Rate::int(-2));
        assert_eq!(dualize_rate(&Rate::ratio(-5, 2)), Rate::ratio(-5, 2));
        assert_eq!(dualize_rate(&Rate::int(0)), Rate::int(-5));
    }

    #[test]
    fn surd_coefficient_modes_have_exact_roots() {
        let r: Rate = "2*sqrt(2)-3".parse().unwrap();
        let block = ModeBlock::first_order(r.clone(), 6);
        let op = ConeOperatorSpec::new(1, true, vec![block], Coverage::Truncated).unwrap();
        assert_eq!(op.mode_roots(0).unwrap(), vec![r.clone()]);
        assert_eq!(homogeneous_kernel_dim(&op, &r), 6);
    }

    #[test]
    fn float_coefficient_quadratic() {
        let block = ModeBlock::new(vec![Rate::float(-2.0), Rate::float(0.5), Rate::int(1)], 2);
        let op = ConeOperatorSpec::new(2, false, vec![block], Coverage::Truncated).unwrap();
        let roots = op.mode_roots(0).unwrap();
        // z^2 + 0.5 z - 2
        let disc = (0.25f64 + 8.0).sqrt();
        assert!((roots[0].to_f64() - (-0.5 - disc) / 2.0).abs() < 1e-12);
        assert!((roots[1].to_f64() - (-0.5 + disc) / 2.0).abs() < 1e-12);
        assert_eq!(homogeneous_kernel_dim(&op, &roots[1]), 2);
    }

    #[test]
    fn json_roundtrip_of_spec() {
        let json = r#"{"order":2,"self_adjoint":false,"modes":[{"coefficients":["5","-4","-1"],"multiplicity":6}]}"#;
        let op: ConeOperatorSpec = serde_json::from_str(json).unwrap();
        assert_eq!(op.modes()[0].coefficients[0], Rate::int(5));
        assert_eq!(op.coverage(), &Coverage::Truncated);
        let back = serde_json::to_string(&op).unwrap();
        let again: ConeOperatorSpec = serde_json::from_str(&back).unwrap();
        assert_eq!(again, op);
        let bad = r#"{"order":1,"self_adjoint":true,"modes":[{"coefficients":["1","0"],"multiplicity":1}]}"#;
        assert!(serde_json::from_str::<ConeOperatorSpec>(bad).is_err());
    }
}
