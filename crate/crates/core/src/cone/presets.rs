//! Built-in operators and loading of operator descriptions from JSON.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::cone::{dualize_rate, ConeOperatorSpec, Coverage, ModeBlock};
use crate::error::{Error, Result};
use crate::rate::{binomial, Rate, Window};

pub const SCALAR_LAPLACIAN: &str = "scalar-laplacian-s5";
pub const FUBINI_STUDY: &str = "fubini-study";

/// Degree cutoff of the built-in scalar Laplacian.
pub const LAPLACIAN_MAX_DEGREE: u32 = 20;

pub fn names() -> &'static [&'static str] {
    &[SCALAR_LAPLACIAN, FUBINI_STUDY]
}

pub fn preset(name: &str) -> Result<ConeOperatorSpec> {
    match name {
        SCALAR_LAPLACIAN => scalar_laplacian_s5(LAPLACIAN_MAX_DEGREE),
        FUBINI_STUDY => fubini_study(),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// Dimension of degree-`k` spherical harmonics on `S^5`.
pub fn harmonic_dim(k: u32) -> u64 {
    let k = i64::from(k);
    (binomial(k + 5, 5) - binomial(k + 3, 5))
        .to_u64()
        .expect("harmonic dimension fits in u64")
}

/// Eigenvalue `k(k+4)` of the Laplacian on degree-`k` harmonics of `S^5`.
pub fn harmonic_eigenvalue(k: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(u64::from(k) * (u64::from(k) + 4)))
}

/// Scalar Laplacian of the flat cone `C^3`, modes `k = 0..=max_degree`.
pub fn scalar_laplacian_s5(max_degree: u32) -> Result<ConeOperatorSpec> {
    let modes = (0..=max_degree)
        .map(|k| ModeBlock::laplacian(harmonic_eigenvalue(k), harmonic_dim(k)))
        .collect();
    ConeOperatorSpec::new(2, false, modes, Coverage::LaplacianPrefix)
}

/// Critical rates of the deformation operator at the Fubini–Study cone in
/// `(-1, 0)` together with the integer rates, before dualizing.
fn fubini_study_primary_rates() -> Vec<Rate> {
    let surd: Rate = "2*sqrt(2)-3".parse().expect("valid surd literal");
    vec![Rate::int(-3), Rate::int(-2), surd]
}

/// Self-adjoint first-order model of the deformation operator at the cone
/// over the Fubini–Study metric, with its critical rates in `(-5, 0)`.
pub fn fubini_study() -> Result<ConeOperatorSpec> {
    let mut rates: Vec<Rate> = Vec::new();
    for r in fubini_study_primary_rates() {
        let d = dualize_rate(&r);
        for x in [r, d] {
            if !rates.iter().any(|y| y.approx_eq(&x)) {
                rates.push(x);
            }
        }
    }
    rates.sort_by(|a, b| b.cmp_tol(a));
    let modes = rates
        .into_iter()
        .map(|r| ModeBlock::first_order(r, 6))
        .collect();
    let certified = Window::open(Rate::int(-5), Rate::int(0))?;
    ConeOperatorSpec::new(1, true, modes, Coverage::Certified(certified))
}

pub fn load_operator(path: &Path) -> Result<ConeOperatorSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
    parse_operator(&text)
}

pub fn parse_operator(text: &str) -> Result<ConeOperatorSpec> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("operator description: {e}")))
}
