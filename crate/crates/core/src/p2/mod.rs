//! Cohomology of bundles on the projective plane from Chern data.
//!
//! Two routes are supported: sums and twists of `Ω^p` are handled exactly by
//! Bott's formula, and twisted endomorphism bundles `(End E)(ℓ)` with
//! `ℓ ∈ [−3, 0]` of (poly)stable `E` by stability vanishing, Serre duality and
//! Riemann–Roch.

pub mod bott;
pub mod chern;
pub mod expr;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bott::bott_cohomology;
pub use chern::ChernCharacter;
pub use expr::{BundleExpr, ChernData, Stability};

/// How much of a cohomology answer rests on asserted input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certainty {
    Exact,
    /// Valid provided the asserted (poly)stability holds.
    ConditionalOnStability,
    /// Built from caller-supplied `h^0` and `h^2`.
    UserSupplied,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyVector {
    pub h0: u64,
    pub h1: u64,
    pub h2: u64,
    pub certainty: Certainty,
}

impl CohomologyVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64 + self.h2 as i64
    }

    fn add(&self, other: &Self) -> Self {
        CohomologyVector {
            h0: self.h0 + other.h0,
            h1: self.h1 + other.h1,
            h2: self.h2 + other.h2,
            certainty: self.certainty.max(other.certainty),
        }
    }
}

/// Explicit `h^0` and `h^2` for End-type inputs whose stability is not asserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyOverrides {
    pub h0: u64,
    pub h2: u64,
}

/// The twists `ℓ` for which End-type cohomology is available.
pub const END_TWIST_RANGE: std::ops::RangeInclusive<i64> = -3..=0;

pub fn chern_character(expr: &BundleExpr) -> ChernCharacter {
    expr.chern_character()
}

pub fn euler_characteristic(expr: &BundleExpr) -> Result<i64> {
    expr.euler_characteristic()
}

/// Decomposition into forms `Ω^p(k)`, with `Ω^2(k)` written as `O(k - 3)`.
fn bott_terms(expr: &BundleExpr) -> Option<Vec<(u32, i64)>> {
    match expr {
        BundleExpr::Line(k) => Some(vec![(0, *k)]),
        BundleExpr::Tangent => Some(vec![(1, 3)]),
        BundleExpr::Cotangent => Some(vec![(1, 0)]),
        BundleExpr::Abstract(_) => None,
        // (Ω^p)^* = Ω^{2-p}(3)
        BundleExpr::Dual(e) => Some(
            bott_terms(e)?
                .into_iter()
                .map(|(p, k)| if p == 0 { (0, -k) } else { (1, 3 - k) })
                .collect(),
        ),
        BundleExpr::Twist(e, l) => Some(
            bott_terms(e)?
                .into_iter()
                .map(|(p, k)| (p, k + l))
                .collect(),
        ),
        BundleExpr::Sum(items) => {
            let mut out = Vec::new();
            for e in items {
                out.extend(bott_terms(e)?);
            }
            Some(out)
        }
        BundleExpr::End(e) => {
            let terms = bott_terms(e)?;
            if terms.iter().any(|(p, _)| *p != 0) {
                return None;
            }
            Some(
                terms
                    .iter()
                    .flat_map(|(_, a)| terms.iter().map(move |(_, b)| (0, a - b)))
                    .collect(),
            )
        }
    }
}

/// `(E, ℓ)` when the expression is `(End E)(ℓ)` up to twists and duals.
fn end_form(expr: &BundleExpr) -> Option<(&BundleExpr, i64)> {
    match expr {
        BundleExpr::End(e) => Some((e, 0)),
        BundleExpr::Twist(x, l) => end_form(x).map(|(e, a)| (e, a + l)),
        BundleExpr::Dual(x) => end_form(x).map(|(e, a)| (e, -a)),
        _ => None,
    }
}

fn stability_of(expr: &BundleExpr) -> Option<(Stability, Certainty)> {
    match expr {
        BundleExpr::Line(_) | BundleExpr::Tangent | BundleExpr::Cotangent => {
            Some((Stability::Stable, Certainty::Exact))
        }
        BundleExpr::Abstract(d) => Some((d.stability.clone(), Certainty::ConditionalOnStability)),
        BundleExpr::Dual(e) | BundleExpr::Twist(e, _) => stability_of(e),
        BundleExpr::Sum(_) | BundleExpr::End(_) => None,
    }
}

pub fn cohomology(expr: &BundleExpr) -> Result<CohomologyVector> {
    cohomology_with(expr, None)
}

/// Cohomology of `expr`, using `overrides` for `h^0`/`h^2` of End-type input.
pub fn cohomology_with(
    expr: &BundleExpr,
    overrides: Option<CohomologyOverrides>,
) -> Result<CohomologyVector> {
    let chi = expr.euler_characteristic()?;
    let result = if let Some(terms) = bott_terms(expr) {
        terms.iter().map(|&(p, k)| bott_cohomology(p, k)).fold(
            CohomologyVector {
                h0: 0,
                h1: 0,
                h2: 0,
                certainty: Certainty::Exact,
            },
            |acc, v| acc.add(&v),
        )
    } else if let Some((e, l)) = end_form(expr) {
        end_cohomology(e, l, chi, overrides)?
    } else {
        return Err(Error::UnsupportedExpression(format!(
            "{expr} is neither a sum of twisted forms nor a twisted endomorphism bundle"
        )));
    };
    if result.euler_characteristic() != chi {
        return Err(Error::Inconsistency(format!(
            "h0 - h1 + h2 = {} but Riemann-Roch gives {chi} for {expr}",
            result.euler_characteristic()
        )));
    }
    Ok(result)
}

fn end_cohomology(
    e: &BundleExpr,
    l: i64,
    chi: i64,
    overrides: Option<CohomologyOverrides>,
) -> Result<CohomologyVector> {
    if !END_TWIST_RANGE.contains(&l) {
        return Err(Error::UnsupportedRange(format!(
            "(End {e})({l}): twist must lie in [-3, 0] for stability vanishing to apply"
        )));
    }
    if !e.chern_character().is_integral() {
        return Err(Error::InconsistentInput(format!(
            "{e} has non-integral Chern classes"
        )));
    }
    let (h0, h2, certainty) = match (overrides, stability_of(e)) {
        (Some(o), _) => (o.h0, o.h2, Certainty::UserSupplied),
        (None, Some((Stability::Stable, c))) => (u64::from(l == 0), u64::from(l == -3), c),
        // Hom(E_i, E_j) is one-dimensional for i = j and zero otherwise.
        (None, Some((Stability::Polystable(s), c))) => (
            if l == 0 { u64::from(s) } else { 0 },
            if l == -3 { u64::from(s) } else { 0 },
            c,
        ),
        (None, Some((Stability::Unstable, _))) => {
            return Err(Error::InsufficientData(format!(
                "{e} is not (poly)stable; supply h0 and h2 of (End E)({l}) explicitly"
            )))
        }
        (None, None) => {
            return Err(Error::InsufficientData(format!(
                "stability of {e} is unknown; supply h0 and h2 of (End E)({l}) explicitly"
            )))
        }
    };
    let h1 = h0 as i64 + h2 as i64 - chi;
    if h1 < 0 {
        let msg = format!(
            "(End {e})({l}) would have h1 = {h1}; no (poly)stable bundle has these Chern classes"
        );
        return Err(if certainty == Certainty::Exact {
            Error::Inconsistency(msg)
        } else {
            Error::InconsistentInput(msg)
        });
    }
    Ok(CohomologyVector {
        h0,
        h1: h1 as u64,
        h2,
        certainty,
    })
}

/// `dim K_ν = 2 h^1((End E)(ν + 1))` for `ν ∈ {−4, −3, −2, −1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelDims {
    pub dims: BTreeMap<i64, u64>,
    pub certainty: Certainty,
}

impl KernelDims {
    pub fn get(&self, rate: i64) -> u64 {
        self.dims.get(&rate).copied().unwrap_or(0)
    }
}

pub const KERNEL_RATES: [i64; 4] = [-4, -3, -2, -1];

pub fn kernel_dims_from_cohomology(e: &BundleExpr) -> Result<KernelDims> {
    kernel_dims_with(e, &BTreeMap::new())
}

/// As [`kernel_dims_from_cohomology`], with per-twist overrides keyed by `ℓ = ν + 1`.
pub fn kernel_dims_with(
    e: &BundleExpr,
    overrides: &BTreeMap<i64, CohomologyOverrides>,
) -> Result<KernelDims> {
    let mut dims = BTreeMap::new();
    let mut certainty = Certainty::Exact;
    for nu in KERNEL_RATES {
        let twisted = BundleExpr::end_twist(e.clone(), nu + 1);
        let v = cohomology_with(&twisted, overrides.get(&(nu + 1)).copied())?;
        certainty = certainty.max(v.certainty);
        dims.insert(nu, 2 * v.h1);
    }
    for (a, b) in [(-4, -1), (-3, -2)] {
        if dims[&a] != dims[&b] {
            let msg = format!(
                "kernel dimensions at {a} and {b} differ ({} vs {})",
                dims[&a], dims[&b]
            );
            return Err(if certainty == Certainty::UserSupplied {
                Error::InconsistentInput(msg)
            } else {
                Error::Inconsistency(msg)
            });
        }
    }
    Ok(KernelDims { dims, certainty })
}
