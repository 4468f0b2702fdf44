//! Weight-indexed Fredholm index of conically singular operators.
//!
//! The index is locally constant in the weight and drops by `dim K_ν` each
//! time a weight component increases through a critical rate `ν`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::cone::{critical_rates, homogeneous_kernel_dim, ConeOperatorSpec, CriticalRateSet};
use crate::error::{Error, Result};
use crate::rate::{Rate, Window};

/// Per-singular-point weights `(λ_1, ..., λ_N)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(pub Vec<Rate>);

impl WeightVector {
    pub fn single(rate: Rate) -> Self {
        WeightVector(vec![rate])
    }

    pub fn uniform(rate: Rate, points: usize) -> Self {
        WeightVector(vec![rate; points])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[Rate] {
        &self.0
    }
}

/// A weight at which the index is known.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexAnchor {
    pub weight: Rate,
    pub index: i64,
}

impl IndexAnchor {
    /// Formally self-adjoint first-order operators on the six-dimensional cone
    /// have index 0 at the symmetric weight `-5/2`.
    pub fn self_adjoint_order_one() -> Self {
        IndexAnchor {
            weight: Rate::ratio(-5, 2),
            index: 0,
        }
    }

    /// The Laplacian is an isomorphism at the symmetric weight `(2 - 6)/2 = -2`.
    pub fn laplacian() -> Self {
        IndexAnchor {
            weight: Rate::int(-2),
            index: 0,
        }
    }
}

fn check_weight(set: &CriticalRateSet, weight: &Rate, point: usize) -> Result<()> {
    if let Some(e) = set.collision(weight) {
        return Err(Error::EndpointCollision {
            rate: e.rate.label(),
            what: format!("weight {weight} at point {point}"),
        });
    }
    if !set.window().contains(weight) {
        return Err(Error::RateWindow(format!(
            "weight {weight} at point {point} lies outside the rate window {}",
            set.window()
        )));
    }
    Ok(())
}

/// `index(from) − index(to)`: the total kernel dimension of critical rates
/// strictly between the weights, summed over singular points.
pub fn index_change(
    rates: &[CriticalRateSet],
    from: &WeightVector,
    to: &WeightVector,
) -> Result<i64> {
    if rates.len() != from.len() || rates.len() != to.len() {
        return Err(Error::Precondition(format!(
            "{} rate sets but weights of length {} and {}",
            rates.len(),
            from.len(),
            to.len()
        )));
    }
    let mut total = 0i64;
    for (i, ((set, a), b)) in rates
        .iter()
        .zip(from.components())
        .zip(to.components())
        .enumerate()
    {
        if a.cmp_tol(b) == Ordering::Greater {
            return Err(Error::Precondition(format!(
                "from-weight {a} exceeds to-weight {b} at point {i}"
            )));
        }
        check_weight(set, a, i)?;
        check_weight(set, b, i)?;
        total += set.jump_between(a, b) as i64;
    }
    Ok(total)
}

/// Piecewise-constant index as a function of the weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexProfile {
    pub anchor_weight: Rate,
    pub anchor_index: i64,
    pub jumps: Vec<CriticalRateSet>,
}

impl IndexProfile {
    pub fn new(anchor: IndexAnchor, jumps: Vec<CriticalRateSet>) -> Result<Self> {
        if jumps.is_empty() {
            return Err(Error::Precondition(
                "an index profile needs at least one singular point".into(),
            ));
        }
        for (i, set) in jumps.iter().enumerate() {
            check_weight(set, &anchor.weight, i)?;
        }
        Ok(IndexProfile {
            anchor_weight: anchor.weight,
            anchor_index: anchor.index,
            jumps,
        })
    }

    pub fn index_at(&self, weight: &WeightVector) -> Result<i64> {
        if weight.len() != self.jumps.len() {
            return Err(Error::Precondition(format!(
                "weight has {} components for {} singular points",
                weight.len(),
                self.jumps.len()
            )));
        }
        let mut index = self.anchor_index;
        for (i, (set, w)) in self.jumps.iter().zip(weight.components()).enumerate() {
            check_weight(set, w, i)?;
            match w.cmp_tol(&self.anchor_weight) {
                Ordering::Greater => index -= set.jump_between(&self.anchor_weight, w) as i64,
                Ordering::Less => index += set.jump_between(w, &self.anchor_weight) as i64,
                Ordering::Equal => {}
            }
        }
        Ok(index)
    }

    /// Whether every point's rate data is certified complete.
    pub fn is_complete(&self) -> bool {
        self.jumps.iter().all(CriticalRateSet::is_complete)
    }
}

/// Open window around the anchor and all weight components, padded by one.
fn spanning_window(anchor: &Rate, weight: &WeightVector) -> Result<Window> {
    let mut lo = anchor.clone();
    let mut hi = anchor.clone();
    for w in weight.components() {
        if w.cmp_tol(&lo) == Ordering::Less {
            lo = w.clone();
        }
        if w.cmp_tol(&hi) == Ordering::Greater {
            hi = w.clone();
        }
    }
    Window::open(lo.sub(&Rate::int(1)), hi.add(&Rate::int(1)))
}

/// Index of `op` placed at each singular point, anchored at `anchor`.
pub fn anchored_index(
    op: &ConeOperatorSpec,
    anchor: &IndexAnchor,
    weight: &WeightVector,
) -> Result<i64> {
    if weight.is_empty() {
        return Err(Error::Precondition("weight vector is empty".into()));
    }
    if homogeneous_kernel_dim(op, &anchor.weight) > 0 {
        return Err(Error::EndpointCollision {
            rate: anchor.weight.label(),
            what: "the index anchor weight".into(),
        });
    }
    let window = spanning_window(&anchor.weight, weight)?;
    let set = critical_rates(op, &window)?;
    let profile = IndexProfile::new(anchor.clone(), vec![set; weight.len()])?;
    profile.index_at(weight)
}

/// Index of a formally self-adjoint order-one operator at `weight`.
pub fn selfadjoint_index(op: &ConeOperatorSpec, weight: &WeightVector) -> Result<i64> {
    if !op.self_adjoint() {
        return Err(Error::Precondition(
            "operator is not flagged formally self-adjoint".into(),
        ));
    }
    anchored_index(op, &IndexAnchor::self_adjoint_order_one(), weight)
}

/// Index of a Laplacian-form operator at `weight`, anchored at `-2`.
pub fn laplacian_index(op: &ConeOperatorSpec, weight: &WeightVector) -> Result<i64> {
    if !op.is_laplacian_form() {
        return Err(Error::Precondition(
            "operator is not of Laplacian form".into(),
        ));
    }
    anchored_index(op, &IndexAnchor::laplacian(), weight)
}

/// `μ̄ = min((D ∩ (−1, 0)) ∪ {0})` and whether the spectral data certify it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuBar {
    pub value: Rate,
    pub certified: bool,
}

/// The open interval `(−1, 0)` in which `μ̄` is read off.
pub fn mu_bar_window() -> Window {
    Window::open(Rate::int(-1), Rate::int(0)).expect("valid window")
}

pub fn mu_bar(op: &ConeOperatorSpec) -> Result<MuBar> {
    let window = mu_bar_window();
    let set = critical_rates(op, &window)?;
    Ok(mu_bar_from_rates(&set))
}

/// `μ̄` from an explicit critical-rate set; the set must cover `(−1, 0)`.
pub fn mu_bar_from_rates(set: &CriticalRateSet) -> MuBar {
    let window = mu_bar_window();
    let value = set
        .entries()
        .iter()
        .find(|e| window.contains(&e.rate))
        .map_or_else(Rate::zero, |e| e.rate.clone());
    let certified = set.is_complete() && set.window().covers(&window);
    MuBar { value, certified }
}
