use crate::cone::ConeOperatorSpec;
use crate::error::{Error, Result};
use crate::rate::Rate;

const HALF_STENCIL: i32 = 5;

/// Finite-difference weights for derivatives `0..=max_deriv` at `z` on `nodes`
/// (Fornberg's recursion). `weights[k][i]` is the weight of node `i` for the
/// `k`-th derivative.
fn fd_weights(z: f64, nodes: &[f64], max_deriv: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_deriv + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    for i in 1..n {
        let mn = i.min(max_deriv);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] *= c4 / c3;
        }
        c1 = c2;
    }
    c
}

/// Discretized residual of `L(r^λ u_j)` on a radial grid.
///
/// Derivatives in `t = ln r` are taken with an 11-point central stencil. The
/// value reported at each radius is `|L(r^λ u_j)| / r^{λ-ℓ}`, i.e. the residual
/// relative to the size of the homogeneous solution; the maximum over the grid
/// is returned.
pub fn radial_residual(
    op: &ConeOperatorSpec,
    mode: usize,
    rate: &Rate,
    grid: &[f64],
) -> Result<f64> {
    let poly = op.indicial_polynomial(mode)?;
    let order = op.order() as usize;
    if grid.len() < 3 {
        return Err(Error::Discretization(format!(
            "grid has {} points; at least 3 are required",
            grid.len()
        )));
    }
    if grid.len() < order + 1 {
        return Err(Error::Discretization(format!(
            "grid too coarse: {} points cannot resolve an order-{order} operator",
            grid.len()
        )));
    }
    if grid.iter().any(|r| !r.is_finite() || *r <= 0.0) {
        return Err(Error::Discretization(
            "radii must be positive and finite".into(),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Discretization(
            "radii must be strictly increasing".into(),
        ));
    }
    let lambda = rate.to_f64();
    let spacing = grid
        .windows(2)
        .map(|w| (w[1] / w[0]).ln())
        .fold(f64::INFINITY, f64::min);
    let step = spacing.min(0.1 / lambda.abs().max(1.0));
    let offsets: Vec<f64> = (-HALF_STENCIL..=HALF_STENCIL)
        .map(|s| s as f64 * step)
        .collect();
    let weights = fd_weights(0.0, &offsets, order);
    let coeffs: Vec<f64> = poly.coeffs().iter().map(Rate::to_f64).collect();

    let mut worst = 0.0f64;
    for &r in grid {
        let t = r.ln();
        // (r e^s)^λ / r^λ evaluated through logarithms to stay in range.
        let samples: Vec<f64> = offsets
            .iter()
            .map(|s| (lambda * ((t + s) - t)).exp())
            .collect();
        let value: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                c * weights[k]
                    .iter()
                    .zip(&samples)
                    .map(|(w, u)| w * u)
                    .sum::<f64>()
            })
            .sum();
        worst = worst.max(value.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_differentiate_polynomials() {
        let nodes: Vec<f64> = (-2..=2).map(|i| i as f64 * 0.5).collect();
        let w = fd_weights(0.0, &nodes, 2);
        let f = |x: f64| 3.0 + 2.0 * x + x * x;
        let d1: f64 = w[1].iter().zip(&nodes).map(|(a, x)| a * f(*x)).sum();
        let d2: f64 = w[2].iter().zip(&nodes).map(|(a, x)| a * f(*x)).sum();
        assert!((d1 - 2.0).abs() < 1e-12);
        assert!((d2 - 2.0).abs() < 1e-12);
    }
}
