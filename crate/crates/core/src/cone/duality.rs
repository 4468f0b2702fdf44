//! Finite matrix model of the `λ ↦ −5 − λ` symmetry: a complex structure `J`
//! with `JM + MJ = −5J` maps the `λ`-eigenspace of `M` onto its dual.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance on the algebraic identities `J^2 = -I` and `JM + MJ = -5J`.
pub const DUALITY_TOL: f64 = 1e-9;

const CLUSTER_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualPair {
    /// The larger of the two paired eigenvalues.
    pub lambda: f64,
    pub dual: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityCheck {
    pub pairs: Vec<DualPair>,
    pub anticommutator_residual: f64,
    /// Largest `|(M - (−5−λ)) J x|` over unit eigenvectors `x` of `M`.
    pub map_residual: f64,
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Orthonormal basis of the numerical null space of `a`.
fn null_space(a: &DMatrix<f64>, tol: f64) -> Vec<nalgebra::DVector<f64>> {
    let n = a.ncols();
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut basis = Vec::new();
    for i in 0..n {
        let sigma = if i < svd.singular_values.len() {
            svd.singular_values[i]
        } else {
            0.0
        };
        if sigma <= tol {
            basis.push(v_t.row(i).transpose());
        }
    }
    basis
}

pub fn eigen_duality_check(j: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<DualityCheck> {
    let n = m.nrows();
    if n == 0 || !m.is_square() || j.shape() != m.shape() {
        return Err(Error::Precondition(
            "J and M must be square matrices of the same nonzero size".into(),
        ));
    }
    let id = DMatrix::<f64>::identity(n, n);
    let j_sq = max_abs(&(j * j + &id));
    if j_sq > DUALITY_TOL {
        return Err(Error::Precondition(format!(
            "J^2 + I has entries of size {j_sq:.3e}"
        )));
    }
    let anti = max_abs(&(j * m + m * j + j * 5.0));
    if anti > DUALITY_TOL {
        return Err(Error::Precondition(format!(
            "JM + MJ + 5J has entries of size {anti:.3e}"
        )));
    }

    let mut eigenvalues = Vec::with_capacity(n);
    for z in m.complex_eigenvalues().iter() {
        if z.im.abs() > CLUSTER_TOL * (1.0 + z.re.abs()) {
            return Err(Error::PairingFailure(format!(
                "M has a non-real eigenvalue {} + {}i",
                z.re, z.im
            )));
        }
        eigenvalues.push(z.re);
    }
    eigenvalues.sort_by(|a, b| a.total_cmp(b));
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    for x in eigenvalues {
        match clusters.last_mut() {
            Some((v, k)) if (x - *v / *k as f64).abs() < CLUSTER_TOL * (1.0 + x.abs()) => {
                *v += x;
                *k += 1;
            }
            _ => clusters.push((x, 1)),
        }
    }
    let clusters: Vec<(f64, usize)> = clusters
        .into_iter()
        .map(|(s, k)| (s / k as f64, k))
        .collect();

    let scale = 1.0 + max_abs(m);
    let mut map_residual = 0.0f64;
    let mut pairs = Vec::new();
    for &(v, k) in &clusters {
        let target = -5.0 - v;
        let Some(&(dual, dual_k)) = clusters
            .iter()
            .find(|(w, _)| (w - target).abs() < CLUSTER_TOL * (1.0 + target.abs()))
        else {
            return Err(Error::PairingFailure(format!(
                "eigenvalue {v} has no partner near {target}"
            )));
        };
        if dual_k != k {
            return Err(Error::PairingFailure(format!(
                "eigenvalue {v} has multiplicity {k} but its partner {dual} has multiplicity {dual_k}"
            )));
        }
        let basis = null_space(&(m - &id * v), CLUSTER_TOL * scale);
        if basis.len() != k {
            return Err(Error::PairingFailure(format!(
                "eigenvalue {v} has geometric multiplicity {} but algebraic multiplicity {k}",
                basis.len()
            )));
        }
        let shifted = m - &id * dual;
        for x in &basis {
            let y = j * x;
            map_residual = map_residual.max((&shifted * y).amax());
        }
        if v >= dual - CLUSTER_TOL {
            pairs.push(DualPair {
                lambda: v,
                dual,
                multiplicity: k,
            });
        }
    }
    if map_residual > CLUSTER_TOL * scale {
        return Err(Error::PairingFailure(format!(
            "J fails to map eigenspaces onto their duals (residual {map_residual:.3e})"
        )));
    }
    pairs.sort_by(|a, b| b.lambda.total_cmp(&a.lambda));
    Ok(DualityCheck {
        pairs,
        anticommutator_residual: anti,
        map_residual,
    })
}

/// Block model `J = [[0,-I],[I,0]]`, `M = diag(D, -5I - D)` for the given eigenvalues.
pub fn block_model(eigenvalues: &[f64]) -> (DMatrix<f64>, DMatrix<f64>) {
    let k = eigenvalues.len();
    let n = 2 * k;
    let mut j = DMatrix::<f64>::zeros(n, n);
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (i, &lambda) in eigenvalues.iter().enumerate() {
        j[(i, k + i)] = -1.0;
        j[(k + i, i)] = 1.0;
        m[(i, i)] = lambda;
        m[(k + i, k + i)] = -5.0 - lambda;
    }
    (j, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_block_model() {
        let (j, m) = block_model(&[-2.0, -1.5]);
        let check = eigen_duality_check(&j, &m).unwrap();
        assert_eq!(check.pairs.len(), 2);
        assert_eq!(
            check.pairs[0],
            DualPair {
                lambda: -1.5,
                dual: -3.5,
                multiplicity: 1
            }
        );
        assert_eq!(
            check.pairs[1],
            DualPair {
                lambda: -2.0,
                dual: -3.0,
                multiplicity: 1
            }
        );
    }

    #[test]
    fn self_dual_eigenvalue() {
        let (j, m) = block_model(&[-2.5]);
        let check = eigen_duality_check(&j, &m).unwrap();
        assert_eq!(
            check.pairs,
            vec![DualPair {
                lambda: -2.5,
                dual: -2.5,
                multiplicity: 2
            }]
        );
    }

    #[test]
    fn rejects_broken_anticommutator() {
        let (j, mut m) = block_model(&[-2.0, -1.5]);
        m[(0, 0)] += 0.1;
        assert!(matches!(
            eigen_duality_check(&j, &m),
            Err(Error::Precondition(_))
        ));
        let (mut j, m) = block_model(&[-2.0]);
        j[(0, 1)] = -2.0;
        assert!(matches!(
            eigen_duality_check(&j, &m),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn conjugated_model_still_pairs() {
        let (j, m) = block_model(&[-1.0, -4.0 / 3.0, -2.25]);
        let n = j.nrows();
        let p = DMatrix::from_fn(n, n, |r, c| {
            if r == c {
                2.0
            } else {
                0.1 * ((r * 7 + c * 3) % 5) as f64
            }
        });
        let p_inv = p.clone().try_inverse().unwrap();
        let check = eigen_duality_check(&(&p * &j * &p_inv), &(&p * &m * &p_inv)).unwrap();
        assert_eq!(check.pairs.len(), 3);
        assert!(check.map_residual < 1e-8);
    }
}
