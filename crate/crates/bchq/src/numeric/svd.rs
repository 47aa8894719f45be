//! Singular values of small dense matrices via cyclic Jacobi sweeps on the
//! symmetric Gram matrix m^T m. Self-contained and accurate at desk scale
//! (dimensions in the tens).

/// Singular values in decreasing order.
pub fn singular_values(dim: usize, entries: &[f64]) -> Vec<f64> {
    debug_assert_eq!(entries.len(), dim * dim);
    if dim == 0 {
        return Vec::new();
    }
    // g = m^T m, symmetric positive semidefinite
    let mut g = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut s = 0.0;
            for k in 0..dim {
                s += entries[k * dim + i] * entries[k * dim + j];
            }
            g[i * dim + j] = s;
        }
    }

    let scale: f64 = g.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let tol = 1e-28 * scale;
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..dim {
            for q in (p + 1)..dim {
                off += g[p * dim + q] * g[p * dim + q];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = g[p * dim + q];
                if apq.abs() <= tol * 1e-2 {
                    continue;
                }
                let app = g[p * dim + p];
                let aqq = g[q * dim + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..dim {
                    let gkp = g[k * dim + p];
                    let gkq = g[k * dim + q];
                    g[k * dim + p] = c * gkp - s * gkq;
                    g[k * dim + q] = s * gkp + c * gkq;
                }
                for k in 0..dim {
                    let gpk = g[p * dim + k];
                    let gqk = g[q * dim + k];
                    g[p * dim + k] = c * gpk - s * gqk;
                    g[q * dim + k] = s * gpk + c * gqk;
                }
            }
        }
    }

    let mut sv: Vec<f64> = (0..dim).map(|i| g[i * dim + i].max(0.0).sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let sv = singular_values(2, &[2.0, 0.0, 0.0, 1.0]);
        assert!((sv[0] - 2.0).abs() < 1e-12);
        assert!((sv[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn known_2x2() {
        // [[3, 0], [4, 5]] has singular values sqrt(45) and sqrt(5)
        let sv = singular_values(2, &[3.0, 0.0, 4.0, 5.0]);
        assert!((sv[0] - 45f64.sqrt()).abs() < 1e-10, "{sv:?}");
        assert!((sv[1] - 5f64.sqrt()).abs() < 1e-10, "{sv:?}");
    }

    #[test]
    fn rank_deficient() {
        let sv = singular_values(2, &[1.0, 1.0, 1.0, 1.0]);
        assert!((sv[0] - 2.0).abs() < 1e-10);
        assert!(sv[1].abs() < 1e-10);
    }
}
