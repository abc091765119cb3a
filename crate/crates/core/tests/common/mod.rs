//! Independent numerical oracle for the integration tests: a cyclic Jacobi
//! eigensolver on the real symmetric embedding of a Hermitian matrix.

#![allow(dead_code)]

use extmaps::CMatrix;

/// `H = A + iB` ↦ `[[A, −B], [B, A]]`, row-major. Each eigenvalue of `H`
/// appears twice in the embedding.
fn realify(h: &CMatrix) -> Vec<Vec<f64>> {
    let n = h.nrows();
    let mut m = vec![vec![0.0; 2 * n]; 2 * n];
    for r in 0..n {
        for c in 0..n {
            let z = h[(r, c)];
            m[r][c] = z.re;
            m[r + n][c + n] = z.re;
            m[r][c + n] = -z.im;
            m[r + n][c] = z.im;
        }
    }
    m
}

/// Eigenvalues of a real symmetric matrix, descending.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_symmetric(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut values: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    jacobi_symmetric(realify(h)).into_iter().step_by(2).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
