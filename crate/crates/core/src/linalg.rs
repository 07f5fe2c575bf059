// Dense symmetric eigensolver: Householder reduction to tridiagonal form
// followed by the implicit QL iteration (the EISPACK tred2/tql2 pair in
// the form popularised by JAMA).

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

const MAX_QL_ITERATIONS: usize = 64;

/// Eigen-decomposition of a dense symmetric matrix.
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvectors, vector-major: entry `x` of vector `n` is `vecs[n * dim + x]`.
pub(crate) fn symmetric_eigen(dim: usize, a: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    assert_eq!(a.len(), dim * dim);
    if dim == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut v = a.to_vec();
    let mut d = vec![0.0; dim];
    let mut e = vec![0.0; dim];
    tridiagonalize(dim, &mut v, &mut d, &mut e);
    ql_implicit(dim, &mut v, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vecs = vec![0.0; dim * dim];
    for (slot, &col) in order.iter().enumerate() {
        for row in 0..dim {
            vecs[slot * dim + row] = v[row * dim + col];
        }
    }
    Ok((values, vecs))
}

fn tridiagonalize(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |r: usize, c: usize| r * n + c;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate the transformations.
    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

fn ql_implicit(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let at = |r: usize, c: usize| r * n + c;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::NoConvergence {
                        index: l,
                        iterations: MAX_QL_ITERATIONS,
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let h = v[at(k, i + 1)];
                        v[at(k, i + 1)] = s * v[at(k, i)] + c * h;
                        v[at(k, i)] = c * v[at(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(dim: usize, vals: &[f64], vecs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; dim * dim];
        for (n, &ev) in vals.iter().enumerate() {
            let q = &vecs[n * dim..(n + 1) * dim];
            for r in 0..dim {
                for c in 0..dim {
                    out[r * dim + c] += ev * q[r] * q[c];
                }
            }
        }
        out
    }

    #[test]
    fn one_by_one() {
        let (vals, vecs) = symmetric_eigen(1, &[3.5]).unwrap();
        assert_eq!(vals, vec![3.5]);
        assert_eq!(vecs, vec![1.0]);
    }

    #[test]
    fn two_by_two() {
        let (vals, vecs) = symmetric_eigen(2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
        let q1 = &vecs[2..];
        assert!((q1[0].abs() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        assert!((q1[0] - q1[1]).abs() < 1e-14);
    }

    #[test]
    fn zero_matrix() {
        let (vals, vecs) = symmetric_eigen(3, &[0.0; 9]).unwrap();
        assert!(vals.iter().all(|&v| v == 0.0));
        let r = reconstruct(3, &vals, &vecs);
        assert!(r.iter().all(|&v| v.abs() < 1e-15));
    }

    #[test]
    fn dense_reconstruction() {
        let dim = 7;
        let mut a = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                let x = ((i * 31 + j * 17) % 11) as f64 - 5.0 + 0.1 * i as f64;
                a[i * dim + j] = x;
                a[j * dim + i] = x;
            }
        }
        let (vals, vecs) = symmetric_eigen(dim, &a).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let r = reconstruct(dim, &vals, &vecs);
        for (x, y) in r.iter().zip(&a) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
