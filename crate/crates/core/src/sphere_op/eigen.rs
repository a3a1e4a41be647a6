//! Cyclic Jacobi eigensolver for dense Hermitian matrices, with a real
//! symmetric fast path, and spectral norms.
//!
//! Each sweep costs `O(N^3)`; sweeps run sequentially so results are
//! bit-reproducible.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::OperatorMatrix;
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 60;
/// Off-diagonal Frobenius mass, relative to the full norm, at termination.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
/// Larger matrices use power iteration in [`operator_norm`].
pub const DENSE_NORM_LIMIT: usize = 400;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigen {
    /// Sorted by decreasing absolute value.
    pub values: Vec<f64>,
    /// Column `k` of the row-major matrix pairs with `values[k]`.
    pub vectors: Option<Vec<Complex64>>,
    pub sweeps: usize,
    pub off_diagonal: f64,
}

pub fn eigen_hermitian(m: &OperatorMatrix, want_vectors: bool) -> Result<Eigen> {
    if !m.is_hermitian(1e-12) {
        return Err(Error::InvalidArgument("eigen_hermitian needs a Hermitian matrix".into()));
    }
    if m.is_real() {
        let a: Vec<f64> = m.entries.iter().map(|z| z.re).collect();
        let (vals, vecs, sweeps, off) = jacobi_real(a, m.n, want_vectors)?;
        let vecs = vecs.map(|v| v.into_iter().map(Complex64::from).collect());
        Ok(sorted(vals, vecs, m.n, sweeps, off))
    } else {
        let (vals, vecs, sweeps, off) = jacobi_complex(m.entries.clone(), m.n, want_vectors)?;
        Ok(sorted(vals, vecs, m.n, sweeps, off))
    }
}

fn sorted(vals: Vec<f64>, vecs: Option<Vec<Complex64>>, n: usize, sweeps: usize, off: f64) -> Eigen {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[j].abs().total_cmp(&vals[i].abs()).then(vals[j].total_cmp(&vals[i])));
    let values = order.iter().map(|&i| vals[i]).collect();
    let vectors = vecs.map(|v| {
        let mut out = vec![Complex64::default(); n * n];
        for (k, &src) in order.iter().enumerate() {
            for r in 0..n {
                out[r * n + k] = v[r * n + src];
            }
        }
        out
    });
    Eigen { values, vectors, sweeps, off_diagonal: off }
}

type Decomposition<T> = (Vec<f64>, Option<Vec<T>>, usize, f64);

fn jacobi_real(mut a: Vec<f64>, n: usize, want: bool) -> Result<Decomposition<f64>> {
    let mut v = want.then(|| identity_real(n));
    let total: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    let mut mass = off(&a);
    while mass > OFF_DIAGONAL_TOL * total && mass > 0.0 {
        if sweeps == MAX_SWEEPS {
            return Err(Error::SweepLimit { sweeps, off_diagonal: mass });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        mass = off(&a);
    }
    let vals = (0..n).map(|i| a[i * n + i]).collect();
    Ok((vals, v, sweeps, mass))
}

fn jacobi_complex(mut a: Vec<Complex64>, n: usize, want: bool) -> Result<Decomposition<Complex64>> {
    let mut v = want.then(|| {
        let mut id = vec![Complex64::default(); n * n];
        for i in 0..n {
            id[i * n + i] = Complex64::from(1.0);
        }
        id
    });
    let total: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let off = |a: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    let mut mass = off(&a);
    while mass > OFF_DIAGONAL_TOL * total && mass > 0.0 {
        if sweeps == MAX_SWEEPS {
            return Err(Error::SweepLimit { sweeps, off_diagonal: mass });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                // V = diag(1, conj(e)) G with G the real rotation of [[a_pp, g], [g, a_qq]]
                let e = apq / g;
                let theta = (a[q * n + q].re - a[p * n + p].re) / (2.0 * g);
                let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let ec = e.conj();
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * (s * ec);
                    a[k * n + q] = akp * s + akq * (c * ec);
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * (s * e);
                    a[q * n + k] = apk * s + aqk * (c * e);
                }
                a[p * n + q] = Complex64::default();
                a[q * n + p] = Complex64::default();
                a[p * n + p] = Complex64::from(a[p * n + p].re);
                a[q * n + q] = Complex64::from(a[q * n + q].re);
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * c - vkq * (s * ec);
                        v[k * n + q] = vkp * s + vkq * (c * ec);
                    }
                }
            }
        }
        mass = off(&a);
    }
    let vals = (0..n).map(|i| a[i * n + i].re).collect();
    Ok((vals, v, sweeps, mass))
}

fn identity_real(n: usize) -> Vec<f64> {
    let mut id = vec![0.0; n * n];
    for i in 0..n {
        id[i * n + i] = 1.0;
    }
    id
}

/// Spectral norm: largest absolute eigenvalue for small Hermitian matrices,
/// power iteration on `M^* M` otherwise.
pub fn operator_norm(m: &OperatorMatrix) -> Result<f64> {
    if m.n == 0 {
        return Ok(0.0);
    }
    if m.n <= DENSE_NORM_LIMIT && m.is_hermitian(1e-12) {
        return Ok(eigen_hermitian(m, false)?.values[0].abs());
    }
    power_norm(m)
}

fn power_norm(m: &OperatorMatrix) -> Result<f64> {
    let n = m.n;
    // deterministic start vector with no special symmetry
    let mut x: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + (i as f64 * 0.618).sin() * 0.5, 0.0)).collect();
    let mut prev = 0.0;
    for _ in 0..20_000 {
        let y = m.apply(&x);
        let z = m.apply_adjoint(&y);
        let xn = norm(&x);
        let est = (norm(&y) / xn).max(0.0);
        let zn = norm(&z);
        if zn == 0.0 {
            return Ok(0.0);
        }
        x = z.iter().map(|v| v / zn).collect();
        if (est - prev).abs() <= 1e-14 * est {
            return Ok(est);
        }
        prev = est;
    }
    Err(Error::NonConvergence("power iteration for the operator norm".into()))
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::sphere_op::matrix::Basis;

    fn dense(n: usize, entries: Vec<Complex64>) -> OperatorMatrix {
        OperatorMatrix::new(n, entries, Basis::Plain).unwrap()
    }

    fn random_hermitian(n: usize, seed: u64, complex: bool) -> OperatorMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut e = vec![Complex64::default(); n * n];
        for i in 0..n {
            e[i * n + i] = Complex64::from(rng.gen_range(-1.0..1.0));
            for j in i + 1..n {
                let im = if complex { rng.gen_range(-1.0..1.0) } else { 0.0 };
                let z = Complex64::new(rng.gen_range(-1.0..1.0), im);
                e[i * n + j] = z;
                e[j * n + i] = z.conj();
            }
        }
        dense(n, e)
    }

    #[test]
    fn small_cases() {
        let d = dense(3, [3.0, 0.0, 0.0, 0.0, -5.0, 0.0, 0.0, 0.0, 1.0].map(Complex64::from).to_vec());
        assert_eq!(eigen_hermitian(&d, false).unwrap().values, vec![-5.0, 3.0, 1.0]);
        let x = dense(2, [0.0, 1.0, 1.0, 0.0].map(Complex64::from).to_vec());
        let e = eigen_hermitian(&x, false).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15 && (e.values[1] + 1.0).abs() < 1e-15);
        let i = Complex64::i();
        let y = dense(2, vec![Complex64::default(), -i, i, Complex64::default()]);
        let e = eigen_hermitian(&y, false).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15 && (e.values[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn trace_and_reconstruction() {
        for complex in [false, true] {
            let m = random_hermitian(50, 7, complex);
            let e = eigen_hermitian(&m, true).unwrap();
            let trace: f64 = (0..50).map(|i| m.get(i, i).re).sum();
            assert!((e.values.iter().sum::<f64>() - trace).abs() < 1e-10);
            assert!(e.off_diagonal <= OFF_DIAGONAL_TOL * m.frobenius());
            // M v_k = lambda_k v_k
            let v = e.vectors.unwrap();
            for k in [0, 17, 49] {
                let col: Vec<Complex64> = (0..50).map(|r| v[r * 50 + k]).collect();
                let mv = m.apply(&col);
                let res: f64 = mv.iter().zip(&col).map(|(a, b)| (a - b * e.values[k]).norm_sqr()).sum::<f64>().sqrt();
                assert!(res < 1e-10, "k={k}: {res}");
            }
        }
    }

    #[test]
    fn norms() {
        let mut id = vec![Complex64::default(); 16];
        for i in 0..4 {
            id[i * 4 + i] = Complex64::from(1.0);
        }
        assert!((operator_norm(&dense(4, id)).unwrap() - 1.0).abs() < 1e-15);
        let diag: Vec<f64> = vec![0.5, -3.0, 2.0];
        let mut e = vec![Complex64::default(); 9];
        for (i, g) in diag.iter().enumerate() {
            e[i * 3 + i] = Complex64::from(*g);
        }
        assert!((operator_norm(&dense(3, e)).unwrap() - 3.0).abs() < 1e-15);
        // power iteration agrees with the dense path
        let m = random_hermitian(60, 3, true);
        let want = eigen_hermitian(&m, false).unwrap().values[0].abs();
        assert!((power_norm(&m).unwrap() - want).abs() < 1e-10 * want);
    }
}
