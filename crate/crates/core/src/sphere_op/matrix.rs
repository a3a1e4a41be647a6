use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::transform::{SymbolTransform, TransformKind};
use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::quad::{dyadic_origin, panel_rule, SphereGrid};
use crate::specfun::{basis_len, harmonics_upto};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Basis {
    /// Rows and columns indexed by grid points, scaled by square-root weights.
    Nodal { d: Dim, resolution: usize },
    /// Rows and columns indexed by real spherical harmonics, degree-major.
    Harmonic { d: Dim, nmax: usize },
    Plain,
}

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorMatrix {
    pub n: usize,
    pub entries: Vec<Complex64>,
    pub basis: Basis,
    pub hermitian: bool,
    /// Largest `|zeta|` passed to the symbol transform while assembling.
    pub max_symbol_argument: f64,
    pub warnings: Vec<String>,
}

impl OperatorMatrix {
    pub fn new(n: usize, entries: Vec<Complex64>, basis: Basis) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: entries.len() });
        }
        let mut m = OperatorMatrix { n, entries, basis, hermitian: false, max_symbol_argument: 0.0, warnings: Vec::new() };
        m.hermitian = m.is_hermitian(1e-12);
        Ok(m)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |M_ij - conj(M_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Hermitian within `tol` relative to the largest entry.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let scale = self.entries.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        self.hermitian_defect() <= tol * scale
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    /// Frobenius norm of the part off the main diagonal.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        (0..n).into_par_iter().map(|i| (0..n).map(|j| self.entries[i * n + j] * x[j]).sum()).collect()
    }

    pub fn apply_adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        (0..n).into_par_iter().map(|j| (0..n).map(|i| self.entries[i * n + j].conj() * x[i]).sum()).collect()
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let n = self.n;
        let entries: Vec<Complex64> = (0..n * n)
            .into_par_iter()
            .map(|ij| {
                let (i, j) = (ij / n, ij % n);
                (0..n).map(|k| self.entries[i * n + k] * other.entries[k * n + j]).sum()
            })
            .collect();
        OperatorMatrix::new(n, entries, self.basis.clone())
    }

    pub fn minus(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        OperatorMatrix::new(self.n, entries, self.basis.clone())
    }

    /// CSV with columns `row, col, re, im`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv output failed: {e}"));
        w.write_record(["row", "col", "re", "im"]).map_err(io)?;
        for i in 0..self.n {
            for j in 0..self.n {
                let z = self.get(i, j);
                w.write_record([i.to_string(), j.to_string(), format!("{:.17e}", z.re), format!("{:.17e}", z.im)])
                    .map_err(io)?;
            }
        }
        w.flush().map_err(|e| Error::InvalidArgument(format!("csv output failed: {e}")))?;
        Ok(())
    }
}

/// CSV with columns `index, eigenvalue`.
pub fn write_spectrum_csv<W: Write>(values: &[f64], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv output failed: {e}"));
    w.write_record(["index", "eigenvalue"]).map_err(io)?;
    for (i, v) in values.iter().enumerate() {
        w.write_record([i.to_string(), format!("{v:.17e}")]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(format!("csv output failed: {e}")))?;
    Ok(())
}

/// Largest chord `|xi - eta|` on the unit sphere, plus rounding slack.
pub const MAX_REACH: f64 = 2.0 + 1e-12;

fn chord(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `int` of a radial transform over the geodesic cap (or arc) of measure `w`
/// centred at a point, written in the chord variable `u = |zeta|`.
pub fn cap_integral(t: &SymbolTransform, w: f64) -> Result<f64> {
    let profile = match &t.kind {
        TransformKind::Radial(p) => p.clone(),
        TransformKind::General { .. } => {
            return Err(Error::InvalidArgument("cap averages need a radial transform".into()))
        }
    };
    let est = match t.d {
        Dim::Three => {
            // cap area pi U^2 in the chord variable
            let top = (w / PI).sqrt().min(2.0);
            let g = |u: f64| 2.0 * PI * profile(u) * u;
            dyadic_origin(&g, top)?
        }
        Dim::Two => {
            let top = 2.0 * (w / 4.0).min(0.5 * PI).sin();
            let g = |u: f64| 2.0 * profile(u) / (1.0 - 0.25 * u * u).sqrt();
            dyadic_origin(&g, top)?
        }
    };
    if !est.value.is_finite() {
        return Err(Error::Divergent("symbol transform is not integrable over a cap".into()));
    }
    Ok(est.value)
}

/// Nystrom matrix of `f -> pi/(2pi)^{d/2} int a_hat(eta - xi) f(xi) dS(xi)`:
/// `M_kl = pi/(2pi)^{d/2} a_hat(xi_k - xi_l) sqrt(w_k w_l)`.
///
/// Radial transforms are evaluated once per distinct distance. With a
/// singular exponent the diagonal uses the cap average of `a_hat` over the
/// node's own cell.
pub fn build_nodal(t: &SymbolTransform, grid: &SphereGrid) -> Result<OperatorMatrix> {
    if t.d != grid.d {
        return Err(Error::DimensionMismatch { expected: t.d.get(), found: grid.d.get() });
    }
    let n = grid.len();
    let kp = t.d.kernel_prefactor();
    let pts = &grid.points;
    let sw: Vec<f64> = grid.weights.iter().map(|w| w.sqrt()).collect();
    let mut reach = 0.0f64;
    let mut entries = vec![Complex64::default(); n * n];
    match &t.kind {
        TransformKind::Radial(profile) => {
            let mut keys: HashMap<u64, f64> = HashMap::new();
            for k in 0..n {
                for l in k + 1..n {
                    let r = chord(&pts[k], &pts[l]);
                    keys.entry(r.to_bits()).or_insert(r);
                }
            }
            let mut distinct: Vec<f64> = keys.into_values().collect();
            distinct.sort_by(|a, b| a.total_cmp(b));
            reach = distinct.last().copied().unwrap_or(0.0);
            let values: Vec<f64> = distinct.par_iter().map(|&r| profile(r)).collect();
            let table: HashMap<u64, f64> = distinct.iter().zip(&values).map(|(r, v)| (r.to_bits(), *v)).collect();
            for k in 0..n {
                for l in k + 1..n {
                    let v = table[&chord(&pts[k], &pts[l]).to_bits()];
                    let z = Complex64::from(kp * v * sw[k] * sw[l]);
                    entries[k * n + l] = z;
                    entries[l * n + k] = z;
                }
            }
            let diag: Vec<Result<f64>> = (0..n)
                .into_par_iter()
                .map(|k| match t.singular_exponent {
                    Some(_) => Ok(cap_integral(t, grid.weights[k])?),
                    None => Ok(profile(0.0) * grid.weights[k]),
                })
                .collect();
            for (k, v) in diag.into_iter().enumerate() {
                entries[k * n + k] = Complex64::from(kp * v?);
            }
        }
        TransformKind::General { f, real_symbol } => {
            if t.singular_exponent.is_some() {
                return Err(Error::InvalidArgument("singular general transforms are not supported".into()));
            }
            let d = t.d.get();
            let rows: Vec<(Vec<Complex64>, f64)> = (0..n)
                .into_par_iter()
                .map(|k| {
                    let mut row = vec![Complex64::default(); n];
                    let mut far = 0.0f64;
                    let mut z = vec![0.0; d];
                    let start = if *real_symbol { k } else { 0 };
                    for l in start..n {
                        for i in 0..d {
                            z[i] = pts[k][i] - pts[l][i];
                        }
                        far = far.max(z.iter().map(|v| v * v).sum::<f64>().sqrt());
                        row[l] = f(&z) * (kp * sw[k] * sw[l]);
                    }
                    (row, far)
                })
                .collect();
            for (k, (row, far)) in rows.into_iter().enumerate() {
                reach = reach.max(far);
                for l in 0..n {
                    if !*real_symbol || l >= k {
                        entries[k * n + l] = row[l];
                    }
                }
            }
            if *real_symbol {
                for k in 0..n {
                    entries[k * n + k] = Complex64::from(entries[k * n + k].re);
                    for l in k + 1..n {
                        entries[l * n + k] = entries[k * n + l].conj();
                    }
                }
            }
        }
    }
    if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Divergent("symbol transform produced non-finite matrix entries".into()));
    }
    let mut m = OperatorMatrix::new(n, entries, Basis::Nodal { d: t.d, resolution: grid.resolution })?;
    m.max_symbol_argument = reach;
    Ok(m)
}

/// `B_ka = sqrt(w_k) Y_a(xi_k)`, row-major `grid.len() x basis_len`.
pub fn harmonic_change(grid: &SphereGrid, nmax: usize) -> Vec<f64> {
    let len = basis_len(grid.d, nmax as isize);
    let mut b = vec![0.0; grid.len() * len];
    for (k, (p, w)) in grid.points.iter().zip(&grid.weights).enumerate() {
        let y = harmonics_upto(grid.d, nmax, p);
        let s = w.sqrt();
        for a in 0..len {
            b[k * len + a] = s * y[a];
        }
    }
    b
}

/// `B^T M B` for a nodal matrix `M`: the matrix of `<T Y_b, Y_a>`.
pub fn nodal_to_harmonic(m: &OperatorMatrix, grid: &SphereGrid, nmax: usize) -> Result<OperatorMatrix> {
    let n = grid.len();
    if m.n != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.n });
    }
    let len = basis_len(grid.d, nmax as isize);
    let b = harmonic_change(grid, nmax);
    let entries: Vec<Complex64> = if m.is_real() {
        let re: Vec<f64> = m.entries.iter().map(|z| z.re).collect();
        // MB, then B^T (MB)
        let mb: Vec<f64> = (0..n)
            .into_par_iter()
            .flat_map_iter(|k| {
                let row = &re[k * n..(k + 1) * n];
                let mut acc = vec![0.0; len];
                for (l, v) in row.iter().enumerate() {
                    if *v != 0.0 {
                        let bl = &b[l * len..(l + 1) * len];
                        for a in 0..len {
                            acc[a] += v * bl[a];
                        }
                    }
                }
                acc
            })
            .collect();
        (0..len * len)
            .into_par_iter()
            .map(|ab| {
                let (a, c) = (ab / len, ab % len);
                Complex64::from((0..n).map(|k| b[k * len + a] * mb[k * len + c]).sum::<f64>())
            })
            .collect()
    } else {
        let mb: Vec<Complex64> = (0..n)
            .into_par_iter()
            .flat_map_iter(|k| {
                let mut acc = vec![Complex64::default(); len];
                for l in 0..n {
                    let v = m.entries[k * n + l];
                    for a in 0..len {
                        acc[a] += v * b[l * len + a];
                    }
                }
                acc
            })
            .collect();
        (0..len * len)
            .into_par_iter()
            .map(|ab| {
                let (a, c) = (ab / len, ab % len);
                (0..n).map(|k| mb[k * len + c] * b[k * len + a]).sum()
            })
            .collect()
    };
    let mut h = OperatorMatrix::new(len, entries, Basis::Harmonic { d: grid.d, nmax })?;
    h.max_symbol_argument = m.max_symbol_argument;
    Ok(h)
}

/// Matrix of the sphere operator in the real harmonic basis up to degree
/// `nmax`, from the nodal matrix on `grid`.
pub fn build_harmonic(t: &SymbolTransform, nmax: usize, grid: &SphereGrid) -> Result<OperatorMatrix> {
    let nodal = build_nodal(t, grid)?;
    let mut h = nodal_to_harmonic(&nodal, grid, nmax)?;
    if grid.resolution < 4 * nmax {
        h.warnings.push(format!("grid resolution {} is below 4 nmax = {}", grid.resolution, 4 * nmax));
    }
    Ok(h)
}

/// Eigenvalues of the circle operator,
/// `lambda_n = int_0^pi a_hat(2 sin(tau/2)) cos(n tau) d tau`, `n = 0..=nmax`.
pub fn circle_eigs(t: &SymbolTransform, nmax: usize) -> Result<Vec<f64>> {
    if t.d != Dim::Two {
        return Err(Error::InvalidArgument("circle_eigs is defined for d = 2 only".into()));
    }
    let profile = match &t.kind {
        TransformKind::Radial(p) => p.clone(),
        TransformKind::General { .. } => return Err(Error::InvalidArgument("circle_eigs needs a radial transform".into())),
    };
    let panels = 64 + 4 * nmax;
    let h = PI / panels as f64;
    let rule = panel_rule();
    let nodes: Vec<(f64, f64)> = (1..panels).flat_map(|i| rule.mapped(i as f64 * h, (i + 1) as f64 * h).collect::<Vec<_>>()).collect();
    let values: Vec<f64> = nodes.par_iter().map(|(tau, _)| profile(2.0 * (0.5 * tau).sin())).collect();
    (0..=nmax)
        .into_par_iter()
        .map(|n| {
            let nf = n as f64;
            let head = dyadic_origin(&|tau: f64| profile(2.0 * (0.5 * tau).sin()) * (nf * tau).cos(), h)?;
            let body: f64 = nodes.iter().zip(&values).map(|((tau, w), v)| w * v * (nf * tau).cos()).sum();
            Ok(head.value + body)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{sphere_grid, TailPolicy};
    use crate::radial_toeplitz::{closed_form_chirp, gamma_sequence, RadialSymbol};
    use crate::sphere_op::eigen::{eigen_hermitian, operator_norm};

    fn exp_transform() -> SymbolTransform {
        SymbolTransform::from_symbol(&RadialSymbol::exponential(1.0).unwrap(), Dim::Two).unwrap()
    }

    #[test]
    fn zero_symbol_gives_zero_matrix() {
        let g = sphere_grid(Dim::Three, 8).unwrap();
        let m = build_nodal(&SymbolTransform::constant(Dim::Three, 0.0), &g).unwrap();
        assert!(m.entries.iter().all(|z| *z == Complex64::default()));
        let h = build_harmonic(&SymbolTransform::constant(Dim::Three, 0.0), 1, &g).unwrap();
        assert!(h.entries.iter().all(|z| z.norm() == 0.0));
        assert_eq!(circle_eigs(&SymbolTransform::constant(Dim::Two, 0.0), 4).unwrap(), vec![0.0; 5]);
    }

    #[test]
    fn real_symbols_are_exactly_hermitian() {
        let g = sphere_grid(Dim::Three, 10).unwrap();
        let t = SymbolTransform::from_symbol(&RadialSymbol::gaussian(1.0).unwrap(), Dim::Three).unwrap();
        let m = build_nodal(&t, &g).unwrap();
        assert_eq!(m.hermitian_defect(), 0.0);
        assert!(m.max_symbol_argument <= MAX_REACH);
        let pm = SymbolTransform::point_mass(Dim::Three, vec![0.3, -1.0, 2.0]).unwrap();
        let m = build_nodal(&pm, &g).unwrap();
        assert_eq!(m.hermitian_defect(), 0.0);
        assert!(!m.is_real());
        assert!(m.max_symbol_argument <= MAX_REACH);
    }

    #[test]
    fn point_mass_is_rank_one() {
        let g = sphere_grid(Dim::Two, 40).unwrap();
        let pm = SymbolTransform::point_mass(Dim::Two, vec![1.5, 0.5]).unwrap();
        let e = eigen_hermitian(&build_nodal(&pm, &g).unwrap(), false).unwrap();
        // kp (2pi)^{-1} |S^1|
        assert!((e.values[0] - 0.5).abs() < 1e-12);
        assert!(e.values[1].abs() < 1e-12);
    }

    #[test]
    fn circle_eigenvalues() {
        let one = circle_eigs(&SymbolTransform::constant(Dim::Two, 1.0), 6).unwrap();
        assert!((one[0] - PI).abs() < 1e-13);
        assert!(one[1..].iter().all(|v| v.abs() < 1e-13));
        let lam = circle_eigs(&exp_transform(), 16).unwrap();
        let seq = gamma_sequence(&RadialSymbol::exponential(1.0).unwrap(), Dim::Two, 16, &TailPolicy::default()).unwrap();
        for n in 0..=16 {
            assert!((lam[n] - seq.gammas[n]).abs() < 1e-6 * seq.gammas[0], "n={n}: {} {}", lam[n], seq.gammas[n]);
        }
        // transform of sin(r^2/4) in the plane is 2 cos(rho^2)
        let chirp = circle_eigs(&SymbolTransform::radial(Dim::Two, |r| 2.0 * (r * r).cos(), None), 8).unwrap();
        for n in 0..=8 {
            assert!((chirp[n] - closed_form_chirp(Dim::Two, n).unwrap()).abs() < 1e-11, "n={n}");
        }
        assert!(circle_eigs(&SymbolTransform::constant(Dim::Three, 1.0), 2).is_err());
    }

    #[test]
    fn nodal_spectrum_matches_circle() {
        let g = sphere_grid(Dim::Two, 256).unwrap();
        let t = exp_transform();
        let m = build_nodal(&t, &g).unwrap();
        let e = eigen_hermitian(&m, false).unwrap();
        let mut lam: Vec<f64> = circle_eigs(&t, 128).unwrap();
        // each n >= 1 appears twice on the circle
        let mut full = vec![lam[0]];
        for v in lam.drain(1..) {
            full.push(v);
            full.push(v);
        }
        full.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        for k in 0..20 {
            assert!((e.values[k] - full[k]).abs() < 1e-6 * full[k].abs(), "k={k}");
        }
        let norm = operator_norm(&m).unwrap();
        assert!((norm - full[0]).abs() < 1e-5 * full[0]);
    }

    #[test]
    fn harmonic_matrix_is_diagonal_for_radial_symbols() {
        for (d, res) in [(Dim::Two, 64), (Dim::Three, 64)] {
            let a = RadialSymbol::exponential(1.0).unwrap();
            let t = SymbolTransform::from_symbol(&a, d).unwrap();
            let g = sphere_grid(d, res).unwrap();
            let h = build_harmonic(&t, 16, &g).unwrap();
            assert!(h.warnings.is_empty());
            let seq = gamma_sequence(&a, d, 16, &TailPolicy::default()).unwrap();
            let max = seq.sup_abs();
            let off = (0..h.n).flat_map(|i| (0..h.n).map(move |j| (i, j))).filter(|(i, j)| i != j);
            let worst = off.map(|(i, j)| h.get(i, j).norm()).fold(0.0, f64::max);
            assert!(worst <= 1e-8 * max, "{d}: {worst:e}");
            let idx = crate::specfun::harmonic_indices(d, 16);
            for (k, ix) in idx.iter().enumerate() {
                assert!((h.get(k, k).re - seq.gammas[ix.n]).abs() < 1e-6 * max, "{d} n={}", ix.n);
            }
        }
    }

    #[test]
    fn constant_transform_in_harmonic_basis() {
        let g = sphere_grid(Dim::Three, 16).unwrap();
        let t = SymbolTransform::constant(Dim::Three, 2.0);
        let h = build_harmonic(&t, 3, &g).unwrap();
        let want = 2.0 * Dim::Three.kernel_prefactor() * 4.0 * PI;
        assert!((h.get(0, 0).re - want).abs() < 1e-12);
        let rest = (0..h.n).flat_map(|i| (0..h.n).map(move |j| (i, j))).filter(|p| *p != (0, 0));
        assert!(rest.map(|(i, j)| h.get(i, j).norm()).fold(0.0, f64::max) < 1e-12);
    }

    #[test]
    fn cap_diagonal_for_singular_transforms() {
        // |zeta|^{-1} in space: cap integral 2 pi U exactly
        let t = SymbolTransform::power_law(Dim::Three, 1.0);
        let w = 0.01;
        assert!((cap_integral(&t, w).unwrap() - 2.0 * PI * (w / PI).sqrt()).abs() < 1e-13);
        let g = sphere_grid(Dim::Three, 12).unwrap();
        let m = build_nodal(&t, &g).unwrap();
        assert!(m.diagonal().iter().all(|z| z.re.is_finite() && z.re > 0.0));
        assert!(cap_integral(&SymbolTransform::power_law(Dim::Three, 2.0), w).is_err());
    }

    #[test]
    fn csv_exports() {
        let m = OperatorMatrix::new(1, vec![Complex64::new(1.0, -0.5)], Basis::Plain).unwrap();
        let mut out = Vec::new();
        m.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "row,col,re,im\n0,0,1.00000000000000000e0,-5.00000000000000000e-1\n");
        let mut out = Vec::new();
        write_spectrum_csv(&[2.0], &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "index,eigenvalue\n0,2.00000000000000000e0\n");
    }
}
