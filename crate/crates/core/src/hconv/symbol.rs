use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::quad::SphereGrid;

pub type SphereProfile = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// Bounded function on the unit sphere with a declared bound on its modulus.
#[derive(Clone)]
pub struct SphereSymbol {
    pub d: Dim,
    pub name: String,
    pub sup_abs: f64,
    /// Real-valued at every point.
    pub real: bool,
    f: SphereProfile,
}

impl fmt::Debug for SphereSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SphereSymbol({}, d={}, sup={})", self.name, self.d, self.sup_abs)
    }
}

// Points this close to the dividing plane count as lying on it.
const PLANE_TOL: f64 = 1e-12;

impl SphereSymbol {
    pub fn new<F>(d: Dim, name: &str, sup_abs: f64, real: bool, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    {
        if !(sup_abs >= 0.0) || !sup_abs.is_finite() {
            return Err(Error::InvalidArgument(format!("sup bound must be finite and >= 0, got {sup_abs}")));
        }
        Ok(SphereSymbol { d, name: name.to_string(), sup_abs, real, f: Arc::new(f) })
    }

    pub fn real<F>(d: Dim, name: &str, sup_abs: f64, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::new(d, name, sup_abs, true, move |xi| Complex64::from(f(xi)))
    }

    pub fn constant(d: Dim, c: Complex64) -> Self {
        SphereSymbol { d, name: format!("{c}"), sup_abs: c.norm(), real: c.im == 0.0, f: Arc::new(move |_| c) }
    }

    /// `xi_1`, the cosine of the angle to the first axis.
    pub fn cos_first(d: Dim) -> Self {
        SphereSymbol { d, name: "cos".into(), sup_abs: 1.0, real: true, f: Arc::new(|xi| Complex64::from(xi[0])) }
    }

    /// `2 + xi_2`.
    pub fn two_plus_sin(d: Dim) -> Self {
        SphereSymbol { d, name: "2+sin".into(), sup_abs: 3.0, real: true, f: Arc::new(|xi| Complex64::from(2.0 + xi[1])) }
    }

    /// `exp(i k theta)` on the circle, `theta` the polar angle of `(xi_1, xi_2)`.
    pub fn phase(d: Dim, k: i32) -> Self {
        SphereSymbol {
            d,
            name: format!("exp(i{k}theta)"),
            sup_abs: 1.0,
            real: k == 0,
            f: Arc::new(move |xi| Complex64::from_polar(1.0, k as f64 * xi[1].atan2(xi[0]))),
        }
    }

    /// Indicator of the open upper half `xi_d > 0`; on the dividing plane the
    /// point counts when its first coordinate is positive.
    pub fn upper_half(d: Dim) -> Self {
        let last = d.get() - 1;
        SphereSymbol {
            d,
            name: "upper-half".into(),
            sup_abs: 1.0,
            real: true,
            f: Arc::new(move |xi| {
                let y = xi[last];
                let inside = y > PLANE_TOL || (y.abs() <= PLANE_TOL && xi[0] > 0.0);
                Complex64::from(if inside { 1.0 } else { 0.0 })
            }),
        }
    }

    pub fn eval(&self, xi: &[f64]) -> Complex64 {
        (self.f)(xi)
    }

    pub fn sample(&self, grid: &SphereGrid) -> Vec<Complex64> {
        grid.points.iter().map(|p| self.eval(p)).collect()
    }

    /// Pointwise product, with the product of the bounds.
    pub fn times(&self, other: &SphereSymbol) -> Result<SphereSymbol> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { expected: self.d.get(), found: other.d.get() });
        }
        let (f, g) = (self.f.clone(), other.f.clone());
        Ok(SphereSymbol {
            d: self.d,
            name: format!("({})*({})", self.name, other.name),
            sup_abs: self.sup_abs * other.sup_abs,
            real: self.real && other.real,
            f: Arc::new(move |xi| f(xi) * g(xi)),
        })
    }

    /// Whether `|a| <= sup_abs` holds at every grid point.
    pub fn respects_bound(&self, grid: &SphereGrid) -> bool {
        self.sample(grid).iter().all(|v| v.norm() <= self.sup_abs * (1.0 + 1e-14))
    }

    /// Whether the sampled values are all 0 or 1.
    pub fn is_indicator_on(&self, grid: &SphereGrid) -> bool {
        self.sample(grid).iter().all(|v| *v == Complex64::from(0.0) || *v == Complex64::from(1.0))
    }
}
