//! Concentric Euclidean annulus `{a < |z| < b}`: capacity potential,
//! energy, modulus, Hessian deficit, and the exact Dirichlet spectrum.
//!
//! Normal derivatives use the outward normal of the annulus: `−∂_r` on
//! the inner circle and `+∂_r` on the outer one.

use std::f64::consts::PI;

use thiserror::Error;

use crate::quadrature::adaptive_gauss_legendre;
use crate::special::{bessel_jy_with_derivatives, cross_product_roots, BesselOrder, SpecialError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnnulusError {
    #[error("radii must satisfy 0 < a < b, got a = {a}, b = {b}")]
    InvalidGeometry { a: f64, b: f64 },
    #[error("radius {r} outside [{a}, {b}]")]
    RadiusOutOfRange { r: f64, a: f64, b: f64 },
    #[error("spectrum needs n_max, s_max >= 1 (got {n_max}, {s_max})")]
    InvalidSearch { n_max: u32, s_max: u32 },
    #[error("mode (n = {n}, s = {s}) has not been normalized")]
    Unnormalized { n: u32, s: u32 },
    #[error("mode (n = {n}, s = {s}): {source}")]
    Mode {
        n: u32,
        s: u32,
        #[source]
        source: SpecialError,
    },
}

/// Inner and outer radii of a concentric annulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusGeometry {
    a: f64,
    b: f64,
}

impl AnnulusGeometry {
    pub fn new(a: f64, b: f64) -> Result<Self, AnnulusError> {
        if !(a > 0.0 && a < b && b.is_finite()) {
            return Err(AnnulusError::InvalidGeometry { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn inner(&self) -> f64 {
        self.a
    }

    pub fn outer(&self) -> f64 {
        self.b
    }

    /// `ln(b/a)`.
    pub fn log_ratio(&self) -> f64 {
        (self.b / self.a).ln()
    }

    pub fn area(&self) -> f64 {
        PI * (self.b * self.b - self.a * self.a)
    }
}

/// Which boundary circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Inner,
    Outer,
}

/// `u(r) = (ln r − ln a) / ln(b/a)`, harmonic with `u(a) = 0`, `u(b) = 1`.
pub fn capacity_potential(geom: &AnnulusGeometry, r: f64) -> Result<f64, AnnulusError> {
    if !(r >= geom.a && r <= geom.b) {
        return Err(AnnulusError::RadiusOutOfRange { r, a: geom.a, b: geom.b });
    }
    Ok((r / geom.a).ln() / geom.log_ratio())
}

/// `E = ½ ∫ |∇u|² = π / ln(b/a)`.
pub fn capacity_energy(geom: &AnnulusGeometry) -> f64 {
    PI / geom.log_ratio()
}

/// `D = ½ ∫ |Hess u|² = π / ln²(b/a) · (1/a² − 1/b²)`.
pub fn capacity_deficit(geom: &AnnulusGeometry) -> f64 {
    let l = geom.log_ratio();
    PI / (l * l) * (1.0 / (geom.a * geom.a) - 1.0 / (geom.b * geom.b))
}

/// `h = ln(b/a) / (2π)`, equal to `1/(2E)`.
pub fn modulus(geom: &AnnulusGeometry) -> f64 {
    geom.log_ratio() / (2.0 * PI)
}

/// Capacity quantities of one annulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityProfile {
    pub energy: f64,
    pub modulus: f64,
    pub deficit: f64,
    /// `∂_ν u` at `r = a` (negative: `u` increases inward-to-outward).
    pub normal_derivative_inner: f64,
    /// `∂_ν u` at `r = b`.
    pub normal_derivative_outer: f64,
}

impl CapacityProfile {
    pub fn of(geom: &AnnulusGeometry) -> Self {
        let l = geom.log_ratio();
        Self {
            energy: capacity_energy(geom),
            modulus: modulus(geom),
            deficit: capacity_deficit(geom),
            normal_derivative_inner: -1.0 / (geom.a * l),
            normal_derivative_outer: 1.0 / (geom.b * l),
        }
    }

    /// `inf_{∂A} |∂_ν u|`, attained on the outer circle.
    pub fn nondegeneracy(&self) -> f64 {
        self.normal_derivative_inner.abs().min(self.normal_derivative_outer.abs())
    }
}

/// One separable Dirichlet mode `R_n(r) cos(nθ)` with
/// `R_n(r) = A J_n(kr) + B Y_n(kr)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEigenmode {
    n: BesselOrder,
    s: u32,
    k: f64,
    coeff_a: f64,
    coeff_b: f64,
    /// Scale factor applied to the unit-coefficient profile.
    norm: f64,
    normalized: bool,
}

impl BesselEigenmode {
    /// Mode for a root `k` of `F_n`, with `(A, B) ∝ (−Y_n(ka), J_n(ka))`
    /// scaled to unit length. Not yet L²-normalized. By the Wronskian,
    /// `R′(a) = 2/(πa·|(A, B)|) > 0`, so the ground mode is positive.
    pub fn from_root(n: BesselOrder, s: u32, k: f64, geom: &AnnulusGeometry) -> Result<Self, AnnulusError> {
        let v = bessel_jy_with_derivatives(n, k * geom.a).map_err(|e| mode_err(n, s, e))?;
        let len = v.y.hypot(v.j);
        Ok(Self {
            n,
            s,
            k,
            coeff_a: -v.y / len,
            coeff_b: v.j / len,
            norm: 1.0,
            normalized: false,
        })
    }

    /// Scale so that `∫_A φ² = 1` with `φ = R_n(r) cos(nθ)`, i.e.
    /// `c_n ∫_a^b R² r dr = 1` with `c_0 = 2π`, `c_n = π`.
    pub fn normalize(self, geom: &AnnulusGeometry) -> Result<Self, AnnulusError> {
        let raw = Self {
            coeff_a: self.coeff_a / self.norm,
            coeff_b: self.coeff_b / self.norm,
            norm: 1.0,
            ..self
        };
        let mass = raw.angular_measure() * raw.radial_mass(geom, 1e-13)?;
        let scale = 1.0 / mass.sqrt();
        Ok(Self {
            coeff_a: raw.coeff_a * scale,
            coeff_b: raw.coeff_b * scale,
            norm: scale,
            normalized: true,
            ..raw
        })
    }

    pub fn order(&self) -> u32 {
        self.n.get()
    }

    pub fn branch(&self) -> u32 {
        self.s
    }

    pub fn wavenumber(&self) -> f64 {
        self.k
    }

    pub fn eigenvalue(&self) -> f64 {
        self.k * self.k
    }

    pub fn coefficients(&self) -> (f64, f64) {
        (self.coeff_a, self.coeff_b)
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `∫_0^{2π} cos²(nθ) dθ`.
    pub fn angular_measure(&self) -> f64 {
        if self.n.get() == 0 {
            2.0 * PI
        } else {
            PI
        }
    }

    fn values(&self, r: f64) -> Result<(f64, f64, f64), AnnulusError> {
        let v = bessel_jy_with_derivatives(self.n, self.k * r).map_err(|e| mode_err(self.n, self.s, e))?;
        let (a, b, k) = (self.coeff_a, self.coeff_b, self.k);
        Ok((
            a * v.j + b * v.y,
            k * (a * v.j_prime + b * v.y_prime),
            k * k * (a * v.j_second + b * v.y_second),
        ))
    }

    pub fn radial(&self, r: f64) -> Result<f64, AnnulusError> {
        Ok(self.values(r)?.0)
    }

    pub fn radial_derivative(&self, r: f64) -> Result<f64, AnnulusError> {
        Ok(self.values(r)?.1)
    }

    /// `R'' + R'/r + (k² − n²/r²) R` with all derivatives from Bessel
    /// recurrences.
    pub fn ode_residual(&self, r: f64) -> Result<f64, AnnulusError> {
        let (v, d1, d2) = self.values(r)?;
        let n = self.n.get() as f64;
        Ok(d2 + d1 / r + (self.k * self.k - n * n / (r * r)) * v)
    }

    /// `max(|R(a)|, |R(b)|)`.
    pub fn dirichlet_residual(&self, geom: &AnnulusGeometry) -> Result<f64, AnnulusError> {
        Ok(self.radial(geom.a)?.abs().max(self.radial(geom.b)?.abs()))
    }

    /// `∫_a^b R(r)² r dr` by adaptive Gauss–Legendre.
    pub fn radial_mass(&self, geom: &AnnulusGeometry, rel_tol: f64) -> Result<f64, AnnulusError> {
        // Surface the first evaluation error instead of integrating NaNs.
        self.radial(0.5 * (geom.a + geom.b))?;
        Ok(adaptive_gauss_legendre(
            |r| {
                let v = self.radial(r).unwrap_or(f64::NAN);
                v * v * r
            },
            geom.a,
            geom.b,
            rel_tol,
        ))
    }
}

fn mode_err(n: BesselOrder, s: u32, source: SpecialError) -> AnnulusError {
    AnnulusError::Mode { n: n.get(), s, source }
}

/// Modes `(n, s)` for `n ≤ n_max`, `s ≤ s_max`, sorted by eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusSpectrum {
    pub geometry: AnnulusGeometry,
    pub modes: Vec<BesselEigenmode>,
}

impl AnnulusSpectrum {
    /// Mode of smallest eigenvalue among those computed.
    pub fn ground(&self) -> &BesselEigenmode {
        &self.modes[0]
    }

    pub fn first_eigenvalue(&self) -> f64 {
        self.ground().eigenvalue()
    }
}

/// Exact Dirichlet spectrum of the annulus, one normalized mode per root.
pub fn annulus_spectrum(geom: &AnnulusGeometry, n_max: u32, s_max: u32) -> Result<AnnulusSpectrum, AnnulusError> {
    if n_max < 1 || s_max < 1 {
        return Err(AnnulusError::InvalidSearch { n_max, s_max });
    }
    let mut modes = Vec::with_capacity(((n_max + 1) * s_max) as usize);
    for n in 0..=n_max {
        let order = BesselOrder::new(n).map_err(|e| AnnulusError::Mode { n, s: 0, source: e })?;
        let roots = cross_product_roots(order, geom.a, geom.b, s_max as usize)
            .map_err(|e| AnnulusError::Mode { n, s: 0, source: e })?;
        for (i, k) in roots.into_iter().enumerate() {
            let s = i as u32 + 1;
            modes.push(BesselEigenmode::from_root(order, s, k, geom)?.normalize(geom)?);
        }
    }
    modes.sort_by(|x, y| x.eigenvalue().total_cmp(&y.eigenvalue()));
    Ok(AnnulusSpectrum {
        geometry: *geom,
        modes,
    })
}

/// Eigenvalue `k²` of mode `(n, s)`, without the eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEigenvalue {
    pub n: u32,
    pub s: u32,
    pub value: f64,
}

/// Same search as [`annulus_spectrum`] but only the roots, sorted by value.
pub fn annulus_eigenvalues(geom: &AnnulusGeometry, n_max: u32, s_max: u32) -> Result<Vec<ModeEigenvalue>, AnnulusError> {
    if n_max < 1 || s_max < 1 {
        return Err(AnnulusError::InvalidSearch { n_max, s_max });
    }
    let mut values = Vec::with_capacity(((n_max + 1) * s_max) as usize);
    for n in 0..=n_max {
        let order = BesselOrder::new(n).map_err(|e| AnnulusError::Mode { n, s: 0, source: e })?;
        let roots = cross_product_roots(order, geom.a, geom.b, s_max as usize)
            .map_err(|e| AnnulusError::Mode { n, s: 0, source: e })?;
        values.extend(roots.into_iter().enumerate().map(|(i, k)| ModeEigenvalue {
            n,
            s: i as u32 + 1,
            value: k * k,
        }));
    }
    values.sort_by(|x, y| x.value.total_cmp(&y.value));
    Ok(values)
}

/// First Dirichlet eigenvalue with the default search breadth
/// (`n ≤ 5`, `s ≤ 2`) and the minimizing mode.
pub fn first_eigenmode(geom: &AnnulusGeometry) -> Result<BesselEigenmode, AnnulusError> {
    Ok(*annulus_spectrum(geom, 5, 2)?.ground())
}

/// Radial ground mode `(n, s) = (0, 1)` alone, for callers that have
/// already established it is the minimizer.
pub fn radial_ground_mode(geom: &AnnulusGeometry) -> Result<BesselEigenmode, AnnulusError> {
    let order = BesselOrder::new(0).expect("order 0 is valid");
    let k = cross_product_roots(order, geom.a, geom.b, 1)
        .map_err(|e| AnnulusError::Mode { n: 0, s: 1, source: e })?[0];
    BesselEigenmode::from_root(order, 1, k, geom)?.normalize(geom)
}

/// `∂_ν φ` on a boundary circle (amplitude of the `cos(nθ)` factor).
pub fn boundary_normal_derivative(
    mode: &BesselEigenmode,
    geom: &AnnulusGeometry,
    which: Boundary,
) -> Result<f64, AnnulusError> {
    if !mode.normalized {
        return Err(AnnulusError::Unnormalized { n: mode.order(), s: mode.s });
    }
    match which {
        Boundary::Inner => Ok(-mode.radial_derivative(geom.a)?),
        Boundary::Outer => Ok(mode.radial_derivative(geom.b)?),
    }
}

/// `∫_{∂A} 𝒱 (∂_ν φ)² dσ` for weights constant on each circle.
///
/// For `n = 0` this is `2πa·w_in·(∂_ν φ|_a)² + 2πb·w_out·(∂_ν φ|_b)²`;
/// for `n ≥ 1` the `cos²(nθ)` factor contributes `π` instead of `2π`.
pub fn rellich_boundary_integral(
    mode: &BesselEigenmode,
    geom: &AnnulusGeometry,
    weight_inner: f64,
    weight_outer: f64,
) -> Result<f64, AnnulusError> {
    let di = boundary_normal_derivative(mode, geom, Boundary::Inner)?;
    let dout = boundary_normal_derivative(mode, geom, Boundary::Outer)?;
    let c = mode.angular_measure();
    Ok(c * (geom.a * weight_inner * di * di + geom.b * weight_outer * dout * dout))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(a: f64, b: f64) -> AnnulusGeometry {
        AnnulusGeometry::new(a, b).unwrap()
    }

    #[test]
    fn geometry_validation() {
        assert!(AnnulusGeometry::new(1.0, 1.0).is_err());
        assert!(AnnulusGeometry::new(0.0, 1.0).is_err());
        assert!(AnnulusGeometry::new(2.0, 1.0).is_err());
        assert!(AnnulusGeometry::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn potential_boundary_values() {
        let g = geom(1.0, 5.0);
        assert_eq!(capacity_potential(&g, 1.0).unwrap(), 0.0);
        assert!((capacity_potential(&g, 5.0).unwrap() - 1.0).abs() < 1e-15);
        let e = std::f64::consts::E;
        let g = geom(1.0, e);
        assert!((capacity_potential(&g, e.sqrt()).unwrap() - 0.5).abs() < 1e-15);
        assert!(capacity_potential(&g, 0.5).is_err());
    }

    #[test]
    fn potential_is_harmonic() {
        // Five-point Laplacian of u(|z|) at r = 2 on the real axis.
        let g = geom(1.0, 5.0);
        let u = |x: f64, y: f64| capacity_potential(&g, x.hypot(y)).unwrap();
        let h = 1e-3;
        let lap = (u(2.0 + h, 0.0) + u(2.0 - h, 0.0) + u(2.0, h) + u(2.0, -h) - 4.0 * u(2.0, 0.0)) / (h * h);
        assert!(lap.abs() < 1e-6, "{lap}");
    }

    #[test]
    fn unit_modulus() {
        let g = geom(1.0, (2.0 * PI).exp());
        assert!((capacity_energy(&g) - 0.5).abs() < 1e-15);
        assert!((modulus(&g) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn profile_normal_derivatives() {
        let g = geom(1.0, 5.0);
        let p = CapacityProfile::of(&g);
        assert!(p.normal_derivative_inner < 0.0 && p.normal_derivative_outer > 0.0);
        assert!((p.nondegeneracy() - 1.0 / (5.0 * 5f64.ln())).abs() < 1e-15);
        // Flux of ∇u through each circle equals 2E.
        let flux_out = 2.0 * PI * 5.0 * p.normal_derivative_outer;
        assert!((flux_out - 2.0 * p.energy).abs() < 1e-13);
    }

    #[test]
    fn search_breadth_validated() {
        let g = geom(1.0, 5.0);
        assert!(matches!(annulus_spectrum(&g, 0, 2), Err(AnnulusError::InvalidSearch { .. })));
    }

    #[test]
    fn unnormalized_modes_rejected() {
        let g = geom(1.0, 5.0);
        let order = BesselOrder::new(0).unwrap();
        let k = cross_product_roots(order, 1.0, 5.0, 1).unwrap()[0];
        let raw = BesselEigenmode::from_root(order, 1, k, &g).unwrap();
        assert!(matches!(
            boundary_normal_derivative(&raw, &g, Boundary::Inner),
            Err(AnnulusError::Unnormalized { .. })
        ));
        assert!(rellich_boundary_integral(&raw, &g, 1.0, 1.0).is_err());
        let normed = raw.normalize(&g).unwrap();
        assert!(normed.is_normalized());
        // Normalizing twice is idempotent.
        let again = normed.normalize(&g).unwrap();
        assert!((again.coefficients().0 - normed.coefficients().0).abs() < 1e-12);
    }

    #[test]
    fn ground_mode_signs() {
        let g = geom(1.0, 5.0);
        let m = first_eigenmode(&g).unwrap();
        assert_eq!((m.order(), m.branch()), (0, 1));
        assert!(m.radial(3.0).unwrap() > 0.0);
        let di = boundary_normal_derivative(&m, &g, Boundary::Inner).unwrap();
        let dout = boundary_normal_derivative(&m, &g, Boundary::Outer).unwrap();
        assert!(di < 0.0 && dout < 0.0);
        assert_eq!(rellich_boundary_integral(&m, &g, 0.0, 0.0).unwrap(), 0.0);
    }
}
