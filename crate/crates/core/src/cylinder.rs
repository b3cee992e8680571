//! Finite differences for `−Δ_{g_ε} φ = λ φ` on the flat cylinder
//! `[0, h] × S¹` with conformal metric `g_ε = e^{2εf₀}(dx² + dθ²)`.
//!
//! The conformal problem is the flat generalized problem
//! `−Δ_flat φ = λ e^{2εf₀} φ`, discretized as `A u = ι B u` with
//! `A = I_θ ⊗ L_x + L_θ ⊗ I_x` and `B = diag(e^{2εf₀}) · Δx Δθ`.
//! Unknowns are ordered with θ outermost: `index = j · n_x + i`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::linalg::{
    generalized_smallest_eigenpairs, DiagonalWeightMatrix, EigenOptions, LinalgError, SymmetricSparseMatrix,
};
use crate::quadrature::GaussLegendre;

/// Grid that reproduces the reference ε-sweep at `h = 1`: the ε → 0
/// offset `λ_cont − π² ≈ −0.00593` fixes `n_x = 36`, and the raw
/// eigenvalue scale `ι ≈ 2788.06` then fixes `n_θ = 48`.
pub const CALIBRATED_NX: usize = 36;
pub const CALIBRATED_NTHETA: usize = 48;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CylinderError {
    #[error("grid too small: n_x = {n_x} (need >= 3), n_theta = {n_theta} (need >= 4)")]
    GridTooSmall { n_x: usize, n_theta: usize },
    #[error("cylinder height must be positive and finite, got {0}")]
    InvalidHeight(f64),
    #[error("perturbation amplitude must be finite and >= 0, got {0}")]
    InvalidAmplitude(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Interior nodes `x_i = i·Δx` (`i = 1..=n_x`, `Δx = h/(n_x+1)`) times
/// periodic nodes `θ_j = j·Δθ` (`j = 0..n_θ`, `Δθ = 2π/n_θ`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderGrid {
    h: f64,
    n_x: usize,
    n_theta: usize,
}

impl CylinderGrid {
    pub fn new(h: f64, n_x: usize, n_theta: usize) -> Result<Self, CylinderError> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(CylinderError::InvalidHeight(h));
        }
        if n_x < 3 || n_theta < 4 {
            return Err(CylinderError::GridTooSmall { n_x, n_theta });
        }
        Ok(Self { h, n_x, n_theta })
    }

    /// [`CALIBRATED_NX`] × [`CALIBRATED_NTHETA`] at height `h`.
    pub fn calibrated(h: f64) -> Result<Self, CylinderError> {
        Self::new(h, CALIBRATED_NX, CALIBRATED_NTHETA)
    }

    pub fn height(&self) -> f64 {
        self.h
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn dx(&self) -> f64 {
        self.h / (self.n_x + 1) as f64
    }

    pub fn dtheta(&self) -> f64 {
        2.0 * PI / self.n_theta as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dtheta()
    }

    pub fn dim(&self) -> usize {
        self.n_x * self.n_theta
    }

    /// `x` coordinate of interior column `i` (zero-based).
    pub fn x(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.dx()
    }

    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.dtheta()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n_x + i
    }

    /// `(i, j, x_i, θ_j)` in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        (0..self.n_theta).flat_map(move |j| (0..self.n_x).map(move |i| (i, j, self.x(i), self.theta(j))))
    }
}

/// Smooth profile `f₀(x, θ)`, periodic in θ, with its analytic gradient.
pub trait PerturbationProfile: Send + Sync {
    fn value(&self, x: f64, theta: f64) -> f64;
    /// `(∂_x f₀, ∂_θ f₀)`.
    fn gradient(&self, x: f64, theta: f64) -> (f64, f64);
    fn describe(&self) -> String;
}

/// `f₀(x, θ) = sin(πx/h) cos(kθ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineCosineProfile {
    pub h: f64,
    pub k: u32,
}

impl SineCosineProfile {
    pub fn new(h: f64, k: u32) -> Self {
        Self { h, k }
    }

    /// `∫ |∇f₀|² dA` over `[0, h] × [0, 2π]`.
    pub fn gradient_energy(&self) -> f64 {
        let c = PI / self.h;
        let k = self.k as f64;
        let cos2 = if self.k == 0 { 2.0 * PI } else { PI };
        let sin2 = if self.k == 0 { 0.0 } else { PI };
        c * c * (self.h / 2.0) * cos2 + k * k * (self.h / 2.0) * sin2
    }
}

impl PerturbationProfile for SineCosineProfile {
    fn value(&self, x: f64, theta: f64) -> f64 {
        (PI * x / self.h).sin() * (self.k as f64 * theta).cos()
    }

    fn gradient(&self, x: f64, theta: f64) -> (f64, f64) {
        let c = PI / self.h;
        let k = self.k as f64;
        (
            c * (c * x).cos() * (k * theta).cos(),
            -k * (c * x).sin() * (k * theta).sin(),
        )
    }

    fn describe(&self) -> String {
        format!("sin(pi*x/{})*cos({}*theta)", self.h, self.k)
    }
}

/// Amplitude `ε ≥ 0` and profile `f₀` of `g_ε = e^{2εf₀}(dx² + dθ²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalPerturbation<P = SineCosineProfile> {
    epsilon: f64,
    profile: P,
}

impl<P: PerturbationProfile> ConformalPerturbation<P> {
    pub fn new(epsilon: f64, profile: P) -> Result<Self, CylinderError> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(CylinderError::InvalidAmplitude(epsilon));
        }
        Ok(Self { epsilon, profile })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn profile(&self) -> &P {
        &self.profile
    }

    /// Conformal factor `e^{2εf₀}`.
    pub fn factor(&self, x: f64, theta: f64) -> f64 {
        (2.0 * self.epsilon * self.profile.value(x, theta)).exp()
    }

    /// `e^{−2εf₀} |ε ∇f₀|²`.
    pub fn deficit_density(&self, x: f64, theta: f64) -> f64 {
        let (gx, gt) = self.profile.gradient(x, theta);
        let e = self.epsilon;
        (-2.0 * e * self.profile.value(x, theta)).exp() * e * e * (gx * gx + gt * gt)
    }
}

impl ConformalPerturbation<SineCosineProfile> {
    /// The default `f₀ = sin(πx/h) cos θ`.
    pub fn default_profile(epsilon: f64, h: f64) -> Result<Self, CylinderError> {
        Self::new(epsilon, SineCosineProfile::new(h, 1))
    }

    /// Small-ε limit `ε²/h² ∫ |∇f₀|²`.
    pub fn leading_order_deficit(&self) -> f64 {
        let h = self.profile.h;
        self.epsilon * self.epsilon / (h * h) * self.profile.gradient_energy()
    }
}

/// Dirichlet second difference `tridiag(−1, 2, −1)/Δ²` of size `n`.
pub fn dirichlet_second_difference(n: usize, spacing: f64) -> Vec<(usize, usize, f64)> {
    let s = 1.0 / (spacing * spacing);
    let mut t = Vec::with_capacity(3 * n);
    for i in 0..n {
        t.push((i, i, 2.0 * s));
        if i + 1 < n {
            t.push((i, i + 1, -s));
            t.push((i + 1, i, -s));
        }
    }
    t
}

/// Periodic second difference `circulant(−1, 2, −1)/Δ²` of size `n ≥ 3`.
pub fn periodic_second_difference(n: usize, spacing: f64) -> Vec<(usize, usize, f64)> {
    let s = 1.0 / (spacing * spacing);
    let mut t = Vec::with_capacity(3 * n);
    for i in 0..n {
        t.push((i, i, 2.0 * s));
        t.push((i, (i + 1) % n, -s));
        t.push(((i + 1) % n, i, -s));
    }
    t
}

/// `A = I_θ ⊗ L_x + L_θ ⊗ I_x`.
pub fn assemble_operator(grid: &CylinderGrid) -> Result<SymmetricSparseMatrix, CylinderError> {
    let nx = grid.n_x;
    let nt = grid.n_theta;
    let lx = dirichlet_second_difference(nx, grid.dx());
    let lt = periodic_second_difference(nt, grid.dtheta());
    let mut triplets = Vec::with_capacity(nt * lx.len() + nx * lt.len());
    for j in 0..nt {
        triplets.extend(lx.iter().map(|&(r, c, v)| (j * nx + r, j * nx + c, v)));
    }
    for &(r, c, v) in &lt {
        triplets.extend((0..nx).map(|i| (r * nx + i, c * nx + i, v)));
    }
    Ok(SymmetricSparseMatrix::from_triplets(grid.dim(), triplets)?)
}

/// `B_ii = e^{2εf₀(x_i, θ_j)} Δx Δθ`.
pub fn assemble_weight<P: PerturbationProfile>(
    grid: &CylinderGrid,
    pert: &ConformalPerturbation<P>,
) -> Result<DiagonalWeightMatrix, CylinderError> {
    let cell = grid.cell_area();
    let diag = grid.nodes().map(|(_, _, x, t)| pert.factor(x, t) * cell).collect();
    Ok(DiagonalWeightMatrix::new(diag)?)
}

/// Ground state of the discrete generalized problem.
#[derive(Debug, Clone, PartialEq)]
pub struct FdEigenResult {
    /// Raw eigenvalue `ι` of `A u = ι B u`.
    pub iota: f64,
    /// `Δx Δθ · ι`.
    pub lambda_cont: f64,
    /// `‖A u − ι B u‖ / ‖u‖`.
    pub residual: f64,
    pub grid: CylinderGrid,
    /// Eigenvector with `uᵀ B u = 1`.
    pub vector: Vec<f64>,
}

pub fn perturbed_ground_eigenvalue<P: PerturbationProfile>(
    grid: &CylinderGrid,
    pert: &ConformalPerturbation<P>,
    tol: f64,
) -> Result<FdEigenResult, CylinderError> {
    perturbed_ground_eigenvalue_with(grid, pert, tol, &EigenOptions::default())
}

pub fn perturbed_ground_eigenvalue_with<P: PerturbationProfile>(
    grid: &CylinderGrid,
    pert: &ConformalPerturbation<P>,
    tol: f64,
    opts: &EigenOptions,
) -> Result<FdEigenResult, CylinderError> {
    let a = assemble_operator(grid)?;
    let b = assemble_weight(grid, pert)?;
    let pair = generalized_smallest_eigenpairs(&a, &b, 1, tol, opts)?
        .into_iter()
        .next()
        .expect("one pair requested");
    Ok(FdEigenResult {
        iota: pair.value,
        lambda_cont: grid.cell_area() * pair.value,
        residual: pair.residual_norm,
        grid: *grid,
        vector: pair.vector,
    })
}

/// `λ_{m,k} = (mπ/h)² + k²`.
///
/// # Panics
/// If `m == 0`.
pub fn cylinder_eigenvalue_exact(h: f64, m: u32, k: i32) -> f64 {
    assert!(m >= 1, "axial index m starts at 1");
    let axial = m as f64 * PI / h;
    axial * axial + (k as f64) * (k as f64)
}

/// Quadrature rule for the deficit integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeficitRule {
    /// Sum over the eigenproblem's interior nodes times `Δx Δθ`.
    #[default]
    GridNodes,
    /// Midpoint rule on the `(n_x + 1) × n_θ` cells covering `[0, h] × S¹`.
    CellMidpoints,
}

/// `D = (1/h²) ∫ e^{−2εf₀} |ε∇f₀|² dA` with the default rule.
pub fn cylinder_deficit<P: PerturbationProfile>(grid: &CylinderGrid, pert: &ConformalPerturbation<P>) -> f64 {
    cylinder_deficit_with(grid, pert, DeficitRule::default())
}

pub fn cylinder_deficit_with<P: PerturbationProfile>(
    grid: &CylinderGrid,
    pert: &ConformalPerturbation<P>,
    rule: DeficitRule,
) -> f64 {
    let h = grid.h;
    let sum: f64 = match rule {
        DeficitRule::GridNodes => grid.nodes().map(|(_, _, x, t)| pert.deficit_density(x, t)).sum(),
        DeficitRule::CellMidpoints => {
            let dx = grid.dx();
            let dt = grid.dtheta();
            (0..grid.n_theta)
                .flat_map(|j| (0..=grid.n_x).map(move |i| ((i as f64 + 0.5) * dx, (j as f64 + 0.5) * dt)))
                .map(|(x, t)| pert.deficit_density(x, t))
                .sum()
        }
    };
    sum * grid.cell_area() / (h * h)
}

/// Deficit integral resolved to near machine precision: composite
/// Gauss–Legendre in `x`, trapezoid (spectrally accurate) in periodic θ.
pub fn continuum_deficit<P: PerturbationProfile>(h: f64, pert: &ConformalPerturbation<P>) -> f64 {
    let rule = GaussLegendre::new(20);
    let n_theta = 256;
    let dt = 2.0 * PI / n_theta as f64;
    let integral = rule.integrate_composite(
        |x| (0..n_theta).map(|j| pert.deficit_density(x, j as f64 * dt)).sum::<f64>() * dt,
        0.0,
        h,
        8,
    );
    integral / (h * h)
}

/// First-order Rayleigh prediction `−2 λ₀ ∫ ε f₀ φ₀² dA` for the shift of
/// the ground eigenvalue, with `φ₀ = sin(πx/h)/√(πh)` and `λ₀ = (π/h)²`,
/// evaluated on the grid nodes.
pub fn first_order_eigenvalue_shift<P: PerturbationProfile>(
    grid: &CylinderGrid,
    pert: &ConformalPerturbation<P>,
) -> f64 {
    let h = grid.h;
    let lambda0 = cylinder_eigenvalue_exact(h, 1, 0);
    let integral: f64 = grid
        .nodes()
        .map(|(_, _, x, t)| {
            let phi = (PI * x / h).sin();
            pert.epsilon * pert.profile.value(x, t) * phi * phi / (PI * h)
        })
        .sum::<f64>()
        * grid.cell_area();
    -2.0 * lambda0 * integral
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(CylinderGrid::new(1.0, 2, 8).is_err());
        assert!(CylinderGrid::new(1.0, 3, 3).is_err());
        assert!(CylinderGrid::new(0.0, 8, 8).is_err());
        let g = CylinderGrid::new(1.0, 3, 4).unwrap();
        assert_eq!(g.dim(), 12);
        assert_eq!(g.dx(), 0.25);
        assert_eq!(g.index(2, 1), 5);
        assert!(ConformalPerturbation::default_profile(-1.0, 1.0).is_err());
    }

    #[test]
    fn periodic_rows_sum_to_zero() {
        let n = 9;
        let m = SymmetricSparseMatrix::from_triplets(n, periodic_second_difference(n, 0.3)).unwrap();
        let r = m.mul_vec(&vec![1.0; n]);
        assert!(r.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn unperturbed_weight_is_cell_area() {
        let g = CylinderGrid::new(1.0, 10, 12).unwrap();
        let p = ConformalPerturbation::default_profile(0.0, 1.0).unwrap();
        let b = assemble_weight(&g, &p).unwrap();
        assert!(b.diagonal().iter().all(|&w| w == g.cell_area()));
        assert_eq!(cylinder_deficit(&g, &p), 0.0);
        assert_eq!(first_order_eigenvalue_shift(&g, &p), 0.0);
    }

    #[test]
    fn exact_spectrum() {
        assert!((cylinder_eigenvalue_exact(1.0, 1, 0) - PI * PI).abs() < 1e-14);
        assert!((cylinder_eigenvalue_exact(1.0, 2, 0) - 4.0 * PI * PI).abs() < 1e-13);
        assert_eq!(cylinder_eigenvalue_exact(1.0, 1, 2), cylinder_eigenvalue_exact(1.0, 1, -2));
    }

    #[test]
    fn gradient_energy_default() {
        let p = SineCosineProfile::new(1.0, 1);
        assert!((p.gradient_energy() - (PI.powi(3) + PI) / 2.0).abs() < 1e-13);
    }

    #[test]
    fn analytic_gradient_matches_finite_difference() {
        let p = SineCosineProfile::new(1.3, 2);
        let (x, t, d) = (0.4, 1.1, 1e-6);
        let (gx, gt) = p.gradient(x, t);
        let fx = (p.value(x + d, t) - p.value(x - d, t)) / (2.0 * d);
        let ft = (p.value(x, t + d) - p.value(x, t - d)) / (2.0 * d);
        assert!((gx - fx).abs() < 1e-8 && (gt - ft).abs() < 1e-8);
    }
}
