//! Concentric annuli under curve shortening flow and numerical checks of
//! the associated variational identities.
//!
//! A circle of radius `r` has curvature `1/r` and shrinks with
//! `dr/dt = −1/r`, so `r(t)² = r₀² − 2t`. With the annulus' outward
//! normal (toward the centre on the inner circle), the outward normal
//! speeds are `V = +1/a` on the inner circle and `V = −1/b` on the outer.

use std::f64::consts::PI;

use thiserror::Error;

use crate::annulus::{
    annulus_eigenvalues, annulus_spectrum, capacity_deficit, capacity_energy, modulus, rellich_boundary_integral, AnnulusError,
    AnnulusGeometry, AnnulusSpectrum, BesselEigenmode, CapacityProfile, ModeEigenvalue,
};
use crate::cylinder::cylinder_eigenvalue_exact;

/// Mode search breadth used for the first eigenvalue along the flow.
pub const SEARCH_ORDERS: u32 = 5;
pub const SEARCH_BRANCHES: u32 = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("radii must satisfy 0 < a0 < b0, got a0 = {a0}, b0 = {b0}")]
    InvalidRadii { a0: f64, b0: f64 },
    #[error("time {t} reaches inner-circle extinction at t = {limit}")]
    Extinction { t: f64, limit: f64 },
    #[error("step {step} at t = {t} is not admissible (extinction at {limit})")]
    InadmissibleStep { t: f64, step: f64, limit: f64 },
    #[error("trajectory needs at least one step")]
    NoSteps,
    #[error("ground mode changes from (n={before_n}, s={before_s}) to (n={after_n}, s={after_s}) under perturbation")]
    ModeCrossing {
        before_n: u32,
        before_s: u32,
        after_n: u32,
        after_s: u32,
    },
    #[error("ground eigenvalue {value} is not simple (next mode at {next})")]
    Degenerate { value: f64, next: f64 },
    #[error(transparent)]
    Annulus(#[from] AnnulusError),
}

/// `r(t) = sqrt(r₀² − 2t)`.
pub fn csf_radius(r0: f64, t: f64) -> f64 {
    (r0 * r0 - 2.0 * t).sqrt()
}

/// Time at which a circle of radius `r₀` collapses.
pub fn extinction_time(r0: f64) -> f64 {
    0.5 * r0 * r0
}

/// `dh/dt = (1/a² − 1/b²) / (2π)` under the flow.
pub fn modulus_rate(geom: &AnnulusGeometry) -> f64 {
    let (a, b) = (geom.inner(), geom.outer());
    (1.0 / (a * a) - 1.0 / (b * b)) / (2.0 * PI)
}

fn geometry_at(a0: f64, b0: f64, t: f64) -> Result<AnnulusGeometry, FlowError> {
    let limit = extinction_time(a0);
    if !(t < limit) {
        return Err(FlowError::Extinction { t, limit });
    }
    Ok(AnnulusGeometry::new(csf_radius(a0, t), csf_radius(b0, t))?)
}

fn check_radii(a0: f64, b0: f64) -> Result<(), FlowError> {
    if !(a0 > 0.0 && a0 < b0 && b0.is_finite()) {
        return Err(FlowError::InvalidRadii { a0, b0 });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsfSnapshot {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub energy: f64,
    pub modulus: f64,
    pub deficit: f64,
    pub lambda1: f64,
    pub modulus_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsfTrajectory {
    pub a0: f64,
    pub b0: f64,
    pub snapshots: Vec<CsfSnapshot>,
}

impl CsfTrajectory {
    fn strictly<F: Fn(&CsfSnapshot) -> f64>(&self, key: F, increasing: bool) -> bool {
        self.snapshots.windows(2).all(|w| {
            let (x, y) = (key(&w[0]), key(&w[1]));
            if increasing {
                y > x
            } else {
                y < x
            }
        })
    }

    pub fn modulus_increasing(&self) -> bool {
        self.strictly(|s| s.modulus, true)
    }

    pub fn energy_decreasing(&self) -> bool {
        self.strictly(|s| s.energy, false)
    }

    pub fn deficit_increasing(&self) -> bool {
        self.strictly(|s| s.deficit, true)
    }
}

/// Closed-form trajectory on `steps + 1` uniform samples of `[0, t_end]`.
pub fn evolve_csf(a0: f64, b0: f64, t_end: f64, steps: usize) -> Result<CsfTrajectory, FlowError> {
    check_radii(a0, b0)?;
    if steps == 0 {
        return Err(FlowError::NoSteps);
    }
    let limit = extinction_time(a0);
    if !(t_end < limit) {
        return Err(FlowError::Extinction { t: t_end, limit });
    }
    let snapshots = (0..=steps)
        .map(|i| {
            let t = t_end * i as f64 / steps as f64;
            let g = geometry_at(a0, b0, t)?;
            let spectrum = annulus_eigenvalues(&g, SEARCH_ORDERS, SEARCH_BRANCHES)?;
            Ok(CsfSnapshot {
                t,
                a: g.inner(),
                b: g.outer(),
                energy: capacity_energy(&g),
                modulus: modulus(&g),
                deficit: capacity_deficit(&g),
                lambda1: spectrum[0].value,
                modulus_rate: modulus_rate(&g),
            })
        })
        .collect::<Result<Vec<_>, FlowError>>()?;
    Ok(CsfTrajectory { a0, b0, snapshots })
}

/// Which identity a residual row refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// `dE/dt = −D`.
    Topping,
    /// `dλ/dt = −∫_{∂A} V (∂_ν φ)² dσ`.
    Hadamard,
    /// `dh/dt > 0`, left = finite difference, right = closed form.
    ModulusMonotonicity,
}

impl Identity {
    pub fn name(&self) -> &'static str {
        match self {
            Identity::Topping => "topping",
            Identity::Hadamard => "hadamard",
            Identity::ModulusMonotonicity => "modulus_rate",
        }
    }
}

/// Both sides of an identity and their discrepancy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResidualReport {
    pub identity: Identity,
    pub t: f64,
    pub left: f64,
    pub right: f64,
    pub abs_residual: f64,
    /// `|left − right| / |right|`, or the absolute residual when `right = 0`.
    pub rel_residual: f64,
    pub step: f64,
}

impl IdentityResidualReport {
    pub fn new(identity: Identity, t: f64, left: f64, right: f64, step: f64) -> Self {
        let (abs_residual, rel_residual) = residuals(left, right);
        Self {
            identity,
            t,
            left,
            right,
            abs_residual,
            rel_residual,
            step,
        }
    }

    /// Recomputes the residuals from `left` and `right`.
    pub fn is_consistent(&self) -> bool {
        residuals(self.left, self.right) == (self.abs_residual, self.rel_residual)
    }
}

fn residuals(left: f64, right: f64) -> (f64, f64) {
    let abs = (left - right).abs();
    let rel = if right == 0.0 { abs } else { abs / right.abs() };
    (abs, rel)
}

/// Convergence order from two reports at different steps.
pub fn observed_order(coarse: &IdentityResidualReport, fine: &IdentityResidualReport) -> f64 {
    (coarse.abs_residual / fine.abs_residual).ln() / (coarse.step / fine.step).ln()
}

/// Finite-difference rule used for the left-hand sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FdScheme {
    /// `(f(t+δ) − f(t−δ)) / 2δ`.
    #[default]
    Central,
    /// `(4·C(δ/2) − C(δ)) / 3` with `C` the central difference.
    Richardson,
}

impl FdScheme {
    fn offsets(&self, step: f64) -> Vec<f64> {
        match self {
            FdScheme::Central => vec![step, -step],
            FdScheme::Richardson => vec![step, -step, 0.5 * step, -0.5 * step],
        }
    }

    /// Combines samples taken at `offsets(step)`, in that order.
    fn combine(&self, step: f64, values: &[f64]) -> f64 {
        let central = (values[0] - values[1]) / (2.0 * step);
        match self {
            FdScheme::Central => central,
            FdScheme::Richardson => {
                let half = (values[2] - values[3]) / step;
                (4.0 * half - central) / 3.0
            }
        }
    }
}

fn check_step(a0: f64, t: f64, step: f64) -> Result<(), FlowError> {
    let limit = extinction_time(a0);
    if !(step > 0.0 && step.is_finite() && t + step < limit && t < limit) {
        return Err(FlowError::InadmissibleStep { t, step, limit });
    }
    Ok(())
}

fn flow_derivative<F>(a0: f64, b0: f64, t: f64, step: f64, scheme: FdScheme, f: F) -> Result<f64, FlowError>
where
    F: Fn(&AnnulusGeometry) -> f64,
{
    let values = scheme
        .offsets(step)
        .into_iter()
        .map(|d| geometry_at(a0, b0, t + d).map(|g| f(&g)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(scheme.combine(step, &values))
}

/// Central difference of `E` along the flow against `−D`.
pub fn verify_topping(a0: f64, b0: f64, t: f64, fd_step: f64) -> Result<IdentityResidualReport, FlowError> {
    verify_topping_with(a0, b0, t, fd_step, FdScheme::Central)
}

pub fn verify_topping_with(
    a0: f64,
    b0: f64,
    t: f64,
    fd_step: f64,
    scheme: FdScheme,
) -> Result<IdentityResidualReport, FlowError> {
    check_radii(a0, b0)?;
    check_step(a0, t, fd_step)?;
    let left = flow_derivative(a0, b0, t, fd_step, scheme, capacity_energy)?;
    let right = -capacity_deficit(&geometry_at(a0, b0, t)?);
    Ok(IdentityResidualReport::new(Identity::Topping, t, left, right, fd_step))
}

/// Central difference of the modulus along the flow against the closed
/// rate `(1/a² − 1/b²)/(2π)`.
pub fn verify_modulus_rate(a0: f64, b0: f64, t: f64, fd_step: f64) -> Result<IdentityResidualReport, FlowError> {
    check_radii(a0, b0)?;
    check_step(a0, t, fd_step)?;
    let left = flow_derivative(a0, b0, t, fd_step, FdScheme::Central, modulus)?;
    let right = modulus_rate(&geometry_at(a0, b0, t)?);
    Ok(IdentityResidualReport::new(Identity::ModulusMonotonicity, t, left, right, fd_step))
}

fn simple_ground(spectrum: &AnnulusSpectrum) -> Result<BesselEigenmode, FlowError> {
    let ground = *spectrum.ground();
    if let Some(next) = spectrum.modes.get(1) {
        let (v, w) = (ground.eigenvalue(), next.eigenvalue());
        if (w - v).abs() <= 1e-9 * v.abs() {
            return Err(FlowError::Degenerate { value: v, next: w });
        }
    }
    Ok(ground)
}

fn same_mode(reference: &BesselEigenmode, other: &ModeEigenvalue) -> Result<(), FlowError> {
    if (reference.order(), reference.branch()) != (other.n, other.s) {
        return Err(FlowError::ModeCrossing {
            before_n: reference.order(),
            before_s: reference.branch(),
            after_n: other.n,
            after_s: other.s,
        });
    }
    Ok(())
}

/// `moved(d)` is the geometry after parameter increment `d`.
fn hadamard_core<G>(
    at: AnnulusGeometry,
    moved: G,
    velocity_inner: f64,
    velocity_outer: f64,
    t: f64,
    step: f64,
    scheme: FdScheme,
) -> Result<IdentityResidualReport, FlowError>
where
    G: Fn(f64) -> Result<AnnulusGeometry, FlowError>,
{
    let mode = simple_ground(&annulus_spectrum(&at, SEARCH_ORDERS, SEARCH_BRANCHES)?)?;
    let mut values = Vec::with_capacity(4);
    for d in scheme.offsets(step) {
        let g = moved(d)?;
        let ground = annulus_eigenvalues(&g, SEARCH_ORDERS, SEARCH_BRANCHES)?[0];
        same_mode(&mode, &ground)?;
        values.push(ground.value);
    }
    let left = scheme.combine(step, &values);
    let right = -rellich_boundary_integral(&mode, &at, velocity_inner, velocity_outer)?;
    Ok(IdentityResidualReport::new(Identity::Hadamard, t, left, right, step))
}

/// Central difference of `λ₁` along the flow against the boundary
/// integral with the flow's normal speeds.
pub fn verify_hadamard(a0: f64, b0: f64, t: f64, fd_step: f64) -> Result<IdentityResidualReport, FlowError> {
    verify_hadamard_with(a0, b0, t, fd_step, FdScheme::Central)
}

pub fn verify_hadamard_with(
    a0: f64,
    b0: f64,
    t: f64,
    fd_step: f64,
    scheme: FdScheme,
) -> Result<IdentityResidualReport, FlowError> {
    check_radii(a0, b0)?;
    check_step(a0, t, fd_step)?;
    let at = geometry_at(a0, b0, t)?;
    hadamard_core(
        at,
        |d| geometry_at(a0, b0, t + d),
        1.0 / at.inner(),
        -1.0 / at.outer(),
        t,
        fd_step,
        scheme,
    )
}

/// Same check for a uniform boundary motion with outward normal speeds
/// `velocity_inner`, `velocity_outer`: the radii move as `a − V_in·s`
/// and `b + V_out·s`.
pub fn verify_hadamard_velocities(
    geom: &AnnulusGeometry,
    velocity_inner: f64,
    velocity_outer: f64,
    fd_step: f64,
) -> Result<IdentityResidualReport, FlowError> {
    let (a, b) = (geom.inner(), geom.outer());
    hadamard_core(
        *geom,
        |s| Ok(AnnulusGeometry::new(a - velocity_inner * s, b + velocity_outer * s)?),
        velocity_inner,
        velocity_outer,
        0.0,
        fd_step,
        FdScheme::Central,
    )
}

fn motion_derivative<F>(geom: &AnnulusGeometry, v_in: f64, v_out: f64, step: f64, f: F) -> Result<f64, FlowError>
where
    F: Fn(&AnnulusGeometry) -> f64,
{
    let (a, b) = (geom.inner(), geom.outer());
    let scheme = FdScheme::Central;
    let values = scheme
        .offsets(step)
        .into_iter()
        .map(|s| AnnulusGeometry::new(a - v_in * s, b + v_out * s).map(|g| f(&g)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(scheme.combine(step, &values))
}

/// Energy rate under a uniform boundary motion against the first
/// variation `−½ ∫_{∂A} V (∂_ν u)² dσ`. Under the flow speeds this is
/// the Topping identity.
pub fn verify_energy_velocities(
    geom: &AnnulusGeometry,
    velocity_inner: f64,
    velocity_outer: f64,
    fd_step: f64,
) -> Result<IdentityResidualReport, FlowError> {
    let left = motion_derivative(geom, velocity_inner, velocity_outer, fd_step, capacity_energy)?;
    let p = CapacityProfile::of(geom);
    let (a, b) = (geom.inner(), geom.outer());
    let flux = 2.0 * PI * a * velocity_inner * p.normal_derivative_inner.powi(2)
        + 2.0 * PI * b * velocity_outer * p.normal_derivative_outer.powi(2);
    Ok(IdentityResidualReport::new(Identity::Topping, 0.0, left, -0.5 * flux, fd_step))
}

/// Modulus rate under a uniform boundary motion against
/// `(V_in/a + V_out/b) / (2π)`.
pub fn verify_modulus_velocities(
    geom: &AnnulusGeometry,
    velocity_inner: f64,
    velocity_outer: f64,
    fd_step: f64,
) -> Result<IdentityResidualReport, FlowError> {
    let left = motion_derivative(geom, velocity_inner, velocity_outer, fd_step, modulus)?;
    let right = (velocity_inner / geom.inner() + velocity_outer / geom.outer()) / (2.0 * PI);
    Ok(IdentityResidualReport::new(Identity::ModulusMonotonicity, 0.0, left, right, fd_step))
}

/// `dλ/dt = −∫_{∂A} V (∂_ν φ)² dσ + 2λ ∫ K φ² dμ` for a constant ambient
/// curvature `K`; with `∫ φ² = 1` the curvature term is `2λK`.
pub fn csf_ricci_eigenvalue_rate(geom: &AnnulusGeometry, curvature: f64) -> Result<f64, FlowError> {
    let mode = simple_ground(&annulus_spectrum(geom, SEARCH_ORDERS, SEARCH_BRANCHES)?)?;
    let boundary = -rellich_boundary_integral(&mode, geom, 1.0 / geom.inner(), -1.0 / geom.outer())?;
    Ok(boundary + 2.0 * mode.eigenvalue() * curvature)
}

/// Whether the deficit is below the small-deficit threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeficitRegime {
    Small,
    Large,
}

impl DeficitRegime {
    pub fn label(&self) -> &'static str {
        match self {
            DeficitRegime::Small => "small-deficit regime",
            DeficitRegime::Large => "large-deficit regime",
        }
    }
}

/// Placeholder threshold separating the regimes; no certified value exists.
pub const DEFAULT_SMALL_DEFICIT_THRESHOLD: f64 = 1e-2;

/// Annulus-versus-cylinder comparison for one geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralReport {
    pub a: f64,
    pub b: f64,
    pub energy: f64,
    pub modulus: f64,
    pub deficit: f64,
    pub sqrt_deficit: f64,
    pub lambda_ann: f64,
    pub ground_order: u32,
    pub ground_branch: u32,
    /// `(π/h)²`.
    pub lambda_cyl: f64,
    /// `λ_ann − λ_cyl`.
    pub gap: f64,
    pub regime: DeficitRegime,
    pub threshold: f64,
    /// `|∫_{∂A} V (∂_ν φ)²|` with the flow speeds as weights.
    pub boundary_term: f64,
    /// `‖V‖_∞` of those weights.
    pub weight_sup: f64,
    pub sqrt_energy: f64,
    /// `inf |∂_ν u|` over the boundary.
    pub nondegeneracy: f64,
    pub dirichlet_residual: f64,
    /// Max radial ODE residual over ten interior radii.
    pub ode_residual: f64,
}

pub fn gap_report(geom: &AnnulusGeometry, threshold: f64) -> Result<SpectralReport, FlowError> {
    let spectrum = annulus_spectrum(geom, SEARCH_ORDERS, SEARCH_BRANCHES)?;
    let mode = *spectrum.ground();
    let profile = CapacityProfile::of(geom);
    let lambda_cyl = cylinder_eigenvalue_exact(profile.modulus, 1, 0);
    let (a, b) = (geom.inner(), geom.outer());
    let boundary = rellich_boundary_integral(&mode, geom, 1.0 / a, -1.0 / b)?;
    let mut ode_residual: f64 = 0.0;
    for i in 1..=10 {
        let r = a + (b - a) * i as f64 / 11.0;
        ode_residual = ode_residual.max(mode.ode_residual(r)?.abs());
    }
    let lambda_ann = mode.eigenvalue();
    Ok(SpectralReport {
        a,
        b,
        energy: profile.energy,
        modulus: profile.modulus,
        deficit: profile.deficit,
        sqrt_deficit: profile.deficit.sqrt(),
        lambda_ann,
        ground_order: mode.order(),
        ground_branch: mode.branch(),
        lambda_cyl,
        gap: lambda_ann - lambda_cyl,
        regime: if profile.deficit <= threshold {
            DeficitRegime::Small
        } else {
            DeficitRegime::Large
        },
        threshold,
        boundary_term: boundary.abs(),
        weight_sup: (1.0 / a).max(1.0 / b),
        sqrt_energy: profile.energy.sqrt(),
        nondegeneracy: profile.nondegeneracy(),
        dirichlet_residual: mode.dirichlet_residual(geom)?,
        ode_residual,
    })
}
