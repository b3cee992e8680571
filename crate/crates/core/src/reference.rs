//! Reference values for the unit-inner-radius annulus table and
//! the conformal cylinder sweep, as printed (rounded).

/// One row of the annulus table, `a = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusRow {
    pub b: f64,
    pub energy: f64,
    pub deficit: f64,
    pub sqrt_deficit: f64,
    pub lambda_ann: f64,
    pub lambda_cyl: f64,
}

pub const ANNULUS_TABLE: [AnnulusRow; 8] = [
    AnnulusRow { b: 5.0, energy: 1.95198, deficit: 1.16432, sqrt_deficit: 1.07904, lambda_ann: 0.58246, lambda_cyl: 150.42198 },
    AnnulusRow { b: 10.0, energy: 1.36438, deficit: 0.58662, sqrt_deficit: 0.76591, lambda_ann: 0.10982, lambda_cyl: 73.48998 },
    AnnulusRow { b: 20.0, energy: 1.04869, deficit: 0.34919, sqrt_deficit: 0.59092, lambda_ann: 0.02348, lambda_cyl: 43.41637 },
    AnnulusRow { b: 50.0, energy: 0.80306, deficit: 0.20520, sqrt_deficit: 0.45299, lambda_ann: 0.00333, lambda_cyl: 25.45990 },
    AnnulusRow { b: 100.0, energy: 0.68219, deficit: 0.14812, sqrt_deficit: 0.38486, lambda_ann: 0.00078, lambda_cyl: 18.37249 },
    AnnulusRow { b: 200.0, energy: 0.59294, deficit: 0.11191, sqrt_deficit: 0.33453, lambda_ann: 0.00019, lambda_cyl: 13.87981 },
    AnnulusRow { b: 500.0, energy: 0.50552, deficit: 0.08134, sqrt_deficit: 0.28521, lambda_ann: 0.00003, lambda_cyl: 10.08863 },
    AnnulusRow { b: 1000.0, energy: 0.45479, deficit: 0.06584, sqrt_deficit: 0.25659, lambda_ann: 0.00006, lambda_cyl: 8.16555 },
];

/// One row of the cylinder sweep, `h = 1`, `f₀ = sin(πx) cos θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderRow {
    pub epsilon: f64,
    pub lambda_num: f64,
    pub lambda_cont: f64,
    pub lambda_cyl: f64,
    pub offset: f64,
    pub deficit: f64,
    pub sqrt_deficit: f64,
}

pub const CYLINDER_TABLE: [CylinderRow; 6] = [
    CylinderRow { epsilon: 1e-4, lambda_num: 2786.058246, lambda_cont: 9.863675, lambda_cyl: 9.869604, offset: -0.005930, deficit: 1.623593e-7, sqrt_deficit: 0.000403 },
    CylinderRow { epsilon: 2e-4, lambda_num: 2788.056992, lambda_cont: 9.863670, lambda_cyl: 9.869604, offset: -0.005934, deficit: 6.494371e-7, sqrt_deficit: 0.000806 },
    CylinderRow { epsilon: 5e-4, lambda_num: 2788.048215, lambda_cont: 9.863639, lambda_cyl: 9.869604, offset: -0.005965, deficit: 4.058982e-6, sqrt_deficit: 0.002015 },
    CylinderRow { epsilon: 1e-3, lambda_num: 2788.016784, lambda_cont: 9.863529, lambda_cyl: 9.869604, offset: -0.006076, deficit: 1.623593e-5, sqrt_deficit: 0.004029 },
    CylinderRow { epsilon: 2e-3, lambda_num: 2787.891572, lambda_cont: 9.863085, lambda_cyl: 9.869604, offset: -0.006519, deficit: 6.494381e-5, sqrt_deficit: 0.008059 },
    CylinderRow { epsilon: 5e-3, lambda_num: 2787.017380, lambda_cont: 9.859992, lambda_cyl: 9.869604, offset: -0.009612, deficit: 4.059022e-4, sqrt_deficit: 0.020147 },
];

/// Outer radii of the annulus table.
pub fn table_outer_radii() -> [f64; 8] {
    ANNULUS_TABLE.map(|r| r.b)
}

/// Amplitudes of the cylinder sweep.
pub fn sweep_amplitudes() -> [f64; 6] {
    CYLINDER_TABLE.map(|r| r.epsilon)
}
