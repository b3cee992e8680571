//! Integer-order Bessel functions and roots of the annulus cross product.

mod bessel;
mod roots;

pub use bessel::{
    bessel_j, bessel_j_prime, bessel_jy_with_derivatives, bessel_y, bessel_y_prime, BesselOrder,
    BesselValues, MAX_ORDER, MIN_Y_ARGUMENT,
};
pub use roots::{cross_product, cross_product_brackets, cross_product_roots, RootBracket};


use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("Bessel order {0} outside the supported range 0..={max}", max = MAX_ORDER)]
    OrderOutOfRange(u32),
    #[error("non-finite argument {0}")]
    NonFinite(f64),
    #[error("argument {0} must be positive")]
    NonPositive(f64),
    #[error("argument {x} below the supported minimum {min} for Y_n")]
    ArgumentTooSmall { x: f64, min: f64 },
    #[error("Y_{n}({x}) overflows")]
    Overflow { n: u32, x: f64 },
    #[error("radii must satisfy 0 < a < b, got a = {a}, b = {b}")]
    InvalidRadii { a: f64, b: f64 },
    #[error("no sign change of F_{n} found on k in [{k_lo}, {k_hi}] ({found} of {wanted} roots located)")]
    BracketNotFound {
        n: u32,
        k_lo: f64,
        k_hi: f64,
        found: usize,
        wanted: usize,
    },
    #[error("root scan for F_{n} would start below the Y_n argument floor (k·a < {min})")]
    ScanStartTooSmall { n: u32, min: f64 },
}
