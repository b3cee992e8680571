//! Roots of `F_n(k) = J_n(ka) Y_n(kb) − J_n(kb) Y_n(ka)`.

use std::f64::consts::PI;

use super::bessel::{jy_values, BesselOrder, MIN_Y_ARGUMENT};
use super::SpecialError;

/// A located root together with the sign-change bracket that certifies it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub k: f64,
    pub lo: f64,
    pub hi: f64,
}

impl RootBracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn check_radius(r: f64) -> Result<(), SpecialError> {
    if !r.is_finite() {
        return Err(SpecialError::NonFinite(r));
    }
    if r <= 0.0 {
        return Err(SpecialError::NonPositive(r));
    }
    Ok(())
}

/// `F_n(k; a, b)`. Any positive radii are accepted, so the function is
/// antisymmetric in `(a, b)` and vanishes at `a = b`.
pub fn cross_product(n: BesselOrder, k: f64, a: f64, b: f64) -> Result<f64, SpecialError> {
    check_radius(a)?;
    check_radius(b)?;
    check_radius(k)?;
    let min = (k * a).min(k * b);
    if min < MIN_Y_ARGUMENT {
        return Err(SpecialError::ArgumentTooSmall {
            x: min,
            min: MIN_Y_ARGUMENT,
        });
    }
    Ok(eval(n.index(), k, a, b))
}

fn eval(n: usize, k: f64, a: f64, b: f64) -> f64 {
    let (ja, ya) = jy_values(n, k * a);
    let (jb, yb) = jy_values(n, k * b);
    ja[n] * yb[n] - jb[n] * ya[n]
}

/// The first `count` positive roots of `F_n`, strictly increasing.
pub fn cross_product_roots(n: BesselOrder, a: f64, b: f64, count: usize) -> Result<Vec<f64>, SpecialError> {
    Ok(cross_product_brackets(n, a, b, count)?.into_iter().map(|r| r.k).collect())
}

/// Lower bound for the first root: the mode-`n` eigenvalue of the annulus
/// exceeds that of the disk of radius `b` (`k > j_{n,1}/b`, with
/// `j_{n,1} > sqrt(n(n+2))`), and the weighted Wirtinger inequality on
/// `(a, b)` gives `k² > (a/b)(π/(b−a))² + n²/b²`.
fn first_root_lower_bound(n: usize, a: f64, b: f64) -> f64 {
    let nf = n as f64;
    let disk_zero = if n == 0 { 2.404 } else { (nf * (nf + 2.0)).sqrt() };
    let strip = (a / b) * (PI / (b - a)).powi(2) + (nf / b).powi(2);
    (disk_zero / b).max(strip.sqrt())
}

/// Scan upward from a certified lower bound in steps of a quarter of the
/// asymptotic root spacing `π/(b−a)` (capped relative to the start), then
/// shrink every sign change to width `max(1e-13, 4 ulp)` and polish with
/// one secant step kept inside the bracket.
pub fn cross_product_brackets(
    n: BesselOrder,
    a: f64,
    b: f64,
    count: usize,
) -> Result<Vec<RootBracket>, SpecialError> {
    check_radius(a)?;
    check_radius(b)?;
    if !(a < b) {
        return Err(SpecialError::InvalidRadii { a, b });
    }
    let idx = n.index();
    let spacing = PI / (b - a);
    let mut k = first_root_lower_bound(idx, a, b) * (1.0 - 1e-6);
    if k * a < MIN_Y_ARGUMENT {
        return Err(SpecialError::ScanStartTooSmall {
            n: n.get(),
            min: MIN_Y_ARGUMENT,
        });
    }
    let k_start = k;
    let step = spacing.min(0.1 * k_start.max(1.0)) / 4.0;
    let k_limit = k_start + (2 * count + 8) as f64 * spacing + 4.0 * idx as f64 / a;

    let f = |k: f64| eval(idx, k, a, b);
    let mut roots = Vec::with_capacity(count);
    let mut fk = f(k);
    while roots.len() < count {
        if k > k_limit || !fk.is_finite() {
            return Err(SpecialError::BracketNotFound {
                n: n.get(),
                k_lo: k_start,
                k_hi: k.min(k_limit),
                found: roots.len(),
                wanted: count,
            });
        }
        let k_next = k + step;
        let f_next = f(k_next);
        if fk == 0.0 {
            roots.push(RootBracket { k, lo: k, hi: k });
        } else if f_next != 0.0 && fk.signum() != f_next.signum() {
            roots.push(refine(&f, k, fk, k_next, f_next));
        }
        k = k_next;
        fk = f_next;
    }
    Ok(roots)
}

/// Illinois-modified regula falsi. The stale endpoint's value is halved
/// when the same side moves twice, so both ends converge and the bracket
/// itself collapses; any two steps that fail to halve the width are
/// followed by a bisection.
fn refine(f: &impl Fn(f64) -> f64, mut lo: f64, mut flo: f64, mut hi: f64, mut fhi: f64) -> RootBracket {
    let target = |hi: f64| (4.0 * f64::EPSILON * hi.abs()).max(1e-13);
    let mut side = 0i8;
    let mut width_two_ago = f64::INFINITY;
    let mut width_one_ago = hi - lo;
    for _ in 0..400 {
        let width = hi - lo;
        if width <= target(hi) {
            break;
        }
        let mut x = (lo * fhi - hi * flo) / (fhi - flo);
        if !(x > lo && x < hi) || width > 0.5 * width_two_ago {
            x = 0.5 * (lo + hi);
            side = 0;
        }
        if x <= lo || x >= hi {
            break;
        }
        let fx = f(x);
        if fx == 0.0 {
            return RootBracket { k: x, lo: x, hi: x };
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
        width_two_ago = width_one_ago;
        width_one_ago = width;
    }
    // The endpoint values are only scaled copies after Illinois steps, so
    // the last interpolation uses fresh evaluations.
    let (flo, fhi) = (f(lo), f(hi));
    let secant = lo - flo * (hi - lo) / (fhi - flo);
    let k = if secant.is_finite() && secant >= lo && secant <= hi {
        secant
    } else {
        0.5 * (lo + hi)
    };
    RootBracket { k, lo, hi }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(n: u32) -> BesselOrder {
        BesselOrder::new(n).unwrap()
    }

    #[test]
    fn identical_radii_vanish() {
        for n in 0..4 {
            assert_eq!(cross_product(ord(n), 1.7, 2.0, 2.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn antisymmetric() {
        let f = cross_product(ord(2), 1.3, 1.0, 3.0).unwrap();
        let g = cross_product(ord(2), 1.3, 3.0, 1.0).unwrap();
        assert_eq!(f, -g);
    }

    #[test]
    fn invalid_radii() {
        assert!(matches!(
            cross_product_roots(ord(0), 2.0, 1.0, 1),
            Err(SpecialError::InvalidRadii { .. })
        ));
        assert!(cross_product(ord(0), 1.0, -1.0, 2.0).is_err());
    }

    #[test]
    fn brackets_are_tight_and_ordered() {
        let roots = cross_product_brackets(ord(1), 1.0, 3.0, 4).unwrap();
        for w in roots.windows(2) {
            assert!(w[0].k < w[1].k);
        }
        for r in &roots {
            assert!(r.width() <= 1e-12);
            assert!(r.lo <= r.k && r.k <= r.hi);
        }
    }

    #[test]
    fn lower_bound_is_below_first_root() {
        for &(a, b) in &[(1.0, 5.0), (1.0, 1000.0), (1.0, 1.0001), (0.3, 0.5)] {
            for n in [0usize, 1, 5] {
                let root = cross_product_roots(ord(n as u32), a, b, 1).unwrap()[0];
                assert!(first_root_lower_bound(n, a, b) < root);
            }
        }
    }
}
