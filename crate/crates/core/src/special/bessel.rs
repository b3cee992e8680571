//! Bessel functions `J_n`, `Y_n` of integer order.
//!
//! Strategy by argument:
//! - `x < 1`: ascending series for `J_n`.
//! - `x ≤ 25` (or `n ≥ x`): Miller's backward recurrence for the whole
//!   sequence `J_0, J_1, ...`, normalized with `J_0 + 2 Σ J_{2k} = 1`.
//!   `Y_0` and `Y_1` follow from the Neumann series over the same
//!   sequence.
//! - `x > 25`: Hankel asymptotic expansions for orders 0 and 1, then
//!   forward recurrence (stable for `Y_n` always, for `J_n` while `n < x`).
//!
//! `Y_n` for `n ≥ 2` always comes from forward recurrence.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::SpecialError;

pub const MAX_ORDER: u32 = 50;

/// Smallest argument accepted by `Y_n`; below it the logarithmic
/// singularity dominates and callers never need it.
pub const MIN_Y_ARGUMENT: f64 = 1e-3;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HANKEL_THRESHOLD: f64 = 25.0;

/// Integer Bessel order in `0..=50`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BesselOrder(u32);

impl BesselOrder {
    pub fn new(n: u32) -> Result<Self, SpecialError> {
        if n > MAX_ORDER {
            return Err(SpecialError::OrderOutOfRange(n));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }
}

impl TryFrom<u32> for BesselOrder {
    type Error = SpecialError;
    fn try_from(n: u32) -> Result<Self, SpecialError> {
        Self::new(n)
    }
}

fn check_j_arg(x: f64) -> Result<(), SpecialError> {
    if !x.is_finite() {
        return Err(SpecialError::NonFinite(x));
    }
    if x < 0.0 {
        return Err(SpecialError::NonPositive(x));
    }
    Ok(())
}

fn check_y_arg(x: f64) -> Result<(), SpecialError> {
    if !x.is_finite() {
        return Err(SpecialError::NonFinite(x));
    }
    if x <= 0.0 {
        return Err(SpecialError::NonPositive(x));
    }
    if x < MIN_Y_ARGUMENT {
        return Err(SpecialError::ArgumentTooSmall {
            x,
            min: MIN_Y_ARGUMENT,
        });
    }
    Ok(())
}

/// `J_n(x)` for `x ≥ 0`.
pub fn bessel_j(n: BesselOrder, x: f64) -> Result<f64, SpecialError> {
    check_j_arg(x)?;
    Ok(j_values(n.index(), x)[n.index()])
}

/// `Y_n(x)` for `x ≥ 1e−3`.
pub fn bessel_y(n: BesselOrder, x: f64) -> Result<f64, SpecialError> {
    check_y_arg(x)?;
    let y = y_values(n.index(), x)[n.index()];
    if !y.is_finite() {
        return Err(SpecialError::Overflow { n: n.get(), x });
    }
    Ok(y)
}

/// `J_n'(x)` via `(J_{n−1} − J_{n+1})/2`, with `J_0' = −J_1`.
pub fn bessel_j_prime(n: BesselOrder, x: f64) -> Result<f64, SpecialError> {
    check_j_arg(x)?;
    let j = j_values(n.index() + 1, x);
    Ok(first_derivative(&j, n.index()))
}

/// `Y_n'(x)` via `(Y_{n−1} − Y_{n+1})/2`, with `Y_0' = −Y_1`.
pub fn bessel_y_prime(n: BesselOrder, x: f64) -> Result<f64, SpecialError> {
    check_y_arg(x)?;
    let y = y_values(n.index() + 1, x);
    let d = first_derivative(&y, n.index());
    if !d.is_finite() {
        return Err(SpecialError::Overflow { n: n.get(), x });
    }
    Ok(d)
}

/// Values and first two derivatives of `J_n` and `Y_n` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselValues {
    pub j: f64,
    pub j_prime: f64,
    pub j_second: f64,
    pub y: f64,
    pub y_prime: f64,
    pub y_second: f64,
}

/// All of [`BesselValues`] from one pair of sequence evaluations.
///
/// Second derivatives use `C_n'' = (C_{n−2} − 2C_n + C_{n+2})/4` with
/// `C_{−m} = (−1)^m C_m`, so they do not rely on the Bessel equation.
pub fn bessel_jy_with_derivatives(n: BesselOrder, x: f64) -> Result<BesselValues, SpecialError> {
    check_y_arg(x)?;
    let idx = n.index();
    let (j, y) = jy_values(idx + 2, x);
    let out = BesselValues {
        j: j[idx],
        j_prime: first_derivative(&j, idx),
        j_second: second_derivative(&j, idx),
        y: y[idx],
        y_prime: first_derivative(&y, idx),
        y_second: second_derivative(&y, idx),
    };
    if !(out.y.is_finite() && out.y_prime.is_finite() && out.y_second.is_finite()) {
        return Err(SpecialError::Overflow { n: n.get(), x });
    }
    Ok(out)
}

fn signed_order(c: &[f64], m: isize) -> f64 {
    let k = m.unsigned_abs();
    if m < 0 && k % 2 == 1 {
        -c[k]
    } else {
        c[k]
    }
}

fn first_derivative(c: &[f64], n: usize) -> f64 {
    if n == 0 {
        -c[1]
    } else {
        0.5 * (c[n - 1] - c[n + 1])
    }
}

fn second_derivative(c: &[f64], n: usize) -> f64 {
    let n = n as isize;
    0.25 * (signed_order(c, n - 2) - 2.0 * c[n as usize] + c[(n + 2) as usize])
}

/// `J_0(x), ..., J_nmax(x)` for finite `x ≥ 0`. No order limit applies
/// to this internal routine.
pub(crate) fn j_values(nmax: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut v = vec![0.0; nmax + 1];
        v[0] = 1.0;
        return v;
    }
    if x < 1.0 {
        return (0..=nmax).map(|n| j_series(n, x)).collect();
    }
    if x <= HANKEL_THRESHOLD || nmax as f64 >= x {
        let mut seq = miller_sequence(nmax, x);
        seq.truncate(nmax + 1);
        return seq;
    }
    let h = hankel_01(x);
    forward(h.j0, h.j1, nmax, x)
}

/// `Y_0(x), ..., Y_nmax(x)` for `x > 0`.
pub(crate) fn y_values(nmax: usize, x: f64) -> Vec<f64> {
    jy_values(nmax, x).1
}

pub(crate) fn jy_values(nmax: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    if x <= HANKEL_THRESHOLD {
        let seq = miller_sequence(nmax, x);
        let (y0, y1) = neumann_y01(&seq, x);
        let j = if x < 1.0 {
            (0..=nmax).map(|n| j_series(n, x)).collect()
        } else {
            seq[..=nmax].to_vec()
        };
        (j, forward(y0, y1, nmax, x))
    } else {
        let h = hankel_01(x);
        let j = if (nmax as f64) < x {
            forward(h.j0, h.j1, nmax, x)
        } else {
            let mut s = miller_sequence(nmax, x);
            s.truncate(nmax + 1);
            s
        };
        (j, forward(h.y0, h.y1, nmax, x))
    }
}

fn forward(c0: f64, c1: f64, nmax: usize, x: f64) -> Vec<f64> {
    let mut v = Vec::with_capacity(nmax + 1);
    v.push(c0);
    if nmax >= 1 {
        v.push(c1);
    }
    for k in 1..nmax {
        let next = (2.0 * k as f64 / x) * v[k] - v[k - 1];
        v.push(next);
    }
    v
}

/// Ascending series `Σ (−1)^m (x/2)^{2m+n} / (m! (m+n)!)`.
fn j_series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for i in 1..=n {
        lead *= half / i as f64;
    }
    if lead == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..200 {
        term *= q / (m as f64 * (m + n) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// Normalized backward-recurrence sequence `J_0(x) ... J_M(x)` with
/// `M ≥ nmax` large enough that the discarded tail is below roundoff.
fn miller_sequence(nmax: usize, x: f64) -> Vec<f64> {
    let reach = (nmax as f64).max(x) + 14.0 * x.cbrt() + 30.0;
    let mut top = reach.ceil() as usize;
    top += top % 2;
    let mut p = vec![0.0; top + 2];
    p[top] = 1.0;
    for k in (1..=top).rev() {
        p[k - 1] = (2.0 * k as f64 / x) * p[k] - p[k + 1];
        if p[k - 1].abs() > 1e250 {
            for v in &mut p[k - 1..=top] {
                *v *= 1e-250;
            }
        }
    }
    let sum = p[0] + 2.0 * p.iter().skip(2).step_by(2).sum::<f64>();
    p.truncate(top + 1);
    for v in &mut p {
        *v /= sum;
    }
    p
}

/// `Y_0`, `Y_1` from the Neumann series over a normalized `J` sequence:
///
/// `(π/2) Y_0 = (ln(x/2) + γ) J_0 − 2 Σ_{k≥1} (−1)^k J_{2k}/k`
///
/// `(π/2) Y_1 = (ln(x/2) + γ) J_1 − J_0/x + Σ_{k≥1} (−1)^k (J_{2k−1} − J_{2k+1})/k`
fn neumann_y01(j: &[f64], x: f64) -> (f64, f64) {
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * j[2 * k] / k as f64;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
        k += 1;
    }
    let y0 = (2.0 / PI) * (log_term * j[0] - 2.0 * s0);
    let y1 = (2.0 / PI) * (log_term * j[1] - j[0] / x + s1);
    (y0, y1)
}

struct Hankel01 {
    j0: f64,
    j1: f64,
    y0: f64,
    y1: f64,
}

/// Asymptotic `P(ν, x)`, `Q(ν, x)` for `ν ∈ {0, 1}`, summed until the
/// terms stop decreasing.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() && k > 2 {
            break;
        }
        term = next;
        // k ≡ 1 mod 4 → +Q, k ≡ 2 → −P, k ≡ 3 → −Q, k ≡ 0 → +P.
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    (p, q)
}

fn hankel_01(x: f64) -> Hankel01 {
    let (s, c) = x.sin_cos();
    let amp = (2.0 / (PI * x)).sqrt();
    // χ₀ = x − π/4, χ₁ = x − 3π/4.
    let cos0 = FRAC_1_SQRT_2 * (c + s);
    let sin0 = FRAC_1_SQRT_2 * (s - c);
    let cos1 = FRAC_1_SQRT_2 * (s - c);
    let sin1 = -FRAC_1_SQRT_2 * (s + c);
    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(1.0, x);
    Hankel01 {
        j0: amp * (p0 * cos0 - q0 * sin0),
        y0: amp * (p0 * sin0 + q0 * cos0),
        j1: amp * (p1 * cos1 - q1 * sin1),
        y1: amp * (p1 * sin1 + q1 * cos1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(n: u32) -> BesselOrder {
        BesselOrder::new(n).unwrap()
    }

    #[test]
    fn order_range() {
        assert!(BesselOrder::new(50).is_ok());
        assert_eq!(BesselOrder::new(51), Err(SpecialError::OrderOutOfRange(51)));
    }

    #[test]
    fn j0_near_zero() {
        assert_eq!(bessel_j(ord(0), 1e-300).unwrap(), 1.0);
        assert_eq!(bessel_j(ord(0), 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(ord(3), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(bessel_j(ord(0), f64::NAN), Err(SpecialError::NonFinite(_))));
        assert!(matches!(bessel_j(ord(0), -1.0), Err(SpecialError::NonPositive(_))));
        assert!(matches!(bessel_y(ord(0), 0.0), Err(SpecialError::NonPositive(_))));
        assert!(matches!(bessel_y(ord(0), 5e-4), Err(SpecialError::ArgumentTooSmall { .. })));
        let y = bessel_y(ord(50), 1e-3).unwrap();
        assert!(y.is_finite() && y < -1e200);
    }

    #[test]
    fn branches_agree_at_threshold() {
        // Miller/Neumann just below, Hankel just above.
        for n in 0..4 {
            let below_j = j_values(n, HANKEL_THRESHOLD)[n];
            let above_j = j_values(n, HANKEL_THRESHOLD + 1e-12)[n];
            // The 1e-12 offset alone moves the value by about 1.3e-13.
            assert!((below_j - above_j).abs() < 5e-13, "J_{n}");
            let below_y = y_values(n, HANKEL_THRESHOLD)[n];
            let above_y = y_values(n, HANKEL_THRESHOLD + 1e-12)[n];
            assert!((below_y - above_y).abs() < 5e-13, "Y_{n}");
        }
        let below = j_values(2, 1.0 - 1e-15)[2];
        let above = j_values(2, 1.0)[2];
        assert!((below - above).abs() < 1e-15);
    }

    #[test]
    fn second_derivative_matches_bessel_equation() {
        for &x in &[0.7, 3.0, 18.0, 40.0] {
            for n in 0..4u32 {
                let v = bessel_jy_with_derivatives(ord(n), x).unwrap();
                let nn = (n * n) as f64;
                let rj = x * x * v.j_second + x * v.j_prime + (x * x - nn) * v.j;
                let ry = x * x * v.y_second + x * v.y_prime + (x * x - nn) * v.y;
                assert!(rj.abs() < 1e-11 * x * x, "J n={n} x={x}: {rj}");
                assert!(ry.abs() < 1e-11 * x * x, "Y n={n} x={x}: {ry}");
            }
        }
    }
}
