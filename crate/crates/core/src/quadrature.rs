//! Globally adaptive Gauss-Kronrod (7, 15) quadrature.
//!
//! The phase-space integrands of the Dicke density of states behave like
//! `√(y − a)` at both ends of their support. [`integrate_sqrt_endpoints`]
//! splits the interval in half and substitutes `y = a + t²`, `y = b − t²`
//! on the two halves, which leaves a smooth integrand for the Kronrod rule.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(centre - dx) + f(centre + dx);
        kron += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the per-panel Kronrod-Gauss differences.
    pub error: f64,
    pub panels: usize,
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, max_panels: usize) -> Result<Integral> {
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0, panels: 0 });
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(&f, a, b);
    let mut error = first.error;
    heap.push(first);
    while error > tol {
        if heap.len() >= max_panels {
            return Err(Error::NoConvergence {
                context: format!("quadrature on [{a}, {b}]: error {error:e} after {max_panels} panels"),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point.
            heap.push(Panel { error: 0.0, ..worst });
            error -= worst.error;
            continue;
        }
        let left = kronrod(&f, worst.a, mid);
        let right = kronrod(&f, mid, worst.b);
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if heap.len() % 64 == 0 {
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(Integral { value, error, panels: heap.len() })
}

/// Integrates `f` over `[a, b]` when `f` may have square-root behavior at
/// either endpoint.
pub fn integrate_sqrt_endpoints<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Integral> {
    if b <= a {
        return Ok(Integral { value: 0.0, error: 0.0, panels: 0 });
    }
    let half = 0.5 * (b - a);
    let t_max = half.sqrt();
    let lower = integrate(|t| 2.0 * t * f(a + t * t), 0.0, t_max, 0.5 * tol, 4000)?;
    let upper = integrate(|t| 2.0 * t * f(b - t * t), 0.0, t_max, 0.5 * tol, 4000)?;
    Ok(Integral {
        value: lower.value + upper.value,
        error: lower.error + upper.error,
        panels: lower.panels + upper.panels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x| 3.0 * x * x + 1.0, -1.0, 2.0, 1e-14, 10).unwrap();
        assert!((r.value - 12.0).abs() < 1e-13);
        assert_eq!(r.panels, 1);
    }

    #[test]
    fn smooth_transcendental() {
        let r = integrate(f64::sin, 0.0, std::f64::consts::PI, 1e-13, 100).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn sqrt_edges_are_resolved() {
        // ∫₀¹ √(x(1−x)) dx = π/8
        let r = integrate_sqrt_endpoints(|x: f64| (x * (1.0 - x)).max(0.0).sqrt(), 0.0, 1.0, 1e-13).unwrap();
        assert!((r.value - std::f64::consts::PI / 8.0).abs() < 1e-13);
        // ∫₀¹ arccos(√x) dx = π/4
        let r = integrate_sqrt_endpoints(|x: f64| x.max(0.0).sqrt().acos(), 0.0, 1.0, 1e-13).unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_4).abs() < 1e-13);
    }

    #[test]
    fn log_singularity_converges() {
        // ∫₀¹ ln x dx = −1, singular integrand handled by subdivision.
        let r = integrate(|x: f64| x.ln(), 0.0, 1.0, 1e-10, 2000).unwrap();
        assert!((r.value + 1.0).abs() < 1e-10);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate(|x| x, 1.0, 1.0, 1e-9, 10).unwrap().value, 0.0);
        assert_eq!(integrate_sqrt_endpoints(|x| x, 1.0, 0.5, 1e-9).unwrap().value, 0.0);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-9, 1.0, 1e-15, 20).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }
}
