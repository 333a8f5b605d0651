//! Globally adaptive Gauss-Legendre quadrature.
//!
//! Each segment is integrated with a fixed-order Gauss-Legendre rule on the
//! whole segment and on its two halves; the difference is the error
//! estimate. The segment with the largest estimate is bisected until the
//! summed estimate falls below the requested tolerance. Segments are held in
//! a heap ordered by error, so the refinement order (and therefore the result)
//! is fully deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 12;
const DEFAULT_MAX_SEGMENTS: usize = 6000;

/// Absolute and relative tolerance; the integral is accepted once the error
/// estimate drops below `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    pub fn absolute(abs: f64) -> Self {
        Tolerance { abs, rel: 0.0 }
    }

    pub fn relative(rel: f64) -> Self {
        Tolerance { abs: 0.0, rel }
    }

    fn bound(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed once by Newton
/// iteration on the Legendre polynomial.
fn gauss_legendre() -> &'static ([f64; ORDER], [f64; ORDER]) {
    static RULE: OnceLock<([f64; ORDER], [f64; ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

fn rule<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gauss_legendre();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

struct Segment {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    error: f64,
}

impl Segment {
    fn new<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, whole: f64) -> Self {
        let m = 0.5 * (a + b);
        let left = rule(f, a, m);
        let right = rule(f, m, b);
        let error = (whole - left - right).abs();
        Segment {
            a,
            b,
            left,
            right,
            error,
        }
    }

    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Integrate `f` over consecutive panels `points[0]..points[1]..` with a
/// single global error budget.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    tol: Tolerance,
) -> Result<Quadrature> {
    integrate_panels_limited(&mut f, points, tol, segment_budget(points.len()))
}

fn segment_budget(panels: usize) -> usize {
    DEFAULT_MAX_SEGMENTS.max(8 * panels)
}

fn integrate_panels_limited<F: FnMut(f64) -> f64>(
    f: &mut F,
    points: &[f64],
    tol: Tolerance,
    max_segments: usize,
) -> Result<Quadrature> {
    if points.len() < 2 {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let per_rule = ORDER;
    let mut evaluations = 0;
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            if b == a {
                continue;
            }
            return Err(Error::Domain(format!(
                "integration panel [{a}, {b}] is reversed"
            )));
        }
        let whole = rule(f, a, b);
        heap.push(Segment::new(f, a, b, whole));
        evaluations += 3 * per_rule;
    }
    let (mut value, mut error) = totals(&heap);
    let mut since_resync = 0;
    loop {
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::non_convergence(
                "quadrature",
                "integrand produced a non-finite value",
            ));
        }
        if error <= tol.bound(value) {
            let (v, e) = totals(&heap);
            if e <= tol.bound(v) {
                return Ok(Quadrature {
                    value: v,
                    error: e,
                    evaluations,
                });
            }
            value = v;
            error = e;
        }
        if heap.len() >= max_segments {
            return Err(Error::non_convergence(
                "quadrature",
                format!("error estimate {error:e} after {max_segments} segments"),
            ));
        }
        let worst = heap.pop().expect("heap is nonempty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // Segment can no longer be split in floating point.
            return Err(Error::non_convergence(
                "quadrature",
                format!("segment [{}, {}] exhausted machine precision", worst.a, worst.b),
            ));
        }
        let left = Segment::new(f, worst.a, m, worst.left);
        let right = Segment::new(f, m, worst.b, worst.right);
        value += left.value() + right.value() - worst.value();
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        evaluations += 4 * per_rule;
        since_resync += 1;
        if since_resync == 256 {
            (value, error) = totals(&heap);
            since_resync = 0;
        }
    }
}

fn totals(heap: &BinaryHeap<Segment>) -> (f64, f64) {
    // Sum in a fixed order (by left endpoint) so the result does not depend on
    // heap layout.
    let mut segs: Vec<&Segment> = heap.iter().collect();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    segs.iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value(), e + s.error))
}

pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Quadrature> {
    integrate_panels(f, &[a, b], tol)
}

/// Integrate over `[points[0], inf)`. The finite panels are taken as given;
/// the last leg `[points[last], inf)` is mapped onto `[0, 1)` by
/// `x = x0 + scale * u / (1 - u)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    scale: f64,
    tol: Tolerance,
) -> Result<Quadrature> {
    assert!(!points.is_empty(), "need a lower limit");
    if !(scale > 0.0) {
        return Err(Error::Domain(format!("tail scale must be positive, got {scale}")));
    }
    let x0 = *points.last().unwrap();
    let n_finite = points.len() - 1;
    // Variables in [0, n_finite) are the finite panels rescaled to unit
    // length; [n_finite, n_finite + 1) is the mapped tail. One global
    // error budget covers both.
    let mut mapped = |s: f64| -> f64 {
        if (s as usize) < n_finite {
            let i = s as usize;
            let t = s - i as f64;
            let (a, b) = (points[i], points[i + 1]);
            (b - a) * f(a + t * (b - a))
        } else {
            let u = s - n_finite as f64;
            let one_minus = 1.0 - u;
            if one_minus <= 0.0 {
                return 0.0;
            }
            let x = x0 + scale * u / one_minus;
            let jac = scale / (one_minus * one_minus);
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v * jac
            }
        }
    };
    let knots: Vec<f64> = (0..=n_finite + 1).map(|i| i as f64).collect();
    integrate_panels_limited(&mut mapped, &knots, tol, segment_budget(knots.len()))
}
