//! Adaptive quadrature on finite and semi-infinite intervals.
//!
//! Globally adaptive bisection driven by the 7-point Gauss / 15-point
//! Kronrod pair: starting from a fixed uniform partition, the segment with
//! the largest error estimate is split until the summed error meets
//! `max(rel_tol * |integral|, abs_tol)`. A finite upper bound is integrated
//! directly; `+inf` goes through the rational map `x = lo + t/(1-t)` onto
//! `[0, 1)`.

use crate::error::{Error, Result};

/// Default relative tolerance, one order tighter than the Monte Carlo
/// comparison tolerances so quadrature error never shows up there.
pub const DEFAULT_REL_TOL: f64 = 1e-8;
/// Default absolute tolerance floor.
pub const DEFAULT_ABS_TOL: f64 = 1e-14;

const MAX_SEGMENTS: usize = 4096;
// Initial uniform partition; a single pass over the whole interval can rate
// a locally concentrated integrand as converged before ever sampling it.
const INITIAL_SEGMENTS: usize = 16;

// 15-point Kronrod abscissae on [-1, 1] (positive half), with the embedded
// 7-point Gauss rule on the odd-indexed nodes. QUADPACK values.
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

#[derive(Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

/// One Gauss-Kronrod pass over `[lo, hi]`; returns the Kronrod value and an
/// error estimate from the Gauss-Kronrod difference.
fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let f_center = f(center);
    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;

    for j in 0..7 {
        let x = half * XGK[j];
        let f_sum = f(center - x) + f(center + x);
        kronrod += WGK[j] * f_sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * f_sum;
        }
    }

    Segment {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrate `f` over `[lo, hi]` to `max(rel_tol * |I|, abs_tol)`.
///
/// `hi` may be `f64::INFINITY`. Non-convergence after the subdivision budget
/// returns [`Error::Quadrature`] carrying the best estimate and its bound.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<f64> {
    if lo.is_nan() || hi.is_nan() || lo.is_infinite() {
        return Err(Error::Domain("integration bounds must be finite or hi=+inf"));
    }
    if hi.is_infinite() {
        // x = lo + t/(1-t), dx = dt/(1-t)^2 maps [0,1) onto [lo, inf).
        let g = move |t: f64| {
            let one_minus = 1.0 - t;
            f(lo + t / one_minus) / (one_minus * one_minus)
        };
        return integrate_finite(&g, 0.0, 1.0, rel_tol, abs_tol);
    }
    integrate_finite(&f, lo, hi, rel_tol, abs_tol)
}

fn integrate_finite<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }

    let step = (hi - lo) / INITIAL_SEGMENTS as f64;
    let mut segments: Vec<Segment> = (0..INITIAL_SEGMENTS)
        .map(|i| {
            let a = lo + i as f64 * step;
            let b = if i + 1 == INITIAL_SEGMENTS {
                hi
            } else {
                lo + (i + 1) as f64 * step
            };
            gk15(f, a, b)
        })
        .collect();
    loop {
        let mut total = 0.0;
        let mut total_err = 0.0;
        for s in &segments {
            total += s.value;
            total_err += s.error;
        }
        if total.is_nan() || total_err.is_nan() {
            return Err(Error::Domain("integrand produced NaN"));
        }
        if total_err <= f64::max(rel_tol * total.abs(), abs_tol) {
            return Ok(total);
        }
        if segments.len() >= MAX_SEGMENTS {
            return Err(Error::Quadrature {
                estimate: total,
                error_bound: total_err,
                subdivisions: segments.len(),
            });
        }

        let worst = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .expect("segment list is never empty");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.lo + seg.hi);
        if mid <= seg.lo || mid >= seg.hi {
            // Interval no longer splittable in f64; accept what we have.
            segments.push(seg);
            let (mut total, mut total_err) = (0.0, 0.0);
            for s in &segments {
                total += s.value;
                total_err += s.error;
            }
            return Err(Error::Quadrature {
                estimate: total,
                error_bound: total_err,
                subdivisions: segments.len(),
            });
        }
        segments.push(gk15(f, seg.lo, mid));
        segments.push(gk15(f, mid, seg.hi));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sine_over_half_period() {
        let v = integrate(f64::sin, 0.0, PI, 1e-12, 0.0).unwrap();
        assert!((v - 2.0).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn rayleigh_density_normalizes_on_semi_infinite_domain() {
        let lambda = 1e-8;
        let v = integrate(
            |r| 2.0 * PI * lambda * r * (-PI * lambda * r * r).exp(),
            0.0,
            f64::INFINITY,
            1e-10,
            0.0,
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn contact_angle_normalization_defect() {
        for n in [1.0, 10.0, 100.0, 1000.0] {
            let v = integrate(
                |phi| crate::geomodel::contact_angle_pdf_with(phi, n),
                0.0,
                PI,
                1e-12,
                0.0,
            )
            .unwrap();
            let expect = -(-n).exp_m1();
            assert!((v - expect).abs() < 1e-9, "n={n}: {v} vs {expect}");
        }
    }

    #[test]
    fn zero_width_interval_is_zero() {
        assert_eq!(integrate(|x| x, 2.0, 2.0, 1e-9, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn sharply_peaked_integrand_is_found() {
        // Gaussian of width 1e-3 centered off-node mid-interval.
        let v = integrate(
            |x: f64| (-0.5 * ((x - 0.4712) / 1e-3).powi(2)).exp(),
            0.0,
            1.0,
            1e-10,
            0.0,
        )
        .unwrap();
        let expect = 1e-3 * (2.0 * PI).sqrt();
        assert!((v - expect).abs() / expect < 1e-8, "got {v:e}");
    }

    #[test]
    fn nan_integrand_is_reported() {
        let r = integrate(|x| (x - 0.5).sqrt(), 0.0, 1.0, 1e-10, 0.0);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn nonconvergent_integrand_carries_diagnostics() {
        // Oscillates ~1.6e6 times over the interval; the subdivision budget
        // cannot resolve that at this tolerance.
        let r = integrate(|x: f64| (1e7 * x * x).cos(), 0.0, 1.0, 1e-12, 0.0);
        match r {
            Err(Error::Quadrature {
                estimate,
                error_bound,
                subdivisions,
            }) => {
                assert!(estimate.is_finite());
                assert!(error_bound > 0.0);
                assert!(subdivisions >= MAX_SEGMENTS);
            }
            other => panic!("expected quadrature error, got {other:?}"),
        }
    }
}
