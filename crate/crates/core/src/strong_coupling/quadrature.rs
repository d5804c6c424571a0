//! Globally adaptive Gauss–Kronrod (7, 15) quadrature for complex integrands.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below the requested absolute tolerance. Error estimates use
//! the QUADPACK rescaling of `|K15 − G7|`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Error estimates never fall below `50·ε·∫|f|` per panel, so the stopping
/// test needs headroom above that sum.
const CONVERGENCE_FLOOR: f64 = 100.0 * f64::EPSILON;

/// Settings for one adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    /// Absolute tolerance on the integral.
    pub tol: f64,
    /// Number of equal panels the interval is split into before adapting.
    pub initial_panels: usize,
    /// Budget of subintervals.
    pub max_intervals: usize,
    /// Nesting depth reported on failure.
    pub level: usize,
}

impl QuadOptions {
    pub const DEFAULT_MAX_INTERVALS: usize = 100_000;

    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            initial_panels: 1,
            max_intervals: Self::DEFAULT_MAX_INTERVALS,
            level: 1,
        }
    }

    pub fn panels(mut self, n: usize) -> Self {
        self.initial_panels = n.max(1);
        self
    }

    pub fn level(mut self, level: usize) -> Self {
        self.level = level;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadEstimate {
    pub value: C64,
    pub err_estimate: f64,
    pub evaluations: usize,
    pub intervals: usize,
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: C64,
    err: f64,
    res_abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
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
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err;
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gauss_kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<C64>,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let f_centre = f(centre)?;
    let mut res_k = f_centre * WGK[7];
    let mut res_g = f_centre * WG[3];
    let mut res_abs = f_centre.norm() * WGK[7];
    let mut fv1 = [C64::new(0.0, 0.0); 7];
    let mut fv2 = [C64::new(0.0, 0.0); 7];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(centre - x)?;
        let f2 = f(centre + x)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let sum = f1 + f2;
        res_k += sum * WGK[j];
        res_abs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            res_g += sum * WG[j / 2];
        }
    }

    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (f_centre - mean).norm();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }

    let raw_err = ((res_k - res_g) * half).norm();
    let res_abs = res_abs * abs_half;
    res_asc *= abs_half;
    Ok(Panel {
        a,
        b,
        value: res_k * half,
        err: rescale_error(raw_err, res_abs, res_asc),
        res_abs,
    })
}

/// Integrates a fallible complex integrand over `[a, b]`.
///
/// Converges when the total error estimate is at most
/// `max(tol, 100·ε·∫|f|)`, twice the per-panel rounding floor of the rule.
/// Errors raised by the integrand are passed through unchanged.
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadEstimate>
where
    F: FnMut(f64) -> Result<C64>,
{
    if !(opts.tol > 0.0) {
        return Err(Error::domain(format!(
            "quadrature tolerance must be positive, got {}",
            opts.tol
        )));
    }
    if a == b {
        return Ok(QuadEstimate {
            value: C64::new(0.0, 0.0),
            err_estimate: 0.0,
            evaluations: 0,
            intervals: 0,
        });
    }

    let n0 = opts.initial_panels.max(1);
    let width = (b - a) / n0 as f64;
    let mut heap = BinaryHeap::with_capacity(n0 * 2);
    for k in 0..n0 {
        let lo = a + k as f64 * width;
        let hi = if k + 1 == n0 {
            b
        } else {
            a + (k + 1) as f64 * width
        };
        heap.push(gauss_kronrod(&mut f, lo, hi)?);
    }
    let mut evaluations = 15 * n0;
    let totals = |heap: &BinaryHeap<Panel>| {
        heap.iter()
            .fold((C64::new(0.0, 0.0), 0.0, 0.0), |(v, e, r), p| {
                (v + p.value, e + p.err, r + p.res_abs)
            })
    };
    let (_, mut err, mut res_abs) = totals(&heap);

    loop {
        let target = opts.tol.max(CONVERGENCE_FLOOR * res_abs);
        if err <= target {
            // resum to shed drift from the running updates
            let (value, exact_err, exact_abs) = totals(&heap);
            err = exact_err;
            res_abs = exact_abs;
            if err <= opts.tol.max(CONVERGENCE_FLOOR * res_abs) {
                return Ok(QuadEstimate {
                    value,
                    err_estimate: err,
                    evaluations,
                    intervals: heap.len(),
                });
            }
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureFailure {
                level: opts.level,
                upper: b,
                err_estimate: err,
                tol: opts.tol,
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Interval cannot be split further in floating point.
            return Err(Error::QuadratureFailure {
                level: opts.level,
                upper: b,
                err_estimate: err,
                tol: opts.tol,
            });
        }
        let left = gauss_kronrod(&mut f, worst.a, mid)?;
        let right = gauss_kronrod(&mut f, mid, worst.b)?;
        err += left.err + right.err - worst.err;
        res_abs += left.res_abs + right.res_abs - worst.res_abs;
        heap.push(left);
        heap.push(right);
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        // K15 integrates degree 22 exactly
        let r = integrate(
            |x| Ok(C64::new(x.powi(6), -x.powi(3))),
            0.0,
            2.0,
            &QuadOptions::new(1e-14),
        )
        .unwrap();
        assert!((r.value - C64::new(128.0 / 7.0, -4.0)).norm() < 1e-13);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn oscillatory_exponential() {
        let k = 37.0;
        let r = integrate(
            |x| Ok(C64::from_polar(1.0, k * x)),
            0.0,
            3.0,
            &QuadOptions::new(1e-12),
        )
        .unwrap();
        let want = (C64::from_polar(1.0, 3.0 * k) - 1.0) / C64::new(0.0, k);
        assert!((r.value - want).norm() < 1e-12);
        assert!(r.err_estimate <= 1e-12);
    }

    #[test]
    fn reversed_interval_changes_sign() {
        let f = |x: f64| Ok(C64::new(x.cos(), x.sin()));
        let fwd = integrate(f, 0.0, 1.5, &QuadOptions::new(1e-13)).unwrap();
        let back = integrate(f, 1.5, 0.0, &QuadOptions::new(1e-13)).unwrap();
        assert!((fwd.value + back.value).norm() < 1e-14);
    }

    #[test]
    fn budget_exhaustion_reports_level() {
        let mut opts = QuadOptions::new(1e-14).level(3);
        opts.max_intervals = 4;
        let r = integrate(
            |x| Ok(C64::new((1.0 / (x + 1e-9)).sin(), 0.0)),
            0.0,
            1.0,
            &opts,
        );
        match r {
            Err(Error::QuadratureFailure { level, .. }) => assert_eq!(level, 3),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn integrand_errors_pass_through() {
        let r = integrate(
            |_| Err(Error::domain("boom")),
            0.0,
            1.0,
            &QuadOptions::new(1e-10),
        );
        assert_eq!(r, Err(Error::domain("boom")));
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(integrate(|_| Ok(C64::new(1.0, 0.0)), 0.0, 1.0, &QuadOptions::new(0.0)).is_err());
    }
}
