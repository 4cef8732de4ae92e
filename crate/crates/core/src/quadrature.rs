//! Adaptive Gauss–Kronrod (7/15) quadrature used for every radial ensemble
//! integral.
//!
//! The interval with the largest error estimate is bisected until the total
//! estimated error drops below `max(abs_tol, rel_tol·|I|)`. Interval
//! selection is a plain linear scan with first-index tie breaking, so results
//! are bit-reproducible.

use serde::Serialize;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
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

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Upper radial limit in units of `σ₀`.
    pub truncation_radius: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_subdivisions: 200,
            truncation_radius: 12.0,
        }
    }
}

impl QuadratureSpec {
    pub fn new(
        rel_tol: f64,
        abs_tol: f64,
        max_subdivisions: usize,
        truncation_radius: f64,
    ) -> Result<Self> {
        let spec = QuadratureSpec {
            rel_tol,
            abs_tol,
            max_subdivisions,
            truncation_radius,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 1e-14) {
            return Err(Error::InvalidSpec(format!(
                "rel_tol must be >= 1e-14, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "abs_tol must be >= 0, got {}",
                self.abs_tol
            )));
        }
        if !(self.truncation_radius >= 8.0) || !self.truncation_radius.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "truncation_radius must be >= 8 sigma0, got {}",
                self.truncation_radius
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidSpec("max_subdivisions must be >= 1".into()));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// Converged integral and its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    Segment {
        a,
        b,
        value: res_k * half,
        error: rescale_error((res_k - res_g) * half, res_abs * scale, res_asc * scale),
    }
}

/// Integrate `f` over `[a, b]` adaptively.
///
/// On [`Error::MaxSubdivisionsExceeded`] the best available estimate is
/// carried inside the error.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            abs_error: 0.0,
            subdivisions: 0,
        });
    }
    let mut segments = vec![gk15(&f, a, b)];
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::NonFiniteIntegrand);
        }
        let tol = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= tol {
            return Ok(Estimate {
                value,
                abs_error: error,
                subdivisions: segments.len(),
            });
        }
        if segments.len() >= spec.max_subdivisions {
            return Err(Error::MaxSubdivisionsExceeded {
                estimate: value,
                abs_error: error,
                subdivisions: segments.len(),
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, be), (i, s)| {
                if s.error > be {
                    (i, s.error)
                } else {
                    (bi, be)
                }
            });
        let seg = segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval cannot be split further in floating point
            return Err(Error::MaxSubdivisionsExceeded {
                estimate: value,
                abs_error: error,
                subdivisions: segments.len(),
            });
        }
        segments[worst] = gk15(&f, seg.a, mid);
        segments.push(gk15(&f, mid, seg.b));
    }
}

/// Integrate a radial function over `(0, truncation_radius·σ₀]`.
pub fn integrate_radial<F: Fn(f64) -> f64>(
    f: F,
    sigma0: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    spec.validate()?;
    crate::error::check_length(sigma0)?;
    integrate(f, 0.0, spec.truncation_radius * sigma0, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let est = integrate(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, &QuadratureSpec::default()).unwrap();
        let exact = 64.0 / 6.0 - 8.0;
        assert!((est.value - exact).abs() < 1e-14);
        assert_eq!(est.subdivisions, 1);
    }

    #[test]
    fn sine_integral() {
        let est = integrate(f64::sin, 0.0, std::f64::consts::PI, &QuadratureSpec::default()).unwrap();
        assert!((est.value - 2.0).abs() < 1e-13);
        assert!(est.abs_error < 1e-9);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let spec = QuadratureSpec::default();
        let fwd = integrate(f64::exp, 0.0, 1.0, &spec).unwrap().value;
        let rev = integrate(f64::exp, 1.0, 0.0, &spec).unwrap().value;
        assert!((fwd + rev).abs() < 1e-15);
    }

    #[test]
    fn slow_endpoint_singularity_exhausts_subdivisions() {
        let spec = QuadratureSpec {
            rel_tol: 1e-12,
            max_subdivisions: 30,
            ..QuadratureSpec::default()
        };
        match integrate_radial(|r: f64| r.powf(-0.99), 1.0, &spec) {
            Err(Error::MaxSubdivisionsExceeded {
                estimate,
                subdivisions,
                ..
            }) => {
                assert_eq!(subdivisions, 30);
                assert!(estimate > 0.0);
            }
            other => panic!("expected MaxSubdivisionsExceeded, got {other:?}"),
        }
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(1e-15, 0.0, 10, 12.0).is_err());
        assert!(QuadratureSpec::new(1e-10, 0.0, 10, 7.9).is_err());
        assert!(QuadratureSpec::new(1e-10, -1.0, 10, 12.0).is_err());
        assert!(QuadratureSpec::new(1e-10, 0.0, 0, 12.0).is_err());
        assert!(QuadratureSpec::new(1e-14, 0.0, 10, 8.0).is_ok());
    }

    #[test]
    fn deterministic() {
        let f = |r: f64| r * r * (-r * r / 2.0).exp() * (3.0 * r).cos();
        let spec = QuadratureSpec::default();
        let a = integrate_radial(f, 1.3, &spec).unwrap();
        let b = integrate_radial(f, 1.3, &spec).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.abs_error.to_bits(), b.abs_error.to_bits());
    }
}
