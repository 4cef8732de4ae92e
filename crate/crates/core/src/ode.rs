//! Embedded explicit Runge–Kutta integrators with adaptive step control.
//!
//! Two pairs are available: Bogacki–Shampine 3(2) and Dormand–Prince 5(4).
//! Both are FSAL. Steps are clipped so that every requested output time is
//! hit exactly; no interpolation is needed for the regular output.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the step, in the time units of the caller.
    pub max_step: f64,
    /// 3 (Bogacki–Shampine) or 5 (Dormand–Prince).
    pub scheme_order: u32,
}

impl Default for IntegratorSpec {
    fn default() -> Self {
        IntegratorSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            scheme_order: 5,
        }
    }
}

impl IntegratorSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidSpec(format!("rel_tol must lie in (0, 1), got {}", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::InvalidSpec(format!("abs_tol must be >= 0, got {}", self.abs_tol)));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::InvalidSpec(format!("max_step must be > 0, got {}", self.max_step)));
        }
        if self.scheme_order != 3 && self.scheme_order != 5 {
            return Err(Error::InvalidSpec(format!(
                "scheme_order must be 3 or 5, got {}",
                self.scheme_order
            )));
        }
        Ok(())
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }
}

struct Tableau {
    c: &'static [f64],
    a: &'static [&'static [f64]],
    b: &'static [f64],
    b_low: &'static [f64],
    /// Order of the embedded (error) solution.
    low_order: i32,
}

const BS23: Tableau = Tableau {
    c: &[0.0, 0.5, 0.75, 1.0],
    a: &[&[], &[0.5], &[0.0, 0.75], &[2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0]],
    b: &[2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0, 0.0],
    b_low: &[7.0 / 24.0, 0.25, 1.0 / 3.0, 0.125],
    low_order: 2,
};

const DOPRI5: Tableau = Tableau {
    c: &[0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0],
    a: &[
        &[],
        &[0.2],
        &[3.0 / 40.0, 9.0 / 40.0],
        &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
        &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
        &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
        &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ],
    b: &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0],
    b_low: &[
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ],
    low_order: 4,
};

/// Result of a run: states at the requested times and, if the event
/// fired, the interpolated event state.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution<const N: usize> {
    pub points: Vec<(f64, [f64; N])>,
    pub event: Option<(f64, [f64; N])>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

fn all_finite<const N: usize>(y: &[f64; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// Integrate `y' = f(t, y)` from `t0`, reporting `y` at each of `outputs`
/// (ascending, `>= t0`).
///
/// If `event` is given, integration stops at the first accepted step over
/// which `event(y)` goes from positive to non-positive. The crossing is
/// located by linear interpolation between the two step ends.
pub fn integrate<const N: usize, F, E>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    outputs: &[f64],
    spec: &IntegratorSpec,
    event: Option<E>,
) -> Result<OdeSolution<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    E: Fn(&[f64; N]) -> f64,
{
    spec.validate()?;
    if outputs.iter().any(|t| !t.is_finite() || *t < t0) || outputs.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidSpec("output times must be finite, ascending and >= t0".into()));
    }
    let tab = if spec.scheme_order == 3 { &BS23 } else { &DOPRI5 };
    let stages = tab.c.len();
    let mut sol = OdeSolution {
        points: Vec::with_capacity(outputs.len()),
        event: None,
        accepted_steps: 0,
        rejected_steps: 0,
    };
    let Some(&t_end) = outputs.last() else {
        return Ok(sol);
    };

    let mut t = t0;
    let mut y = y0;
    if !all_finite(&y) {
        return Err(Error::NonFiniteState { t });
    }
    let mut k = vec![[0.0; N]; stages];
    k[0] = f(t, &y);
    if !all_finite(&k[0]) {
        return Err(Error::NonFiniteState { t });
    }

    let mut next_out = 0;
    while next_out < outputs.len() && outputs[next_out] == t {
        sol.points.push((t, y));
        next_out += 1;
    }

    let span = t_end - t0;
    let mut h = {
        let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let nf = k[0].iter().map(|v| v * v).sum::<f64>().sqrt();
        let guess = if ny > 1e-10 && nf > 1e-10 { 0.01 * ny / nf } else { 1e-3 * span };
        guess.min(spec.max_step).min(span).max(1e-12 * span)
    };
    let exponent = -1.0 / (tab.low_order + 1) as f64;

    while next_out < outputs.len() {
        let target = outputs[next_out];
        let mut last_rejected = false;
        let (t_new, y_new, k_last) = loop {
            let h_try = h.min(target - t).min(spec.max_step);
            if h_try <= 1e-14 * t.abs().max(span) {
                return Err(Error::StepSizeUnderflow { t, h: h_try });
            }
            for s in 1..stages {
                let mut ys = y;
                for (j, a) in tab.a[s].iter().enumerate() {
                    if *a != 0.0 {
                        for i in 0..N {
                            ys[i] += h_try * a * k[j][i];
                        }
                    }
                }
                k[s] = f(t + tab.c[s] * h_try, &ys);
            }
            let mut y1 = y;
            let mut err2 = 0.0;
            for i in 0..N {
                let mut hi = 0.0;
                let mut lo = 0.0;
                for s in 0..stages {
                    hi += tab.b[s] * k[s][i];
                    lo += tab.b_low[s] * k[s][i];
                }
                y1[i] += h_try * hi;
                let sc = spec.abs_tol + spec.rel_tol * y[i].abs().max(y1[i].abs());
                let e = h_try * (hi - lo) / sc;
                err2 += e * e;
            }
            let err = (err2 / N as f64).sqrt();
            if !err.is_finite() || !all_finite(&y1) {
                return Err(Error::NonFiniteState { t: t + h_try });
            }
            if err <= 1.0 {
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(exponent)).clamp(0.2, 5.0) };
                let grow = if last_rejected { grow.min(1.0) } else { grow };
                // do not let a short step clipped to an output time shrink h
                h = h.max(h_try) * grow;
                let k_last = if tab.b[stages - 1] == 0.0 && tab.c[stages - 1] == 1.0 {
                    // FSAL: the last stage was evaluated at (t + h, y1)
                    k[stages - 1]
                } else {
                    f(t + h_try, &y1)
                };
                let t_new = if h_try == target - t { target } else { t + h_try };
                break (t_new, y1, k_last);
            }
            sol.rejected_steps += 1;
            last_rejected = true;
            h = h_try * (0.9 * err.powf(exponent)).clamp(0.2, 1.0);
        };
        sol.accepted_steps += 1;

        if let Some(ev) = &event {
            let (g0, g1) = (ev(&y), ev(&y_new));
            if g0 > 0.0 && g1 <= 0.0 {
                let w = g0 / (g0 - g1);
                let mut ye = y;
                for i in 0..N {
                    ye[i] = y[i] + w * (y_new[i] - y[i]);
                }
                sol.event = Some((t + w * (t_new - t), ye));
                return Ok(sol);
            }
        }

        t = t_new;
        y = y_new;
        k[0] = k_last;
        while next_out < outputs.len() && outputs[next_out] == t {
            sol.points.push((t, y));
            next_out += 1;
        }
    }
    Ok(sol)
}
