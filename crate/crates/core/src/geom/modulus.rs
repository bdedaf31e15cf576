//! Moduli of continuity and the Dini / log-Dini / `omega*` calculus.
//!
//! Integrals near `t = 0` are evaluated after the substitution `t = e^{-u}`,
//! which turns `dt / t` into `du` and moves the endpoint singularity to
//! infinity. Convergence is decided from partial integrals on the cutoff
//! ladder `10^-3, ..., 10^-9`: the integral is declared divergent when the
//! last rung still grows faster than [`DIVERGENCE_SLOPE`] per unit of
//! `log(1/cut)`.

use crate::error::{Error, Result};
use crate::quad;

/// Growth rate of partial integrals (per unit of `log(1/cut)`) above which an
/// integral is declared divergent.
pub const DIVERGENCE_SLOPE: f64 = 1e-2;

const LADDER: [i32; 7] = [3, 4, 5, 6, 7, 8, 9];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModulusFamily {
    Zero,
    /// `M t^eps`.
    Power {
        m: f64,
        eps: f64,
    },
    /// `M / log(e/t)^p` for `t <= 1`, held at `M` for `t > 1`.
    LogPower {
        m: f64,
        p: f64,
    },
}

/// A nondecreasing modulus `omega`, optionally capped by a constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModulusOfContinuity {
    pub family: ModulusFamily,
    /// `omega(t) = min(raw(t), cap)`; `f64::INFINITY` for no cap.
    pub cap: f64,
}

impl ModulusOfContinuity {
    pub fn zero() -> Self {
        ModulusOfContinuity {
            family: ModulusFamily::Zero,
            cap: f64::INFINITY,
        }
    }

    pub fn power(m: f64, eps: f64) -> Self {
        ModulusOfContinuity {
            family: ModulusFamily::Power { m, eps },
            cap: f64::INFINITY,
        }
    }

    pub fn log_power(m: f64, p: f64) -> Self {
        ModulusOfContinuity {
            family: ModulusFamily::LogPower { m, p },
            cap: f64::INFINITY,
        }
    }

    /// `min(t, 1)`.
    pub fn capped_linear() -> Self {
        Self::power(1.0, 1.0).capped(1.0)
    }

    pub fn capped(mut self, cap: f64) -> Self {
        self.cap = cap;
        self
    }

    fn raw(&self, t: f64) -> f64 {
        match self.family {
            ModulusFamily::Zero => 0.0,
            ModulusFamily::Power { m, eps } => m * t.powf(eps),
            ModulusFamily::LogPower { m, p } => {
                if t >= 1.0 {
                    m
                } else {
                    m / (1.0 - t.ln()).powf(p)
                }
            }
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.raw(t).min(self.cap)
    }

    /// `omega(e^{-u})`, evaluated without underflow for large `u`.
    fn eval_exp(&self, u: f64) -> f64 {
        let v = match self.family {
            ModulusFamily::Zero => 0.0,
            ModulusFamily::Power { m, eps } => m * (-eps * u).exp(),
            ModulusFamily::LogPower { m, p } => {
                if u <= 0.0 {
                    m
                } else {
                    m / (1.0 + u).powf(p)
                }
            }
        };
        v.min(self.cap)
    }

    /// `sup omega`.
    pub fn sup(&self) -> f64 {
        let fam = match self.family {
            ModulusFamily::Zero => 0.0,
            ModulusFamily::Power { m, eps } if eps > 0.0 => f64::INFINITY * m.signum(),
            ModulusFamily::Power { m, .. } => m,
            ModulusFamily::LogPower { m, .. } => m,
        };
        fam.min(self.cap)
    }

    /// Point where the cap starts to bind, if any.
    fn kink(&self) -> Option<f64> {
        if let ModulusFamily::LogPower { m, .. } = self.family {
            // held constant from t = 1 on
            return (m <= self.cap).then_some(1.0);
        }
        if !self.cap.is_finite() {
            return None;
        }
        match self.family {
            ModulusFamily::Power { m, eps } if m > self.cap && eps > 0.0 => {
                Some((self.cap / m).powf(1.0 / eps))
            }
            ModulusFamily::Power { m, eps } if eps > 0.0 => Some((self.cap / m).powf(1.0 / eps)),
            _ => None,
        }
    }
}

/// Value of a possibly divergent integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntegralValue {
    Convergent(f64),
    Divergent,
}

impl IntegralValue {
    pub fn is_convergent(&self) -> bool {
        matches!(self, IntegralValue::Convergent(_))
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            IntegralValue::Convergent(v) => Some(*v),
            IntegralValue::Divergent => None,
        }
    }
}

/// Outcome of a Dini-type integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModulusIntegral {
    /// The integral over `[lower_cut, 1]`.
    pub partial: f64,
    /// Growth of the partial integrals on the last ladder rung, per unit of `log(1/cut)`.
    pub tail_slope: f64,
    /// The integral over `(0, 1]` when convergent.
    pub value: IntegralValue,
}

fn ladder_verdict<G: Fn(f64) -> f64>(integrand_u: &G, lower_cut: f64) -> ModulusIntegral {
    let tol = 1e-13;
    let partial_to = |u_max: f64| quad::adaptive_gauss(integrand_u, 0.0, u_max, tol);
    let partial = partial_to(-lower_cut.ln());
    let us: Vec<f64> = LADDER
        .iter()
        .map(|&k| k as f64 * std::f64::consts::LN_10)
        .collect();
    let n = us.len();
    // partial integrals on consecutive rungs differ by the integral between them
    let last = quad::adaptive_gauss(integrand_u, us[n - 2], us[n - 1], tol);
    let tail_slope = last.abs() / (us[n - 1] - us[n - 2]);
    let value = if tail_slope > DIVERGENCE_SLOPE {
        IntegralValue::Divergent
    } else {
        IntegralValue::Convergent(quad::semi_infinite(integrand_u, 0.0, tol))
    };
    ModulusIntegral {
        partial,
        tail_slope,
        value,
    }
}

/// `int_0^1 omega(t) / t dt`.
pub fn dini_integral(omega: &ModulusOfContinuity, lower_cut: f64) -> ModulusIntegral {
    let g = |u: f64| omega.eval_exp(u);
    ladder_verdict(&g, lower_cut)
}

/// `int_0^1 omega(t) log(t) / t dt` (nonpositive).
pub fn log_dini_integral(omega: &ModulusOfContinuity, lower_cut: f64) -> ModulusIntegral {
    let g = |u: f64| -u * omega.eval_exp(u);
    ladder_verdict(&g, lower_cut)
}

/// `omega*(s) = int_0^s omega(t)/t dt + s int_s^inf omega(t)/t^2 dt`.
pub fn omega_star(omega: &ModulusOfContinuity, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "omega* needs s > 0, got {s}"
        )));
    }
    if !omega.sup().is_finite() {
        return Err(Error::UnboundedModulus);
    }
    if matches!(omega.family, ModulusFamily::Zero) {
        return Ok(0.0);
    }
    if !dini_integral(omega, 1e-9).value.is_convergent() {
        return Err(Error::NotDini);
    }
    let tol = 1e-13;
    let kink = omega.kink();
    // t = s e^{-u}
    let ls = s.ln();
    let near = |u: f64| omega.eval_exp(u - ls);
    let near_breaks: Vec<f64> = kink
        .filter(|&k| k < s)
        .map(|k| (s / k).ln())
        .into_iter()
        .collect();
    let first = match near_breaks.first() {
        Some(&b) => quad::adaptive_gauss(&near, 0.0, b, tol) + quad::semi_infinite(&near, b, tol),
        None => quad::semi_infinite(&near, 0.0, tol),
    };
    // t = s / v
    let far = |v: f64| omega.eval(s / v);
    let far_breaks: Vec<f64> = kink.filter(|&k| k > s).map(|k| s / k).into_iter().collect();
    let second = quad::adaptive_gauss_split(&far, 0.0, 1.0, &far_breaks, tol);
    Ok(first + second)
}
