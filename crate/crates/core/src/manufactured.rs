//! Closed-form standing-wave solution in the PEC unit cube (ε = μ = 1),
//! its energy constants, and relative error metrics.

use crate::error::{AdiError, Result};
use crate::grid::{Component, FieldState, GridSpec, Medium};
use crate::norms::{functional_i, functional_iii, norm_e, norm_h};
use crate::grid::Axis;
use crate::operators::time_diff;
use crate::real::Real;

/// `sin(πu)` with exact zeros at integer `u`.
pub fn sin_pi<T: Real>(u: T) -> T {
    let two = T::lit(2.0);
    let r = u - two * (u / two).floor();
    let (r, sign) = if r > T::one() { (r - T::one(), -T::one()) } else { (r, T::one()) };
    let r = r.min(T::one() - r);
    sign * (T::lit(std::f64::consts::PI) * r).sin()
}

/// `cos(πu)` with exact zeros at half-integer `u`.
pub fn cos_pi<T: Real>(u: T) -> T {
    sin_pi(u + T::lit(0.5))
}

/// The standing-wave solution. Every spatial factor is a function of
/// `1 − x`, `1 − y`, `1 − z`; the angular frequency is `√3·π`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactSolution;

impl ExactSolution {
    pub fn omega<T: Real>() -> T {
        T::lit(3.0).sqrt() * T::lit(std::f64::consts::PI)
    }

    pub fn eval<T: Real>(&self, c: Component, t: T, x: T, y: T, z: T) -> T {
        let one = T::one();
        let (sx, cx) = (sin_pi(one - x), cos_pi(one - x));
        let (sy, cy) = (sin_pi(one - y), cos_pi(one - y));
        let (sz, cz) = (sin_pi(one - z), cos_pi(one - z));
        let wt = Self::omega::<T>() * t;
        let s3 = T::lit(3.0).sqrt();
        match c {
            Component::Ex => s3 / T::lit(4.0) * wt.cos() * cx * sy * sz,
            Component::Ey => s3 / T::lit(2.0) * wt.cos() * sx * cy * sz,
            Component::Ez => -T::lit(3.0) * s3 / T::lit(4.0) * wt.cos() * sx * sy * cz,
            Component::Hx => -T::lit(1.25) * wt.sin() * sx * cy * cz,
            Component::Hy => wt.sin() * cx * sy * cz,
            Component::Hz => T::lit(0.25) * wt.sin() * cx * cy * sz,
        }
    }
}

/// Continuous energies of the exact solution, all squared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticConstants<T> {
    /// `‖e‖² + ‖h‖²`
    pub eh_sq: T,
    /// Same for the time derivatives.
    pub eht_sq: T,
    /// Same for the x derivatives.
    pub ehx_sq: T,
    /// Same for the mixed x–t derivatives.
    pub ehxt_sq: T,
}

impl<T: Real> AnalyticConstants<T> {
    pub fn new() -> Self {
        let pi = T::lit(std::f64::consts::PI);
        let base = T::lit(21.0) / T::lit(64.0);
        let three = T::lit(3.0);
        Self {
            eh_sq: base,
            eht_sq: three * base * pi * pi,
            ehx_sq: base * pi * pi,
            ehxt_sq: three * base * pi * pi * pi * pi,
        }
    }

    pub fn eh(&self) -> T {
        self.eh_sq.sqrt()
    }

    pub fn eht(&self) -> T {
        self.eht_sq.sqrt()
    }

    pub fn ehx(&self) -> T {
        self.ehx_sq.sqrt()
    }

    pub fn ehxt(&self) -> T {
        self.ehxt_sq.sqrt()
    }

    /// `‖e(t)‖²`
    pub fn e_energy(t: T) -> T {
        let c = (ExactSolution::omega::<T>() * t).cos();
        T::lit(21.0) / T::lit(64.0) * c * c
    }

    /// `‖h(t)‖²`
    pub fn h_energy(t: T) -> T {
        let s = (ExactSolution::omega::<T>() * t).sin();
        T::lit(21.0) / T::lit(64.0) * s * s
    }
}

impl<T: Real> Default for AnalyticConstants<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Exact solution sampled on every component's own staggered points.
/// The time level label is `t/Δt`.
pub fn sample_exact<T: Real>(t: T, grid: &GridSpec<T>) -> FieldState<T> {
    let sol = ExactSolution;
    let level = (t / grid.dt).as_f64();
    FieldState::from_fn(grid, level, |c, a, b, d| {
        let h = c.half_offsets();
        sol.eval(
            c,
            t,
            grid.coordinate(Axis::X, a, h[0]),
            grid.coordinate(Axis::Y, b, h[1]),
            grid.coordinate(Axis::Z, d, h[2]),
        )
    })
}

fn time_of<T: Real>(state: &FieldState<T>, grid: &GridSpec<T>) -> T {
    T::lit(state.time_level) * grid.dt
}

/// `exact(t) − numeric`, keeping the numeric state's level.
pub fn error_state<T: Real>(numeric: &FieldState<T>, t: T, grid: &GridSpec<T>) -> Result<FieldState<T>> {
    let exact = sample_exact(t, grid);
    let mut err = exact.axpby(T::one(), numeric, -T::one())?;
    err.time_level = numeric.time_level;
    Ok(err)
}

/// Relative errors at one level. The `t` variants use the `δ_t` error
/// between the previous and current levels and are absent at level 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorMetrics<T> {
    pub time_level: f64,
    /// `sqrt(‖ℰ‖_E² + ‖ℋ‖_H²) / E_eh`
    pub eh0: T,
    /// `‖(ℰ, ℋ)‖₁ / E_ehx`
    pub eh1: T,
    /// `‖(ℰ, ℋ)‖₂ / E_eh`
    pub eh2: T,
    /// `‖(δ_t ℰ, δ_t ℋ)‖₁ / E_ehxt`
    pub eht1: Option<T>,
    /// `‖(δ_t ℰ, δ_t ℋ)‖₂ / E_eht`
    pub eht2: Option<T>,
    /// `‖ℰ‖_E / E_eh`
    pub e_rel: T,
    /// `‖ℋ‖_H / E_eh`
    pub h_rel: T,
}

/// Error metrics of `cur` against the exact solution. Times come from the
/// states' level labels. The medium is fixed to ε = μ = 1 because the exact
/// solution assumes it.
pub fn metrics<T: Real>(prev: Option<&FieldState<T>>, cur: &FieldState<T>, grid: &GridSpec<T>) -> Result<ErrorMetrics<T>> {
    let med = Medium::<T>::vacuum();
    let k = AnalyticConstants::<T>::new();
    let err = error_state(cur, time_of(cur, grid), grid)?;
    let ne = norm_e(&err.e, &med, grid)?;
    let nh = norm_h(&err.h, &med, grid)?;
    let (eht1, eht2) = match prev {
        Some(p) => {
            if (cur.time_level - p.time_level - 1.0).abs() > 1e-9 {
                return Err(AdiError::InvalidArgument(format!(
                    "time derivative metrics need consecutive full levels, got {} and {}",
                    p.time_level, cur.time_level
                )));
            }
            let perr = error_state(p, time_of(p, grid), grid)?;
            let d = time_diff(&err, &perr, grid.dt)?;
            (
                Some(functional_i(&d, Axis::X, &med, grid)?.sqrt() / k.ehxt()),
                Some(functional_iii(&d, &med, grid)?.sqrt() / k.eht()),
            )
        }
        None => (None, None),
    };
    Ok(ErrorMetrics {
        time_level: cur.time_level,
        eh0: (ne + nh).sqrt() / k.eh(),
        eh1: functional_i(&err, Axis::X, &med, grid)?.sqrt() / k.ehx(),
        eh2: functional_iii(&err, &med, grid)?.sqrt() / k.eh(),
        eht1,
        eht2,
        e_rel: ne.sqrt() / k.eh(),
        h_rel: nh.sqrt() / k.eh(),
    })
}

/// `log(e1/e2) / log(h1/h2)`.
pub fn observed_rate(e1: f64, e2: f64, h1: f64, h2: f64) -> Result<f64> {
    if !(e1 > 0.0 && e2 > 0.0 && h1 > 0.0 && h2 > 0.0) {
        return Err(AdiError::InvalidArgument(format!(
            "rates need positive errors and resolutions, got errors ({e1}, {e2}) at ({h1}, {h2})"
        )));
    }
    if h1 == h2 {
        return Err(AdiError::InvalidArgument(format!("resolutions must differ, both are {h1}")));
    }
    Ok((e1 / e2).ln() / (h1 / h2).ln())
}
