//! Discrete norms, energy functionals and divergence diagnostics.
//!
//! All energies are returned squared. Index ranges are expressed through the
//! per-axis offset of the lattice being measured, so the same rules cover the
//! canonical components and their differenced images:
//!
//! * energy norm `E`: cell axes `0..L`, node axes `1..L` (walls excluded);
//! * energy norm `H`: cell axes `0..L`, node axes `0..=L`;
//! * after a difference along `w`: on `w` itself node points `1..L` and cell
//!   points `1..L-1`, other axes as for `E`.

use std::ops::Range;

use crate::error::{AdiError, Result};
use crate::grid::{Axis, FieldState, GridSpec, Medium, VectorField};
use crate::lattice::{IndexBox, Lattice};
use crate::operators::{diff, diff_vector, split_curl_1, split_curl_2, time_diff};
use crate::real::{CompensatedSum, Real};

fn count_of<T: Real>(grid: &GridSpec<T>, axis: usize) -> usize {
    grid.counts()[axis]
}

fn e_range(half: bool, n: usize) -> Range<usize> {
    if half {
        0..n
    } else {
        1..n
    }
}

fn h_range(half: bool, n: usize) -> Range<usize> {
    if half {
        0..n
    } else {
        0..n + 1
    }
}

fn e_box<T: Real>(l: &Lattice<T>, grid: &GridSpec<T>) -> IndexBox {
    std::array::from_fn(|a| e_range(l.spans()[a].half, count_of(grid, a)))
}

fn h_box<T: Real>(l: &Lattice<T>, grid: &GridSpec<T>) -> IndexBox {
    std::array::from_fn(|a| h_range(l.spans()[a].half, count_of(grid, a)))
}

/// Range box for a lattice obtained by differencing along `w`.
fn shifted_box<T: Real>(l: &Lattice<T>, w: Axis, grid: &GridSpec<T>) -> IndexBox {
    std::array::from_fn(|a| {
        let n = count_of(grid, a);
        let half = l.spans()[a].half;
        if a == w.index() {
            if half {
                1..n - 1
            } else {
                1..n
            }
        } else {
            e_range(half, n)
        }
    })
}

fn weighted_sum<T: Real>(parts: &[(&Lattice<T>, IndexBox)], weight: T, scale: T) -> Result<T> {
    let mut acc = CompensatedSum::new();
    for (l, bx) in parts {
        acc.add(l.weighted_sum_sq(bx, T::one())?);
    }
    Ok(acc.value() * weight * scale)
}

/// `‖U‖_E²` with an explicit weight.
pub fn norm_e_weighted<T: Real>(u: &VectorField<T>, weight: T, grid: &GridSpec<T>) -> Result<T> {
    let parts: Vec<_> = u.iter().map(|l| (l, e_box(l, grid))).collect();
    weighted_sum(&parts, weight, grid.dv())
}

/// `‖V‖_H²` with an explicit weight.
pub fn norm_h_weighted<T: Real>(v: &VectorField<T>, weight: T, grid: &GridSpec<T>) -> Result<T> {
    let parts: Vec<_> = v.iter().map(|l| (l, h_box(l, grid))).collect();
    weighted_sum(&parts, weight, grid.dv())
}

/// `‖E‖_E²`, weighted by ε.
pub fn norm_e<T: Real>(u: &VectorField<T>, med: &Medium<T>, grid: &GridSpec<T>) -> Result<T> {
    norm_e_weighted(u, med.eps, grid)
}

/// `‖H‖_H²`, weighted by μ.
pub fn norm_h<T: Real>(v: &VectorField<T>, med: &Medium<T>, grid: &GridSpec<T>) -> Result<T> {
    norm_h_weighted(v, med.mu, grid)
}

/// Squared norm of a field already differenced along `w`.
pub fn shifted_norm<T: Real>(u: &VectorField<T>, w: Axis, weight: T, grid: &GridSpec<T>) -> Result<T> {
    let parts: Vec<_> = u.iter().map(|l| (l, shifted_box(l, w, grid))).collect();
    weighted_sum(&parts, weight, grid.dv())
}

/// Boundary-plane norm of the two components tangential to face `w`
/// (a field on electric locations or an image of one).
pub fn boundary_norm_e<T: Real>(u: &VectorField<T>, w: Axis, weight: T, grid: &GridSpec<T>) -> Result<T> {
    let n = grid.counts();
    let d = w.index();
    if n[d] < 3 {
        return Err(AdiError::TooFewCells { axis: w, count: n[d] });
    }
    let mut parts = Vec::new();
    for t in Axis::ALL.into_iter().filter(|&a| a != w) {
        let l = u.component(t);
        for plane in [1, n[d] - 1] {
            let bx: IndexBox = std::array::from_fn(|a| {
                if a == d {
                    plane..plane + 1
                } else {
                    e_range(l.spans()[a].half, n[a])
                }
            });
            parts.push((l, bx));
        }
    }
    weighted_sum(&parts, weight, face_scale(grid, w))
}

/// Boundary-plane norm of the component normal to face `w`.
pub fn boundary_norm_h<T: Real>(v: &VectorField<T>, w: Axis, weight: T, grid: &GridSpec<T>) -> Result<T> {
    let n = grid.counts();
    let d = w.index();
    if n[d] < 3 {
        return Err(AdiError::TooFewCells { axis: w, count: n[d] });
    }
    let l = v.component(w);
    let parts: Vec<_> = [1, n[d] - 1]
        .into_iter()
        .map(|plane| {
            let bx: IndexBox = std::array::from_fn(|a| {
                if a == d {
                    plane..plane + 1
                } else {
                    e_range(l.spans()[a].half, n[a])
                }
            });
            (l, bx)
        })
        .collect();
    weighted_sum(&parts, weight, face_scale(grid, w))
}

/// Area of the face cell divided by the normal mesh size.
fn face_scale<T: Real>(grid: &GridSpec<T>, w: Axis) -> T {
    let area = match w {
        Axis::X => grid.dy * grid.dz,
        Axis::Y => grid.dx * grid.dz,
        Axis::Z => grid.dx * grid.dy,
    };
    area / grid.h(w)
}

/// `(‖E‖_{L(w)}², ‖H‖_{L(w)}²)` for the state's own fields.
pub fn boundary_norm<T: Real>(state: &FieldState<T>, w: Axis, med: &Medium<T>, grid: &GridSpec<T>) -> Result<(T, T)> {
    Ok((
        boundary_norm_e(&state.e, w, med.eps, grid)?,
        boundary_norm_h(&state.h, w, med.mu, grid)?,
    ))
}

/// First energy identity functional for axis `w`. Without `perturbed` the
/// `Δt²/(4με)` terms are dropped.
pub fn functional_i_with<T: Real>(
    state: &FieldState<T>,
    w: Axis,
    med: &Medium<T>,
    grid: &GridSpec<T>,
    perturbed: bool,
) -> Result<T> {
    state.check_grid(grid)?;
    let (eps, mu) = (med.eps, med.mu);
    let mut acc = CompensatedSum::new();
    acc.add(shifted_norm(&diff_vector(&state.e, w, grid)?, w, eps, grid)?);
    acc.add(shifted_norm(&diff_vector(&state.h, w, grid)?, w, mu, grid)?);
    acc.add(boundary_norm_e(&state.e, w, eps, grid)?);
    acc.add(boundary_norm_h(&state.h, w, mu, grid)?);
    if perturbed {
        let c = med.perturbation(grid.dt);
        let c1e = split_curl_1(&state.e, grid)?;
        let c2h = split_curl_2(&state.h, grid)?;
        let mut p = CompensatedSum::new();
        p.add(shifted_norm(&diff_vector(&c1e, w, grid)?, w, eps, grid)?);
        p.add(shifted_norm(&diff_vector(&c2h, w, grid)?, w, mu, grid)?);
        p.add(boundary_norm_e(&c2h, w, mu, grid)?);
        p.add(boundary_norm_h(&c1e, w, eps, grid)?);
        acc.add(c * p.value());
    }
    Ok(acc.value())
}

pub fn functional_i<T: Real>(state: &FieldState<T>, w: Axis, med: &Medium<T>, grid: &GridSpec<T>) -> Result<T> {
    functional_i_with(state, w, med, grid, true)
}

/// Second identity: the first functional of `δ_t` between two full levels.
pub fn functional_ii<T: Real>(
    state_n: &FieldState<T>,
    state_next: &FieldState<T>,
    w: Axis,
    med: &Medium<T>,
    grid: &GridSpec<T>,
) -> Result<T> {
    functional_i(&time_diff(state_next, state_n, grid.dt)?, w, med, grid)
}

/// Third identity functional. Without `perturbed` the `Δt²/(4με)` terms are
/// dropped.
pub fn functional_iii_with<T: Real>(state: &FieldState<T>, med: &Medium<T>, grid: &GridSpec<T>, perturbed: bool) -> Result<T> {
    state.check_grid(grid)?;
    let mut acc = CompensatedSum::new();
    acc.add(norm_e(&state.e, med, grid)?);
    acc.add(norm_h(&state.h, med, grid)?);
    if perturbed {
        let c = med.perturbation(grid.dt);
        let p = norm_e_weighted(&split_curl_2(&state.h, grid)?, med.mu, grid)?
            + norm_h_weighted(&split_curl_1(&state.e, grid)?, med.eps, grid)?;
        acc.add(c * p);
    }
    Ok(acc.value())
}

pub fn functional_iii<T: Real>(state: &FieldState<T>, med: &Medium<T>, grid: &GridSpec<T>) -> Result<T> {
    functional_iii_with(state, med, grid, true)
}

/// Fourth identity: the third functional of `δ_t` between two full levels.
pub fn functional_iv<T: Real>(
    state_n: &FieldState<T>,
    state_next: &FieldState<T>,
    med: &Medium<T>,
    grid: &GridSpec<T>,
) -> Result<T> {
    functional_iii(&time_diff(state_next, state_n, grid.dt)?, med, grid)
}

/// The four identity functionals at one level. `q2` and `q4` need the
/// previous full level and are absent at the first level.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport<T> {
    pub time_level: f64,
    pub q1: [T; 3],
    pub q2: Option<[T; 3]>,
    pub q3: T,
    pub q4: Option<T>,
    pub norm_e: T,
    pub norm_h: T,
}

/// Builds the report for `cur`; the `δ_t` functionals use `(prev, cur)`.
pub fn energy_report<T: Real>(
    prev: Option<&FieldState<T>>,
    cur: &FieldState<T>,
    med: &Medium<T>,
    grid: &GridSpec<T>,
) -> Result<EnergyReport<T>> {
    let q1 = [
        functional_i(cur, Axis::X, med, grid)?,
        functional_i(cur, Axis::Y, med, grid)?,
        functional_i(cur, Axis::Z, med, grid)?,
    ];
    let (q2, q4) = match prev {
        Some(p) => {
            let dt_state = time_diff(cur, p, grid.dt)?;
            (
                Some([
                    functional_i(&dt_state, Axis::X, med, grid)?,
                    functional_i(&dt_state, Axis::Y, med, grid)?,
                    functional_i(&dt_state, Axis::Z, med, grid)?,
                ]),
                Some(functional_iii(&dt_state, med, grid)?),
            )
        }
        None => (None, None),
    };
    Ok(EnergyReport {
        time_level: cur.time_level,
        q1,
        q2,
        q3: functional_iii(cur, med, grid)?,
        q4,
        norm_e: norm_e(&cur.e, med, grid)?,
        norm_h: norm_h(&cur.h, med, grid)?,
    })
}

/// The two experiment norms (squared), with and without perturbation terms.
/// `n1` is the first functional for `w = x`, `n2` the third.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeNorms<T> {
    pub n1: T,
    pub n2: T,
    pub n1_star: T,
    pub n2_star: T,
}

pub fn composite_norms<T: Real>(state: &FieldState<T>, med: &Medium<T>, grid: &GridSpec<T>) -> Result<CompositeNorms<T>> {
    Ok(CompositeNorms {
        n1: functional_i_with(state, Axis::X, med, grid, true)?,
        n2: functional_iii_with(state, med, grid, true)?,
        n1_star: functional_i_with(state, Axis::X, med, grid, false)?,
        n2_star: functional_iii_with(state, med, grid, false)?,
    })
}

/// Composite norms of `δ_t` between two full levels.
pub fn composite_norms_dt<T: Real>(
    state_n: &FieldState<T>,
    state_next: &FieldState<T>,
    med: &Medium<T>,
    grid: &GridSpec<T>,
) -> Result<CompositeNorms<T>> {
    composite_norms(&time_diff(state_next, state_n, grid.dt)?, med, grid)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceReport<T> {
    pub div_e_linf: T,
    pub div_e_l2: T,
    pub div_h_linf: T,
    pub div_h_l2: T,
}

/// Discrete divergences and their norms.
#[derive(Debug, Clone)]
pub struct Divergence<T> {
    pub report: DivergenceReport<T>,
    /// `ε(δ_x E_x + δ_y E_y + δ_z E_z)` at interior nodes.
    pub div_e: Lattice<T>,
    /// `μ(δ_x H_x + δ_y H_y + δ_z H_z)` at all cell centres.
    pub div_h: Lattice<T>,
}

fn divergence_of<T: Real>(u: &VectorField<T>, weight: T, bx: IndexBox, grid: &GridSpec<T>) -> Result<Lattice<T>> {
    let dx = diff(&u.x, Axis::X, grid)?;
    let dy = diff(&u.y, Axis::Y, grid)?;
    let dz = diff(&u.z, Axis::Z, grid)?;
    let half = dx.spans()[0].half;
    let spans = std::array::from_fn(|a| crate::lattice::Span::new(half, bx[a].start, bx[a].len()));
    Ok(Lattice::from_fn(spans, |a, b, c| {
        weight * (dx.at(a, b, c) + dy.at(a, b, c) + dz.at(a, b, c))
    }))
}

/// Divergence of `εE` at the interior nodes and of `μH` at the cell centres.
///
/// The L² norms follow the experiment definition, which weights the squared
/// sum by ε for both fields: for E the raw difference sum is weighted once by
/// ε; for H the norm is applied to `μ·δ·H`.
pub fn divergence<T: Real>(state: &FieldState<T>, med: &Medium<T>, grid: &GridSpec<T>) -> Result<Divergence<T>> {
    state.check_grid(grid)?;
    let [ni, nj, nk] = grid.counts();
    let div_e = divergence_of(&state.e, med.eps, [1..ni, 1..nj, 1..nk], grid)?;
    let div_h = divergence_of(&state.h, med.mu, [0..ni, 0..nj, 0..nk], grid)?;
    let dv = grid.dv();
    let raw_e_sq = div_e.weighted_sum_sq(&[1..ni, 1..nj, 1..nk], T::one())? / (med.eps * med.eps);
    let report = DivergenceReport {
        div_e_linf: div_e.max_abs(),
        div_e_l2: (med.eps * raw_e_sq * dv).sqrt(),
        div_h_linf: div_h.max_abs(),
        div_h_l2: (med.eps * div_h.weighted_sum_sq(&[0..ni, 0..nj, 0..nk], T::one())? * dv).sqrt(),
    };
    Ok(Divergence { report, div_e, div_h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, zero_state, Component};

    fn g4() -> GridSpec<f64> {
        make_grid(4, 4, 4, 0.1).unwrap()
    }

    #[test]
    fn zero_state_has_zero_norms() {
        let g = g4();
        let m = Medium::vacuum();
        let z = zero_state(&g);
        assert_eq!(norm_e(&z.e, &m, &g).unwrap(), 0.0);
        assert_eq!(norm_h(&z.h, &m, &g).unwrap(), 0.0);
        for w in Axis::ALL {
            assert_eq!(functional_i(&z, w, &m, &g).unwrap(), 0.0);
            assert_eq!(boundary_norm(&z, w, &m, &g).unwrap(), (0.0, 0.0));
        }
        assert_eq!(functional_iii(&z, &m, &g).unwrap(), 0.0);
        assert_eq!(functional_iv(&z, &z, &m, &g).unwrap(), 0.0);
        let d = divergence(&z, &m, &g).unwrap().report;
        assert_eq!(d, DivergenceReport { div_e_linf: 0.0, div_e_l2: 0.0, div_h_linf: 0.0, div_h_l2: 0.0 });
    }

    #[test]
    fn counting_examples() {
        let g = g4();
        let m = Medium::vacuum();
        let mut s = zero_state(&g);
        s.e.x = Lattice::from_fn(g.spans(Component::Ex), |_, _, _| 1.0);
        assert!((norm_e(&s.e, &m, &g).unwrap() - 36.0 / 64.0).abs() < 1e-15);
        s.h.x = Lattice::from_fn(g.spans(Component::Hx), |_, _, _| 1.0);
        assert!((norm_h(&s.h, &m, &g).unwrap() - 80.0 / 64.0).abs() < 1e-15);

        let mut s = zero_state(&g);
        s.e.y = Lattice::from_fn(g.spans(Component::Ey), |_, _, _| 1.0);
        let (e, h) = boundary_norm(&s, Axis::X, &m, &g).unwrap();
        assert!((e - 6.0).abs() < 1e-14);
        assert_eq!(h, 0.0);
    }

    #[test]
    fn identical_levels_give_zero_dt_functionals() {
        let g = g4();
        let m = Medium::vacuum();
        let s = FieldState::from_fn(&g, 0.0, |_, a, b, c| (a * b + c) as f64);
        for w in Axis::ALL {
            assert_eq!(functional_ii(&s, &s, w, &m, &g).unwrap(), 0.0);
        }
    }

    #[test]
    fn identities_hold_along_a_trajectory() {
        let g = make_grid(5, 4, 6, 0.7).unwrap();
        let m = Medium::new(1.5, 0.8).unwrap();
        let mut x = 12345u64;
        let mut s = FieldState::from_fn(&g, 0.0, |c, a, b, d| {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let v = ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
            let n = g.counts();
            // zero normal H on the walls
            let ax = c.axis().index();
            let idx = [a, b, d];
            if !c.is_electric() && (idx[ax] == 0 || idx[ax] == n[ax]) { 0.0 } else { v }
        });
        crate::grid::enforce_pec(&mut s, &g);
        let mut prev = s.clone();
        let mut cur = crate::stepper::step(&s, &g, &m).unwrap();
        let r0 = energy_report(Some(&prev), &cur, &m, &g).unwrap();
        for _ in 0..20 {
            prev = cur;
            cur = crate::stepper::step(&prev, &g, &m).unwrap();
            let r = energy_report(Some(&prev), &cur, &m, &g).unwrap();
            for w in 0..3 {
                assert!((r.q1[w] - r0.q1[w]).abs() <= 1e-12 * r0.q1[w], "q1 {w}: {} {}", r.q1[w], r0.q1[w]);
                let (a, b) = (r.q2.unwrap()[w], r0.q2.unwrap()[w]);
                assert!((a - b).abs() <= 1e-12 * b, "q2 {w}: {a} {b}");
            }
            assert!((r.q3 - r0.q3).abs() <= 1e-12 * r0.q3);
            assert!((r.q4.unwrap() - r0.q4.unwrap()).abs() <= 1e-12 * r0.q4.unwrap());
        }
    }

    #[test]
    fn weights_follow_the_medium() {
        let g = g4();
        let s = FieldState::from_fn(&g, 0.0, |_, a, b, c| 1.0 + (a + b + c) as f64);
        let one = Medium::vacuum();
        let two = Medium::new(2.0, 3.0).unwrap();
        let e1 = norm_e(&s.e, &one, &g).unwrap();
        let h1 = norm_h(&s.h, &one, &g).unwrap();
        assert!((norm_e(&s.e, &two, &g).unwrap() - 2.0 * e1).abs() < 1e-12);
        assert!((norm_h(&s.h, &two, &g).unwrap() - 3.0 * h1).abs() < 1e-12);
    }
}
