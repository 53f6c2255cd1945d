//! Half-step difference calculus on staggered lattices.

use crate::error::{AdiError, Result};
use crate::grid::{Axis, FieldState, GridSpec, VectorField};
use crate::lattice::{Lattice, Span};
use crate::real::Real;

/// Centred half-step difference of `u` along `axis`.
///
/// The output lives where both stencil reads exist. Differencing a
/// cell-centred axis covering `s..s+n` yields node points `s+1..s+n`
/// (exclusive); differencing a node axis yields cell points `s..s+n-1`.
pub fn diff<T: Real>(u: &Lattice<T>, axis: Axis, grid: &GridSpec<T>) -> Result<Lattice<T>> {
    let d = axis.index();
    let sp = u.spans()[d];
    if sp.len < 2 {
        return Err(AdiError::ExtentTooSmall { axis, len: sp.len });
    }
    let out_axis = if sp.half {
        Span::new(false, sp.start + 1, sp.len - 1)
    } else {
        Span::new(true, sp.start, sp.len - 1)
    };
    let mut spans = *u.spans();
    spans[d] = out_axis;
    let inv = grid.h(axis).recip();
    // Storage offsets of the lower and upper reads relative to the output point.
    let lower_shift = usize::from(sp.half);
    Ok(Lattice::from_fn(spans, |a, b, c| {
        let mut lo = [a, b, c];
        lo[d] -= lower_shift;
        let mut hi = lo;
        hi[d] += 1;
        (u.at(hi[0], hi[1], hi[2]) - u.at(lo[0], lo[1], lo[2])) * inv
    }))
}

fn check_same<T: Real>(a: &FieldState<T>, b: &FieldState<T>) -> Result<()> {
    let same = |x: &VectorField<T>, y: &VectorField<T>| x.iter().zip(y.iter()).all(|(p, q)| p.spans() == q.spans());
    if same(&a.e, &b.e) && same(&a.h, &b.h) {
        Ok(())
    } else {
        Err(AdiError::GridMismatch)
    }
}

/// `(next − prev)/span`, labelled at the midpoint of the two levels.
pub fn time_diff<T: Real>(next: &FieldState<T>, prev: &FieldState<T>, span: T) -> Result<FieldState<T>> {
    check_same(next, prev)?;
    if !(span.is_finite() && span != T::zero()) {
        return Err(AdiError::InvalidArgument(format!("time span must be nonzero, got {span}")));
    }
    let inv = span.recip();
    Ok(FieldState {
        e: next.e.zip_with(&prev.e, |u, v| (u - v) * inv)?,
        h: next.h.zip_with(&prev.h, |u, v| (u - v) * inv)?,
        time_level: 0.5 * (next.time_level + prev.time_level),
    })
}

/// Componentwise mean of two states.
pub fn time_avg<T: Real>(next: &FieldState<T>, prev: &FieldState<T>) -> Result<FieldState<T>> {
    check_same(next, prev)?;
    let half = T::lit(0.5);
    Ok(FieldState {
        e: next.e.zip_with(&prev.e, |u, v| (u + v) * half)?,
        h: next.h.zip_with(&prev.h, |u, v| (u + v) * half)?,
        time_level: 0.5 * (next.time_level + prev.time_level),
    })
}

/// `(δ_y U_z, δ_z U_x, δ_x U_y)`.
pub fn split_curl_1<T: Real>(u: &VectorField<T>, grid: &GridSpec<T>) -> Result<VectorField<T>> {
    Ok(VectorField::new(
        diff(&u.z, Axis::Y, grid)?,
        diff(&u.x, Axis::Z, grid)?,
        diff(&u.y, Axis::X, grid)?,
    ))
}

/// `(δ_z U_y, δ_x U_z, δ_y U_x)`.
pub fn split_curl_2<T: Real>(u: &VectorField<T>, grid: &GridSpec<T>) -> Result<VectorField<T>> {
    Ok(VectorField::new(
        diff(&u.y, Axis::Z, grid)?,
        diff(&u.z, Axis::X, grid)?,
        diff(&u.x, Axis::Y, grid)?,
    ))
}

/// Applies `diff` along `axis` to each component of a vector field.
pub fn diff_vector<T: Real>(u: &VectorField<T>, axis: Axis, grid: &GridSpec<T>) -> Result<VectorField<T>> {
    Ok(VectorField::new(
        diff(&u.x, axis, grid)?,
        diff(&u.y, axis, grid)?,
        diff(&u.z, axis, grid)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, zero_state, Component};

    fn grid(n: usize) -> GridSpec<f64> {
        make_grid(n, n, n, 0.1).unwrap()
    }

    #[test]
    fn constant_differences_vanish() {
        let g = grid(4);
        let u = Lattice::from_fn(g.spans(Component::Ex), |_, _, _| 3.5);
        for ax in Axis::ALL {
            let d = diff(&u, ax, &g).unwrap();
            assert!(d.as_slice().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn diff_output_spans() {
        let g = grid(5);
        let u = Lattice::<f64>::zeros(g.spans(Component::Ex));
        let dx = diff(&u, Axis::X, &g).unwrap();
        assert_eq!(dx.spans()[0], Span::new(false, 1, 4));
        let dy = diff(&u, Axis::Y, &g).unwrap();
        assert_eq!(dy.spans()[1], Span::new(true, 0, 5));
        let thin = Lattice::<f64>::zeros([Span::new(true, 0, 1), Span::new(false, 0, 3), Span::new(false, 0, 3)]);
        assert_eq!(
            diff(&thin, Axis::X, &g),
            Err(AdiError::ExtentTooSmall { axis: Axis::X, len: 1 })
        );
    }

    #[test]
    fn affine_is_exact() {
        let g = grid(8);
        let u = Lattice::from_fn(g.spans(Component::Ex), |a, _, _| g.coordinate(Axis::X, a, true));
        let d = diff(&u, Axis::X, &g).unwrap();
        for &v in d.as_slice() {
            assert!((v - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn cosine_difference_matches_trig_identity() {
        let g = grid(10);
        let pi = std::f64::consts::PI;
        let u = Lattice::from_fn(g.spans(Component::Ex), |a, _, _| {
            (pi * (1.0 - g.coordinate(Axis::X, a, true))).cos()
        });
        let d = diff(&u, Axis::X, &g).unwrap();
        let factor = 2.0 * (pi * g.dx / 2.0).sin() / g.dx;
        for a in d.spans()[0].range() {
            let x = g.coordinate(Axis::X, a, false);
            let want = factor * (pi * (1.0 - x)).sin();
            assert!((d.at(a, 2, 3) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn time_ops() {
        let g = grid(3);
        let u = FieldState::from_fn(&g, 1.0, |c, a, b, d| (c.tag() as usize + a + 2 * b + 3 * d) as f64);
        let z = zero_state(&g);
        assert_eq!(time_diff(&u, &u, 0.1).unwrap().max_abs(), 0.0);
        let twice = u.scaled(2.0);
        let d = time_diff(&twice, &u, 1.0).unwrap();
        assert_eq!(d.e, u.e);
        assert_eq!(d.h, u.h);
        assert_eq!(time_avg(&u, &u).unwrap().e, u.e);
        assert_eq!(time_avg(&u, &u.scaled(-1.0)).unwrap().max_abs(), 0.0);
        assert_eq!(time_avg(&z, &u).unwrap().h, u.scaled(0.5).h);
        let other = zero_state(&grid(4));
        assert_eq!(time_diff(&u, &other, 1.0), Err(AdiError::GridMismatch));
    }

    #[test]
    fn split_curls_land_on_dual_locations() {
        let g = grid(4);
        let s = zero_state(&g);
        let c1 = split_curl_1(&s.e, &g).unwrap();
        assert_eq!(*c1.x.spans(), g.spans(Component::Hx));
        assert_eq!(*c1.y.spans(), g.spans(Component::Hy));
        assert_eq!(*c1.z.spans(), g.spans(Component::Hz));
        let c2 = split_curl_2(&s.e, &g).unwrap();
        assert_eq!(*c2.x.spans(), g.spans(Component::Hx));
        assert!(c2.iter().all(|l| l.max_abs() == 0.0));
    }

    #[test]
    fn ez_linear_in_z_has_no_y_difference() {
        let g = grid(4);
        let mut s = zero_state(&g);
        s.e.z = Lattice::from_fn(g.spans(Component::Ez), |_, _, c| g.coordinate(Axis::Z, c, true));
        let c1 = split_curl_1(&s.e, &g).unwrap();
        assert!(c1.x.as_slice().iter().all(|&v| v == 0.0));
        s.h.x = Lattice::from_fn(g.spans(Component::Hx), |a, _, _| g.coordinate(Axis::X, a, false));
        let c2 = split_curl_2(&s.h, &g).unwrap();
        assert!(c2.z.as_slice().iter().all(|&v| v == 0.0));
    }
}
