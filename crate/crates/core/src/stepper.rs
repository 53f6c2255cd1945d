//! Two-stage ADI update.
//!
//! Each stage advances half a step. Substituting the implicit H update into
//! the E update turns every E component into independent tridiagonal lines
//! along one axis:
//!
//! ```text
//! E_d* − c·δ_wδ_w E_d* = E_d + a·(δ_{d+1} H_{d+2} − δ_{d+2} H_{d+1}) − c·δ_wδ_d E_w
//! ```
//!
//! with `a = Δt/(2ε)`, `c = Δt²/(4με)` and axes taken cyclically. Stage one
//! solves along `w = d+1`, stage two along `w = d+2`. The H components are
//! then explicit.

use rayon::prelude::*;

use crate::error::Result;
use crate::grid::{enforce_pec, Axis, Component, FieldState, GridSpec, Medium};
use crate::lattice::Lattice;
use crate::operators::diff;
use crate::real::Real;
use crate::tridiag::ThomasFactor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    One,
    Two,
}

impl Stage {
    /// Offset from the component axis to the implicit axis.
    fn shift(self) -> usize {
        match self {
            Stage::One => 1,
            Stage::Two => 2,
        }
    }
}

const E_OF: [Component; 3] = [Component::Ex, Component::Ey, Component::Ez];
const H_OF: [Component; 3] = [Component::Hx, Component::Hy, Component::Hz];

#[derive(Clone, Copy)]
struct View<'a, T> {
    data: &'a [T],
    s0: usize,
    s1: usize,
}

impl<'a, T: Real> View<'a, T> {
    fn new(l: &'a Lattice<T>) -> Self {
        let [_, n1, n2] = l.dims();
        Self {
            data: l.as_slice(),
            s0: n1 * n2,
            s1: n2,
        }
    }

    #[inline(always)]
    fn at(&self, p: [usize; 3]) -> T {
        self.data[p[0] * self.s0 + p[1] * self.s1 + p[2]]
    }
}

#[inline(always)]
fn up(mut p: [usize; 3], a: usize) -> [usize; 3] {
    p[a] += 1;
    p
}

#[inline(always)]
fn down(mut p: [usize; 3], a: usize) -> [usize; 3] {
    p[a] -= 1;
    p
}

/// Right-hand side of the implicit lines for `E_d`. Entries on the PEC walls
/// are left at zero.
fn e_rhs<T: Real>(d: usize, w: usize, s: &FieldState<T>, grid: &GridSpec<T>, med: &Medium<T>) -> Vec<T> {
    let n = grid.counts();
    let h = [grid.dx, grid.dy, grid.dz];
    let p1 = (d + 1) % 3;
    let p2 = (d + 2) % 3;
    let ed = s.lattice(E_OF[d]);
    let dims = ed.dims();
    let ed = View::new(ed);
    let ew = View::new(s.lattice(E_OF[w]));
    let hp1 = View::new(s.lattice(H_OF[p1]));
    let hp2 = View::new(s.lattice(H_OF[p2]));
    let a = grid.dt / (T::lit(2.0) * med.eps);
    let c = med.perturbation(grid.dt);
    let inv_p1 = h[p1].recip();
    let inv_p2 = h[p2].recip();
    let inv_dw = (h[d] * h[w]).recip();
    let mut out = vec![T::zero(); dims[0] * dims[1] * dims[2]];
    out.par_chunks_mut(dims[1] * dims[2])
        .enumerate()
        .for_each(|(i0, plane)| {
            for i1 in 0..dims[1] {
                for i2 in 0..dims[2] {
                    let p = [i0, i1, i2];
                    if (0..3).any(|ax| ax != d && (p[ax] == 0 || p[ax] == n[ax])) {
                        continue;
                    }
                    let curl = (hp2.at(p) - hp2.at(down(p, p1))) * inv_p1
                        - (hp1.at(p) - hp1.at(down(p, p2))) * inv_p2;
                    let pd = up(p, d);
                    let cross = (ew.at(pd) - ew.at(p) - ew.at(down(pd, w)) + ew.at(down(p, w))) * inv_dw;
                    plane[i1 * dims[2] + i2] = ed.at(p) + a * curl - c * cross;
                }
            }
        });
    out
}

/// Solves every line along `w` in place. Line ends are the PEC zeros.
fn solve_lines<T: Real>(data: &mut [T], dims: [usize; 3], w: usize, f: &ThomasFactor<T>) {
    let n = dims[w];
    match w {
        2 => data
            .par_chunks_mut(n)
            .for_each(|line| f.solve_in_place(&mut line[1..n - 1])),
        1 => {
            let row = dims[2];
            data.par_chunks_mut(dims[1] * row)
                .for_each(|plane| f.solve_strided(&mut plane[row..], row, row));
        }
        _ => {
            let plane = dims[1] * dims[2];
            f.solve_strided(&mut data[plane..], plane, plane);
        }
    }
}

/// `H_d += b·(δ_{d+2} E_{d+1} − δ_{d+1} E_{d+2})` at every stored H point.
fn h_update<T: Real>(d: usize, hd: &mut Lattice<T>, e_p1: &Lattice<T>, e_p2: &Lattice<T>, grid: &GridSpec<T>, b: T) {
    let h = [grid.dx, grid.dy, grid.dz];
    let p1 = (d + 1) % 3;
    let p2 = (d + 2) % 3;
    let dims = hd.dims();
    let e1 = View::new(e_p1);
    let e2 = View::new(e_p2);
    let inv_p1 = h[p1].recip();
    let inv_p2 = h[p2].recip();
    hd.as_mut_slice()
        .par_chunks_mut(dims[1] * dims[2])
        .enumerate()
        .for_each(|(i0, plane)| {
            for i1 in 0..dims[1] {
                for i2 in 0..dims[2] {
                    let q = [i0, i1, i2];
                    let curl = (e1.at(up(q, p2)) - e1.at(q)) * inv_p2 - (e2.at(up(q, p1)) - e2.at(q)) * inv_p1;
                    plane[i1 * dims[2] + i2] += b * curl;
                }
            }
        });
}

fn half_step<T: Real>(s: &FieldState<T>, grid: &GridSpec<T>, med: &Medium<T>, stage: Stage) -> Result<FieldState<T>> {
    s.check_grid(grid)?;
    s.check_finite()?;
    let n = grid.counts();
    let h = [grid.dx, grid.dy, grid.dz];
    let c = med.perturbation(grid.dt);

    let mut next = s.clone();
    for (d, &comp) in E_OF.iter().enumerate() {
        let w = (d + stage.shift()) % 3;
        let mut rhs = e_rhs(d, w, s, grid, med);
        let factor = ThomasFactor::new(c / (h[w] * h[w]), n[w] - 1);
        let dims = s.lattice(comp).dims();
        solve_lines(&mut rhs, dims, w, &factor);
        *next.lattice_mut(comp) = Lattice::from_vec(*s.lattice(comp).spans(), rhs)?;
    }

    let b = grid.dt / (T::lit(2.0) * med.mu);
    for (d, &comp) in H_OF.iter().enumerate() {
        let p1 = (d + 1) % 3;
        let p2 = (d + 2) % 3;
        // Stage one pairs the fresh E_{d+1} with the old E_{d+2}; stage two the reverse.
        let (e1, e2) = match stage {
            Stage::One => (next.lattice(E_OF[p1]), s.lattice(E_OF[p2])),
            Stage::Two => (s.lattice(E_OF[p1]), next.lattice(E_OF[p2])),
        };
        let mut hd = s.lattice(comp).clone();
        h_update(d, &mut hd, e1, e2, grid, b);
        *next.lattice_mut(comp) = hd;
    }
    // The line solves already leave the walls at zero; this is a no-op kept
    // for inputs whose walls were not clean.
    enforce_pec(&mut next, grid);
    next.time_level = s.time_level + 0.5;
    Ok(next)
}

/// Level `n` to level `n+½`: implicit Ex along y, Ey along z, Ez along x.
pub fn stage1<T: Real>(s: &FieldState<T>, grid: &GridSpec<T>, med: &Medium<T>) -> Result<FieldState<T>> {
    half_step(s, grid, med, Stage::One)
}

/// Level `n+½` to level `n+1`: implicit Ex along z, Ey along x, Ez along y.
pub fn stage2<T: Real>(s: &FieldState<T>, grid: &GridSpec<T>, med: &Medium<T>) -> Result<FieldState<T>> {
    half_step(s, grid, med, Stage::Two)
}

pub fn step<T: Real>(s: &FieldState<T>, grid: &GridSpec<T>, med: &Medium<T>) -> Result<FieldState<T>> {
    stage2(&stage1(s, grid, med)?, grid, med)
}

/// Advances `steps` full steps.
pub fn advance<T: Real>(s: &FieldState<T>, grid: &GridSpec<T>, med: &Medium<T>, steps: usize) -> Result<FieldState<T>> {
    let mut cur = s.clone();
    for _ in 0..steps {
        cur = step(&cur, grid, med)?;
    }
    Ok(cur)
}

/// Largest violation of the six coupled equations of one stage, evaluated
/// directly in their unsubstituted form, together with any nonzero
/// tangential E on the walls of `next`. Scaled by `max(1, max |field|)`.
pub fn residual<T: Real>(
    prev: &FieldState<T>,
    next: &FieldState<T>,
    grid: &GridSpec<T>,
    med: &Medium<T>,
    stage: Stage,
) -> Result<T> {
    prev.check_grid(grid)?;
    next.check_grid(grid)?;
    let n = grid.counts();
    let half_dt = grid.dt / T::lit(2.0);
    let mut worst = T::zero();

    for d in 0..3 {
        let ax = |i: usize| Axis::from_index(i % 3).expect("axis index");
        let p1 = (d + 1) % 3;
        let p2 = (d + 2) % 3;
        // E_d: ε(E* − E)/(Δt/2) = δ_{d+1} H_{d+2} − δ_{d+2} H_{d+1}
        let (h_plus, h_minus) = match stage {
            Stage::One => (next.lattice(H_OF[p2]), prev.lattice(H_OF[p1])),
            Stage::Two => (prev.lattice(H_OF[p2]), next.lattice(H_OF[p1])),
        };
        let dp = diff(h_plus, ax(p1), grid)?;
        let dm = diff(h_minus, ax(p2), grid)?;
        let old = prev.lattice(E_OF[d]);
        let new = next.lattice(E_OF[d]);
        let sp = *new.spans();
        for a in sp[0].range() {
            for b in sp[1].range() {
                for c in sp[2].range() {
                    let p = [a, b, c];
                    if (0..3).any(|x| x != d && (p[x] == 0 || p[x] == n[x])) {
                        worst = worst.max(new.at(a, b, c).abs());
                        continue;
                    }
                    let lhs = med.eps * (new.at(a, b, c) - old.at(a, b, c)) / half_dt;
                    let rhs = dp.at(a, b, c) - dm.at(a, b, c);
                    worst = worst.max((lhs - rhs).abs() * half_dt / med.eps);
                }
            }
        }

        // H_d: μ(H* − H)/(Δt/2) = δ_{d+2} E_{d+1} − δ_{d+1} E_{d+2}
        let (e1, e2) = match stage {
            Stage::One => (next.lattice(E_OF[p1]), prev.lattice(E_OF[p2])),
            Stage::Two => (prev.lattice(E_OF[p1]), next.lattice(E_OF[p2])),
        };
        let d1 = diff(e1, ax(p2), grid)?;
        let d2 = diff(e2, ax(p1), grid)?;
        let old = prev.lattice(H_OF[d]);
        let new = next.lattice(H_OF[d]);
        let sp = *new.spans();
        for a in sp[0].range() {
            for b in sp[1].range() {
                for c in sp[2].range() {
                    let lhs = med.mu * (new.at(a, b, c) - old.at(a, b, c)) / half_dt;
                    let rhs = d1.at(a, b, c) - d2.at(a, b, c);
                    worst = worst.max((lhs - rhs).abs() * half_dt / med.mu);
                }
            }
        }
    }
    let scale = T::one().max(prev.max_abs()).max(next.max_abs());
    Ok(worst / scale)
}
