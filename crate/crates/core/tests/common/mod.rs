//! Naive reference implementations used as oracles by the integration
//! tests. Everything here works on plain `Vec<f64>` arrays with explicit
//! index arithmetic and shares no code with the library beyond reading
//! values out of a `FieldState`.
//!
//! Points that a difference cannot produce are stored as NaN, so a sum that
//! strays outside its valid range poisons the result instead of silently
//! agreeing.

#![allow(dead_code)]

use std::ops::Range;

use adifdtd::{Axis, Component, FieldState, GridSpec};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A scalar grid function on one staggered lattice, indexed by global
/// staggered indices. A `half` axis of `n` cells has `n` points, an integer
/// axis `n + 1`.
#[derive(Debug, Clone)]
pub struct Arr {
    pub half: [bool; 3],
    pub dims: [usize; 3],
    pub data: Vec<f64>,
}

impl Arr {
    pub fn new(half: [bool; 3], n: [usize; 3], fill: f64) -> Self {
        let dims = [0, 1, 2].map(|a| if half[a] { n[a] } else { n[a] + 1 });
        Self {
            half,
            dims,
            data: vec![fill; dims[0] * dims[1] * dims[2]],
        }
    }

    fn off(&self, p: [usize; 3]) -> usize {
        assert!(p[0] < self.dims[0] && p[1] < self.dims[1] && p[2] < self.dims[2], "{p:?} outside {:?}", self.dims);
        (p[0] * self.dims[1] + p[1]) * self.dims[2] + p[2]
    }

    pub fn get(&self, p: [usize; 3]) -> f64 {
        self.data[self.off(p)]
    }

    pub fn set(&mut self, p: [usize; 3], v: f64) {
        let o = self.off(p);
        self.data[o] = v;
    }

    pub fn points(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for a in 0..self.dims[0] {
            for b in 0..self.dims[1] {
                for c in 0..self.dims[2] {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }

    /// Plain (uncompensated) sum of squares over a box.
    pub fn sum_sq(&self, r: &[Range<usize>; 3]) -> f64 {
        let mut s = 0.0;
        for a in r[0].clone() {
            for b in r[1].clone() {
                for c in r[2].clone() {
                    let v = self.get([a, b, c]);
                    s += v * v;
                }
            }
        }
        s
    }
}

/// Six naive component arrays plus the grid description.
#[derive(Debug, Clone)]
pub struct Naive {
    pub n: [usize; 3],
    pub h: [f64; 3],
    pub e: [Arr; 3],
    pub hf: [Arr; 3],
}

pub fn e_half(d: usize) -> [bool; 3] {
    [0, 1, 2].map(|a| a == d)
}

pub fn h_half(d: usize) -> [bool; 3] {
    [0, 1, 2].map(|a| a != d)
}

impl Naive {
    pub fn from_state(s: &FieldState<f64>, g: &GridSpec<f64>) -> Self {
        let n = [g.ni, g.nj, g.nk];
        let copy = |c: Component, half: [bool; 3]| {
            let mut a = Arr::new(half, n, 0.0);
            let l = s.lattice(c);
            for p in a.points() {
                a.set(p, l.at(p[0], p[1], p[2]));
            }
            a
        };
        Self {
            n,
            h: [g.dx, g.dy, g.dz],
            e: [copy(Component::Ex, e_half(0)), copy(Component::Ey, e_half(1)), copy(Component::Ez, e_half(2))],
            hf: [copy(Component::Hx, h_half(0)), copy(Component::Hy, h_half(1)), copy(Component::Hz, h_half(2))],
        }
    }

    pub fn dv(&self) -> f64 {
        self.h[0] * self.h[1] * self.h[2]
    }
}

/// `δ_w u`. Invalid output points are NaN.
pub fn d(u: &Arr, w: usize, n: [usize; 3], h: [f64; 3]) -> Arr {
    let mut half = u.half;
    half[w] = !half[w];
    let mut out = Arr::new(half, n, f64::NAN);
    for p in out.points() {
        let mut lo = p;
        let mut hi = p;
        if u.half[w] {
            // node p between cells p-1 and p
            if p[w] == 0 || p[w] == n[w] {
                continue;
            }
            lo[w] = p[w] - 1;
        } else {
            // cell p between nodes p and p+1
            hi[w] = p[w] + 1;
        }
        out.set(p, (u.get(hi) - u.get(lo)) / h[w]);
    }
    out
}

pub type Vec3 = [Arr; 3];

pub fn d_vec(u: &Vec3, w: usize, n: [usize; 3], h: [f64; 3]) -> Vec3 {
    [d(&u[0], w, n, h), d(&u[1], w, n, h), d(&u[2], w, n, h)]
}

/// `(δ_y U_z, δ_z U_x, δ_x U_y)`
pub fn curl1(u: &Vec3, n: [usize; 3], h: [f64; 3]) -> Vec3 {
    [d(&u[2], 1, n, h), d(&u[0], 2, n, h), d(&u[1], 0, n, h)]
}

/// `(δ_z U_y, δ_x U_z, δ_y U_x)`
pub fn curl2(u: &Vec3, n: [usize; 3], h: [f64; 3]) -> Vec3 {
    [d(&u[1], 2, n, h), d(&u[2], 0, n, h), d(&u[0], 1, n, h)]
}

fn e_rng(half: bool, n: usize) -> Range<usize> {
    if half {
        0..n
    } else {
        1..n
    }
}

fn h_rng(half: bool, n: usize) -> Range<usize> {
    if half {
        0..n
    } else {
        0..n + 1
    }
}

/// `‖U‖_E²` for a field on (or shaped like) electric points.
pub fn norm_e(u: &Vec3, weight: f64, nv: &Naive) -> f64 {
    let mut s = 0.0;
    for c in u {
        let r = [0, 1, 2].map(|a| e_rng(c.half[a], nv.n[a]));
        s += c.sum_sq(&r);
    }
    weight * s * nv.dv()
}

/// `‖V‖_H²` for a field on (or shaped like) magnetic points.
pub fn norm_h(v: &Vec3, weight: f64, nv: &Naive) -> f64 {
    let mut s = 0.0;
    for c in v {
        let r = [0, 1, 2].map(|a| h_rng(c.half[a], nv.n[a]));
        s += c.sum_sq(&r);
    }
    weight * s * nv.dv()
}

/// Norm of a field differenced along `w`: the two planes touching the walls
/// along `w` are left to the boundary terms.
pub fn norm_shifted(u: &Vec3, w: usize, weight: f64, nv: &Naive) -> f64 {
    let mut s = 0.0;
    for c in u {
        let r = [0, 1, 2].map(|a| {
            let n = nv.n[a];
            match (a == w, c.half[a]) {
                (true, true) => 1..n - 1,
                (true, false) => 1..n,
                (false, half) => e_rng(half, n),
            }
        });
        s += c.sum_sq(&r);
    }
    weight * s * nv.dv()
}

fn face(nv: &Naive, w: usize) -> f64 {
    let area: f64 = (0..3).filter(|&a| a != w).map(|a| nv.h[a]).product();
    area / nv.h[w]
}

fn plane_sum(c: &Arr, w: usize, nv: &Naive) -> f64 {
    let mut s = 0.0;
    for plane in [1, nv.n[w] - 1] {
        let r = [0, 1, 2].map(|a| if a == w { plane..plane + 1 } else { e_rng(c.half[a], nv.n[a]) });
        s += c.sum_sq(&r);
    }
    s
}

/// Tangential components on the planes one cell in from the `w` walls.
pub fn boundary_e(u: &Vec3, w: usize, weight: f64, nv: &Naive) -> f64 {
    let s: f64 = (0..3).filter(|&t| t != w).map(|t| plane_sum(&u[t], w, nv)).sum();
    weight * s * face(nv, w)
}

/// Normal component on the same planes.
pub fn boundary_h(v: &Vec3, w: usize, weight: f64, nv: &Naive) -> f64 {
    weight * plane_sum(&v[w], w, nv) * face(nv, w)
}

pub fn functional_i(nv: &Naive, w: usize, eps: f64, mu: f64, dt: f64) -> f64 {
    let (n, h) = (nv.n, nv.h);
    let c = dt * dt / (4.0 * mu * eps);
    let c1e = curl1(&nv.e, n, h);
    let c2h = curl2(&nv.hf, n, h);
    norm_shifted(&d_vec(&nv.e, w, n, h), w, eps, nv)
        + norm_shifted(&d_vec(&nv.hf, w, n, h), w, mu, nv)
        + boundary_e(&nv.e, w, eps, nv)
        + boundary_h(&nv.hf, w, mu, nv)
        + c * (norm_shifted(&d_vec(&c1e, w, n, h), w, eps, nv)
            + norm_shifted(&d_vec(&c2h, w, n, h), w, mu, nv)
            + boundary_e(&c2h, w, mu, nv)
            + boundary_h(&c1e, w, eps, nv))
}

pub fn functional_iii(nv: &Naive, eps: f64, mu: f64, dt: f64) -> f64 {
    let c = dt * dt / (4.0 * mu * eps);
    norm_e(&nv.e, eps, nv)
        + norm_h(&nv.hf, mu, nv)
        + c * (norm_e(&curl2(&nv.hf, nv.n, nv.h), mu, nv) + norm_h(&curl1(&nv.e, nv.n, nv.h), eps, nv))
}

/// `(max, sqrt(Σ v² Δv))` of `weight·(δ·U)` over `range`, plus the raw
/// divergence values.
pub struct NaiveDiv {
    pub linf: f64,
    pub sum_sq: f64,
}

/// Divergence of εE at interior nodes.
pub fn div_e(nv: &Naive, eps: f64) -> NaiveDiv {
    let [ni, nj, nk] = nv.n;
    let [dx, dy, dz] = nv.h;
    let (ex, ey, ez) = (&nv.e[0], &nv.e[1], &nv.e[2]);
    let (mut linf, mut sum_sq) = (0.0_f64, 0.0);
    for i in 1..ni {
        for j in 1..nj {
            for k in 1..nk {
                let v = (ex.get([i, j, k]) - ex.get([i - 1, j, k])) / dx
                    + (ey.get([i, j, k]) - ey.get([i, j - 1, k])) / dy
                    + (ez.get([i, j, k]) - ez.get([i, j, k - 1])) / dz;
                linf = linf.max((eps * v).abs());
                sum_sq += v * v;
            }
        }
    }
    NaiveDiv { linf, sum_sq }
}

/// Divergence of μH at cell centres; `sum_sq` is of `μ·δ·H`.
pub fn div_h(nv: &Naive, mu: f64) -> NaiveDiv {
    let [ni, nj, nk] = nv.n;
    let [dx, dy, dz] = nv.h;
    let (hx, hy, hz) = (&nv.hf[0], &nv.hf[1], &nv.hf[2]);
    let (mut linf, mut sum_sq) = (0.0_f64, 0.0);
    for i in 0..ni {
        for j in 0..nj {
            for k in 0..nk {
                let v = mu
                    * ((hx.get([i + 1, j, k]) - hx.get([i, j, k])) / dx
                        + (hy.get([i, j + 1, k]) - hy.get([i, j, k])) / dy
                        + (hz.get([i, j, k + 1]) - hz.get([i, j, k])) / dz);
                linf = linf.max(v.abs());
                sum_sq += v * v;
            }
        }
    }
    NaiveDiv { linf, sum_sq }
}

/// Dense Gaussian elimination with partial pivoting. `a` is row-major n×n.
pub fn dense_solve(mut a: Vec<f64>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    assert_eq!(a.len(), n * n);
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs())).unwrap();
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            b.swap(col, piv);
        }
        let p = a[col * n + col];
        assert!(p != 0.0, "singular matrix");
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[r * n + k] -= f * a[col * n + k];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for k in r + 1..n {
            s -= a[r * n + k] * x[k];
        }
        x[r] = s / a[r * n + r];
    }
    x
}

/// Dense oracle for a line system `(1+2λ)u_p − λ(u_{p−1}+u_{p+1}) = r_p`
/// with zero ends.
pub fn dense_tridiagonal(lambda: f64, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut a = vec![0.0; n * n];
    for p in 0..n {
        a[p * n + p] = 1.0 + 2.0 * lambda;
        if p > 0 {
            a[p * n + p - 1] = -lambda;
        }
        if p + 1 < n {
            a[p * n + p + 1] = -lambda;
        }
    }
    dense_solve(a, rhs.to_vec())
}

/// Is electric component `d` pinned by the wall at point `p`?
pub fn on_wall(d: usize, p: [usize; 3], n: [usize; 3]) -> bool {
    (0..3).any(|a| a != d && (p[a] == 0 || p[a] == n[a]))
}

/// Unknown numbering for a dense stage solve: all E points, then all H points.
struct Numbering {
    base: [usize; 6],
    total: usize,
}

impl Numbering {
    fn new(nv: &Naive) -> Self {
        let mut base = [0; 6];
        let mut t = 0;
        for (slot, arr) in nv.e.iter().chain(nv.hf.iter()).enumerate() {
            base[slot] = t;
            t += arr.data.len();
        }
        Self { base, total: t }
    }

    fn index(&self, nv: &Naive, slot: usize, p: [usize; 3]) -> usize {
        let arr = if slot < 3 { &nv.e[slot] } else { &nv.hf[slot - 3] };
        self.base[slot] + (p[0] * arr.dims[1] + p[1]) * arr.dims[2] + p[2]
    }
}

/// The two source points and the mesh size of `δ_w` of a field whose
/// staggering along `w` is `src_half`, evaluated at output point `p`.
fn stencil(p: [usize; 3], w: usize, src_half: bool, h: [f64; 3]) -> ([usize; 3], [usize; 3], f64) {
    let (mut lo, mut hi) = (p, p);
    if src_half {
        lo[w] -= 1;
    } else {
        hi[w] += 1;
    }
    (lo, hi, h[w])
}

/// One stage of the scheme assembled as a single dense linear system in all
/// six components and solved by elimination. `stage` is 1 or 2.
pub fn dense_stage(nv: &Naive, eps: f64, mu: f64, dt: f64, stage: u8) -> Naive {
    let num = Numbering::new(nv);
    let nt = num.total;
    let mut a = vec![0.0; nt * nt];
    let mut b = vec![0.0; nt];
    let (n, h) = (nv.n, nv.h);
    let ae = dt / (2.0 * eps);
    let bh = dt / (2.0 * mu);
    for dd in 0..3 {
        let p1 = (dd + 1) % 3;
        let p2 = (dd + 2) % 3;
        // E_d: new − old = a(δ_{p1} H_{p2} − δ_{p2} H_{p1}); stage 1 takes
        // H_{p2} at the new level, stage 2 takes H_{p1} there.
        for p in nv.e[dd].points() {
            let row = num.index(nv, dd, p);
            a[row * nt + row] = 1.0;
            if on_wall(dd, p, n) {
                continue;
            }
            b[row] = nv.e[dd].get(p);
            for (axis, comp, sign) in [(p1, p2, 1.0), (p2, p1, -1.0)] {
                let implicit = (stage == 1) == (comp == p2);
                let (lo, hi, hw) = stencil(p, axis, true, h);
                let k = sign * ae / hw;
                if implicit {
                    a[row * nt + num.index(nv, 3 + comp, hi)] -= k;
                    a[row * nt + num.index(nv, 3 + comp, lo)] += k;
                } else {
                    let src = &nv.hf[comp];
                    b[row] += k * (src.get(hi) - src.get(lo));
                }
            }
        }
        // H_d: new − old = b(δ_{p2} E_{p1} − δ_{p1} E_{p2}); stage 1 takes
        // E_{p1} at the new level, stage 2 takes E_{p2} there.
        for p in nv.hf[dd].points() {
            let row = num.index(nv, 3 + dd, p);
            a[row * nt + row] = 1.0;
            b[row] = nv.hf[dd].get(p);
            for (axis, comp, sign) in [(p2, p1, 1.0), (p1, p2, -1.0)] {
                let implicit = (stage == 1) == (comp == p1);
                let (lo, hi, hw) = stencil(p, axis, false, h);
                let k = sign * bh / hw;
                if implicit {
                    a[row * nt + num.index(nv, comp, hi)] -= k;
                    a[row * nt + num.index(nv, comp, lo)] += k;
                } else {
                    let src = &nv.e[comp];
                    b[row] += k * (src.get(hi) - src.get(lo));
                }
            }
        }
    }
    let x = dense_solve(a, b);
    let mut out = nv.clone();
    for slot in 0..6 {
        let arr = if slot < 3 { &mut out.e[slot] } else { &mut out.hf[slot - 3] };
        let pts = arr.points();
        for p in pts {
            let idx = num.base[slot] + (p[0] * arr.dims[1] + p[1]) * arr.dims[2] + p[2];
            arr.set(p, x[idx]);
        }
    }
    out
}

/// Largest componentwise difference between a naive state and a library
/// state, relative to `max(1, max |value|)`.
pub fn max_rel_diff(nv: &Naive, s: &FieldState<f64>) -> f64 {
    let mut worst = 0.0_f64;
    let mut scale = 1.0_f64;
    for (slot, c) in Component::ALL.into_iter().enumerate() {
        let arr = if slot < 3 { &nv.e[slot] } else { &nv.hf[slot - 3] };
        let l = s.lattice(c);
        for p in arr.points() {
            let (x, y) = (arr.get(p), l.at(p[0], p[1], p[2]));
            worst = worst.max((x - y).abs());
            scale = scale.max(x.abs());
        }
    }
    worst / scale
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random state with zero tangential E on the walls. With `zero_normal_h`
/// the wall-normal H components on the walls are zeroed too.
pub fn random_pec_state(g: &GridSpec<f64>, seed: u64, zero_normal_h: bool) -> FieldState<f64> {
    let mut r = rng(seed);
    let n = [g.ni, g.nj, g.nk];
    FieldState::from_fn(g, 0.0, |c, a, b, cc| {
        let p = [a, b, cc];
        let d = c.axis().index();
        let v: f64 = r.gen_range(-1.0..1.0);
        if c.is_electric() {
            if on_wall(d, p, n) {
                0.0
            } else {
                v
            }
        } else if zero_normal_h && (p[d] == 0 || p[d] == n[d]) {
            0.0
        } else {
            v
        }
    })
}

pub fn axis_of(w: usize) -> Axis {
    Axis::from_index(w).unwrap()
}
