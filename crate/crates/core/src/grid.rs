//! Staggered Yee grid on the unit cube, field storage and PEC walls.

use std::fmt;

use crate::error::{AdiError, Result};
use crate::lattice::{Lattice, Span};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Axis> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The six staggered field components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Ex,
    Ey,
    Ez,
    Hx,
    Hy,
    Hz,
}

impl Component {
    pub const ALL: [Component; 6] = [
        Component::Ex,
        Component::Ey,
        Component::Ez,
        Component::Hx,
        Component::Hy,
        Component::Hz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Component::Ex => "Ex",
            Component::Ey => "Ey",
            Component::Ez => "Ez",
            Component::Hx => "Hx",
            Component::Hy => "Hy",
            Component::Hz => "Hz",
        }
    }

    pub fn is_electric(self) -> bool {
        matches!(self, Component::Ex | Component::Ey | Component::Ez)
    }

    /// Direction the component points along.
    pub fn axis(self) -> Axis {
        match self {
            Component::Ex | Component::Hx => Axis::X,
            Component::Ey | Component::Hy => Axis::Y,
            Component::Ez | Component::Hz => Axis::Z,
        }
    }

    /// Numeric tag used by the binary snapshot format.
    pub fn tag(self) -> u32 {
        match self {
            Component::Ex => 0,
            Component::Ey => 1,
            Component::Ez => 2,
            Component::Hx => 3,
            Component::Hy => 4,
            Component::Hz => 5,
        }
    }

    pub fn from_tag(tag: u32) -> Option<Component> {
        Self::ALL.get(tag as usize).copied()
    }

    /// Half-offset flags per axis. E sits half a cell along its own axis,
    /// H sits half a cell along the two other axes.
    pub fn half_offsets(self) -> [bool; 3] {
        let d = self.axis().index();
        let mut out = [false; 3];
        for (a, o) in out.iter_mut().enumerate() {
            *o = (a == d) == self.is_electric();
        }
        out
    }

    /// Full-extent spans of this component on an `I x J x K` grid.
    pub fn spans(self, counts: [usize; 3]) -> [Span; 3] {
        let h = self.half_offsets();
        std::array::from_fn(|a| Span::new(h[a], 0, if h[a] { counts[a] } else { counts[a] + 1 }))
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Uniform grid geometry of the unit cube plus the time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub ni: usize,
    pub nj: usize,
    pub nk: usize,
    pub dx: T,
    pub dy: T,
    pub dz: T,
    pub dt: T,
}

/// Builds the grid; every axis needs at least three cells.
pub fn make_grid<T: Real>(ni: usize, nj: usize, nk: usize, dt: T) -> Result<GridSpec<T>> {
    for (axis, count) in Axis::ALL.into_iter().zip([ni, nj, nk]) {
        if count < 3 {
            return Err(AdiError::TooFewCells { axis, count });
        }
    }
    if !(dt.is_finite() && dt > T::zero()) {
        return Err(AdiError::InvalidTimeStep(dt.as_f64()));
    }
    let inv = |n: usize| T::one() / T::from_usize_lossy(n);
    Ok(GridSpec {
        ni,
        nj,
        nk,
        dx: inv(ni),
        dy: inv(nj),
        dz: inv(nk),
        dt,
    })
}

impl<T: Real> GridSpec<T> {
    pub fn counts(&self) -> [usize; 3] {
        [self.ni, self.nj, self.nk]
    }

    pub fn count(&self, axis: Axis) -> usize {
        self.counts()[axis.index()]
    }

    pub fn h(&self, axis: Axis) -> T {
        match axis {
            Axis::X => self.dx,
            Axis::Y => self.dy,
            Axis::Z => self.dz,
        }
    }

    /// Cell volume.
    pub fn dv(&self) -> T {
        self.dx * self.dy * self.dz
    }

    /// Same geometry with a different time step.
    pub fn with_dt(&self, dt: T) -> Result<Self> {
        make_grid(self.ni, self.nj, self.nk, dt)
    }

    /// `dt·c·sqrt(1/dx² + 1/dy² + 1/dz²)` with `c = 1/sqrt(εμ)`.
    /// Informational only; the scheme imposes no bound on it.
    pub fn courant_number(&self, med: &Medium<T>) -> T {
        let s = (self.dx * self.dx).recip() + (self.dy * self.dy).recip() + (self.dz * self.dz).recip();
        self.dt * s.sqrt() / (med.eps * med.mu).sqrt()
    }

    pub fn spans(&self, c: Component) -> [Span; 3] {
        c.spans(self.counts())
    }

    /// Coordinate of global index `idx` along `axis` with the given offset.
    pub fn coordinate(&self, axis: Axis, idx: usize, half: bool) -> T {
        let n = T::from_usize_lossy(self.count(axis));
        if half {
            T::from_usize_lossy(2 * idx + 1) / (n + n)
        } else {
            T::from_usize_lossy(idx) / n
        }
    }
}

/// Constant permittivity and permeability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Medium<T> {
    pub eps: T,
    pub mu: T,
}

impl<T: Real> Medium<T> {
    pub fn new(eps: T, mu: T) -> Result<Self> {
        let ok = |v: T| v.is_finite() && v > T::zero();
        if !(ok(eps) && ok(mu)) {
            return Err(AdiError::InvalidMedium {
                eps: eps.as_f64(),
                mu: mu.as_f64(),
            });
        }
        Ok(Self { eps, mu })
    }

    pub fn vacuum() -> Self {
        Self {
            eps: T::one(),
            mu: T::one(),
        }
    }

    /// The perturbation factor `Δt²/(4με)`.
    pub fn perturbation(&self, dt: T) -> T {
        dt * dt / (T::lit(4.0) * self.mu * self.eps)
    }
}

/// Physical coordinates of a component's storage index.
pub fn location_of<T: Real>(
    grid: &GridSpec<T>,
    component: Component,
    i: usize,
    j: usize,
    k: usize,
) -> Result<(T, T, T)> {
    let spans = grid.spans(component);
    if !(spans[0].contains(i) && spans[1].contains(j) && spans[2].contains(k)) {
        return Err(AdiError::IndexOutOfExtent { component, i, j, k });
    }
    Ok((
        grid.coordinate(Axis::X, i, spans[0].half),
        grid.coordinate(Axis::Y, j, spans[1].half),
        grid.coordinate(Axis::Z, k, spans[2].half),
    ))
}

/// Three lattices forming a vector quantity. They need not sit on the
/// canonical component locations.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField<T> {
    pub x: Lattice<T>,
    pub y: Lattice<T>,
    pub z: Lattice<T>,
}

impl<T: Real> VectorField<T> {
    pub fn new(x: Lattice<T>, y: Lattice<T>, z: Lattice<T>) -> Self {
        Self { x, y, z }
    }

    pub fn component(&self, axis: Axis) -> &Lattice<T> {
        match axis {
            Axis::X => &self.x,
            Axis::Y => &self.y,
            Axis::Z => &self.z,
        }
    }

    pub fn component_mut(&mut self, axis: Axis) -> &mut Lattice<T> {
        match axis {
            Axis::X => &mut self.x,
            Axis::Y => &mut self.y,
            Axis::Z => &mut self.z,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Lattice<T>> {
        [&self.x, &self.y, &self.z].into_iter()
    }

    pub fn map(&self, f: impl Fn(T) -> T + Copy) -> Self {
        Self::new(self.x.map(f), self.y.map(f), self.z.map(f))
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T + Copy) -> Result<Self> {
        Ok(Self::new(
            self.x.zip_with(&other.x, f)?,
            self.y.zip_with(&other.y, f)?,
            self.z.zip_with(&other.z, f)?,
        ))
    }

    /// Zero field on the canonical electric locations.
    pub fn zeros_electric(grid: &GridSpec<T>) -> Self {
        Self::new(
            Lattice::zeros(grid.spans(Component::Ex)),
            Lattice::zeros(grid.spans(Component::Ey)),
            Lattice::zeros(grid.spans(Component::Ez)),
        )
    }

    /// Zero field on the canonical magnetic locations.
    pub fn zeros_magnetic(grid: &GridSpec<T>) -> Self {
        Self::new(
            Lattice::zeros(grid.spans(Component::Hx)),
            Lattice::zeros(grid.spans(Component::Hy)),
            Lattice::zeros(grid.spans(Component::Hz)),
        )
    }
}

/// The six field lattices at one (possibly half-integer) time level.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState<T> {
    pub e: VectorField<T>,
    pub h: VectorField<T>,
    pub time_level: f64,
}

impl<T: Real> FieldState<T> {
    pub fn lattice(&self, c: Component) -> &Lattice<T> {
        if c.is_electric() {
            self.e.component(c.axis())
        } else {
            self.h.component(c.axis())
        }
    }

    pub fn lattice_mut(&mut self, c: Component) -> &mut Lattice<T> {
        if c.is_electric() {
            self.e.component_mut(c.axis())
        } else {
            self.h.component_mut(c.axis())
        }
    }

    /// Builds a state by evaluating `f(component, i, j, k)` at every stored index.
    pub fn from_fn(grid: &GridSpec<T>, time_level: f64, mut f: impl FnMut(Component, usize, usize, usize) -> T) -> Self {
        let mut lat = |c: Component| Lattice::from_fn(grid.spans(c), |a, b, d| f(c, a, b, d));
        let e = VectorField::new(lat(Component::Ex), lat(Component::Ey), lat(Component::Ez));
        let h = VectorField::new(lat(Component::Hx), lat(Component::Hy), lat(Component::Hz));
        Self { e, h, time_level }
    }

    /// Checks that every lattice has the canonical extent for `grid`.
    pub fn check_grid(&self, grid: &GridSpec<T>) -> Result<()> {
        for c in Component::ALL {
            if *self.lattice(c).spans() != grid.spans(c) {
                return Err(AdiError::ExtentMismatch(format!(
                    "{c} has spans {:?}, grid expects {:?}",
                    self.lattice(c).spans(),
                    grid.spans(c)
                )));
            }
        }
        Ok(())
    }

    pub fn check_finite(&self) -> Result<()> {
        for c in Component::ALL {
            if let Some(index) = self.lattice(c).first_non_finite() {
                return Err(AdiError::NonFinite { component: c, index });
            }
        }
        Ok(())
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            e: self.e.map(|v| v * s),
            h: self.h.map(|v| v * s),
            time_level: self.time_level,
        }
    }

    /// `a·self + b·other`, keeping this state's time level.
    pub fn axpby(&self, a: T, other: &Self, b: T) -> Result<Self> {
        Ok(Self {
            e: self.e.zip_with(&other.e, |u, v| a * u + b * v)?,
            h: self.h.zip_with(&other.h, |u, v| a * u + b * v)?,
            time_level: self.time_level,
        })
    }

    pub fn max_abs(&self) -> T {
        Component::ALL
            .iter()
            .fold(T::zero(), |m, &c| m.max(self.lattice(c).max_abs()))
    }
}

pub fn zero_state<T: Real>(grid: &GridSpec<T>) -> FieldState<T> {
    FieldState {
        e: VectorField::zeros_electric(grid),
        h: VectorField::zeros_magnetic(grid),
        time_level: 0.0,
    }
}

/// Zeros tangential E on the six walls. Nothing else is touched.
pub fn enforce_pec<T: Real>(state: &mut FieldState<T>, grid: &GridSpec<T>) {
    let [ni, nj, nk] = grid.counts();
    let z = T::zero();
    let ex = &mut state.e.x;
    ex.fill_box(&[0..ni, 0..1, 0..nk + 1], z);
    ex.fill_box(&[0..ni, nj..nj + 1, 0..nk + 1], z);
    ex.fill_box(&[0..ni, 0..nj + 1, 0..1], z);
    ex.fill_box(&[0..ni, 0..nj + 1, nk..nk + 1], z);
    let ey = &mut state.e.y;
    ey.fill_box(&[0..1, 0..nj, 0..nk + 1], z);
    ey.fill_box(&[ni..ni + 1, 0..nj, 0..nk + 1], z);
    ey.fill_box(&[0..ni + 1, 0..nj, 0..1], z);
    ey.fill_box(&[0..ni + 1, 0..nj, nk..nk + 1], z);
    let ez = &mut state.e.z;
    ez.fill_box(&[0..1, 0..nj + 1, 0..nk], z);
    ez.fill_box(&[ni..ni + 1, 0..nj + 1, 0..nk], z);
    ez.fill_box(&[0..ni + 1, 0..1, 0..nk], z);
    ez.fill_box(&[0..ni + 1, nj..nj + 1, 0..nk], z);
}

/// By-value form of [`enforce_pec`].
pub fn with_pec<T: Real>(mut state: FieldState<T>, grid: &GridSpec<T>) -> FieldState<T> {
    enforce_pec(&mut state, grid);
    state
}

/// True iff a stored index of `c` lies on a wall where PEC forces it to
/// zero, i.e. tangential E on a face.
pub fn is_pec_point(counts: [usize; 3], c: Component, idx: [usize; 3]) -> bool {
    if !c.is_electric() {
        return false;
    }
    let d = c.axis().index();
    (0..3).any(|a| a != d && (idx[a] == 0 || idx[a] == counts[a]))
}
