//! Dense 3D lattices addressed by global staggered indices.
//!
//! Along an axis a lattice is either node-centred (`half == false`, global
//! index `a` sits at `a·Δ`) or cell-centred (`half == true`, global index `a`
//! sits at `(a + ½)·Δ`). A lattice covers the global index window
//! `start .. start + len` on every axis. Storage is row-major with the z index
//! varying fastest.

use std::ops::Range;

use crate::error::{AdiError, Result};
use crate::grid::Axis;
use crate::real::{CompensatedSum, Real};

/// Placement and coverage of a lattice along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Span {
    pub half: bool,
    pub start: usize,
    pub len: usize,
}

impl Span {
    pub const fn new(half: bool, start: usize, len: usize) -> Self {
        Self { half, start, len }
    }

    /// One past the last covered global index.
    pub fn end(&self) -> usize {
        self.start + self.len
    }

    pub fn contains(&self, idx: usize) -> bool {
        idx >= self.start && idx < self.end()
    }

    pub fn covers(&self, r: &Range<usize>) -> bool {
        r.is_empty() || (r.start >= self.start && r.end <= self.end())
    }

    pub fn range(&self) -> Range<usize> {
        self.start..self.end()
    }
}

/// Half-open global index box.
pub type IndexBox = [Range<usize>; 3];

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice<T> {
    spans: [Span; 3],
    data: Vec<T>,
}

impl<T: Real> Lattice<T> {
    pub fn zeros(spans: [Span; 3]) -> Self {
        let n = spans[0].len * spans[1].len * spans[2].len;
        Self {
            spans,
            data: vec![T::zero(); n],
        }
    }

    /// Builds a lattice by evaluating `f` at every global index.
    pub fn from_fn(spans: [Span; 3], mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(spans[0].len * spans[1].len * spans[2].len);
        for a in spans[0].range() {
            for b in spans[1].range() {
                for c in spans[2].range() {
                    data.push(f(a, b, c));
                }
            }
        }
        Self { spans, data }
    }

    pub fn from_vec(spans: [Span; 3], data: Vec<T>) -> Result<Self> {
        let n = spans[0].len * spans[1].len * spans[2].len;
        if data.len() != n {
            return Err(AdiError::ExtentMismatch(format!(
                "expected {n} values, got {}",
                data.len()
            )));
        }
        Ok(Self { spans, data })
    }

    pub fn spans(&self) -> &[Span; 3] {
        &self.spans
    }

    pub fn span(&self, axis: Axis) -> Span {
        self.spans[axis.index()]
    }

    /// Local extents `[n0, n1, n2]`.
    pub fn dims(&self) -> [usize; 3] {
        [self.spans[0].len, self.spans[1].len, self.spans[2].len]
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn contains(&self, a: usize, b: usize, c: usize) -> bool {
        self.spans[0].contains(a) && self.spans[1].contains(b) && self.spans[2].contains(c)
    }

    pub fn covers(&self, bx: &IndexBox) -> bool {
        bx.iter().any(|r| r.is_empty()) || (0..3).all(|d| self.spans[d].covers(&bx[d]))
    }

    #[inline]
    fn offset(&self, a: usize, b: usize, c: usize) -> usize {
        let [_, n1, n2] = self.dims();
        ((a - self.spans[0].start) * n1 + (b - self.spans[1].start)) * n2 + (c - self.spans[2].start)
    }

    /// Value at a global index, `None` outside the covered window.
    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> Option<T> {
        if self.contains(a, b, c) {
            Some(self.data[self.offset(a, b, c)])
        } else {
            None
        }
    }

    /// Value at a global index. Panics outside the covered window.
    #[inline]
    pub fn at(&self, a: usize, b: usize, c: usize) -> T {
        debug_assert!(self.contains(a, b, c), "({a},{b},{c}) outside {:?}", self.spans);
        self.data[self.offset(a, b, c)]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, v: T) {
        debug_assert!(self.contains(a, b, c), "({a},{b},{c}) outside {:?}", self.spans);
        let o = self.offset(a, b, c);
        self.data[o] = v;
    }

    pub fn fill_box(&mut self, bx: &IndexBox, v: T) {
        for a in bx[0].clone() {
            for b in bx[1].clone() {
                for c in bx[2].clone() {
                    if self.contains(a, b, c) {
                        self.set(a, b, c, v);
                    }
                }
            }
        }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            spans: self.spans,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two lattices with identical spans.
    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.spans != other.spans {
            return Err(AdiError::ExtentMismatch(format!(
                "{:?} vs {:?}",
                self.spans, other.spans
            )));
        }
        Ok(Self {
            spans: self.spans,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn scaled(&self, s: T) -> Self {
        self.map(|v| v * s)
    }

    /// `weight · Σ v²` over a global index box, compensated.
    pub fn weighted_sum_sq(&self, bx: &IndexBox, weight: T) -> Result<T> {
        if !self.covers(bx) {
            return Err(AdiError::ExtentMismatch(format!(
                "box {bx:?} not covered by {:?}",
                self.spans
            )));
        }
        let mut acc = CompensatedSum::new();
        for a in bx[0].clone() {
            for b in bx[1].clone() {
                for c in bx[2].clone() {
                    let v = self.at(a, b, c);
                    acc.add(v * v);
                }
            }
        }
        Ok(acc.value() * weight)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Storage index of the first non-finite entry.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.data.iter().position(|v| !v.is_finite())
    }
}
