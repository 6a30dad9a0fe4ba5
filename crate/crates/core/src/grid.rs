//! Cell-centred state arrays on uniform Cartesian grids.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    /// The ghost cell copies the adjacent boundary cell.
    Outflow,
}

/// An `m`-component state sampled at the cell centres of a uniform grid in
/// one to three dimensions.
///
/// Cells are stored in lexicographic order with axis 0 varying fastest; the
/// components of a cell are contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub shape: Vec<usize>,
    pub h: Vec<f64>,
    /// Centre of the first cell.
    pub origin: Vec<f64>,
    pub m: usize,
    pub data: Vec<f64>,
    pub boundary: Vec<Boundary>,
}

impl GridField {
    pub fn new(shape: Vec<usize>, h: Vec<f64>, origin: Vec<f64>, m: usize, boundary: Vec<Boundary>) -> Result<Self> {
        let n = shape.len();
        if !(1..=3).contains(&n) {
            return Err(Error::InvalidParameter {
                name: "shape".into(),
                reason: format!("grid must have 1 to 3 axes (got {n})"),
            });
        }
        check_len("grid spacing", n, h.len())?;
        check_len("grid origin", n, origin.len())?;
        check_len("boundary modes", n, boundary.len())?;
        if shape.iter().any(|&c| c == 0) {
            return Err(Error::InvalidParameter {
                name: "shape".into(),
                reason: "every axis needs at least one cell".into(),
            });
        }
        if h.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
            return Err(Error::InvalidParameter {
                name: "h".into(),
                reason: "grid spacing must be positive and finite".into(),
            });
        }
        if m == 0 {
            return Err(Error::InvalidParameter {
                name: "m".into(),
                reason: "at least one component is required".into(),
            });
        }
        let cells: usize = shape.iter().product();
        Ok(GridField {
            shape,
            h,
            origin,
            m,
            data: vec![0.0; cells * m],
            boundary,
        })
    }

    /// `cells` cells covering `[lower, upper]` on every axis.
    pub fn uniform(n: usize, cells: usize, lower: f64, upper: f64, m: usize, boundary: Boundary) -> Result<Self> {
        let h = (upper - lower) / cells as f64;
        GridField::new(vec![cells; n], vec![h; n], vec![lower + 0.5 * h; n], m, vec![boundary; n])
    }

    pub fn n(&self) -> usize {
        self.shape.len()
    }

    pub fn cells(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.iter().product()
    }

    pub fn min_h(&self) -> f64 {
        self.h.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn multi_index(&self, mut cell: usize) -> [usize; 3] {
        let mut idx = [0; 3];
        for (a, &len) in self.shape.iter().enumerate() {
            idx[a] = cell % len;
            cell /= len;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        let mut flat = 0;
        let mut stride = 1;
        for (a, &len) in self.shape.iter().enumerate() {
            flat += idx[a] * stride;
            stride *= len;
        }
        flat
    }

    pub fn center(&self, cell: usize) -> Vec<f64> {
        let idx = self.multi_index(cell);
        (0..self.n())
            .map(|a| self.origin[a] + idx[a] as f64 * self.h[a])
            .collect()
    }

    /// Index of the neighbour one cell away along `axis` (`forward` = +1).
    pub fn neighbor(&self, cell: usize, axis: usize, forward: bool) -> usize {
        let mut idx = self.multi_index(cell);
        let len = self.shape[axis];
        let i = idx[axis];
        idx[axis] = match (self.boundary[axis], forward) {
            (Boundary::Periodic, true) => (i + 1) % len,
            (Boundary::Periodic, false) => (i + len - 1) % len,
            (Boundary::Outflow, true) => (i + 1).min(len - 1),
            (Boundary::Outflow, false) => i.saturating_sub(1),
        };
        self.flat_index(&idx[..self.n()])
    }

    /// True when the centred stencil of `cell` along `axis` reaches an outflow ghost cell.
    pub fn touches_ghost(&self, cell: usize, axis: usize) -> bool {
        if self.boundary[axis] == Boundary::Periodic {
            return false;
        }
        let i = self.multi_index(cell)[axis];
        i == 0 || i + 1 == self.shape[axis]
    }

    pub fn cell(&self, cell: usize) -> &[f64] {
        &self.data[cell * self.m..(cell + 1) * self.m]
    }

    pub fn cell_mut(&mut self, cell: usize) -> &mut [f64] {
        &mut self.data[cell * self.m..(cell + 1) * self.m]
    }

    pub fn component(&self, a: usize) -> Vec<f64> {
        self.data.iter().skip(a).step_by(self.m).copied().collect()
    }

    /// Sets every cell from a function of its centre.
    pub fn fill<F>(&mut self, f: F) -> Result<()>
    where
        F: Fn(&[f64]) -> Vec<f64>,
    {
        for c in 0..self.cells() {
            let v = f(&self.center(c));
            check_len("initial state", self.m, v.len())?;
            self.cell_mut(c).copy_from_slice(&v);
        }
        Ok(())
    }

    pub fn with_fill<F>(mut self, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<f64>,
    {
        self.fill(f)?;
        Ok(self)
    }

    /// A field with the same layout and the given data.
    pub fn with_data(&self, data: Vec<f64>) -> Result<Self> {
        check_len("grid data", self.data.len(), data.len())?;
        Ok(GridField {
            data,
            ..self.clone_layout()
        })
    }

    fn clone_layout(&self) -> GridField {
        GridField {
            shape: self.shape.clone(),
            h: self.h.clone(),
            origin: self.origin.clone(),
            m: self.m,
            data: Vec::new(),
            boundary: self.boundary.clone(),
        }
    }

    /// Cells `start..start + len` along `axis`, as a grid of its own.
    pub fn slab(&self, axis: usize, start: usize, len: usize) -> Result<GridField> {
        if axis >= self.n() || len == 0 || start + len > self.shape[axis] {
            return Err(Error::InvalidParameter {
                name: "slab".into(),
                reason: format!("cells {start}..{} outside axis {axis}", start + len),
            });
        }
        let mut shape = self.shape.clone();
        shape[axis] = len;
        let mut origin = self.origin.clone();
        origin[axis] += start as f64 * self.h[axis];
        let mut out = GridField::new(shape, self.h.clone(), origin, self.m, self.boundary.clone())?;
        for c in 0..out.cells() {
            let mut idx = out.multi_index(c);
            idx[axis] += start;
            let src = self.flat_index(&idx[..self.n()]);
            out.cell_mut(c).copy_from_slice(self.cell(src));
        }
        Ok(out)
    }

    pub fn same_layout(&self, other: &GridField) -> bool {
        self.shape == other.shape && self.h == other.h && self.origin == other.origin && self.m == other.m
    }

    /// First non-finite entry, reported as an error.
    pub fn check_finite(&self, t: f64) -> Result<()> {
        match self.data.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(i) => Err(Error::NonFinite {
                cell: i / self.m,
                component: i % self.m,
                t,
            }),
        }
    }

    /// Componentwise sum over cells (lexicographic order).
    pub fn totals(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.m];
        for c in 0..self.cells() {
            for (s, v) in sums.iter_mut().zip(self.cell(c)) {
                *s += v;
            }
        }
        sums
    }

    pub fn l1_distance(&self, other: &GridField) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).sum::<f64>() * self.cell_volume()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_centres() {
        let g = GridField::new(
            vec![4, 3],
            vec![0.5, 1.0],
            vec![0.25, -1.0],
            2,
            vec![Boundary::Periodic, Boundary::Outflow],
        )
        .unwrap();
        assert_eq!(g.data.len(), 2 * 12);
        assert_eq!(g.center(5), vec![0.75, 0.0]);
        assert_eq!(g.flat_index(&[1, 1]), 5);
    }

    #[test]
    fn neighbours_respect_boundaries() {
        let g = GridField::new(
            vec![4, 3],
            vec![1.0, 1.0],
            vec![0.0, 0.0],
            1,
            vec![Boundary::Periodic, Boundary::Outflow],
        )
        .unwrap();
        assert_eq!(g.neighbor(0, 0, false), 3);
        assert_eq!(g.neighbor(3, 0, true), 0);
        assert_eq!(g.neighbor(0, 1, false), 0);
        assert_eq!(g.neighbor(8, 1, true), 8);
        assert!(g.touches_ghost(8, 1));
        assert!(!g.touches_ghost(4, 1));
        assert!(!g.touches_ghost(0, 0));
    }

    #[test]
    fn non_finite_values_are_detected() {
        let mut g = GridField::uniform(1, 5, 0.0, 1.0, 2, Boundary::Periodic).unwrap();
        assert!(g.check_finite(0.0).is_ok());
        g.data[7] = f64::NAN;
        assert_eq!(
            g.check_finite(0.5),
            Err(Error::NonFinite {
                cell: 3,
                component: 1,
                t: 0.5
            })
        );
    }

    #[test]
    fn slab_extracts_rows() {
        let g = GridField::uniform(2, 4, 0.0, 4.0, 1, Boundary::Outflow)
            .unwrap()
            .with_fill(|x| vec![x[0] + 10.0 * x[1]])
            .unwrap();
        let s = g.slab(1, 1, 2).unwrap();
        assert_eq!(s.shape, vec![4, 2]);
        assert_eq!(s.center(0), vec![0.5, 1.5]);
        assert_eq!(s.cell(5), &[1.5 + 25.0]);
        assert!(g.slab(1, 3, 2).is_err());
    }

    #[test]
    fn invalid_layouts_are_rejected() {
        assert!(GridField::new(vec![], vec![], vec![], 1, vec![]).is_err());
        assert!(GridField::new(vec![4], vec![0.0], vec![0.0], 1, vec![Boundary::Periodic]).is_err());
        assert!(GridField::new(vec![4], vec![1.0], vec![0.0], 0, vec![Boundary::Periodic]).is_err());
    }
}
