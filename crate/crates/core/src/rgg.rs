//! Random geometric graphs `G_d(n,r)` with a uniform-grid index.
//!
//! Adjacency is never stored: every neighborhood question is answered by
//! scanning the grid cells around the query.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{dist_sq_slices, ApexCone, GeometryError, Point, MAX_DIM};
use crate::seed::rng_from_seed;

#[derive(Debug, Error)]
pub enum RggError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("vertex {0} lies outside the unit cube")]
    OutsideCube(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RggParams {
    pub n: usize,
    pub r: f64,
    pub d: usize,
    pub seed: u64,
}

impl RggParams {
    pub fn validate(&self) -> Result<(), RggError> {
        if self.n == 0 || self.n > u32::MAX as usize {
            return Err(RggError::InvalidParams(format!("n = {}", self.n)));
        }
        if !(1..=MAX_DIM).contains(&self.d) {
            return Err(RggError::InvalidParams(format!("d = {}", self.d)));
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(RggError::InvalidParams(format!("r = {}", self.r)));
        }
        Ok(())
    }
}

type CellKey = [i32; MAX_DIM];

/// Uniform grid over `[0,1]^d` keyed by integer cell coordinates.
#[derive(Debug, Clone)]
pub struct GridIndex {
    cell_size: f64,
    d: usize,
    per_axis: i32,
    cells: HashMap<CellKey, Vec<u32>>,
}

impl GridIndex {
    fn build(coords: &[f64], d: usize, cell_size: f64) -> Self {
        let per_axis = ((1.0 / cell_size).floor() as i64 + 1).min(i32::MAX as i64) as i32;
        let mut index = Self {
            cell_size,
            d,
            per_axis,
            cells: HashMap::new(),
        };
        for (v, p) in coords.chunks_exact(d).enumerate() {
            let key = index.key_of(p);
            index.cells.entry(key).or_default().push(v as u32);
        }
        index
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    fn cell_coord(&self, x: f64) -> i32 {
        ((x / self.cell_size).floor() as i64).clamp(i32::MIN as i64 / 2, i32::MAX as i64 / 2) as i32
    }

    fn key_of(&self, p: &[f64]) -> CellKey {
        let mut key = [0; MAX_DIM];
        for (k, &x) in key.iter_mut().zip(p) {
            *k = self.cell_coord(x);
        }
        key
    }

    /// Visits every occupied cell whose coordinates lie in `[lo, hi]`.
    fn for_each_cell(&self, lo: &[i32], hi: &[i32], mut f: impl FnMut(&[u32])) {
        let d = self.d;
        let mut lo_c = [0i32; MAX_DIM];
        let mut hi_c = [0i32; MAX_DIM];
        for i in 0..d {
            lo_c[i] = lo[i].max(0);
            hi_c[i] = hi[i].min(self.per_axis - 1);
            if lo_c[i] > hi_c[i] {
                return;
            }
        }
        let mut key = lo_c;
        loop {
            if let Some(ids) = self.cells.get(&key) {
                f(ids);
            }
            let mut axis = 0;
            loop {
                if axis == d {
                    return;
                }
                if key[axis] < hi_c[axis] {
                    key[axis] += 1;
                    break;
                }
                key[axis] = lo_c[axis];
                axis += 1;
            }
        }
    }

    fn heap_bytes(&self) -> usize {
        let per_entry = std::mem::size_of::<CellKey>() + std::mem::size_of::<Vec<u32>>() + 8;
        self.cells.capacity() * per_entry
            + self.cells.values().map(|v| v.capacity() * 4).sum::<usize>()
    }
}

/// An immutable sample of `G_d(n,r)`.
#[derive(Debug, Clone)]
pub struct Rgg {
    params: RggParams,
    coords: Vec<f64>,
    index: GridIndex,
}

impl Rgg {
    /// Samples `n` i.i.d. uniform points, coordinate by coordinate.
    pub fn generate(params: RggParams) -> Result<Self, RggError> {
        params.validate()?;
        let mut rng = rng_from_seed(params.seed);
        let coords: Vec<f64> = (0..params.n * params.d).map(|_| rng.gen::<f64>()).collect();
        Ok(Self::assemble(params, coords))
    }

    pub fn from_positions(positions: &[Point], r: f64) -> Result<Self, RggError> {
        let d = positions.first().map(Point::dim).unwrap_or(0);
        let params = RggParams {
            n: positions.len(),
            r,
            d,
            seed: 0,
        };
        params.validate()?;
        let mut coords = Vec::with_capacity(positions.len() * d);
        for (v, p) in positions.iter().enumerate() {
            if p.dim() != d {
                return Err(GeometryError::DimensionMismatch(d, p.dim()).into());
            }
            if !p.in_unit_cube() {
                return Err(RggError::OutsideCube(v));
            }
            coords.extend_from_slice(p.coords());
        }
        Ok(Self::assemble(params, coords))
    }

    fn assemble(params: RggParams, coords: Vec<f64>) -> Self {
        let index = GridIndex::build(&coords, params.d, params.r);
        Self {
            params,
            coords,
            index,
        }
    }

    pub fn params(&self) -> &RggParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn d(&self) -> usize {
        self.params.d
    }

    pub fn r(&self) -> f64 {
        self.params.r
    }

    pub fn index(&self) -> &GridIndex {
        &self.index
    }

    pub fn coords(&self, v: VertexId) -> &[f64] {
        let d = self.params.d;
        &self.coords[v.index() * d..(v.index() + 1) * d]
    }

    pub fn position(&self, v: VertexId) -> Point {
        Point::new(self.coords(v).to_vec())
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.params.n as u32).map(VertexId)
    }

    pub fn dist(&self, u: VertexId, v: VertexId) -> f64 {
        dist_sq_slices(self.coords(u), self.coords(v)).sqrt()
    }

    /// Closed adjacency: distinct vertices within distance `r`.
    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        u != v && self.dist(u, v) <= self.params.r
    }

    /// Ids within `radius` of `center`, ascending.
    pub fn neighbors_within(&self, center: &Point, radius: f64) -> Vec<VertexId> {
        let d = self.params.d;
        if center.dim() != d || radius < 0.0 {
            return Vec::new();
        }
        let ring = (radius / self.index.cell_size).ceil() as i32;
        let mid = self.index.key_of(center.coords());
        let lo: Vec<i32> = mid[..d].iter().map(|c| c.saturating_sub(ring)).collect();
        let hi: Vec<i32> = mid[..d].iter().map(|c| c.saturating_add(ring)).collect();
        let r2 = radius * radius;
        let mut out = Vec::new();
        self.index.for_each_cell(&lo, &hi, |ids| {
            for &v in ids {
                if dist_sq_slices(self.coords(VertexId(v)), center.coords()) <= r2 {
                    out.push(VertexId(v));
                }
            }
        });
        out.sort_unstable();
        out
    }

    /// Neighbors of `v` in the graph (excluding `v`).
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = self.neighbors_within(&self.position(v), self.params.r);
        out.retain(|&u| u != v);
        out
    }

    /// Ids inside `region`, nearest to the apex first, ties by id.
    pub fn vertices_in_cone(&self, region: &ApexCone) -> Vec<VertexId> {
        let d = self.params.d;
        if region.apex.dim() != d {
            return Vec::new();
        }
        let (lo, hi) = region.bounding_box();
        let lo: Vec<i32> = lo.iter().map(|&x| self.index.cell_coord(x) - 1).collect();
        let hi: Vec<i32> = hi.iter().map(|&x| self.index.cell_coord(x) + 1).collect();
        let mut hits: Vec<(f64, VertexId)> = Vec::new();
        self.index.for_each_cell(&lo, &hi, |ids| {
            for &v in ids {
                let p = Point::new(self.coords(VertexId(v)).to_vec());
                if region.contains(&p) {
                    hits.push((
                        dist_sq_slices(p.coords(), region.apex.coords()),
                        VertexId(v),
                    ));
                }
            }
        });
        hits.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        hits.into_iter().map(|(_, v)| v).collect()
    }

    /// Approximate heap footprint of positions plus index.
    pub fn heap_bytes(&self) -> usize {
        self.coords.capacity() * 8 + self.index.heap_bytes()
    }

    /// One row per vertex: id followed by `d` coordinates, 17 significant digits.
    pub fn write_positions_csv<W: Write>(&self, out: W) -> Result<(), RggError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["id".to_string()];
        header.extend((0..self.params.d).map(|i| format!("x{i}")));
        w.write_record(&header).map_err(csv_io)?;
        for v in self.vertices() {
            let mut row = vec![v.to_string()];
            row.extend(self.coords(v).iter().map(|x| format!("{x:.16e}")));
            w.write_record(&row).map_err(csv_io)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_io(e: csv::Error) -> RggError {
    RggError::Io(std::io::Error::other(e))
}
