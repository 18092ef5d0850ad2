//! Rectangular phase-space grids and their CSV/JSON forms.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::StateParams;

/// Normalization tag carried by every grid: `W` integrates to one under `dx dy`.
pub const CONVENTION: &str = "unit mass under dx dy";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    pub fn square(half_width: f64) -> Self {
        Self::new(-half_width, half_width, -half_width, half_width)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .all(|v| v.is_finite())
            && self.x_min < self.x_max
            && self.y_min < self.y_max;
        if ok {
            Ok(())
        } else {
            Err(Error::Usage(format!("invalid window {self:?}")))
        }
    }
}

impl Default for Window {
    fn default() -> Self {
        Self::square(4.0)
    }
}

/// `lo (1 - t) + hi t`, exact at both ends.
fn lerp(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    let t = i as f64 / (n - 1) as f64;
    lo * (1.0 - t) + hi * t
}

/// Values on an `nx x ny` lattice, row-major with index `iy * nx + ix`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
    pub convention: String,
    pub params: Option<StateParams>,
    pub kt: Option<f64>,
}

/// Extremum and negative part of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityMetrics {
    pub min_value: f64,
    pub min_location: (f64, f64),
    /// `integral of max(-W, 0) dx dy` by the trapezoid rule.
    pub negative_volume: f64,
}

impl PhaseGrid {
    /// Evaluates `f(x, y)` at every node, one row per task.
    pub fn from_fn<F>(window: Window, nx: usize, ny: usize, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<f64> + Sync,
    {
        window.validate()?;
        if nx < 2 || ny < 2 {
            return Err(Error::Usage(format!(
                "grid needs at least 2 x 2 nodes, got {nx} x {ny}"
            )));
        }
        let mut values = vec![0.0; nx * ny];
        values
            .par_chunks_mut(nx)
            .enumerate()
            .try_for_each(|(iy, row)| -> Result<()> {
                let y = lerp(window.y_min, window.y_max, iy, ny);
                for (ix, slot) in row.iter_mut().enumerate() {
                    *slot = f(lerp(window.x_min, window.x_max, ix, nx), y)?;
                }
                Ok(())
            })?;
        Ok(Self {
            window,
            nx,
            ny,
            values,
            convention: CONVENTION.to_string(),
            params: None,
            kt: None,
        })
    }

    pub fn with_params(mut self, params: StateParams) -> Self {
        self.params = Some(params);
        self
    }

    pub fn with_kt(mut self, kt: f64) -> Self {
        self.kt = Some(kt);
        self
    }

    pub fn x(&self, ix: usize) -> f64 {
        lerp(self.window.x_min, self.window.x_max, ix, self.nx)
    }

    pub fn y(&self, iy: usize) -> f64 {
        lerp(self.window.y_min, self.window.y_max, iy, self.ny)
    }

    pub fn dx(&self) -> f64 {
        (self.window.x_max - self.window.x_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.window.y_max - self.window.y_min) / (self.ny - 1) as f64
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    fn trapezoid(&self, g: impl Fn(f64) -> f64) -> f64 {
        let weight = |i: usize, n: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let mut total = 0.0;
        for iy in 0..self.ny {
            let wy = weight(iy, self.ny);
            let row: f64 = (0..self.nx)
                .map(|ix| weight(ix, self.nx) * g(self.get(ix, iy)))
                .sum();
            total += wy * row;
        }
        total * self.dx() * self.dy()
    }

    pub fn mass(&self) -> f64 {
        self.trapezoid(|w| w)
    }

    pub fn negativity(&self) -> NegativityMetrics {
        let (idx, min_value) = self
            .values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (i, v)| if v < best.1 { (i, v) } else { best });
        NegativityMetrics {
            min_value,
            min_location: (self.x(idx % self.nx), self.y(idx / self.nx)),
            negative_volume: self.trapezoid(|w| (-w).max(0.0)),
        }
    }

    /// Largest pointwise `|self - other|` on identical lattices.
    pub fn max_abs_diff(&self, other: &PhaseGrid) -> Result<f64> {
        if self.nx != other.nx || self.ny != other.ny || self.window != other.window {
            return Err(Error::Usage("grids have different lattices".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// CSV with header `x,y,W`, one row per node in storage order.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["x", "y", "W"])?;
        for iy in 0..self.ny {
            let y = self.y(iy).to_string();
            for ix in 0..self.nx {
                out.write_record([self.x(ix).to_string(), y.clone(), self.get(ix, iy).to_string()])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Reads the [`write_csv`](Self::write_csv) layout; the shape is inferred
    /// from the run length of the first `y` value.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut input = csv::Reader::from_reader(reader);
        let header = input.headers()?.clone();
        if header.iter().collect::<Vec<_>>() != ["x", "y", "W"] {
            return Err(Error::Parse(format!("unexpected CSV header {header:?}")));
        }
        let mut rows = Vec::new();
        for record in input.records() {
            let record = record?;
            let parse = |i: usize| -> Result<f64> {
                record
                    .get(i)
                    .ok_or_else(|| Error::Parse("short CSV row".into()))?
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(e.to_string()))
            };
            rows.push((parse(0)?, parse(1)?, parse(2)?));
        }
        let first_y = rows.first().ok_or_else(|| Error::Parse("empty grid".into()))?.1;
        let nx = rows.iter().take_while(|r| r.1 == first_y).count();
        if nx < 2 || rows.len() % nx != 0 || rows.len() / nx < 2 {
            return Err(Error::Parse(format!(
                "cannot infer a rectangular grid from {} rows",
                rows.len()
            )));
        }
        let ny = rows.len() / nx;
        let last = rows[rows.len() - 1];
        let window = Window::new(rows[0].0, rows[nx - 1].0, first_y, last.1);
        let grid = Self {
            window,
            nx,
            ny,
            values: rows.iter().map(|r| r.2).collect(),
            convention: CONVENTION.to_string(),
            params: None,
            kt: None,
        };
        for (i, row) in rows.iter().enumerate() {
            if row.0 != grid.x(i % nx) || row.1 != grid.y(i / nx) {
                return Err(Error::Parse(format!("row {i} is off the inferred lattice")));
            }
        }
        Ok(grid)
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, self)?;
        Ok(())
    }

    pub fn read_json<R: Read>(reader: R) -> Result<Self> {
        Ok(serde_json::from_reader(reader)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(x: f64, y: f64) -> Result<f64> {
        Ok((-(x * x + y * y)).exp() / std::f64::consts::PI)
    }

    #[test]
    fn coordinates_hit_window_edges() {
        let g = PhaseGrid::from_fn(Window::new(-1.3, 2.7, -0.1, 0.9), 7, 5, gaussian).unwrap();
        assert_eq!(g.x(0), -1.3);
        assert_eq!(g.x(6), 2.7);
        assert_eq!(g.y(4), 0.9);
    }

    #[test]
    fn gaussian_mass_and_negativity() {
        let g = PhaseGrid::from_fn(Window::default(), 201, 201, gaussian).unwrap();
        assert!((g.mass() - 1.0).abs() < 1e-6);
        let neg = g.negativity();
        assert_eq!(neg.negative_volume, 0.0);
        assert!(neg.min_value > 0.0);
    }

    #[test]
    fn negative_volume_of_signed_function() {
        // x over [-1,1]^2: negative part integrates to 1
        let g = PhaseGrid::from_fn(Window::square(1.0), 101, 11, |x, _| Ok(x)).unwrap();
        assert!((g.negativity().negative_volume - 1.0).abs() < 1e-12);
        assert_eq!(g.negativity().min_location, (-1.0, -1.0));
    }

    #[test]
    fn rejects_degenerate_shapes() {
        assert!(PhaseGrid::from_fn(Window::default(), 1, 5, gaussian).is_err());
        assert!(PhaseGrid::from_fn(Window::new(1.0, 1.0, 0.0, 1.0), 3, 3, gaussian).is_err());
    }

    #[test]
    fn errors_propagate_from_points() {
        let r = PhaseGrid::from_fn(Window::default(), 3, 3, |x, _| {
            if x > 0.0 {
                Err(Error::Domain("x".into()))
            } else {
                Ok(0.0)
            }
        });
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let g = PhaseGrid::from_fn(Window::new(-2.0, 3.0, -1.0, 1.5), 13, 9, |x, y| {
            Ok((x * 0.37).sin() * (y * 1.1).exp() / 3.0)
        })
        .unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let back = PhaseGrid::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.nx, 13);
        assert_eq!(back.ny, 9);
        assert_eq!(back.window, g.window);
        assert!(back.values.iter().zip(&g.values).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn json_round_trip_is_bit_exact_and_ordered() {
        let g = PhaseGrid::from_fn(Window::default(), 5, 4, gaussian)
            .unwrap()
            .with_params(StateParams::new(0.5, 0.3, 1))
            .with_kt(0.2);
        let mut buf = Vec::new();
        g.write_json(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let keys = ["\"window\"", "\"nx\"", "\"ny\"", "\"values\"", "\"convention\"", "\"params\""];
        let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        let back = PhaseGrid::read_json(buf.as_slice()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn csv_reader_rejects_ragged_input() {
        let text = "x,y,W\n0,0,1\n1,0,1\n0,1,1\n";
        assert!(matches!(PhaseGrid::read_csv(text.as_bytes()), Err(Error::Parse(_))));
    }
}
