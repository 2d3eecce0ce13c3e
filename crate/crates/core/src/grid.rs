//! Periodic computational box, its frequency lattice, and the complex field
//! container every other module works on.
//!
//! Transform convention: unitary DFT (factor `1/sqrt(nx*ny)` both ways), with
//! spectral arrays kept in transform order, so `xi()[k]` is the frequency of
//! column `k` and index 0 is the zero mode. Data is row-major with `x` as the
//! slow index: sample `(i, j)` lives at `i * ny + j`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Physical,
    Spectral,
}

struct Plans {
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
}

/// Truncated periodic box `[-lx, lx) x [-ly, ly)` with `nx x ny` samples.
#[derive(Clone)]
pub struct Grid2D {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    xi: Arc<Vec<f64>>,
    eta: Arc<Vec<f64>>,
    plans: Arc<Plans>,
}

impl fmt::Debug for Grid2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid2D")
            .field("nx", &self.nx)
            .field("ny", &self.ny)
            .field("lx", &self.lx)
            .field("ly", &self.ly)
            .finish()
    }
}

impl PartialEq for Grid2D {
    fn eq(&self, other: &Self) -> bool {
        self.nx == other.nx && self.ny == other.ny && self.lx == other.lx && self.ly == other.ly
    }
}

/// Frequencies `pi * k / l` in transform order.
fn lattice(n: usize, l: f64) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let k = if k < n / 2 {
                k as f64
            } else {
                k as f64 - n as f64
            };
            PI * k / l
        })
        .collect()
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n < 8 || n % 2 != 0 {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n} must be even and at least 8"
                )));
            }
        }
        for (name, l) in [("lx", lx), ("ly", ly)] {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidGrid(format!("{name} = {l} must be positive")));
            }
        }
        let mut planner = FftPlanner::new();
        let plans = Plans {
            fwd_x: planner.plan_fft_forward(nx),
            inv_x: planner.plan_fft_inverse(nx),
            fwd_y: planner.plan_fft_forward(ny),
            inv_y: planner.plan_fft_inverse(ny),
        };
        Ok(Self {
            nx,
            ny,
            lx,
            ly,
            xi: Arc::new(lattice(nx, lx)),
            eta: Arc::new(lattice(ny, ly)),
            plans: Arc::new(plans),
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn lx(&self) -> f64 {
        self.lx
    }
    pub fn ly(&self) -> f64 {
        self.ly
    }
    pub fn dx(&self) -> f64 {
        2.0 * self.lx / self.nx as f64
    }
    pub fn dy(&self) -> f64 {
        2.0 * self.ly / self.ny as f64
    }
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }
    pub fn is_empty(&self) -> bool {
        false
    }

    /// `x` coordinate of row `i`.
    pub fn x(&self, i: usize) -> f64 {
        -self.lx + i as f64 * self.dx()
    }
    /// `y` coordinate of column `j`.
    pub fn y(&self, j: usize) -> f64 {
        -self.ly + j as f64 * self.dy()
    }
    /// `x`-frequencies in transform order.
    pub fn xi(&self) -> &[f64] {
        &self.xi
    }
    /// `y`-frequencies in transform order.
    pub fn eta(&self) -> &[f64] {
        &self.eta
    }
    pub fn nyquist_x(&self) -> f64 {
        PI * self.nx as f64 / (2.0 * self.lx)
    }
    pub fn nyquist_y(&self) -> f64 {
        PI * self.ny as f64 / (2.0 * self.ly)
    }

    /// Index of `-x` for row `i` (periodic).
    pub fn flip_x(&self, i: usize) -> usize {
        (self.nx - i) % self.nx
    }
    pub fn flip_y(&self, j: usize) -> usize {
        (self.ny - j) % self.ny
    }

    /// Same sample counts on a box scaled by `(sx, sy)`.
    pub fn rescaled(&self, sx: f64, sy: f64) -> Result<Self> {
        Self::new(self.nx, self.ny, self.lx * sx, self.ly * sy)
    }

    /// In-place unitary 2D transform of row-major data.
    pub fn transform(&self, data: &mut [Complex64], inverse: bool) {
        assert_eq!(data.len(), self.len(), "buffer does not match grid");
        let (px, py) = if inverse {
            (&self.plans.inv_x, &self.plans.inv_y)
        } else {
            (&self.plans.fwd_x, &self.plans.fwd_y)
        };
        let scratch_len = px
            .get_inplace_scratch_len()
            .max(py.get_inplace_scratch_len());
        let mut scratch = vec![Complex64::default(); scratch_len];
        py.process_with_scratch(data, &mut scratch);
        let mut t = vec![Complex64::default(); data.len()];
        transpose(data, &mut t, self.nx, self.ny);
        px.process_with_scratch(&mut t, &mut scratch);
        transpose(&t, data, self.ny, self.nx);
        let s = 1.0 / (self.len() as f64).sqrt();
        data.iter_mut().for_each(|z| *z *= s);
    }
}

/// `src` is `rows x cols` row-major; `dst` becomes `cols x rows`.
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const B: usize = 32;
    for i0 in (0..rows).step_by(B) {
        for j0 in (0..cols).step_by(B) {
            for i in i0..(i0 + B).min(rows) {
                for j in j0..(j0 + B).min(cols) {
                    dst[j * rows + i] = src[i * cols + j];
                }
            }
        }
    }
}

/// Complex scalar field on a [`Grid2D`], in either representation.
#[derive(Clone, Debug)]
pub struct Field2D {
    grid: Grid2D,
    data: Vec<Complex64>,
    space: Space,
}

impl Field2D {
    pub fn zeros(grid: &Grid2D, space: Space) -> Self {
        Self {
            grid: grid.clone(),
            data: vec![Complex64::default(); grid.len()],
            space,
        }
    }

    pub fn from_data(grid: &Grid2D, data: Vec<Complex64>, space: Space) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "data length {} does not match grid size {}",
                data.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            data,
            space,
        })
    }

    /// Samples `f(x, y)` on the physical grid.
    pub fn from_fn(grid: &Grid2D, mut f: impl FnMut(f64, f64) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(grid.len());
        for i in 0..grid.nx() {
            let x = grid.x(i);
            for j in 0..grid.ny() {
                data.push(f(x, grid.y(j)));
            }
        }
        Self {
            grid: grid.clone(),
            data,
            space: Space::Physical,
        }
    }

    /// Builds spectral coefficients from `f(xi, eta)` evaluated on the lattice.
    pub fn from_spectrum(grid: &Grid2D, mut f: impl FnMut(f64, f64) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(grid.len());
        for &xi in grid.xi() {
            for &eta in grid.eta() {
                data.push(f(xi, eta));
            }
        }
        Self {
            grid: grid.clone(),
            data,
            space: Space::Spectral,
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }
    pub fn space(&self) -> Space {
        self.space
    }
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }
    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }
    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.grid.ny() + j]
    }

    pub fn to_spectral(&self) -> Result<Self> {
        self.expect(Space::Physical)?;
        Ok(self.clone().into_space(Space::Spectral))
    }

    pub fn to_physical(&self) -> Result<Self> {
        self.expect(Space::Spectral)?;
        Ok(self.clone().into_space(Space::Physical))
    }

    /// Spectral copy, transforming only when needed.
    pub fn spectral(&self) -> Self {
        self.clone().into_space(Space::Spectral)
    }

    pub fn physical(&self) -> Self {
        self.clone().into_space(Space::Physical)
    }

    pub fn into_space(mut self, space: Space) -> Self {
        self.set_space(space);
        self
    }

    pub fn set_space(&mut self, space: Space) {
        if self.space != space {
            self.grid
                .transform(&mut self.data, space == Space::Physical);
            self.space = space;
        }
    }

    fn expect(&self, space: Space) -> Result<()> {
        if self.space == space {
            Ok(())
        } else {
            Err(Error::Representation {
                expected: space,
                found: self.space,
            })
        }
    }

    /// Discrete `L^q` norm `(sum |f|^q dx dy)^(1/q)`, sup norm for infinite `q`.
    pub fn lp_norm(&self, q: f64) -> Result<f64> {
        if !(q >= 1.0) {
            return Err(Error::InvalidInput(format!(
                "L^q norm needs q >= 1, got {q}"
            )));
        }
        let phys;
        let data = if self.space == Space::Physical {
            &self.data
        } else {
            phys = self.physical();
            &phys.data
        };
        Ok(lq(data, q, self.grid.cell_area()))
    }

    /// `L^2` norm read off the spectral coefficients (Plancherel).
    pub fn spectral_l2(&self) -> f64 {
        let spec;
        let data = if self.space == Space::Spectral {
            &self.data
        } else {
            spec = self.spectral();
            &spec.data
        };
        lq(data, 2.0, self.grid.cell_area())
    }

    pub fn sup_norm(&self) -> f64 {
        self.lp_norm(f64::INFINITY).expect("q = inf is valid")
    }

    /// `L^2` inner product `<self, other> = sum self * conj(other) dx dy`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let a = self.spectral();
        let b = other.spectral();
        self.check_compatible(other);
        let s: Complex64 = a.data.iter().zip(&b.data).map(|(u, v)| u * v.conj()).sum();
        s * self.grid.cell_area()
    }

    /// Multiplies the spectrum by `symbol(xi, eta)`, returning the result in
    /// the input's representation.
    pub fn apply_symbol(&self, symbol: impl Fn(f64, f64) -> Complex64) -> Self {
        let space = self.space;
        let mut s = self.spectral();
        s.multiply_spectrum(symbol);
        s.into_space(space)
    }

    pub fn apply_real_symbol(&self, symbol: impl Fn(f64, f64) -> f64) -> Self {
        self.apply_symbol(|a, b| Complex64::new(symbol(a, b), 0.0))
    }

    /// In-place spectral multiplication; the field must be spectral.
    pub fn multiply_spectrum(&mut self, symbol: impl Fn(f64, f64) -> Complex64) {
        assert_eq!(
            self.space,
            Space::Spectral,
            "multiply_spectrum needs spectral data"
        );
        let ny = self.grid.ny();
        let grid = self.grid.clone();
        for (i, &xi) in grid.xi().iter().enumerate() {
            let row = &mut self.data[i * ny..(i + 1) * ny];
            for (z, &eta) in row.iter_mut().zip(grid.eta()) {
                *z *= symbol(xi, eta);
            }
        }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|z| *z *= a);
        out
    }

    /// `a * self + b * other`, in the representation of `self`.
    pub fn lin_comb(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        self.check_compatible(other);
        let other = other.clone().into_space(self.space);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(u, v)| a * u + b * v)
            .collect();
        Self {
            grid: self.grid.clone(),
            data,
            space: self.space,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.lin_comb(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.lin_comb(Complex64::new(1.0, 0.0), other, Complex64::new(1.0, 0.0))
    }

    pub fn conj(&self) -> Self {
        let mut out = self.physical();
        out.data.iter_mut().for_each(|z| *z = z.conj());
        out.into_space(self.space)
    }

    /// The field `(x, y) -> f(-x, -y)` on the periodic grid.
    pub fn flip(&self) -> Self {
        let phys = self.physical();
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        let mut data = vec![Complex64::default(); nx * ny];
        for i in 0..nx {
            let fi = self.grid.flip_x(i);
            for j in 0..ny {
                data[fi * ny + self.grid.flip_y(j)] = phys.data[i * ny + j];
            }
        }
        Self {
            grid: self.grid.clone(),
            data,
            space: Space::Physical,
        }
        .into_space(self.space)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
    }
}

fn lq(data: &[Complex64], q: f64, area: f64) -> f64 {
    if q.is_infinite() {
        return data.iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    if q == 2.0 {
        let s: f64 = data.iter().map(|z| z.norm_sqr()).sum();
        return (s * area).sqrt();
    }
    let s: f64 = data.iter().map(|z| z.norm().powf(q)).sum();
    (s * area).powf(1.0 / q)
}
