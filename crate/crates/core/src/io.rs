//! HFLD1 field snapshots and number formatting for tabular output.
//!
//! HFLD1 layout (little endian): magic `HFLD1\0`, `u32` dimension, `u32` points per axis,
//! `f64` half extent, `f64` epsilon, `f64` time, then `N^n` interleaved `(re, im)` `f64`
//! pairs in row-major order with axis 0 slowest.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex;

use crate::error::{HartreeError, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::scalar::{cst, f64_of, Real};

pub const HFLD1_MAGIC: &[u8; 6] = b"HFLD1\0";

/// Formats a number with 17 significant digits.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    format!("{x:.16e}")
}

pub fn write_hfld1<T: Real, W: Write>(u: &Field<T>, mut w: W) -> Result<()> {
    w.write_all(HFLD1_MAGIC)?;
    w.write_all(&(u.grid.dim() as u32).to_le_bytes())?;
    w.write_all(&(u.grid.points() as u32).to_le_bytes())?;
    for v in [u.grid.half_extent(), u.epsilon, u.time] {
        w.write_all(&f64_of(v).to_le_bytes())?;
    }
    for v in &u.values {
        w.write_all(&f64_of(v.re).to_le_bytes())?;
        w.write_all(&f64_of(v.im).to_le_bytes())?;
    }
    Ok(())
}

pub fn read_hfld1<T: Real, R: Read>(mut r: R) -> Result<Field<T>> {
    let mut magic = [0u8; 6];
    r.read_exact(&mut magic)?;
    if &magic != HFLD1_MAGIC {
        return Err(HartreeError::Format("not an HFLD1 stream".into()));
    }
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b4)?;
    let dim = u32::from_le_bytes(b4) as usize;
    r.read_exact(&mut b4)?;
    let points = u32::from_le_bytes(b4) as usize;
    let mut head = [0f64; 3];
    for h in head.iter_mut() {
        r.read_exact(&mut b8)?;
        *h = f64::from_le_bytes(b8);
    }
    let grid = Grid::new(dim, points, cst::<T>(head[0])).map_err(|e| HartreeError::Format(e.to_string()))?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        r.read_exact(&mut b8)?;
        let re = f64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        let im = f64::from_le_bytes(b8);
        values.push(Complex::new(cst::<T>(re), cst::<T>(im)));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(HartreeError::Format("trailing bytes after HFLD1 payload".into()));
    }
    Ok(Field { grid, values, epsilon: cst(head[1]), time: cst(head[2]) })
}

pub fn save_hfld1<T: Real>(u: &Field<T>, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_hfld1(u, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load_hfld1<T: Real>(path: impl AsRef<Path>) -> Result<Field<T>> {
    read_hfld1(BufReader::new(File::open(path)?))
}

/// Writes `(coordinate, re, im)` rows of a 1-d field or a 1-d section through the origin
/// along axis 0 as whitespace separated columns.
pub fn write_dat<T: Real, W: Write>(u: &Field<T>, mut w: W) -> Result<()> {
    let g = u.grid;
    let mid = g.points() / 2;
    writeln!(w, "# x re im")?;
    for j in 0..g.points() {
        let mut m = [mid; 3];
        m[0] = j;
        let v = u.values[g.ravel(&m)];
        writeln!(w, "{} {} {}", fmt_g17(f64_of(g.coord(j))), fmt_g17(f64_of(v.re)), fmt_g17(f64_of(v.im)))?;
    }
    Ok(())
}
