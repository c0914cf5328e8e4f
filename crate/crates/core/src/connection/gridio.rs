//! Little-endian binary grids: `form.grid` (magic `ZCG1`) and `frame.grid` (magic `ZCF1`).
//!
//! Header: magic, `nu: u32`, `nv: u32`, `h: f64`, `dim: u32` (algebra dimension, or matrix
//! size `n` for frames), `periodic_u: u8`, `periodic_v: u8`. Payload is node-major with
//! `u` fastest; forms store `A_u` then `A_v` per node, frames store `n x n` row-major.

use std::io::{Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use nalgebra::{DMatrix, DVector};

use super::form::{DiscreteOneForm, FrameGrid};
use super::grid::Grid2D;
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

pub const FORM_MAGIC: &[u8; 4] = b"ZCG1";
pub const FRAME_MAGIC: &[u8; 4] = b"ZCF1";

/// Refuse headers that would allocate more than this many values.
const MAX_VALUES: usize = 1 << 28;

fn write_header<W: Write>(w: &mut W, magic: &[u8; 4], g: &Grid2D, dim: usize) -> Result<()> {
    w.write_all(magic)?;
    w.write_u32::<LittleEndian>(g.nu as u32)?;
    w.write_u32::<LittleEndian>(g.nv as u32)?;
    w.write_f64::<LittleEndian>(g.h)?;
    w.write_u32::<LittleEndian>(dim as u32)?;
    w.write_u8(g.periodic_u as u8)?;
    w.write_u8(g.periodic_v as u8)?;
    Ok(())
}

fn read_header<R: Read>(r: &mut R, magic: &[u8; 4]) -> Result<(Grid2D, usize)> {
    let mut m = [0u8; 4];
    r.read_exact(&mut m)?;
    if &m != magic {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&m),
            String::from_utf8_lossy(magic)
        )));
    }
    let nu = r.read_u32::<LittleEndian>()? as usize;
    let nv = r.read_u32::<LittleEndian>()? as usize;
    let h = r.read_f64::<LittleEndian>()?;
    let dim = r.read_u32::<LittleEndian>()? as usize;
    let pu = r.read_u8()?;
    let pv = r.read_u8()?;
    if pu > 1 || pv > 1 {
        return Err(Error::Format("periodic flags must be 0 or 1".into()));
    }
    let g = Grid2D::new(nu, nv, h, pu == 1, pv == 1).map_err(|e| Error::Format(e.to_string()))?;
    if dim == 0 || g.len().saturating_mul(dim).saturating_mul(dim.max(2)) > MAX_VALUES {
        return Err(Error::Format(format!("unreasonable payload size ({nu}x{nv} nodes, dim {dim})")));
    }
    Ok((g, dim))
}

pub fn write_form<T: Real, W: Write>(w: &mut W, form: &DiscreteOneForm<T>) -> Result<()> {
    write_header(w, FORM_MAGIC, &form.grid, form.dim())?;
    for k in 0..form.grid.len() {
        for v in form.au[k].iter().chain(form.av[k].iter()) {
            w.write_f64::<LittleEndian>(to_f64(*v))?;
        }
    }
    Ok(())
}

pub fn read_form<T: Real, R: Read>(r: &mut R) -> Result<DiscreteOneForm<T>> {
    let (g, dim) = read_header(r, FORM_MAGIC)?;
    let mut au = Vec::with_capacity(g.len());
    let mut av = Vec::with_capacity(g.len());
    let mut buf = vec![0.0f64; 2 * dim];
    for _ in 0..g.len() {
        r.read_f64_into::<LittleEndian>(&mut buf)?;
        au.push(DVector::from_iterator(dim, buf[..dim].iter().map(|&x| lit::<T>(x))));
        av.push(DVector::from_iterator(dim, buf[dim..].iter().map(|&x| lit::<T>(x))));
    }
    Ok(DiscreteOneForm { grid: g, au, av })
}

pub fn write_frames<T: Real, W: Write>(w: &mut W, frames: &FrameGrid<T>) -> Result<()> {
    write_header(w, FRAME_MAGIC, &frames.grid, frames.n)?;
    for f in &frames.frames {
        for r in 0..frames.n {
            for c in 0..frames.n {
                w.write_f64::<LittleEndian>(to_f64(f[(r, c)]))?;
            }
        }
    }
    Ok(())
}

pub fn read_frames<T: Real, R: Read>(r: &mut R) -> Result<FrameGrid<T>> {
    let (g, n) = read_header(r, FRAME_MAGIC)?;
    let mut frames = Vec::with_capacity(g.len());
    let mut buf = vec![0.0f64; n * n];
    for _ in 0..g.len() {
        r.read_f64_into::<LittleEndian>(&mut buf)?;
        frames.push(DMatrix::from_row_iterator(n, n, buf.iter().map(|&x| lit::<T>(x))));
    }
    Ok(FrameGrid { grid: g, n, frames })
}

/// Peeks at the magic to tell forms and frames apart.
pub fn sniff(path: &Path) -> Result<[u8; 4]> {
    let mut f = std::fs::File::open(path)?;
    let mut m = [0u8; 4];
    f.read_exact(&mut m)?;
    Ok(m)
}

pub fn save_form<T: Real>(path: &Path, form: &DiscreteOneForm<T>) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_form(&mut w, form)?;
    w.flush()?;
    Ok(())
}

pub fn load_form<T: Real>(path: &Path) -> Result<DiscreteOneForm<T>> {
    read_form(&mut std::io::BufReader::new(std::fs::File::open(path)?))
}

pub fn save_frames<T: Real>(path: &Path, frames: &FrameGrid<T>) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_frames(&mut w, frames)?;
    w.flush()?;
    Ok(())
}

pub fn load_frames<T: Real>(path: &Path) -> Result<FrameGrid<T>> {
    read_frames(&mut std::io::BufReader::new(std::fs::File::open(path)?))
}
