//! Binary checkpoints.
//!
//! Layout, all little-endian:
//!
//! ```text
//! b"KGS1"
//! dim: u32, modes: u32 x dim, lengths: f64 x dim
//! level: u64 (0 = inf), step: u64, t: f64
//! u: (re, im) f64 pairs, v: f64, vt: f64   (row-major, mode count each)
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use ndarray::{ArrayD, IxDyn};
use num_complex::Complex64;

use crate::dynamics::State;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::{Grid, GridSpec};
use crate::reg::RegLevel;

const MAGIC: &[u8; 4] = b"KGS1";

#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub level: RegLevel,
    /// Steps taken since the start of the run.
    pub step: u64,
    pub state: State,
}

pub fn write_checkpoint(path: &Path, cp: &Checkpoint) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&encode(cp))?;
    w.flush()?;
    Ok(())
}

pub fn encode(cp: &Checkpoint) -> Vec<u8> {
    let s = &cp.state;
    let spec = s.grid().spec();
    let n = spec.num_modes();
    let mut b = Vec::with_capacity(48 + 12 * spec.dim + 32 * n);
    b.extend_from_slice(MAGIC);
    b.extend_from_slice(&(spec.dim as u32).to_le_bytes());
    for &m in &spec.modes {
        b.extend_from_slice(&(m as u32).to_le_bytes());
    }
    for &l in &spec.lengths {
        b.extend_from_slice(&l.to_le_bytes());
    }
    b.extend_from_slice(&cp.level.to_wire().to_le_bytes());
    b.extend_from_slice(&cp.step.to_le_bytes());
    b.extend_from_slice(&s.t.to_le_bytes());
    for c in s.u.coeffs().iter() {
        b.extend_from_slice(&c.re.to_le_bytes());
        b.extend_from_slice(&c.im.to_le_bytes());
    }
    for f in [&s.v, &s.vt] {
        for c in f.coeffs().iter() {
            b.extend_from_slice(&c.re.to_le_bytes());
        }
    }
    b
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take<const K: usize>(&mut self) -> Result<[u8; K]> {
        let end = self.pos + K;
        let s = self
            .buf
            .get(self.pos..end)
            .ok_or_else(|| Error::Checkpoint(format!("truncated at byte {}", self.pos)))?;
        self.pos = end;
        Ok(s.try_into().expect("length checked"))
    }
    fn u32(&mut self) -> Result<u32> {
        self.take::<4>().map(u32::from_le_bytes)
    }
    fn u64(&mut self) -> Result<u64> {
        self.take::<8>().map(u64::from_le_bytes)
    }
    fn f64(&mut self) -> Result<f64> {
        self.take::<8>().map(f64::from_le_bytes)
    }
}

pub fn decode(buf: &[u8]) -> Result<Checkpoint> {
    let mut c = Cursor { buf, pos: 0 };
    if &c.take::<4>()? != MAGIC {
        return Err(Error::Checkpoint("bad magic, expected KGS1".into()));
    }
    let dim = c.u32()? as usize;
    if !(1..=3).contains(&dim) {
        return Err(Error::Checkpoint(format!("dimension {dim} out of range")));
    }
    let modes = (0..dim).map(|_| c.u32().map(|m| m as usize)).collect::<Result<Vec<_>>>()?;
    let lengths = (0..dim).map(|_| c.f64()).collect::<Result<Vec<_>>>()?;
    let spec = GridSpec::new(modes, lengths).map_err(|e| Error::Checkpoint(e.to_string()))?;
    let level = RegLevel::from_wire(c.u64()?);
    let step = c.u64()?;
    let t = c.f64()?;
    let n = spec.num_modes();
    let expected = c.pos + 32 * n;
    if buf.len() != expected {
        return Err(Error::Checkpoint(format!("expected {expected} bytes, found {}", buf.len())));
    }
    let shape = IxDyn(&spec.modes);
    let grid: Arc<Grid> = Grid::new(spec)?;
    let u: Vec<Complex64> = (0..n)
        .map(|_| Ok(Complex64::new(c.f64()?, c.f64()?)))
        .collect::<Result<_>>()?;
    let mut real = || -> Result<ArrayD<f64>> {
        let v = (0..n).map(|_| c.f64()).collect::<Result<Vec<_>>>()?;
        Ok(ArrayD::from_shape_vec(shape.clone(), v).expect("shape matches"))
    };
    let v = real()?;
    let vt = real()?;
    let u = ArrayD::from_shape_vec(shape.clone(), u).expect("shape matches");
    let state = State::new(
        Field::from_complex(&grid, u)?,
        Field::from_real(&grid, v)?,
        Field::from_real(&grid, vt)?,
        t,
    )?;
    Ok(Checkpoint { level, step, state })
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    let mut buf = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut buf)?;
    decode(&buf)
}
