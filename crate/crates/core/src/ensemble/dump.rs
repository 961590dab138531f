//! Eigenvalue dumps in CSV and a small binary format.
//!
//! Binary layout: magic `GUESPEC1`, `u32` N, `u32` sample count, then the
//! eigenvalues as little-endian `f64`, one sample per row.

use std::io::{self, Read, Write};

use super::eigen::SpectrumSample;
use crate::scalar::Real;

pub const MAGIC: &[u8; 8] = b"GUESPEC1";

fn check_widths<T>(samples: &[SpectrumSample<T>]) -> io::Result<usize> {
    let n = samples.first().map_or(0, |s| s.eigenvalues.len());
    if samples.iter().any(|s| s.eigenvalues.len() != n) {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "samples have different sizes"));
    }
    Ok(n)
}

/// Header `lambda_1,...,lambda_N`, then one row per sample.
pub fn write_csv<T: Real, W: Write>(out: &mut W, n: usize, samples: &[SpectrumSample<T>]) -> io::Result<()> {
    if !samples.is_empty() && check_widths(samples)? != n {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "sample size differs from N"));
    }
    let header: Vec<String> = (1..=n).map(|i| format!("lambda_{i}")).collect();
    writeln!(out, "{}", header.join(","))?;
    for s in samples {
        let row: Vec<String> = s.eigenvalues.iter().map(|x| format!("{:e}", x.as_f64())).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_binary<T: Real, W: Write>(out: &mut W, n: usize, samples: &[SpectrumSample<T>]) -> io::Result<()> {
    if !samples.is_empty() && check_widths(samples)? != n {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "sample size differs from N"));
    }
    let too_big = |_| io::Error::new(io::ErrorKind::InvalidInput, "size does not fit in u32");
    out.write_all(MAGIC)?;
    out.write_all(&u32::try_from(n).map_err(too_big)?.to_le_bytes())?;
    out.write_all(&u32::try_from(samples.len()).map_err(too_big)?.to_le_bytes())?;
    for s in samples {
        for x in &s.eigenvalues {
            out.write_all(&x.as_f64().to_le_bytes())?;
        }
    }
    Ok(())
}

/// Reads a binary dump back as rows of eigenvalues.
pub fn read_binary<R: Read>(input: &mut R) -> io::Result<Vec<Vec<f64>>> {
    let mut head = [0u8; 16];
    input.read_exact(&mut head)?;
    if &head[..8] != MAGIC {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "bad magic"));
    }
    let n = u32::from_le_bytes(head[8..12].try_into().unwrap()) as usize;
    let count = u32::from_le_bytes(head[12..16].try_into().unwrap()) as usize;
    let mut rows = Vec::with_capacity(count);
    let mut buf = [0u8; 8];
    for _ in 0..count {
        let mut row = Vec::with_capacity(n);
        for _ in 0..n {
            input.read_exact(&mut buf)?;
            row.push(f64::from_le_bytes(buf));
        }
        rows.push(row);
    }
    Ok(rows)
}
