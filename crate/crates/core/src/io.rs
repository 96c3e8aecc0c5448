//! Flat binary snapshot format.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic   4 bytes  "DNLS"
//! version u32      1
//! d       u32
//! K       u32      0 when the domain is not spec-backed
//! R       u32      0 when the domain is not spec-backed
//! tag     u32      domain tag, see below
//! extras           tag-dependent geometry
//! count   u64      number of complex values
//! data             count × (f64 re, f64 im) in interior row-major order
//! ```
//!
//! Tags: 0 finite spec-backed (`h = π/K`, half-side `πR`, no extras);
//! 1 periodic (`f64` spacing, `u64` points per axis); 2 continuum grid
//! (same extras as 1); 3 finite with general spacing (`f64` spacing,
//! `u64` half-steps). Adding 16 to a finite tag marks the payload as
//! eigen-expansion coefficients instead of grid values.

use std::io::{Read, Write};

use num_complex::Complex;

use crate::error::{CoreError, Result};
use crate::lattice::{ContinuumGrid, Domain, FiniteLattice, GridFunction, PeriodicLattice};
use crate::scalar::{cast, Real};
use crate::spectral::SpectralCoeffs;

const MAGIC: &[u8; 4] = b"DNLS";
const VERSION: u32 = 1;
const COEFF_TAG_OFFSET: u32 = 16;

fn write_u32(w: &mut impl Write, v: u32) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn write_u64(w: &mut impl Write, v: u64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn write_f64(w: &mut impl Write, v: f64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(f64::from_le_bytes(buf))
}

/// Recover `(K, R)` when a finite lattice is exactly spec-backed.
fn recover_spec<T: Real>(lat: &FiniteLattice<T>) -> Option<(u32, u32)> {
    let h = lat.spacing().to_f64()?;
    let k = (std::f64::consts::PI / h).round();
    if !(k >= 1.0 && k <= u32::MAX as f64) {
        return None;
    }
    let k_u = k as u32;
    // spacing must be bitwise the stored π/K to round-trip exactly
    if lat.spacing() != T::PI() / cast::<T>(k) {
        return None;
    }
    if !lat.half_steps().is_multiple_of(k_u as usize) {
        return None;
    }
    Some((k_u, (lat.half_steps() / k_u as usize) as u32))
}

fn write_domain_header<T: Real>(w: &mut impl Write, domain: &Domain<T>, coeffs: bool) -> Result<()> {
    w.write_all(MAGIC)?;
    write_u32(w, VERSION)?;
    write_u32(w, domain.dim() as u32)?;
    match domain {
        Domain::Finite(lat) => {
            if let Some((k, r)) = recover_spec(lat) {
                write_u32(w, k)?;
                write_u32(w, r)?;
                write_u32(w, if coeffs { COEFF_TAG_OFFSET } else { 0 })?;
            } else {
                write_u32(w, 0)?;
                write_u32(w, 0)?;
                write_u32(w, 3 + if coeffs { COEFF_TAG_OFFSET } else { 0 })?;
                write_f64(w, lat.spacing().to_f64().unwrap())?;
                write_u64(w, lat.half_steps() as u64)?;
            }
        }
        Domain::Periodic(lat) => {
            if coeffs {
                return Err(CoreError::Format(
                    "coefficient payloads are finite-lattice only".into(),
                ));
            }
            write_u32(w, 0)?;
            write_u32(w, 0)?;
            write_u32(w, 1)?;
            write_f64(w, lat.spacing().to_f64().unwrap())?;
            write_u64(w, lat.points_per_axis() as u64)?;
        }
        Domain::Continuum(grid) => {
            if coeffs {
                return Err(CoreError::Format(
                    "coefficient payloads are finite-lattice only".into(),
                ));
            }
            write_u32(w, 0)?;
            write_u32(w, 0)?;
            write_u32(w, 2)?;
            write_f64(w, grid.spacing().to_f64().unwrap())?;
            write_u64(w, grid.points_per_axis() as u64)?;
        }
    }
    Ok(())
}

fn write_values<T: Real>(w: &mut impl Write, values: &[Complex<T>]) -> Result<()> {
    write_u64(w, values.len() as u64)?;
    for v in values {
        write_f64(w, v.re.to_f64().ok_or_else(nonfinite)?)?;
        write_f64(w, v.im.to_f64().ok_or_else(nonfinite)?)?;
    }
    Ok(())
}

fn nonfinite() -> CoreError {
    CoreError::Format("value not representable as f64".into())
}

/// Serialize a grid function.
pub fn write_grid<T: Real>(w: &mut impl Write, f: &GridFunction<T>) -> Result<()> {
    write_domain_header(w, f.domain(), false)?;
    write_values(w, f.values())
}

/// Serialize eigen-expansion coefficients.
pub fn write_coeffs<T: Real>(w: &mut impl Write, c: &SpectralCoeffs<T>) -> Result<()> {
    write_domain_header(w, &Domain::Finite(*c.lattice()), true)?;
    write_values(w, c.coeffs())
}

struct Header<T> {
    domain: Domain<T>,
    coeffs: bool,
}

fn read_header<T: Real>(r: &mut impl Read) -> Result<Header<T>> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(CoreError::Format("bad magic".into()));
    }
    let version = read_u32(r)?;
    if version != VERSION {
        return Err(CoreError::Format(format!("unsupported version {version}")));
    }
    let d = read_u32(r)? as usize;
    let k = read_u32(r)?;
    let rr = read_u32(r)?;
    let tag = read_u32(r)?;
    let coeffs = tag >= COEFF_TAG_OFFSET;
    let base_tag = tag % COEFF_TAG_OFFSET;
    let domain = match base_tag {
        0 => {
            if k == 0 || rr == 0 {
                return Err(CoreError::Format("spec-backed tag with K=0 or R=0".into()));
            }
            let lat = crate::lattice::LatticeSpec::new(d, k, rr, 0.0)
                .map_err(|e| CoreError::Format(e.to_string()))?
                .lattice::<T>();
            Domain::Finite(lat)
        }
        1 => {
            let spacing = cast::<T>(read_f64(r)?);
            let points = read_u64(r)? as usize;
            Domain::Periodic(
                PeriodicLattice::new(d, spacing, points)
                    .map_err(|e| CoreError::Format(e.to_string()))?,
            )
        }
        2 => {
            let spacing = cast::<T>(read_f64(r)?);
            let points = read_u64(r)? as usize;
            Domain::Continuum(
                ContinuumGrid::new(d, spacing, points)
                    .map_err(|e| CoreError::Format(e.to_string()))?,
            )
        }
        3 => {
            let spacing = cast::<T>(read_f64(r)?);
            let half_steps = read_u64(r)? as usize;
            Domain::Finite(
                FiniteLattice::new(d, spacing, half_steps)
                    .map_err(|e| CoreError::Format(e.to_string()))?,
            )
        }
        other => return Err(CoreError::Format(format!("unknown domain tag {other}"))),
    };
    Ok(Header { domain, coeffs })
}

fn read_values<T: Real>(r: &mut impl Read, expected: usize) -> Result<Vec<Complex<T>>> {
    let count = read_u64(r)? as usize;
    if count != expected {
        return Err(CoreError::Format(format!(
            "value count {count} does not match domain cardinality {expected}"
        )));
    }
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        let re = cast::<T>(read_f64(r)?);
        let im = cast::<T>(read_f64(r)?);
        values.push(Complex::new(re, im));
    }
    Ok(values)
}

/// Deserialize a grid function.
pub fn read_grid<T: Real>(r: &mut impl Read) -> Result<GridFunction<T>> {
    let header = read_header::<T>(r)?;
    if header.coeffs {
        return Err(CoreError::Format(
            "payload holds coefficients, not grid values".into(),
        ));
    }
    let values = read_values(r, header.domain.len())?;
    GridFunction::from_values(header.domain, values)
}

/// Deserialize eigen-expansion coefficients.
pub fn read_coeffs<T: Real>(r: &mut impl Read) -> Result<SpectralCoeffs<T>> {
    let header = read_header::<T>(r)?;
    if !header.coeffs {
        return Err(CoreError::Format(
            "payload holds grid values, not coefficients".into(),
        ));
    }
    let lat = *header.domain.as_finite()?;
    let values = read_values(r, lat.interior_len())?;
    SpectralCoeffs::from_values(lat, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeSpec;
    use crate::spectral::forward;

    #[test]
    fn grid_round_trip_spec_backed() {
        let lat = LatticeSpec::new(2, 4, 2, 0.0).unwrap().lattice::<f64>();
        let f = GridFunction::from_fn(Domain::Finite(lat), |x| {
            Complex::new(x[0].sin(), x[1].cos())
        });
        let mut buf = Vec::new();
        write_grid(&mut buf, &f).unwrap();
        // spec-backed header carries K and R
        assert_eq!(&buf[0..4], b"DNLS");
        assert_eq!(u32::from_le_bytes(buf[12..16].try_into().unwrap()), 4);
        assert_eq!(u32::from_le_bytes(buf[16..20].try_into().unwrap()), 2);
        let g: GridFunction<f64> = read_grid(&mut buf.as_slice()).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn grid_round_trip_periodic_and_unit() {
        let per = PeriodicLattice::new(1, 0.5, 8).unwrap();
        let f = GridFunction::from_fn(Domain::Periodic(per), |x| Complex::new(x[0], -x[0]));
        let mut buf = Vec::new();
        write_grid(&mut buf, &f).unwrap();
        let g: GridFunction<f64> = read_grid(&mut buf.as_slice()).unwrap();
        assert_eq!(g, f);

        let unit = FiniteLattice::<f64>::unit_spacing(1, 5).unwrap();
        let u = GridFunction::from_fn(Domain::Finite(unit), |x| Complex::new(x[0], 0.0));
        let mut buf2 = Vec::new();
        write_grid(&mut buf2, &u).unwrap();
        let v: GridFunction<f64> = read_grid(&mut buf2.as_slice()).unwrap();
        assert_eq!(v, u);
    }

    #[test]
    fn coeffs_round_trip_and_kind_check() {
        let lat = LatticeSpec::new(1, 2, 2, 0.0).unwrap().lattice::<f64>();
        let f = GridFunction::from_fn(Domain::Finite(lat), |x| Complex::new(x[0].cos(), 0.1));
        let c = forward(&f).unwrap();
        let mut buf = Vec::new();
        write_coeffs(&mut buf, &c).unwrap();
        let c2: SpectralCoeffs<f64> = read_coeffs(&mut buf.as_slice()).unwrap();
        assert_eq!(c2.coeffs(), c.coeffs());
        // reading coefficients as a grid is rejected
        assert!(read_grid::<f64>(&mut buf.as_slice()).is_err());
    }

    #[test]
    fn corrupt_header_rejected() {
        let mut buf = b"XNLS".to_vec();
        buf.extend_from_slice(&[0u8; 64]);
        assert!(read_grid::<f64>(&mut buf.as_slice()).is_err());
    }
}
