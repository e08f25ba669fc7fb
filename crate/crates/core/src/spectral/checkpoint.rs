//! Binary field checkpoints.
//!
//! ```text
//! n=<modes per axis>
//! box_length=<L, shortest round-trip decimal>
//! component_count=3
//! dtype=complex128-le
//! ordering=row-major-fft
//! <blank line>
//! <3 * n^3 little-endian (re, im) f64 pairs: component 0, then 1, then 2>
//! ```

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use super::field::SpectralVectorField;
use super::grid::Grid;
use crate::error::{Error, Result};

const DTYPE: &str = "complex128-le";
const ORDERING: &str = "row-major-fft";

pub fn encode(u: &SpectralVectorField) -> Vec<u8> {
    let grid = u.grid();
    let header = format!(
        "n={}\nbox_length={}\ncomponent_count=3\ndtype={DTYPE}\nordering={ORDERING}\n\n",
        grid.n(),
        grid.box_length()
    );
    let mut out = Vec::with_capacity(header.len() + 48 * grid.len());
    out.extend_from_slice(header.as_bytes());
    for comp in u.components() {
        for v in comp {
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<SpectralVectorField> {
    let mut n: Option<usize> = None;
    let mut box_length: Option<f64> = None;
    let mut seen_components = false;
    let mut seen_dtype = false;
    let mut seen_ordering = false;

    let mut pos = 0;
    loop {
        let rest = &bytes[pos..];
        let end = rest
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::Format("header is not terminated by a blank line".into()))?;
        let line = std::str::from_utf8(&rest[..end])
            .map_err(|_| Error::Format("header is not valid UTF-8".into()))?;
        pos += end + 1;
        if line.is_empty() {
            break;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("header line without '=': {line:?}")))?;
        match key {
            "n" => {
                n = Some(
                    value
                        .parse()
                        .map_err(|_| Error::Format(format!("bad n: {value:?}")))?,
                )
            }
            "box_length" => {
                box_length = Some(
                    value
                        .parse()
                        .map_err(|_| Error::Format(format!("bad box_length: {value:?}")))?,
                )
            }
            "component_count" => {
                if value != "3" {
                    return Err(Error::Format(format!("component_count must be 3, got {value}")));
                }
                seen_components = true;
            }
            "dtype" => {
                if value != DTYPE {
                    return Err(Error::Format(format!("unsupported dtype {value}")));
                }
                seen_dtype = true;
            }
            "ordering" => {
                if value != ORDERING {
                    return Err(Error::Format(format!("unsupported ordering {value}")));
                }
                seen_ordering = true;
            }
            other => return Err(Error::Format(format!("unknown header key {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| Error::Format("missing header key n".into()))?;
    let box_length = box_length.ok_or_else(|| Error::Format("missing header key box_length".into()))?;
    if !(seen_components && seen_dtype && seen_ordering) {
        return Err(Error::Format(
            "header must declare component_count, dtype and ordering".into(),
        ));
    }
    let grid = Grid::new(n, box_length).map_err(|e| Error::Format(e.to_string()))?;

    let payload = &bytes[pos..];
    let expected = 3 * grid.len() * 16;
    if payload.len() < expected {
        return Err(Error::Format(format!(
            "truncated coefficient data: expected {expected} bytes, found {}, missing {} bytes",
            payload.len(),
            expected - payload.len()
        )));
    }
    if payload.len() > expected {
        return Err(Error::Format(format!(
            "{} trailing bytes after coefficient data",
            payload.len() - expected
        )));
    }

    let read = |off: usize| f64::from_le_bytes(payload[off..off + 8].try_into().unwrap());
    let mut comps: [Vec<Complex64>; 3] = Default::default();
    for (j, comp) in comps.iter_mut().enumerate() {
        comp.reserve(grid.len());
        for i in 0..grid.len() {
            let off = (j * grid.len() + i) * 16;
            let v = Complex64::new(read(off), read(off + 8));
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::Format("non-finite coefficient".into()));
            }
            comp.push(v);
        }
    }
    let u = SpectralVectorField::from_trusted(grid, comps);
    if u.coefficient(0).iter().any(|v| v.norm() != 0.0) {
        return Err(Error::Format("mean mode must be zero".into()));
    }
    let defect = u.hermitian_defect();
    if defect > 1e-12 {
        return Err(Error::Format(format!(
            "coefficients are not Hermitian (defect {defect:e})"
        )));
    }
    Ok(u)
}

/// Write-temp-then-rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            path.file_name().and_then(|f| f.to_str()).unwrap_or("out")
        )),
        None => format!(
            ".{}.tmp",
            path.file_name().and_then(|f| f.to_str()).unwrap_or("out")
        )
        .into(),
    };
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn save(path: &Path, u: &SpectralVectorField) -> Result<()> {
    write_atomic(path, &encode(u))
}

pub fn load(path: &Path) -> Result<SpectralVectorField> {
    decode(&std::fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SpectralVectorField {
        let g = Grid::new(8, std::f64::consts::TAU).unwrap();
        SpectralVectorField::from_fn(g, |k| {
            let x = (k[0] * 7 + k[1] * 3 - k[2]) as f64;
            [
                Complex64::new(x.sin(), 0.1 * x),
                Complex64::new(0.3, x.cos()),
                Complex64::new(1.0 / (1.0 + x * x), -0.7),
            ]
        })
        .unwrap()
    }

    #[test]
    fn roundtrip_is_bit_exact() {
        let u = sample();
        let bytes = encode(&u);
        let v = decode(&bytes).unwrap();
        assert_eq!(encode(&v), bytes);
        assert_eq!(v.grid().box_length().to_bits(), u.grid().box_length().to_bits());
    }

    #[test]
    fn truncation_names_missing_bytes() {
        let bytes = encode(&sample());
        let err = decode(&bytes[..bytes.len() - 40]).unwrap_err().to_string();
        assert!(err.contains("missing 40 bytes"), "{err}");
    }

    #[test]
    fn header_errors() {
        assert!(decode(b"n=8\n").is_err());
        assert!(decode(b"n=8\nbox_length=1\ncomponent_count=3\ndtype=complex64\nordering=row-major-fft\n\n").is_err());
        assert!(decode(b"n=8\nbogus=1\n\n").is_err());
    }
}
