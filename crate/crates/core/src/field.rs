//! Scalar and 3-component vector fields on a periodic grid.
//!
//! Values are stored component-major with x1 varying fastest. A field is
//! either in physical representation (real samples) or spectral
//! representation (half-spectrum complex coefficients along x1). All
//! operations treat fields as immutable values and return fresh outputs.

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::Grid3;
use num_complex::Complex64;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Spectral,
}

#[derive(Debug, Clone)]
enum Values {
    Physical(Vec<f64>),
    Spectral(Vec<Complex64>),
}

#[derive(Debug, Clone)]
pub struct Field {
    grid: Grid3,
    components: usize,
    values: Values,
}

/// Magic bytes of the binary field file format.
pub const ANSF_MAGIC: &[u8; 4] = b"ANSF";
/// Current version byte of the binary field file format.
pub const ANSF_VERSION: u8 = 0x01;

impl Field {
    pub fn zeros(grid: Grid3, components: usize) -> Result<Self> {
        check_components(components)?;
        Ok(Field {
            grid,
            components,
            values: Values::Physical(vec![0.0; components * grid.len()]),
        })
    }

    pub fn from_values(grid: Grid3, components: usize, values: Vec<f64>) -> Result<Self> {
        check_components(components)?;
        if values.len() != components * grid.len() {
            return Err(Error::invalid(format!(
                "value count {} does not match {} component(s) on a {}x{}x{} grid",
                values.len(),
                components,
                grid.n1(),
                grid.n2(),
                grid.n3()
            )));
        }
        let f = Field {
            grid,
            components,
            values: Values::Physical(values),
        };
        f.check_finite()?;
        Ok(f)
    }

    pub fn from_spectral(grid: Grid3, components: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        check_components(components)?;
        if coeffs.len() != components * grid.spectral_len() {
            return Err(Error::invalid(format!(
                "coefficient count {} does not match the half-spectrum layout",
                coeffs.len()
            )));
        }
        Ok(Field {
            grid,
            components,
            values: Values::Spectral(coeffs),
        })
    }

    /// Samples a scalar function of the physical coordinates.
    pub fn scalar_from_fn(grid: Grid3, f: impl Fn(f64, f64, f64) -> f64) -> Result<Self> {
        let [n1, n2, n3] = grid.n();
        let mut values = vec![0.0; grid.len()];
        for i3 in 0..n3 {
            for i2 in 0..n2 {
                for i1 in 0..n1 {
                    let [x1, x2, x3] = grid.coords(i1, i2, i3);
                    values[grid.index(i1, i2, i3)] = f(x1, x2, x3);
                }
            }
        }
        Field::from_values(grid, 1, values)
    }

    /// Samples a vector function of the physical coordinates.
    pub fn vector_from_fn(grid: Grid3, f: impl Fn(f64, f64, f64) -> [f64; 3]) -> Result<Self> {
        let [n1, n2, n3] = grid.n();
        let len = grid.len();
        let mut values = vec![0.0; 3 * len];
        for i3 in 0..n3 {
            for i2 in 0..n2 {
                for i1 in 0..n1 {
                    let [x1, x2, x3] = grid.coords(i1, i2, i3);
                    let v = f(x1, x2, x3);
                    let idx = grid.index(i1, i2, i3);
                    values[idx] = v[0];
                    values[len + idx] = v[1];
                    values[2 * len + idx] = v[2];
                }
            }
        }
        Field::from_values(grid, 3, values)
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn representation(&self) -> Representation {
        match self.values {
            Values::Physical(_) => Representation::Physical,
            Values::Spectral(_) => Representation::Spectral,
        }
    }

    pub fn is_scalar(&self) -> bool {
        self.components == 1
    }

    /// Physical samples of one component; converts if needed.
    pub fn component_values(&self, c: usize) -> Vec<f64> {
        assert!(c < self.components, "component {c} out of range");
        match &self.values {
            Values::Physical(v) => {
                let len = self.grid.len();
                v[c * len..(c + 1) * len].to_vec()
            }
            Values::Spectral(s) => {
                let len = self.grid.spectral_len();
                fft::inverse_scalar(&self.grid, &s[c * len..(c + 1) * len])
            }
        }
    }

    /// Extracts one component as a scalar field (physical representation).
    pub fn component(&self, c: usize) -> Result<Field> {
        if c >= self.components {
            return Err(Error::invalid(format!(
                "component {c} out of range for a {}-component field",
                self.components
            )));
        }
        Field::from_values(self.grid, 1, self.component_values(c))
    }

    /// Borrowed physical samples of all components, converting on demand.
    pub fn physical(&self) -> Field {
        match self.values {
            Values::Physical(_) => self.clone(),
            Values::Spectral(_) => {
                let mut out = Vec::with_capacity(self.components * self.grid.len());
                for c in 0..self.components {
                    out.extend_from_slice(&self.component_values(c));
                }
                Field {
                    grid: self.grid,
                    components: self.components,
                    values: Values::Physical(out),
                }
            }
        }
    }

    pub fn spectral(&self) -> Field {
        match &self.values {
            Values::Spectral(_) => self.clone(),
            Values::Physical(v) => {
                let len = self.grid.len();
                let mut coeffs = Vec::with_capacity(self.components * self.grid.spectral_len());
                for c in 0..self.components {
                    coeffs.extend_from_slice(&fft::forward_scalar(
                        &self.grid,
                        &v[c * len..(c + 1) * len],
                    ));
                }
                Field {
                    grid: self.grid,
                    components: self.components,
                    values: Values::Spectral(coeffs),
                }
            }
        }
    }

    pub fn physical_slice(&self) -> Option<&[f64]> {
        match &self.values {
            Values::Physical(v) => Some(v),
            Values::Spectral(_) => None,
        }
    }

    pub fn spectral_slice(&self) -> Option<&[Complex64]> {
        match &self.values {
            Values::Spectral(s) => Some(s),
            Values::Physical(_) => None,
        }
    }

    /// Spectral coefficients of one component; converts if needed.
    pub fn component_spectrum(&self, c: usize) -> Vec<Complex64> {
        assert!(c < self.components, "component {c} out of range");
        match &self.values {
            Values::Spectral(s) => {
                let len = self.grid.spectral_len();
                s[c * len..(c + 1) * len].to_vec()
            }
            Values::Physical(v) => {
                let len = self.grid.len();
                fft::forward_scalar(&self.grid, &v[c * len..(c + 1) * len])
            }
        }
    }

    pub fn scale(&self, factor: f64) -> Field {
        let mut out = self.clone();
        match &mut out.values {
            Values::Physical(v) => v.iter_mut().for_each(|x| *x *= factor),
            Values::Spectral(s) => s.iter_mut().for_each(|x| *x *= factor),
        }
        out
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        if self.grid != other.grid || self.components != other.components {
            return Err(Error::invalid(
                "fields must share grid and component count".to_string(),
            ));
        }
        let a = self.physical();
        let b = other.physical();
        let (Values::Physical(av), Values::Physical(bv)) = (&a.values, &b.values) else {
            unreachable!()
        };
        let sum = av.iter().zip(bv).map(|(x, y)| x + y).collect();
        Field::from_values(self.grid, self.components, sum)
    }

    pub fn check_finite(&self) -> Result<()> {
        let finite = match &self.values {
            Values::Physical(v) => v.iter().all(|x| x.is_finite()),
            Values::Spectral(s) => s.iter().all(|x| x.re.is_finite() && x.im.is_finite()),
        };
        if finite {
            Ok(())
        } else {
            Err(Error::Consistency(
                "field contains NaN or infinite values".to_string(),
            ))
        }
    }

    pub fn max_abs(&self) -> f64 {
        let phys = self.physical();
        let Values::Physical(v) = &phys.values else {
            unreachable!()
        };
        v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Mean value over the box of one component.
    pub fn mean(&self, c: usize) -> f64 {
        let v = self.component_values(c);
        v.iter().sum::<f64>() / v.len() as f64
    }

    /// Writes the binary field file (physical representation only):
    /// "ANSF", version 0x01, then little-endian u32 components, u32 n1,
    /// u32 n2, u32 n3, f64 L1, f64 L2, f64 L3, followed by the samples in
    /// storage order.
    pub fn write_ansf(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let phys = self.physical();
        let Values::Physical(v) = &phys.values else {
            unreachable!()
        };
        let mut buf = Vec::with_capacity(45 + v.len() * 8);
        buf.extend_from_slice(ANSF_MAGIC);
        buf.push(ANSF_VERSION);
        buf.extend_from_slice(&(self.components as u32).to_le_bytes());
        for ni in self.grid.n() {
            buf.extend_from_slice(&(ni as u32).to_le_bytes());
        }
        for li in self.grid.lengths() {
            buf.extend_from_slice(&li.to_le_bytes());
        }
        for x in v {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        let mut file =
            fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        file.write_all(&buf)
            .map_err(|e| Error::io(path.display().to_string(), e))
    }

    pub fn read_ansf(path: impl AsRef<Path>) -> Result<Field> {
        let path = path.as_ref();
        let name = path.display().to_string();
        let mut bytes = Vec::new();
        fs::File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| Error::io(name.clone(), e))?;
        if bytes.len() < 45 {
            return Err(Error::format(name, "file shorter than the header"));
        }
        if &bytes[0..4] != ANSF_MAGIC {
            return Err(Error::format(name, "bad magic, expected ANSF"));
        }
        if bytes[4] != ANSF_VERSION {
            return Err(Error::format(
                name,
                format!("unsupported version {}", bytes[4]),
            ));
        }
        let u32_at = |off: usize| {
            u32::from_le_bytes(bytes[off..off + 4].try_into().unwrap()) as usize
        };
        let f64_at =
            |off: usize| f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
        let components = u32_at(5);
        let n = [u32_at(9), u32_at(13), u32_at(17)];
        let l = [f64_at(21), f64_at(29), f64_at(37)];
        let grid = Grid3::new(n, l)?;
        let expected = 45 + components * grid.len() * 8;
        if bytes.len() != expected {
            return Err(Error::format(
                name,
                format!("expected {} bytes, found {}", expected, bytes.len()),
            ));
        }
        let mut values = Vec::with_capacity(components * grid.len());
        for i in 0..components * grid.len() {
            values.push(f64_at(45 + 8 * i));
        }
        Field::from_values(grid, components, values)
    }
}

fn check_components(components: usize) -> Result<()> {
    if components == 1 || components == 3 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "fields have 1 or 3 components, got {components}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn physical_spectral_round_trip() {
        let grid = Grid3::cubic(16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let values: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let f = Field::from_values(grid, 1, values.clone()).unwrap();
            let back = f.spectral().physical();
            let v = back.physical_slice().unwrap();
            let num: f64 = values.iter().zip(v).map(|(a, b)| (a - b).powi(2)).sum();
            let den: f64 = values.iter().map(|a| a * a).sum();
            assert!((num / den).sqrt() < 1e-12);
        }
    }

    #[test]
    fn component_extraction() {
        let grid = Grid3::cubic(8).unwrap();
        let u = Field::vector_from_fn(grid, |x1, x2, _| [x1.sin(), x2.cos(), 0.25]).unwrap();
        let u2 = u.component(1).unwrap();
        let expect = Field::scalar_from_fn(grid, |_, x2, _| x2.cos()).unwrap();
        let a = u2.physical_slice().unwrap();
        let b = expect.physical_slice().unwrap();
        assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15));
        assert!(u.component(3).is_err());
    }

    #[test]
    fn ansf_round_trip_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("field.ansf");
        let grid = Grid3::new([4, 6, 8], [1.0, 2.5, 3.25]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let values: Vec<f64> = (0..3 * grid.len()).map(|_| rng.gen::<f64>()).collect();
        let f = Field::from_values(grid, 3, values.clone()).unwrap();
        f.write_ansf(&path).unwrap();
        let g = Field::read_ansf(&path).unwrap();
        assert_eq!(g.components(), 3);
        assert_eq!(g.grid(), &grid);
        assert_eq!(g.physical_slice().unwrap(), values.as_slice());

        // Re-writing must produce identical bytes.
        let path2 = dir.path().join("field2.ansf");
        g.write_ansf(&path2).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&path2).unwrap());
    }

    #[test]
    fn ansf_byte_layout_is_pinned() {
        // The on-disk layout is part of the format contract: 4 magic
        // bytes, 1 version byte, 4 little-endian u32 words, 3 f64 box
        // lengths, then the samples.
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tiny.ansf");
        let grid = Grid3::new([4, 4, 4], [1.0, 2.0, 3.0]).unwrap();
        let f = Field::scalar_from_fn(grid, |x1, _, _| x1).unwrap();
        f.write_ansf(&path).unwrap();
        let bytes = fs::read(&path).unwrap();
        assert_eq!(bytes.len(), 45 + 64 * 8);
        assert_eq!(&bytes[0..4], b"ANSF");
        assert_eq!(bytes[4], 0x01);
        assert_eq!(u32::from_le_bytes(bytes[5..9].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(bytes[9..13].try_into().unwrap()), 4);
        assert_eq!(f64::from_le_bytes(bytes[21..29].try_into().unwrap()), 1.0);
        assert_eq!(f64::from_le_bytes(bytes[29..37].try_into().unwrap()), 2.0);
        assert_eq!(f64::from_le_bytes(bytes[37..45].try_into().unwrap()), 3.0);
        // First sample is f(0,0,0) = 0, second is f(h1,0,0) = 0.25.
        assert_eq!(f64::from_le_bytes(bytes[45..53].try_into().unwrap()), 0.0);
        assert_eq!(f64::from_le_bytes(bytes[53..61].try_into().unwrap()), 0.25);
    }

    #[test]
    fn ansf_rejects_corrupt_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.ansf");
        fs::write(&path, b"NOPE").unwrap();
        assert!(matches!(
            Field::read_ansf(&path),
            Err(Error::Format { .. })
        ));
        assert!(matches!(
            Field::read_ansf(dir.path().join("missing.ansf")),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn rejects_nonfinite_values() {
        let grid = Grid3::cubic(4).unwrap();
        let mut values = vec![0.0; grid.len()];
        values[5] = f64::NAN;
        assert!(Field::from_values(grid, 1, values).is_err());
    }
}
