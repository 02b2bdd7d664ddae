use super::Modulus;
use crate::error::ArithError;

/// Dense row-major matrix of residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
    modulus: Modulus,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: Modulus) -> Self {
        ModMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
            modulus,
        }
    }

    pub fn identity(n: usize, modulus: Modulus) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds from raw entries, reducing each one.
    pub fn from_vec(
        rows: usize,
        cols: usize,
        data: Vec<u64>,
        modulus: Modulus,
    ) -> Result<Self, ArithError> {
        if data.len() != rows * cols {
            return Err(ArithError::DimensionMismatch(rows, cols, data.len(), 1));
        }
        let data = data.into_iter().map(|x| modulus.reduce(x)).collect();
        Ok(ModMatrix {
            rows,
            cols,
            data,
            modulus,
        })
    }

    pub fn from_rows(rows: &[Vec<u64>], modulus: Modulus) -> Result<Self, ArithError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ArithError::DimensionMismatch(r, c, r, 0));
        }
        Self::from_vec(r, c, rows.concat(), modulus)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn data(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = self.modulus.reduce(v);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn check_same_shape(&self, other: &ModMatrix) -> Result<(), ArithError> {
        if self.modulus != other.modulus {
            return Err(ArithError::ModulusMismatch(
                self.modulus.value(),
                other.modulus.value(),
            ));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(ArithError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &ModMatrix) -> Result<ModMatrix, ArithError> {
        let mut out = self.clone();
        out.add_scaled(other, 1)?;
        Ok(out)
    }

    pub fn sub(&self, other: &ModMatrix) -> Result<ModMatrix, ArithError> {
        let mut out = self.clone();
        out.add_scaled(other, -1)?;
        Ok(out)
    }

    /// `self += factor · other`, the sketch update kernel.
    pub fn add_scaled(&mut self, other: &ModMatrix, factor: i64) -> Result<(), ArithError> {
        self.check_same_shape(other)?;
        let m = self.modulus;
        let f = m.from_i64(factor);
        if f == 0 {
            return Ok(());
        }
        if m.is_pow2() {
            let mask = m.value() - 1;
            for (s, &o) in self.data.iter_mut().zip(&other.data) {
                *s = s.wrapping_add(o.wrapping_mul(f)) & mask;
            }
        } else {
            for (s, &o) in self.data.iter_mut().zip(&other.data) {
                *s = m.add(*s, m.mul(o, f));
            }
        }
        Ok(())
    }

    pub fn scale(&self, factor: i64) -> ModMatrix {
        let mut out = ModMatrix::zeros(self.rows, self.cols, self.modulus);
        out.add_scaled(self, factor).expect("same shape");
        out
    }

    /// Exact product `self · b`.
    pub fn mat_mul(&self, b: &ModMatrix) -> Result<ModMatrix, ArithError> {
        if self.modulus != b.modulus {
            return Err(ArithError::ModulusMismatch(
                self.modulus.value(),
                b.modulus.value(),
            ));
        }
        if self.cols != b.rows {
            return Err(ArithError::DimensionMismatch(
                self.rows, self.cols, b.rows, b.cols,
            ));
        }
        let m = self.modulus;
        let (n, inner, p) = (self.rows, self.cols, b.cols);
        let mut out = vec![0u64; n * p];
        if m.is_pow2() {
            let mask = m.value() - 1;
            for i in 0..n {
                let acc = &mut out[i * p..(i + 1) * p];
                for k in 0..inner {
                    let a = self.data[i * inner + k];
                    if a == 0 {
                        continue;
                    }
                    for (o, &bv) in acc.iter_mut().zip(&b.data[k * p..(k + 1) * p]) {
                        *o = o.wrapping_add(a.wrapping_mul(bv));
                    }
                }
                acc.iter_mut().for_each(|o| *o &= mask);
            }
        } else {
            let mut acc = vec![0u128; p];
            for i in 0..n {
                acc.iter_mut().for_each(|a| *a = 0);
                for k in 0..inner {
                    let a = self.data[i * inner + k] as u128;
                    if a == 0 {
                        continue;
                    }
                    for (o, &bv) in acc.iter_mut().zip(&b.data[k * p..(k + 1) * p]) {
                        // products are < 2^124; reducing keeps the sum below 2^125
                        *o = (*o + a * bv as u128) % m.value() as u128;
                    }
                }
                for (o, a) in out[i * p..(i + 1) * p].iter_mut().zip(&acc) {
                    *o = *a as u64;
                }
            }
        }
        Ok(ModMatrix {
            rows: n,
            cols: p,
            data: out,
            modulus: m,
        })
    }

    /// Row-major little-endian 8-byte entries.
    pub fn write_le(&self, out: &mut Vec<u8>) {
        out.reserve(self.data.len() * 8);
        for &x in &self.data {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }

    /// Reads `rows·cols` little-endian entries; entries must already be reduced.
    pub fn read_le(rows: usize, cols: usize, modulus: Modulus, bytes: &[u8]) -> Option<ModMatrix> {
        let len = rows.checked_mul(cols)?;
        if bytes.len() != len.checked_mul(8)? {
            return None;
        }
        let data: Vec<u64> = bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if data.iter().any(|&x| x >= modulus.value()) {
            return None;
        }
        Some(ModMatrix {
            rows,
            cols,
            data,
            modulus,
        })
    }
}
