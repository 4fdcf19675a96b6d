use std::fmt;
use std::ops::{Add, Mul, Sub};

use super::{Cyclotomic, Rational};

/// Dense square matrix over cyclotomic numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloMatrix {
    size: usize,
    entries: Vec<Cyclotomic>,
}

impl CycloMatrix {
    pub fn zero(size: usize) -> Self {
        CycloMatrix { size, entries: vec![Cyclotomic::zero(); size * size] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zero(size);
        for i in 0..size {
            m.entries[i * size + i] = Cyclotomic::one();
        }
        m
    }

    /// Builds from rows; panics if the rows are not square.
    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Self {
        let size = rows.len();
        assert!(rows.iter().all(|r| r.len() == size), "matrix must be square");
        CycloMatrix { size, entries: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(values: Vec<Cyclotomic>) -> Self {
        let size = values.len();
        let mut m = Self::zero(size);
        for (i, v) in values.into_iter().enumerate() {
            m.entries[i * size + i] = v;
        }
        m
    }

    pub fn block_diagonal(blocks: &[CycloMatrix]) -> Self {
        let size = blocks.iter().map(|b| b.size).sum();
        let mut m = Self::zero(size);
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.size {
                for j in 0..b.size {
                    m.entries[(offset + i) * size + offset + j] = b.get(i, j).clone();
                }
            }
            offset += b.size;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> &Cyclotomic {
        &self.entries[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Cyclotomic) {
        self.entries[row * self.size + col] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Cyclotomic]> {
        self.entries.chunks(self.size.max(1)).take(self.size)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.size)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Cyclotomic::is_zero)
    }

    pub fn trace(&self) -> Cyclotomic {
        (0..self.size).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        CycloMatrix { size: self.size, entries: self.entries.iter().map(|x| x * c).collect() }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        CycloMatrix { size: self.size, entries: self.entries.iter().map(|x| x.scale(q)).collect() }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.size);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Row echelon form by Gaussian elimination; returns (echelon, rank, determinant).
    fn eliminate(&self) -> (Vec<Vec<Cyclotomic>>, usize, Cyclotomic) {
        let n = self.size;
        let mut a: Vec<Vec<Cyclotomic>> = self.rows().map(|r| r.to_vec()).collect();
        let mut det = Cyclotomic::one();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..n).find(|&i| !a[i][col].is_zero()) else {
                det = Cyclotomic::zero();
                continue;
            };
            if p != rank {
                a.swap(p, rank);
                det = -det;
            }
            det = &det * &a[rank][col];
            let inv = a[rank][col].inverse().expect("pivot is nonzero");
            for i in rank + 1..n {
                if a[i][col].is_zero() {
                    continue;
                }
                let f = &a[i][col] * &inv;
                for j in col..n {
                    let t = &f * &a[rank][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
            rank += 1;
        }
        (a, rank, det)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().1
    }

    pub fn determinant(&self) -> Cyclotomic {
        if self.size == 0 {
            return Cyclotomic::one();
        }
        self.eliminate().2
    }
}

impl<'a> Mul<&'a CycloMatrix> for &'a CycloMatrix {
    type Output = CycloMatrix;

    fn mul(self, rhs: &CycloMatrix) -> CycloMatrix {
        assert_eq!(self.size, rhs.size, "matrix size mismatch");
        let n = self.size;
        let mut out = CycloMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * n + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a CycloMatrix> for &'a CycloMatrix {
    type Output = CycloMatrix;

    fn add(self, rhs: &CycloMatrix) -> CycloMatrix {
        assert_eq!(self.size, rhs.size, "matrix size mismatch");
        CycloMatrix {
            size: self.size,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CycloMatrix> for &'a CycloMatrix {
    type Output = CycloMatrix;

    fn sub(self, rhs: &CycloMatrix) -> CycloMatrix {
        assert_eq!(self.size, rhs.size, "matrix size mismatch");
        CycloMatrix {
            size: self.size,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

/// One row per line, entries separated by tabs.
impl fmt::Display for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "{}", cells.join("\t"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Cyclotomic {
        Cyclotomic::from_integer(n)
    }

    #[test]
    fn determinant_and_rank() {
        let m = CycloMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]);
        assert_eq!(m.rank(), 1);
        assert!(m.determinant().is_zero());

        let z = Cyclotomic::zeta(3, 1);
        let d = CycloMatrix::diagonal(vec![z.clone(), z.conj()]);
        assert!(d.determinant().is_one());
        assert_eq!(d.rank(), 2);
        assert!(d.pow(3).is_identity());
    }

    #[test]
    fn block_layout() {
        let b = CycloMatrix::block_diagonal(&[CycloMatrix::identity(1), CycloMatrix::from_rows(vec![
            vec![int(0), int(1)],
            vec![int(1), int(0)],
        ])]);
        assert_eq!(b.size(), 3);
        assert_eq!(b.to_string(), "1\t0\t0\n0\t0\t1\n0\t1\t0\n");
        assert_eq!(b.trace(), int(1));
    }

    #[test]
    fn swap_changes_determinant_sign() {
        let m = CycloMatrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        assert_eq!(m.determinant(), int(-1));
    }
}
