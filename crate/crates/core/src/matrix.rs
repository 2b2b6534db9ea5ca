//! Dense square matrices over exact expressions.

use crate::diffalg::{Int, Rde, Var};
use crate::error::{KernelError, Result};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    entries: Vec<Rde>,
}

impl Matrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Rde) -> Matrix {
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(f(r, c));
            }
        }
        Matrix { n, entries }
    }

    pub fn zero(n: usize) -> Matrix {
        Matrix::from_fn(n, |_, _| Rde::zero())
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix::from_fn(n, |r, c| if r == c { Rde::one() } else { Rde::zero() })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Matrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "square matrix expected");
        Matrix::from_fn(n, |r, c| Rde::int(rows[r][c]))
    }

    pub fn from_rows(rows: Vec<Vec<Rde>>) -> Result<Matrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(KernelError::Invalid("matrix must be square".into()));
        }
        Ok(Matrix { n, entries: rows.into_iter().flatten().collect() })
    }

    /// Matrix of independent symbols produced by `sym(r, c)`.
    pub fn symbolic(n: usize, sym: impl Fn(usize, usize) -> Var) -> Matrix {
        Matrix::from_fn(n, |r, c| Rde::var(sym(r, c)))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &Rde {
        &self.entries[r * self.n + c]
    }

    pub fn rows(&self) -> Vec<Vec<Rde>> {
        self.entries.chunks(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.n, o.n);
        Matrix::from_fn(self.n, |r, c| {
            (0..self.n).fold(Rde::zero(), |acc, k| acc.add(&self.get(r, k).mul(o.get(k, c))))
        })
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        Matrix::from_fn(self.n, |r, c| self.get(r, c).add(o.get(r, c)))
    }

    pub fn scale(&self, s: &Rde) -> Matrix {
        Matrix::from_fn(self.n, |r, c| self.get(r, c).mul(s))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, |r, c| self.get(c, r).clone())
    }

    pub fn mul_vec(&self, v: &[Rde]) -> Vec<Rde> {
        (0..self.n)
            .map(|r| (0..self.n).fold(Rde::zero(), |acc, k| acc.add(&self.get(r, k).mul(&v[k]))))
            .collect()
    }

    /// `uᵀ M v`.
    pub fn bilinear(&self, u: &[Rde], v: &[Rde]) -> Rde {
        let mv = self.mul_vec(v);
        u.iter().zip(&mv).fold(Rde::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
    }

    pub fn trace(&self) -> Rde {
        (0..self.n).fold(Rde::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> Matrix {
        let n = self.n - 1;
        Matrix::from_fn(n, |r, c| {
            let rr = if r >= skip_r { r + 1 } else { r };
            let cc = if c >= skip_c { c + 1 } else { c };
            self.get(rr, cc).clone()
        })
    }

    /// Laplace expansion along the first row.
    pub fn det(&self) -> Rde {
        match self.n {
            0 => Rde::one(),
            1 => self.get(0, 0).clone(),
            2 => self.get(0, 0).mul(self.get(1, 1)).sub(&self.get(0, 1).mul(self.get(1, 0))),
            _ => (0..self.n).fold(Rde::zero(), |acc, c| {
                let term = self.get(0, c).mul(&self.minor(0, c).det());
                if c % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                }
            }),
        }
    }

    /// Signed cofactor of entry `(r, c)`.
    pub fn cofactor(&self, r: usize, c: usize) -> Rde {
        let m = self.minor(r, c).det();
        if (r + c) % 2 == 0 {
            m
        } else {
            m.neg()
        }
    }

    /// Transposed cofactor matrix.
    pub fn adjugate(&self) -> Matrix {
        Matrix::from_fn(self.n, |r, c| self.cofactor(c, r))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let d = self.det();
        if d.is_zero() {
            return Err(KernelError::Degenerate("singular matrix".into()));
        }
        let inv = d.inv()?;
        Ok(self.adjugate().scale(&inv))
    }

    /// Sum of the principal 2×2 minors.
    pub fn principal_minor_sum(&self) -> Rde {
        let mut acc = Rde::zero();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let m = self.get(i, i).mul(self.get(j, j)).sub(&self.get(i, j).mul(self.get(j, i)));
                acc = acc.add(&m);
            }
        }
        acc
    }

    /// Entries as exact integers, when they are.
    pub fn to_ints(&self) -> Option<Vec<Vec<Int>>> {
        self.rows()
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| match x.constant_value() {
                        Some((p, q)) if q.is_one() => Some(p),
                        _ => None,
                    })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
