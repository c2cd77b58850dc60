//! Dense vectors and matrices over [`Scalar`].

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Vector = Vec<Scalar>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[Scalar]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn scale(c: &Scalar, a: &[Scalar]) -> Vector {
    a.iter().map(|x| c * x).collect()
}

/// Multiply by a sign `±1`.
pub fn signed(s: i8, a: Vector) -> Vector {
    if s >= 0 {
        a
    } else {
        a.into_iter().map(|x| -x).collect()
    }
}

pub fn add_assign(acc: &mut [Scalar], b: &[Scalar]) {
    for (x, y) in acc.iter_mut().zip(b) {
        if !y.is_zero() {
            *x += y;
        }
    }
}

/// Accumulates a signed sum of vectors.
pub struct Combination {
    acc: Vector,
}

impl Combination {
    pub fn new(n: usize) -> Self {
        Combination { acc: zero_vector(n) }
    }

    pub fn plus(mut self, s: i8, v: &[Scalar]) -> Self {
        for (x, y) in self.acc.iter_mut().zip(v) {
            if y.is_zero() {
                continue;
            }
            if s >= 0 {
                *x += y;
            } else {
                *x += &-y;
            }
        }
        self
    }

    pub fn add(self, v: &[Scalar]) -> Self {
        self.plus(1, v)
    }

    pub fn sub(self, v: &[Scalar]) -> Self {
        self.plus(-1, v)
    }

    pub fn finish(self) -> Vector {
        self.acc
    }
}

/// Row-major matrix; column `i` holds the image of basis vector `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose column `i` is `images[i]`.
    pub fn from_columns(rows: usize, images: &[Vector]) -> Self {
        let mut m = Matrix::zero(rows, images.len());
        for (i, col) in images.iter().enumerate() {
            for (j, s) in col.iter().enumerate() {
                m.set(j, i, s.clone());
            }
        }
        m
    }

    pub fn diagonal(entries: Vec<Scalar>) -> Self {
        let n = entries.len();
        let mut m = Matrix::zero(n, n);
        for (i, s) in entries.into_iter().enumerate() {
            m.set(i, i, s);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, s: Scalar) {
        self.data[r * self.cols + c] = s;
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        self.data.chunks(self.cols.max(1)).map(<[Scalar]>::to_vec).take(self.rows).collect()
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let s = self.get(r, c);
                    if r == c {
                        s.is_one()
                    } else {
                        s.is_zero()
                    }
                })
            })
    }

    pub fn apply(&self, x: &[Scalar]) -> Vector {
        debug_assert_eq!(x.len(), self.cols);
        let mut out = zero_vector(self.rows);
        for (c, xc) in x.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let m = self.get(r, c);
                if !m.is_zero() {
                    *o += &(m * xc);
                }
            }
        }
        out
    }

    pub fn try_apply(&self, x: &[Scalar]) -> Result<Vector> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} applied to a {}x{} matrix",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        Ok(self.apply(x))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let images: Vec<Vector> = (0..other.cols)
            .map(|c| self.apply(&other.column(c)))
            .collect();
        Ok(Matrix::from_columns(self.rows, &images))
    }

    pub fn pow(&self, k: u64) -> Matrix {
        let mut out = Matrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                out = out.compose(&base).expect("square");
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base).expect("square");
            }
        }
        out
    }

    pub fn scaled(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zero(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                m.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    /// Kronecker product with row-major pairing of indices.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zero(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.get(r2, c2);
                        if !b.is_zero() {
                            m.set(r1 * other.rows + r2, c1 * other.cols + c2, a * b);
                        }
                    }
                }
            }
        }
        m
    }

    /// Keep the listed rows and columns.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zero(rows.len(), cols.len());
        for (ri, r) in rows.iter().enumerate() {
            for (ci, c) in cols.iter().enumerate() {
                m.set(ri, ci, self.get(*r, *c).clone());
            }
        }
        m
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.data
            .iter()
            .enumerate()
            .map(move |(k, s)| (k / self.cols.max(1), k % self.cols.max(1), s))
    }
}
