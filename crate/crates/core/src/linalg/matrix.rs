//! Dense rational matrices.
//!
//! Vectors are columns, matrices act on the left, and `f.compose(&g)` is
//! `f ∘ g` (apply `g` first).

use std::fmt;

use serde::{Deserialize, Serialize};

use super::rational::{q, Rational};
use crate::error::{Error, Result};

pub type Vector = Vec<Rational>;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl TryFrom<MatrixRepr> for Matrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.entries.len() != r.rows * r.cols {
            return Err(Error::Dimension(format!(
                "matrix {}x{} given {} entries",
                r.rows,
                r.cols,
                r.entries.len()
            )));
        }
        Ok(Matrix { rows: r.rows, cols: r.cols, data: r.entries })
    }
}

impl From<Matrix> for MatrixRepr {
    fn from(m: Matrix) -> Self {
        MatrixRepr { rows: m.rows, cols: m.cols, entries: m.data }
    }
}

/// A partial section pinned on a subspace: `images[:, j]` must be an
/// `f`-preimage of `domain[:, j]`.
#[derive(Clone, Debug)]
pub struct Pinning {
    pub domain: Matrix,
    pub images: Matrix,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds from row-major data; panics if the length is wrong.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count");
        Matrix { rows, cols, data }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    /// A `rows x cols` matrix whose entries are produced by `f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    /// The `rows x rows` scalar matrix `c * I`.
    pub fn scalar(n: usize, c: Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// `self ∘ g`, checking inner dimensions.
    pub fn compose(&self, g: &Matrix) -> Result<Matrix> {
        if self.cols != g.rows {
            return Err(Error::Dimension(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, g.rows, g.cols
            )));
        }
        Ok(self.mul_unchecked(g))
    }

    /// `self ∘ g`; panics on a dimension mismatch.
    pub fn mul(&self, g: &Matrix) -> Matrix {
        assert_eq!(self.cols, g.rows, "dimension mismatch in product");
        self.mul_unchecked(g)
    }

    fn mul_unchecked(&self, g: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows, g.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..g.cols {
                    let b = g.get(k, j);
                    if !b.is_zero() {
                        let idx = i * g.cols + j;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rational]) -> Vector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in apply");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.shape(), o.shape(), "dimension mismatch in sum");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.shape(), o.shape(), "dimension mismatch in difference");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// `[self | o]`.
    pub fn hstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.rows, o.rows, "row mismatch in hstack");
        Matrix::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    /// `[self ; o]`.
    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
        a.hstack(&Matrix::zeros(a.rows, b.cols)).vstack(&Matrix::zeros(b.rows, a.cols).hstack(b))
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        Matrix::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Reduced row echelon form and pivot columns (leftmost pivot, earliest
    /// row).
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).recip().expect("nonzero pivot");
            for j in 0..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    for j in 0..m.cols {
                        let v = m.get(r, j) - &(&factor * m.get(row, j));
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of `ker self` as the columns of the returned matrix, in
    /// reduced column-echelon form (so the basis depends only on the
    /// kernel). The result has `cols - rank` columns.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let raw = Matrix::from_fn(self.cols, free.len(), |i, k| {
            let j = free[k];
            if i == j {
                return Rational::one();
            }
            match pivots.iter().position(|&p| p == i) {
                Some(prow) => -r.get(prow, j),
                None => Rational::zero(),
            }
        });
        column_echelon(&raw)
    }

    /// Some `x` with `self * x = b` (free variables set to zero), or `None`.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::NotInvertible(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Matrix::identity(n)).rref();
        if pivots.iter().filter(|&&p| p < n).count() < n {
            return Err(Error::NotInvertible("singular matrix".into()));
        }
        Ok(r.block(0, n, n, 2 * n))
    }

    /// A right inverse `g` with `self ∘ g = id`, built column by column from
    /// pivot solutions, agreeing with `pinned` on its domain when given.
    pub fn right_inverse_on_image(&self, pinned: Option<&Pinning>) -> Result<Matrix> {
        if self.rank() != self.rows {
            return Err(Error::NotSurjective(format!(
                "{}x{} map has rank {}",
                self.rows,
                self.cols,
                self.rank()
            )));
        }
        let pivot_solution = |b: &[Rational]| -> Vector {
            self.solve(b).expect("shape checked").expect("surjective map has a preimage")
        };
        let Some(pin) = pinned else {
            let cols: Vec<Vector> = (0..self.rows).map(|j| pivot_solution(&unit_vector(self.rows, j))).collect();
            return Ok(Matrix::from_columns(self.cols, &cols));
        };
        if pin.domain.rows != self.rows
            || pin.images.rows != self.cols
            || pin.domain.cols != pin.images.cols
        {
            return Err(Error::Pinning("pinned section has the wrong shape".into()));
        }
        if pin.domain.rank() != pin.domain.cols {
            return Err(Error::Pinning("pinned domain vectors are dependent".into()));
        }
        if self.mul(&pin.images) != pin.domain {
            return Err(Error::Pinning("pinned images are not preimages".into()));
        }
        // complete the pinned domain to a basis with standard vectors, leftmost first
        let mut basis = pin.domain.clone();
        let mut images = pin.images.clone();
        for j in 0..self.rows {
            if basis.cols == self.rows {
                break;
            }
            let e = unit_vector(self.rows, j);
            let trial = basis.hstack(&Matrix::from_columns(self.rows, &[e.clone()]));
            if trial.rank() == trial.cols {
                basis = trial;
                images = images.hstack(&Matrix::from_columns(self.cols, &[pivot_solution(&e)]));
            }
        }
        Ok(images.mul(&basis.inverse()?))
    }

    /// A left inverse of a matrix with independent columns.
    pub fn left_inverse(&self) -> Result<Matrix> {
        let t = self.transpose();
        Ok(t.mul(self).inverse()?.mul(&t))
    }
}

/// Reduced column-echelon form of a matrix with independent columns.
fn column_echelon(m: &Matrix) -> Matrix {
    if m.cols == 0 {
        return m.clone();
    }
    let (r, pivots) = m.transpose().rref();
    r.block(0, pivots.len(), 0, r.cols).transpose()
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

pub fn zero_vector(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn vadd(a: &[Rational], b: &[Rational]) -> Vector {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vsub(a: &[Rational], b: &[Rational]) -> Vector {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vscale(a: &[Rational], c: &Rational) -> Vector {
    a.iter().map(|x| x * c).collect()
}

pub fn is_zero_vector(a: &[Rational]) -> bool {
    a.iter().all(Rational::is_zero)
}

pub fn concat(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().chain(b).cloned().collect()
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        if self.rows == 0 {
            write!(f, "0x{}", self.cols)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} {}", self.rows, self.cols, self)
    }
}

pub fn fmt_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::qr;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_ints(rows)
    }

    #[test]
    fn compose_examples() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(Matrix::identity(3).compose(&a).unwrap(), a);
        assert_eq!(Matrix::zeros(2, 3).compose(&a).unwrap(), Matrix::zeros(2, 3));
        // hand multiplication
        let f = m(&[&[1, 1], &[0, 1]]);
        let g = m(&[&[1, 0], &[1, 1]]);
        assert_eq!(f.compose(&g).unwrap(), m(&[&[2, 1], &[1, 1]]));
        assert!(matches!(f.compose(&a), Err(Error::Dimension(_))));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::zeros(2, 2).kernel_basis(), Matrix::identity(2));
        assert_eq!(Matrix::identity(3).kernel_basis().cols(), 0);
        // [[1,1]] x = 0 by row reduction: x = t(1,-1)
        assert_eq!(m(&[&[1, 1]]).kernel_basis(), m(&[&[1], &[-1]]));
    }

    #[test]
    fn kernel_depends_only_on_subspace() {
        let a = m(&[&[1, 2, 3, 4]]);
        let b = m(&[&[2, 4, 6, 8], &[-1, -2, -3, -4]]);
        assert_eq!(a.kernel_basis(), b.kernel_basis());
    }

    #[test]
    fn right_inverse_examples() {
        assert_eq!(Matrix::identity(3).right_inverse_on_image(None).unwrap(), Matrix::identity(3));
        // leftmost pivot: [[1,0]] has pivot column 0
        assert_eq!(m(&[&[1, 0]]).right_inverse_on_image(None).unwrap(), m(&[&[1], &[0]]));
        // projection Q^2 -> Q^1 pinned so that 1 maps to (1,5)
        let f = m(&[&[1, 0]]);
        let pin = Pinning { domain: m(&[&[1]]), images: m(&[&[1], &[5]]) };
        let g = f.right_inverse_on_image(Some(&pin)).unwrap();
        assert_eq!(g, m(&[&[1], &[5]]));
        assert!(f.compose(&g).unwrap().is_identity());
        let bad = Pinning { domain: m(&[&[1]]), images: m(&[&[2], &[0]]) };
        assert!(matches!(f.right_inverse_on_image(Some(&bad)), Err(Error::Pinning(_))));
        assert!(matches!(
            m(&[&[1, 1], &[2, 2]]).right_inverse_on_image(None),
            Err(Error::NotSurjective(_))
        ));
    }

    #[test]
    fn partially_pinned_section() {
        let f = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let pin = Pinning { domain: m(&[&[1], &[1]]), images: m(&[&[0], &[0], &[1]]) };
        let g = f.right_inverse_on_image(Some(&pin)).unwrap();
        assert!(f.mul(&g).is_identity());
        assert_eq!(g.apply(&[q(1), q(1)]), vec![q(0), q(0), q(1)]);
    }

    #[test]
    fn solve_examples() {
        let b = vec![q(3), qr(1, 2)];
        assert_eq!(Matrix::identity(2).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(Matrix::zeros(2, 2).solve(&[q(0), q(0)]).unwrap(), Some(vec![q(0), q(0)]));
        assert_eq!(Matrix::zeros(2, 2).solve(&[q(1), q(0)]).unwrap(), None);
        assert_eq!(m(&[&[2]]).solve(&[q(3)]).unwrap(), Some(vec![qr(3, 2)]));
        assert!(matches!(m(&[&[2]]).solve(&[q(3), q(1)]), Err(Error::Dimension(_))));
    }

    #[test]
    fn inverse_and_left_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(matches!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::NotInvertible(_))));
        assert_eq!(Matrix::zeros(0, 0).inverse().unwrap(), Matrix::zeros(0, 0));
        let b = m(&[&[1, 0], &[1, 1], &[0, 3]]);
        assert!(b.left_inverse().unwrap().mul(&b).is_identity());
    }

    #[test]
    fn serde_shape() {
        let a = Matrix::from_rows(vec![vec![qr(1, 2), q(0)]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"rows":1,"cols":2,"entries":["1/2","0"]}"#);
        assert_eq!(serde_json::from_str::<Matrix>(&s).unwrap(), a);
        assert!(serde_json::from_str::<Matrix>(r#"{"rows":2,"cols":2,"entries":["1"]}"#).is_err());
    }
}
