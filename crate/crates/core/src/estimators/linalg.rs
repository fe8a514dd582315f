//! Dense symmetric kernels for the small normal-equation systems that the
//! regressions produce (a handful of columns, never more than a dozen).

use crate::scalar::Real;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    pub n: usize,
    pub data: Vec<T>,
}

impl<T: Real> SquareMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    /// `A' B` for column sets `a` (p columns) and `b` (q columns) of equal length.
    pub fn cross(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
        a.iter()
            .map(|ai| b.iter().map(|bj| dot(ai, bj)).collect())
            .collect()
    }

    pub fn gram(cols: &[Vec<T>]) -> Self {
        let n = cols.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let v = dot(&cols[i], &cols[j]);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn quad_form(&self, v: &[T]) -> T {
        dot(v, &self.mul_vec(v))
    }

    /// `self * other * self`, with `self` symmetric.
    pub fn sandwich(&self, meat: &Self) -> Self {
        let n = self.n;
        let mut tmp = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                tmp.set(i, j, (0..n).map(|k| self.get(i, k) * meat.get(k, j)).sum());
            }
        }
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, (0..n).map(|k| tmp.get(i, k) * self.get(k, j)).sum());
            }
        }
        out.symmetrize();
        out
    }

    pub fn symmetrize(&mut self) {
        let half = T::lit(0.5);
        for i in 0..self.n {
            for j in 0..i {
                let v = (self.get(i, j) + self.get(j, i)) * half;
                self.set(i, j, v);
                self.set(j, i, v);
            }
        }
    }

    pub fn scale(&mut self, c: T) {
        for v in &mut self.data {
            *v = *v * c;
        }
    }
}

#[inline]
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Cholesky factor of a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    l: SquareMatrix<T>,
}

impl<T: Real> Cholesky<T> {
    /// Factor `a`. A pivot whose squared residual norm falls below
    /// `tol * reference[j]` marks column `j` as linearly dependent on the
    /// earlier ones and is returned as `Err(j)`.
    pub fn new(a: &SquareMatrix<T>, reference: &[T], tol: T) -> Result<Self, usize> {
        let n = a.n;
        let mut l = SquareMatrix::zeros(n);
        for j in 0..n {
            let mut d = a.get(j, j);
            for k in 0..j {
                d = d - l.get(j, k) * l.get(j, k);
            }
            if !(d > tol * reference[j]) || d <= T::zero() {
                return Err(j);
            }
            let djj = d.sqrt();
            l.set(j, j, djj);
            for i in j + 1..n {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s = s - l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, s / djj);
            }
        }
        Ok(Self { l })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.l.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s = s - self.l.get(i, k) * y[k];
            }
            y[i] = s / self.l.get(i, i);
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s = s - self.l.get(k, i) * y[k];
            }
            y[i] = s / self.l.get(i, i);
        }
        y
    }

    pub fn inverse(&self) -> SquareMatrix<T> {
        let n = self.l.n;
        let mut inv = SquareMatrix::zeros(n);
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            for (i, v) in self.solve(&e).into_iter().enumerate() {
                inv.set(i, j, v);
            }
        }
        inv.symmetrize();
        inv
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues<T: Real>(a: &SquareMatrix<T>) -> Vec<T> {
    let n = a.n;
    let mut m = a.clone();
    for _sweep in 0..64 {
        let off: T = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m.get(i, j) * m.get(i, j)).sum();
        let diag: T = (0..n).map(|i| m.get(i, i) * m.get(i, i)).sum();
        if off <= T::epsilon() * T::epsilon() * diag || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq == T::zero() {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, c * akp - s * akq);
                    m.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = m.get(p, k);
                    let aqk = m.get(q, k);
                    m.set(p, k, c * apk - s * aqk);
                    m.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    (0..n).map(|i| m.get(i, i)).collect()
}

/// Ratio of extreme eigenvalues after scaling to unit diagonal; infinite
/// when the matrix is singular.
pub fn scaled_condition_number<T: Real>(a: &SquareMatrix<T>) -> T {
    let n = a.n;
    let mut scaled = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let d = (a.get(i, i) * a.get(j, j)).sqrt();
            scaled.set(i, j, if d > T::zero() { a.get(i, j) / d } else { T::zero() });
        }
    }
    let eig = symmetric_eigenvalues(&scaled);
    let max = eig.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    let min = eig.iter().fold(T::infinity(), |m, &v| m.min(v));
    if min <= T::zero() {
        T::infinity()
    } else {
        max / min
    }
}
