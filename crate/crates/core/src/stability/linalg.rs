//! Small dense linear algebra: row-major square matrices, LU solves and a
//! real nonsymmetric eigenvalue solver (balancing, Hessenberg reduction,
//! Francis double-shift QR).

use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> SquareMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Build from row-major data; panics if `data.len() != n * n`.
    pub fn from_row_major(n: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), n * n, "expected {} entries", n * n);
        Self { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Solve `A x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut x = b.to_vec();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].abs().partial_cmp(&a[j * n + col].abs()).unwrap())?;
            if a[pivot * n + col] == T::zero() || !a[pivot * n + col].is_finite() {
                return None;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                x.swap(pivot, col);
            }
            let d = a[col * n + col];
            for r in col + 1..n {
                let factor = a[r * n + col] / d;
                if factor == T::zero() {
                    continue;
                }
                for k in col..n {
                    a[r * n + k] = a[r * n + k] - factor * a[col * n + k];
                }
                x[r] = x[r] - factor * x[col];
            }
        }
        for r in (0..n).rev() {
            let mut acc = x[r];
            for k in r + 1..n {
                acc = acc - a[r * n + k] * x[k];
            }
            x[r] = acc / a[r * n + r];
        }
        x.iter().all(|v| v.is_finite()).then_some(x)
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

const MAX_QR_ITERATIONS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues of a real square matrix.
///
/// Complex eigenvalues come in adjacent conjugate pairs, positive imaginary
/// part first. Order is otherwise the deflation order of the QR iteration.
pub fn eigenvalues<T: Real>(matrix: &SquareMatrix<T>) -> Result<Vec<Complex<T>>> {
    if !matrix.is_finite() {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let n = matrix.size();
    let mut a = matrix.clone();
    balance(&mut a);
    reduce_to_hessenberg(&mut a);
    hessenberg_qr(a, n)
}

/// Diagonal similarity scaling by powers of two so that rows and columns have
/// comparable norms.
fn balance<T: Real>(a: &mut SquareMatrix<T>) {
    let n = a.size();
    let radix = lit::<T>(2.0);
    let sqrdx = radix * radix;
    let gamma = lit::<T>(0.95);
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = T::zero();
            let mut c = T::zero();
            for j in 0..n {
                if j != i {
                    c = c + a[(j, i)].abs();
                    r = r + a[(i, j)].abs();
                }
            }
            if c != T::zero() && r != T::zero() {
                let mut g = r / radix;
                let mut f = T::one();
                let s = c + r;
                while c < g {
                    f = f * radix;
                    c = c * sqrdx;
                }
                g = r * radix;
                while c > g {
                    f = f / radix;
                    c = c / sqrdx;
                }
                if (c + r) / f < gamma * s {
                    done = false;
                    let g = T::one() / f;
                    for j in 0..n {
                        a[(i, j)] = a[(i, j)] * g;
                    }
                    for j in 0..n {
                        a[(j, i)] = a[(j, i)] * f;
                    }
                }
            }
        }
    }
}

/// Similarity reduction to upper Hessenberg form by stabilised elimination.
fn reduce_to_hessenberg<T: Real>(a: &mut SquareMatrix<T>) {
    let n = a.size();
    if n < 3 {
        return;
    }
    for m in 1..n - 1 {
        let mut x = T::zero();
        let mut i = m;
        for j in m..n {
            if a[(j, m - 1)].abs() > x.abs() {
                x = a[(j, m - 1)];
                i = j;
            }
        }
        if i != m {
            for j in m - 1..n {
                let tmp = a[(i, j)];
                a[(i, j)] = a[(m, j)];
                a[(m, j)] = tmp;
            }
            for j in 0..n {
                let tmp = a[(j, i)];
                a[(j, i)] = a[(j, m)];
                a[(j, m)] = tmp;
            }
        }
        if x != T::zero() {
            for i in m + 1..n {
                let mut y = a[(i, m - 1)];
                if y != T::zero() {
                    y = y / x;
                    a[(i, m - 1)] = y;
                    for j in m..n {
                        a[(i, j)] = a[(i, j)] - y * a[(m, j)];
                    }
                    for j in 0..n {
                        a[(j, m)] = a[(j, m)] + y * a[(j, i)];
                    }
                }
            }
        }
    }
    for i in 2..n {
        for j in 0..i - 1 {
            a[(i, j)] = T::zero();
        }
    }
}

fn sign<T: Real>(a: T, b: T) -> T {
    if b >= T::zero() {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (eigenvalues only).
fn hessenberg_qr<T: Real>(mut a: SquareMatrix<T>, n: usize) -> Result<Vec<Complex<T>>> {
    let mut wr = vec![T::zero(); n];
    let mut wi = vec![T::zero(); n];
    if n == 0 {
        return Ok(Vec::new());
    }
    let eps = T::epsilon();
    let half = lit::<T>(0.5);

    let mut anorm = T::zero();
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm = anorm + a[(i, j)].abs();
        }
    }

    let mut nn = n as isize - 1;
    let mut t = T::zero();
    let (mut p, mut q, mut r): (T, T, T);
    let mut total_iterations = 0usize;
    while nn >= 0 {
        let mut its = 0;
        loop {
            // Look for a single small subdiagonal element.
            let mut l = nn;
            while l >= 1 {
                let lu = l as usize;
                let mut s = a[(lu - 1, lu - 1)].abs() + a[(lu, lu)].abs();
                if s == T::zero() {
                    s = anorm;
                }
                if a[(lu, lu - 1)].abs() <= eps * s {
                    a[(lu, lu - 1)] = T::zero();
                    break;
                }
                l -= 1;
            }
            let nu = nn as usize;
            let x = a[(nu, nu)];
            if l == nn {
                wr[nu] = x + t;
                wi[nu] = T::zero();
                nn -= 1;
                break;
            }
            let y = a[(nu - 1, nu - 1)];
            let w = a[(nu, nu - 1)] * a[(nu - 1, nu)];
            if l == nn - 1 {
                p = half * (y - x);
                q = p * p + w;
                let z = q.abs().sqrt();
                let xt = x + t;
                if q >= T::zero() {
                    let z = p + sign(z, p);
                    wr[nu - 1] = xt + z;
                    wr[nu] = if z != T::zero() { xt - w / z } else { xt + z };
                    wi[nu - 1] = T::zero();
                    wi[nu] = T::zero();
                } else {
                    wr[nu - 1] = xt + p;
                    wr[nu] = xt + p;
                    wi[nu - 1] = z;
                    wi[nu] = -z;
                }
                nn -= 2;
                break;
            }
            if its == MAX_QR_ITERATIONS_PER_EIGENVALUE {
                return Err(Error::NoConvergence {
                    iterations: total_iterations,
                    residual: a[(nu, nu - 1)].abs().to_f64().unwrap_or(f64::NAN),
                });
            }
            let (mut x, mut y, mut w) = (x, y, w);
            if its == 10 || its == 20 {
                // Exceptional shift.
                t = t + x;
                for i in 0..=nu {
                    a[(i, i)] = a[(i, i)] - x;
                }
                let s = a[(nu, nu - 1)].abs() + a[(nu - 1, nu - 2)].abs();
                x = lit::<T>(0.75) * s;
                y = x;
                w = lit::<T>(-0.4375) * s * s;
            }
            its += 1;
            total_iterations += 1;

            // Find two consecutive small subdiagonal elements.
            let lu = l as usize;
            let mut m = nu - 2;
            loop {
                let z = a[(m, m)];
                let r0 = x - z;
                let s0 = y - z;
                p = (r0 * s0 - w) / a[(m + 1, m)] + a[(m, m + 1)];
                q = a[(m + 1, m + 1)] - z - r0 - s0;
                r = a[(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p = p / s;
                q = q / s;
                r = r / s;
                if m == lu {
                    break;
                }
                let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[(i, i - 2)] = T::zero();
                if i != m + 2 {
                    a[(i, i - 3)] = T::zero();
                }
            }
            // Double QR step on rows l..nn and columns m..nn.
            let mut k = m;
            while k < nu {
                if k != m {
                    p = a[(k, k - 1)];
                    q = a[(k + 1, k - 1)];
                    r = if k + 1 != nu { a[(k + 2, k - 1)] } else { T::zero() };
                    x = p.abs() + q.abs() + r.abs();
                    if x != T::zero() {
                        p = p / x;
                        q = q / x;
                        r = r / x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != T::zero() {
                    if k == m {
                        if l as usize != m {
                            a[(k, k - 1)] = -a[(k, k - 1)];
                        }
                    } else {
                        a[(k, k - 1)] = -s * x;
                    }
                    p = p + s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q = q / p;
                    r = r / p;
                    for j in k..=nu {
                        let mut pp = a[(k, j)] + q * a[(k + 1, j)];
                        if k + 1 != nu {
                            pp = pp + r * a[(k + 2, j)];
                            a[(k + 2, j)] = a[(k + 2, j)] - pp * z;
                        }
                        a[(k + 1, j)] = a[(k + 1, j)] - pp * y;
                        a[(k, j)] = a[(k, j)] - pp * x;
                    }
                    let mmin = if nu < k + 3 { nu } else { k + 3 };
                    for i in lu..=mmin {
                        let mut pp = x * a[(i, k)] + y * a[(i, k + 1)];
                        if k + 1 != nu {
                            pp = pp + z * a[(i, k + 2)];
                            a[(i, k + 2)] = a[(i, k + 2)] - pp * r;
                        }
                        a[(i, k + 1)] = a[(i, k + 1)] - pp * q;
                        a[(i, k)] = a[(i, k)] - pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(wr.into_iter().zip(wi).map(|(re, im)| Complex::new(re, im)).collect())
}
