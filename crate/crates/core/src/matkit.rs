//! Small dense complex matrices.
//!
//! Everything here targets dimensions up to a few dozen columns: generator
//! images are 1×1 to 4×4, the largest systems are the stacked Sylvester and
//! Jacobian matrices of the solver. Decompositions are one-sided Jacobi (SVD)
//! and closed form (2×2 eigen/Jordan).

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Default relative tolerance for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;
/// Default relative tolerance for coinciding eigenvalues.
pub const DEFAULT_EIG_TOL: f64 = 1e-8;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Panics if rows have different lengths.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        CMat {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    /// 2×2 matrix from entries in row-major order.
    pub fn m2(a: C64, b: C64, c: C64, d: C64) -> Self {
        CMat {
            rows: 2,
            cols: 2,
            data: vec![a, b, c, d],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        CMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries, i.e. `vec` of the matrix.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.cols.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> CMat {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: C64, other: &CMat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> C64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = ONE;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
                .unwrap();
            if a[(p, k)] == ZERO {
                return ZERO;
            }
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            det *= a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / a[(k, k)];
                for j in k..n {
                    let t = a[(k, j)];
                    a[(i, j)] -= f * t;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Inverse by Gauss-Jordan elimination; `None` for an exactly singular pivot.
    pub fn inverse(&self) -> Option<CMat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = CMat::identity(n);
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))?;
            if a[(p, k)] == ZERO {
                return None;
            }
            a.swap_rows(p, k);
            inv.swap_rows(p, k);
            let piv = a[(k, k)];
            for j in 0..n {
                a[(k, j)] /= piv;
                inv[(k, j)] /= piv;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a[(i, k)];
                if f == ZERO {
                    continue;
                }
                for j in 0..n {
                    let (ak, ik) = (a[(k, j)], inv[(k, j)]);
                    a[(i, j)] -= f * ak;
                    inv[(i, j)] -= f * ik;
                }
            }
        }
        Some(inv)
    }

    /// `q · self · q⁻¹`; `None` when `q` is singular.
    pub fn conjugate_by(&self, q: &CMat) -> Option<CMat> {
        let qi = q.inverse()?;
        Some(&(q * self) * &qi)
    }

    /// True when the matrix is `λ·I` within `tol·(1+‖self‖)`.
    pub fn is_scalar(&self, tol: f64) -> bool {
        let n = self.rows;
        let lam = self.trace() / n as f64;
        let mut d = self.clone();
        d.axpy(-lam, &CMat::identity(n));
        d.max_abs() <= tol * (1.0 + self.max_abs())
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        let mut out = self.clone();
        out.axpy(ONE, rhs);
        out
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        let mut out = self.clone();
        out.axpy(-ONE, rhs);
        out
    }
}

/// Thin SVD data from one-sided Jacobi: `A·V = B` with the columns of `B`
/// mutually orthogonal. Singular values are the column norms of `B`, sorted
/// in decreasing order together with `V` and `B`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    /// Unitary `cols × cols`.
    pub v: CMat,
    /// `rows × cols`, orthogonal columns.
    pub b: CMat,
}

fn dot_h(m: &CMat, p: usize, q: usize) -> C64 {
    (0..m.rows).map(|i| m[(i, p)].conj() * m[(i, q)]).sum()
}

fn col_norm_sqr(m: &CMat, p: usize) -> f64 {
    (0..m.rows).map(|i| m[(i, p)].norm_sqr()).sum()
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(a: &CMat) -> Svd {
    let n = a.cols;
    let mut b = a.clone();
    let mut v = CMat::identity(n);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = col_norm_sqr(&b, p);
                let beta = col_norm_sqr(&b, q);
                let gamma = dot_h(&b, p, q);
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // rotate column q by the phase of gamma so the pair is real
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for m in [&mut b, &mut v] {
                    for i in 0..m.rows {
                        let xp = m[(i, p)];
                        let xq = m[(i, q)] * phase.conj();
                        m[(i, p)] = xp * c - xq * s;
                        m[(i, q)] = xp * s + xq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|p| col_norm_sqr(&b, p).sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));
    let mut bs = CMat::zeros(b.rows, n);
    let mut vs = CMat::zeros(n, n);
    for (k, &j) in order.iter().enumerate() {
        for i in 0..b.rows {
            bs[(i, k)] = b[(i, j)];
        }
        for i in 0..n {
            vs[(i, k)] = v[(i, j)];
        }
    }
    Svd {
        singular_values: order.iter().map(|&j| norms[j]).collect(),
        v: vs,
        b: bs,
    }
}

fn numerical_rank(sv: &[f64], tol: f64) -> usize {
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// Numerical rank: singular values above `tol` times the largest one.
pub fn rank(m: &CMat, tol: f64) -> usize {
    numerical_rank(&svd(m).singular_values, tol)
}

/// Orthonormal basis of the numerical kernel, `cols − rank` vectors.
pub fn nullspace(m: &CMat, tol: f64) -> Vec<Vec<C64>> {
    let d = svd(m);
    let r = numerical_rank(&d.singular_values, tol);
    (r..m.cols).map(|k| d.v.column(k)).collect()
}

/// Minimum-norm least-squares solution of `a·x ≈ rhs`, discarding singular
/// values below `tol` times the largest.
pub fn lstsq(a: &CMat, rhs: &[C64], tol: f64) -> Vec<C64> {
    assert_eq!(a.rows, rhs.len());
    let d = svd(a);
    let r = numerical_rank(&d.singular_values, tol);
    let mut x = vec![ZERO; a.cols];
    for k in 0..r {
        let s2 = d.singular_values[k] * d.singular_values[k];
        let coef: C64 = (0..a.rows).map(|i| d.b[(i, k)].conj() * rhs[i]).sum::<C64>() / s2;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += d.v[(i, k)] * coef;
        }
    }
    x
}

/// Two-block classification of a 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JordanKind {
    Diagonal,
    OneBlock,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jordan2 {
    pub form: CMat,
    pub kind: JordanKind,
    /// `transform⁻¹ · m · transform = form`.
    pub transform: CMat,
}

/// Kernel direction of a 2×2 matrix taken from its larger row.
fn kernel_dir(a: C64, b: C64, c: C64, d: C64) -> Option<[C64; 2]> {
    let n1 = a.norm_sqr() + b.norm_sqr();
    let n2 = c.norm_sqr() + d.norm_sqr();
    let (p, q) = if n1 >= n2 { (a, b) } else { (c, d) };
    if n1.max(n2) == 0.0 {
        return None;
    }
    let v = [-q, p];
    let s = if v[0].norm() >= v[1].norm() { v[0] } else { v[1] };
    Some([v[0] / s, v[1] / s])
}

/// Eigenvalues of a 2×2 matrix as `(mean, half-gap)`: `λ± = mean ± gap`.
fn eig2_parts(m: &CMat) -> (C64, C64, [C64; 4]) {
    let mean = m.trace() / 2.0;
    let a = m[(0, 0)] - mean;
    let b = m[(0, 1)];
    let c = m[(1, 0)];
    // traceless part [[a, b], [c, -a]] has eigenvalues ±sqrt(a² + bc)
    let s = (a * a + b * c).sqrt();
    (mean, s, [a, b, c, -a])
}

/// Jordan normal form of a 2×2 matrix.
///
/// Eigenvalues closer than `eig_tol·(1+‖m‖)` count as equal; a non-scalar
/// matrix with equal eigenvalues is `OneBlock`, a scalar one returns the
/// identity transform.
pub fn jordan_2x2(m: &CMat, eig_tol: f64) -> Jordan2 {
    assert!(m.rows == 2 && m.cols == 2, "jordan_2x2 needs a 2×2 matrix");
    let scale = 1.0 + m.norm();
    let (mean, s, [a, b, c, _]) = eig2_parts(m);
    if m.is_scalar(eig_tol) {
        return Jordan2 {
            form: m.clone(),
            kind: JordanKind::Diagonal,
            transform: CMat::identity(2),
        };
    }
    if 2.0 * s.norm() <= eig_tol * scale {
        // N = m − mean·I is (nearly) nilpotent; columns [N·w, w]
        let (w, v) = if b.norm() >= c.norm() {
            ([ZERO, ONE], [b, -a])
        } else {
            ([ONE, ZERO], [a, c])
        };
        let transform = CMat::m2(v[0], w[0], v[1], w[1]);
        return Jordan2 {
            form: CMat::m2(mean, ONE, ZERO, mean),
            kind: JordanKind::OneBlock,
            transform,
        };
    }
    let lam = [mean - s, mean + s];
    let mut cols = [[ZERO; 2]; 2];
    for (k, l) in lam.iter().enumerate() {
        let d = l - mean;
        // (N − d·I) v = 0 with N = [[a, b], [c, −a]]
        cols[k] = kernel_dir(a - d, b, c, -a - d).unwrap_or(if k == 0 {
            [ONE, ZERO]
        } else {
            [ZERO, ONE]
        });
    }
    Jordan2 {
        form: CMat::diag(&lam),
        kind: JordanKind::Diagonal,
        transform: CMat::m2(cols[0][0], cols[1][0], cols[0][1], cols[1][1]),
    }
}

/// Eigenvalues and unit eigenvectors of a 2×2 matrix. A defective matrix
/// yields one vector; a scalar matrix yields the two coordinate vectors.
pub fn eigvecs_2x2(m: &CMat, eig_tol: f64) -> Vec<(C64, Vec<C64>)> {
    let j = jordan_2x2(m, eig_tol);
    let unit = |v: Vec<C64>| {
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / n).collect::<Vec<_>>()
    };
    match j.kind {
        JordanKind::Diagonal => (0..2)
            .map(|k| (j.form[(k, k)], unit(j.transform.column(k))))
            .collect(),
        JordanKind::OneBlock => vec![(j.form[(0, 0)], unit(j.transform.column(0)))],
    }
}
