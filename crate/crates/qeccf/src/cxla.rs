//! Dense complex matrices for the small operators used throughout the crate.
//!
//! Matrices are row-major `Complex64` buffers. Equality is entrywise max-norm
//! against a [`Tol`]. Hermitian eigendecomposition is delegated to nalgebra.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Tolerances for matrix equality and rank decisions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tol {
    pub eq_tol: f64,
    pub rank_tol: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            eq_tol: 1e-9,
            rank_tol: 1e-8,
        }
    }
}

impl Tol {
    pub fn new(eq_tol: f64, rank_tol: f64) -> Result<Self> {
        let ok = |x: f64| (0.0..1e-3).contains(&x);
        if !ok(eq_tol) || !ok(rank_tol) {
            return Err(Error::Domain(format!(
                "tolerances must lie in [0, 1e-3): eq_tol={eq_tol}, rank_tol={rank_tol}"
            )));
        }
        Ok(Tol { eq_tol, rank_tol })
    }
}

#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

/// Eigenvalues (ascending) with eigenvectors as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl CMat {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(k) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Domain(format!("non-finite entry at position {k}")));
        }
        Ok(CMat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    /// Builds a matrix from real rows. Panics on ragged input.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMat::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    /// Builds a matrix from complex rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMat::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = CMat::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    pub fn from_columns(cols: &[Vec<C64>]) -> Result<Self> {
        let c = cols.len();
        if c == 0 {
            return Err(Error::Dimension("no columns".into()));
        }
        let r = cols[0].len();
        if cols.iter().any(|v| v.len() != r) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        Ok(CMat::from_fn(r, c, |i, j| cols[j][i]))
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

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.cols + j] = z;
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> CMat {
        CMat::from_fn(self.rows, idx.len(), |i, k| self.get(i, idx[k]))
    }

    pub fn hcat(&self, other: &CMat) -> Result<CMat> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "hcat {} vs {} rows",
                self.rows, other.rows
            )));
        }
        Ok(CMat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        }))
    }

    pub fn matmul(&self, b: &CMat) -> Result<CMat> {
        if self.cols != b.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let mut out = vec![ZERO; self.rows * b.cols];
        for i in 0..self.rows {
            let orow = &mut out[i * b.cols..(i + 1) * b.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let brow = &b.data[k * b.cols..(k + 1) * b.cols];
                for (o, &x) in orow.iter_mut().zip(brow) {
                    *o += a * x;
                }
            }
        }
        Ok(CMat {
            rows: self.rows,
            cols: b.cols,
            data: out,
        })
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, z: C64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * z).collect(),
        }
    }

    pub fn add_scaled(&mut self, z: C64, other: &CMat) -> Result<()> {
        self.check_same_shape(other)?;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += z * b;
        }
        Ok(())
    }

    pub fn kron(&self, b: &CMat) -> CMat {
        CMat::from_fn(self.rows * b.rows, self.cols * b.cols, |i, j| {
            self.get(i / b.rows, j / b.cols) * b.get(i % b.rows, j % b.cols)
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise max-norm distance. Errors on shape mismatch.
    pub fn dist(&self, other: &CMat) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &CMat, tol: f64) -> bool {
        self.dist(other).map(|d| d <= tol).unwrap_or(false)
    }

    pub fn hermitian_defect(&self) -> Result<f64> {
        self.check_square()?;
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        Ok(worst)
    }

    pub fn is_hermitian(&self, tol: Tol) -> bool {
        self.hermitian_defect()
            .map(|d| d <= tol.eq_tol)
            .unwrap_or(false)
    }

    pub fn is_unitary(&self, tol: Tol) -> bool {
        self.is_square()
            && self
                .adjoint()
                .matmul(self)
                .map(|m| m.approx_eq(&CMat::identity(self.rows), tol.eq_tol))
                .unwrap_or(false)
    }

    /// Orthogonal projector test: idempotent and Hermitian within `eq_tol`.
    pub fn is_projector(&self, tol: Tol) -> Result<bool> {
        self.check_square()?;
        if self.hermitian_defect()? > tol.eq_tol {
            return Ok(false);
        }
        Ok(self.matmul(self)?.dist(self)? <= tol.eq_tol)
    }

    /// Hermitian eigendecomposition with eigenvalues ascending.
    pub fn eig_hermitian(&self, tol: Tol) -> Result<Eigen> {
        let defect = self.hermitian_defect()?;
        if defect > tol.eq_tol {
            return Err(Error::NotHermitian(defect));
        }
        let n = self.rows;
        // Symmetrize so nalgebra sees an exactly Hermitian input.
        let m = DMatrix::from_fn(n, n, |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5);
        let se = m.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
        let values = order.iter().map(|&k| se.eigenvalues[k]).collect();
        let vectors = CMat::from_fn(n, n, |i, k| se.eigenvectors[(i, order[k])]);
        Ok(Eigen { values, vectors })
    }

    /// Orthonormal basis of the image of a projector, one column per unit of trace.
    pub fn orthonormal_image_basis(&self, tol: Tol) -> Result<CMat> {
        self.check_square()?;
        let tr = self.trace().re;
        let rank = tr.round();
        if (tr - rank).abs() > tol.rank_tol || rank < 0.0 {
            return Err(Error::NonIntegralTrace(tr));
        }
        let rank = rank as usize;
        if rank == 0 {
            return Err(Error::NotProjector(
                "zero projector has an empty image".into(),
            ));
        }
        let eig = self.eig_hermitian(tol)?;
        let n = self.rows;
        let idx: Vec<usize> = (n - rank..n).collect();
        if eig.values[n - rank] < 0.5 || (rank < n && eig.values[n - rank - 1] > 0.5) {
            return Err(Error::NotProjector("spectrum is not {0, 1}".into()));
        }
        Ok(eig.vectors.select_columns(&idx))
    }

    /// Numerical rank: eigenvalues of `A†A` above `rank_tol`.
    pub fn rank(&self, tol: Tol) -> Result<usize> {
        let g = self.adjoint().matmul(self)?;
        let eig = g.eig_hermitian(Tol {
            eq_tol: f64::INFINITY,
            ..tol
        })?;
        Ok(eig.values.iter().filter(|&&v| v > tol.rank_tol).count())
    }

    /// Haar-ish random unitary from Gram-Schmidt on a random complex matrix.
    pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
        loop {
            let raw: Vec<Vec<C64>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect()
                })
                .collect();
            if let Some(q) = gram_schmidt(&raw) {
                return CMat::from_columns(&q).expect("square");
            }
        }
    }

    /// Random Hermitian matrix with entries uniform in the unit box.
    pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(rng.gen_range(-1.0..1.0), 0.0));
            for j in i + 1..n {
                let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
        m
    }

    fn check_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "expected square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    fn check_same_shape(&self, other: &CMat) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }
}

/// Orthonormalizes the vectors in order; `None` if they are linearly dependent.
pub fn gram_schmidt(vectors: &[Vec<C64>]) -> Option<Vec<Vec<C64>>> {
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c: C64 = q.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in w.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-10 {
            return None;
        }
        out.push(w.into_iter().map(|z| z / norm).collect());
    }
    Some(out)
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:>8.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &CMat {
    type Output = CMat;

    /// Panics on shape mismatch; use [`CMat::matmul`] for a fallible product.
    fn mul(self, rhs: &CMat) -> CMat {
        self.matmul(rhs).expect("matrix shapes do not match")
    }
}

impl Add for &CMat {
    type Output = CMat;

    fn add(self, rhs: &CMat) -> CMat {
        let mut out = self.clone();
        out.add_scaled(ONE, rhs)
            .expect("matrix shapes do not match");
        out
    }
}

impl Sub for &CMat {
    type Output = CMat;

    fn sub(self, rhs: &CMat) -> CMat {
        let mut out = self.clone();
        out.add_scaled(-ONE, rhs)
            .expect("matrix shapes do not match");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn x() -> CMat {
        CMat::from_real(&[&[0.0, 1.0], &[1.0, 0.0]])
    }
    fn z() -> CMat {
        CMat::from_real(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    #[test]
    fn pauli_products() {
        assert_eq!(&x() * &x(), CMat::identity(2));
        assert_eq!(&x() * &z(), CMat::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]));
    }

    #[test]
    fn shape_errors() {
        let a = CMat::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::Dimension(_))));
        assert!(a.is_projector(Tol::default()).is_err());
        assert!(CMat::new(2, 2, vec![ZERO; 3]).is_err());
        assert!(CMat::new(1, 1, vec![C64::new(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = CMat::random_unitary(8, &mut rng);
        assert!((&u * &u.adjoint()).approx_eq(&CMat::identity(8), 1e-9));
    }

    #[test]
    fn projector_predicate() {
        let t = Tol::default();
        assert!(CMat::identity(4).is_projector(t).unwrap());
        assert!(CMat::from_real(&[&[0.5, -0.5], &[-0.5, 0.5]])
            .is_projector(t)
            .unwrap());
        assert!(!x().is_projector(t).unwrap());
    }

    #[test]
    fn eigen_small_cases() {
        let t = Tol::default();
        let e = z().eig_hermitian(t).unwrap();
        assert_eq!(e.values.len(), 2);
        assert!((e.values[0] + 1.0).abs() < 1e-12 && (e.values[1] - 1.0).abs() < 1e-12);
        let px = CMat::from_real(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let e = px.eig_hermitian(t).unwrap();
        assert!(e.values[0].abs() < 1e-12 && (e.values[1] - 1.0).abs() < 1e-12);
        let nh = CMat::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(nh.eig_hermitian(t), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eigen_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 6, 17, 64] {
            let h = CMat::random_hermitian(n, &mut rng);
            let e = h.eig_hermitian(Tol::default()).unwrap();
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let v = &e.vectors;
            assert!((&v.adjoint() * v).approx_eq(&CMat::identity(n), 1e-9));
            let lam = CMat::diag(
                &e.values
                    .iter()
                    .map(|&l| C64::new(l, 0.0))
                    .collect::<Vec<_>>(),
            );
            let rebuilt = &(v * &lam) * &v.adjoint();
            assert!(rebuilt.dist(&h).unwrap() < 1e-7, "n={n}");
            for k in 0..n {
                let hv = &h * &v.select_columns(&[k]);
                let lv = v.select_columns(&[k]).scale(C64::new(e.values[k], 0.0));
                assert!(hv.dist(&lv).unwrap() < 1e-7);
            }
        }
    }

    #[test]
    fn image_basis() {
        let t = Tol::default();
        let b = CMat::identity(2).orthonormal_image_basis(t).unwrap();
        assert!((&b.adjoint() * &b).approx_eq(&CMat::identity(2), 1e-9));
        let pz = CMat::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let b = pz.orthonormal_image_basis(t).unwrap();
        assert_eq!(b.cols(), 1);
        assert!((b.get(0, 0).norm() - 1.0).abs() < 1e-12 && b.get(1, 0).norm() < 1e-12);
        let bad = CMat::from_real(&[&[0.5, 0.0], &[0.0, 0.0]]);
        assert!(matches!(
            bad.orthonormal_image_basis(t),
            Err(Error::NonIntegralTrace(_))
        ));
    }

    #[test]
    fn rank_of_product_state() {
        let v = CMat::from_real(&[&[1.0], &[2.0], &[0.0]]);
        let m = &v * &v.adjoint();
        assert_eq!(m.rank(Tol::default()).unwrap(), 1);
        assert_eq!(CMat::identity(5).rank(Tol::default()).unwrap(), 5);
    }

    #[test]
    fn kron_dims() {
        let k = x().kron(&z());
        assert_eq!((k.rows(), k.cols()), (4, 4));
        assert_eq!(k.get(0, 2), ONE);
        assert_eq!(k.get(1, 3), -ONE);
    }
}
