//! Finite-dimensional tracial von Neumann algebras.
//!
//! An algebra is a direct sum of full complex matrix blocks `M_{n_1} ⊕ … ⊕ M_{n_k}`
//! carrying the faithful trace `τ(x) = Σ_k λ_k Tr(x_k)` with positive block weights
//! `λ_k`. Every finite-dimensional von Neumann algebra with a faithful trace has this
//! form, so every affiliated operator is bounded and every normal weight is of the
//! form `x ↦ τ(Kx)` for a positive kernel `K`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Mat = DMatrix<C64>;

/// Relative threshold below which negative eigenvalues of a nominally positive
/// element are clamped to zero.
pub const EPS_PSD: f64 = 1e-10;
/// Relative threshold on singular values defining the support of a partial isometry.
pub const EPS_RANK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraShape {
    block_dims: Vec<usize>,
    trace_weights: Vec<f64>,
}

impl AlgebraShape {
    pub fn new(block_dims: Vec<usize>, trace_weights: Vec<f64>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::Shape("algebra needs at least one block".into()));
        }
        if block_dims.len() != trace_weights.len() {
            return Err(Error::Shape(format!(
                "{} blocks but {} trace weights",
                block_dims.len(),
                trace_weights.len()
            )));
        }
        if let Some(k) = block_dims.iter().position(|&n| n == 0) {
            return Err(Error::Shape(format!("block {k} has dimension 0")));
        }
        if let Some(k) = trace_weights.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::Shape(format!(
                "trace weight {k} = {} is not positive",
                trace_weights[k]
            )));
        }
        Ok(Self {
            block_dims,
            trace_weights,
        })
    }

    /// `M_n` with the standard matrix trace.
    pub fn full_matrix(n: usize) -> Result<Self> {
        Self::new(vec![n], vec![1.0])
    }

    /// The commutative algebra `ℓ^∞` of a finite measure space with point masses `mu`.
    pub fn diagonal(mu: Vec<f64>) -> Result<Self> {
        Self::new(vec![1; mu.len()], mu)
    }

    /// Direct sum of `copies` copies of `self`.
    pub fn repeat(&self, copies: usize) -> Result<Self> {
        let mut dims = Vec::with_capacity(copies * self.num_blocks());
        let mut weights = Vec::with_capacity(copies * self.num_blocks());
        for _ in 0..copies {
            dims.extend_from_slice(&self.block_dims);
            weights.extend_from_slice(&self.trace_weights);
        }
        Self::new(dims, weights)
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn trace_weights(&self) -> &[f64] {
        &self.trace_weights
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Complex dimension `Σ n_k²` of the algebra.
    pub fn dimension(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }

    pub fn is_commutative(&self) -> bool {
        self.block_dims.iter().all(|&n| n == 1)
    }

    /// Matrix units `E^{(k)}_{ij}` in the order used by [`AlgebraElement::to_vector`].
    pub fn basis(&self) -> Vec<AlgebraElement> {
        let mut out = Vec::with_capacity(self.dimension());
        for (k, &n) in self.block_dims.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let mut e = AlgebraElement::zeros(self);
                    e.blocks[k][(i, j)] = C64::new(1.0, 0.0);
                    out.push(e);
                }
            }
        }
        out
    }
}

impl fmt::Display for AlgebraShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .block_dims
            .iter()
            .zip(&self.trace_weights)
            .map(|(n, w)| format!("M{n}[{w}]"))
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    shape: AlgebraShape,
    blocks: Vec<Mat>,
}

impl AlgebraElement {
    pub fn from_blocks(shape: &AlgebraShape, blocks: Vec<Mat>) -> Result<Self> {
        if blocks.len() != shape.num_blocks() {
            return Err(Error::Shape(format!(
                "expected {} blocks, got {}",
                shape.num_blocks(),
                blocks.len()
            )));
        }
        for (k, (b, &n)) in blocks.iter().zip(shape.block_dims()).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::Shape(format!(
                    "block {k} is {}x{}, expected {n}x{n}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(Self {
            shape: shape.clone(),
            blocks,
        })
    }

    pub fn zeros(shape: &AlgebraShape) -> Self {
        let blocks = shape.block_dims().iter().map(|&n| Mat::zeros(n, n)).collect();
        Self {
            shape: shape.clone(),
            blocks,
        }
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        Self::scalar(shape, C64::new(1.0, 0.0))
    }

    pub fn scalar(shape: &AlgebraShape, c: C64) -> Self {
        let blocks = shape
            .block_dims()
            .iter()
            .map(|&n| Mat::identity(n, n) * c)
            .collect();
        Self {
            shape: shape.clone(),
            blocks,
        }
    }

    /// Element of a single-block algebra `M_n` with the standard trace.
    pub fn from_matrix(m: Mat) -> Self {
        let n = m.nrows();
        assert_eq!(n, m.ncols(), "matrix must be square");
        Self {
            shape: AlgebraShape::full_matrix(n).expect("n > 0"),
            blocks: vec![m],
        }
    }

    /// Element of a commutative algebra `ℓ^∞(T)` from its values.
    pub fn from_diagonal(shape: &AlgebraShape, values: &[C64]) -> Result<Self> {
        if !shape.is_commutative() || values.len() != shape.num_blocks() {
            return Err(Error::Shape(format!(
                "{} values do not fit the algebra {shape}",
                values.len()
            )));
        }
        let blocks = values.iter().map(|&v| Mat::from_element(1, 1, v)).collect();
        Ok(Self {
            shape: shape.clone(),
            blocks,
        })
    }

    /// Rank-one operator `ξ η*` in `M_n`.
    pub fn outer(xi: &DVector<C64>, eta: &DVector<C64>) -> Self {
        Self::from_matrix(xi * eta.adjoint())
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[Mat] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &Mat {
        &self.blocks[k]
    }

    pub fn block_mut(&mut self, k: usize) -> &mut Mat {
        &mut self.blocks[k]
    }

    pub fn into_blocks(self) -> Vec<Mat> {
        self.blocks
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape.block_dims != other.shape.block_dims {
            return Err(Error::Shape(format!(
                "{} vs {}",
                self.shape, other.shape
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Mat, &Mat) -> Mat) -> Result<Self> {
        self.check_same_shape(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Self {
            shape: self.shape.clone(),
            blocks,
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn map_blocks(&self, f: impl Fn(&Mat) -> Mat) -> Self {
        Self {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map_blocks(|b| b * c)
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        self.map_blocks(|b| b.adjoint())
    }

    /// `x*x`.
    pub fn gram(&self) -> Self {
        self.map_blocks(|b| b.adjoint() * b)
    }

    /// Hermitian part `(x + x*)/2`.
    pub fn hermitian_part(&self) -> Self {
        self.map_blocks(|b| (b + b.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let scale = 1.0f64.max(self.max_abs_entry());
        self.blocks
            .iter()
            .all(|b| (b - b.adjoint()).iter().all(|z| z.norm() <= tol * scale))
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `τ(x) = Σ_k λ_k Tr(x_k)`.
    pub fn trace(&self) -> C64 {
        self.blocks
            .iter()
            .zip(self.shape.trace_weights())
            .map(|(b, &w)| b.trace() * w)
            .sum()
    }

    /// `τ(x y)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<C64> {
        self.check_same_shape(other)?;
        let mut acc = C64::new(0.0, 0.0);
        for ((a, b), &w) in self.blocks.iter().zip(&other.blocks).zip(self.shape.trace_weights()) {
            let mut s = C64::new(0.0, 0.0);
            for i in 0..a.nrows() {
                for j in 0..a.ncols() {
                    s += a[(i, j)] * b[(j, i)];
                }
            }
            acc += s * w;
        }
        Ok(acc)
    }

    /// Singular values of each block.
    pub fn singular_values(&self) -> Vec<Vec<f64>> {
        self.blocks
            .iter()
            .map(|b| b.clone().svd(false, false).singular_values.iter().copied().collect())
            .collect()
    }

    /// Operator norm, the largest singular value over all blocks.
    pub fn op_norm(&self) -> f64 {
        self.singular_values()
            .iter()
            .flatten()
            .fold(0.0, |m: f64, &s| m.max(s))
    }

    /// Noncommutative `L^p` norm `τ(|x|^p)^{1/p}`; `p = ∞` gives the operator norm.
    pub fn p_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::Parameter(format!("p-norm needs p >= 1, got {p}")));
        }
        if p.is_infinite() {
            return Ok(self.op_norm());
        }
        let sv = self.singular_values();
        let sum: f64 = sv
            .iter()
            .zip(self.shape.trace_weights())
            .map(|(s, &w)| w * s.iter().map(|v| v.powf(p)).sum::<f64>())
            .sum();
        Ok(sum.powf(1.0 / p))
    }

    /// Per-block hermitian eigendecomposition of the hermitian part.
    pub fn eigh(&self) -> Vec<(Vec<f64>, Mat)> {
        self.blocks
            .iter()
            .map(|b| {
                let h = (b + b.adjoint()) * C64::new(0.5, 0.0);
                let eig = SymmetricEigen::new(h);
                (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
            })
            .collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigh()
            .iter()
            .flat_map(|(v, _)| v.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    /// Spectral calculus `f(x)` for hermitian `x`.
    ///
    /// Fails with [`Error::Domain`] if `f` produces a non-finite value on the spectrum.
    pub fn func_calc(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        if !self.is_hermitian(1e-10) {
            return Err(Error::Domain("functional calculus needs a hermitian element".into()));
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (vals, vecs) in self.eigh() {
            let mut fv = Vec::with_capacity(vals.len());
            for &l in &vals {
                let y = f(l);
                if !y.is_finite() {
                    return Err(Error::Domain(format!("f({l:e}) = {y}")));
                }
                fv.push(y);
            }
            blocks.push(reconstruct(&vecs, &fv));
        }
        Ok(Self {
            shape: self.shape.clone(),
            blocks,
        })
    }

    /// Clamped spectrum of a nominally positive element, or an error if some
    /// eigenvalue is below `-EPS_PSD·‖x‖∞`.
    fn positive_spectrum(&self) -> Result<Vec<(Vec<f64>, Mat)>> {
        if !self.is_hermitian(1e-10) {
            return Err(Error::NotPositive {
                min_eigenvalue: f64::NAN,
                tolerance: EPS_PSD,
            });
        }
        let mut spec = self.eigh();
        let scale = spec
            .iter()
            .flat_map(|(v, _)| v.iter())
            .fold(0.0f64, |m, l| m.max(l.abs()));
        let tol = EPS_PSD * scale.max(f64::MIN_POSITIVE);
        for (vals, _) in spec.iter_mut() {
            for l in vals.iter_mut() {
                if *l < -tol {
                    return Err(Error::NotPositive {
                        min_eigenvalue: *l,
                        tolerance: tol,
                    });
                }
                if *l < 0.0 {
                    *l = 0.0;
                }
            }
        }
        Ok(spec)
    }

    pub fn is_positive(&self) -> bool {
        self.positive_spectrum().is_ok()
    }

    pub fn positive_sqrt(&self) -> Result<Self> {
        self.positive_power(0.5)
    }

    /// `x^t` for positive `x`. Negative powers require `x` invertible.
    pub fn positive_power(&self, t: f64) -> Result<Self> {
        let spec = self.positive_spectrum()?;
        let mut blocks = Vec::with_capacity(spec.len());
        for (vals, vecs) in spec {
            let mut fv = Vec::with_capacity(vals.len());
            for &l in &vals {
                let y = if t == 0.0 { 1.0 } else { l.powf(t) };
                if !y.is_finite() {
                    return Err(Error::Domain(format!("{l:e}^{t} is not finite")));
                }
                fv.push(y);
            }
            blocks.push(reconstruct(&vecs, &fv));
        }
        Ok(Self {
            shape: self.shape.clone(),
            blocks,
        })
    }

    /// Inverse of a positive definite element.
    pub fn positive_inverse(&self) -> Result<Self> {
        self.positive_power(-1.0)
    }

    /// Polar decomposition `x = u|x|` with `u` a partial isometry supported on the
    /// singular directions above `EPS_RANK·s_max`.
    pub fn polar(&self) -> (Self, Self) {
        let mut us = Vec::with_capacity(self.blocks.len());
        let mut abs = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let n = b.nrows();
            let svd = b.clone().svd(true, true);
            let w = svd.u.expect("requested u");
            let vt = svd.v_t.expect("requested v_t");
            let s = &svd.singular_values;
            let smax = s.iter().fold(0.0f64, |m, &v| m.max(v));
            let cutoff = EPS_RANK * smax;
            let mut u = Mat::zeros(n, n);
            let mut a = Mat::zeros(n, n);
            for (i, &si) in s.iter().enumerate() {
                let wi = w.column(i);
                let vi = vt.row(i);
                a += vi.adjoint() * vi * C64::new(si, 0.0);
                if si > cutoff {
                    u += wi * vi;
                }
            }
            us.push(u);
            abs.push(a);
        }
        (
            Self {
                shape: self.shape.clone(),
                blocks: us,
            },
            Self {
                shape: self.shape.clone(),
                blocks: abs,
            },
        )
    }

    /// `|x| = (x*x)^{1/2}`.
    pub fn abs(&self) -> Self {
        self.polar().1
    }

    /// Concatenated row-major block entries; the coordinates dual to [`AlgebraShape::basis`].
    pub fn to_vector(&self) -> DVector<C64> {
        let mut v = Vec::with_capacity(self.shape.dimension());
        for b in &self.blocks {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    v.push(b[(i, j)]);
                }
            }
        }
        DVector::from_vec(v)
    }

    pub fn from_vector(shape: &AlgebraShape, v: &DVector<C64>) -> Result<Self> {
        if v.len() != shape.dimension() {
            return Err(Error::Shape(format!(
                "vector of length {} for algebra of dimension {}",
                v.len(),
                shape.dimension()
            )));
        }
        let mut blocks = Vec::with_capacity(shape.num_blocks());
        let mut offset = 0;
        for &n in shape.block_dims() {
            blocks.push(Mat::from_fn(n, n, |i, j| v[offset + i * n + j]));
            offset += n * n;
        }
        Ok(Self {
            shape: shape.clone(),
            blocks,
        })
    }

    /// Distance in operator norm.
    pub fn op_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.try_sub(other)?.op_norm())
    }

    /// If `x = c·1` up to `tol·max(1, |c|)` in operator norm, returns `c`.
    pub fn as_scalar(&self, tol: f64) -> Option<C64> {
        let n: usize = self.shape.block_dims().iter().sum();
        let c = self
            .blocks
            .iter()
            .map(|b| b.trace())
            .sum::<C64>()
            / n as f64;
        let resid = self.off_scalar_residual();
        (resid <= tol * 1.0f64.max(c.norm())).then_some(c)
    }

    /// `‖x − c·1‖∞` where `c` is the average eigenvalue.
    pub fn off_scalar_residual(&self) -> f64 {
        let n: usize = self.shape.block_dims().iter().sum();
        let c = self
            .blocks
            .iter()
            .map(|b| b.trace())
            .sum::<C64>()
            / n as f64;
        self.try_sub(&Self::scalar(&self.shape, c))
            .expect("same shape")
            .op_norm()
    }
}

fn reconstruct(vecs: &Mat, vals: &[f64]) -> Mat {
    let n = vecs.nrows();
    let mut scaled = vecs.clone();
    for (j, &l) in vals.iter().enumerate() {
        for i in 0..n {
            scaled[(i, j)] *= l;
        }
    }
    scaled * vecs.adjoint()
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for &AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: &AlgebraElement) -> AlgebraElement {
                self.$checked(rhs).expect("algebra elements of different shapes")
            }
        }
        impl $tr for AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: AlgebraElement) -> AlgebraElement {
                (&self).$checked(&rhs).expect("algebra elements of different shapes")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale_re(-1.0)
    }
}

/// A normal weight `φ(x) = τ(Kx)` given by its positive density kernel `K`
/// (its Radon–Nikodym derivative with respect to `τ`).
#[derive(Clone, Debug, PartialEq)]
pub struct WeightKernel {
    kernel: AlgebraElement,
}

impl WeightKernel {
    /// Validates positivity; eigenvalues within `EPS_PSD` below zero are clamped.
    pub fn new(kernel: AlgebraElement) -> Result<Self> {
        let root = kernel.positive_sqrt()?;
        Ok(Self {
            kernel: root.gram(),
        })
    }

    pub fn trace_weight(shape: &AlgebraShape) -> Self {
        Self {
            kernel: AlgebraElement::identity(shape),
        }
    }

    pub fn kernel(&self) -> &AlgebraElement {
        &self.kernel
    }

    pub fn into_kernel(self) -> AlgebraElement {
        self.kernel
    }

    /// `φ(x) = τ(K x)`.
    pub fn apply(&self, x: &AlgebraElement) -> Result<C64> {
        self.kernel.trace_product(x)
    }

    /// `τ(K^{1/2} x K^{1/2})`; equals [`apply`](Self::apply) by traciality.
    pub fn apply_sandwich(&self, x: &AlgebraElement) -> Result<C64> {
        let r = self.kernel.positive_sqrt()?;
        Ok(r.try_mul(x)?.try_mul(&r)?.trace())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn diag(vals: &[f64]) -> AlgebraElement {
        let n = vals.len();
        AlgebraElement::from_matrix(Mat::from_fn(n, n, |i, j| if i == j { c(vals[i]) } else { c(0.0) }))
    }

    #[test]
    fn trace_examples() {
        let shape = AlgebraShape::full_matrix(2).unwrap();
        assert_eq!(AlgebraElement::identity(&shape).trace(), c(2.0));

        let shape = AlgebraShape::new(vec![1, 2], vec![1.0, 0.5]).unwrap();
        assert_eq!(AlgebraElement::identity(&shape).trace(), c(2.0));

        assert_eq!(diag(&[1.0, -1.0]).trace(), c(0.0));
    }

    #[test]
    fn shape_validation() {
        assert!(AlgebraShape::new(vec![], vec![]).is_err());
        assert!(AlgebraShape::new(vec![2, 0], vec![1.0, 1.0]).is_err());
        assert!(AlgebraShape::new(vec![2], vec![0.0]).is_err());
        assert!(AlgebraShape::new(vec![2, 2], vec![1.0]).is_err());
        let a = AlgebraElement::identity(&AlgebraShape::full_matrix(2).unwrap());
        let b = AlgebraElement::identity(&AlgebraShape::full_matrix(3).unwrap());
        assert!(matches!(a.try_mul(&b), Err(Error::Shape(_))));
        assert!(a.trace_product(&b).is_err());
    }

    #[test]
    fn p_norm_examples() {
        let x = diag(&[3.0, 4.0]);
        assert!(close(x.p_norm(2.0).unwrap(), 5.0, 1e-12));
        assert!(close(x.p_norm(f64::INFINITY).unwrap(), 4.0, 1e-12));
        let shape = AlgebraShape::new(vec![2], vec![0.5]).unwrap();
        let one = AlgebraElement::identity(&shape);
        assert!(close(one.p_norm(1.0).unwrap(), 1.0, 1e-12));
        assert!(matches!(x.p_norm(0.5), Err(Error::Parameter(_))));
    }

    #[test]
    fn sqrt_examples() {
        let s = diag(&[4.0, 9.0]).positive_sqrt().unwrap();
        assert!(s.op_distance(&diag(&[2.0, 3.0])).unwrap() < 1e-12);

        let z = AlgebraElement::zeros(&AlgebraShape::full_matrix(2).unwrap());
        assert!(z.positive_sqrt().unwrap().op_norm() < 1e-15);

        let m = AlgebraElement::from_matrix(Mat::from_row_slice(
            2,
            2,
            &[c(2.0), c(1.0), c(1.0), c(2.0)],
        ));
        let r = m.positive_sqrt().unwrap();
        assert!(r.is_hermitian(1e-14));
        assert!((&r * &r).op_distance(&m).unwrap() < 1e-12);

        assert!(matches!(
            diag(&[1.0, -1.0]).positive_sqrt(),
            Err(Error::NotPositive { .. })
        ));
        // tiny negative eigenvalues are clamped
        assert!(diag(&[1.0, -1e-13]).positive_sqrt().is_ok());
    }

    #[test]
    fn func_calc_examples() {
        let x = diag(&[1.0, 4.0]);
        assert!(x.func_calc(|t| t).unwrap().op_distance(&x).unwrap() < 1e-12);
        let r = x.func_calc(|t| t.powf(-0.5)).unwrap();
        assert!(r.op_distance(&diag(&[1.0, 0.5])).unwrap() < 1e-12);
        let e = diag(&[0.0, 1.0]).func_calc(f64::exp).unwrap();
        assert!(e.op_distance(&diag(&[1.0, std::f64::consts::E])).unwrap() < 1e-12);
        assert!(matches!(
            diag(&[0.0, 1.0]).func_calc(|t| t.powf(-0.5)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            diag(&[0.0, 1.0]).positive_power(-1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn polar_examples() {
        let x = diag(&[2.0, 3.0]);
        let (u, a) = x.polar();
        assert!(u.op_distance(&diag(&[1.0, 1.0])).unwrap() < 1e-12);
        assert!(a.op_distance(&x).unwrap() < 1e-12);

        let n = AlgebraElement::from_matrix(Mat::from_row_slice(
            2,
            2,
            &[c(0.0), c(1.0), c(0.0), c(0.0)],
        ));
        let (u, a) = n.polar();
        assert!(a.op_distance(&diag(&[0.0, 1.0])).unwrap() < 1e-12);
        assert!(u.op_distance(&n).unwrap() < 1e-12);
        assert!((&(&u * &u.adjoint()) * &u).op_distance(&u).unwrap() < 1e-12);
    }

    #[test]
    fn weight_examples() {
        let shape = AlgebraShape::new(vec![2], vec![0.7]).unwrap();
        let x = AlgebraElement::from_blocks(
            &shape,
            vec![Mat::from_row_slice(2, 2, &[c(1.5), c(0.2), c(0.3), c(-2.0)])],
        )
        .unwrap();
        let tau = WeightKernel::trace_weight(&shape);
        assert_eq!(tau.apply(&x).unwrap(), x.trace());

        let k = WeightKernel::new(
            AlgebraElement::from_blocks(&shape, vec![Mat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)])])
                .unwrap(),
        )
        .unwrap();
        let d = AlgebraElement::from_blocks(&shape, vec![Mat::from_row_slice(2, 2, &[c(3.0), c(0.0), c(0.0), c(5.0)])])
            .unwrap();
        assert!((k.apply(&d).unwrap() - c(0.7 * 3.0)).norm() < 1e-12);
        assert!(WeightKernel::new(diag(&[1.0, -1.0])).is_err());
        assert!(k.apply(&diag(&[1.0, 1.0, 1.0])).is_err());
    }
}
