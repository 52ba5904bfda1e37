//! Seeded random elements. Every draw goes through a `ChaCha8Rng` so runs are
//! reproducible from a single `u64` seed.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgebraElement, AlgebraShape, Mat, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian scalar, `E|z|² = 1`.
pub fn complex_gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(rng: &mut impl Rng, n: usize) -> Mat {
    DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

/// Element with i.i.d. complex Gaussian entries in every block.
pub fn random_element(rng: &mut impl Rng, shape: &AlgebraShape) -> AlgebraElement {
    let blocks = shape.block_dims().iter().map(|&n| gaussian_matrix(rng, n)).collect();
    AlgebraElement::from_blocks(shape, blocks).expect("dims match")
}

pub fn random_hermitian(rng: &mut impl Rng, shape: &AlgebraShape) -> AlgebraElement {
    random_element(rng, shape).hermitian_part()
}

/// `z*z + δ·1` with `δ = 1e-6·‖z*z‖∞`, so the result is strictly positive.
pub fn random_positive(rng: &mut impl Rng, shape: &AlgebraShape) -> AlgebraElement {
    let z = random_element(rng, shape);
    let p = z.gram();
    let delta = 1e-6 * p.op_norm().max(f64::MIN_POSITIVE);
    &p + &AlgebraElement::scalar(shape, C64::new(delta, 0.0))
}

/// Positive element rescaled to unit trace.
pub fn random_density(rng: &mut impl Rng, shape: &AlgebraShape) -> AlgebraElement {
    let p = random_positive(rng, shape);
    let t = p.trace().re;
    p.scale_re(1.0 / t)
}

/// Random complex unit vector of length `n`.
pub fn random_unit_vector(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}
