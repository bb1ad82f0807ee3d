//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use bcinv::inverse::{bc_inverse, CornerFrame, InverseBackend, Method};
use bcinv::ring::{Mat, MatrixAlgebra};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat<f64> {
    Mat::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

/// A random `n x n` matrix of rank `r` (almost surely).
pub fn rank_r(rng: &mut ChaCha8Rng, n: usize, r: usize) -> Mat<f64> {
    uniform(rng, n, r).mul(&uniform(rng, r, n))
}

pub fn rel(x: &Mat<f64>, reference: &Mat<f64>) -> f64 {
    x.sub(reference).spectral_norm() / reference.spectral_norm().max(1e-300)
}

fn singular_values(x: &Mat<f64>) -> Vec<f64> {
    let m = faer::Mat::<f64>::from_fn(x.rows(), x.cols(), |i, j| *x.get(i, j));
    m.singular_values().expect("svd converges")
}

/// `σ_r / σ_1` for the `r`-th singular value.
pub fn relative_gap(x: &Mat<f64>, r: usize) -> f64 {
    let s = singular_values(x);
    if r == 0 || s[0] == 0.0 {
        return 0.0;
    }
    s[r - 1] / s[0]
}

/// How `a` is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Uniform entries.
    Generic,
    /// `a = v^T + small noise`, so `a v` is close to positive semidefinite
    /// and the integral form applies.
    Aligned,
}

#[derive(Debug, Clone)]
pub struct FloatInstance {
    pub n: usize,
    pub r: usize,
    pub shape: Shape,
    pub alg: MatrixAlgebra<f64>,
    pub a: Mat<f64>,
    pub frame: CornerFrame<Mat<f64>>,
    pub v: Mat<f64>,
    pub y: Mat<f64>,
}

/// Below this, `σ_r / σ_1` of `b`, `c` or the corner `c a b` is treated
/// as rank deficient and the draw is discarded.
pub const WELL_POSED: f64 = 1e-4;

/// Draws `b`, `c` of equal rank `r ∈ 1..n` and `a` until the inverse exists
/// with a well-posed corner.
pub fn float_instance(rng: &mut ChaCha8Rng, n: usize, shape: Shape) -> FloatInstance {
    let alg = MatrixAlgebra::float(n).unwrap();
    loop {
        let r = rng.random_range(1..n);
        let b = rank_r(rng, n, r);
        let c = rank_r(rng, n, r);
        if relative_gap(&b, r) < WELL_POSED || relative_gap(&c, r) < WELL_POSED {
            continue;
        }
        let Ok(frame) = CornerFrame::canonical(&alg, b, c) else { continue };
        let Ok(v) = alg.build_v(&frame) else { continue };
        let a = match shape {
            Shape::Generic => uniform(rng, n, n),
            Shape::Aligned => v.transpose().add(&uniform(rng, n, n).scale(&0.05)),
        };
        if relative_gap(&frame.c.mul(&a).mul(&frame.b), r) < WELL_POSED {
            continue;
        }
        if let Ok(y) = bc_inverse(&alg, &a, &frame, Method::Factor) {
            return FloatInstance { n, r, shape, alg, a, frame, v, y };
        }
    }
}

/// `count` instances with `n ∈ 2..=8`; every third one is [`Shape::Aligned`].
pub fn float_instances(seed: u64, count: usize) -> Vec<FloatInstance> {
    let mut g = rng(seed);
    (0..count)
        .map(|i| {
            let n = g.random_range(2..=8);
            let shape = if i % 3 == 2 { Shape::Aligned } else { Shape::Generic };
            float_instance(&mut g, n, shape)
        })
        .collect()
}

/// A general inner inverse `g0 + (1 - g0 b) w1 + w2 (1 - b g0)` of `b`.
pub fn other_inner_inverse(rng: &mut ChaCha8Rng, b: &Mat<f64>, g0: &Mat<f64>) -> Mat<f64> {
    let n = b.rows();
    let id = Mat::identity(n);
    let w1 = uniform(rng, n, n);
    let w2 = uniform(rng, n, n);
    g0.add(&id.sub(&g0.mul(b)).mul(&w1)).add(&w2.mul(&id.sub(&b.mul(g0))))
}

/// An element of `l R (1-r) + (1-l) R`, i.e. some `m` with `l m r = 0`.
pub fn twisted(rng: &mut ChaCha8Rng, l: &Mat<f64>, r: &Mat<f64>, size: f64) -> Mat<f64> {
    let n = l.rows();
    let id = Mat::identity(n);
    let x = uniform(rng, n, n).scale(&size);
    let y = uniform(rng, n, n).scale(&size);
    l.mul(&x).mul(&id.sub(r)).add(&id.sub(l).mul(&y))
}

/// A unit of the corner ring `eRe` near `e`.
pub fn corner_unit(rng: &mut ChaCha8Rng, e: &Mat<f64>) -> Mat<f64> {
    let n = e.rows();
    let x = Mat::identity(n).add(&uniform(rng, n, n).scale(&0.3));
    e.mul(&x).mul(e)
}

pub fn frame_with<R: InverseBackend>(ring: &R, f: &CornerFrame<R::Elem>, g: R::Elem, h: R::Elem) -> Option<CornerFrame<R::Elem>>
where
    R::Elem: Clone + std::fmt::Display,
{
    CornerFrame::new(ring, f.b.clone(), f.c.clone(), g, h).ok()
}
