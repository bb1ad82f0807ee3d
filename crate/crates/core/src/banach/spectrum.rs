//! Eigenvalues, the multiplicity of zero, and group data of a square matrix.

use serde::{Deserialize, Serialize};

use crate::ring::{Mat, MatrixAlgebra};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

impl Eigenvalue {
    pub fn modulus(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn distance(self, other: Eigenvalue) -> f64 {
        (self.re - other.re).hypot(self.im - other.im)
    }
}

#[derive(Debug, Clone)]
pub struct SpectralReport {
    /// Sorted by modulus; the first `zero_multiplicity` entries are the
    /// numerical images of the eigenvalue 0.
    pub eigenvalues: Vec<Eigenvalue>,
    pub spectral_radius: f64,
    /// Algebraic multiplicity of 0, read off as `n - rank(x^k)` once the
    /// ranks of the powers stabilize.
    pub zero_multiplicity: usize,
    pub group_inverse: Option<Mat<f64>>,
    /// `x x^#` when the group inverse exists.
    pub group_projection: Option<Mat<f64>>,
    pub min_nonzero_real_part: Option<f64>,
    pub min_nonzero_modulus: Option<f64>,
}

impl SpectralReport {
    pub fn nonzero(&self) -> &[Eigenvalue] {
        &self.eigenvalues[self.zero_multiplicity..]
    }

    pub fn group_invertible(&self) -> bool {
        self.group_inverse.is_some()
    }
}

/// Raw eigenvalues from faer, sorted by modulus then real and imaginary part.
pub fn eigenvalues(x: &Mat<f64>) -> Vec<Eigenvalue> {
    let n = x.rows();
    if n == 0 {
        return Vec::new();
    }
    let m = faer::Mat::<f64>::from_fn(n, n, |i, j| *x.get(i, j));
    let mut out: Vec<Eigenvalue> = m
        .eigenvalues()
        .expect("eigenvalue iteration converges")
        .into_iter()
        .map(|z| Eigenvalue { re: z.re, im: z.im })
        .collect();
    out.sort_by(|a, b| {
        a.modulus()
            .total_cmp(&b.modulus())
            .then(a.re.total_cmp(&b.re))
            .then(a.im.total_cmp(&b.im))
    });
    out
}

fn zero_multiplicity(alg: &MatrixAlgebra<f64>, x: &Mat<f64>) -> usize {
    let n = alg.dim();
    let mut power = x.clone();
    let mut rank = alg.rank(&power);
    for _ in 0..n {
        if rank == 0 {
            break;
        }
        let next = power.mul(x);
        let r = alg.rank(&next);
        if r == rank {
            break;
        }
        power = next;
        rank = r;
    }
    n - rank
}

pub fn spectrum(alg: &MatrixAlgebra<f64>, x: &Mat<f64>) -> SpectralReport {
    let eigenvalues = eigenvalues(x);
    let zero_multiplicity = zero_multiplicity(alg, x).min(eigenvalues.len());
    let group_inverse = alg.factored_group_inverse(x).ok();
    let group_projection = group_inverse.as_ref().map(|g| x.mul(g));
    let nonzero = &eigenvalues[zero_multiplicity..];
    SpectralReport {
        spectral_radius: eigenvalues.last().map_or(0.0, |e| e.modulus()),
        min_nonzero_real_part: nonzero.iter().map(|e| e.re).min_by(f64::total_cmp),
        min_nonzero_modulus: nonzero.iter().map(|e| e.modulus()).min_by(f64::total_cmp),
        zero_multiplicity,
        group_inverse,
        group_projection,
        eigenvalues,
    }
}

/// Largest distance in a greedy nearest-neighbour matching of two lists of
/// eigenvalues of equal length.
pub fn spectral_gap(x: &[Eigenvalue], y: &[Eigenvalue]) -> f64 {
    if x.len() != y.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; y.len()];
    let mut worst: f64 = 0.0;
    for &e in x {
        let (j, d) = y
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, &f)| (j, e.distance(f)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("equal lengths");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}
