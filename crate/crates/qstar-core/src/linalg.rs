//! Dense complex linear algebra helpers.
//!
//! Tensor coordinates are flattened row-major: the pair `(i, j)` of a left
//! index `i < n` and right index `j < m` sits at position `i * m + j`.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub const fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real_vec(values: &[f64]) -> CVec {
    CVec::from_iterator(values.len(), values.iter().map(|&v| c64(v, 0.0)))
}

pub fn basis(n: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(n);
    v[i] = ONE;
    v
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (br, bc) = b.shape();
    CMat::from_fn(a.nrows() * br, a.ncols() * bc, |r, c| a[(r / br, c / bc)] * b[(r % br, c % bc)])
}

pub fn kron_vec(x: &CVec, y: &CVec) -> CVec {
    let m = y.len();
    CVec::from_fn(x.len() * m, |r, _| x[r / m] * y[r % m])
}

pub fn kron_real(x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for a in x {
        for b in y {
            out.push(a * b);
        }
    }
    out
}

/// Coefficient matrix of a flattened tensor.
pub fn reshape(v: &CVec, n: usize, m: usize) -> CMat {
    assert_eq!(v.len(), n * m, "reshape size mismatch");
    CMat::from_fn(n, m, |i, j| v[i * m + j])
}

/// Row-major flattening, inverse of [`reshape`].
pub fn flatten(mat: &CMat) -> CVec {
    let (n, m) = mat.shape();
    CVec::from_fn(n * m, |r, _| mat[(r / m, r % m)])
}

/// `Σ u_i v_i`, no conjugation.
pub fn bilinear(u: &CVec, v: &CVec) -> C64 {
    u.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
}

pub fn conj_vec(v: &CVec) -> CVec {
    v.map(|z| z.conj())
}

pub fn frobenius(m: &CMat) -> f64 {
    libm::sqrt(m.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

pub fn vec_norm2(v: &CVec) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

pub fn max_abs(v: impl IntoIterator<Item = C64>) -> f64 {
    v.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

pub fn hermitian_residual(m: &CMat) -> f64 {
    frobenius(&(m - m.adjoint()))
}

/// Unit-modulus direction of `z`; zero maps to one.
pub fn phase(z: C64) -> C64 {
    let r = z.norm();
    if r == 0.0 {
        ONE
    } else {
        z / r
    }
}

/// Eigen-decomposition of the Hermitian part of a matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermEigen {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn column(&self, k: usize) -> CVec {
        self.vectors.column(k).into_owned()
    }

    /// `U f(Λ) U^H`.
    pub fn reconstruct(&self, f: impl Fn(f64) -> f64) -> CMat {
        let n = self.values.len();
        let mut out = CMat::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            let u = self.vectors.column(k);
            out += (u * u.adjoint()).scale(w);
        }
        out
    }
}

pub fn herm_eigen(m: &CMat) -> HermEigen {
    let n = m.nrows();
    if n == 0 {
        return HermEigen { values: Vec::new(), vectors: CMat::zeros(0, 0) };
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    HermEigen { values, vectors }
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    herm_eigen(m).min()
}

/// Eigen-decomposition of a real symmetric matrix, eigenvalues ascending.
pub fn sym_eigen(m: &RMat) -> (Vec<f64>, RMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), RMat::zeros(0, 0));
    }
    let sym = (m + m.transpose()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = RMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `m^power` for a Hermitian positive-definite matrix.
pub fn pd_power(m: &CMat, power: f64) -> CMat {
    herm_eigen(m).reconstruct(|l| libm::pow(l.max(0.0), power))
}

/// Moore-Penrose inverse of a Hermitian matrix with a relative eigenvalue cutoff.
pub fn pinv_hermitian(m: &CMat, rel_cut: f64) -> CMat {
    let eig = herm_eigen(m);
    let cut = rel_cut * eig.max_abs();
    eig.reconstruct(|l| if l.abs() > cut && l != 0.0 { 1.0 / l } else { 0.0 })
}

/// Singular value decomposition with values sorted descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMat,
    pub sigma: Vec<f64>,
    pub v_t: CMat,
}

impl Svd {
    pub fn left(&self, k: usize) -> CVec {
        self.u.column(k).into_owned()
    }

    /// `k`-th right singular vector `v_k`, so that `m = Σ σ_k u_k v_k^H`.
    pub fn right(&self, k: usize) -> CVec {
        self.v_t.row(k).adjoint()
    }
}

pub fn svd(m: &CMat) -> Svd {
    let (n, k) = m.shape();
    let r = n.min(k);
    if r == 0 {
        return Svd { u: CMat::zeros(n, 0), sigma: Vec::new(), v_t: CMat::zeros(0, k) };
    }
    let dec = m.clone().svd(true, true);
    let u = dec.u.expect("svd requested u");
    let v_t = dec.v_t.expect("svd requested v_t");
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| dec.singular_values[b].total_cmp(&dec.singular_values[a]));
    Svd {
        u: CMat::from_fn(n, r, |i, c| u[(i, order[c])]),
        sigma: order.iter().map(|&c| dec.singular_values[c]).collect(),
        v_t: CMat::from_fn(r, k, |c, j| v_t[(order[c], j)]),
    }
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    svd(m).sigma
}

pub fn spectral_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn nuclear_norm(m: &CMat) -> f64 {
    singular_values(m).iter().sum()
}

pub fn numerical_rank(m: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * top).count()
}

/// Orthonormal basis (as columns) of the null space of a real matrix.
///
/// Directions whose singular value is below `rel_tol` times the largest one
/// count as null.
pub fn real_null_space(a: &RMat, rel_tol: f64) -> RMat {
    let k = a.ncols();
    // Pad to at least k rows so the SVD returns a full right basis.
    let padded = if a.nrows() < k {
        let mut p = RMat::zeros(k, k);
        p.rows_mut(0, a.nrows()).copy_from(a);
        p
    } else {
        a.clone()
    };
    let dec = padded.svd(false, true);
    let Some(v_t) = dec.v_t else { return RMat::zeros(k, 0) };
    let top = dec.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = rel_tol * top;
    let keep: Vec<usize> = (0..dec.singular_values.len()).filter(|&c| dec.singular_values[c] <= cut).collect();
    RMat::from_fn(k, keep.len(), |r, c| v_t[(keep[c], r)])
}

/// Least-squares solution of `a x = b` through the pseudo-inverse.
pub fn least_squares(a: &CMat, b: &CVec, rel_cut: f64) -> CVec {
    let normal = a.adjoint() * a;
    pinv_hermitian(&normal, rel_cut) * (a.adjoint() * b)
}

pub fn random_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_cvec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| random_c64(rng))
}

pub fn random_rvec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| c64(rng.gen_range(-1.0..1.0), 0.0))
}

pub fn random_cmat<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> CMat {
    CMat::from_fn(n, m, |_, _| random_c64(rng))
}

/// Random unitary from the QR factorization of a random complex matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    random_cmat(rng, n, n).qr().q()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn kron_matches_row_major_flattening() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let x = random_cvec(&mut rng, 2);
        let y = random_cvec(&mut rng, 3);
        let m = &x * y.transpose();
        let flat = flatten(&m);
        let k = kron_vec(&x, &y);
        assert!((flat - k).norm() < 1e-15);
        assert_eq!(reshape(&flatten(&m), 2, 3), m);
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let a = random_cmat(&mut rng, 2, 2);
        let b = random_cmat(&mut rng, 3, 3);
        let x = random_cvec(&mut rng, 2);
        let y = random_cvec(&mut rng, 3);
        let lhs = kron(&a, &b) * kron_vec(&x, &y);
        let rhs = kron_vec(&(&a * &x), &(&b * &y));
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn svd_is_sorted_and_reconstructs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let m = random_cmat(&mut rng, 3, 4);
        let d = svd(&m);
        assert!(d.sigma.windows(2).all(|w| w[0] >= w[1]));
        let mut r = CMat::zeros(3, 4);
        for k in 0..3 {
            r += (d.left(k) * d.right(k).adjoint()).scale(d.sigma[k]);
        }
        assert!(max_abs_diff(&r, &m) < 1e-13);
    }

    #[test]
    fn null_space_of_rank_deficient_matrix() {
        let a = RMat::from_row_slice(2, 3, &[1.0, 1.0, 0.0, 2.0, 2.0, 0.0]);
        let ns = real_null_space(&a, 1e-10);
        assert_eq!(ns.ncols(), 2);
        assert!((&a * &ns).norm() < 1e-12);
    }

    #[test]
    fn pinv_of_singular_projector() {
        let p = CMat::from_diagonal(&real_vec(&[2.0, 0.0]));
        let pi = pinv_hermitian(&p, 1e-12);
        assert!((pi[(0, 0)].re - 0.5).abs() < 1e-15);
        assert_eq!(pi[(1, 1)], ZERO);
    }
}
