//! Dense-grid brute-force oracles, used to cross-check the optimizers.
//!
//! Unit vectors of `ℂ^d` modulo a global phase are parametrized by
//! `d − 1` magnitude angles in `[0, π/2]` and `d − 1` phases in `[0, 2π)`.
//! A coarse grid is followed by local zoom rounds around the best point.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::algebra::StarAlgebraModel;
use crate::cross::TensorElement;
use crate::error::{Error, Result};
use crate::linalg::{self, c64, CMat, CVec, RMat};
use crate::lmi;
use crate::operator::OperatorMatrix;

const MAX_GRID_POINTS: f64 = 2.0e6;
const ZOOM_ROUNDS: usize = 24;

fn point(dim: usize, params: &[f64]) -> CVec {
    let k = dim - 1;
    let mut v = CVec::zeros(dim);
    let mut rest = 1.0;
    for i in 0..dim {
        let mag = if i < k { rest * libm::cos(params[i]) } else { rest };
        if i < k {
            rest *= libm::sin(params[i]);
        }
        let ph = if i == 0 { 0.0 } else { params[k + i - 1] };
        v[i] = c64(mag * libm::cos(ph), mag * libm::sin(ph));
    }
    v
}

fn for_each_grid(counts: &[usize], lo: &[f64], step: &[f64], mut f: impl FnMut(&[f64])) {
    let d = counts.len();
    let mut idx = vec![0usize; d];
    let mut params = vec![0.0; d];
    loop {
        for k in 0..d {
            params[k] = lo[k] + step[k] * idx[k] as f64;
        }
        f(&params);
        let mut k = 0;
        loop {
            if k == d {
                return;
            }
            idx[k] += 1;
            if idx[k] < counts[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Maximizes `objective` over unit vectors of `ℂ^dim` on a grid with about
/// `density` points per full turn, then refines locally.
pub fn sphere_max(dim: usize, density: usize, objective: impl Fn(&CVec) -> f64) -> (f64, CVec) {
    if dim == 0 {
        return (0.0, CVec::zeros(0));
    }
    if dim == 1 {
        let v = CVec::from_element(1, c64(1.0, 0.0));
        return (objective(&v), v);
    }
    let k = dim - 1;
    let exponent = 1.0 / (2.0 * k as f64);
    let cap = libm::pow(4.0 * MAX_GRID_POINTS, exponent) as usize;
    let turn = density.clamp(8, cap.max(8));
    let quarter = (turn / 4).max(2);
    let mut counts = vec![quarter + 1; k];
    counts.extend(vec![turn; k]);
    let mut lo = vec![0.0; 2 * k];
    let mut step: Vec<f64> = vec![FRAC_PI_2 / quarter as f64; k];
    step.extend(vec![2.0 * PI / turn as f64; k]);

    let mut best = (f64::NEG_INFINITY, vec![0.0; 2 * k]);
    for_each_grid(&counts, &lo, &step, |p| {
        let v = objective(&point(dim, p));
        if v > best.0 {
            best = (v, p.to_vec());
        }
    });

    let mut width: Vec<f64> = step.clone();
    let zoom_counts = vec![5usize; 2 * k];
    for _ in 0..ZOOM_ROUNDS {
        let center = best.1.clone();
        for i in 0..2 * k {
            lo[i] = center[i] - width[i];
        }
        let zstep: Vec<f64> = width.iter().map(|w| w / 2.0).collect();
        for_each_grid(&zoom_counts, &lo, &zstep, |p| {
            let mut q = p.to_vec();
            for t in q.iter_mut().take(k) {
                *t = t.clamp(0.0, FRAC_PI_2);
            }
            let v = objective(&point(dim, &q));
            if v > best.0 {
                best = (v, q);
            }
        });
        for w in width.iter_mut() {
            *w *= 0.5;
        }
    }
    let v = point(dim, &best.1);
    (best.0, v)
}

/// Grid estimate of `sup ‖Tx‖ / ‖x‖`; returns the value and a maximizer
/// scaled into the domain unit ball.
pub fn operator_norm_bruteforce(t: &OperatorMatrix, density: usize) -> Result<(f64, CVec)> {
    let d = t.matrix.ncols();
    if d > 3 {
        return Err(Error::InvalidArgument(format!("grid oracle supports domain dimension <= 3, got {d}")));
    }
    let (v, x) = sphere_max(d, density, |x| {
        let den = t.domain.eval(x);
        if den > 0.0 {
            t.codomain.eval(&t.apply(x)) / den
        } else {
            0.0
        }
    });
    let n = t.domain.eval(&x);
    Ok((v.max(0.0), if n > 0.0 { x.unscale(n) } else { x }))
}

/// Grid estimate of the injective norm `sup ‖M g‖ / ‖g‖_*` over the smaller factor.
pub fn injective_norm_bruteforce(z: &TensorElement, density: usize) -> Result<f64> {
    let (n, m) = z.matrix.shape();
    if n * m > 9 {
        return Err(Error::InvalidArgument(format!("grid oracle supports n*m <= 9, got {}", n * m)));
    }
    let (mat, outer, inner) = if m <= n { (z.matrix.clone(), &z.left, &z.right) } else { (z.matrix.transpose(), &z.right, &z.left) };
    let dual = inner.dual()?;
    let (v, _) = sphere_max(mat.ncols(), density, |g| {
        let den = dual.eval(g);
        if den > 0.0 {
            outer.eval(&(&mat * g)) / den
        } else {
            0.0
        }
    });
    Ok(v.max(0.0))
}

/// Null space of a real matrix from its reduced row echelon form, so that
/// basis vectors are aligned with the free coordinates.
pub fn rref_null_space(a: &RMat, tol: f64) -> RMat {
    let (rows, cols) = a.shape();
    let mut m = a.clone();
    let scale = m.amax().max(1e-300);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (best, val) = (r..rows).map(|i| (i, m[(i, c)].abs())).fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol * scale {
            continue;
        }
        m.swap_rows(r, best);
        let p = m[(r, c)];
        for j in 0..cols {
            m[(r, j)] /= p;
        }
        for i in 0..rows {
            if i != r {
                let f = m[(i, c)];
                if f != 0.0 {
                    for j in 0..cols {
                        m[(i, j)] -= f * m[(r, j)];
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = RMat::zeros(cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        out[(f, k)] = 1.0;
        for (row, &p) in pivots.iter().enumerate() {
            out[(p, k)] = -m[(row, f)];
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct KernelSample {
    /// Joint kernel of the accepted positive invariant forms.
    pub kernel: Vec<CVec>,
    pub accepted: usize,
    pub sampled: usize,
}

impl KernelSample {
    pub fn semisimple(&self) -> bool {
        self.kernel.is_empty()
    }
}

/// Samples positive invariant forms directly (axes of an echelon basis of
/// the invariant subspace, grid combinations, random points) and
/// intersects their kernels. Supports algebras of dimension at most 3.
pub fn semisimple_kernel_bruteforce(alg: &StarAlgebraModel, density: usize, seed: u64) -> Result<KernelSample> {
    use rand::{Rng, SeedableRng};
    let n = alg.dim();
    if n > 3 {
        return Err(Error::InvalidArgument(format!("kernel sampler supports dimension <= 3, got {n}")));
    }
    let basis = lmi::hermitian_basis(n);
    let cons = crate::represent::invariance_constraints(alg, &basis);
    let null = rref_null_space(&cons, 1e-10);
    let d = null.ncols();
    let forms: Vec<CMat> = (0..d).map(|c| lmi::combine(&CMat::zeros(n, n), &basis, &null.column(c).into_owned())).collect();
    let build = |coef: &[f64]| {
        let mut s = CMat::zeros(n, n);
        for (f, &w) in forms.iter().zip(coef) {
            s += f * c64(w, 0.0);
        }
        s
    };
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    for k in 0..d {
        for sign in [1.0, -1.0] {
            let mut v = vec![0.0; d];
            v[k] = sign;
            candidates.push(v);
        }
    }
    let per_axis = density.max(3);
    if d > 0 && libm::pow(per_axis as f64, d as f64) <= 2e5 {
        let total = per_axis.pow(d as u32);
        for idx in 0..total {
            let mut rest = idx;
            let v: Vec<f64> = (0..d)
                .map(|_| {
                    let i = rest % per_axis;
                    rest /= per_axis;
                    -1.0 + 2.0 * i as f64 / (per_axis - 1) as f64
                })
                .collect();
            candidates.push(v);
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..2000 {
        candidates.push((0..d).map(|_| rng.gen_range(-1.0..1.0)).collect());
    }
    let mut sum = CMat::zeros(n, n);
    let mut accepted = 0;
    for c in &candidates {
        let s = build(c);
        let eig = linalg::herm_eigen(&s);
        let top = eig.max_abs();
        if top > 0.0 && eig.min() >= -1e-10 * top {
            sum += s.unscale(top);
            accepted += 1;
        }
    }
    let eig = linalg::herm_eigen(&sum);
    let top = eig.max_abs();
    let kernel = (0..n).filter(|&k| top == 0.0 || eig.values[k] <= 1e-9 * top).map(|k| eig.column(k)).collect();
    Ok(KernelSample { kernel, accepted, sampled: candidates.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_vec;
    use crate::norm::NormSpec;

    #[test]
    fn grid_points_are_unit_vectors() {
        for p in [[0.3, 1.0, 2.0, 4.0], [0.0, 0.0, 1.0, 1.0], [FRAC_PI_2, FRAC_PI_2, 0.1, 6.0]] {
            let v = point(3, &p);
            assert!((crate::linalg::vec_norm2(&v) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn identity_and_elementary_tensors() {
        let id = crate::linalg::CMat::identity(2, 2);
        let z = TensorElement::new(id.clone(), NormSpec::l2(2), NormSpec::l2(2)).unwrap();
        assert!((injective_norm_bruteforce(&z, 720).unwrap() - 1.0).abs() < 2e-3);
        let z = TensorElement::new(id, NormSpec::l1(2), NormSpec::l1(2)).unwrap();
        assert!((injective_norm_bruteforce(&z, 720).unwrap() - 2.0).abs() < 2e-3);
        let x = real_vec(&[1.0, -2.0, 0.5]);
        let y = real_vec(&[3.0, 1.0]);
        let z = TensorElement::elementary(&x, &y, NormSpec::l1(3), NormSpec::linf(2)).unwrap();
        assert!((injective_norm_bruteforce(&z, 720).unwrap() - 3.5 * 3.0).abs() < 2e-3);
    }

    #[test]
    fn echelon_null_space() {
        let a = RMat::from_row_slice(2, 4, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let ns = rref_null_space(&a, 1e-12);
        assert_eq!(ns.ncols(), 2);
        assert!((a * &ns).amax() < 1e-15);
        assert_eq!(ns[(0, 0)], 1.0);
        assert_eq!(ns[(2, 1)], 1.0);
    }

    #[test]
    fn kernel_sampler_classifies() {
        let k = semisimple_kernel_bruteforce(&StarAlgebraModel::pointwise(3), 9, 1).unwrap();
        assert!(k.semisimple());
        let k = semisimple_kernel_bruteforce(&StarAlgebraModel::dual_numbers(), 41, 1).unwrap();
        assert_eq!(k.kernel.len(), 1);
        assert!(k.kernel[0][0].norm() < 1e-9);
        assert!(semisimple_kernel_bruteforce(&StarAlgebraModel::matrix_units(2), 5, 1).is_err());
    }

    #[test]
    fn rejects_large_instances() {
        let z = TensorElement::new(crate::linalg::CMat::zeros(4, 3), NormSpec::l1(4), NormSpec::l1(3)).unwrap();
        assert!(injective_norm_bruteforce(&z, 10).is_err());
    }
}
