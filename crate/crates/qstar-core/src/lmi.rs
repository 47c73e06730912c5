//! A small log-det barrier solver for linear matrix inequalities.
//!
//! Feasible set: Hermitian blocks `F₀ + Σ θ_k F_k ⪰ 0` and scalar rows
//! `b + aᵀθ ≥ 0` over a real parameter vector `θ`.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{CMat, RMat, RVec, C64, ONE};

#[derive(Clone, Debug)]
pub struct MatrixBlock {
    pub constant: CMat,
    pub coeffs: Vec<CMat>,
}

#[derive(Clone, Debug)]
pub struct LinearRow {
    pub constant: f64,
    pub coeffs: Vec<f64>,
}

#[derive(Clone, Debug, Default)]
pub struct Lmi {
    pub nvars: usize,
    pub blocks: Vec<MatrixBlock>,
    pub rows: Vec<LinearRow>,
}

#[derive(Clone, Debug)]
pub struct LmiResult {
    pub theta: RVec,
    pub objective: f64,
    /// Duality-gap bound `m / t` of the last centering step.
    pub gap: f64,
    pub converged: bool,
    pub newton_steps: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct LmiOptions {
    pub gap_tol: f64,
    pub max_newton: usize,
    pub max_outer: usize,
}

impl Default for LmiOptions {
    fn default() -> Self {
        LmiOptions { gap_tol: 1e-9, max_newton: 80, max_outer: 40 }
    }
}

/// Real basis of the `n × n` Hermitian matrices: `E_ii`, then for `i < j`
/// the symmetric `E_ij + E_ji` and antisymmetric `i(E_ij − E_ji)` parts.
pub fn hermitian_basis(n: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let mut m = CMat::zeros(n, n);
        m[(i, i)] = ONE;
        out.push(m);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut s = CMat::zeros(n, n);
            s[(i, j)] = ONE;
            s[(j, i)] = ONE;
            out.push(s);
            let mut a = CMat::zeros(n, n);
            a[(i, j)] = C64::new(0.0, 1.0);
            a[(j, i)] = C64::new(0.0, -1.0);
            out.push(a);
        }
    }
    out
}

/// Coordinates of a Hermitian matrix in [`hermitian_basis`].
pub fn hermitian_coords(m: &CMat) -> RVec {
    let n = m.nrows();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.push(m[(i, i)].re);
    }
    for i in 0..n {
        for j in i + 1..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            out.push(z.re);
            out.push(z.im);
        }
    }
    RVec::from_vec(out)
}

pub fn combine(constant: &CMat, coeffs: &[CMat], theta: &RVec) -> CMat {
    let mut m = constant.clone();
    for (k, f) in coeffs.iter().enumerate() {
        if theta[k] != 0.0 {
            m += f * C64::new(theta[k], 0.0);
        }
    }
    m
}

/// Lower-triangular `L` with `L Lᴴ` equal to the Hermitian part of `m`, or
/// `None` when a pivot is not positive.
pub fn hermitian_cholesky(m: &CMat) -> Option<CMat> {
    let n = m.nrows();
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut l = CMat::zeros(n, n);
    for j in 0..n {
        let mut d = h[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0 && d.is_finite()) {
            return None;
        }
        let d = libm::sqrt(d);
        l[(j, j)] = C64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = h[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}

impl Lmi {
    pub fn new(nvars: usize) -> Self {
        Lmi { nvars, blocks: Vec::new(), rows: Vec::new() }
    }

    pub fn block_values(&self, theta: &RVec) -> Vec<CMat> {
        self.blocks.iter().map(|b| combine(&b.constant, &b.coeffs, theta)).collect()
    }

    fn row_values(&self, theta: &RVec) -> Vec<f64> {
        self.rows.iter().map(|r| r.constant + r.coeffs.iter().zip(theta.iter()).map(|(a, t)| a * t).sum::<f64>()).collect()
    }

    /// Barrier dimension `m`: total block size plus the number of rows.
    pub fn barrier_degree(&self) -> usize {
        self.blocks.iter().map(|b| b.constant.nrows()).sum::<usize>() + self.rows.len()
    }

    pub fn strictly_feasible(&self, theta: &RVec) -> bool {
        self.barrier(theta).is_some()
    }

    /// `−Σ log det F_b(θ) − Σ log r_i(θ)`, or `None` outside the interior.
    pub fn barrier(&self, theta: &RVec) -> Option<f64> {
        let mut total = 0.0;
        for f in self.block_values(theta) {
            let l = hermitian_cholesky(&f)?;
            for i in 0..f.nrows() {
                total -= 2.0 * libm::log(l[(i, i)].re);
            }
        }
        for r in self.row_values(theta) {
            if !(r > 0.0 && r.is_finite()) {
                return None;
            }
            total -= libm::log(r);
        }
        Some(total)
    }

    /// Gradient and Hessian of the barrier.
    fn derivatives(&self, theta: &RVec) -> Option<(RVec, RMat)> {
        let k = self.nvars;
        let mut g = RVec::zeros(k);
        let mut h = RMat::zeros(k, k);
        for (b, f) in self.blocks.iter().zip(self.block_values(theta)) {
            let l = hermitian_cholesky(&f)?;
            let scaled: Vec<CMat> = b
                .coeffs
                .iter()
                .map(|fk| {
                    let x = l.solve_lower_triangular(fk).unwrap_or_else(|| CMat::zeros(fk.nrows(), fk.ncols()));
                    let y = l.solve_lower_triangular(&x.adjoint()).unwrap_or_else(|| CMat::zeros(x.ncols(), x.nrows()));
                    y.adjoint()
                })
                .collect();
            for p in 0..k {
                g[p] -= scaled[p].trace().re;
                for q in p..k {
                    let v: f64 = scaled[p].iter().zip(scaled[q].iter()).map(|(a, c)| (a * c.conj()).re).sum();
                    h[(p, q)] += v;
                    if p != q {
                        h[(q, p)] += v;
                    }
                }
            }
        }
        for (row, r) in self.rows.iter().zip(self.row_values(theta)) {
            if r <= 0.0 {
                return None;
            }
            for p in 0..k {
                let ap = row.coeffs[p];
                if ap == 0.0 {
                    continue;
                }
                g[p] -= ap / r;
                for q in 0..k {
                    h[(p, q)] += ap * row.coeffs[q] / (r * r);
                }
            }
        }
        Some((g, h))
    }

    /// Minimizes `−t·cᵀθ + barrier(θ)` by damped Newton from a strictly feasible point.
    pub fn center(&self, c: &RVec, t: f64, theta0: &RVec, max_newton: usize) -> (RVec, bool, usize) {
        let mut theta = theta0.clone();
        let obj = |th: &RVec| self.barrier(th).map(|b| b - t * c.dot(th));
        let Some(mut val) = obj(&theta) else {
            return (theta, false, 0);
        };
        for step in 0..max_newton {
            let Some((gb, h)) = self.derivatives(&theta) else {
                return (theta, false, step);
            };
            let g = gb - c * t;
            let ridge = 1e-14 * (1.0 + h.diagonal().amax());
            let hr = &h + RMat::identity(self.nvars, self.nvars) * ridge;
            let dir = match hr.clone().cholesky() {
                Some(ch) => ch.solve(&(-&g)),
                None => match hr.lu().solve(&(-&g)) {
                    Some(d) => d,
                    None => return (theta, false, step),
                },
            };
            let dec = -g.dot(&dir);
            if !(dec.is_finite()) {
                return (theta, false, step);
            }
            if dec / 2.0 < 1e-11 {
                return (theta, true, step);
            }
            let mut s = 1.0;
            let mut moved = false;
            for _ in 0..60 {
                let cand = &theta + &dir * s;
                if let Some(v) = obj(&cand) {
                    if v <= val - 0.25 * s * dec {
                        theta = cand;
                        val = v;
                        moved = true;
                        break;
                    }
                }
                s *= 0.5;
            }
            if !moved {
                return (theta, dec < 1e-6, step);
            }
        }
        (theta, false, max_newton)
    }

    pub fn analytic_center(&self, theta0: &RVec, max_newton: usize) -> (RVec, bool) {
        let (th, ok, _) = self.center(&RVec::zeros(self.nvars), 0.0, theta0, max_newton);
        (th, ok)
    }

    /// Maximizes `cᵀθ` over the feasible set by path following.
    pub fn maximize(&self, c: &RVec, theta0: &RVec, opts: &LmiOptions) -> LmiResult {
        let m = self.barrier_degree().max(1) as f64;
        let mut theta = theta0.clone();
        let mut t = 1.0;
        let mut steps = 0;
        let mut all_ok = true;
        for _ in 0..opts.max_outer {
            let (th, ok, s) = self.center(c, t, &theta, opts.max_newton);
            steps += s;
            theta = th;
            all_ok &= ok;
            if m / t < opts.gap_tol {
                break;
            }
            t *= 10.0;
        }
        LmiResult { objective: c.dot(&theta), gap: m / t, converged: all_ok && m / t < opts.gap_tol * 10.0, theta, newton_steps: steps }
    }
}

pub fn zero_vars(n: usize) -> RVec {
    RVec::from_vec(vec![0.0; n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{self, c64};

    #[test]
    fn hermitian_basis_round_trip() {
        let m = CMat::from_row_slice(2, 2, &[c64(2.0, 0.0), c64(1.0, -3.0), c64(1.0, 3.0), c64(-1.0, 0.0)]);
        let th = hermitian_coords(&m);
        let back = combine(&CMat::zeros(2, 2), &hermitian_basis(2), &th);
        assert!(linalg::max_abs_diff(&back, &m) < 1e-15);
    }

    #[test]
    fn maximizes_over_interval() {
        // max θ subject to 1 − θ ≥ 0, θ + 1 ≥ 0.
        let mut lmi = Lmi::new(1);
        lmi.rows.push(LinearRow { constant: 1.0, coeffs: vec![-1.0] });
        lmi.rows.push(LinearRow { constant: 1.0, coeffs: vec![1.0] });
        let r = lmi.maximize(&real_vec_r(&[1.0]), &zero_vars(1), &LmiOptions::default());
        assert!(r.converged);
        assert!((r.objective - 1.0).abs() < 1e-8);
    }

    #[test]
    fn largest_shift_below_matrix() {
        // max t subject to M − tI ⪰ 0 gives λ_min(M).
        let m = CMat::from_row_slice(2, 2, &[c64(2.0, 0.0), c64(0.0, 1.0), c64(0.0, -1.0), c64(3.0, 0.0)]);
        let mut lmi = Lmi::new(1);
        lmi.blocks.push(MatrixBlock { constant: m.clone(), coeffs: vec![-CMat::identity(2, 2)] });
        let r = lmi.maximize(&real_vec_r(&[1.0]), &real_vec_r(&[0.0]), &LmiOptions::default());
        assert!((r.objective - linalg::min_eigenvalue(&m)).abs() < 1e-8);
    }

    #[test]
    fn analytic_center_of_box_is_midpoint() {
        let mut lmi = Lmi::new(1);
        lmi.rows.push(LinearRow { constant: 3.0, coeffs: vec![-1.0] });
        lmi.rows.push(LinearRow { constant: 1.0, coeffs: vec![1.0] });
        let (th, ok) = lmi.analytic_center(&zero_vars(1), 50);
        assert!(ok);
        assert!((th[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn infeasible_start_is_reported() {
        let mut lmi = Lmi::new(1);
        lmi.rows.push(LinearRow { constant: -1.0, coeffs: vec![0.0] });
        assert!(!lmi.strictly_feasible(&zero_vars(1)));
        let (_, ok) = lmi.analytic_center(&zero_vars(1), 5);
        assert!(!ok);
    }

    fn real_vec_r(v: &[f64]) -> RVec {
        RVec::from_row_slice(v)
    }
}
