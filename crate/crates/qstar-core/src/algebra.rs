//! Finite-dimensional *-algebras given by structure constants.
//!
//! The product is `x·y = Σ C[i,j,k] x_i y_j e_k` and the involution is
//! `x* = J·conj(x)`. Left and right multiplication operators are
//! `L_x[k,j] = Σ_i x_i C[i,j,k]` and `R_x[k,i] = Σ_j x_j C[i,j,k]`.

use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, c64, CMat, CVec, C64, ONE, ZERO};

#[derive(Clone, Debug, Serialize)]
pub struct StarAlgebraModel {
    dim: usize,
    #[serde(skip)]
    structure: Vec<C64>,
    #[serde(serialize_with = "crate::ser::cmat")]
    involution: CMat,
    #[serde(serialize_with = "crate::ser::opt_cvec")]
    unit: Option<CVec>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AlgebraResiduals {
    pub associativity: f64,
    pub involutive: f64,
    pub anti_multiplicative: f64,
    pub unit: Option<f64>,
}

impl AlgebraResiduals {
    pub fn max(&self) -> f64 {
        self.associativity.max(self.involutive).max(self.anti_multiplicative).max(self.unit.unwrap_or(0.0))
    }
}

impl StarAlgebraModel {
    /// `structure[(i * n + j) * n + k] = C[i,j,k]`.
    pub fn new(dim: usize, structure: Vec<C64>, involution: CMat, unit: Option<CVec>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInstance("algebra dimension must be positive".into()));
        }
        check_dim(dim * dim * dim, structure.len())?;
        check_dim(dim, involution.nrows())?;
        check_dim(dim, involution.ncols())?;
        if let Some(e) = &unit {
            check_dim(dim, e.len())?;
        }
        let finite = |z: &C64| z.re.is_finite() && z.im.is_finite();
        if !structure.iter().all(finite) || !involution.iter().all(finite) {
            return Err(Error::InvalidInstance("non-finite structure data".into()));
        }
        Ok(StarAlgebraModel { dim, structure, involution, unit })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure(&self) -> &[C64] {
        &self.structure
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> C64 {
        self.structure[(i * self.dim + j) * self.dim + k]
    }

    pub fn involution(&self) -> &CMat {
        &self.involution
    }

    pub fn unit(&self) -> Option<&CVec> {
        self.unit.as_ref()
    }

    pub fn multiply(&self, x: &CVec, y: &CVec) -> CVec {
        let n = self.dim;
        let mut out = CVec::zeros(n);
        for i in 0..n {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..n {
                let w = x[i] * y[j];
                if w == ZERO {
                    continue;
                }
                let base = (i * n + j) * n;
                for k in 0..n {
                    out[k] += self.structure[base + k] * w;
                }
            }
        }
        out
    }

    pub fn try_multiply(&self, x: &CVec, y: &CVec) -> Result<CVec> {
        check_dim(self.dim, x.len())?;
        check_dim(self.dim, y.len())?;
        Ok(self.multiply(x, y))
    }

    pub fn star(&self, x: &CVec) -> CVec {
        &self.involution * linalg::conj_vec(x)
    }

    pub fn basis(&self, i: usize) -> CVec {
        linalg::basis(self.dim, i)
    }

    /// Matrix of `a ↦ x·a`.
    pub fn left_matrix(&self, x: &CVec) -> CMat {
        let n = self.dim;
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    m[(k, j)] += x[i] * self.c(i, j, k);
                }
            }
        }
        m
    }

    /// Matrix of `a ↦ a·x`.
    pub fn right_matrix(&self, x: &CVec) -> CMat {
        let n = self.dim;
        let mut m = CMat::zeros(n, n);
        for j in 0..n {
            if x[j] == ZERO {
                continue;
            }
            for i in 0..n {
                for k in 0..n {
                    m[(k, i)] += x[j] * self.c(i, j, k);
                }
            }
        }
        m
    }

    pub fn residuals(&self) -> AlgebraResiduals {
        let n = self.dim;
        let scale = self.structure.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let mut assoc: f64 = 0.0;
        let mut anti: f64 = 0.0;
        let prods: Vec<Vec<CVec>> = (0..n).map(|i| (0..n).map(|j| self.multiply(&self.basis(i), &self.basis(j))).collect()).collect();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.multiply(&prods[i][j], &self.basis(k));
                    let rhs = self.multiply(&self.basis(i), &prods[j][k]);
                    assoc = assoc.max(linalg::max_abs((lhs - rhs).iter().copied()));
                }
                let lhs = self.star(&prods[i][j]);
                let rhs = self.multiply(&self.star(&self.basis(j)), &self.star(&self.basis(i)));
                anti = anti.max(linalg::max_abs((lhs - rhs).iter().copied()));
            }
        }
        let jj = &self.involution * self.involution.map(|z| z.conj());
        let involutive = linalg::max_abs_diff(&jj, &CMat::identity(n, n));
        let unit = self.unit.as_ref().map(|e| {
            let mut worst: f64 = 0.0;
            for i in 0..n {
                let b = self.basis(i);
                worst = worst.max(linalg::max_abs((self.multiply(e, &b) - &b).iter().copied()));
                worst = worst.max(linalg::max_abs((self.multiply(&b, e) - &b).iter().copied()));
            }
            worst
        });
        AlgebraResiduals { associativity: assoc / (scale * scale), involutive, anti_multiplicative: anti / scale, unit }
    }

    fn from_fn(dim: usize, f: impl Fn(usize, usize, usize) -> C64, involution: CMat, unit: Option<CVec>) -> Self {
        let mut s = vec![ZERO; dim * dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    s[(i * dim + j) * dim + k] = f(i, j, k);
                }
            }
        }
        StarAlgebraModel { dim, structure: s, involution, unit }
    }

    /// `ℂ` with complex conjugation.
    pub fn scalar() -> Self {
        Self::pointwise(1)
    }

    /// Functions on `n` points with pointwise product and conjugation.
    pub fn pointwise(n: usize) -> Self {
        let unit = CVec::from_element(n, ONE);
        Self::from_fn(n, |i, j, k| if i == j && j == k { ONE } else { ZERO }, CMat::identity(n, n), Some(unit))
    }

    /// `k × k` matrices in the matrix-unit basis, `E_ab` at index `a·k + b`,
    /// with the conjugate transpose as involution.
    pub fn matrix_units(k: usize) -> Self {
        let n = k * k;
        let mut inv = CMat::zeros(n, n);
        let mut unit = CVec::zeros(n);
        for a in 0..k {
            unit[a * k + a] = ONE;
            for b in 0..k {
                inv[(b * k + a, a * k + b)] = ONE;
            }
        }
        Self::from_fn(
            n,
            |i, j, l| {
                let (a, b) = (i / k, i % k);
                let (c, d) = (j / k, j % k);
                if b == c && l == a * k + d {
                    ONE
                } else {
                    ZERO
                }
            },
            inv,
            Some(unit),
        )
    }

    /// Group algebra of `ℤ/k` with `g* = g⁻¹`.
    pub fn cyclic_group(k: usize) -> Self {
        let mut inv = CMat::zeros(k, k);
        for i in 0..k {
            inv[((k - i) % k, i)] = ONE;
        }
        Self::from_fn(k, |i, j, l| if (i + j) % k == l { ONE } else { ZERO }, inv, Some(linalg::basis(k, 0)))
    }

    /// `span{e, ε}` with `ε² = 0` and `ε* = ε`. The nilpotent `ε` is
    /// annihilated by every positive invariant form.
    pub fn dual_numbers() -> Self {
        Self::from_fn(
            2,
            |i, j, k| {
                let (deg, target) = (i + j, k);
                if deg <= 1 && target == deg {
                    ONE
                } else {
                    ZERO
                }
            },
            CMat::identity(2, 2),
            Some(linalg::basis(2, 0)),
        )
    }

    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        let (n, m) = (a.dim, b.dim);
        let d = n + m;
        let mut inv = CMat::zeros(d, d);
        inv.view_mut((0, 0), (n, n)).copy_from(&a.involution);
        inv.view_mut((n, n), (m, m)).copy_from(&b.involution);
        let unit = match (&a.unit, &b.unit) {
            (Some(x), Some(y)) => {
                let mut e = CVec::zeros(d);
                e.rows_mut(0, n).copy_from(x);
                e.rows_mut(n, m).copy_from(y);
                Some(e)
            }
            _ => None,
        };
        Self::from_fn(
            d,
            |i, j, k| {
                if i < n && j < n && k < n {
                    a.c(i, j, k)
                } else if i >= n && j >= n && k >= n {
                    b.c(i - n, j - n, k - n)
                } else {
                    ZERO
                }
            },
            inv,
            unit,
        )
    }

    /// Algebraic tensor product in row-major coordinates.
    pub fn tensor(a: &Self, b: &Self) -> Self {
        let m = b.dim;
        let unit = match (&a.unit, &b.unit) {
            (Some(x), Some(y)) => Some(linalg::kron_vec(x, y)),
            _ => None,
        };
        Self::from_fn(
            a.dim * m,
            |i, j, k| a.c(i / m, j / m, k / m) * b.c(i % m, j % m, k % m),
            linalg::kron(&a.involution, &b.involution),
            unit,
        )
    }

    /// Same algebra in the basis given by the columns of `p`.
    pub fn change_of_basis(&self, p: &CMat) -> Result<Self> {
        let n = self.dim;
        check_dim(n, p.nrows())?;
        check_dim(n, p.ncols())?;
        let p_inv = p.clone().try_inverse().ok_or_else(|| Error::InvalidArgument("change of basis must be invertible".into()))?;
        let mut s = vec![ZERO; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = &p_inv * self.multiply(&p.column(i).into_owned(), &p.column(j).into_owned());
                for k in 0..n {
                    s[(i * n + j) * n + k] = prod[k];
                }
            }
        }
        let involution = &p_inv * &self.involution * p.map(|z| z.conj());
        let unit = self.unit.as_ref().map(|e| &p_inv * e);
        Ok(StarAlgebraModel { dim: n, structure: s, involution, unit })
    }

    /// Unitization: `(a, λ)(b, μ) = (ab + λb + μa, λμ)` on `dim + 1` coordinates.
    pub fn unitized(&self) -> Self {
        let n = self.dim;
        let d = n + 1;
        let mut inv = CMat::zeros(d, d);
        inv.view_mut((0, 0), (n, n)).copy_from(&self.involution);
        inv[(n, n)] = ONE;
        Self::from_fn(
            d,
            |i, j, k| match (i == n, j == n) {
                (false, false) if k < n => self.c(i, j, k),
                (true, false) if k == j => ONE,
                (false, true) if k == i => ONE,
                (true, true) if k == n => ONE,
                _ => ZERO,
            },
            inv,
            Some(linalg::basis(d, n)),
        )
    }
}

/// Monomial unitary with phases in `{±1, ±i}`.
pub fn random_monomial<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let phases = [c64(1.0, 0.0), c64(-1.0, 0.0), c64(0.0, 1.0), c64(0.0, -1.0)];
    let mut p = CMat::zeros(n, n);
    for (c, &r) in perm.iter().enumerate() {
        p[(r, c)] = phases[rng.gen_range(0..4)];
    }
    p
}

/// Direct sum of random group and matrix algebras, conjugated by a random
/// monomial unitary. Associativity and the involution laws hold exactly.
pub fn random_star_algebra<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> Result<StarAlgebraModel> {
    if max_dim == 0 {
        return Err(Error::InvalidArgument("max_dim must be positive".into()));
    }
    let mut parts: Vec<StarAlgebraModel> = Vec::new();
    let mut used = 0;
    loop {
        let room = max_dim - used;
        if room == 0 || (!parts.is_empty() && rng.gen_bool(0.4)) {
            break;
        }
        let part = match rng.gen_range(0..4) {
            0 => StarAlgebraModel::scalar(),
            1 if room >= 2 => StarAlgebraModel::pointwise(rng.gen_range(2..=room.min(3))),
            2 if room >= 4 => StarAlgebraModel::matrix_units(2),
            3 if room >= 2 => StarAlgebraModel::cyclic_group(rng.gen_range(2..=room.min(4))),
            _ => StarAlgebraModel::scalar(),
        };
        used += part.dim;
        parts.push(part);
    }
    let mut alg = parts[0].clone();
    for p in &parts[1..] {
        alg = StarAlgebraModel::direct_sum(&alg, p);
    }
    let p = random_monomial(rng, alg.dim);
    alg.change_of_basis(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_vec;
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn pointwise_product() {
        let a = StarAlgebraModel::pointwise(2);
        assert_eq!(a.multiply(&real_vec(&[1.0, 2.0]), &real_vec(&[3.0, 4.0])), real_vec(&[3.0, 8.0]));
        let x = real_vec(&[5.0, -1.0]);
        assert_eq!(a.multiply(a.unit().unwrap(), &x), x);
    }

    #[test]
    fn matrix_units_multiply() {
        let a = StarAlgebraModel::matrix_units(2);
        // E12 · E21 = E11
        assert_eq!(a.multiply(&a.basis(1), &a.basis(2)), a.basis(0));
        assert_eq!(a.multiply(&a.basis(2), &a.basis(1)), a.basis(3));
        assert_eq!(a.star(&a.basis(1)), a.basis(2));
        assert_eq!(a.residuals().max(), 0.0);
    }

    #[test]
    fn generators_satisfy_axioms() {
        for alg in [
            StarAlgebraModel::scalar(),
            StarAlgebraModel::pointwise(3),
            StarAlgebraModel::matrix_units(2),
            StarAlgebraModel::cyclic_group(4),
            StarAlgebraModel::dual_numbers(),
            StarAlgebraModel::dual_numbers().unitized(),
            StarAlgebraModel::tensor(&StarAlgebraModel::matrix_units(2), &StarAlgebraModel::cyclic_group(3)),
        ] {
            let r = alg.residuals();
            assert!(r.max() < 1e-14, "{r:?}");
        }
    }

    #[test]
    fn tensor_of_pointwise_is_pointwise() {
        let t = StarAlgebraModel::tensor(&StarAlgebraModel::pointwise(2), &StarAlgebraModel::pointwise(3));
        let p = StarAlgebraModel::pointwise(6);
        assert_eq!(t.structure(), p.structure());
        assert_eq!(t.unit(), p.unit());
    }

    #[test]
    fn dual_numbers_are_nilpotent() {
        let a = StarAlgebraModel::dual_numbers();
        assert_eq!(a.multiply(&a.basis(1), &a.basis(1)), CVec::zeros(2));
        assert_eq!(a.multiply(&a.basis(0), &a.basis(1)), a.basis(1));
    }

    #[test]
    fn unitization_adjoins_unit() {
        let a = StarAlgebraModel::pointwise(2);
        let u = a.unitized();
        let e = u.unit().unwrap().clone();
        let x = real_vec(&[1.0, 2.0, 3.0]);
        assert_eq!(u.multiply(&e, &x), x);
        // (a,λ)(b,μ) = (ab + λb + μa, λμ)
        let y = real_vec(&[-1.0, 4.0, 0.5]);
        assert_eq!(u.multiply(&x, &y), real_vec(&[-1.0 + -3.0 + 0.5, 8.0 + 12.0 + 1.0, 1.5]));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(StarAlgebraModel::new(2, vec![ZERO; 7], CMat::identity(2, 2), None).is_err());
        assert!(StarAlgebraModel::new(0, vec![], CMat::identity(0, 0), None).is_err());
        let a = StarAlgebraModel::pointwise(2);
        assert!(a.try_multiply(&CVec::zeros(3), &CVec::zeros(2)).is_err());
        assert!(a.change_of_basis(&CMat::zeros(2, 2)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn random_algebras_are_exact(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let alg = random_star_algebra(&mut rng, 6).unwrap();
            prop_assert!(alg.dim() <= 6);
            prop_assert!(alg.residuals().max() == 0.0);
        }

        #[test]
        fn left_and_right_matrices_match_product(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let alg = random_star_algebra(&mut rng, 5).unwrap();
            let x = linalg::random_cvec(&mut rng, alg.dim());
            let a = linalg::random_cvec(&mut rng, alg.dim());
            let xa = alg.multiply(&x, &a);
            prop_assert!(linalg::vec_norm2(&(alg.left_matrix(&x) * &a - &xa)) < 1e-12);
            prop_assert!(linalg::vec_norm2(&(alg.right_matrix(&a) * &x - &xa)) < 1e-12);
        }
    }
}
