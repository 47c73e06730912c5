//! Quasi *-algebra pairs `(A, A₀)` sharing one coordinate space.
//!
//! `A` carries the coarse norm; `A₀` is the same space viewed as an algebra
//! with the multiplier norm `‖x‖₀ = max(‖L_x‖, ‖R_x‖)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::StarAlgebraModel;
use crate::check::{all_passed, CheckEntry};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, CVec};
use crate::norm::{NormKind, NormSpec};
use crate::operator::{operator_norm, OperatorMatrix, OperatorNormResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct QuasiPair {
    pub algebra: StarAlgebraModel,
    pub norm: NormSpec,
    pub label: String,
    pub warnings: Vec<String>,
    /// Generator tag such as `lp-grid`.
    pub model: Option<String>,
}

impl QuasiPair {
    /// Builds the pair, rescaling the norm so that a unit has norm one.
    pub fn new(algebra: StarAlgebraModel, norm: NormSpec, label: impl Into<String>) -> Result<Self> {
        check_dim(algebra.dim(), norm.dim())?;
        let mut pair = QuasiPair { algebra, norm, label: label.into(), warnings: Vec::new(), model: None };
        if let Some(e) = pair.algebra.unit() {
            let ne = pair.norm.eval(e);
            if !(ne > 0.0 && ne.is_finite()) {
                return Err(Error::InvalidNorm("unit has zero norm".into()));
            }
            if (ne - 1.0).abs() > 1e-12 {
                pair.norm = pair.norm.scaled(1.0 / ne)?;
                pair.warnings.push(format!("unit had norm {ne}; norm rescaled by {}", 1.0 / ne));
            }
        }
        Ok(pair)
    }

    pub fn with_model(mut self, model: &str) -> Self {
        self.model = Some(model.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn is_unital(&self) -> bool {
        self.algebra.unit().is_some()
    }

    pub fn unit(&self) -> Option<&CVec> {
        self.algebra.unit()
    }

    pub fn norm_of(&self, a: &CVec) -> Result<f64> {
        check_dim(self.dim(), a.len())?;
        Ok(self.norm.eval(a))
    }

    /// `x·a` or `a·x` for `x ∈ A₀`, `a ∈ A`.
    pub fn module_action(&self, side: Side, x: &CVec, a: &CVec) -> Result<CVec> {
        match side {
            Side::Left => self.algebra.try_multiply(x, a),
            Side::Right => self.algebra.try_multiply(a, x),
        }
    }

    pub fn left_operator(&self, x: &CVec) -> Result<OperatorMatrix> {
        check_dim(self.dim(), x.len())?;
        OperatorMatrix::new(self.algebra.left_matrix(x), self.norm.clone(), self.norm.clone())
    }

    pub fn right_operator(&self, x: &CVec) -> Result<OperatorMatrix> {
        check_dim(self.dim(), x.len())?;
        OperatorMatrix::new(self.algebra.right_matrix(x), self.norm.clone(), self.norm.clone())
    }

    /// Operator norms of `L_x` and `R_x`.
    pub fn multiplier_norms(&self, x: &CVec) -> Result<(OperatorNormResult, OperatorNormResult)> {
        Ok((operator_norm(&self.left_operator(x)?)?, operator_norm(&self.right_operator(x)?)?))
    }

    pub fn a0_norm(&self, x: &CVec) -> Result<f64> {
        let (l, r) = self.multiplier_norms(x)?;
        Ok(l.value.max(r.value))
    }

    /// Adjoins a unit at index `dim` with `‖(a, λ)‖ = ‖a‖ + |λ|`.
    pub fn unitize(&self) -> Result<QuasiPair> {
        if self.is_unital() {
            return Err(Error::AlreadyUnital);
        }
        Ok(QuasiPair {
            algebra: self.algebra.unitized(),
            norm: NormSpec::unitized(self.norm.clone()),
            label: format!("{}+unit", self.label),
            warnings: self.warnings.clone(),
            model: self.model.clone(),
        })
    }

    /// Whether the norm is evaluated in closed form rather than by optimization.
    pub fn norm_is_exact(&self) -> bool {
        norm_is_exact(&self.norm)
    }
}

fn norm_is_exact(n: &NormSpec) -> bool {
    match n.kind() {
        NormKind::Lp { .. } | NormKind::Inner(_) => true,
        NormKind::Unitized { base, .. } | NormKind::Scaled { base, .. } => norm_is_exact(base),
        NormKind::Tensor(t) => t.flat().is_some() || (t.left.gram().is_some() && t.right.gram().is_some()),
        NormKind::Custom(_) => false,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub label: String,
    pub passed: bool,
    pub checks: Vec<CheckEntry>,
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(1.0)
}

fn vdiff(a: &CVec, b: &CVec) -> f64 {
    linalg::max_abs((a - b).iter().copied())
}

/// Checks the quasi *-algebra axioms on basis elements and `samples`
/// random elements. Norm comparisons use `max(tol, 1e-6)` relative slack
/// when the norm is computed by optimization.
pub fn validate_quasi_pair(pair: &QuasiPair, samples: usize, tol: f64, seed: u64) -> Result<ValidationReport> {
    let n = pair.dim();
    let alg = &pair.algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norm_tol = if pair.norm_is_exact() { tol.max(1e-12) } else { tol.max(1e-6) };
    let mut checks = Vec::new();

    let mut points: Vec<CVec> = (0..n).map(|i| alg.basis(i)).collect();
    for _ in 0..samples {
        points.push(linalg::random_cvec(&mut rng, n));
    }
    let rand_pt = |rng: &mut ChaCha8Rng| linalg::random_cvec(rng, n);

    let mut bil: f64 = 0.0;
    for _ in 0..samples.max(1) {
        let (x, y, z) = (rand_pt(&mut rng), rand_pt(&mut rng), rand_pt(&mut rng));
        let (s, t) = (linalg::random_c64(&mut rng), linalg::random_c64(&mut rng));
        let comb = x.scale(1.0) * s + &y * t;
        let l = alg.multiply(&comb, &z);
        let r = alg.multiply(&x, &z) * s + alg.multiply(&y, &z) * t;
        let l2 = alg.multiply(&z, &comb);
        let r2 = alg.multiply(&z, &x) * s + alg.multiply(&z, &y) * t;
        bil = bil.max(rel(vdiff(&l, &r), linalg::max_abs(r.iter().copied())));
        bil = bil.max(rel(vdiff(&l2, &r2), linalg::max_abs(r2.iter().copied())));
    }
    checks.push(CheckEntry::residual("bilinearity", bil, tol));

    let res = alg.residuals();
    let mut assoc = res.associativity;
    let mut anti = res.anti_multiplicative;
    let mut invol: f64 = 0.0;
    for _ in 0..samples {
        let (x, a, y) = (rand_pt(&mut rng), rand_pt(&mut rng), rand_pt(&mut rng));
        let l = alg.multiply(&alg.multiply(&x, &a), &y);
        let r = alg.multiply(&x, &alg.multiply(&a, &y));
        assoc = assoc.max(rel(vdiff(&l, &r), linalg::max_abs(l.iter().copied())));
        let lhs = alg.star(&alg.multiply(&a, &x));
        let rhs = alg.multiply(&alg.star(&x), &alg.star(&a));
        anti = anti.max(rel(vdiff(&lhs, &rhs), linalg::max_abs(lhs.iter().copied())));
        invol = invol.max(vdiff(&alg.star(&alg.star(&a)), &a));
    }
    checks.push(CheckEntry::residual("associativity", assoc, tol));
    checks.push(CheckEntry::residual("involution-involutive", invol.max(res.involutive), tol));
    checks.push(CheckEntry::residual("involution-antimultiplicative", anti, tol));

    let mut iso: f64 = 0.0;
    for a in &points {
        let na = pair.norm.eval(a);
        let ns = pair.norm.eval(&alg.star(a));
        iso = iso.max((na - ns).abs() / na.max(1e-300));
    }
    checks.push(CheckEntry::residual("involution-isometric", iso, norm_tol));

    let mut worst_mult: f64 = 0.0;
    let mut bounded = true;
    let mut a0_values = Vec::with_capacity(points.len());
    for x in &points {
        let v = pair.a0_norm(x)?;
        bounded &= v.is_finite();
        a0_values.push(v);
    }
    checks.push(CheckEntry::flag("bounded-actions", bounded, ""));
    for (x, &x0) in points.iter().zip(&a0_values) {
        for _ in 0..2 {
            let a = rand_pt(&mut rng);
            let na = pair.norm.eval(&a);
            for side in [Side::Left, Side::Right] {
                let prod = pair.module_action(side, x, &a)?;
                let lhs = pair.norm.eval(&prod);
                worst_mult = worst_mult.max((lhs - x0 * na) / (x0 * na).max(1e-300));
            }
        }
    }
    checks.push(CheckEntry::residual("multiplier-bound", worst_mult.max(0.0), norm_tol));

    if let Some(e) = pair.unit() {
        checks.push(CheckEntry::residual("unit-law", res.unit.unwrap_or(0.0), tol));
        let ne = pair.norm.eval(e);
        checks.push(CheckEntry::residual("unit-norm", (ne - 1.0).abs(), norm_tol));
        let mut dom: f64 = 0.0;
        for (x, &x0) in points.iter().zip(&a0_values) {
            dom = dom.max((pair.norm.eval(x) - x0) / x0.max(1e-300));
        }
        checks.push(CheckEntry::residual("norm-below-multiplier-norm", dom.max(0.0), norm_tol));
    }
    for w in &pair.warnings {
        checks.push(CheckEntry::flag("unit-normalization", false, w.clone()).warning());
    }

    Ok(ValidationReport { label: pair.label.clone(), passed: all_passed(&checks), checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::Severity;
    use crate::linalg::{c64, real_vec, CMat};
    use proptest::prelude::*;

    fn pw(n: usize, norm: NormSpec) -> QuasiPair {
        QuasiPair::new(StarAlgebraModel::pointwise(n), norm, "pw").unwrap()
    }

    #[test]
    fn module_actions() {
        let p = pw(2, NormSpec::linf(2));
        let a = real_vec(&[2.0, -1.0]);
        assert_eq!(p.module_action(Side::Left, p.unit().unwrap(), &a).unwrap(), a);
        assert!(p.module_action(Side::Right, &a, &CVec::zeros(3)).is_err());
    }

    #[test]
    fn multiplier_norm_of_pointwise_is_sup() {
        for spec in [NormSpec::l1(3), NormSpec::l2(3), NormSpec::linf(3), NormSpec::p(3, 3.0).unwrap()] {
            let p = QuasiPair::new(StarAlgebraModel::pointwise(3), spec, "pw").unwrap();
            let x = CVec::from_vec(vec![c64(1.0, 1.0), c64(-3.0, 0.0), c64(0.0, 2.0)]);
            assert!((p.a0_norm(&x).unwrap() - 3.0).abs() < 1e-9);
            assert!((p.a0_norm(p.unit().unwrap()).unwrap() - 1.0).abs() < 1e-9);
            assert_eq!(p.a0_norm(&CVec::zeros(3)).unwrap(), 0.0);
        }
    }

    #[test]
    fn unit_normalization_warns() {
        let p = pw(2, NormSpec::l1(2));
        assert_eq!(p.warnings.len(), 1);
        assert!((p.norm.eval(p.unit().unwrap()) - 1.0).abs() < 1e-12);
        let report = validate_quasi_pair(&p, 4, 1e-12, 1).unwrap();
        assert!(report.passed);
        assert!(report.checks.iter().any(|c| c.name == "unit-normalization" && c.severity == Severity::Warning));
        let q = pw(2, NormSpec::linf(2));
        assert!(q.warnings.is_empty());
    }

    #[test]
    fn unitize_adds_l1_unit() {
        let mut alg = StarAlgebraModel::pointwise(2);
        alg = StarAlgebraModel::new(2, alg.structure().to_vec(), alg.involution().clone(), None).unwrap();
        let p = QuasiPair::new(alg, NormSpec::l1(2), "nu").unwrap();
        let u = p.unitize().unwrap();
        assert_eq!(u.dim(), 3);
        assert!((u.norm.eval(&real_vec(&[1.0, 1.0, 2.0])) - 4.0).abs() < 1e-15);
        assert!((u.norm.eval(&real_vec(&[0.0, 0.0, 1.0])) - 1.0).abs() < 1e-15);
        assert!((u.norm.eval(&real_vec(&[3.0, -1.0, 0.0])) - 4.0).abs() < 1e-15);
        assert!(matches!(u.unitize(), Err(Error::AlreadyUnital)));
        assert!(validate_quasi_pair(&u, 4, 1e-12, 2).unwrap().passed);
    }

    #[test]
    fn non_isometric_involution_fails() {
        let base = StarAlgebraModel::pointwise(2);
        let j = CMat::from_diagonal(&real_vec(&[2.0, 1.0]));
        let alg = StarAlgebraModel::new(2, base.structure().to_vec(), j, None).unwrap();
        let p = QuasiPair::new(alg, NormSpec::l2(2), "bad").unwrap();
        let report = validate_quasi_pair(&p, 4, 1e-12, 3).unwrap();
        assert!(!report.passed);
        let iso = report.checks.iter().find(|c| c.name == "involution-isometric").unwrap();
        assert!(!iso.passed);
    }

    #[test]
    fn matrix_algebra_with_trace_norm_validates() {
        // Hilbert–Schmidt norm in the matrix-unit basis, rescaled for the unit.
        let p = QuasiPair::new(StarAlgebraModel::matrix_units(2), NormSpec::l2(4), "m2").unwrap();
        let r = validate_quasi_pair(&p, 6, 1e-12, 4).unwrap();
        assert!(r.passed, "{:?}", r.checks);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn multiplier_bound_and_isometry(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let alg = crate::algebra::random_star_algebra(&mut rng, 5).unwrap();
            let n = alg.dim();
            // Conjugation by a monomial unitary keeps the Euclidean norm J-isometric.
            let p = QuasiPair::new(alg, NormSpec::l2(n), "rand").unwrap();
            let x = linalg::random_cvec(&mut rng, n);
            let a = linalg::random_cvec(&mut rng, n);
            let x0 = p.a0_norm(&x).unwrap();
            let ax = p.module_action(Side::Right, &x, &a).unwrap();
            prop_assert!(p.norm.eval(&ax) <= x0 * p.norm.eval(&a) * (1.0 + 1e-9) + 1e-12);
            let s = p.algebra.star(&a);
            prop_assert!((p.norm.eval(&s) - p.norm.eval(&a)).abs() < 1e-12 * (1.0 + p.norm.eval(&a)));
            prop_assert!(p.norm.eval(&x) <= x0 * (1.0 + 1e-9));
        }
    }
}
