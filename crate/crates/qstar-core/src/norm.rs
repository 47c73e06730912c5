//! Norms on complex coordinate spaces with access to their dual balls.
//!
//! Functionals pair with vectors bilinearly, `f(v) = Σ f_i v_i`. Every norm
//! exposes two oracles over its balls:
//!
//! * [`NormSpec::norming`] returns `f` with dual norm at most one and `f(v) = ‖v‖`;
//! * [`NormSpec::attainer`] returns `x` in the unit ball with `u(x) = ‖u‖_*`.
//!
//! These drive the alternating maximizations used for operator norms and
//! the injective cross-norm.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::cross::{self, CrossNorm, TensorNorm};
use crate::error::{Error, Result};
use crate::linalg::{self, bilinear, c64, phase, CMat, CVec, C64, ZERO};

/// A norm supplied by the caller.
pub trait CustomNorm: Send + Sync + core::fmt::Debug {
    fn name(&self) -> String;
    fn eval(&self, v: &CVec) -> f64;
    fn norming(&self, _v: &CVec) -> Option<CVec> {
        None
    }
    fn attainer(&self, _u: &CVec) -> Option<CVec> {
        None
    }
    fn dual(&self) -> Option<NormSpec> {
        None
    }
}

#[derive(Clone, Debug)]
pub struct GramData {
    pub gram: CMat,
    pub inverse: CMat,
    pub sqrt: CMat,
    pub inv_sqrt: CMat,
}

#[derive(Clone, Debug)]
pub enum NormKind {
    /// `(Σ |s_i v_i|^p)^{1/p}`, or `max_i s_i |v_i|` for `p = ∞`.
    ///
    /// `weights` records the user-facing measure weights: for finite `p` the
    /// scales are `w_i^{1/p}`, for `p = ∞` the weights act as multipliers.
    Lp {
        p: f64,
        weights: Option<Vec<f64>>,
        scales: Vec<f64>,
    },
    Inner(Arc<GramData>),
    /// `‖(a, λ)‖ = ‖a‖ + |λ|`, or `max(‖a‖, |λ|)` when `max` is set.
    Unitized {
        base: Box<NormSpec>,
        max: bool,
    },
    Scaled {
        base: Box<NormSpec>,
        factor: f64,
    },
    Tensor(Arc<TensorNorm>),
    Custom(Arc<dyn CustomNorm>),
}

#[derive(Clone, Debug)]
pub struct NormSpec {
    dim: usize,
    kind: NormKind,
}

pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn lp_value(p: f64, mags: impl Iterator<Item = f64> + Clone) -> f64 {
    let top = mags.clone().fold(0.0, f64::max);
    if top == 0.0 || p.is_infinite() {
        return top;
    }
    if p == 1.0 {
        return mags.sum();
    }
    if p == 2.0 {
        return top * libm::sqrt(mags.map(|m| (m / top) * (m / top)).sum::<f64>());
    }
    top * libm::pow(mags.map(|m| libm::pow(m / top, p)).sum::<f64>(), 1.0 / p)
}

/// `h` with `‖h‖_q ≤ 1` and `Σ h_i u_i = ‖u‖_p`.
fn lp_norming(p: f64, u: &[C64]) -> Vec<C64> {
    let n = u.len();
    if p == 1.0 {
        return u.iter().map(|z| phase(*z).conj()).collect();
    }
    if p.is_infinite() {
        let mut out = vec![ZERO; n];
        let mut best = 0;
        for (i, z) in u.iter().enumerate() {
            if z.norm() > u[best].norm() {
                best = i;
            }
        }
        if n > 0 {
            out[best] = phase(u[best]).conj();
        }
        return out;
    }
    let norm = lp_value(p, u.iter().map(|z| z.norm()));
    if norm == 0.0 {
        return vec![ZERO; n];
    }
    u.iter()
        .map(|z| {
            let r = z.norm();
            if r == 0.0 {
                ZERO
            } else {
                phase(*z).conj() * libm::pow(r / norm, p - 1.0)
            }
        })
        .collect()
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        Err(Error::InvalidNorm(format!("exponent p = {p} must lie in [1, inf]")))
    } else {
        Ok(())
    }
}

fn align(mut f: CVec, v: &CVec) -> CVec {
    let val = bilinear(&f, v);
    if val.norm() > 0.0 {
        f *= phase(val).conj();
    }
    f
}

impl NormSpec {
    pub fn p(dim: usize, p: f64) -> Result<Self> {
        check_p(p)?;
        Ok(NormSpec { dim, kind: NormKind::Lp { p, weights: None, scales: vec![1.0; dim] } })
    }

    pub fn l1(dim: usize) -> Self {
        Self::p(dim, 1.0).expect("p = 1 is valid")
    }

    pub fn l2(dim: usize) -> Self {
        Self::p(dim, 2.0).expect("p = 2 is valid")
    }

    pub fn linf(dim: usize) -> Self {
        Self::p(dim, f64::INFINITY).expect("p = inf is valid")
    }

    pub fn weighted(p: f64, weights: Vec<f64>) -> Result<Self> {
        check_p(p)?;
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidNorm("weights must be positive and finite".into()));
        }
        let scales = if p.is_infinite() { weights.clone() } else { weights.iter().map(|w| libm::pow(*w, 1.0 / p)).collect() };
        Ok(NormSpec { dim: weights.len(), kind: NormKind::Lp { p, weights: Some(weights), scales } })
    }

    pub fn inner_product(gram: CMat) -> Result<Self> {
        let n = gram.nrows();
        if gram.ncols() != n {
            return Err(Error::InvalidNorm("Gram matrix must be square".into()));
        }
        let scale = linalg::frobenius(&gram).max(1.0);
        if linalg::hermitian_residual(&gram) > 1e-10 * scale {
            return Err(Error::InvalidNorm("Gram matrix must be Hermitian".into()));
        }
        let gram = linalg::hermitian_part(&gram);
        let eig = linalg::herm_eigen(&gram);
        if n > 0 && eig.min() <= 1e-14 * eig.max_abs() {
            return Err(Error::InvalidNorm("Gram matrix must be positive definite".into()));
        }
        let data = GramData {
            inverse: eig.reconstruct(|l| 1.0 / l),
            sqrt: eig.reconstruct(libm::sqrt),
            inv_sqrt: eig.reconstruct(|l| 1.0 / libm::sqrt(l)),
            gram,
        };
        Ok(NormSpec { dim: n, kind: NormKind::Inner(Arc::new(data)) })
    }

    /// Norm of the unitization: `‖(a, λ)‖ = ‖a‖ + |λ|` on `dim + 1` coordinates.
    pub fn unitized(base: NormSpec) -> Self {
        NormSpec { dim: base.dim + 1, kind: NormKind::Unitized { base: Box::new(base), max: false } }
    }

    pub fn tensor(left: NormSpec, right: NormSpec, kind: CrossNorm) -> Result<Self> {
        let dim = left.dim * right.dim;
        let t = TensorNorm::new(left, right, kind)?;
        Ok(NormSpec { dim, kind: NormKind::Tensor(Arc::new(t)) })
    }

    pub fn custom(dim: usize, norm: Arc<dyn CustomNorm>) -> Self {
        NormSpec { dim, kind: NormKind::Custom(norm) }
    }

    /// `‖s ∘ v‖_p` with explicit scales.
    pub fn from_scales(p: f64, scales: Vec<f64>) -> Result<Self> {
        check_p(p)?;
        if scales.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidNorm("scales must be positive and finite".into()));
        }
        Ok(NormSpec { dim: scales.len(), kind: NormKind::Lp { p, weights: None, scales } })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    pub fn tensor_parts(&self) -> Option<&TensorNorm> {
        match &self.kind {
            NormKind::Tensor(t) => Some(t),
            _ => None,
        }
    }

    /// `c · ‖·‖`, folded into the parameters where possible.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidArgument(format!("scale factor {c} must be positive")));
        }
        let kind = match &self.kind {
            NormKind::Lp { p, weights, scales } => {
                let scales: Vec<f64> = scales.iter().map(|s| s * c).collect();
                let factor = if p.is_infinite() { c } else { libm::pow(c, *p) };
                let weights = Some(match weights {
                    Some(w) => w.iter().map(|w| w * factor).collect(),
                    None => vec![factor; self.dim],
                });
                NormKind::Lp { p: *p, weights, scales }
            }
            NormKind::Inner(g) => return NormSpec::inner_product(g.gram.scale(c * c)),
            NormKind::Scaled { base, factor } => NormKind::Scaled { base: base.clone(), factor: factor * c },
            _ => NormKind::Scaled { base: Box::new(self.clone()), factor: c },
        };
        Ok(NormSpec { dim: self.dim, kind })
    }

    pub fn eval(&self, v: &CVec) -> f64 {
        debug_assert_eq!(v.len(), self.dim, "norm dimension mismatch");
        match &self.kind {
            NormKind::Lp { p, scales, .. } => lp_value(*p, v.iter().zip(scales.iter()).map(|(z, s)| s * z.norm())),
            NormKind::Inner(g) => libm::sqrt(v.dotc(&(&g.gram * v)).re.max(0.0)),
            NormKind::Unitized { base, max } => {
                let n = base.dim;
                let a = base.eval(&v.rows(0, n).into_owned());
                let l = v[n].norm();
                if *max {
                    a.max(l)
                } else {
                    a + l
                }
            }
            NormKind::Scaled { base, factor } => factor * base.eval(v),
            NormKind::Tensor(t) => cross::tensor_eval(t, v),
            NormKind::Custom(c) => c.eval(v),
        }
    }

    /// Dual norm value `sup_{‖x‖ ≤ 1} |u(x)|`.
    pub fn dual_eval(&self, u: &CVec) -> Result<f64> {
        match &self.kind {
            NormKind::Lp { p, scales, .. } => {
                let q = conjugate_exponent(*p);
                Ok(lp_value(q, u.iter().zip(scales.iter()).map(|(z, s)| z.norm() / s)))
            }
            NormKind::Inner(g) => {
                let w = &g.inverse * linalg::conj_vec(u);
                Ok(libm::sqrt(bilinear(u, &w).re.max(0.0)))
            }
            NormKind::Scaled { base, factor } => Ok(base.dual_eval(u)? / factor),
            _ => Ok(bilinear(u, &self.attainer(u)?).norm()),
        }
    }

    pub fn norming(&self, v: &CVec) -> Result<CVec> {
        let f = match &self.kind {
            NormKind::Lp { p, scales, .. } => {
                let u: Vec<C64> = v.iter().zip(scales.iter()).map(|(z, s)| z * *s).collect();
                let h = lp_norming(*p, &u);
                CVec::from_iterator(self.dim, h.iter().zip(scales.iter()).map(|(z, s)| z * *s))
            }
            NormKind::Inner(g) => {
                let gv = &g.gram * v;
                let norm = libm::sqrt(v.dotc(&gv).re.max(0.0));
                if norm == 0.0 {
                    return Ok(CVec::zeros(self.dim));
                }
                linalg::conj_vec(&gv).unscale(norm)
            }
            NormKind::Unitized { base, max } => {
                let n = base.dim;
                let a = v.rows(0, n).into_owned();
                let mut f = CVec::zeros(self.dim);
                let na = base.eval(&a);
                let nl = v[n].norm();
                if !*max || na >= nl {
                    f.rows_mut(0, n).copy_from(&base.norming(&a)?);
                }
                if !*max || nl > na {
                    f[n] = phase(v[n]).conj();
                }
                f
            }
            NormKind::Scaled { base, factor } => base.norming(v)?.scale(*factor),
            NormKind::Tensor(t) => cross::tensor_norming(t, v)?,
            NormKind::Custom(c) => c.norming(v).ok_or_else(|| Error::Unsupported(format!("norm {} has no norming oracle", c.name())))?,
        };
        Ok(align(f, v))
    }

    pub fn attainer(&self, u: &CVec) -> Result<CVec> {
        let x = match &self.kind {
            NormKind::Lp { p, scales, .. } => {
                let q = conjugate_exponent(*p);
                let w: Vec<C64> = u.iter().zip(scales.iter()).map(|(z, s)| z / *s).collect();
                let t = lp_norming(q, &w);
                CVec::from_iterator(self.dim, t.iter().zip(scales.iter()).map(|(z, s)| z / *s))
            }
            NormKind::Inner(g) => {
                let w = &g.inverse * linalg::conj_vec(u);
                let d = libm::sqrt(bilinear(u, &w).re.max(0.0));
                if d == 0.0 {
                    return Ok(CVec::zeros(self.dim));
                }
                w.unscale(d)
            }
            NormKind::Unitized { base, max } => {
                let n = base.dim;
                let ua = u.rows(0, n).into_owned();
                let mu = u[n];
                let mut x = CVec::zeros(self.dim);
                if *max {
                    x.rows_mut(0, n).copy_from(&base.attainer(&ua)?);
                    x[n] = phase(mu).conj();
                } else if base.dual_eval(&ua)? >= mu.norm() {
                    x.rows_mut(0, n).copy_from(&base.attainer(&ua)?);
                } else {
                    x[n] = phase(mu).conj();
                }
                x
            }
            NormKind::Scaled { base, factor } => base.attainer(u)?.unscale(*factor),
            NormKind::Tensor(t) => cross::tensor_attainer(t, u)?,
            NormKind::Custom(c) => c.attainer(u).ok_or_else(|| Error::Unsupported(format!("norm {} has no attainer oracle", c.name())))?,
        };
        Ok(align(x, u))
    }

    pub fn dual(&self) -> Result<NormSpec> {
        let kind = match &self.kind {
            NormKind::Lp { p, weights, scales } => {
                let q = conjugate_exponent(*p);
                let scales: Vec<f64> = scales.iter().map(|s| 1.0 / s).collect();
                let weights =
                    weights.as_ref().map(
                        |_| {
                            if q.is_infinite() {
                                scales.clone()
                            } else {
                                scales.iter().map(|s| libm::pow(*s, q)).collect()
                            }
                        },
                    );
                NormKind::Lp { p: q, weights, scales }
            }
            NormKind::Inner(g) => return NormSpec::inner_product(g.inverse.map(|z| z.conj())),
            NormKind::Unitized { base, max } => NormKind::Unitized { base: Box::new(base.dual()?), max: !*max },
            NormKind::Scaled { base, factor } => NormKind::Scaled { base: Box::new(base.dual()?), factor: 1.0 / factor },
            NormKind::Tensor(t) => {
                let (l, r) = t.duals()?;
                return NormSpec::tensor(l.clone(), r.clone(), t.kind.dual());
            }
            NormKind::Custom(c) => return c.dual().ok_or_else(|| Error::Unsupported(format!("norm {} has no registered dual", c.name()))),
        };
        Ok(NormSpec { dim: self.dim, kind })
    }

    /// `(p, s)` when the norm is `‖s ∘ v‖_p`, including cross-norms that reduce to one.
    pub fn lp_form(&self) -> Option<(f64, Vec<f64>)> {
        match &self.kind {
            NormKind::Lp { p, scales, .. } => Some((*p, scales.clone())),
            NormKind::Scaled { base, factor } => base.lp_form().map(|(p, s)| (p, s.iter().map(|x| x * factor).collect())),
            NormKind::Tensor(t) => t.flat().and_then(|f| f.lp_form()),
            _ => None,
        }
    }

    pub fn l1_scales(&self) -> Option<Vec<f64>> {
        self.lp_form().filter(|(p, _)| *p == 1.0).map(|(_, s)| s)
    }

    pub fn linf_multipliers(&self) -> Option<Vec<f64>> {
        self.lp_form().filter(|(p, _)| p.is_infinite()).map(|(_, s)| s)
    }

    /// Gram matrix when the norm is induced by an inner product.
    pub fn gram(&self) -> Option<CMat> {
        match &self.kind {
            NormKind::Inner(g) => Some(g.gram.clone()),
            NormKind::Scaled { base, factor } => base.gram().map(|g| g.scale(factor * factor)),
            NormKind::Tensor(t) => t.flat().and_then(|f| f.gram()),
            _ => match self.lp_form() {
                Some((p, s)) if p == 2.0 => Some(CMat::from_diagonal(&CVec::from_iterator(s.len(), s.iter().map(|x| c64(x * x, 0.0))))),
                _ => None,
            },
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            NormKind::Lp { p, weights, .. } => {
                let base = if *p == 1.0 {
                    String::from("l1")
                } else if *p == 2.0 {
                    String::from("l2")
                } else if p.is_infinite() {
                    String::from("linf")
                } else {
                    format!("l{p}")
                };
                if weights.is_some() {
                    format!("weighted-{base}")
                } else {
                    base
                }
            }
            NormKind::Inner(_) => String::from("inner-product"),
            NormKind::Unitized { base, max } => {
                format!("{}({})", if *max { "unitized-max" } else { "unitized" }, base.describe())
            }
            NormKind::Scaled { base, factor } => format!("{factor}*{}", base.describe()),
            NormKind::Tensor(t) => format!("{}({},{})", t.kind.tag(), t.left.describe(), t.right.describe()),
            NormKind::Custom(c) => c.name(),
        }
    }
}

/// `(p, s)` of the flat norm a cross-norm reduces to: projective of ℓ1-type
/// factors, injective of ℓ∞-type factors, Hilbert of weighted ℓ2 factors.
pub(crate) fn tensor_lp_form(left: &NormSpec, right: &NormSpec, kind: CrossNorm) -> Option<(f64, Vec<f64>)> {
    let (pl, sl) = left.lp_form()?;
    let (pr, sr) = right.lp_form()?;
    let target = match kind {
        CrossNorm::Projective => 1.0,
        CrossNorm::Injective => f64::INFINITY,
        CrossNorm::Hilbert => 2.0,
    };
    let fits = |p: f64, dim: usize| p == target || dim == 1;
    if fits(pl, left.dim()) && fits(pr, right.dim()) {
        let p = if pl == target || pr == target { target } else { pl };
        Some((p, linalg::kron_real(&sl, &sr)))
    } else {
        None
    }
}

/// Checked evaluation.
pub fn eval_norm(spec: &NormSpec, v: &CVec) -> Result<f64> {
    crate::error::check_dim(spec.dim(), v.len())?;
    Ok(spec.eval(v))
}

pub fn dual_norm(spec: &NormSpec) -> Result<NormSpec> {
    spec.dual()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, random_cvec, real_vec};
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(NormSpec::l1(2).eval(&real_vec(&[3.0, -4.0])), 7.0);
        let v = CVec::from_vec(vec![c64(3.0, 0.0), c64(0.0, 4.0)]);
        assert!(close(NormSpec::l2(2).eval(&v), 5.0, 1e-15));
        let g = NormSpec::inner_product(CMat::identity(2, 2)).unwrap();
        assert!(close(g.eval(&real_vec(&[1.0, 1.0])), libm::sqrt(2.0), 1e-15));
        let lp = NormSpec::weighted(2.0, vec![0.25; 4]).unwrap();
        assert!(close(lp.eval(&real_vec(&[2.0, 0.0, 0.0, 0.0])), 1.0, 1e-15));
    }

    #[test]
    fn duals_of_classical_norms() {
        let d = NormSpec::p(3, 4.0 / 3.0).unwrap().dual().unwrap();
        match d.kind() {
            NormKind::Lp { p, .. } => assert!(close(*p, 4.0, 1e-12)),
            _ => panic!("dual of an lp norm is an lp norm"),
        }
        match NormSpec::l1(2).dual().unwrap().kind() {
            NormKind::Lp { p, .. } => assert!(p.is_infinite()),
            _ => panic!(),
        }
        let g = NormSpec::inner_product(CMat::identity(2, 2)).unwrap().dual().unwrap();
        assert!(linalg::max_abs_diff(&g.gram().unwrap(), &CMat::identity(2, 2)) < 1e-15);
    }

    #[test]
    fn holder_pair_attains_equality() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let spec = NormSpec::p(3, 4.0 / 3.0).unwrap();
        let dual = spec.dual().unwrap();
        let v = random_cvec(&mut rng, 3);
        let f = spec.norming(&v).unwrap();
        assert!(close(bilinear(&f, &v).re, spec.eval(&v), 1e-12));
        assert!(dual.eval(&f) <= 1.0 + 1e-12);
        for _ in 0..50 {
            let u = random_cvec(&mut rng, 3);
            let w = random_cvec(&mut rng, 3);
            assert!(bilinear(&u, &w).norm() <= spec.eval(&u) * dual.eval(&w) + 1e-12);
        }
    }

    #[test]
    fn scaling_folds_into_weights() {
        let s = NormSpec::l2(2).scaled(0.5).unwrap();
        assert!(close(s.eval(&real_vec(&[3.0, 4.0])), 2.5, 1e-15));
        let u = NormSpec::unitized(NormSpec::l1(2));
        assert!(close(u.eval(&real_vec(&[1.0, 1.0, 2.0])), 4.0, 1e-15));
    }

    fn specs() -> Vec<NormSpec> {
        let gram = CMat::from_row_slice(
            3,
            3,
            &[c64(2.0, 0.0), c64(0.5, 0.5), ZERO, c64(0.5, -0.5), c64(1.0, 0.0), c64(0.1, 0.0), ZERO, c64(0.1, 0.0), c64(3.0, 0.0)],
        );
        vec![
            NormSpec::l1(3),
            NormSpec::l2(3),
            NormSpec::linf(3),
            NormSpec::p(3, 3.0).unwrap(),
            NormSpec::weighted(1.5, vec![0.2, 1.0, 3.0]).unwrap(),
            NormSpec::weighted(f64::INFINITY, vec![0.2, 1.0, 3.0]).unwrap(),
            NormSpec::inner_product(gram).unwrap(),
            NormSpec::unitized(NormSpec::l2(2)),
            NormSpec::l1(3).scaled(2.0).unwrap(),
        ]
    }

    fn cvec3() -> impl Strategy<Value = CVec> {
        proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 3)
            .prop_map(|v| CVec::from_iterator(3, v.into_iter().map(|(a, b)| c64(a, b))))
    }

    proptest! {
        #[test]
        fn homogeneity_and_triangle(u in cvec3(), v in cvec3(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let a = c64(re, im);
            for s in specs() {
                let lhs = s.eval(&u.scale(1.0).map(|z| z * a));
                prop_assert!(close(lhs, a.norm() * s.eval(&u), 1e-10));
                prop_assert!(s.eval(&(&u + &v)) <= s.eval(&u) + s.eval(&v) + 1e-10);
            }
        }

        #[test]
        fn oracles_are_feasible_and_tight(u in cvec3()) {
            for s in specs() {
                let d = s.dual().unwrap();
                let f = s.norming(&u).unwrap();
                prop_assert!(d.eval(&f) <= 1.0 + 1e-9);
                prop_assert!(close(bilinear(&f, &u).re, s.eval(&u), 1e-9));
                let x = s.attainer(&u).unwrap();
                prop_assert!(s.eval(&x) <= 1.0 + 1e-9);
                prop_assert!(close(bilinear(&u, &x).re, d.eval(&u), 1e-9));
                prop_assert!(close(s.dual_eval(&u).unwrap(), d.eval(&u), 1e-9));
            }
        }
    }

    #[test]
    fn positive_definiteness_on_basis() {
        for s in specs() {
            for i in 0..3 {
                assert!(s.eval(&linalg::basis(3, i)) > 0.0);
            }
            assert_eq!(s.eval(&CVec::zeros(3)), 0.0);
        }
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(NormSpec::p(2, 0.5).is_err());
        assert!(NormSpec::weighted(2.0, vec![1.0, 0.0]).is_err());
        assert!(NormSpec::inner_product(CMat::from_diagonal(&real_vec(&[1.0, -1.0]))).is_err());
        assert!(matches!(eval_norm(&NormSpec::l1(2), &CVec::zeros(3)), Err(Error::DimensionMismatch { .. })));
    }
}
