//! Injective (λ), projective (γ) and Hilbert (h) cross-norms.
//!
//! A tensor `z = Σ x_k ⊗ y_k` is stored through its coefficient matrix
//! `M = Σ x_k y_kᵀ`, flattened row-major when it is used as a vector.
//!
//! * `λ(M) = sup |fᵀ M g|` over the dual unit balls, computed by alternating
//!   maximization (closed forms when a factor is ℓ∞-type or both are Hilbert).
//! * `γ(M) = inf Σ ‖x_k‖ ‖y_k‖`, bracketed by a decomposition (upper) and a
//!   bilinear form `B` with `λ_*(B) ≤ 1` (lower, `|Σ B_ij M_ij|`).
//! * `h(M)² = vec(M)ᴴ (G₁ ⊗ G₂) vec(M)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, bilinear, phase, CMat, CVec, C64};
use crate::norm::NormSpec;
use crate::operator::{self, OperatorMatrix, OperatorNormResult, OperatorOptions, DEFAULT_SEED};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CrossNorm {
    #[serde(rename = "lambda")]
    Injective,
    #[serde(rename = "gamma")]
    Projective,
    #[serde(rename = "h")]
    Hilbert,
}

impl CrossNorm {
    pub const ALL: [CrossNorm; 3] = [CrossNorm::Injective, CrossNorm::Projective, CrossNorm::Hilbert];

    pub fn tag(self) -> &'static str {
        match self {
            CrossNorm::Injective => "lambda",
            CrossNorm::Projective => "gamma",
            CrossNorm::Hilbert => "h",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "lambda" | "injective" => Some(CrossNorm::Injective),
            "gamma" | "projective" => Some(CrossNorm::Projective),
            "h" | "hilbert" => Some(CrossNorm::Hilbert),
            _ => None,
        }
    }

    /// The cross-norm whose dual is this one on the dual factors.
    pub fn dual(self) -> Self {
        match self {
            CrossNorm::Injective => CrossNorm::Projective,
            CrossNorm::Projective => CrossNorm::Injective,
            CrossNorm::Hilbert => CrossNorm::Hilbert,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CrossOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Random-search steps per start in the projective decomposition search.
    pub search_iters: usize,
}

impl Default for CrossOptions {
    fn default() -> Self {
        CrossOptions { restarts: 32, seed: DEFAULT_SEED, max_iter: 500, search_iters: 400 }
    }
}

/// Norm on `n·m` tensor coordinates built from two factor norms.
#[derive(Clone, Debug)]
pub struct TensorNorm {
    pub left: NormSpec,
    pub right: NormSpec,
    pub kind: CrossNorm,
    flat: Option<NormSpec>,
}

impl TensorNorm {
    pub fn new(left: NormSpec, right: NormSpec, kind: CrossNorm) -> Result<Self> {
        let mut t = TensorNorm { left, right, kind, flat: None };
        if kind == CrossNorm::Hilbert {
            let (g1, g2) = match (t.left.gram(), t.right.gram()) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::Unsupported(format!(
                        "Hilbert cross-norm needs inner-product factors, got {} and {}",
                        t.left.describe(),
                        t.right.describe()
                    )))
                }
            };
            t.flat = Some(NormSpec::inner_product(linalg::kron(&g1, &g2))?);
        } else if let Some((p, s)) = crate::norm::tensor_lp_form(&t.left, &t.right, kind) {
            t.flat = Some(NormSpec::from_scales(p, s)?);
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.left.dim()
    }

    pub fn m(&self) -> usize {
        self.right.dim()
    }

    /// Equivalent flat norm when the cross-norm reduces to a weighted ℓp or Gram norm.
    pub fn flat(&self) -> Option<&NormSpec> {
        self.flat.as_ref()
    }

    pub fn duals(&self) -> Result<(NormSpec, NormSpec)> {
        Ok((self.left.dual()?, self.right.dual()?))
    }

    pub fn element(&self, v: &CVec) -> Result<TensorElement> {
        TensorElement::from_flat(v, self.left.clone(), self.right.clone())
    }
}

#[derive(Clone, Debug)]
pub struct TensorElement {
    pub matrix: CMat,
    pub left: NormSpec,
    pub right: NormSpec,
}

impl TensorElement {
    pub fn new(matrix: CMat, left: NormSpec, right: NormSpec) -> Result<Self> {
        check_dim(left.dim(), matrix.nrows())?;
        check_dim(right.dim(), matrix.ncols())?;
        Ok(TensorElement { matrix, left, right })
    }

    pub fn elementary(x: &CVec, y: &CVec, left: NormSpec, right: NormSpec) -> Result<Self> {
        Self::new(x * y.transpose(), left, right)
    }

    /// Sum of elementary tensors `Σ x_k ⊗ y_k`.
    pub fn from_terms(terms: &[(CVec, CVec)], left: NormSpec, right: NormSpec) -> Result<Self> {
        let mut m = CMat::zeros(left.dim(), right.dim());
        for (x, y) in terms {
            check_dim(left.dim(), x.len())?;
            check_dim(right.dim(), y.len())?;
            m += x * y.transpose();
        }
        Self::new(m, left, right)
    }

    pub fn from_flat(v: &CVec, left: NormSpec, right: NormSpec) -> Result<Self> {
        check_dim(left.dim() * right.dim(), v.len())?;
        let m = linalg::reshape(v, left.dim(), right.dim());
        Self::new(m, left, right)
    }

    pub fn flatten(&self) -> CVec {
        linalg::flatten(&self.matrix)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Maximizing pair of the dual balls.
    Injective {
        #[serde(serialize_with = "crate::ser::cvec")]
        f: CVec,
        #[serde(serialize_with = "crate::ser::cvec")]
        g: CVec,
    },
    /// Decomposition attaining the upper bound and dual form attaining the lower one.
    Projective {
        #[serde(serialize_with = "crate::ser::cvec_pairs")]
        decomposition: Vec<(CVec, CVec)>,
        #[serde(serialize_with = "crate::ser::cmat")]
        dual_form: CMat,
    },
    Hilbert,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossNormResult {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    pub exact: bool,
    pub converged: bool,
    pub method: String,
    pub restarts: usize,
    pub certificate: Certificate,
}

impl CrossNormResult {
    fn zero(n: usize, m: usize, kind: CrossNorm) -> Self {
        let certificate = match kind {
            CrossNorm::Injective => Certificate::Injective { f: CVec::zeros(n), g: CVec::zeros(m) },
            CrossNorm::Projective => Certificate::Projective { decomposition: Vec::new(), dual_form: CMat::zeros(n, m) },
            CrossNorm::Hilbert => Certificate::Hilbert,
        };
        CrossNormResult {
            value: 0.0,
            lower: 0.0,
            upper: 0.0,
            gap: 0.0,
            exact: true,
            converged: true,
            method: "zero".into(),
            restarts: 0,
            certificate,
        }
    }

    fn transposed(mut self) -> Self {
        self.certificate = match self.certificate {
            Certificate::Injective { f, g } => Certificate::Injective { f: g, g: f },
            Certificate::Projective { decomposition, dual_form } => Certificate::Projective {
                decomposition: decomposition.into_iter().map(|(x, y)| (y, x)).collect(),
                dual_form: dual_form.transpose(),
            },
            Certificate::Hilbert => Certificate::Hilbert,
        };
        self
    }
}

fn is_zero(m: &CMat) -> bool {
    m.iter().all(|z| z.norm() == 0.0)
}

fn row(m: &CMat, i: usize) -> CVec {
    m.row(i).transpose()
}

fn col(m: &CMat, j: usize) -> CVec {
    m.column(j).into_owned()
}

fn pair_value(f: &CVec, m: &CMat, g: &CVec) -> f64 {
    bilinear(f, &(m * g)).norm()
}

/// `Σ ‖x_k‖ ‖y_k‖` for the row, column and singular-value decompositions.
fn simple_decompositions(m: &CMat) -> Vec<Vec<(CVec, CVec)>> {
    let (n, k) = m.shape();
    let rows = (0..n).map(|i| (linalg::basis(n, i), row(m, i))).collect();
    let cols = (0..k).map(|j| (col(m, j), linalg::basis(k, j))).collect();
    let dec = linalg::svd(m);
    let svd = (0..dec.sigma.len()).map(|r| (dec.left(r).scale(dec.sigma[r]), linalg::conj_vec(&dec.right(r)))).collect();
    vec![rows, cols, svd]
}

fn decomposition_cost(terms: &[(CVec, CVec)], left: &NormSpec, right: &NormSpec) -> f64 {
    terms.iter().map(|(x, y)| left.eval(x) * right.eval(y)).sum()
}

pub fn injective_norm(z: &TensorElement) -> Result<CrossNormResult> {
    injective_norm_with(z, &CrossOptions::default())
}

pub fn injective_norm_with(z: &TensorElement, opts: &CrossOptions) -> Result<CrossNormResult> {
    injective_impl(&z.matrix, &z.left, &z.right, opts)
}

fn injective_exact(m: &CMat, left: &NormSpec, right: &NormSpec) -> Result<Option<(f64, CVec, CVec, &'static str)>> {
    let (n, k) = m.shape();
    if let Some(w) = right.linf_multipliers() {
        let mut best = (f64::NEG_INFINITY, 0);
        for j in 0..k {
            let v = w[j] * left.eval(&col(m, j));
            if v > best.0 {
                best = (v, j);
            }
        }
        let j = best.1;
        let f = left.norming(&col(m, j))?;
        let g = linalg::basis(k, j).scale(w[j]);
        return Ok(Some((pair_value(&f, m, &g), f, g, "column-extreme-points")));
    }
    if let Some(w) = left.linf_multipliers() {
        let mut best = (f64::NEG_INFINITY, 0);
        for i in 0..n {
            let v = w[i] * right.eval(&row(m, i));
            if v > best.0 {
                best = (v, i);
            }
        }
        let i = best.1;
        let f = linalg::basis(n, i).scale(w[i]);
        let g = right.norming(&row(m, i))?;
        return Ok(Some((pair_value(&f, m, &g), f, g, "row-extreme-points")));
    }
    if let (Some(g1), Some(g2)) = (left.gram(), right.gram()) {
        let a = linalg::pd_power(&g1, 0.5);
        let c_conj = linalg::pd_power(&g2, 0.5).map(|z| z.conj());
        let dec = linalg::svd(&(a * m * &c_conj));
        let g = c_conj * dec.right(0);
        let f = left.norming(&(m * &g))?;
        return Ok(Some((dec.sigma[0], f, g, "gram-spectral")));
    }
    Ok(None)
}

/// Alternating ascent from `g0`: returns `(|fᵀMg|, f, g)`.
fn bilinear_ascent(m: &CMat, left: &NormSpec, right: &NormSpec, g0: &CVec, max_iter: usize) -> Result<(f64, CVec, CVec)> {
    let scale = right.dual().map(|d| d.eval(g0)).or(Ok::<f64, Error>(1.0))?;
    let mut g = if scale > 0.0 { g0.unscale(scale) } else { g0.clone() };
    let mt = m.transpose();
    let mut f = left.norming(&(m * &g))?;
    let mut val = pair_value(&f, m, &g);
    for _ in 0..max_iter {
        let g_next = right.norming(&(&mt * &f))?;
        let f_next = left.norming(&(m * &g_next))?;
        let v = pair_value(&f_next, m, &g_next);
        if v <= val * (1.0 + 1e-13) {
            if v > val {
                f = f_next;
                g = g_next;
                val = v;
            }
            break;
        }
        f = f_next;
        g = g_next;
        val = v;
    }
    Ok((val, f, g))
}

fn sign_vectors(scales: &[f64]) -> Vec<CVec> {
    let k = scales.len();
    if k == 0 || k > 12 {
        return Vec::new();
    }
    (0..1usize << (k - 1))
        .map(|mask| {
            CVec::from_fn(k, |j, _| {
                let s = if j > 0 && (mask >> (j - 1)) & 1 == 1 { -1.0 } else { 1.0 };
                linalg::c64(s * scales[j], 0.0)
            })
        })
        .collect()
}

fn injective_impl(m: &CMat, left: &NormSpec, right: &NormSpec, opts: &CrossOptions) -> Result<CrossNormResult> {
    check_dim(left.dim(), m.nrows())?;
    check_dim(right.dim(), m.ncols())?;
    let (n, k) = m.shape();
    if is_zero(m) {
        return Ok(CrossNormResult::zero(n, k, CrossNorm::Injective));
    }
    let upper = simple_decompositions(m).iter().map(|d| decomposition_cost(d, left, right)).fold(f64::INFINITY, f64::min);
    if let Some((value, f, g, method)) = injective_exact(m, left, right)? {
        return Ok(CrossNormResult {
            value,
            lower: value,
            upper: value,
            gap: 0.0,
            exact: true,
            converged: true,
            method: method.into(),
            restarts: 0,
            certificate: Certificate::Injective { f, g },
        });
    }

    let mut starts: Vec<CVec> = Vec::new();
    let dec = linalg::svd(m);
    starts.extend((0..dec.sigma.len()).map(|r| dec.right(r)));
    starts.extend((0..k).map(|j| linalg::basis(k, j)));
    if let Some(s) = right.l1_scales() {
        starts.extend(sign_vectors(&s));
    } else if let Some(s) = left.l1_scales() {
        let mt = m.transpose();
        for f0 in sign_vectors(&s) {
            starts.push(right.norming(&(&mt * f0))?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    starts.extend((0..opts.restarts).map(|_| linalg::random_cvec(&mut rng, k)));

    let mut values = Vec::with_capacity(starts.len());
    let mut best: Option<(f64, CVec, CVec)> = None;
    for g0 in &starts {
        let (v, f, g) = bilinear_ascent(m, left, right, g0, opts.max_iter)?;
        values.push(v);
        if best.as_ref().is_none_or(|b| v > b.0) {
            best = Some((v, f, g));
        }
    }
    let (lower, f, g) = best.expect("at least one start");
    let upper = upper.max(lower);
    let agree = values.iter().filter(|v| lower - **v <= 1e-9 * lower).count();
    let gap = upper - lower;
    Ok(CrossNormResult {
        value: lower,
        lower,
        upper,
        gap,
        exact: gap <= 1e-9 * upper,
        converged: agree >= 2 || gap <= 1e-9 * upper,
        method: "alternating-ascent".into(),
        restarts: starts.len(),
        certificate: Certificate::Injective { f, g },
    })
}

pub fn projective_norm(z: &TensorElement) -> Result<CrossNormResult> {
    projective_norm_with(z, &CrossOptions::default())
}

pub fn projective_norm_with(z: &TensorElement, opts: &CrossOptions) -> Result<CrossNormResult> {
    projective_impl(&z.matrix, &z.left, &z.right, opts)
}

fn exact_projective(value: f64, method: &str, decomposition: Vec<(CVec, CVec)>, dual_form: CMat) -> CrossNormResult {
    CrossNormResult {
        value,
        lower: value,
        upper: value,
        gap: 0.0,
        exact: true,
        converged: true,
        method: method.into(),
        restarts: 0,
        certificate: Certificate::Projective { decomposition, dual_form },
    }
}

fn projective_impl(m: &CMat, left: &NormSpec, right: &NormSpec, opts: &CrossOptions) -> Result<CrossNormResult> {
    check_dim(left.dim(), m.nrows())?;
    check_dim(right.dim(), m.ncols())?;
    let (n, k) = m.shape();
    if is_zero(m) {
        return Ok(CrossNormResult::zero(n, k, CrossNorm::Projective));
    }
    if let Some(s) = left.l1_scales() {
        let mut b = CMat::zeros(n, k);
        let mut terms = Vec::with_capacity(n);
        let mut value = 0.0;
        for i in 0..n {
            let r = row(m, i);
            value += s[i] * right.eval(&r);
            b.set_row(i, &right.norming(&r)?.scale(s[i]).transpose());
            terms.push((linalg::basis(n, i), r));
        }
        let lower = bilinear(&linalg::flatten(&b), &linalg::flatten(m)).norm();
        let mut r = exact_projective(value, "row-decomposition", terms, b);
        r.lower = lower.min(value);
        r.gap = value - r.lower;
        return Ok(r);
    }
    if right.l1_scales().is_some() {
        return Ok(projective_impl(&m.transpose(), right, left, opts)?.transposed());
    }
    if let (Some(g1), Some(g2)) = (left.gram(), right.gram()) {
        let a = linalg::pd_power(&g1, 0.5);
        let a_inv = linalg::pd_power(&g1, -0.5);
        let c = linalg::pd_power(&g2, 0.5);
        let c_inv = linalg::pd_power(&g2, -0.5);
        let w = &a * m * c.transpose();
        let dec = linalg::svd(&w);
        let value: f64 = dec.sigma.iter().sum();
        let terms = (0..dec.sigma.len())
            .filter(|&r| dec.sigma[r] > 0.0)
            .map(|r| (&a_inv * dec.left(r).scale(dec.sigma[r]), &c_inv * linalg::conj_vec(&dec.right(r))))
            .collect();
        let q = (&dec.u * &dec.v_t).map(|z| z.conj());
        let b = a.transpose() * q * c;
        return Ok(exact_projective(value, "gram-nuclear", terms, b));
    }
    if n > k {
        return Ok(projective_impl(&m.transpose(), right, left, opts)?.transposed());
    }
    projective_search(m, left, right, opts)
}

fn factor_cost(x: &CMat, m: &CMat, left: &NormSpec, right: &NormSpec) -> Option<f64> {
    let y = x.clone().lu().solve(m)?;
    if y.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return None;
    }
    Some((0..x.ncols()).map(|r| left.eval(&col(x, r)) * right.eval(&row(&y, r))).sum())
}

/// Dual lower bound: `|Σ Z_ij M_ij| / λ_*(Z)` for a few candidate forms `Z`,
/// with `λ_*` bounded from above on the dual factors.
fn projective_lower(m: &CMat, left: &NormSpec, right: &NormSpec, opts: &CrossOptions) -> Result<(f64, CMat)> {
    let inj = injective_impl(m, left, right, opts)?;
    let mut best = match &inj.certificate {
        Certificate::Injective { f, g } => (inj.lower, f * g.transpose()),
        _ => unreachable!("injective certificate"),
    };
    let (ld, rd) = match (left.dual(), right.dual()) {
        (Ok(l), Ok(r)) => (l, r),
        _ => return Ok(best),
    };
    let dec = linalg::svd(m);
    let mut candidates = vec![m.map(|z| phase(z).conj()), m.map(|z| z.conj()), (&dec.u * &dec.v_t).map(|z| z.conj())];
    let mut rows = CMat::zeros(m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let r = row(m, i);
        if right.eval(&r) > 0.0 {
            rows.set_row(i, &right.norming(&r)?.scale(right.eval(&r)).transpose());
        }
    }
    candidates.push(rows);
    let light = CrossOptions { restarts: 4, ..opts.clone() };
    for z in candidates {
        let bound = injective_impl(&z, &ld, &rd, &light)?;
        let scale = if bound.exact { bound.value } else { bound.upper };
        if !(scale > 0.0) {
            continue;
        }
        let v = bilinear(&linalg::flatten(&z), &linalg::flatten(m)).norm() / scale;
        if v > best.0 {
            best = (v, z.unscale(scale));
        }
    }
    Ok(best)
}

fn projective_search(m: &CMat, left: &NormSpec, right: &NormSpec, opts: &CrossOptions) -> Result<CrossNormResult> {
    let (n, _) = m.shape();
    let mut best_terms: Vec<(CVec, CVec)> = Vec::new();
    let mut best_cost = f64::INFINITY;
    for d in simple_decompositions(m) {
        let c = decomposition_cost(&d, left, right);
        if c < best_cost {
            best_cost = c;
            best_terms = d;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9);
    let dec = linalg::svd(m);
    let mut starts = vec![CMat::identity(n, n), dec.u.clone()];
    let searches = (opts.restarts / 4).max(4);
    starts.extend((0..searches).map(|_| linalg::random_cmat(&mut rng, n, n)));
    for start in &starts {
        let mut x = start.clone();
        let mut cost = match factor_cost(&x, m, left, right) {
            Some(c) => c,
            None => continue,
        };
        let mut step = 0.5;
        for _ in 0..opts.search_iters {
            let scale = step * linalg::frobenius(&x) / (n as f64);
            let mut trial = x.clone();
            if rng.gen_bool(0.5) {
                let c = rng.gen_range(0..n);
                let d = linalg::random_cvec(&mut rng, n).scale(scale);
                let updated = col(&trial, c) + d;
                trial.set_column(c, &updated);
            } else {
                trial += linalg::random_cmat(&mut rng, n, n).scale(scale);
            }
            match factor_cost(&trial, m, left, right) {
                Some(c) if c < cost * (1.0 - 1e-15) => {
                    x = trial;
                    cost = c;
                    step = (step * 1.5).min(1.0);
                }
                _ => step *= 0.9,
            }
            if step < 1e-9 {
                break;
            }
        }
        if cost < best_cost {
            if let Some(y) = x.clone().lu().solve(m) {
                best_cost = cost;
                best_terms = (0..n).map(|r| (col(&x, r), row(&y, r))).collect();
            }
        }
    }
    let (lower, dual_form) = projective_lower(m, left, right, opts)?;
    let upper = best_cost.max(lower);
    let gap = upper - lower;
    let tight = gap <= 1e-6 * upper.max(1.0);
    Ok(CrossNormResult {
        value: upper,
        lower,
        upper,
        gap,
        exact: tight,
        converged: tight,
        method: "decomposition-search".into(),
        restarts: starts.len(),
        certificate: Certificate::Projective { decomposition: best_terms, dual_form },
    })
}

pub fn hilbert_norm(z: &TensorElement) -> Result<f64> {
    let (g1, g2) = match (z.left.gram(), z.right.gram()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Unsupported("Hilbert cross-norm needs inner-product factors".into())),
    };
    let m = &z.matrix;
    let q = (m.adjoint() * g1 * m * g2.transpose()).trace();
    Ok(libm::sqrt(q.re.max(0.0)))
}

pub fn cross_norm(z: &TensorElement, kind: CrossNorm, opts: &CrossOptions) -> Result<CrossNormResult> {
    match kind {
        CrossNorm::Injective => injective_norm_with(z, opts),
        CrossNorm::Projective => projective_norm_with(z, opts),
        CrossNorm::Hilbert => {
            let v = hilbert_norm(z)?;
            Ok(CrossNormResult {
                value: v,
                lower: v,
                upper: v,
                gap: 0.0,
                exact: true,
                converged: true,
                method: "gram-quadratic-form".into(),
                restarts: 0,
                certificate: Certificate::Hilbert,
            })
        }
    }
}

pub(crate) fn tensor_eval(t: &TensorNorm, v: &CVec) -> f64 {
    if let Some(flat) = &t.flat {
        return flat.eval(v);
    }
    let m = linalg::reshape(v, t.n(), t.m());
    let opts = CrossOptions::default();
    let r = match t.kind {
        CrossNorm::Injective => injective_impl(&m, &t.left, &t.right, &opts),
        _ => projective_impl(&m, &t.left, &t.right, &opts),
    };
    r.map(|r| r.value).unwrap_or(f64::NAN)
}

pub(crate) fn tensor_norming(t: &TensorNorm, v: &CVec) -> Result<CVec> {
    if let Some(flat) = &t.flat {
        return flat.norming(v);
    }
    let m = linalg::reshape(v, t.n(), t.m());
    let opts = CrossOptions::default();
    match t.kind {
        CrossNorm::Injective => match injective_impl(&m, &t.left, &t.right, &opts)?.certificate {
            Certificate::Injective { f, g } => Ok(linalg::kron_vec(&f, &g)),
            _ => unreachable!("injective certificate"),
        },
        _ => match projective_impl(&m, &t.left, &t.right, &opts)?.certificate {
            Certificate::Projective { dual_form, .. } => Ok(linalg::flatten(&dual_form)),
            _ => unreachable!("projective certificate"),
        },
    }
}

pub(crate) fn tensor_attainer(t: &TensorNorm, u: &CVec) -> Result<CVec> {
    if let Some(flat) = &t.flat {
        return flat.attainer(u);
    }
    let m = linalg::reshape(u, t.n(), t.m());
    let (ld, rd) = t.duals()?;
    let opts = CrossOptions::default();
    match t.kind {
        CrossNorm::Injective => match projective_impl(&m, &ld, &rd, &opts)?.certificate {
            Certificate::Projective { dual_form, .. } => Ok(linalg::flatten(&dual_form)),
            _ => unreachable!("projective certificate"),
        },
        _ => match injective_impl(&m, &ld, &rd, &opts)?.certificate {
            Certificate::Injective { f, g } => Ok(linalg::kron_vec(&f, &g)),
            _ => unreachable!("injective certificate"),
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub lambda_lower: f64,
    pub candidate: f64,
    pub gamma_upper: f64,
    pub passed: bool,
    /// Certificates of the violated bound, when the check fails.
    pub counterexample: Option<CrossNormResult>,
}

/// Checks `λ(z) ≤ candidate(z) ≤ γ(z)` up to `tol` using the certified sides
/// of each bracket.
pub fn check_compatibility_sandwich(
    z: &TensorElement,
    candidate: &dyn Fn(&TensorElement) -> Result<f64>,
    tol: f64,
) -> Result<SandwichReport> {
    let lam = injective_norm(z)?;
    let gam = projective_norm(z)?;
    let c = candidate(z)?;
    let low_ok = lam.lower - tol <= c;
    let high_ok = c <= gam.upper + tol;
    let counterexample = if !low_ok {
        Some(lam.clone())
    } else if !high_ok {
        Some(gam.clone())
    } else {
        None
    };
    Ok(SandwichReport { lambda_lower: lam.lower, candidate: c, gamma_upper: gam.upper, passed: low_ok && high_ok, counterexample })
}

/// `T₁ ⊗ T₂` on tensor coordinates with the chosen cross-norm on both sides.
pub fn tensor_operator(t1: &OperatorMatrix, t2: &OperatorMatrix, kind: CrossNorm) -> Result<OperatorMatrix> {
    let domain = NormSpec::tensor(t1.domain.clone(), t2.domain.clone(), kind)?;
    let codomain = NormSpec::tensor(t1.codomain.clone(), t2.codomain.clone(), kind)?;
    OperatorMatrix::new(linalg::kron(&t1.matrix, &t2.matrix), domain, codomain)
}

#[derive(Clone, Debug, Serialize)]
pub struct UniformityReport {
    pub crossnorm: CrossNorm,
    pub tensor_norm: OperatorNormResult,
    pub left_norm: f64,
    pub right_norm: f64,
    pub product: f64,
    pub deviation: f64,
    pub passed: bool,
    pub inconclusive: bool,
}

pub fn check_uniformity(t1: &OperatorMatrix, t2: &OperatorMatrix, kind: CrossNorm, tol: f64) -> Result<UniformityReport> {
    let n1 = operator::operator_norm(t1)?;
    let n2 = operator::operator_norm(t2)?;
    let t = tensor_operator(t1, t2, kind)?;
    let opts = OperatorOptions { seeds: vec![linalg::kron_vec(&n1.maximizer, &n2.maximizer)], ..Default::default() };
    let tn = operator::operator_norm_with(&t, &opts)?;
    let product = n1.value * n2.value;
    let deviation = (tn.value - product).abs();
    let passed = deviation <= tol * product.max(1.0);
    let solid = n1.exact && n2.exact && (tn.exact || tn.converged);
    Ok(UniformityReport {
        crossnorm: kind,
        left_norm: n1.value,
        right_norm: n2.value,
        product,
        deviation,
        passed,
        inconclusive: !passed && !solid,
        tensor_norm: tn,
    })
}

/// Pairing `Σ B_ij M_ij` of a bilinear form with a tensor.
pub fn pair_form(b: &CMat, m: &CMat) -> C64 {
    b.component_mul(m).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, random_cvec, real_vec};
    use proptest::prelude::*;

    fn el(rows: usize, cols: usize, data: &[f64], left: NormSpec, right: NormSpec) -> TensorElement {
        let m = CMat::from_row_slice(rows, cols, &data.iter().map(|&x| c64(x, 0.0)).collect::<Vec<_>>());
        TensorElement::new(m, left, right).unwrap()
    }

    fn gram_norm(d: &[f64]) -> NormSpec {
        NormSpec::inner_product(CMat::from_diagonal(&real_vec(d))).unwrap()
    }

    #[test]
    fn identity_norms_on_l2() {
        let z = el(2, 2, &[1.0, 0.0, 0.0, 1.0], NormSpec::l2(2), NormSpec::l2(2));
        assert!((injective_norm(&z).unwrap().value - 1.0).abs() < 1e-12);
        let g = projective_norm(&z).unwrap();
        assert!((g.value - 2.0).abs() < 1e-12 && g.exact);
        let z = el(2, 2, &[1.0, 0.0, 0.0, 1.0], gram_norm(&[1.0, 1.0]), gram_norm(&[1.0, 1.0]));
        assert!((hilbert_norm(&z).unwrap() - libm::sqrt(2.0)).abs() < 1e-14);
    }

    #[test]
    fn identity_injective_on_l1_matches_sign_enumeration() {
        let z = el(2, 2, &[1.0, 0.0, 0.0, 1.0], NormSpec::l1(2), NormSpec::l1(2));
        let mut best: f64 = 0.0;
        for a in [-1.0, 1.0] {
            for b in [-1.0, 1.0] {
                for c in [-1.0, 1.0] {
                    for d in [-1.0, 1.0] {
                        let f = real_vec(&[a, b]);
                        let g = real_vec(&[c, d]);
                        best = best.max(pair_value(&f, &z.matrix, &g));
                    }
                }
            }
        }
        assert_eq!(best, 2.0);
        let r = injective_norm(&z).unwrap();
        assert!((r.value - best).abs() < 1e-12);
    }

    #[test]
    fn l1_projective_is_entry_sum() {
        let z = el(2, 2, &[1.0, -2.0, 3.0, 4.0], NormSpec::l1(2), NormSpec::l1(2));
        let r = projective_norm(&z).unwrap();
        assert_eq!(r.value, 10.0);
        assert!((r.lower - 10.0).abs() < 1e-12);
        if let Certificate::Projective { dual_form, .. } = &r.certificate {
            let expected = CMat::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(-1.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0)]);
            assert!(linalg::max_abs_diff(dual_form, &expected) < 1e-15);
        }
    }

    #[test]
    fn weighted_hilbert_value() {
        let z = el(2, 2, &[1.0, 0.0, 0.0, 1.0], gram_norm(&[1.0, 2.0]), gram_norm(&[1.0, 1.0]));
        assert!((hilbert_norm(&z).unwrap() - libm::sqrt(3.0)).abs() < 1e-14);
        let z = el(2, 2, &[1.0, 0.0, 0.0, 1.0], NormSpec::l1(2), NormSpec::l2(2));
        assert!(matches!(hilbert_norm(&z), Err(Error::Unsupported(_))));
    }

    #[test]
    fn complex_l1_injective_exceeds_real_restriction() {
        // over complex scalars the ∞ → 1 norm of [[1,1],[1,-1]] is 2√2
        let z = el(2, 2, &[1.0, 1.0, 1.0, -1.0], NormSpec::l1(2), NormSpec::l1(2));
        let r = injective_norm(&z).unwrap();
        assert!((r.value - 2.0 * libm::sqrt(2.0)).abs() < 1e-9, "{}", r.value);
        let brute = crate::oracle::injective_norm_bruteforce(&z, 360).unwrap();
        assert!((brute - r.value).abs() < 3e-3);
    }

    #[test]
    fn sandwich_rejects_half_lambda() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = linalg::random_cmat(&mut rng, 3, 3);
        let z = TensorElement::new(m, NormSpec::l2(3), NormSpec::l2(3)).unwrap();
        let ok = check_compatibility_sandwich(&z, &|z| hilbert_norm(z), 1e-9).unwrap();
        assert!(ok.passed);
        let eq = check_compatibility_sandwich(&z, &|z| Ok(projective_norm(z)?.value), 1e-9).unwrap();
        assert!(eq.passed && (eq.candidate - eq.gamma_upper).abs() < 1e-12);
        let bad = check_compatibility_sandwich(&z, &|z| Ok(0.5 * injective_norm(z)?.value), 1e-9).unwrap();
        assert!(!bad.passed && bad.counterexample.is_some());
    }

    #[test]
    fn tensor_operator_acts_on_elementary_tensors() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = OperatorMatrix::new(linalg::random_cmat(&mut rng, 2, 2), NormSpec::l2(2), NormSpec::l2(2)).unwrap();
        let b = OperatorMatrix::new(linalg::random_cmat(&mut rng, 3, 3), NormSpec::l2(3), NormSpec::l2(3)).unwrap();
        let t = tensor_operator(&a, &b, CrossNorm::Projective).unwrap();
        let x = random_cvec(&mut rng, 2);
        let y = random_cvec(&mut rng, 3);
        let lhs = t.apply(&linalg::kron_vec(&x, &y));
        let rhs = linalg::kron_vec(&a.apply(&x), &b.apply(&y));
        assert!(linalg::vec_norm2(&(lhs - rhs)) < 1e-12);
        let id = tensor_operator(
            &OperatorMatrix::new(CMat::identity(2, 2), NormSpec::l1(2), NormSpec::l1(2)).unwrap(),
            &OperatorMatrix::new(CMat::identity(3, 3), NormSpec::l1(3), NormSpec::l1(3)).unwrap(),
            CrossNorm::Injective,
        )
        .unwrap();
        assert_eq!(id.matrix, CMat::identity(6, 6));
    }

    #[test]
    fn kronecker_rank_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..20 {
            let mut a = linalg::random_cmat(&mut rng, 2, 2);
            let mut b = linalg::random_cmat(&mut rng, 2, 2);
            if rand::Rng::gen_bool(&mut rng, 0.5) {
                let c0 = a.column(0).into_owned();
                a.set_column(1, &c0.scale(2.0));
            }
            if rand::Rng::gen_bool(&mut rng, 0.5) {
                b.fill(c64(0.0, 0.0));
                b[(0, 1)] = c64(1.0, 0.0);
            }
            let k = linalg::kron(&a, &b);
            assert_eq!(linalg::numerical_rank(&k, 1e-10), linalg::numerical_rank(&a, 1e-10) * linalg::numerical_rank(&b, 1e-10));
        }
    }

    #[test]
    fn uniformity_examples() {
        let id2 = OperatorMatrix::new(CMat::identity(2, 2), NormSpec::l2(2), NormSpec::l2(2)).unwrap();
        for kind in CrossNorm::ALL {
            let r = check_uniformity(&id2, &id2, kind, 1e-9).unwrap();
            assert!(r.passed && (r.tensor_norm.value - 1.0).abs() < 1e-12, "{kind:?}");
        }
        let t1 = CMat::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        let t2 = CMat::from_row_slice(2, 2, &[c64(2.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        let a = OperatorMatrix::new(t1, NormSpec::l2(2), NormSpec::l2(2)).unwrap();
        let b = OperatorMatrix::new(t2, NormSpec::l2(2), NormSpec::l2(2)).unwrap();
        let r = check_uniformity(&a, &b, CrossNorm::Projective, 1e-6).unwrap();
        let oracle = linalg::nuclear_norm(&linalg::kron(&a.matrix, &b.matrix));
        assert!((r.tensor_norm.value - 2.0).abs() < 1e-6 && (oracle - 2.0).abs() < 1e-12);
        let d1 = CMat::from_diagonal(&real_vec(&[0.5, -3.0]));
        let d2 = CMat::from_diagonal(&real_vec(&[2.0, 1.0, -0.25]));
        let a = OperatorMatrix::new(d1, NormSpec::l2(2), NormSpec::l2(2)).unwrap();
        let b = OperatorMatrix::new(d2, NormSpec::l2(3), NormSpec::l2(3)).unwrap();
        let r = check_uniformity(&a, &b, CrossNorm::Injective, 1e-6).unwrap();
        assert!((r.tensor_norm.value - 6.0).abs() < 1e-6 && r.passed);
    }

    #[test]
    fn general_lp_projective_brackets_and_is_exact_on_rank_one() {
        let p3 = NormSpec::p(2, 3.0).unwrap();
        let p4 = NormSpec::p(3, 4.0).unwrap();
        let x = real_vec(&[1.0, -2.0]);
        let y = CVec::from_vec(vec![c64(0.5, 1.0), c64(0.0, 0.0), c64(-1.0, 0.3)]);
        let z = TensorElement::elementary(&x, &y, p3.clone(), p4.clone()).unwrap();
        let expected = p3.eval(&x) * p4.eval(&y);
        let r = projective_norm(&z).unwrap();
        assert!((r.value - expected).abs() < 1e-6 * expected && r.exact);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let z = TensorElement::new(linalg::random_cmat(&mut rng, 2, 3), p3, p4).unwrap();
        let r = projective_norm(&z).unwrap();
        let lam = injective_norm(&z).unwrap();
        assert!(r.lower <= r.upper + 1e-12);
        assert!(lam.lower <= r.upper + 1e-12);
    }

    fn factor(which: usize, n: usize) -> NormSpec {
        match which {
            0 => NormSpec::l1(n),
            1 => NormSpec::l2(n),
            2 => NormSpec::linf(n),
            _ => {
                let d: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
                gram_norm(&d)
            }
        }
    }

    fn cvec_of(v: Vec<(f64, f64)>) -> CVec {
        CVec::from_iterator(v.len(), v.into_iter().map(|(a, b)| c64(a, b)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn cross_property(
            x in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..4),
            y in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..4),
            l in 0usize..4, r in 0usize..4,
        ) {
            let x = cvec_of(x);
            let y = cvec_of(y);
            let left = factor(l, x.len());
            let right = factor(r, y.len());
            let expected = left.eval(&x) * right.eval(&y);
            let z = TensorElement::elementary(&x, &y, left, right).unwrap();
            let lam = injective_norm(&z).unwrap().value;
            let gam = projective_norm(&z).unwrap().value;
            prop_assert!((lam - expected).abs() <= 1e-6 * (1.0 + expected));
            prop_assert!((gam - expected).abs() <= 1e-6 * (1.0 + expected));
            if let Ok(h) = hilbert_norm(&z) {
                prop_assert!((h - expected).abs() <= 1e-6 * (1.0 + expected));
            }
        }

        #[test]
        fn duality_consistency(m in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 4), l in 0usize..4, r in 0usize..4) {
            let m = CMat::from_iterator(2, 2, m.into_iter().map(|(a, b)| c64(a, b)));
            let z = TensorElement::new(m, factor(l, 2), factor(r, 2)).unwrap();
            let g = projective_norm(&z).unwrap();
            let lam = injective_norm(&z).unwrap();
            prop_assert!(g.lower <= g.upper * (1.0 + 1e-12) + 1e-12);
            prop_assert!(lam.lower <= g.upper * (1.0 + 1e-9) + 1e-12);
            if let Certificate::Projective { decomposition, dual_form } = &g.certificate {
                let rebuilt = TensorElement::from_terms(decomposition, z.left.clone(), z.right.clone()).unwrap();
                prop_assert!(linalg::max_abs_diff(&rebuilt.matrix, &z.matrix) < 1e-9);
                prop_assert!((pair_form(dual_form, &z.matrix).norm() - g.lower).abs() < 1e-9 * (1.0 + g.lower));
            }
        }

        #[test]
        fn involution_invariance_with_conjugation(m in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 6)) {
            // factor involution = coordinate conjugation, isometric for every lp norm
            let m = CMat::from_iterator(2, 3, m.into_iter().map(|(a, b)| c64(a, b)));
            for (l, r) in [(0, 0), (1, 1), (0, 1), (2, 2)] {
                let z = TensorElement::new(m.clone(), factor(l, 2), factor(r, 3)).unwrap();
                let zs = TensorElement::new(m.map(|c| c.conj()), factor(l, 2), factor(r, 3)).unwrap();
                for kind in [CrossNorm::Injective, CrossNorm::Projective] {
                    let a = cross_norm(&z, kind, &CrossOptions::default()).unwrap();
                    let b = cross_norm(&zs, kind, &CrossOptions::default()).unwrap();
                    if a.exact && b.exact {
                        prop_assert!((a.value - b.value).abs() <= 1e-6 * (1.0 + a.value));
                    }
                }
            }
        }
    }
}
