//! Representations, functionals and forms on tensor pairs: restriction to the
//! factors, tensoring, the form `φ_Ω` of a representable functional, and the
//! transfer harnesses for *-semisimplicity and full representability.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::StarAlgebraModel;
use crate::check::CheckEntry;
use crate::cross::CrossNorm;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, CMat, CVec, C64, ZERO};
use crate::norm::NormSpec;
use crate::operator::{operator_norm, OperatorMatrix};
use crate::pair::QuasiPair;
use crate::represent::{
    check_representable, condition_p_check, form_norm, fully_representable_check, generated_family, gns, gram_of_functional,
    semisimple_check, FamilyGenerator, FormModel, FullRepReport, FunctionalModel, GnsData, SemisimpleReport, SemisimpleVerdict,
    SEMISIMPLE_TOL,
};
use crate::tensor::{build_tensor_pair, TensorQuasiPair};

/// A *-representation given by the images of the basis elements.
#[derive(Clone, Debug, Serialize)]
pub struct RepresentationModel {
    pub source: String,
    pub hilbert_dim: usize,
    #[serde(serialize_with = "crate::ser::cmats")]
    pub ops: Vec<CMat>,
    pub domain: String,
}

impl RepresentationModel {
    pub fn new(source: impl Into<String>, ops: Vec<CMat>, domain: impl Into<String>) -> Result<Self> {
        let h = ops.first().map(|m| m.nrows()).unwrap_or(0);
        for m in &ops {
            check_dim(h, m.nrows())?;
            check_dim(h, m.ncols())?;
        }
        Ok(RepresentationModel { source: source.into(), hilbert_dim: h, ops, domain: domain.into() })
    }

    /// Keeps the images of the first `dim` basis elements, dropping an adjoined unit.
    pub fn from_gns(g: &GnsData, dim: usize, source: impl Into<String>) -> Self {
        RepresentationModel { source: source.into(), hilbert_dim: g.hilbert_dim, ops: g.rep[..dim].to_vec(), domain: "A0".into() }
    }

    /// `a ↦ L_a` on coordinates with the standard inner product.
    pub fn left_regular(alg: &StarAlgebraModel, source: impl Into<String>) -> Self {
        let ops = (0..alg.dim()).map(|i| alg.left_matrix(&alg.basis(i))).collect();
        RepresentationModel { source: source.into(), hilbert_dim: alg.dim(), ops, domain: "A0".into() }
    }

    pub fn direct_sum(a: &Self, b: &Self) -> Result<Self> {
        check_dim(a.ops.len(), b.ops.len())?;
        let (ha, hb) = (a.hilbert_dim, b.hilbert_dim);
        let ops = a
            .ops
            .iter()
            .zip(&b.ops)
            .map(|(x, y)| {
                let mut m = CMat::zeros(ha + hb, ha + hb);
                m.view_mut((0, 0), (ha, ha)).copy_from(x);
                m.view_mut((ha, ha), (hb, hb)).copy_from(y);
                m
            })
            .collect();
        Ok(RepresentationModel { source: format!("{}+{}", a.source, b.source), hilbert_dim: ha + hb, ops, domain: a.domain.clone() })
    }

    pub fn dim(&self) -> usize {
        self.ops.len()
    }

    pub fn apply(&self, a: &CVec) -> CMat {
        let mut out = CMat::zeros(self.hilbert_dim, self.hilbert_dim);
        for (k, p) in self.ops.iter().enumerate() {
            if a[k] != ZERO {
                out += p * a[k];
            }
        }
        out
    }

    /// Star and multiplicativity residuals on basis elements, relative to the largest image.
    pub fn residuals(&self, alg: &StarAlgebraModel) -> Result<(f64, f64)> {
        check_dim(alg.dim(), self.dim())?;
        let n = alg.dim();
        let scale = self.ops.iter().map(linalg::frobenius).fold(1.0, f64::max);
        let mut star: f64 = 0.0;
        let mut mult: f64 = 0.0;
        for i in 0..n {
            let ei = alg.basis(i);
            star = star.max(linalg::max_abs_diff(&self.apply(&alg.star(&ei)), &self.ops[i].adjoint()));
            for j in 0..n {
                let prod = alg.multiply(&ei, &alg.basis(j));
                mult = mult.max(linalg::max_abs_diff(&self.apply(&prod), &(&self.ops[i] * &self.ops[j])));
            }
        }
        Ok((star / scale, mult / (scale * scale)))
    }

    pub fn checks(&self, alg: &StarAlgebraModel, tol: f64) -> Result<Vec<CheckEntry>> {
        let (star, mult) = self.residuals(alg)?;
        Ok(vec![CheckEntry::residual("rep-star", star, tol), CheckEntry::residual("rep-multiplicative", mult, tol)])
    }
}

pub const REP_TOL: f64 = 1e-10;

fn units(tp: &TensorQuasiPair) -> Result<(CVec, CVec)> {
    match (tp.left.unit(), tp.right.unit()) {
        (Some(a), Some(b)) => Ok((a.clone(), b.clone())),
        _ => Err(Error::NotUnital),
    }
}

/// `kron(I_n, e_B)`, so that `E a = a ⊗ e_B`.
fn left_slice(n: usize, e_b: &CVec) -> CMat {
    let col = CMat::from_column_slice(e_b.len(), 1, e_b.as_slice());
    linalg::kron(&CMat::identity(n, n), &col)
}

/// `kron(e_A, I_m)`, so that `E b = e_A ⊗ b`.
fn right_slice(e_a: &CVec, m: usize) -> CMat {
    let col = CMat::from_column_slice(e_a.len(), 1, e_a.as_slice());
    linalg::kron(&col, &CMat::identity(m, m))
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionReport {
    pub left: RepresentationModel,
    pub right: RepresentationModel,
    pub factorization_residual: f64,
    pub commutation_residual: f64,
    /// Set when the input violates the factorization `π(x⊗b) = π₁(x)π₂(b) = π₂(b)π₁(x)`.
    pub flagged: bool,
    pub checks: Vec<CheckEntry>,
}

pub fn restrict_representation(tp: &TensorQuasiPair, pi: &RepresentationModel, tol: f64) -> Result<RestrictionReport> {
    let (e_a, e_b) = units(tp)?;
    let (n, m) = (tp.n(), tp.m());
    check_dim(n * m, pi.dim())?;
    let left_ops: Vec<CMat> = (0..n).map(|i| pi.apply(&linalg::kron_vec(&linalg::basis(n, i), &e_b))).collect();
    let right_ops: Vec<CMat> = (0..m).map(|j| pi.apply(&linalg::kron_vec(&e_a, &linalg::basis(m, j)))).collect();
    let left = RepresentationModel::new(format!("{}|left", pi.source), left_ops, "A0")?;
    let right = RepresentationModel::new(format!("{}|right", pi.source), right_ops, "B0")?;
    let scale = pi.ops.iter().map(linalg::frobenius).fold(1.0, f64::max);
    let mut fact: f64 = 0.0;
    let mut comm: f64 = 0.0;
    for i in 0..n {
        for j in 0..m {
            let lr = &left.ops[i] * &right.ops[j];
            let rl = &right.ops[j] * &left.ops[i];
            fact = fact.max(linalg::max_abs_diff(&pi.ops[i * m + j], &lr));
            comm = comm.max(linalg::max_abs_diff(&lr, &rl));
        }
    }
    let (fact, comm) = (fact / scale, comm / (scale * scale));
    let mut checks = vec![CheckEntry::residual("factorization", fact, tol), CheckEntry::residual("commutation", comm, tol)];
    checks.extend(left.checks(&tp.left.algebra, tol)?.into_iter().map(|c| c.with_note("left restriction")));
    checks.extend(right.checks(&tp.right.algebra, tol)?.into_iter().map(|c| c.with_note("right restriction")));
    let flagged = fact > tol || comm > tol;
    Ok(RestrictionReport { left, right, factorization_residual: fact, commutation_residual: comm, flagged, checks })
}

/// `ω₁(a) = ⟨π(a⊗e_B)ξ, ξ⟩` and `ω₂(b) = ⟨π(e_A⊗b)ξ, ξ⟩`.
pub fn vector_functionals_from_rep(
    tp: &TensorQuasiPair,
    pi: &RepresentationModel,
    xi: &CVec,
) -> Result<(FunctionalModel, FunctionalModel)> {
    let (e_a, e_b) = units(tp)?;
    let (n, m) = (tp.n(), tp.m());
    check_dim(n * m, pi.dim())?;
    check_dim(pi.hilbert_dim, xi.len())?;
    let value = |c: CVec| xi.dotc(&(pi.apply(&c) * xi));
    let w1 = CVec::from_iterator(n, (0..n).map(|i| value(linalg::kron_vec(&linalg::basis(n, i), &e_b))));
    let w2 = CVec::from_iterator(m, (0..m).map(|j| value(linalg::kron_vec(&e_a, &linalg::basis(m, j)))));
    Ok((FunctionalModel::new(w1, format!("{}|left", pi.source)), FunctionalModel::new(w2, format!("{}|right", pi.source))))
}

/// `π₁ ⊗ π₂` on `H₁ ⊗ H₂`, indexed row-major like the tensor coordinates.
pub fn tensor_representation(p1: &RepresentationModel, p2: &RepresentationModel) -> RepresentationModel {
    let mut ops = Vec::with_capacity(p1.dim() * p2.dim());
    for a in &p1.ops {
        for b in &p2.ops {
            ops.push(linalg::kron(a, b));
        }
    }
    RepresentationModel {
        source: format!("{}x{}", p1.source, p2.source),
        hilbert_dim: p1.hilbert_dim * p2.hilbert_dim,
        ops,
        domain: format!("{}x{}", p1.domain, p2.domain),
    }
}

pub fn tensor_functional(w1: &FunctionalModel, w2: &FunctionalModel) -> FunctionalModel {
    FunctionalModel::new(linalg::kron_vec(&w1.coeffs, &w2.coeffs), format!("{}x{}", w1.source, w2.source))
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorFunctionalReport {
    pub functional: FunctionalModel,
    pub representable: bool,
    pub reproduction_residual: f64,
    pub gram_residual: f64,
    pub checks: Vec<CheckEntry>,
}

/// Sum of `c_ij π₁(e_i) ⊗ π₂(f_j)` over the first `n·m` coordinates.
fn product_apply(r1: &[CMat], r2: &[CMat], n: usize, m: usize, c: &CVec) -> CMat {
    let h = r1[0].nrows() * r2[0].nrows();
    let mut out = CMat::zeros(h, h);
    for i in 0..n {
        for j in 0..m {
            let z = c[i * m + j];
            if z != ZERO {
                out += linalg::kron(&r1[i], &r2[j]) * z;
            }
        }
    }
    out
}

/// Builds `ω₁ ⊗ ω₂` and checks it against the GNS data of the factors.
pub fn tensor_functional_check(
    tp: &TensorQuasiPair,
    w1: &FunctionalModel,
    w2: &FunctionalModel,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<TensorFunctionalReport> {
    let (n, m) = (tp.n(), tp.m());
    check_dim(n, w1.dim())?;
    check_dim(m, w2.dim())?;
    let w = tensor_functional(w1, w2);
    let rep = check_representable(&tp.combined.algebra, &w, tol)?;
    let g1 = gns(&tp.left.algebra, w1, tol)?;
    let g2 = gns(&tp.right.algebra, w2, tol)?;
    let xi = linalg::kron_vec(&g1.cyclic_vector, &g2.cyclic_vector);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cs: Vec<CVec> = (0..n * m).map(|k| linalg::basis(n * m, k)).collect();
    cs.extend((0..samples).map(|_| linalg::random_cvec(&mut rng, n * m)));
    let mut repro: f64 = 0.0;
    for c in &cs {
        let v = xi.dotc(&(product_apply(&g1.rep, &g2.rep, n, m, c) * &xi));
        let scale = linalg::max_abs(c.iter().copied()).max(1.0) * linalg::max_abs(w.coeffs.iter().copied()).max(1.0);
        repro = repro.max((v - w.apply(c)).norm() / scale);
    }
    let g = gram_of_functional(&tp.combined.algebra, &w)?;
    let gk = linalg::kron(&gram_of_functional(&tp.left.algebra, w1)?, &gram_of_functional(&tp.right.algebra, w2)?);
    let gram_res = linalg::max_abs_diff(&g, &gk) / linalg::max_abs(gk.iter().copied()).max(1.0);
    let checks = vec![
        CheckEntry::flag("tensor-representable", rep.representable, format!("min eigenvalue {:.3e}", rep.min_eigenvalue)),
        CheckEntry::residual("gns-reproduction", repro, 1e-8),
        CheckEntry::residual("gram-factorization", gram_res, 1e-12),
    ];
    Ok(TensorFunctionalReport {
        functional: w,
        representable: rep.representable,
        reproduction_residual: repro,
        gram_residual: gram_res,
        checks,
    })
}

/// Bounds on `sup Φ(c, c)` over the unit ball of `norm`, for positive `S`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FormBound {
    pub lower: f64,
    pub upper: Option<f64>,
    pub exact: bool,
}

fn form_bound(s: &CMat, norm: &NormSpec) -> Result<FormBound> {
    if norm.gram().is_some() {
        let v = form_norm(s, norm)?;
        return Ok(FormBound { lower: v, upper: Some(v), exact: true });
    }
    let root = linalg::pd_power(&linalg::herm_eigen(&linalg::hermitian_part(s)).reconstruct(|l| l.max(0.0)), 0.5);
    let r = operator_norm(&OperatorMatrix::new(root, norm.clone(), NormSpec::l2(s.nrows()))?)?;
    let v = r.value * r.value;
    Ok(FormBound { lower: v, upper: if r.exact { Some(v) } else { None }, exact: r.exact })
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorFormReport {
    /// `(φ₁ ⊗ φ₂) / ‖φ₁ ⊗ φ₂‖`, normalized by the lower bound when the norm is not exact.
    pub form: FormModel,
    pub joint: FormBound,
    pub checks: Vec<CheckEntry>,
}

pub fn tensor_form(tp: &TensorQuasiPair, f1: &FormModel, f2: &FormModel, samples: usize, seed: u64) -> Result<TensorFormReport> {
    let (n, m) = (tp.n(), tp.m());
    check_dim(n, f1.matrix.nrows())?;
    check_dim(m, f2.matrix.nrows())?;
    if linalg::max_abs(f1.matrix.iter().copied()) == 0.0 || linalg::max_abs(f2.matrix.iter().copied()) == 0.0 {
        return Err(Error::InvalidArgument("tensor_form needs two nonzero forms".into()));
    }
    let s = linalg::kron(&f1.matrix, &f2.matrix);
    let joint = match tp.crossnorm {
        CrossNorm::Projective => {
            let b1 = form_bound(&f1.matrix, &tp.left.norm)?;
            let b2 = form_bound(&f2.matrix, &tp.right.norm)?;
            let exact = b1.exact && b2.exact;
            let upper = b1.upper.zip(b2.upper).map(|(a, b)| a * b);
            FormBound { lower: b1.lower * b2.lower, upper, exact }
        }
        _ => form_bound(&s, &tp.combined.norm)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let scale = linalg::max_abs(s.iter().copied()).max(1e-300);
    for _ in 0..samples {
        let c = linalg::random_cvec(&mut rng, n * m);
        let c = &c * C64::new(1.0 / linalg::vec_norm2(&c), 0.0);
        worst = worst.max(-c.dotc(&(&s * &c)).re / scale);
    }
    let alg = &tp.combined.algebra;
    let mut checks = vec![
        CheckEntry::residual("positivity", worst, 1e-10),
        CheckEntry::residual("invariance", crate::represent::invariance_residual(alg, &s), 1e-10),
    ];
    if !joint.exact {
        checks.push(CheckEntry::flag("joint-norm-exact", false, "normalized by the ascent lower bound").warning());
    }
    let form = FormModel::new(s / C64::new(joint.lower.max(1e-300), 0.0), 1.0, format!("{}x{}", f1.source, f2.source));
    Ok(TensorFormReport { form, joint, checks })
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictedPieces {
    pub omega_left: FunctionalModel,
    pub omega_right: FunctionalModel,
    pub form_left: FormModel,
    pub form_right: FormModel,
    pub checks: Vec<CheckEntry>,
}

/// `ω₁(a) = Ω(a⊗e_B)`, `φ₁(a₁, a₂) = Φ(a₁⊗e_B, a₂⊗e_B)` and the same on the right.
pub fn restrict_functional_and_form(tp: &TensorQuasiPair, omega: &FunctionalModel, phi: &FormModel, tol: f64) -> Result<RestrictedPieces> {
    let (e_a, e_b) = units(tp)?;
    let (n, m) = (tp.n(), tp.m());
    check_dim(n * m, omega.dim())?;
    check_dim(n * m, phi.matrix.nrows())?;
    let el = left_slice(n, &e_b);
    let er = right_slice(&e_a, m);
    let omega_left = FunctionalModel::new(el.transpose() * &omega.coeffs, format!("{}|left", omega.source));
    let omega_right = FunctionalModel::new(er.transpose() * &omega.coeffs, format!("{}|right", omega.source));
    let s1 = el.adjoint() * &phi.matrix * &el;
    let s2 = er.adjoint() * &phi.matrix * &er;
    let b1 = form_bound(&s1, &tp.left.norm)?;
    let b2 = form_bound(&s2, &tp.right.norm)?;
    let form_left = FormModel::new(s1, b1.lower, format!("{}|left", phi.source));
    let form_right = FormModel::new(s2, b2.lower, format!("{}|right", phi.source));
    let r1 = check_representable(&tp.left.algebra, &omega_left, tol)?;
    let r2 = check_representable(&tp.right.algebra, &omega_right, tol)?;
    let mut checks = vec![
        CheckEntry::flag("left-functional-representable", r1.representable, ""),
        CheckEntry::flag("right-functional-representable", r2.representable, ""),
    ];
    checks.extend(form_left.membership(&tp.left, tol)?.into_iter().map(|c| c.with_note("left form")));
    checks.extend(form_right.membership(&tp.right, tol)?.into_iter().map(|c| c.with_note("right form")));
    Ok(RestrictedPieces { omega_left, omega_right, form_left, form_right, checks })
}

/// `φ_Ω(c, c') = ⟨π_Ω(c)ξ_Ω, π_Ω(c')ξ_Ω⟩` with the minimal continuity constant.
#[derive(Clone, Debug, Serialize)]
pub struct PhiOmegaForm {
    pub omega: FunctionalModel,
    pub gns: GnsData,
    #[serde(serialize_with = "crate::ser::cmat")]
    pub matrix: CMat,
    /// Least `γ` with `φ_Ω(c, c) ≤ γ² ‖c‖²` (a lower estimate when `gamma_exact` is false).
    pub gamma_min: f64,
    pub gamma_exact: bool,
    pub min_eigenvalue: f64,
    /// Distance to the Gram form of `Ω`.
    pub restriction_residual: f64,
    /// Closedness of `φ_Ω` and of the identity into the completion hold at finite dimension.
    pub closed: bool,
    #[serde(skip)]
    norm: NormSpec,
}

impl PhiOmegaForm {
    pub fn eval(&self, c: &CVec, d: &CVec) -> C64 {
        d.dotc(&(&self.matrix * c))
    }

    /// `√(‖c‖² + φ_Ω(c, c))`.
    pub fn norm(&self, c: &CVec) -> f64 {
        let base = self.norm.eval(c);
        libm::sqrt(base * base + self.eval(c, c).re.max(0.0))
    }

    /// Largest `φ_Ω(c, c) − γ²` over random `c` of unit norm.
    pub fn bound_excess(&self, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = self.matrix.nrows();
        let g2 = self.gamma_min * self.gamma_min;
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..samples {
            let c = linalg::random_cvec(&mut rng, k);
            let c = &c * C64::new(1.0 / self.norm.eval(&c), 0.0);
            worst = worst.max(self.eval(&c, &c).re - g2);
        }
        worst
    }
}

pub fn phi_omega_build(tp: &TensorQuasiPair, omega: &FunctionalModel, tol: f64) -> Result<PhiOmegaForm> {
    let k = tp.combined.dim();
    check_dim(k, omega.dim())?;
    let g = gns(&tp.combined.algebra, omega, tol)?;
    let h = g.hilbert_dim;
    let mut orbit = CMat::zeros(h, k);
    for c in 0..k {
        orbit.set_column(c, &(&g.rep[c] * &g.cyclic_vector));
    }
    let matrix = orbit.adjoint() * &orbit;
    let gram = gram_of_functional(&tp.combined.algebra, omega)?;
    let restriction_residual = linalg::max_abs_diff(&matrix, &gram) / linalg::max_abs(gram.iter().copied()).max(1.0);
    let (gamma_min, gamma_exact) = if let Some(q) = tp.combined.norm.gram() {
        let qi = linalg::pd_power(&q, -0.5);
        (linalg::spectral_norm(&(&orbit * qi)), true)
    } else {
        let r = operator_norm(&OperatorMatrix::new(orbit.clone(), tp.combined.norm.clone(), NormSpec::l2(h))?)?;
        (r.value, r.exact)
    };
    Ok(PhiOmegaForm {
        omega: omega.clone(),
        min_eigenvalue: linalg::min_eigenvalue(&matrix),
        gns: g,
        matrix,
        gamma_min,
        gamma_exact,
        restriction_residual,
        closed: true,
        norm: tp.combined.norm.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
    Skipped,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectionResult {
    pub direction: String,
    pub verdict: Verdict,
    /// `guaranteed` when the hypotheses of the transfer theorem hold for the cross-norm, else `empirical`.
    pub hypothesis: String,
    pub margin: f64,
    pub note: String,
    #[serde(serialize_with = "crate::ser::cmats")]
    pub offending_forms: Vec<CMat>,
}

impl DirectionResult {
    fn new(direction: &str, verdict: Verdict, guaranteed: bool, margin: f64, note: impl Into<String>) -> Self {
        DirectionResult {
            direction: direction.into(),
            verdict,
            hypothesis: if guaranteed { "guaranteed" } else { "empirical" }.into(),
            margin,
            note: note.into(),
            offending_forms: Vec::new(),
        }
    }
}

fn implication(direction: &str, premise: bool, conclusion: bool, guaranteed: bool, margin: f64) -> DirectionResult {
    let verdict = match (premise, conclusion) {
        (false, _) => Verdict::Vacuous,
        (true, true) => Verdict::Pass,
        (true, false) => Verdict::Fail,
    };
    DirectionResult::new(direction, verdict, guaranteed, margin, "")
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyRecord {
    pub pair: String,
    pub functionals: Vec<FunctionalModel>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HarnessReport {
    pub instance: String,
    pub theorem: String,
    pub crossnorm: String,
    pub directions: Vec<DirectionResult>,
    pub facts: Vec<CheckEntry>,
    /// Continuity requirements that hold by construction at finite dimension.
    pub automatic: Vec<String>,
    pub families: Vec<FamilyRecord>,
    pub observations: Vec<String>,
    pub inconclusive: bool,
    pub passed: bool,
}

impl HarnessReport {
    fn finish(mut self) -> Self {
        self.inconclusive = self.directions.iter().any(|d| d.verdict == Verdict::Inconclusive);
        self.passed = !self.directions.iter().any(|d| d.verdict == Verdict::Fail);
        self
    }
}

fn ss_fact(label: &str, r: &SemisimpleReport) -> CheckEntry {
    let ok = r.verdict == SemisimpleVerdict::Semisimple;
    CheckEntry::flag(&format!("semisimple[{label}]"), ok, format!("{:?}, min ratio {:.3e}", r.verdict, r.min_eigenvalue))
}

/// Semisimplicity of both factors against that of the tensor pair.
pub fn theorem_ss_harness(p: &QuasiPair, q: &QuasiPair, kind: CrossNorm, tol: f64, seed: u64) -> Result<HarnessReport> {
    let tp = build_tensor_pair(p, q, kind)?;
    let rp = semisimple_check(p, tol, seed)?;
    let rq = semisimple_check(q, tol, seed)?;
    let rt = semisimple_check(&tp.combined, tol, seed)?;
    let mut report = HarnessReport {
        instance: tp.combined.label.clone(),
        theorem: "SS".into(),
        crossnorm: kind.tag().into(),
        directions: Vec::new(),
        facts: vec![ss_fact(&p.label, &rp), ss_fact(&q.label, &rq), ss_fact(&tp.combined.label, &rt)],
        automatic: vec!["strong* continuity of representations".into(), "barrelledness".into()],
        families: Vec::new(),
        observations: Vec::new(),
        inconclusive: false,
        passed: true,
    };
    let unknown = [&rp, &rq, &rt].iter().any(|r| r.verdict == SemisimpleVerdict::Unknown);
    if unknown {
        for d in ["(1)=>(2)", "(2)=>(1)"] {
            report.directions.push(DirectionResult::new(d, Verdict::Inconclusive, true, 0.0, "a semisimplicity check was inconclusive"));
        }
        return Ok(report.finish());
    }
    let ss = |r: &SemisimpleReport| r.verdict == SemisimpleVerdict::Semisimple;
    let factors = ss(&rp) && ss(&rq);
    let factor_margin = rp.min_eigenvalue.min(rq.min_eigenvalue);
    let mut forward = implication("(1)=>(2)", factors, ss(&rt), true, rt.min_eigenvalue);
    if forward.verdict == Verdict::Fail {
        forward.offending_forms = vec![rt.interior_form.clone()];
    }
    let mut backward = implication("(2)=>(1)", ss(&rt), factors, kind == CrossNorm::Projective, factor_margin);
    if backward.verdict == Verdict::Fail {
        backward.offending_forms = vec![rp.interior_form.clone(), rq.interior_form.clone()];
    }
    if backward.verdict == Verdict::Vacuous && !factors {
        backward.note = "tensor pair and a factor both fail, consistent with the contrapositive".into();
    }
    report.directions.push(forward);
    report.directions.push(backward);
    for (label, pair, r) in [(&p.label, p, &rp), (&q.label, q, &rq), (&tp.combined.label, &tp.combined, &rt)] {
        let probe = faithfulness_pairing(pair, tol, seed)?;
        let agree = probe.faithful == ss(r);
        report.observations.push(format!(
            "{label}: family representation {} faithful, semisimple verdict {:?}{}",
            if probe.faithful { "is" } else { "is not" },
            r.verdict,
            if agree { "" } else { " (disagree)" }
        ));
    }
    Ok(report.finish())
}

/// Choice of representable families for the full-representability harness.
#[derive(Clone, Debug)]
pub enum HarnessFamilies {
    Generated,
    Explicit(Vec<FunctionalModel>, Vec<FunctionalModel>),
}

fn fr_fact(label: &str, r: &FullRepReport) -> CheckEntry {
    CheckEntry::flag(
        &format!("fully-representable[{label}]"),
        r.fully_representable,
        format!("worst margin {:.3e}, family size {}", r.sufficiency.worst_margin, r.family.len()),
    )
}

/// Full representability of the factors against that of the tensor pair, the
/// latter tested with the products of the factor families.
pub fn full_rep_transfer_harness(
    p: &QuasiPair,
    q: &QuasiPair,
    kind: CrossNorm,
    families: &HarnessFamilies,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<HarnessReport> {
    let tp = build_tensor_pair(p, q, kind)?;
    let (gp, gq) = match families {
        HarnessFamilies::Generated => (FamilyGenerator::Generated, FamilyGenerator::Generated),
        HarnessFamilies::Explicit(a, b) => (FamilyGenerator::Explicit(a.clone()), FamilyGenerator::Explicit(b.clone())),
    };
    let rp = fully_representable_check(p, &gp, samples, tol, seed)?;
    let rq = fully_representable_check(q, &gq, samples, tol, seed)?;
    let products: Vec<FunctionalModel> = rp.family.iter().flat_map(|a| rq.family.iter().map(move |b| tensor_functional(a, b))).collect();
    let rt = fully_representable_check(&tp.combined, &FamilyGenerator::Explicit(products), samples, tol, seed)?;
    let cp = condition_p_check(p, &rp.family, samples, tol, seed)?;
    let cq = condition_p_check(q, &rq.family, samples, tol, seed)?;

    let mut facts = vec![fr_fact(&p.label, &rp), fr_fact(&q.label, &rq), fr_fact(&tp.combined.label, &rt)];
    for (label, c) in [(&p.label, &cp), (&q.label, &cq)] {
        facts.push(CheckEntry::flag(
            &format!("condition-p[{label}]"),
            c.holds && c.inconclusive == 0,
            format!("{} tested, {} met the hypothesis, {} inconclusive", c.tested, c.hypothesis_passed, c.inconclusive),
        ));
    }
    let factors = rp.fully_representable && rq.fully_representable;
    let tensor = rt.fully_representable;
    let margin = rt.sufficiency.worst_margin;
    let guaranteed = kind == CrossNorm::Projective;
    let p_inconclusive = cp.inconclusive > 0 || cq.inconclusive > 0;
    let p_holds = cp.holds && cq.holds;

    let mut directions = Vec::new();
    if p_inconclusive && p_holds {
        directions.push(DirectionResult::new("factors=>tensor", Verdict::Skipped, guaranteed, margin, "condition (P) inconclusive"));
    } else if !p_holds {
        directions.push(DirectionResult::new("factors=>tensor", Verdict::Skipped, guaranteed, margin, "condition (P) fails on a factor"));
    } else {
        directions.push(implication("factors=>tensor", factors, tensor, guaranteed, margin));
    }
    let mut backward = implication("tensor=>factors", tensor, factors, true, rp.sufficiency.worst_margin.min(rq.sufficiency.worst_margin));
    if backward.verdict == Verdict::Vacuous && !factors {
        backward.note = "tensor failure accompanies factor failure".into();
    }
    directions.push(backward);
    if p_holds && !p_inconclusive {
        let verdict = if factors == tensor { Verdict::Pass } else { Verdict::Fail };
        directions.push(DirectionResult::new("equivalence", verdict, guaranteed, margin, ""));
    }
    let report = HarnessReport {
        instance: tp.combined.label.clone(),
        theorem: "FR".into(),
        crossnorm: kind.tag().into(),
        directions,
        facts,
        automatic: vec!["weak continuity of representations".into(), "closure domains are the whole space".into()],
        families: vec![
            FamilyRecord { pair: p.label.clone(), functionals: rp.family.clone() },
            FamilyRecord { pair: q.label.clone(), functionals: rq.family.clone() },
            FamilyRecord { pair: tp.combined.label.clone(), functionals: rt.family.clone() },
        ],
        observations: Vec::new(),
        inconclusive: false,
        passed: true,
    };
    Ok(report.finish())
}

#[derive(Clone, Debug, Serialize)]
pub struct FaithfulnessReport {
    pub faithful: bool,
    pub rank: usize,
    #[serde(serialize_with = "crate::ser::cvecs")]
    pub kernel: Vec<CVec>,
}

/// Rank test on `a ↦ π(a)`; the kernel is returned as an orthonormal basis.
pub fn faithfulness_check(pi: &RepresentationModel) -> FaithfulnessReport {
    let n = pi.dim();
    let h2 = pi.hilbert_dim * pi.hilbert_dim;
    let mut m = CMat::zeros(h2, n);
    for (i, op) in pi.ops.iter().enumerate() {
        m.set_column(i, &linalg::flatten(op));
    }
    let dec = linalg::svd(&m);
    let top = dec.sigma.first().copied().unwrap_or(0.0);
    let rank = dec.sigma.iter().filter(|&&s| top > 0.0 && s > 1e-10 * top.max(1.0)).count();
    let mut proj = CMat::identity(n, n);
    for k in 0..rank {
        let v = dec.right(k);
        proj -= &v * v.adjoint();
    }
    let eig = linalg::herm_eigen(&proj);
    let kernel = (0..n).filter(|&k| eig.values[k] > 0.5).map(|k| eig.column(k)).collect();
    FaithfulnessReport { faithful: rank == n, rank, kernel }
}

/// Direct sum of the GNS representations of the generated family of `pair`.
pub fn family_representation(pair: &QuasiPair, tol: f64, seed: u64) -> Result<Option<RepresentationModel>> {
    let (family, _) = generated_family(pair, tol, seed)?;
    let mut out: Option<RepresentationModel> = None;
    for w in &family {
        let g = match gns(&pair.algebra, w, tol) {
            Ok(g) => g,
            Err(Error::EmptyHilbertSpace) => continue,
            Err(e) => return Err(e),
        };
        let r = RepresentationModel::from_gns(&g, pair.dim(), w.source.clone());
        out = Some(match out {
            None => r,
            Some(acc) => RepresentationModel::direct_sum(&acc, &r)?,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FaithfulnessPairing {
    pub faithful: bool,
    pub semisimple: SemisimpleVerdict,
    pub agree: bool,
}

pub fn faithfulness_pairing(pair: &QuasiPair, tol: f64, seed: u64) -> Result<FaithfulnessPairing> {
    let faithful = match family_representation(pair, tol, seed)? {
        Some(r) => faithfulness_check(&r).faithful,
        None => false,
    };
    let semisimple = semisimple_check(pair, SEMISIMPLE_TOL, seed)?.verdict;
    Ok(FaithfulnessPairing { faithful, semisimple, agree: faithful == (semisimple == SemisimpleVerdict::Semisimple) })
}

/// Outcome of searching for a unitary `U` with `U π_{ω₁⊗ω₂}(c) = (π_{ω₁} ⊗ π_{ω₂})(c) U`.
#[derive(Clone, Debug, Serialize)]
pub struct IntertwinerProbe {
    pub tensor_gns_dim: usize,
    pub product_dim: usize,
    pub cyclic_dim: usize,
    pub unitary_residual: f64,
    pub intertwining_residual: f64,
    pub equivalent: bool,
}

/// `U = K₂ K₁⁺`, where `K₁`, `K₂` map `c` to `π(c)ξ` in each representation.
pub fn intertwiner_probe(tp: &TensorQuasiPair, w1: &FunctionalModel, w2: &FunctionalModel, tol: f64) -> Result<IntertwinerProbe> {
    let (n, m) = (tp.n(), tp.m());
    let w = tensor_functional(w1, w2);
    let gt = gns(&tp.combined.algebra, &w, tol)?;
    let g1 = gns(&tp.left.algebra, w1, tol)?;
    let g2 = gns(&tp.right.algebra, w2, tol)?;
    let xi = linalg::kron_vec(&g1.cyclic_vector, &g2.cyclic_vector);
    let hp = xi.len();
    let mut k1 = CMat::zeros(gt.hilbert_dim, n * m);
    let mut k2 = CMat::zeros(hp, n * m);
    for c in 0..n * m {
        let e = linalg::basis(n * m, c);
        k1.set_column(c, &(&gt.rep[c] * &gt.cyclic_vector));
        k2.set_column(c, &(product_apply(&g1.rep, &g2.rep, n, m, &e) * &xi));
    }
    let k1_pinv = linalg::pinv_hermitian(&(k1.adjoint() * &k1), 1e-12) * k1.adjoint();
    let u = &k2 * k1_pinv;
    let unitary_residual = linalg::max_abs_diff(&(u.adjoint() * &u), &CMat::identity(gt.hilbert_dim, gt.hilbert_dim));
    let mut inter: f64 = 0.0;
    for c in 0..n * m {
        let e = linalg::basis(n * m, c);
        let lhs = &u * &gt.rep[c];
        let rhs = product_apply(&g1.rep, &g2.rep, n, m, &e) * &u;
        inter = inter.max(linalg::max_abs_diff(&lhs, &rhs));
    }
    let cyclic_dim = linalg::numerical_rank(&k2, 1e-10);
    let equivalent = unitary_residual < 1e-8 && inter < 1e-8 && cyclic_dim == hp;
    Ok(IntertwinerProbe {
        tensor_gns_dim: gt.hilbert_dim,
        product_dim: hp,
        cyclic_dim,
        unitary_residual,
        intertwining_residual: inter,
        equivalent,
    })
}

pub fn harness_summary(r: &HarnessReport) -> String {
    let parts: Vec<String> = r.directions.iter().map(|d| format!("{}:{:?}", d.direction, d.verdict)).collect();
    format!("{} {} [{}] {}", r.theorem, r.instance, r.crossnorm, parts.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::all_passed;
    use crate::linalg::{c64, real_vec, ONE};
    use proptest::prelude::*;

    fn pw(n: usize) -> QuasiPair {
        QuasiPair::new(StarAlgebraModel::pointwise(n), NormSpec::l2(n), format!("pw{n}")).unwrap()
    }

    fn scalar() -> QuasiPair {
        QuasiPair::new(StarAlgebraModel::scalar(), NormSpec::l2(1), "C").unwrap()
    }

    fn dual() -> QuasiPair {
        QuasiPair::new(StarAlgebraModel::dual_numbers(), NormSpec::l1(2), "dual").unwrap()
    }

    fn diag_ops(values: &[&[f64]]) -> RepresentationModel {
        let ops = values.iter().map(|d| CMat::from_diagonal(&real_vec(d))).collect();
        RepresentationModel::new("diag", ops, "A0").unwrap()
    }

    #[test]
    fn gns_of_product_restricts_to_diagonal_quasi_commuting_parts() {
        let tp = build_tensor_pair(&pw(2), &pw(2), CrossNorm::Hilbert).unwrap();
        let w = tensor_functional(&FunctionalModel::real(&[1.0, 2.0]), &FunctionalModel::real(&[3.0, 1.0]));
        let g = gns(&tp.combined.algebra, &w, 1e-10).unwrap();
        let pi = RepresentationModel::from_gns(&g, 4, "gns");
        let r = restrict_representation(&tp, &pi, REP_TOL).unwrap();
        assert!(!r.flagged, "{:?}", r.checks);
        assert!(all_passed(&r.checks));
        assert_eq!(r.left.hilbert_dim, 4);
        // π₁(e_0) is a projection of rank 2 (two cells where the first factor is 1)
        let eig = linalg::herm_eigen(&r.left.ops[0]);
        let ones = eig.values.iter().filter(|v| (*v - 1.0).abs() < 1e-9).count();
        assert_eq!(ones, 2);
    }

    #[test]
    fn trivial_character_restricts_to_characters() {
        let tp = build_tensor_pair(&pw(2), &pw(2), CrossNorm::Projective).unwrap();
        let values: Vec<&[f64]> = vec![&[1.0], &[0.0], &[0.0], &[0.0]];
        let pi = diag_ops(&values);
        let r = restrict_representation(&tp, &pi, REP_TOL).unwrap();
        assert!(!r.flagged);
        assert_eq!(r.left.ops[0][(0, 0)], ONE);
        assert_eq!(r.left.ops[1][(0, 0)], ZERO);
        assert_eq!(r.right.ops[0][(0, 0)], ONE);
    }

    #[test]
    fn restriction_of_kronecker_representation_round_trips() {
        let p = pw(2);
        let q = QuasiPair::new(StarAlgebraModel::matrix_units(2), NormSpec::l2(4), "m2").unwrap();
        let tp = build_tensor_pair(&p, &q, CrossNorm::Hilbert).unwrap();
        let p1 = RepresentationModel::left_regular(&p.algebra, "p");
        let p2 = RepresentationModel::left_regular(&q.algebra, "q");
        let pi = tensor_representation(&p1, &p2);
        assert_eq!(pi.hilbert_dim, 8);
        assert!(all_passed(&pi.checks(&tp.combined.algebra, REP_TOL).unwrap()));
        let r = restrict_representation(&tp, &pi, REP_TOL).unwrap();
        assert!(!r.flagged);
        let i2 = CMat::identity(4, 4);
        let i1 = CMat::identity(2, 2);
        for i in 0..2 {
            assert!(linalg::frobenius(&(&r.left.ops[i] - linalg::kron(&p1.ops[i], &i2))) < 1e-8);
        }
        for j in 0..4 {
            assert!(linalg::frobenius(&(&r.right.ops[j] - linalg::kron(&i1, &p2.ops[j]))) < 1e-8);
        }
    }

    #[test]
    fn violating_input_is_flagged() {
        let tp = build_tensor_pair(&pw(2), &pw(2), CrossNorm::Hilbert).unwrap();
        let values: Vec<&[f64]> = vec![&[1.0], &[1.0], &[1.0], &[1.0]];
        let r = restrict_representation(&tp, &diag_ops(&values), REP_TOL).unwrap();
        assert!(r.flagged);
    }

    #[test]
    fn restriction_needs_units() {
        let p = QuasiPair::new(StarAlgebraModel::dual_numbers(), NormSpec::l1(2), "d").unwrap();
        let nu = QuasiPair::new(StarAlgebraModel::matrix_units(1), NormSpec::l2(1), "c").unwrap();
        let tp = build_tensor_pair(&p, &nu, CrossNorm::Projective).unwrap();
        let pi = RepresentationModel::new("x", vec![CMat::zeros(1, 1); 2], "A0").unwrap();
        if tp.right.unit().is_none() || tp.left.unit().is_none() {
            assert_eq!(restrict_representation(&tp, &pi, REP_TOL).unwrap_err(), Error::NotUnital);
        }
    }

    #[test]
    fn vector_functionals_cover_zero_gns_and_coordinates() {
        let tp = build_tensor_pair(&pw(2), &pw(3), CrossNorm::Hilbert).unwrap();
        let w = tensor_functional(&FunctionalModel::real(&[1.0, 2.0]), &FunctionalModel::real(&[1.0, 1.0, 2.0]));
        let g = gns(&tp.combined.algebra, &w, 1e-10).unwrap();
        let pi = RepresentationModel::from_gns(&g, 6, "gns");
        let zero = CVec::zeros(pi.hilbert_dim);
        let (z1, z2) = vector_functionals_from_rep(&tp, &pi, &zero).unwrap();
        assert!(z1.coeffs.iter().chain(z2.coeffs.iter()).all(|z| *z == ZERO));
        assert!(check_representable(&tp.left.algebra, &z1, 1e-10).unwrap().representable);

        let (w1, w2) = vector_functionals_from_rep(&tp, &pi, &g.cyclic_vector).unwrap();
        // Ω(a⊗e) = ω₁(a)·ω₂(e) = ω₁(a)·4
        assert!((w1.coeffs[0] - c64(4.0, 0.0)).norm() < 1e-9);
        assert!((w1.coeffs[1] - c64(8.0, 0.0)).norm() < 1e-9);
        assert!((w2.coeffs[2] - c64(6.0, 0.0)).norm() < 1e-9);
        assert!(check_representable(&tp.right.algebra, &w2, 1e-10).unwrap().representable);

        let values: Vec<&[f64]> = vec![&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0], &[0.0, 0.0]];
        let tp2 = build_tensor_pair(&pw(2), &pw(2), CrossNorm::Hilbert).unwrap();
        let d = diag_ops(&values);
        let (c1, c2) = vector_functionals_from_rep(&tp2, &d, &linalg::basis(2, 1)).unwrap();
        assert_eq!(c1.coeffs, real_vec(&[1.0, 0.0]));
        assert_eq!(c2.coeffs, real_vec(&[0.0, 1.0]));
    }

    #[test]
    fn tensor_representation_of_scalars_and_diagonals() {
        let s = RepresentationModel::new("id", vec![CMat::identity(1, 1)], "A0").unwrap();
        let t = tensor_representation(&s, &s);
        assert_eq!(t.ops, vec![CMat::identity(1, 1)]);
        let a = diag_ops(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let b = diag_ops(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let ab = tensor_representation(&a, &b);
        assert_eq!(ab.hilbert_dim, 6);
        for op in &ab.ops {
            assert_eq!(op.clone(), CMat::from_diagonal(&op.diagonal()));
        }
    }

    #[test]
    fn tensor_functional_examples() {
        let w = tensor_functional(&FunctionalModel::real(&[1.0, 1.0]), &FunctionalModel::real(&[1.0, 1.0]));
        assert_eq!(w.coeffs, real_vec(&[1.0, 1.0, 1.0, 1.0]));
        let tp = build_tensor_pair(&pw(2), &pw(2), CrossNorm::Projective).unwrap();
        let w1 = FunctionalModel::real(&[2.0, 3.0]);
        let w2 = FunctionalModel::real(&[0.5, 0.5]);
        let wt = tensor_functional(&w1, &w2);
        let a = real_vec(&[1.5, -2.0]);
        let e = tp.right.unit().unwrap().clone();
        let expected = w1.apply(&a) * w2.apply(&e);
        assert!((wt.apply(&linalg::kron_vec(&a, &e)) - expected).norm() < 1e-12);
        let r = tensor_functional_check(&tp, &w1, &w2, 20, 1e-10, 3).unwrap();
        assert!(all_passed(&r.checks), "{:?}", r.checks);
    }

    #[test]
    fn tensor_functional_on_non_unital_factors_reproduces() {
        let p = QuasiPair::new(StarAlgebraModel::matrix_units(2), NormSpec::l2(4), "m2").unwrap();
        let w1 = FunctionalModel::real(&[1.0, 0.0, 0.0, 2.0]);
        let tp = build_tensor_pair(&p, &dual(), CrossNorm::Projective).unwrap();
        let w2 = FunctionalModel::real(&[1.0, 0.0]);
        let r = tensor_functional_check(&tp, &w1, &w2, 10, 1e-9, 1).unwrap();
        assert!(all_passed(&r.checks), "{:?}", r.checks);
    }

    #[test]
    fn identity_forms_tensor_to_identity() {
        let p = QuasiPair::new(StarAlgebraModel::matrix_units(2), NormSpec::l2(4), "m2").unwrap();
        let tp = build_tensor_pair(&p, &p, CrossNorm::Hilbert).unwrap();
        let id = FormModel::new(CMat::identity(4, 4), 1.0, "id");
        let r = tensor_form(&tp, &id, &id, 30, 1).unwrap();
        assert!(all_passed(&r.checks), "{:?}", r.checks);
        assert!(r.joint.exact);
        // the factor norms are rescaled so that the unit has norm one
        let single = form_norm(&CMat::identity(4, 4), &p.norm).unwrap();
        assert!((r.joint.lower - single * single).abs() < 1e-12);
        let expected = CMat::identity(16, 16) * c64(1.0 / r.joint.lower, 0.0);
        assert!(linalg::max_abs_diff(&r.form.matrix, &expected) < 1e-12);
        assert!(all_passed(&r.form.membership(&tp.combined, 1e-9).unwrap()));
        let zero = FormModel::new(CMat::zeros(4, 4), 0.0, "0");
        assert!(tensor_form(&tp, &zero, &id, 1, 1).is_err());
    }

    #[test]
    fn projective_joint_norm_is_the_product() {
        let p = pw(2);
        let tp = build_tensor_pair(&p, &p, CrossNorm::Projective).unwrap();
        let s = CMat::from_diagonal(&real_vec(&[1.0, 3.0]));
        let f = FormModel::new(s.clone(), 1.0, "d");
        let r = tensor_form(&tp, &f, &f, 30, 2).unwrap();
        let single = form_norm(&s, &p.norm).unwrap();
        assert!((r.joint.lower - single * single).abs() < 1e-9);
        assert!(all_passed(&r.checks));
    }

    #[test]
    fn restriction_round_trips_product_functionals_and_forms() {
        let tp = build_tensor_pair(&pw(2), &pw(2), CrossNorm::Projective).unwrap();
        let w1 = FunctionalModel::real(&[1.0, 3.0]);
        let w2 = FunctionalModel::real(&[0.5, 0.5]);
        let f1 = FormModel::new(CMat::from_diagonal(&real_vec(&[0.2, 0.7])), 1.0, "f1");
        let f2 = FormModel::new(CMat::from_diagonal(&real_vec(&[0.5, 0.5])), 1.0, "f2");
        let tf = tensor_form(&tp, &f1, &f2, 10, 1).unwrap();
        let r = restrict_functional_and_form(&tp, &tensor_functional(&w1, &w2), &tf.form, 1e-9).unwrap();
        assert!((&r.omega_left.coeffs - &w1.coeffs).norm() < 1e-12);
        // φ₂'(e, e) = 1, so φ₁ is proportional to φ₁'
        let ratio = r.form_left.matrix[(0, 0)] / f1.matrix[(0, 0)];
        assert!(linalg::max_abs_diff(&r.form_left.matrix, &(&f1.matrix * ratio)) < 1e-12);
        assert!(all_passed(&r.checks), "{:?}", r.checks);
    }

    #[test]
    fn identity_form_restricts_to_scaled_identity() {
        let tp = build_tensor_pair(&pw(2), &pw(3), CrossNorm::Hilbert).unwrap();
        let id = FormModel::new(CMat::identity(6, 6), 1.0, "id");
        let w = FunctionalModel::real(&[1.0; 6]);
        let r = restrict_functional_and_form(&tp, &w, &id, 1e-9).unwrap();
        let eb = tp.right.unit().unwrap().norm_squared();
        assert!(linalg::max_abs_diff(&r.form_left.matrix, &(CMat::identity(2, 2) * c64(eb, 0.0))) < 1e-12);
    }

    #[test]
    fn phi_omega_of_identity_gram_product() {
        let p = QuasiPair::new(StarAlgebraModel::matrix_units(2), NormSpec::l2(4), "m2").unwrap();
        let tp = build_tensor_pair(&p, &p, CrossNorm::Hilbert).unwrap();
        // trace is the functional whose Gram matrix on matrix units is the identity
        let tr = FunctionalModel::real(&[1.0, 0.0, 0.0, 1.0]);
        let g1 = gram_of_functional(&p.algebra, &tr).unwrap();
        assert!(linalg::max_abs_diff(&g1, &CMat::identity(4, 4)) < 1e-12);
        let phi = phi_omega_build(&tp, &tensor_functional(&tr, &tr), 1e-10).unwrap();
        assert!(linalg::max_abs_diff(&phi.matrix, &CMat::identity(16, 16)) < 1e-9);
        assert!(phi.restriction_residual < 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = linalg::random_cvec(&mut rng, 16);
        let h = tp.combined.norm.eval(&c);
        assert!((phi.norm(&c) - (h * h + c.norm_squared()).sqrt()).abs() < 1e-9);
        assert_eq!(phi.norm(&CVec::zeros(16)), 0.0);
        assert!(phi.bound_excess(200, 1) <= 1e-8);
    }

    #[test]
    fn minimal_gamma_matches_generalized_eigen_oracle() {
        let tp = build_tensor_pair(&pw(2), &pw(2), CrossNorm::Hilbert).unwrap();
        let w = tensor_functional(&FunctionalModel::real(&[1.0, 4.0]), &FunctionalModel::real(&[2.0, 1.0]));
        let phi = phi_omega_build(&tp, &w, 1e-10).unwrap();
        let oracle = (0..4)
            .map(|k| {
                let e = linalg::basis(4, k);
                phi.eval(&e, &e).re.sqrt() / tp.combined.norm.eval(&e)
            })
            .fold(0.0, f64::max);
        assert!((phi.gamma_min - oracle).abs() < 1e-9, "{} vs {}", phi.gamma_min, oracle);
        assert!(phi.gamma_exact);
    }

    #[test]
    fn phi_omega_rejects_non_representable() {
        let tp = build_tensor_pair(&pw(2), &pw(2), CrossNorm::Projective).unwrap();
        assert!(phi_omega_build(&tp, &FunctionalModel::real(&[1.0, -1.0, 0.0, 0.0]), 1e-10).is_err());
    }

    #[test]
    fn ss_harness_pointwise_and_scalars() {
        let r = theorem_ss_harness(&pw(2), &pw(2), CrossNorm::Hilbert, SEMISIMPLE_TOL, 1).unwrap();
        assert!(r.passed && !r.inconclusive);
        assert!(r.directions.iter().all(|d| d.verdict == Verdict::Pass), "{:?}", r.directions);
        let s = theorem_ss_harness(&scalar(), &scalar(), CrossNorm::Projective, SEMISIMPLE_TOL, 1).unwrap();
        assert!(s.directions.iter().all(|d| d.verdict == Verdict::Pass));
    }

    #[test]
    fn ss_harness_nilpotent_factor() {
        let r = theorem_ss_harness(&dual(), &pw(2), CrossNorm::Projective, SEMISIMPLE_TOL, 1).unwrap();
        assert!(r.passed, "{:?}", r);
        assert_eq!(r.directions[0].verdict, Verdict::Vacuous);
        assert_eq!(r.directions[1].verdict, Verdict::Vacuous);
        assert!(!r.facts[2].passed, "tensor pair should not be semisimple");
    }

    #[test]
    fn full_rep_harness_coordinate_families() {
        let fam = |n: usize| (0..n).map(|i| FunctionalModel::coordinate(n, i)).collect::<Vec<_>>();
        let r = full_rep_transfer_harness(&pw(2), &pw(2), CrossNorm::Projective, &HarnessFamilies::Explicit(fam(2), fam(2)), 10, 1e-9, 1)
            .unwrap();
        assert!(r.passed, "{:?}", r.directions);
        assert!(r.directions.iter().any(|d| d.direction == "equivalence" && d.verdict == Verdict::Pass));
        let s = full_rep_transfer_harness(&scalar(), &scalar(), CrossNorm::Projective, &HarnessFamilies::Generated, 5, 1e-9, 1).unwrap();
        assert!(s.passed);
    }

    #[test]
    fn full_rep_harness_insufficient_family_fails_on_both_sides() {
        let fam2 = vec![FunctionalModel::coordinate(2, 0), FunctionalModel::coordinate(2, 1)];
        let r = full_rep_transfer_harness(
            &pw(2),
            &pw(2),
            CrossNorm::Projective,
            &HarnessFamilies::Explicit(vec![FunctionalModel::coordinate(2, 0)], fam2),
            10,
            1e-9,
            1,
        )
        .unwrap();
        assert!(!r.facts[0].passed);
        assert!(!r.facts[2].passed);
        assert!(r.passed, "{:?}", r.directions);
    }

    #[test]
    fn faithfulness_examples() {
        let id = RepresentationModel::left_regular(&StarAlgebraModel::pointwise(3), "id");
        assert!(faithfulness_check(&id).faithful);
        let d = diag_ops(&[&[1.0, 0.0], &[0.0, 0.0], &[0.0, 1.0]]);
        let r = faithfulness_check(&d);
        assert!(!r.faithful);
        assert_eq!(r.kernel.len(), 1);
        assert!((r.kernel[0][1].norm() - 1.0).abs() < 1e-12);
        let p = faithfulness_pairing(&pw(3), 1e-9, 1).unwrap();
        assert!(p.faithful && p.agree);
        let q = faithfulness_pairing(&dual(), 1e-9, 1).unwrap();
        assert!(!q.faithful && q.agree);
    }

    #[test]
    fn intertwiner_exists_for_pointwise_products() {
        let tp = build_tensor_pair(&pw(2), &pw(2), CrossNorm::Hilbert).unwrap();
        let probe = intertwiner_probe(&tp, &FunctionalModel::real(&[1.0, 2.0]), &FunctionalModel::real(&[1.0, 3.0]), 1e-10).unwrap();
        assert!(probe.equivalent, "{probe:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn gram_factorizes_over_tensor(a in proptest::collection::vec(0.1f64..3.0, 2), b in proptest::collection::vec(0.1f64..3.0, 3)) {
            let p = pw(2);
            let q = QuasiPair::new(StarAlgebraModel::cyclic_group(3), NormSpec::l1(3), "z3").unwrap();
            let w1 = FunctionalModel::real(&a);
            let w2 = FunctionalModel::new(CVec::from_iterator(3, b.iter().enumerate().map(|(i, x)| if i == 0 { c64(*x + 10.0, 0.0) } else { c64(*x, 0.0) })), "w2");
            let tp = build_tensor_pair(&p, &q, CrossNorm::Projective).unwrap();
            let g = gram_of_functional(&tp.combined.algebra, &tensor_functional(&w1, &w2)).unwrap();
            let gk = linalg::kron(&gram_of_functional(&p.algebra, &w1).unwrap(), &gram_of_functional(&q.algebra, &w2).unwrap());
            prop_assert!(linalg::max_abs_diff(&g, &gk) < 1e-12 * linalg::max_abs(gk.iter().copied()).max(1.0));
        }

        #[test]
        fn phi_omega_agrees_with_gram_form(a in proptest::collection::vec(0.1f64..3.0, 2), b in proptest::collection::vec(0.1f64..3.0, 2)) {
            let tp = build_tensor_pair(&pw(2), &pw(2), CrossNorm::Projective).unwrap();
            let phi = phi_omega_build(&tp, &tensor_functional(&FunctionalModel::real(&a), &FunctionalModel::real(&b)), 1e-10).unwrap();
            prop_assert!(phi.restriction_residual < 1e-10);
            prop_assert!(phi.bound_excess(50, 3) <= 1e-8);
        }
    }
}
