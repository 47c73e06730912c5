//! Representable functionals, their GNS representations, the positive cone,
//! sufficiency, *-semisimplicity, full representability and condition (P).
//!
//! A functional is a coefficient vector, `ω(a) = Σ ω_i a_i`. Its Gram matrix
//! is `G_ij = ω(e_i* e_j)`, so that `ω(y*x) = yᴴ G x`. A form is a Hermitian
//! matrix `S` with `Ω(a, b) = bᴴ S a`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::StarAlgebraModel;
use crate::check::CheckEntry;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, c64, CMat, CVec, RMat, RVec, C64, ONE, ZERO};
use crate::lmi::{self, LinearRow, Lmi, LmiOptions, MatrixBlock};
use crate::norm::NormSpec;
use crate::operator::{operator_norm, OperatorMatrix};
use crate::pair::QuasiPair;

#[derive(Clone, Debug, Serialize)]
pub struct FunctionalModel {
    #[serde(serialize_with = "crate::ser::cvec")]
    pub coeffs: CVec,
    /// Which generator produced the functional.
    pub source: String,
}

impl FunctionalModel {
    pub fn new(coeffs: CVec, source: impl Into<String>) -> Self {
        FunctionalModel { coeffs, source: source.into() }
    }

    pub fn real(values: &[f64]) -> Self {
        Self::new(linalg::real_vec(values), "explicit")
    }

    pub fn zero(n: usize) -> Self {
        Self::new(CVec::zeros(n), "zero")
    }

    pub fn coordinate(n: usize, i: usize) -> Self {
        Self::new(linalg::basis(n, i), format!("coordinate-{i}"))
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn apply(&self, a: &CVec) -> C64 {
        linalg::bilinear(&self.coeffs, a)
    }

    /// `a ↦ ω(x* a x)`.
    pub fn conjugated_by(&self, alg: &StarAlgebraModel, x: &CVec) -> Self {
        let m = alg.left_matrix(&alg.star(x)) * alg.right_matrix(x);
        Self::new(m.transpose() * &self.coeffs, format!("{}-conjugated", self.source))
    }

    /// The vector functional `a ↦ Ω(a·x, x)` of a form.
    pub fn vector_state(alg: &StarAlgebraModel, form: &CMat, x: &CVec) -> Self {
        let row = x.adjoint() * form * alg.right_matrix(x);
        Self::new(row.transpose(), "vector-state")
    }
}

pub fn gram_of_functional(alg: &StarAlgebraModel, omega: &FunctionalModel) -> Result<CMat> {
    check_dim(alg.dim(), omega.dim())?;
    let n = alg.dim();
    let stars: Vec<CVec> = (0..n).map(|i| alg.star(&alg.basis(i))).collect();
    Ok(CMat::from_fn(n, n, |i, j| omega.apply(&alg.multiply(&stars[i], &alg.basis(j)))))
}

fn scale_of(m: &CMat) -> f64 {
    let s = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

/// Certificate that `ω(x*a) ≠ 0` although `ω(x*x) = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct RangeWitness {
    pub basis_index: usize,
    #[serde(serialize_with = "crate::ser::cvec")]
    pub x: CVec,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentabilityReport {
    pub representable: bool,
    pub checks: Vec<CheckEntry>,
    pub min_eigenvalue: f64,
    /// `x` with `ω(x*x)` negative or non-real.
    #[serde(serialize_with = "crate::ser::opt_cvec")]
    pub negative_witness: Option<CVec>,
    pub range_witness: Option<RangeWitness>,
    /// Minimal constant in the boundedness condition, per basis element.
    pub gamma: Vec<f64>,
}

/// Checks positivity, symmetry and boundedness of `ω` with relative tolerance `tol`.
pub fn check_representable(alg: &StarAlgebraModel, omega: &FunctionalModel, tol: f64) -> Result<RepresentabilityReport> {
    let n = alg.dim();
    let g = gram_of_functional(alg, omega)?;
    let scale = scale_of(&g);
    let mut checks = Vec::new();

    let herm = linalg::hermitian_residual(&g) / scale;
    let eig = linalg::herm_eigen(&g);
    let min_eig = eig.min() / scale;
    let mut negative_witness = None;
    if herm > tol {
        let k = linalg::herm_eigen(&((&g - g.adjoint()) * c64(0.0, -0.5)));
        let idx = if k.values[0].abs() > k.values[n - 1].abs() { 0 } else { n - 1 };
        negative_witness = Some(k.column(idx));
    } else if min_eig < -tol {
        negative_witness = Some(eig.column(0));
    }
    checks.push(CheckEntry::residual("positivity", herm.max(-min_eig).max(0.0), tol));

    let stars: Vec<CVec> = (0..n).map(|i| alg.star(&alg.basis(i))).collect();
    let mut sym: f64 = 0.0;
    for a in 0..n {
        for x in 0..n {
            let ax = alg.multiply(&stars[a], &alg.basis(x));
            for y in 0..n {
                let lhs = omega.apply(&alg.multiply(&stars[y], &ax));
                let xa = alg.multiply(&stars[x], &alg.basis(a));
                let rhs = omega.apply(&alg.multiply(&xa, &alg.basis(y))).conj();
                sym = sym.max((lhs - rhs).norm());
            }
        }
    }
    checks.push(CheckEntry::residual("symmetry", sym / scale, tol));

    let pinv = linalg::pinv_hermitian(&g, 1e-10);
    let proj = &g * &pinv;
    let mut gamma = Vec::with_capacity(n);
    let mut range_res: f64 = 0.0;
    let mut range_witness = None;
    for a in 0..n {
        let w = CVec::from_fn(n, |j, _| omega.apply(&alg.multiply(&stars[a], &alg.basis(j))).conj());
        let resid = &w - &proj * &w;
        let r = linalg::vec_norm2(&resid) / scale;
        if r > range_res {
            range_res = r;
            if r > tol {
                range_witness = Some(RangeWitness { basis_index: a, x: resid.clone() });
            }
        }
        gamma.push(libm::sqrt(w.dotc(&(&pinv * &w)).re.max(0.0)));
    }
    checks.push(CheckEntry::residual("boundedness", range_res, tol));

    let representable = checks.iter().all(|c| c.passed);
    Ok(RepresentabilityReport { representable, checks, min_eigenvalue: eig.min(), negative_witness, range_witness, gamma })
}

#[derive(Clone, Debug, Serialize)]
pub struct GnsData {
    pub hilbert_dim: usize,
    /// `κ`, mapping algebra coordinates to Hilbert-space coordinates.
    #[serde(serialize_with = "crate::ser::cmat")]
    pub embedding: CMat,
    /// `π(e_i)` for each basis element of the (possibly unitized) algebra.
    #[serde(serialize_with = "crate::ser::cmats")]
    pub rep: Vec<CMat>,
    #[serde(serialize_with = "crate::ser::cvec")]
    pub cyclic_vector: CVec,
    pub spectrum_cutoff: f64,
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues within two decades of the cutoff.
    pub near_cutoff: usize,
    /// Value given to `ω(e)` when the pair had to be unitized first.
    pub unit_value: Option<f64>,
    pub checks: Vec<CheckEntry>,
}

impl GnsData {
    pub fn apply(&self, a: &CVec) -> CMat {
        let mut out = CMat::zeros(self.hilbert_dim, self.hilbert_dim);
        for (k, p) in self.rep.iter().enumerate() {
            if k < a.len() && a[k] != ZERO {
                out += p * a[k];
            }
        }
        out
    }

    /// `⟨π(a)ξ, π(b)ξ⟩`.
    pub fn form(&self, a: &CVec, b: &CVec) -> C64 {
        let u = self.apply(a) * &self.cyclic_vector;
        let v = self.apply(b) * &self.cyclic_vector;
        v.dotc(&u)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub const GNS_CUTOFF: f64 = 1e-10;

/// GNS construction; non-unital pairs are unitized with the least `ω(e)`
/// keeping the extended Gram matrix positive.
pub fn gns(alg: &StarAlgebraModel, omega: &FunctionalModel, tol: f64) -> Result<GnsData> {
    let report = check_representable(alg, omega, tol)?;
    if !report.representable {
        let failed: Vec<String> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        return Err(Error::NotRepresentable(failed.join(", ")));
    }
    if alg.unit().is_some() {
        return gns_unital(alg, omega, None);
    }
    let ext = alg.unitized();
    let n = alg.dim();
    let g = gram_of_functional(alg, omega)?;
    let col: Vec<C64> = (0..n).map(|i| omega.apply(&alg.star(&alg.basis(i)))).collect();
    let row: Vec<C64> = (0..n).map(|j| omega.coeffs[j]).collect();
    let gram_at = |t: f64| {
        let mut m = CMat::zeros(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(&g);
        for i in 0..n {
            m[(i, n)] = col[i];
            m[(n, i)] = row[i];
        }
        m[(n, n)] = c64(t, 0.0);
        m
    };
    let scale = scale_of(&g).max(omega.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max));
    let psd = |t: f64| linalg::min_eigenvalue(&gram_at(t)) >= -1e-13 * scale.max(t);
    let mut hi = scale;
    let mut tries = 0;
    while !psd(hi) {
        hi *= 2.0;
        tries += 1;
        if tries > 200 {
            return Err(Error::NotRepresentable("no value of ω(e) makes the extended Gram matrix positive".into()));
        }
    }
    let mut lo = 0.0;
    if psd(lo) {
        hi = 0.0;
    }
    for _ in 0..200 {
        if hi - lo <= 1e-15 * hi.max(1e-300) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if psd(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut coeffs = omega.coeffs.clone().resize_vertically(n + 1, ZERO);
    coeffs[n] = c64(hi, 0.0);
    let ext_omega = FunctionalModel::new(coeffs, format!("{}-unitized", omega.source));
    gns_unital(&ext, &ext_omega, Some(hi))
}

fn gns_unital(alg: &StarAlgebraModel, omega: &FunctionalModel, unit_value: Option<f64>) -> Result<GnsData> {
    let n = alg.dim();
    let e = alg.unit().cloned().ok_or(Error::NotUnital)?;
    let g = linalg::hermitian_part(&gram_of_functional(alg, omega)?);
    let eig = linalg::herm_eigen(&g);
    let top = eig.values.iter().copied().fold(0.0, f64::max);
    let cut = GNS_CUTOFF * top;
    let keep: Vec<usize> = (0..n).filter(|&k| top > 0.0 && eig.values[k] > cut).collect();
    if keep.is_empty() {
        return Err(Error::EmptyHilbertSpace);
    }
    let h = keep.len();
    let kappa = CMat::from_fn(h, n, |r, c| eig.vectors[(c, keep[r])].conj() * libm::sqrt(eig.values[keep[r]]));
    let kappa_pinv = CMat::from_fn(n, h, |r, c| eig.vectors[(r, keep[c])] / libm::sqrt(eig.values[keep[c]]));
    let rep: Vec<CMat> = (0..n).map(|i| &kappa * alg.left_matrix(&alg.basis(i)) * &kappa_pinv).collect();
    let xi = &kappa * &e;
    let near = eig.values.iter().filter(|&&l| l > cut * 1e-2 && l < cut * 1e2).count();

    let mut data = GnsData {
        hilbert_dim: h,
        embedding: kappa,
        rep,
        cyclic_vector: xi,
        spectrum_cutoff: cut,
        eigenvalues: eig.values.clone(),
        near_cutoff: near,
        unit_value,
        checks: Vec::new(),
    };
    let scale = scale_of(&g);
    let mut repro: f64 = 0.0;
    let mut star: f64 = 0.0;
    let mut mult: f64 = 0.0;
    let mut form: f64 = 0.0;
    let rep_scale = data.rep.iter().map(linalg::frobenius).fold(1.0, f64::max);
    for i in 0..n {
        let bi = alg.basis(i);
        let pi = &data.rep[i];
        let val = (pi * &data.cyclic_vector).dotc(&data.cyclic_vector).conj();
        repro = repro.max((val - omega.apply(&bi)).norm() / scale);
        let ps = data.apply(&alg.star(&bi));
        star = star.max(linalg::frobenius(&(ps - pi.adjoint())) / rep_scale);
        for j in 0..n {
            let bj = alg.basis(j);
            let prod = data.apply(&alg.multiply(&bi, &bj));
            mult = mult.max(linalg::frobenius(&(prod - pi * &data.rep[j])) / (rep_scale * rep_scale));
            let expected = omega.apply(&alg.multiply(&alg.star(&bj), &bi));
            form = form.max((data.form(&bi, &bj) - expected).norm() / scale);
        }
    }
    let orbit = CMat::from_fn(h, n, |r, c| (&data.rep[c] * &data.cyclic_vector)[r]);
    let rank = linalg::numerical_rank(&orbit, 1e-8);
    data.checks.push(CheckEntry::residual("reproduction", repro, 1e-8));
    data.checks.push(CheckEntry::residual("star-property", star, 1e-10));
    data.checks.push(CheckEntry::residual("multiplicativity", mult, 1e-10));
    data.checks.push(CheckEntry::residual("form", form, 1e-8));
    data.checks.push(CheckEntry::flag("cyclicity", rank == h, format!("orbit rank {rank}, dimension {h}")));
    Ok(data)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    /// An exact sum-of-squares decomposition was found.
    Member,
    /// Within tolerance of the cone but no exact decomposition.
    ClosureMember,
    NonMember,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeMembership {
    pub verdict: Membership,
    /// Largest `t` with `P − tI ⪰ 0` over representations of `a`.
    pub margin: f64,
    /// Sum-of-squares terms `x_k` with `Σ x_k* x_k ≈ a`.
    #[serde(serialize_with = "crate::ser::cvecs")]
    pub squares: Vec<CVec>,
    pub sos_residual: f64,
    /// Functional with `Re ω ≥ 0` on the cone and `Re ω(a) < 0`.
    pub separating: Option<FunctionalModel>,
    pub span_residual: f64,
    pub gap: f64,
}

/// `[Φ(H_k)]` as real columns: `Φ(P) = Σ P_ij e_i* e_j`.
fn square_map(alg: &StarAlgebraModel) -> (RMat, Vec<CMat>) {
    let n = alg.dim();
    let basis = lmi::hermitian_basis(n);
    let stars: Vec<CVec> = (0..n).map(|i| alg.star(&alg.basis(i))).collect();
    let prods: Vec<Vec<CVec>> = (0..n).map(|i| (0..n).map(|j| alg.multiply(&stars[i], &alg.basis(j))).collect()).collect();
    let mut a = RMat::zeros(2 * n, basis.len());
    for (k, h) in basis.iter().enumerate() {
        let mut v = CVec::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if h[(i, j)] != ZERO {
                    v += &prods[i][j] * h[(i, j)];
                }
            }
        }
        for r in 0..n {
            a[(2 * r, k)] = v[r].re;
            a[(2 * r + 1, k)] = v[r].im;
        }
    }
    (a, basis)
}

fn complex_to_real(v: &CVec) -> RVec {
    RVec::from_fn(2 * v.len(), |r, _| if r % 2 == 0 { v[r / 2].re } else { v[r / 2].im })
}

fn real_to_complex(v: &RVec) -> CVec {
    CVec::from_fn(v.len() / 2, |r, _| c64(v[2 * r], v[2 * r + 1]))
}

/// Functional `ω` whose real part reproduces the real linear map `ρ` (on
/// `ℂⁿ ≅ ℝ²ⁿ`), symmetrized so that `ω(a*) = conj(ω(a))`.
fn hermitian_functional(alg: &StarAlgebraModel, rho: &RVec) -> CVec {
    let w = real_to_complex(rho).map(|z| z.conj());
    let back = alg.involution().adjoint() * w.map(|z| z.conj());
    (w + back) * c64(0.5, 0.0)
}

pub const TRACE_CAP: f64 = 1e6;

/// Decides whether `a` is a sum of squares `Σ x_k* x_k`, up to `tol`
/// relative to `max(1, |a|)`.
pub fn positive_cone_membership(alg: &StarAlgebraModel, a: &CVec, tol: f64) -> Result<ConeMembership> {
    check_dim(alg.dim(), a.len())?;
    let n = alg.dim();
    let scale = linalg::max_abs(a.iter().copied()).max(1.0);
    let (amat, basis) = square_map(alg);
    let b = complex_to_real(a);
    let normal = amat.transpose() * &amat;
    let (vals, vecs) = linalg::sym_eigen(&normal);
    let top = vals.last().copied().unwrap_or(0.0);
    let mut pinv = RMat::zeros(normal.nrows(), normal.ncols());
    for (k, &l) in vals.iter().enumerate() {
        if l > 1e-12 * top && l > 0.0 {
            let u = vecs.column(k);
            pinv += (u * u.transpose()) / l;
        }
    }
    let theta0 = &pinv * (amat.transpose() * &b);
    let resid = &b - &amat * &theta0;
    let span_residual = resid.norm() / scale;
    if span_residual > tol {
        // Vanishes on every square, so only its real part separates.
        let mut w = real_to_complex(&resid).map(|z| z.conj());
        let nrm = linalg::max_abs(w.iter().copied());
        w.unscale_mut(nrm);
        return Ok(ConeMembership {
            verdict: Membership::NonMember,
            margin: f64::NEG_INFINITY,
            squares: Vec::new(),
            sos_residual: f64::INFINITY,
            separating: Some(FunctionalModel::new(-w, "separating")),
            span_residual,
            gap: 0.0,
        });
    }

    // Directions that leave Φ(P) unchanged.
    let null = linalg::real_null_space(&amat, 1e-9);
    let r = null.ncols();
    let null_mats: Vec<CMat> = (0..r).map(|c| lmi::combine(&CMat::zeros(n, n), &basis, &null.column(c).into_owned())).collect();
    let p0 = lmi::combine(&CMat::zeros(n, n), &basis, &theta0);

    // Variables: null-space coordinates then t. Maximize t subject to
    // P − tI ⪰ 0 and tr P ≤ cap.
    let cap = TRACE_CAP * scale;
    let mut coeffs = null_mats.clone();
    coeffs.push(-CMat::identity(n, n));
    let mut prob = Lmi::new(r + 1);
    prob.blocks.push(MatrixBlock { constant: p0.clone(), coeffs });
    let mut trace_row: Vec<f64> = null_mats.iter().map(|m| -m.trace().re).collect();
    trace_row.push(0.0);
    prob.rows.push(LinearRow { constant: cap - p0.trace().re, coeffs: trace_row });
    let mut start = RVec::zeros(r + 1);
    start[r] = linalg::min_eigenvalue(&p0) - 1.0;
    if !prob.strictly_feasible(&start) {
        return Ok(unknown_membership(span_residual));
    }
    let mut c = RVec::zeros(r + 1);
    c[r] = 1.0;
    let res = prob.maximize(&c, &start, &LmiOptions { gap_tol: 1e-10 * scale, ..LmiOptions::default() });
    let t_star = res.theta[r];
    let margin = t_star;
    let p = lmi::combine(&p0, &null_mats, &res.theta.rows(0, r).into_owned());

    if margin >= -tol * scale {
        let eig = linalg::herm_eigen(&p);
        let mut squares = Vec::new();
        let mut total = CVec::zeros(n);
        for k in 0..n {
            let l = eig.values[k];
            if l > 0.0 {
                let x = eig.column(k).map(|z| z.conj()) * c64(libm::sqrt(l), 0.0);
                total += alg.multiply(&alg.star(&x), &x);
                squares.push(x);
            }
        }
        let sos_residual = linalg::max_abs((total - a).iter().copied()) / scale;
        let verdict = if sos_residual <= tol.max(1e-9) { Membership::Member } else { Membership::ClosureMember };
        return Ok(ConeMembership { verdict, margin, squares, sos_residual, separating: None, span_residual, gap: res.gap });
    }

    // Dual direction from the barrier: Z ∝ (P − tI)⁻¹, restricted to the image of Φ.
    let f = &p - CMat::identity(n, n) * c64(t_star, 0.0);
    let separating = f.clone().try_inverse().and_then(|z| {
        let z = linalg::hermitian_part(&z);
        let zt = RVec::from_iterator(basis.len(), basis.iter().map(|h| (z.adjoint() * h).trace().re));
        let rho = linalg_lstsq_real(&amat.transpose(), &zt);
        let mut w = hermitian_functional(alg, &rho);
        let nrm = linalg::max_abs(w.iter().copied());
        if nrm == 0.0 {
            return None;
        }
        w.unscale_mut(nrm);
        let omega = FunctionalModel::new(w, "separating");
        let g = gram_of_functional(alg, &omega).ok()?;
        let positive = linalg::min_eigenvalue(&g) >= -1e-8 * scale_of(&g);
        (positive && omega.apply(a).re < 0.0).then_some(omega)
    });
    let verdict = if res.converged || separating.is_some() { Membership::NonMember } else { Membership::Unknown };
    Ok(ConeMembership { verdict, margin, squares: Vec::new(), sos_residual: f64::INFINITY, separating, span_residual, gap: res.gap })
}

fn unknown_membership(span_residual: f64) -> ConeMembership {
    ConeMembership {
        verdict: Membership::Unknown,
        margin: f64::NAN,
        squares: Vec::new(),
        sos_residual: f64::INFINITY,
        separating: None,
        span_residual,
        gap: f64::INFINITY,
    }
}

fn linalg_lstsq_real(a: &RMat, b: &RVec) -> RVec {
    let normal = a.transpose() * a;
    let (vals, vecs) = linalg::sym_eigen(&normal);
    let top = vals.last().copied().unwrap_or(0.0);
    let mut x = RVec::zeros(a.ncols());
    let atb = a.transpose() * b;
    for (k, &l) in vals.iter().enumerate() {
        if l > 1e-12 * top && l > 0.0 {
            let u = vecs.column(k);
            x += u * (u.dot(&atb) / l);
        }
    }
    x
}

/// Random nonzero elements of `A₀⁺`, normalized in the pair norm.
pub fn sample_positive(pair: &QuasiPair, rng: &mut ChaCha8Rng) -> Option<CVec> {
    let alg = &pair.algebra;
    let n = alg.dim();
    let mut a = CVec::zeros(n);
    for _ in 0..3 {
        let x = linalg::random_cvec(rng, n);
        a += alg.multiply(&alg.star(&x), &x);
    }
    let na = pair.norm.eval(&a);
    (na > 1e-12).then(|| a.unscale(na))
}

/// Structured elements of the closed positive cone that every functional
/// in the family annihilates: `x*x` for `x` in the joint null space of the
/// Gram matrices, and `x*y + y*x` when additionally `x*x = 0`.
fn structured_positives(pair: &QuasiPair, grams: &[CMat]) -> Vec<CVec> {
    let alg = &pair.algebra;
    let n = alg.dim();
    let mut total = CMat::zeros(n, n);
    for g in grams {
        total += linalg::hermitian_part(g);
    }
    let eig = linalg::herm_eigen(&total);
    let top = eig.max_abs();
    let mut out = Vec::new();
    let kernel: Vec<CVec> =
        (0..n).filter(|&k| eig.values[k].abs() <= 1e-10 * top.max(1e-300) || top == 0.0).map(|k| eig.column(k)).collect();
    let mut candidates = kernel.clone();
    if top == 0.0 {
        candidates = (0..n).map(|i| alg.basis(i)).collect();
    }
    for x in &candidates {
        let xx = alg.multiply(&alg.star(x), x);
        if linalg::max_abs(xx.iter().copied()) > 1e-10 {
            out.push(xx);
        } else {
            let mut ys: Vec<CVec> = (0..n).map(|i| alg.basis(i)).collect();
            ys.extend((0..n).map(|i| alg.basis(i) * c64(0.0, 1.0)));
            if let Some(e) = alg.unit() {
                ys.push(e.clone());
            }
            for y in ys {
                let s = alg.multiply(&alg.star(x), &y) + alg.multiply(&alg.star(&y), x);
                if linalg::max_abs(s.iter().copied()) > 1e-10 {
                    out.push(s);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SufficiencyReport {
    pub sufficient: bool,
    /// Smallest value of `max_ω Re ω(a)` over the tested positive elements.
    pub worst_margin: f64,
    #[serde(serialize_with = "crate::ser::opt_cvec")]
    pub witness: Option<CVec>,
    pub tested: usize,
    pub family_size: usize,
    pub note: String,
}

/// Tests that every sampled nonzero positive element is detected by some
/// functional of the family.
pub fn sufficiency_check(pair: &QuasiPair, family: &[FunctionalModel], samples: usize, tol: f64, seed: u64) -> Result<SufficiencyReport> {
    let alg = &pair.algebra;
    for w in family {
        check_dim(alg.dim(), w.dim())?;
    }
    let grams: Vec<CMat> = family.iter().map(|w| gram_of_functional(alg, w)).collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut elements: Vec<CVec> = Vec::new();
    for s in structured_positives(pair, &grams) {
        let ns = pair.norm.eval(&s);
        if ns > 1e-12 {
            elements.push(s.unscale(ns));
        }
    }
    for _ in 0..samples {
        if let Some(a) = sample_positive(pair, &mut rng) {
            elements.push(a);
        }
    }
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for a in &elements {
        let m = family.iter().map(|w| w.apply(a).re).fold(f64::NEG_INFINITY, f64::max);
        let m = if family.is_empty() { 0.0 } else { m };
        if m < worst {
            worst = m;
            witness = Some(a.clone());
        }
    }
    let note =
        if elements.is_empty() { String::from("no nonzero positive elements found; sufficiency holds vacuously") } else { String::new() };
    let sufficient = elements.is_empty() || worst > tol;
    Ok(SufficiencyReport {
        sufficient,
        worst_margin: if elements.is_empty() { 0.0 } else { worst },
        witness: if sufficient { None } else { witness },
        tested: elements.len(),
        family_size: family.len(),
        note,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SemisimpleVerdict {
    Semisimple,
    NotSemisimple,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct SemisimpleReport {
    pub verdict: SemisimpleVerdict,
    /// Interior form scaled so that `sup |Ω(a, b)| = 1` over unit vectors.
    #[serde(serialize_with = "crate::ser::cmat")]
    pub interior_form: CMat,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    #[serde(serialize_with = "crate::ser::cvecs")]
    pub kernel: Vec<CVec>,
    pub invariant_dim: usize,
    pub bound: String,
    pub form_norm: f64,
    pub invariance_residual: f64,
    pub converged: bool,
}

/// Real basis (as Hermitian matrices) of the forms with `S L_a = L_{a*}ᴴ S`.
pub fn invariant_forms(alg: &StarAlgebraModel) -> Vec<CMat> {
    let n = alg.dim();
    let basis = lmi::hermitian_basis(n);
    let a = invariance_constraints(alg, &basis);
    let null = linalg::real_null_space(&a, 1e-9);
    (0..null.ncols()).map(|c| lmi::combine(&CMat::zeros(n, n), &basis, &null.column(c).into_owned())).collect()
}

/// Real constraint matrix of the invariance equations over `basis`.
pub fn invariance_constraints(alg: &StarAlgebraModel, basis: &[CMat]) -> RMat {
    let n = alg.dim();
    let ops: Vec<(CMat, CMat)> = (0..n)
        .map(|i| {
            let e = alg.basis(i);
            (alg.left_matrix(&e), alg.left_matrix(&alg.star(&e)).adjoint())
        })
        .collect();
    let rows = 2 * n * n * n;
    let mut a = RMat::zeros(rows, basis.len());
    for (k, h) in basis.iter().enumerate() {
        let mut r = 0;
        for (l, ls) in &ops {
            let d = h * l - ls * h;
            for z in d.iter() {
                a[(r, k)] = z.re;
                a[(r + 1, k)] = z.im;
                r += 2;
            }
        }
    }
    a
}

pub fn invariance_residual(alg: &StarAlgebraModel, s: &CMat) -> f64 {
    let n = alg.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let e = alg.basis(i);
        let d = s * alg.left_matrix(&e) - alg.left_matrix(&alg.star(&e)).adjoint() * s;
        worst = worst.max(linalg::max_abs(d.iter().copied()));
    }
    worst / scale_of(s)
}

/// `sup |bᴴ S a|` over the unit ball of `norm`, for positive semidefinite `S`.
pub fn form_norm(s: &CMat, norm: &NormSpec) -> Result<f64> {
    if let Some(g) = norm.gram() {
        let gi = linalg::pd_power(&g, -0.5);
        return Ok(linalg::spectral_norm(&(&gi * s * &gi)));
    }
    let root = linalg::pd_power(s, 0.5);
    let t = OperatorMatrix::new(root, norm.clone(), NormSpec::l2(s.nrows()))?;
    let v = operator_norm(&t)?.value;
    Ok(v * v)
}

/// `Ω(a, b) = bᴴ S a` together with a bound on `sup |Ω(a, b)|` over unit vectors.
#[derive(Clone, Debug, Serialize)]
pub struct FormModel {
    #[serde(serialize_with = "crate::ser::cmat")]
    pub matrix: CMat,
    pub bound: f64,
    pub source: String,
}

impl FormModel {
    pub fn new(matrix: CMat, bound: f64, source: impl Into<String>) -> Self {
        FormModel { matrix, bound, source: source.into() }
    }

    pub fn eval(&self, a: &CVec, b: &CVec) -> C64 {
        b.dotc(&(&self.matrix * a))
    }

    /// Hermitian, positive, invariant and bounded by one in the pair norm.
    pub fn membership(&self, pair: &QuasiPair, tol: f64) -> Result<Vec<CheckEntry>> {
        check_dim(pair.dim(), self.matrix.nrows())?;
        let s = &self.matrix;
        let scale = scale_of(s);
        let psd = linalg::hermitian_part(s);
        let norm = form_norm(&linalg::herm_eigen(&psd).reconstruct(|l| l.max(0.0)), &pair.norm)?;
        Ok(vec![
            CheckEntry::residual("form-hermitian", linalg::hermitian_residual(s) / scale, tol),
            CheckEntry::residual("form-positive", (-linalg::min_eigenvalue(s) / scale).max(0.0), 1e-10),
            CheckEntry::residual("form-invariance", invariance_residual(&pair.algebra, s), 1e-10),
            CheckEntry::residual("form-bound", (norm - 1.0).max(0.0), 1e-8),
        ])
    }
}

pub const SEMISIMPLE_CUTS: usize = 256;

/// Finds a maximal-support form among the positive invariant forms bounded
/// by the norm, and reads *-semisimplicity off its kernel.
pub fn semisimple_check(pair: &QuasiPair, tol: f64, seed: u64) -> Result<SemisimpleReport> {
    let alg = &pair.algebra;
    let n = alg.dim();
    let forms = invariant_forms(alg);
    let r = forms.len();
    let empty = |bound: &str| SemisimpleReport {
        verdict: SemisimpleVerdict::NotSemisimple,
        interior_form: CMat::zeros(n, n),
        min_eigenvalue: 0.0,
        max_eigenvalue: 0.0,
        kernel: (0..n).map(|i| alg.basis(i)).collect(),
        invariant_dim: 0,
        bound: bound.into(),
        form_norm: 0.0,
        invariance_residual: 0.0,
        converged: true,
    };
    let gram = pair.norm.gram();
    let bound = if gram.is_some() { "gram" } else { "cuts" };
    if r == 0 {
        return Ok(empty(bound));
    }

    let mut prob = Lmi::new(r);
    let psd_index = 0;
    prob.blocks.push(MatrixBlock { constant: CMat::identity(n, n), coeffs: forms.clone() });
    if let Some(g) = &gram {
        prob.blocks.push(MatrixBlock { constant: g.clone(), coeffs: forms.iter().map(|f| -f).collect() });
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cuts: Vec<CVec> = (0..n).map(|i| alg.basis(i)).collect();
        while cuts.len() < SEMISIMPLE_CUTS.max(n) {
            cuts.push(linalg::random_cvec(&mut rng, n));
        }
        for a in cuts {
            let na = pair.norm.eval(&a);
            let a = a.unscale(na);
            let coeffs: Vec<f64> = forms.iter().map(|f| -a.dotc(&(f * &a)).re).collect();
            prob.rows.push(LinearRow { constant: 1.0, coeffs });
        }
    }

    let mut theta = RVec::zeros(r);
    let mut mu = 1.0;
    let mut converged = true;
    while mu >= 1e-12 {
        prob.blocks[psd_index].constant = CMat::identity(n, n) * c64(mu, 0.0);
        let mut shrink = 0;
        while !prob.strictly_feasible(&theta) && shrink < 200 {
            theta *= 0.5;
            shrink += 1;
        }
        let (th, ok) = prob.analytic_center(&theta, 100);
        theta = th;
        converged = ok;
        mu *= 0.1;
    }
    let s = linalg::hermitian_part(&lmi::combine(&CMat::zeros(n, n), &forms, &theta));
    let eig = linalg::herm_eigen(&s);
    let max_eig = eig.values.last().copied().unwrap_or(0.0);
    let min_eig = eig.min();
    if max_eig <= 0.0 {
        let mut rep = empty(bound);
        rep.invariant_dim = r;
        rep.converged = converged;
        rep.verdict = if converged { SemisimpleVerdict::NotSemisimple } else { SemisimpleVerdict::Unknown };
        return Ok(rep);
    }
    let psd = eig.reconstruct(|l| l.max(0.0));
    let norm = form_norm(&psd, &pair.norm)?;
    let normalized = if norm > 0.0 { psd.unscale(norm) } else { psd };
    let ratio = min_eig / max_eig;
    let kernel: Vec<CVec> = (0..n).filter(|&k| eig.values[k] <= tol * max_eig).map(|k| eig.column(k)).collect();
    let verdict = if !converged {
        SemisimpleVerdict::Unknown
    } else if ratio > tol {
        SemisimpleVerdict::Semisimple
    } else {
        SemisimpleVerdict::NotSemisimple
    };
    Ok(SemisimpleReport {
        verdict,
        invariance_residual: invariance_residual(alg, &normalized),
        interior_form: normalized,
        min_eigenvalue: min_eig / max_eig,
        max_eigenvalue: 1.0,
        kernel,
        invariant_dim: r,
        bound: bound.into(),
        form_norm: 1.0,
        converged,
    })
}

pub const SEMISIMPLE_TOL: f64 = 1e-7;

#[derive(Clone, Debug)]
pub enum FamilyGenerator {
    /// Vector states of the interior form plus representable coordinate functionals.
    Generated,
    Explicit(Vec<FunctionalModel>),
}

#[derive(Clone, Debug, Serialize)]
pub struct FullRepReport {
    pub fully_representable: bool,
    pub sufficiency: SufficiencyReport,
    pub family: Vec<FunctionalModel>,
    pub rejected: usize,
    /// Closure domains are the whole space at finite dimension.
    pub closure_domains_full: bool,
    pub note: String,
}

/// Representable functionals built from the interior form and the coordinates.
pub fn generated_family(pair: &QuasiPair, tol: f64, seed: u64) -> Result<(Vec<FunctionalModel>, usize)> {
    let alg = &pair.algebra;
    let n = alg.dim();
    let mut candidates = Vec::new();
    let ss = semisimple_check(pair, SEMISIMPLE_TOL, seed)?;
    if ss.max_eigenvalue > 0.0 {
        let mut xs: Vec<CVec> = (0..n).map(|i| alg.basis(i)).collect();
        if let Some(e) = alg.unit() {
            xs.push(e.clone());
        }
        for x in xs {
            let w = FunctionalModel::vector_state(alg, &ss.interior_form, &x);
            if linalg::max_abs(w.coeffs.iter().copied()) > 1e-12 {
                candidates.push(w);
            }
        }
    }
    candidates.extend((0..n).map(|i| FunctionalModel::coordinate(n, i)));
    let mut family = Vec::new();
    let mut rejected = 0;
    for w in candidates {
        if check_representable(alg, &w, tol)?.representable {
            family.push(w);
        } else {
            rejected += 1;
        }
    }
    Ok((family, rejected))
}

pub fn fully_representable_check(pair: &QuasiPair, family: &FamilyGenerator, samples: usize, tol: f64, seed: u64) -> Result<FullRepReport> {
    let (family, rejected) = match family {
        FamilyGenerator::Generated => generated_family(pair, tol, seed)?,
        FamilyGenerator::Explicit(list) => {
            let mut kept = Vec::new();
            let mut rejected = 0;
            for w in list {
                if check_representable(&pair.algebra, w, tol)?.representable {
                    kept.push(w.clone());
                } else {
                    rejected += 1;
                }
            }
            (kept, rejected)
        }
    };
    let sufficiency = sufficiency_check(pair, &family, samples, tol, seed)?;
    Ok(FullRepReport {
        fully_representable: sufficiency.sufficient,
        sufficiency,
        family,
        rejected,
        closure_domains_full: true,
        note: "every closure domain is the whole space in finite dimension".into(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionPReport {
    pub holds: bool,
    pub inconclusive: usize,
    pub tested: usize,
    pub hypothesis_passed: usize,
    #[serde(serialize_with = "crate::ser::cvecs")]
    pub counterexamples: Vec<CVec>,
}

/// `[ω(e_i* a e_j)]`, Hermitian positive semidefinite exactly when
/// `ω(x*ax) ≥ 0` for every `x`.
pub fn conjugation_matrix(alg: &StarAlgebraModel, omega: &FunctionalModel, a: &CVec) -> CMat {
    let n = alg.dim();
    CMat::from_fn(n, n, |i, j| {
        let left = alg.multiply(&alg.star(&alg.basis(i)), a);
        omega.apply(&alg.multiply(&left, &alg.basis(j)))
    })
}

pub fn condition_p_check(pair: &QuasiPair, family: &[FunctionalModel], samples: usize, tol: f64, seed: u64) -> Result<ConditionPReport> {
    let alg = &pair.algebra;
    let n = alg.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cands: Vec<CVec> = Vec::new();
    for i in 0..n {
        cands.push(alg.basis(i));
        cands.push(-alg.basis(i));
        for j in 0..n {
            if i != j {
                cands.push(alg.basis(i) - alg.basis(j));
            }
        }
    }
    if let Some(e) = alg.unit() {
        cands.push(-e);
        cands.push(e.clone());
    }
    for _ in 0..samples {
        let x = linalg::random_cvec(&mut rng, n);
        cands.push(alg.multiply(&alg.star(&x), &x));
        let y = linalg::random_cvec(&mut rng, n);
        cands.push((alg.star(&y) + &y) * c64(0.5, 0.0));
    }
    let mut report =
        ConditionPReport { holds: true, inconclusive: 0, tested: cands.len(), hypothesis_passed: 0, counterexamples: Vec::new() };
    for a in cands {
        let scale = linalg::max_abs(a.iter().copied()).max(1e-300);
        let hyp = family.iter().all(|w| {
            let m = conjugation_matrix(alg, w, &a);
            linalg::hermitian_residual(&m) <= tol * scale && linalg::min_eigenvalue(&m) >= -tol * scale
        });
        if !hyp {
            continue;
        }
        report.hypothesis_passed += 1;
        match positive_cone_membership(alg, &a, tol)?.verdict {
            Membership::Member | Membership::ClosureMember => {}
            Membership::NonMember => {
                report.holds = false;
                report.counterexamples.push(a);
            }
            Membership::Unknown => report.inconclusive += 1,
        }
    }
    Ok(report)
}

/// One level of a refinement sequence.
#[derive(Clone, Debug)]
pub struct FormLevel {
    pub pair: QuasiPair,
    pub omega: FunctionalModel,
    pub element: CVec,
    /// Map from this level's coordinates to the finest level.
    pub prolongation: CMat,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub values: Vec<f64>,
    /// `φ(x_k − x_last, x_k − x_last)` at the finest level.
    pub cauchy: Vec<f64>,
    pub limit: f64,
    pub cauchy_decreasing: bool,
    pub converged: bool,
}

pub fn closure_of_form(levels: &[FormLevel], tol: f64) -> Result<ClosureReport> {
    let last = levels.last().ok_or_else(|| Error::InvalidArgument("empty refinement sequence".into()))?;
    let fine_gram = gram_of_functional(&last.pair.algebra, &last.omega)?;
    let phi = |g: &CMat, x: &CVec| x.dotc(&(g * x)).re;
    let mut values = Vec::new();
    let mut cauchy = Vec::new();
    for lvl in levels {
        let g = gram_of_functional(&lvl.pair.algebra, &lvl.omega)?;
        values.push(phi(&g, &lvl.element));
        let d = &lvl.prolongation * &lvl.element - &last.element;
        cauchy.push(phi(&fine_gram, &d));
    }
    let scale = values.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let cauchy_decreasing = cauchy.windows(2).all(|w| w[1] <= w[0] + tol * scale);
    let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let converged = diffs.windows(2).all(|w| w[1] <= w[0] + tol * scale);
    Ok(ClosureReport { limit: *values.last().unwrap_or(&0.0), values, cauchy, cauchy_decreasing, converged })
}

pub fn unit_of(alg: &StarAlgebraModel) -> CVec {
    alg.unit().cloned().unwrap_or_else(|| CVec::from_element(alg.dim(), ONE))
}
