//! Tensor product of two quasi *-algebra pairs under a cross-norm.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::StarAlgebraModel;
use crate::check::{all_passed, CheckEntry};
use crate::cross::{cross_norm, CrossNorm, CrossOptions, TensorElement};
use crate::error::Result;
use crate::linalg::{self, CMat, CVec};
use crate::norm::NormSpec;
use crate::pair::{validate_quasi_pair, QuasiPair, Side, ValidationReport};

#[derive(Clone, Debug)]
pub struct TensorQuasiPair {
    pub left: QuasiPair,
    pub right: QuasiPair,
    pub crossnorm: CrossNorm,
    /// Pair on `n·m` row-major coordinates.
    pub combined: QuasiPair,
}

impl TensorQuasiPair {
    pub fn element(&self, v: &CVec) -> Result<TensorElement> {
        TensorElement::from_flat(v, self.left.norm.clone(), self.right.norm.clone())
    }

    pub fn elementary(&self, x: &CVec, y: &CVec) -> CVec {
        linalg::kron_vec(x, y)
    }

    pub fn n(&self) -> usize {
        self.left.dim()
    }

    pub fn m(&self) -> usize {
        self.right.dim()
    }
}

pub fn build_tensor_pair(p: &QuasiPair, q: &QuasiPair, kind: CrossNorm) -> Result<TensorQuasiPair> {
    let algebra = StarAlgebraModel::tensor(&p.algebra, &q.algebra);
    let norm = NormSpec::tensor(p.norm.clone(), q.norm.clone(), kind)?;
    let label = format!("{}x{}[{}]", p.label, q.label, kind.tag());
    let mut combined = QuasiPair::new(algebra, norm, label)?;
    combined.model = Some("tensor".into());
    Ok(TensorQuasiPair { left: p.clone(), right: q.clone(), crossnorm: kind, combined })
}

fn random_terms(rng: &mut ChaCha8Rng, n: usize, m: usize, rank: usize) -> Vec<(CVec, CVec)> {
    (0..rank).map(|_| (linalg::random_cvec(rng, n), linalg::random_cvec(rng, m))).collect()
}

fn sum_terms(terms: &[(CVec, CVec)]) -> CVec {
    let mut out = linalg::kron_vec(&terms[0].0, &terms[0].1);
    for (x, y) in &terms[1..] {
        out += linalg::kron_vec(x, y);
    }
    out
}

fn rel_diff(a: &CMat, b: &CMat) -> f64 {
    linalg::max_abs_diff(a, b) / linalg::max_abs(b.iter().copied()).max(1.0)
}

fn vrel(a: &CVec, b: &CVec) -> f64 {
    linalg::max_abs((a - b).iter().copied()) / linalg::max_abs(b.iter().copied()).max(1.0)
}

/// Compares `L_z`, `R_z` with `Σ L_{x_i} ⊗ L_{y_i}` and `Σ R_{x_i} ⊗ R_{y_i}`.
pub fn verify_action_factorization(tp: &TensorQuasiPair, trials: usize, seed: u64) -> Result<ValidationReport> {
    let (n, m) = (tp.n(), tp.m());
    let (pa, qa, ca) = (&tp.left.algebra, &tp.right.algebra, &tp.combined.algebra);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fact: f64 = 0.0;
    let mut elem: f64 = 0.0;
    let mut star: f64 = 0.0;
    for t in 0..trials {
        let rank = 1 + t % 3;
        let terms = random_terms(&mut rng, n, m, rank);
        let z = sum_terms(&terms);
        let mut lsum = CMat::zeros(n * m, n * m);
        let mut rsum = CMat::zeros(n * m, n * m);
        for (x, y) in &terms {
            lsum += linalg::kron(&pa.left_matrix(x), &qa.left_matrix(y));
            rsum += linalg::kron(&pa.right_matrix(x), &qa.right_matrix(y));
        }
        fact = fact.max(rel_diff(&ca.left_matrix(&z), &lsum)).max(rel_diff(&ca.right_matrix(&z), &rsum));
        let c = linalg::random_cvec(&mut rng, n * m);
        fact = fact.max(vrel(&tp.combined.module_action(Side::Right, &z, &c)?, &(&rsum * &c)));

        let (a, b) = (linalg::random_cvec(&mut rng, n), linalg::random_cvec(&mut rng, m));
        let (x, y) = (&terms[0].0, &terms[0].1);
        let lhs = ca.multiply(&linalg::kron_vec(&a, &b), &linalg::kron_vec(x, y));
        let rhs = linalg::kron_vec(&pa.multiply(&a, x), &qa.multiply(&b, y));
        elem = elem.max(vrel(&lhs, &rhs));

        let ab = linalg::kron_vec(&a, &b);
        let xy = linalg::kron_vec(x, y);
        let lhs = ca.star(&ca.multiply(&ab, &xy));
        let rhs = ca.multiply(&ca.star(&xy), &ca.star(&ab));
        star = star.max(vrel(&lhs, &rhs));
        let s_el = ca.star(&ab);
        star = star.max(vrel(&s_el, &linalg::kron_vec(&pa.star(&a), &qa.star(&b))));
    }
    let mut checks =
        vec_checks(&[("action-factorization", fact, 1e-12), ("elementary-product", elem, 1e-12), ("tensor-involution", star, 1e-12)]);
    let res = ca.residuals();
    checks.push(CheckEntry::residual("kronecker-associativity", res.associativity, 1e-12));
    if let Some(e) = ca.unit() {
        let mut worst: f64 = 0.0;
        for _ in 0..trials.max(1) {
            let z = linalg::random_cvec(&mut rng, n * m);
            worst = worst.max(vrel(&ca.multiply(e, &z), &z)).max(vrel(&ca.multiply(&z, e), &z));
        }
        let id = CMat::identity(n * m, n * m);
        worst = worst.max(rel_diff(&ca.right_matrix(e), &id));
        checks.push(CheckEntry::residual("tensor-unit", worst, 1e-12));
    }
    Ok(ValidationReport { label: tp.combined.label.clone(), passed: all_passed(&checks), checks })
}

fn vec_checks(items: &[(&str, f64, f64)]) -> Vec<CheckEntry> {
    items.iter().map(|(n, r, t)| CheckEntry::residual(n, *r, *t)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IsometryReport {
    pub label: String,
    pub passed: bool,
    pub max_deviation: f64,
    /// Trials where the certified intervals were too wide to decide.
    pub inconclusive: usize,
    pub trials: usize,
}

/// `|N(z*) − N(z)|` over random and self-adjoint `z`, using certified bounds.
pub fn verify_involution_isometry(tp: &TensorQuasiPair, trials: usize, tol: f64, seed: u64) -> Result<IsometryReport> {
    let (n, m) = (tp.n(), tp.m());
    let ca = &tp.combined.algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = CrossOptions { seed, ..CrossOptions::default() };
    let mut worst: f64 = 0.0;
    let mut inconclusive = 0;
    for t in 0..trials {
        let mut z = linalg::random_cvec(&mut rng, n * m);
        if t % 4 == 3 {
            z = (&z + ca.star(&z)) * linalg::c64(0.5, 0.0);
        }
        let zs = ca.star(&z);
        let a = cross_norm(&tp.element(&z)?, tp.crossnorm, &opts)?;
        let b = cross_norm(&tp.element(&zs)?, tp.crossnorm, &opts)?;
        let scale = a.value.max(1e-300);
        // Intervals [lower, upper] of the two values; their separation is a
        // certified deviation, their spread bounds what can be decided.
        let sep = (a.lower - b.upper).max(b.lower - a.upper).max(0.0) / scale;
        let dev = (a.value - b.value).abs() / scale;
        let spread = (a.gap + b.gap) / scale;
        if spread <= tol || dev <= tol {
            worst = worst.max(dev);
        } else if sep > tol {
            worst = worst.max(sep);
        } else {
            inconclusive += 1;
        }
    }
    Ok(IsometryReport { label: tp.combined.label.clone(), passed: worst <= tol, max_deviation: worst, inconclusive, trials })
}

/// `N(c·(x⊗y)) ≤ ‖x⊗y‖₀ N(c)` and the mirrored left action, on random samples.
pub fn combined_a0_norm_consistency(tp: &TensorQuasiPair, trials: usize, tol: f64, seed: u64) -> Result<ValidationReport> {
    let (n, m) = (tp.n(), tp.m());
    let pair = &tp.combined;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut unit_dev: f64 = 0.0;
    for t in 0..trials {
        let xy = if t == 0 && pair.is_unital() {
            pair.unit().cloned().unwrap_or_else(|| CVec::zeros(n * m))
        } else {
            linalg::kron_vec(&linalg::random_cvec(&mut rng, n), &linalg::random_cvec(&mut rng, m))
        };
        let x0 = pair.a0_norm(&xy)?;
        if t == 0 && pair.is_unital() {
            unit_dev = (x0 - 1.0).abs();
        }
        for _ in 0..2 {
            let c = linalg::random_cvec(&mut rng, n * m);
            let nc = pair.norm.eval(&c);
            let side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
            let prod = pair.module_action(side, &xy, &c)?;
            let lhs = pair.norm.eval(&prod);
            worst = worst.max((lhs - x0 * nc) / (x0 * nc).max(1e-300));
        }
    }
    let mut checks = vec![CheckEntry::residual("multiplier-bound", worst.max(0.0), tol)];
    if pair.is_unital() {
        checks.push(CheckEntry::residual("unit-multiplier-norm", unit_dev, tol.max(1e-9)));
    }
    Ok(ValidationReport { label: pair.label.clone(), passed: all_passed(&checks), checks })
}

/// Runs the axiom validator on the combined pair.
pub fn validate_tensor_pair(tp: &TensorQuasiPair, samples: usize, tol: f64, seed: u64) -> Result<ValidationReport> {
    validate_quasi_pair(&tp.combined, samples, tol, seed)
}
