//! Discretized Lᵖ pairs on a uniform grid of `[0, 1]`, the product-grid
//! identification of elementary tensors, and refinement families.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::StarAlgebraModel;
use crate::cross::{hilbert_norm, projective_norm, CrossNorm, TensorElement};
use crate::error::{Error, Result};
use crate::linalg::{self, c64, CMat, CVec};
use crate::norm::NormSpec;
use crate::pair::QuasiPair;
use crate::represent::{FormLevel, FunctionalModel};

/// Pointwise algebra on `n` cells with `‖x‖ = (Σ |x_i|ᵖ / n)^{1/p}`.
#[derive(Clone, Debug, Serialize)]
pub struct GridLpPair {
    pub n: usize,
    pub p: f64,
    #[serde(skip)]
    pub pair: QuasiPair,
    /// Norm on the multiplier algebra.
    pub a0_norm_model: String,
}

impl GridLpPair {
    pub fn weights(&self) -> Vec<f64> {
        vec![1.0 / self.n as f64; self.n]
    }

    pub fn sup_norm(x: &CVec) -> f64 {
        linalg::max_abs(x.iter().copied())
    }
}

pub fn make_lp_pair(n: usize, p: f64) -> Result<GridLpPair> {
    if n == 0 {
        return Err(Error::InvalidArgument("grid size must be at least 1".into()));
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("exponent must be at least 1, got {p}")));
    }
    if p.is_infinite() {
        return Err(Error::Unsupported("p = ∞ grids: the multiplier algebra coincides with the pair".into()));
    }
    let norm = NormSpec::weighted(p, vec![1.0 / n as f64; n])?;
    let pair = QuasiPair::new(StarAlgebraModel::pointwise(n), norm, format!("lp-grid(n={n},p={p})"))?.with_model("lp-grid");
    Ok(GridLpPair { n, p, pair, a0_norm_model: "sup".into() })
}

/// `h(s, t) = f(s) g(t)` in row-major order.
pub fn product_grid_identify(f: &CVec, g: &CVec) -> CVec {
    linalg::kron_vec(f, g)
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub max_deviation: f64,
    pub elementary_deviation: f64,
    /// Distance between the flattened cross-norm weights and the product weights.
    pub weights_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn random_tensor(rng: &mut ChaCha8Rng, n: usize, m: usize) -> CMat {
    let mut z = linalg::random_cmat(rng, n, m);
    if rng.gen_bool(0.5) {
        z = z.map(|c| c64(c.re, 0.0));
    }
    z
}

fn flat_weighted(z: &CMat, p: f64) -> f64 {
    let (n, m) = z.shape();
    let w = 1.0 / (n * m) as f64;
    let s: f64 = z.iter().map(|c| w * libm::pow(c.norm(), p)).sum();
    libm::pow(s, 1.0 / p)
}

fn identity_check(
    name: &str,
    p: f64,
    n: usize,
    m: usize,
    trials: usize,
    tol: f64,
    seed: u64,
    eval: impl Fn(&TensorElement) -> Result<f64>,
    kind: CrossNorm,
) -> Result<IdentityReport> {
    let a = make_lp_pair(n, p)?;
    let b = make_lp_pair(m, p)?;
    let (la, lb) = (a.pair.norm.clone(), b.pair.norm.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let z = random_tensor(&mut rng, n, m);
        let v = eval(&TensorElement::new(z.clone(), la.clone(), lb.clone())?)?;
        worst = worst.max((v - flat_weighted(&z, p)).abs());
    }
    let f = linalg::random_cvec(&mut rng, n);
    let g = linalg::random_cvec(&mut rng, m);
    let h = product_grid_identify(&f, &g);
    let elem = eval(&TensorElement::elementary(&f, &g, la.clone(), lb.clone())?)?;
    let elementary_deviation = (elem - la.eval(&f) * lb.eval(&g)).abs().max((elem - flat_weighted(&linalg::reshape(&h, n, m), p)).abs());
    let combined = NormSpec::tensor(la, lb, kind)?;
    let flat_weights: Option<Vec<f64>> = match (combined.lp_form(), combined.gram()) {
        (Some((q, s)), _) if q == p => Some(s.iter().map(|x| libm::pow(*x, p)).collect()),
        (_, Some(g)) if p == 2.0 => Some(g.diagonal().iter().map(|x| x.re).collect()),
        _ => None,
    };
    let expected = 1.0 / (n * m) as f64;
    let weights_deviation = flat_weights.map(|w| w.iter().map(|x| (x - expected).abs()).fold(0.0, f64::max)).unwrap_or(f64::INFINITY);
    let passed = worst <= tol && elementary_deviation <= tol && weights_deviation <= 1e-15;
    Ok(IdentityReport {
        identity: name.into(),
        n,
        m,
        trials,
        max_deviation: worst,
        elementary_deviation,
        weights_deviation,
        tolerance: tol,
        passed,
    })
}

/// `γ(z)` on `L¹(n) ⊗ L¹(m)` against the `L¹` norm of the flattened grid function.
pub fn verify_l1_gamma_identity(n: usize, m: usize, trials: usize, tol: f64, seed: u64) -> Result<IdentityReport> {
    identity_check("l1-gamma", 1.0, n, m, trials, tol, seed, |z| Ok(projective_norm(z)?.value), CrossNorm::Projective)
}

/// `h(z)` on `L²(n) ⊗ L²(m)` against the `L²` norm of the flattened grid function.
pub fn verify_l2_h_identity(n: usize, m: usize, trials: usize, tol: f64, seed: u64) -> Result<IdentityReport> {
    identity_check("l2-h", 2.0, n, m, trials, tol, seed, hilbert_norm, CrossNorm::Hilbert)
}

/// Nested grids with cell-replication prolongations into the finest one.
#[derive(Clone, Debug)]
pub struct RefinementFamily {
    pub p: f64,
    pub levels: Vec<GridLpPair>,
    pub prolongations: Vec<CMat>,
}

/// `fine × coarse` matrix copying each coarse cell onto its `fine / coarse` subcells.
pub fn prolongation(coarse: usize, fine: usize) -> Result<CMat> {
    if coarse == 0 || fine % coarse != 0 {
        return Err(Error::InvalidArgument(format!("grid {coarse} does not refine to {fine}")));
    }
    let r = fine / coarse;
    Ok(CMat::from_fn(fine, coarse, |i, j| if i / r == j { linalg::ONE } else { linalg::ZERO }))
}

pub fn refinement_family(p: f64, levels: &[usize]) -> Result<RefinementFamily> {
    let finest = *levels.last().ok_or_else(|| Error::InvalidArgument("no levels".into()))?;
    for w in levels.windows(2) {
        if w[1] <= w[0] || w[1] % w[0] != 0 {
            return Err(Error::InvalidArgument(format!("levels {} and {} are not nested", w[0], w[1])));
        }
    }
    let pairs = levels.iter().map(|&n| make_lp_pair(n, p)).collect::<Result<Vec<_>>>()?;
    let prolongations = levels.iter().map(|&n| prolongation(n, finest)).collect::<Result<Vec<_>>>()?;
    Ok(RefinementFamily { p, levels: pairs, prolongations })
}

impl RefinementFamily {
    /// Midpoint samples of `f` on level `k`.
    pub fn sample(&self, k: usize, f: impl Fn(f64) -> f64) -> CVec {
        let n = self.levels[k].n;
        CVec::from_iterator(n, (0..n).map(|i| c64(f((i as f64 + 0.5) / n as f64), 0.0)))
    }

    /// `‖f − s_k‖_p` for the level-`k` step function, by composite midpoint quadrature.
    pub fn distance(&self, k: usize, f: impl Fn(f64) -> f64, quad_per_cell: usize) -> f64 {
        let n = self.levels[k].n;
        let s = self.sample(k, &f);
        let q = quad_per_cell.max(1);
        let h = 1.0 / (n * q) as f64;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..q {
                let t = (i * q + j) as f64 * h + 0.5 * h;
                acc += h * libm::pow((f(t) - s[i].re).abs(), self.p);
            }
        }
        libm::pow(acc, 1.0 / self.p)
    }

    /// Levels carrying `ω(x) = ∫ x` and the midpoint samples of `f`, for `closure_of_form`.
    pub fn form_levels(&self, f: impl Fn(f64) -> f64) -> Vec<FormLevel> {
        self.levels
            .iter()
            .enumerate()
            .map(|(k, lvl)| FormLevel {
                pair: lvl.pair.clone(),
                omega: integral_functional(lvl.n),
                element: self.sample(k, &f),
                prolongation: self.prolongations[k].clone(),
            })
            .collect()
    }
}

/// `x ↦ Σ x_i / n`.
pub fn integral_functional(n: usize) -> FunctionalModel {
    FunctionalModel::new(CVec::from_element(n, c64(1.0 / n as f64, 0.0)), format!("integral(n={n})"))
}
