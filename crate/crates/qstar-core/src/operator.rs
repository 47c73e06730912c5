//! Operator norms between normed coordinate spaces.

use alloc::string::String;
use alloc::vec::Vec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, bilinear, CMat, CVec};
use crate::norm::NormSpec;

pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub matrix: CMat,
    pub domain: NormSpec,
    pub codomain: NormSpec,
}

impl OperatorMatrix {
    pub fn new(matrix: CMat, domain: NormSpec, codomain: NormSpec) -> Result<Self> {
        crate::error::check_dim(domain.dim(), matrix.ncols())?;
        crate::error::check_dim(codomain.dim(), matrix.nrows())?;
        Ok(OperatorMatrix { matrix, domain, codomain })
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        &self.matrix * v
    }
}

#[derive(Clone, Debug)]
pub struct OperatorOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Extra starting points for the ascent, tried before the random ones.
    pub seeds: Vec<CVec>,
}

impl Default for OperatorOptions {
    fn default() -> Self {
        OperatorOptions { restarts: 32, seed: DEFAULT_SEED, max_iter: 300, seeds: Vec::new() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OperatorNormResult {
    /// Exact value, or the best lower bound found by the ascent.
    pub value: f64,
    pub exact: bool,
    pub converged: bool,
    pub method: String,
    #[serde(serialize_with = "crate::ser::cvec")]
    pub maximizer: CVec,
    pub restarts: usize,
}

impl OperatorNormResult {
    fn exact(value: f64, method: &str, maximizer: CVec) -> Self {
        OperatorNormResult { value, exact: true, converged: true, method: method.into(), maximizer, restarts: 0 }
    }
}

pub fn operator_norm(t: &OperatorMatrix) -> Result<OperatorNormResult> {
    operator_norm_with(t, &OperatorOptions::default())
}

pub fn operator_norm_with(t: &OperatorMatrix, opts: &OperatorOptions) -> Result<OperatorNormResult> {
    let m = &t.matrix;
    let (rows, cols) = m.shape();
    if cols == 0 || rows == 0 || m.iter().all(|z| z.norm() == 0.0) {
        return Ok(OperatorNormResult::exact(0.0, "zero", CVec::zeros(cols)));
    }
    if let (Some(ga), Some(gb)) = (t.domain.gram(), t.codomain.gram()) {
        let a_inv = linalg::pd_power(&ga, -0.5);
        let b = linalg::pd_power(&gb, 0.5);
        let dec = linalg::svd(&(b * m * &a_inv));
        let x = a_inv * dec.right(0);
        return Ok(OperatorNormResult::exact(dec.sigma[0], "gram-svd", x));
    }
    if let Some(s) = t.domain.l1_scales() {
        let mut best = (0.0, 0);
        for j in 0..cols {
            let v = t.codomain.eval(&m.column(j).into_owned()) / s[j];
            if v > best.0 {
                best = (v, j);
            }
        }
        let x = linalg::basis(cols, best.1).unscale(s[best.1]);
        return Ok(OperatorNormResult::exact(best.0, "column-extreme-points", x));
    }
    if let Some(w) = t.codomain.linf_multipliers() {
        let mut best = (0.0, 0);
        for i in 0..rows {
            let v = w[i] * t.domain.dual_eval(&m.row(i).transpose())?;
            if v > best.0 {
                best = (v, i);
            }
        }
        let x = t.domain.attainer(&m.row(best.1).transpose())?;
        return Ok(OperatorNormResult::exact(best.0, "row-dual-norms", x));
    }
    if let (Some((p, s)), Some((q, r))) = (t.domain.lp_form(), t.codomain.lp_form()) {
        if p == q && rows == cols && is_diagonal(m) {
            let mut best = (0.0, 0);
            for i in 0..rows {
                let v = m[(i, i)].norm() * r[i] / s[i];
                if v > best.0 {
                    best = (v, i);
                }
            }
            let x = linalg::basis(cols, best.1).unscale(s[best.1]);
            return Ok(OperatorNormResult::exact(best.0, "diagonal", x));
        }
    }
    ascent(t, opts)
}

fn is_diagonal(m: &CMat) -> bool {
    (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)].norm() == 0.0))
}

/// Alternating maximization of `|f(Tx)|` over the dual ball of the codomain
/// and the unit ball of the domain. Each sweep is monotone.
pub(crate) fn ascend_from(t: &OperatorMatrix, start: &CVec, max_iter: usize) -> Result<(f64, CVec)> {
    let n0 = t.domain.eval(start);
    if n0 == 0.0 {
        return Ok((0.0, start.clone()));
    }
    let mut x = start.unscale(n0);
    let mut val = t.codomain.eval(&t.apply(&x));
    let mt = t.matrix.transpose();
    for _ in 0..max_iter {
        let y = t.apply(&x);
        if val == 0.0 {
            break;
        }
        let f = t.codomain.norming(&y)?;
        let next = t.domain.attainer(&(&mt * f))?;
        let nv = t.codomain.eval(&t.apply(&next));
        if nv <= val * (1.0 + 1e-14) {
            if nv > val {
                x = next;
                val = nv;
            }
            break;
        }
        x = next;
        val = nv;
    }
    Ok((val, x))
}

fn ascent(t: &OperatorMatrix, opts: &OperatorOptions) -> Result<OperatorNormResult> {
    let cols = t.matrix.ncols();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts: Vec<CVec> = opts.seeds.clone();
    starts.extend((0..cols).map(|j| linalg::basis(cols, j)));
    starts.extend((0..opts.restarts).map(|_| linalg::random_cvec(&mut rng, cols)));
    let mut values = Vec::with_capacity(starts.len());
    let mut best = (f64::NEG_INFINITY, CVec::zeros(cols));
    for s in &starts {
        let (v, x) = ascend_from(t, s, opts.max_iter)?;
        values.push(v);
        if v > best.0 {
            best = (v, x);
        }
    }
    let top = best.0;
    let agree = values.iter().filter(|v| (top - **v).abs() <= 1e-7 * top.max(1e-300)).count();
    let mut converged = agree >= 2;
    let mut method = String::from("alternating-ascent");
    if !converged && cols <= 2 {
        let (v, x) = crate::oracle::operator_norm_bruteforce(t, 240)?;
        if v > best.0 {
            best = (v, x);
        }
        converged = true;
        method = String::from("alternating-ascent+grid");
    }
    if !best.0.is_finite() {
        return Err(Error::Nonconvergent("operator norm ascent produced no finite value".into()));
    }
    Ok(OperatorNormResult { value: best.0, exact: false, converged, method, maximizer: best.1, restarts: starts.len() })
}

/// `|f(Tx)|` for a feasible pair, used as an independent lower bound.
pub fn pairing_value(t: &OperatorMatrix, f: &CVec, x: &CVec) -> f64 {
    bilinear(f, &t.apply(x)).norm()
}
