//! Instance files: a quasi *-algebra pair as JSON, with optional functionals,
//! an explicit representable family and expected verdicts.

use std::path::Path;

use qstar_core::linalg::{c64, CMat, CVec, C64};
use qstar_core::norm::NormKind;
use qstar_core::represent::FunctionalModel;
use qstar_core::tensor::TensorQuasiPair;
use qstar_core::{CrossNorm, NormSpec, QuasiPair, StarAlgebraModel};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// A complex number written either as a bare real or as `[re, im]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum CNum {
    Pair([f64; 2]),
    Real(f64),
}

impl CNum {
    pub fn value(self) -> C64 {
        match self {
            CNum::Pair([re, im]) => c64(re, im),
            CNum::Real(re) => c64(re, 0.0),
        }
    }

    pub fn of(z: C64) -> Self {
        CNum::Pair([z.re, z.im])
    }
}

pub fn to_cvec(v: &[CNum]) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(|z| z.value()))
}

pub fn from_cvec(v: &CVec) -> Vec<CNum> {
    v.iter().map(|z| CNum::of(*z)).collect()
}

pub fn to_cmat(rows: &[Vec<CNum>]) -> CliResult<CMat> {
    let n = rows.len();
    let m = rows.first().map(|r| r.len()).unwrap_or(0);
    if rows.iter().any(|r| r.len() != m) {
        return Err(CliError::Input("ragged matrix".into()));
    }
    Ok(CMat::from_fn(n, m, |i, j| rows[i][j].value()))
}

pub fn from_cmat(m: &CMat) -> Vec<Vec<CNum>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| CNum::of(m[(i, j)])).collect()).collect()
}

/// Exponent written as a number or as `"inf"`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Exponent {
    Num(f64),
    Text(String),
}

impl Exponent {
    fn value(&self) -> CliResult<f64> {
        match self {
            Exponent::Num(p) => Ok(*p),
            Exponent::Text(s) if s == "inf" || s == "infinity" => Ok(f64::INFINITY),
            Exponent::Text(s) => Err(CliError::Input(format!("bad exponent {s:?}"))),
        }
    }

    fn of(p: f64) -> Self {
        if p.is_infinite() {
            Exponent::Text("inf".into())
        } else {
            Exponent::Num(p)
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct NormFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Exponent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<CNum>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossnorm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Box<NormFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Box<NormFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<NormFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<f64>,
}

impl NormFile {
    pub fn lp(p: f64, weights: Option<Vec<f64>>) -> Self {
        NormFile { kind: "lp".into(), p: Some(Exponent::of(p)), weights, ..Default::default() }
    }

    pub fn to_spec(&self, dim: usize) -> CliResult<NormSpec> {
        let missing = |what: &str| CliError::Input(format!("norm of kind {:?} needs {what}", self.kind));
        let spec = match self.kind.as_str() {
            "lp" | "weighted" => {
                let p = self.p.as_ref().ok_or_else(|| missing("p"))?.value()?;
                match &self.weights {
                    Some(w) => NormSpec::weighted(p, w.clone())?,
                    None => NormSpec::p(dim, p)?,
                }
            }
            "gram" => NormSpec::inner_product(to_cmat(self.gram.as_ref().ok_or_else(|| missing("gram"))?)?)?,
            "tensor" => {
                let tag = self.crossnorm.as_deref().ok_or_else(|| missing("crossnorm"))?;
                let kind = CrossNorm::parse(tag).ok_or_else(|| CliError::Input(format!("unknown cross-norm {tag:?}")))?;
                let left = self.left.as_ref().ok_or_else(|| missing("left"))?;
                let right = self.right.as_ref().ok_or_else(|| missing("right"))?;
                let ldim = left.dim_hint().ok_or_else(|| missing("left weights or gram"))?;
                if ldim == 0 || dim % ldim != 0 {
                    return Err(CliError::Input("tensor norm factor dimensions do not divide the dimension".into()));
                }
                NormSpec::tensor(left.to_spec(ldim)?, right.to_spec(dim / ldim)?, kind)?
            }
            "unitized" => {
                let base = self.base.as_ref().ok_or_else(|| missing("base"))?;
                NormSpec::unitized(base.to_spec(dim.saturating_sub(1))?)
            }
            "scaled" => {
                let base = self.base.as_ref().ok_or_else(|| missing("base"))?;
                base.to_spec(dim)?.scaled(self.factor.ok_or_else(|| missing("factor"))?)?
            }
            other => return Err(CliError::Input(format!("unknown norm kind {other:?}"))),
        };
        if spec.dim() != dim {
            return Err(CliError::Input(format!("norm has dimension {}, instance has {dim}", spec.dim())));
        }
        Ok(spec)
    }

    fn dim_hint(&self) -> Option<usize> {
        if let Some(w) = &self.weights {
            return Some(w.len());
        }
        if let Some(g) = &self.gram {
            return Some(g.len());
        }
        match (&self.left, &self.right, &self.base) {
            (Some(l), Some(r), _) => Some(l.dim_hint()? * r.dim_hint()?),
            (_, _, Some(b)) if self.kind == "unitized" => Some(b.dim_hint()? + 1),
            (_, _, Some(b)) => b.dim_hint(),
            _ => None,
        }
    }

    pub fn from_spec(spec: &NormSpec) -> CliResult<Self> {
        Ok(match spec.kind() {
            NormKind::Lp { p, weights, scales } => {
                let weights = match weights {
                    Some(w) => Some(w.clone()),
                    None if scales.iter().all(|s| *s == 1.0) => None,
                    None if p.is_infinite() => Some(scales.clone()),
                    None => Some(scales.iter().map(|s| s.powf(*p)).collect()),
                };
                let weights = weights.or_else(|| Some(vec![1.0; spec.dim()]));
                NormFile::lp(*p, weights)
            }
            NormKind::Inner(g) => NormFile { kind: "gram".into(), gram: Some(from_cmat(&g.gram)), ..Default::default() },
            NormKind::Unitized { base, max: false } => {
                NormFile { kind: "unitized".into(), base: Some(Box::new(Self::from_spec(base)?)), ..Default::default() }
            }
            NormKind::Scaled { base, factor } => NormFile {
                kind: "scaled".into(),
                factor: Some(*factor),
                base: Some(Box::new(Self::from_spec(base)?)),
                ..Default::default()
            },
            NormKind::Tensor(t) => NormFile {
                kind: "tensor".into(),
                crossnorm: Some(t.kind.tag().into()),
                left: Some(Box::new(Self::from_spec(&t.left)?)),
                right: Some(Box::new(Self::from_spec(&t.right)?)),
                ..Default::default()
            },
            _ => return Err(CliError::Input(format!("norm {} has no file representation", spec.describe()))),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FunctionalFile {
    pub label: String,
    pub coeffs: Vec<CNum>,
    /// Expected outcome of the representability check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representable: Option<bool>,
}

impl FunctionalFile {
    pub fn model(&self) -> FunctionalModel {
        FunctionalModel::new(to_cvec(&self.coeffs), self.label.clone())
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semisimple: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fully_representable: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InstanceFile {
    pub label: String,
    pub dim: usize,
    /// `structure_constants[i][j][k]` is the coefficient of `e_k` in `e_i e_j`.
    pub structure_constants: Vec<Vec<Vec<CNum>>>,
    pub involution: Vec<Vec<CNum>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<CNum>>,
    pub norm: NormFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functionals: Vec<FunctionalFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<Vec<CNum>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectations>,
}

/// Associativity and involution laws must hold to this residual for a file to load.
pub const LOAD_TOL: f64 = 1e-9;

impl InstanceFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> CliResult<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn algebra(&self) -> CliResult<StarAlgebraModel> {
        let n = self.dim;
        let sc = &self.structure_constants;
        if sc.len() != n || sc.iter().any(|a| a.len() != n || a.iter().any(|b| b.len() != n)) {
            return Err(CliError::Input(format!("structure_constants must be {n}x{n}x{n}")));
        }
        let flat: Vec<C64> = sc.iter().flat_map(|a| a.iter().flat_map(|b| b.iter().map(|z| z.value()))).collect();
        let inv = to_cmat(&self.involution)?;
        let unit = self.unit.as_ref().map(|u| to_cvec(u));
        let alg = StarAlgebraModel::new(n, flat, inv, unit)?;
        let r = alg.residuals();
        if r.max() > LOAD_TOL {
            return Err(CliError::Input(format!(
                "{}: algebra laws fail (associativity {:.2e}, involutive {:.2e}, anti-multiplicative {:.2e}, unit {:.2e})",
                self.label,
                r.associativity,
                r.involutive,
                r.anti_multiplicative,
                r.unit.unwrap_or(0.0)
            )));
        }
        Ok(alg)
    }

    pub fn to_pair(&self) -> CliResult<QuasiPair> {
        let alg = self.algebra()?;
        let norm = self.norm.to_spec(self.dim)?;
        let mut pair = QuasiPair::new(alg, norm, self.label.clone())?;
        pair.model = self.model.clone();
        Ok(pair)
    }

    pub fn from_pair(pair: &QuasiPair) -> CliResult<Self> {
        let alg = &pair.algebra;
        let n = alg.dim();
        let structure_constants = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| CNum::of(alg.c(i, j, k))).collect()).collect()).collect();
        Ok(InstanceFile {
            label: pair.label.clone(),
            dim: n,
            structure_constants,
            involution: from_cmat(alg.involution()),
            unit: alg.unit().map(from_cvec),
            norm: NormFile::from_spec(&pair.norm)?,
            model: pair.model.clone(),
            functionals: Vec::new(),
            family: None,
            expect: None,
        })
    }

    pub fn functionals(&self) -> CliResult<Vec<FunctionalFile>> {
        for f in &self.functionals {
            if f.coeffs.len() != self.dim {
                return Err(CliError::Input(format!("functional {} has {} coefficients, expected {}", f.label, f.coeffs.len(), self.dim)));
            }
        }
        Ok(self.functionals.clone())
    }

    pub fn family(&self) -> CliResult<Option<Vec<FunctionalModel>>> {
        let Some(fam) = &self.family else { return Ok(None) };
        let mut out = Vec::new();
        for (i, c) in fam.iter().enumerate() {
            if c.len() != self.dim {
                return Err(CliError::Input(format!("family member {i} has wrong length")));
            }
            out.push(FunctionalModel::new(to_cvec(c), format!("{}#{i}", self.label)));
        }
        Ok(Some(out))
    }
}

/// A tensor pair written as references to its factors plus the combined instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TensorInstanceFile {
    pub left_ref: String,
    pub right_ref: String,
    pub crossnorm: String,
    pub combined: InstanceFile,
}

impl TensorInstanceFile {
    pub fn from_tensor(tp: &TensorQuasiPair) -> CliResult<Self> {
        Ok(TensorInstanceFile {
            left_ref: tp.left.label.clone(),
            right_ref: tp.right.label.clone(),
            crossnorm: tp.crossnorm.tag().into(),
            combined: InstanceFile::from_pair(&tp.combined)?,
        })
    }
}

/// Parses a vector given as JSON (`[1, 2]` or `[[1, 0], [0, 1]]` pairs).
pub fn parse_vector(text: &str) -> CliResult<CVec> {
    let v: Vec<CNum> = serde_json::from_str(text).map_err(|e| CliError::Input(format!("bad vector {text:?}: {e}")))?;
    Ok(to_cvec(&v))
}

/// Parses a matrix given as JSON rows.
pub fn parse_matrix(text: &str) -> CliResult<CMat> {
    let rows: Vec<Vec<CNum>> = serde_json::from_str(text).map_err(|e| CliError::Input(format!("bad matrix {text:?}: {e}")))?;
    to_cmat(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qstar_core::lp::make_lp_pair;
    use qstar_core::tensor::build_tensor_pair;

    #[test]
    fn complex_numbers_parse_in_both_forms() {
        let v: Vec<CNum> = serde_json::from_str("[1.5, [0, 2]]").unwrap();
        assert_eq!(v[0].value(), c64(1.5, 0.0));
        assert_eq!(v[1].value(), c64(0.0, 2.0));
    }

    #[test]
    fn lp_grid_round_trips() {
        let g = make_lp_pair(3, 2.0).unwrap();
        let file = InstanceFile::from_pair(&g.pair).unwrap();
        assert_eq!(file.model.as_deref(), Some("lp-grid"));
        let text = file.to_json().unwrap();
        let back = InstanceFile::parse(&text).unwrap();
        assert_eq!(back, file);
        let pair = back.to_pair().unwrap();
        let x = CVec::from_vec(vec![c64(1.0, 0.0), c64(-2.0, 1.0), c64(0.5, 0.0)]);
        assert!((pair.norm_of(&x).unwrap() - g.pair.norm_of(&x).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn rescaled_and_tensor_norms_round_trip() {
        let m2 = QuasiPair::new(StarAlgebraModel::matrix_units(2), NormSpec::l2(4), "m2").unwrap();
        let file = InstanceFile::from_pair(&m2).unwrap();
        let back = file.to_pair().unwrap();
        assert!(back.warnings.is_empty());
        let e = m2.unit().unwrap().clone();
        assert!((back.norm_of(&e).unwrap() - 1.0).abs() < 1e-14);
        let pw = QuasiPair::new(StarAlgebraModel::pointwise(2), NormSpec::l1(2), "pw").unwrap();
        let tp = build_tensor_pair(&pw, &m2, CrossNorm::Projective).unwrap();
        let tf = TensorInstanceFile::from_tensor(&tp).unwrap();
        assert_eq!(tf.crossnorm, "gamma");
        let pair = tf.combined.to_pair().unwrap();
        let x = CVec::from_fn(8, |i, _| c64(i as f64 - 3.0, 0.5));
        assert!((pair.norm_of(&x).unwrap() - tp.combined.norm_of(&x).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn broken_laws_are_input_errors() {
        let g = make_lp_pair(2, 1.0).unwrap();
        let mut file = InstanceFile::from_pair(&g.pair).unwrap();
        file.structure_constants[0][0][1] = CNum::Real(1.0);
        assert!(matches!(file.to_pair(), Err(CliError::Input(_))));
        assert!(InstanceFile::parse("{").is_err());
    }
}
