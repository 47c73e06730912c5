//! Instances shipped with the tool and the tensor cases built from them.

use qstar_core::algebra::random_star_algebra;
use qstar_core::linalg::{c64, CVec};
use qstar_core::lp::make_lp_pair;
use qstar_core::represent::FunctionalModel;
use qstar_core::{CrossNorm, NormSpec, QuasiPair, StarAlgebraModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CliResult;
use crate::instance::{CNum, Expectations, FunctionalFile, InstanceFile};

/// Seed of the random *-algebra in the bundle; independent of `--seed` so the bundle never changes.
pub const BUNDLE_SEED: u64 = 20;

fn functional(label: &str, coeffs: &[CNum], representable: bool) -> FunctionalFile {
    FunctionalFile { label: label.into(), coeffs: coeffs.to_vec(), representable: Some(representable) }
}

fn r(x: f64) -> CNum {
    CNum::Real(x)
}

fn coordinates(n: usize) -> Vec<Vec<CNum>> {
    (0..n).map(|i| (0..n).map(|j| r(if i == j { 1.0 } else { 0.0 })).collect()).collect()
}

fn file(pair: &QuasiPair) -> CliResult<InstanceFile> {
    InstanceFile::from_pair(pair)
}

pub fn nilpotent_pair() -> CliResult<QuasiPair> {
    Ok(QuasiPair::new(StarAlgebraModel::dual_numbers(), NormSpec::l1(2), "dual-l1")?)
}

pub fn hilbert_pair(k: usize) -> CliResult<QuasiPair> {
    Ok(QuasiPair::new(StarAlgebraModel::matrix_units(k), NormSpec::l2(k * k), format!("m{k}-hs"))?)
}

/// Every bundled instance, sorted by label.
pub fn instances() -> CliResult<Vec<InstanceFile>> {
    let mut out = Vec::new();

    let pw2 = QuasiPair::new(StarAlgebraModel::pointwise(2), NormSpec::l2(2), "pw2-l2")?;
    let mut f = file(&pw2)?;
    f.functionals = vec![
        functional("sum", &[r(1.0), r(1.0)], true),
        functional("signed", &[r(1.0), r(-1.0)], false),
        functional("twisted", &[r(1.0), CNum::Pair([0.0, 1.0])], false),
    ];
    f.family = Some(coordinates(2));
    f.expect = Some(Expectations { semisimple: Some(true), fully_representable: Some(true) });
    out.push(f);

    let pw3 = QuasiPair::new(StarAlgebraModel::pointwise(3), NormSpec::l1(3), "pw3-l1")?;
    let mut f = file(&pw3)?;
    f.functionals = vec![functional("mass", &[r(1.0), r(2.0), r(3.0)], true), functional("dip", &[r(1.0), r(-0.5), r(1.0)], false)];
    f.family = Some(coordinates(3));
    f.expect = Some(Expectations { semisimple: Some(true), fully_representable: Some(true) });
    out.push(f);

    let m2 = hilbert_pair(2)?;
    let mut f = file(&m2)?;
    f.functionals = vec![
        functional("trace", &[r(1.0), r(0.0), r(0.0), r(1.0)], true),
        functional("corner", &[r(1.0), r(0.0), r(0.0), r(0.0)], true),
        functional("off-diagonal", &[r(0.0), r(1.0), r(0.0), r(0.0)], false),
    ];
    f.expect = Some(Expectations { semisimple: Some(true), fully_representable: None });
    out.push(f);

    let z3 = QuasiPair::new(StarAlgebraModel::cyclic_group(3), NormSpec::l1(3), "z3-l1")?;
    let mut f = file(&z3)?;
    f.functionals = vec![
        functional("trivial-character", &[r(1.0), r(1.0), r(1.0)], true),
        functional("trace", &[r(1.0), r(0.0), r(0.0)], true),
        functional("shift", &[r(0.0), r(1.0), r(0.0)], false),
    ];
    f.expect = Some(Expectations { semisimple: Some(true), fully_representable: None });
    out.push(f);

    let mut f = file(&nilpotent_pair()?)?;
    f.model = Some("nilpotent".into());
    f.functionals = vec![
        functional("evaluation", &[r(1.0), r(0.0)], true),
        functional("nilpotent-part", &[r(0.0), r(1.0)], false),
        functional("mixed", &[r(1.0), r(1.0)], false),
    ];
    f.expect = Some(Expectations { semisimple: Some(false), fully_representable: Some(false) });
    out.push(f);

    for (n, p) in [(2, 1.0), (4, 2.0), (3, 3.0)] {
        let g = make_lp_pair(n, p)?;
        let mut f = file(&g.pair)?;
        let w = 1.0 / n as f64;
        f.functionals = vec![functional("integral", &vec![r(w); n], true)];
        f.family = Some(coordinates(n));
        f.expect = Some(Expectations { semisimple: Some(true), fully_representable: Some(true) });
        out.push(f);
    }

    let nu = StarAlgebraModel::new(
        2,
        StarAlgebraModel::pointwise(2).structure().to_vec(),
        StarAlgebraModel::pointwise(2).involution().clone(),
        None,
    )?;
    let nu = QuasiPair::new(nu, NormSpec::l2(2), "pw2-nonunital")?;
    let mut f = file(&nu)?;
    f.functionals = vec![functional("weights", &[r(1.0), r(2.0)], true), functional("signed", &[r(-1.0), r(2.0)], false)];
    out.push(f);

    let mut rng = ChaCha8Rng::seed_from_u64(BUNDLE_SEED);
    let alg = random_star_algebra(&mut rng, 4)?;
    let n = alg.dim();
    let rnd = QuasiPair::new(alg, NormSpec::l2(n), format!("random-star-{n}"))?;
    let mut f = file(&rnd)?;
    f.model = Some("random-star-algebra".into());
    if let Some(e) = rnd.unit() {
        let coeffs: Vec<CNum> = (0..n).map(|i| CNum::of(e.dotc(&rnd.algebra.multiply(&rnd.algebra.basis(i), e)))).collect();
        f.functionals = vec![functional("unit-state", &coeffs, true)];
    }
    out.push(f);

    out.sort_by(|a, b| a.label.cmp(&b.label));
    Ok(out)
}

pub fn find(label: &str) -> CliResult<InstanceFile> {
    instances()?
        .into_iter()
        .find(|f| f.label == label)
        .ok_or_else(|| crate::error::CliError::Input(format!("no bundled instance {label:?}")))
}

/// Factor labels and cross-norm of a bundled tensor case.
#[derive(Clone, Debug)]
pub struct TensorCase {
    pub left: &'static str,
    pub right: &'static str,
    pub crossnorm: CrossNorm,
}

const fn case(left: &'static str, right: &'static str, crossnorm: CrossNorm) -> TensorCase {
    TensorCase { left, right, crossnorm }
}

/// Cases for the *-semisimplicity harness; the `dual-l1` ones are the nilpotent counterexamples.
pub fn ss_cases() -> Vec<TensorCase> {
    vec![
        case("pw2-l2", "pw2-l2", CrossNorm::Hilbert),
        case("pw2-l2", "m2-hs", CrossNorm::Hilbert),
        case("pw3-l1", "pw2-l2", CrossNorm::Projective),
        case("z3-l1", "pw2-l2", CrossNorm::Projective),
        case("lp-grid(n=2,p=1)", "lp-grid(n=2,p=1)", CrossNorm::Projective),
        case("lp-grid(n=4,p=2)", "pw2-l2", CrossNorm::Injective),
        case("dual-l1", "pw2-l2", CrossNorm::Projective),
        case("dual-l1", "lp-grid(n=2,p=1)", CrossNorm::Injective),
    ]
}

/// Cases for the full-representability harness, using the instance families.
pub fn fullrep_cases() -> Vec<TensorCase> {
    vec![
        case("lp-grid(n=2,p=1)", "lp-grid(n=2,p=1)", CrossNorm::Projective),
        case("lp-grid(n=2,p=1)", "lp-grid(n=3,p=3)", CrossNorm::Projective),
        case("lp-grid(n=4,p=2)", "pw2-l2", CrossNorm::Hilbert),
        case("pw3-l1", "lp-grid(n=2,p=1)", CrossNorm::Projective),
    ]
}

/// A factor whose family keeps only the first coordinate, so it cannot see the second cell.
pub fn insufficient_family(n: usize) -> Vec<FunctionalModel> {
    vec![FunctionalModel::new(CVec::from_fn(n, |i, _| c64(if i == 0 { 1.0 } else { 0.0 }, 0.0)), "first-cell")]
}

/// Cases for the form `φ_Ω` suite.
pub fn phi_cases() -> Vec<TensorCase> {
    vec![
        case("pw2-l2", "pw2-l2", CrossNorm::Hilbert),
        case("pw2-l2", "m2-hs", CrossNorm::Hilbert),
        case("lp-grid(n=2,p=1)", "lp-grid(n=2,p=1)", CrossNorm::Projective),
        case("pw3-l1", "pw2-l2", CrossNorm::Projective),
        case("lp-grid(n=2,p=1)", "pw3-l1", CrossNorm::Injective),
        case("z3-l1", "lp-grid(n=2,p=1)", CrossNorm::Projective),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_loads_and_is_sorted() {
        let all = instances().unwrap();
        assert!(all.len() >= 6);
        assert!(all.windows(2).all(|w| w[0].label < w[1].label));
        for f in &all {
            let pair = f.to_pair().unwrap();
            assert_eq!(pair.dim(), f.dim);
            for w in f.functionals().unwrap() {
                assert_eq!(w.coeffs.len(), f.dim);
            }
        }
        assert!(all.iter().any(|f| f.expect.as_ref().and_then(|e| e.semisimple) == Some(false)));
    }

    #[test]
    fn cases_refer_to_bundled_labels() {
        let labels: Vec<String> = instances().unwrap().into_iter().map(|f| f.label).collect();
        for c in ss_cases().iter().chain(fullrep_cases().iter()).chain(phi_cases().iter()) {
            assert!(labels.iter().any(|l| l == c.left), "{}", c.left);
            assert!(labels.iter().any(|l| l == c.right), "{}", c.right);
        }
    }
}
