//! Serde helpers writing complex data as `[re, im]` pairs.

use alloc::vec::Vec;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::linalg::{CMat, CVec};

pub struct Vector<'a>(pub &'a CVec);

impl Serialize for Vector<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for z in self.0.iter() {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }
}

pub struct Matrix<'a>(pub &'a CMat);

impl Serialize for Matrix<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m = self.0;
        let mut seq = s.serialize_seq(Some(m.nrows()))?;
        for i in 0..m.nrows() {
            let row: Vec<[f64; 2]> = (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

pub fn cvec<S: Serializer>(v: &CVec, s: S) -> Result<S::Ok, S::Error> {
    Vector(v).serialize(s)
}

pub fn cmat<S: Serializer>(m: &CMat, s: S) -> Result<S::Ok, S::Error> {
    Matrix(m).serialize(s)
}

pub fn opt_cvec<S: Serializer>(v: &Option<CVec>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&Vector(v)),
        None => s.serialize_none(),
    }
}

pub fn opt_cmat<S: Serializer>(m: &Option<CMat>, s: S) -> Result<S::Ok, S::Error> {
    match m {
        Some(m) => s.serialize_some(&Matrix(m)),
        None => s.serialize_none(),
    }
}

pub fn cvecs<S: Serializer>(vs: &[CVec], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(vs.len()))?;
    for v in vs {
        seq.serialize_element(&Vector(v))?;
    }
    seq.end()
}

pub fn cmats<S: Serializer>(ms: &[CMat], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(ms.len()))?;
    for m in ms {
        seq.serialize_element(&Matrix(m))?;
    }
    seq.end()
}

pub fn cvec_pairs<S: Serializer>(vs: &[(CVec, CVec)], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(vs.len()))?;
    for (a, b) in vs {
        seq.serialize_element(&(Vector(a), Vector(b)))?;
    }
    seq.end()
}
