//! Hypermatrix JSON:
//! `{"field": "fp"|"rational", "p": 7, "k": 2, "slices": [[["1","0"], ...], [...]]}`
//! with `p` present only for prime fields and entries written as strings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Fp, PrimeModulus, Rational, TextScalar};
use crate::hypermatrix::Hypermatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypermatrixJson {
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u64>,
    pub k: usize,
    pub slices: Vec<Vec<Vec<String>>>,
}

/// A hypermatrix over whichever field its JSON names.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyHypermatrix {
    Fp(Hypermatrix<Fp>),
    Rational(Hypermatrix<Rational>),
}

impl AnyHypermatrix {
    pub fn k(&self) -> usize {
        match self {
            AnyHypermatrix::Fp(m) => m.k(),
            AnyHypermatrix::Rational(m) => m.k(),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            AnyHypermatrix::Fp(m) => fp_to_json(m),
            AnyHypermatrix::Rational(m) => rational_to_json(m),
        }
    }
}

fn encode<T: Field>(m: &Hypermatrix<T>, field: &str, p: Option<u64>) -> String {
    let slices = (0..2)
        .map(|s| {
            m.slice_rows(s)
                .into_iter()
                .map(|row| row.iter().map(|x| x.to_string()).collect())
                .collect()
        })
        .collect();
    let j = HypermatrixJson {
        field: field.to_string(),
        p,
        k: m.k(),
        slices,
    };
    serde_json::to_string(&j).expect("plain data serializes")
}

pub fn fp_to_json(m: &Hypermatrix<Fp>) -> String {
    encode(m, "fp", Some(m.ctx().get()))
}

pub fn rational_to_json(m: &Hypermatrix<Rational>) -> String {
    encode(m, "rational", None)
}

fn decode<T: TextScalar>(ctx: &T::Ctx, j: &HypermatrixJson) -> Result<Hypermatrix<T>> {
    if j.k == 0 {
        return Err(Error::DimensionMismatch("k must be positive".into()));
    }
    if j.slices.len() != 2 {
        return Err(Error::DimensionMismatch(format!("{} slices, expected 2", j.slices.len())));
    }
    let mut parsed: Vec<Vec<Vec<T>>> = Vec::with_capacity(2);
    for (s, slice) in j.slices.iter().enumerate() {
        if slice.len() != j.k + 1 {
            return Err(Error::DimensionMismatch(format!(
                "slice {s} has {} rows, expected {}",
                slice.len(),
                j.k + 1
            )));
        }
        let mut rows = Vec::with_capacity(slice.len());
        for (r, row) in slice.iter().enumerate() {
            if row.len() != j.k {
                return Err(Error::DimensionMismatch(format!(
                    "slice {s} row {r} has {} entries, expected {}",
                    row.len(),
                    j.k
                )));
            }
            rows.push(row.iter().map(|x| T::parse_in(ctx, x)).collect::<Result<Vec<T>>>()?);
        }
        parsed.push(rows);
    }
    let s1 = parsed.pop().expect("two slices");
    let s0 = parsed.pop().expect("two slices");
    Hypermatrix::from_slices(ctx, [s0, s1])
}

pub fn parse_hypermatrix(s: &str) -> Result<AnyHypermatrix> {
    let j: HypermatrixJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    match j.field.as_str() {
        "fp" => {
            let p = j.p.ok_or_else(|| Error::Parse("field fp needs a prime p".into()))?;
            let m = PrimeModulus::new(p)?;
            Ok(AnyHypermatrix::Fp(decode(&m, &j)?))
        }
        "rational" => {
            if j.p.is_some() {
                return Err(Error::Parse("field rational takes no p".into()));
            }
            Ok(AnyHypermatrix::Rational(decode(&(), &j)?))
        }
        other => Err(Error::Parse(format!("unknown field {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let fp = r#"{"field":"fp","p":7,"k":1,"slices":[[["1"],["0"]],[["3"],["6"]]]}"#;
        assert_eq!(parse_hypermatrix(fp).unwrap().to_json(), fp);
        let q = r#"{"field":"rational","k":1,"slices":[[["1"],["-2/7"]],[["0"],["5"]]]}"#;
        assert_eq!(parse_hypermatrix(q).unwrap().to_json(), q);
    }

    #[test]
    fn entries_are_reduced() {
        let fp = r#"{"field":"fp","p":7,"k":1,"slices":[[["8"],["-1"]],[["0"],["1"]]]}"#;
        let AnyHypermatrix::Fp(m) = parse_hypermatrix(fp).unwrap() else {
            panic!("expected fp")
        };
        assert_eq!(m.get(0, 0, 0).value(), 1);
        assert_eq!(m.get(0, 1, 0).value(), 6);
    }

    #[test]
    fn errors_are_classified() {
        let dim = |s: &str| matches!(parse_hypermatrix(s), Err(Error::DimensionMismatch(_)));
        let parse = |s: &str| matches!(parse_hypermatrix(s), Err(Error::Parse(_)));
        assert!(dim(r#"{"field":"rational","k":2,"slices":[[["1"],["0"]],[["0"],["1"]]]}"#));
        assert!(dim(r#"{"field":"rational","k":1,"slices":[[["1"],["0"]]]}"#));
        assert!(dim(r#"{"field":"rational","k":1,"slices":[[["1","2"],["0"]],[["0"],["1"]]]}"#));
        assert!(parse(r#"{"field":"rational","k":1,"slices":[[["x"],["0"]],[["0"],["1"]]]}"#));
        assert!(parse(r#"{"field":"real","k":1,"slices":[]}"#));
        assert!(parse(r#"{"field":"fp","k":1,"slices":[]}"#));
        assert!(parse("not json"));
        assert!(matches!(
            parse_hypermatrix(r#"{"field":"fp","p":8,"k":1,"slices":[[["1"],["0"]],[["0"],["1"]]]}"#),
            Err(Error::InvalidModulus(8))
        ));
    }
}
