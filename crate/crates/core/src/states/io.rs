//! JSON state and Markov-spec files.
//!
//! State file: `{"dims":[dA,dB,dC],"matrix":[[[re,im],...],...]}`, row-major.
//! Markov spec: `{"dA":..,"dC":..,"blocks":[{"p":..,"dL":..,"dR":..,"rho_AL":..,"rho_RC":..}]}`.
//! Writers print every double with 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matfun::ComplexMatrix;

use super::{DensityMatrix, Dims, MarkovBlock, MarkovSpec, TripartiteState};

type MatrixJson = Vec<Vec<[f64; 2]>>;

/// Decimal rendering with 17 significant digits (round-trips every `f64`).
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    let mut out = String::from("[");
    for i in 0..m.rows() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            let z = m[(i, j)];
            let _ = write!(out, "[{},{}]", fmt_f64(z.re), fmt_f64(z.im));
        }
        out.push(']');
    }
    out.push(']');
    out
}

fn matrix_from_json(rows: &MatrixJson, field: &str) -> Result<ComplexMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Validation {
            field: field.into(),
            source: Box::new(Error::DimMismatch("matrix must be square and non-empty".into())),
        });
    }
    let data = rows
        .iter()
        .flat_map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)))
        .collect();
    ComplexMatrix::from_vec(n, n, data)
}

fn density_from_json(rows: &MatrixJson, field: &str) -> Result<DensityMatrix> {
    let m = matrix_from_json(rows, field)?;
    DensityMatrix::validate(&m).map_err(|e| Error::Validation {
        field: field.into(),
        source: Box::new(e),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dims: [usize; 3],
    matrix: MatrixJson,
}

pub fn state_to_json(s: &TripartiteState) -> String {
    let d = s.dims();
    format!(
        "{{\"dims\":[{},{},{}],\"matrix\":{}}}\n",
        d.a,
        d.b,
        d.c,
        matrix_to_json(s.rho().matrix())
    )
}

pub fn state_from_json(text: &str) -> Result<TripartiteState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let [a, b, c] = file.dims;
    let dims = Dims::new(a, b, c).map_err(|e| Error::Validation {
        field: "dims".into(),
        source: Box::new(e),
    })?;
    let rho = density_from_json(&file.matrix, "matrix")?;
    TripartiteState::new(rho, dims).map_err(|e| Error::Validation {
        field: "dims".into(),
        source: Box::new(e),
    })
}

pub fn read_state(path: impl AsRef<Path>) -> Result<TripartiteState> {
    state_from_json(&fs::read_to_string(path)?)
}

pub fn write_state(s: &TripartiteState, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, state_to_json(s))?;
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockFile {
    p: f64,
    #[serde(rename = "dL")]
    d_left: usize,
    #[serde(rename = "dR")]
    d_right: usize,
    #[serde(rename = "rho_AL")]
    rho_al: MatrixJson,
    #[serde(rename = "rho_RC")]
    rho_rc: MatrixJson,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    #[serde(rename = "dA")]
    d_a: usize,
    #[serde(rename = "dC")]
    d_c: usize,
    blocks: Vec<BlockFile>,
}

pub fn markov_spec_from_json(text: &str) -> Result<MarkovSpec> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let blocks = file
        .blocks
        .iter()
        .enumerate()
        .map(|(k, b)| {
            Ok(MarkovBlock {
                p: b.p,
                d_left: b.d_left,
                d_right: b.d_right,
                rho_al: density_from_json(&b.rho_al, &format!("blocks[{k}].rho_AL"))?,
                rho_rc: density_from_json(&b.rho_rc, &format!("blocks[{k}].rho_RC"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MarkovSpec {
        d_a: file.d_a,
        d_c: file.d_c,
        blocks,
    })
}

pub fn markov_spec_to_json(spec: &MarkovSpec) -> String {
    let blocks: Vec<String> = spec
        .blocks
        .iter()
        .map(|b| {
            format!(
                "{{\"p\":{},\"dL\":{},\"dR\":{},\"rho_AL\":{},\"rho_RC\":{}}}",
                fmt_f64(b.p),
                b.d_left,
                b.d_right,
                matrix_to_json(b.rho_al.matrix()),
                matrix_to_json(b.rho_rc.matrix())
            )
        })
        .collect();
    format!(
        "{{\"dA\":{},\"dC\":{},\"blocks\":[{}]}}\n",
        spec.d_a,
        spec.d_c,
        blocks.join(",")
    )
}

pub fn read_markov_spec(path: impl AsRef<Path>) -> Result<MarkovSpec> {
    markov_spec_from_json(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::random::{random_density, random_markov_spec, seed_stream};
    use crate::states::markov_state;

    #[test]
    fn write_then_read_is_identity() {
        let rho = random_density(12, &mut seed_stream(3, 0));
        let s = TripartiteState::new(rho, Dims::new(2, 3, 2).unwrap()).unwrap();
        let back = state_from_json(&state_to_json(&s)).unwrap();
        assert_eq!(back.dims(), s.dims());
        // validation symmetrizes; the written matrix is already exactly Hermitian
        assert!(back.rho().matrix().max_abs_diff(s.rho().matrix()) <= 1e-15);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(1.0).parse::<f64>().unwrap(), 1.0);
        let x = std::f64::consts::PI / 7.0;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn rejects_dims_product_mismatch() {
        let text = r#"{"dims":[2,2,2],"matrix":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}"#;
        match state_from_json(text) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "dims"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_psd() {
        let text = r#"{"dims":[1,1,2],"matrix":[[[1.5,0],[0,0]],[[0,0],[-0.5,0]]]}"#;
        match state_from_json(text) {
            Err(Error::Validation { field, source }) => {
                assert_eq!(field, "matrix");
                assert!(matches!(*source, Error::NotPsd(_)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(state_from_json("{\"dims\":[1,1]"), Err(Error::Parse(_))));
    }

    #[test]
    fn markov_spec_round_trip() {
        let spec = random_markov_spec(Dims::new(2, 3, 2).unwrap(), &mut seed_stream(2, 0));
        let back = markov_spec_from_json(&markov_spec_to_json(&spec)).unwrap();
        let a = markov_state(&spec).unwrap();
        let b = markov_state(&back).unwrap();
        assert!(a.rho().matrix().max_abs_diff(b.rho().matrix()) < 1e-15);
    }
}
