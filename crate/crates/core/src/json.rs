//! JSON literals for complex numbers and matrices.
//!
//! A complex number is a `[re, im]` pair; a matrix is a row-major array of
//! rows. Use [`matrix`] with `#[serde(with = ...)]` on `CMatrix` fields.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::CMatrix;

pub type MatrixLiteral = Vec<Vec<[f64; 2]>>;

pub fn to_literal(m: &CMatrix) -> MatrixLiteral {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn from_literal(rows: &MatrixLiteral) -> Result<CMatrix, String> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != m) {
        return Err("matrix rows have different lengths".into());
    }
    Ok(CMatrix::from_fn(n, m, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        to_literal(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows = MatrixLiteral::deserialize(d)?;
        from_literal(&rows).map_err(serde::de::Error::custom)
    }
}

pub mod opt_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &Option<CMatrix>, s: S) -> Result<S::Ok, S::Error> {
        m.as_ref().map(to_literal).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<CMatrix>, D::Error> {
        let rows = Option::<MatrixLiteral>::deserialize(d)?;
        rows.map(|r| from_literal(&r).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_is_row_major() {
        let m = crate::linalg::from_rows(&[&[(1.0, 2.0), (3.0, 0.0)], &[(0.0, -1.0), (4.0, 5.0)]]);
        let text = serde_json::to_string(&to_literal(&m)).unwrap();
        assert_eq!(text, "[[[1.0,2.0],[3.0,0.0]],[[0.0,-1.0],[4.0,5.0]]]");
        let back: MatrixLiteral = serde_json::from_str(&text).unwrap();
        assert_eq!(from_literal(&back).unwrap(), m);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let rows: MatrixLiteral = vec![vec![[1.0, 0.0]], vec![[1.0, 0.0], [2.0, 0.0]]];
        assert!(from_literal(&rows).is_err());
    }
}
