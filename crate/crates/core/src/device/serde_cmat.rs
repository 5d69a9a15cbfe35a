//! Complex matrices as row-major nested arrays of `[re, im]` pairs.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numerics::{CMat, C64};

pub fn to_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    m.row_iter()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn from_rows(rows: &[Vec<[f64; 2]>]) -> Result<CMat, String> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err("ragged matrix rows".into());
    }
    Ok(CMat::from_fn(n, cols, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

pub fn serialize<S: Serializer>(m: &CMat, s: S) -> Result<S::Ok, S::Error> {
    to_rows(m).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMat, D::Error> {
    let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
    from_rows(&rows).map_err(serde::de::Error::custom)
}
