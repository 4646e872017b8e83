//! Number formatting. CSV and human output use 17 significant digits;
//! JSON uses the shortest representation that round-trips.

use serde::Serialize;
use sklyrep::matkit::CMat;
use sklyrep::C64;

pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn complex(z: C64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

pub fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(pair).collect())
        .collect()
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report is serializable");
    s.push('\n');
    s
}

/// `re,im` columns for each entry.
pub fn csv_complex(zs: impl IntoIterator<Item = C64>) -> String {
    zs.into_iter()
        .map(|z| format!("{},{}", sci(z.re), sci(z.im)))
        .collect::<Vec<_>>()
        .join(",")
}
