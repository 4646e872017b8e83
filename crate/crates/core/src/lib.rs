//! Construction, verification and classification of the irreducible
//! 2-dimensional matrix representations of the Sklyanin algebra `S(1,1,c)`
//! and of the skew polynomial ring `C_{-1}[x,y]`.
//!
//! The crate is split along the pipeline:
//!
//! * [`freealg`]: noncommutative polynomials, a text parser for relations,
//!   and evaluation at matrix tuples.
//! * [`matkit`]: a small dense complex matrix kernel (SVD, rank, nullspace,
//!   2×2 Jordan normalization, least squares).
//! * [`reptheory`]: representations, relation residuals, irreducibility
//!   tests, trace fingerprints, conjugator search and classification.
//! * [`sklyanin`]: parameters, the curve `E`, the automorphism `σ`, the closed
//!   form families, and the center / the variety `X_c`.
//! * [`solver`]: numerical rediscovery of the classification by Gauss-Newton
//!   on the matrix equations.
//! * [`skewpoly`]: the worked example `C_{-1}[x,y]`.

pub mod error;
pub mod freealg;
pub mod matkit;
pub mod reptheory;
pub mod skewpoly;
pub mod sklyanin;
pub mod solver;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Parses a complex literal of the form `re`, `re+imi`, `re-imi` or `imi`.
///
/// ```
/// use sklyrep::parse_complex;
/// let z = parse_complex("0.5-1.2i").unwrap();
/// assert_eq!((z.re, z.im), (0.5, -1.2));
/// ```
pub fn parse_complex(text: &str) -> Result<C64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse {
        pos: 0,
        msg: format!("malformed complex literal `{text}`"),
    };
    if s.is_empty() {
        return Err(bad());
    }
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not part of an exponent and not leading
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            other => other,
        };
        let im = im.strip_prefix('+').unwrap_or(im);
        let re: f64 = re.parse().map_err(|_| bad())?;
        let im: f64 = im.parse().map_err(|_| bad())?;
        Ok(C64::new(re, im))
    } else {
        let re: f64 = s.parse().map_err(|_| bad())?;
        Ok(C64::new(re, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("2").unwrap(), C64::new(2.0, 0.0));
        assert_eq!(parse_complex("-1").unwrap(), C64::new(-1.0, 0.0));
        assert_eq!(parse_complex("0.5-1.2i").unwrap(), C64::new(0.5, -1.2));
        assert_eq!(parse_complex("1e-3+2i").unwrap(), C64::new(1e-3, 2.0));
        assert_eq!(parse_complex("3i").unwrap(), C64::new(0.0, 3.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e+2-1e-2i").unwrap(), C64::new(100.0, -0.01));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }
}
