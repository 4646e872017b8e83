//! Central elements `u1 = x², u2 = y², u3 = z²`, `g = c·y³ + yxz − xyz − c·x³`
//! and the hypersurface `X_c: F = 0` they satisfy, where
//! `F = g² − c²(u1³ + u2³ + u3³) − (c³ − 4)·u1·u2·u3`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::freealg::{eval_ncpoly, parse_ncpoly, NcPoly};
use crate::matkit::CMat;
use crate::reptheory::{is_irreducible_burnside, relation_residual, Presentation, Rep};
use crate::{Error, Result, C64};

const CENTER_TEXT: [(&str, &str); 4] = [
    ("u1", "x^2"),
    ("u2", "y^2"),
    ("u3", "z^2"),
    ("g", "c*y^3 + y*x*z - x*y*z - c*x^3"),
];

/// `[u1, u2, u3, g]` with `c` symbolic.
pub fn center_words() -> Vec<NcPoly> {
    CENTER_TEXT
        .iter()
        .map(|(_, t)| parse_ncpoly(t, &["x", "y", "z"], &["c"]).expect("center text is well formed"))
        .collect()
}

/// Scalars by which the central elements act, and `|F|` at them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CenterChar {
    pub u1: C64,
    pub u2: C64,
    pub u3: C64,
    pub g: C64,
    pub f_residual: f64,
}

impl CenterChar {
    pub fn as_array(&self) -> [C64; 4] {
        [self.u1, self.u2, self.u3, self.g]
    }
}

/// `F(u1, u2, u3, g)`.
pub fn f_value(c: C64, [u1, u2, u3, g]: [C64; 4]) -> C64 {
    g * g - c * c * (u1.powu(3) + u2.powu(3) + u3.powu(3)) - (c.powu(3) - 4.0) * u1 * u2 * u3
}

/// Relative distance of a matrix from the scalar `tr/n`.
fn scalar_defect(m: &CMat) -> f64 {
    let n = m.rows();
    let lam = m.trace() / n as f64;
    let mut d = m.clone();
    d.axpy(-lam, &CMat::identity(n));
    d.max_abs() / (1.0 + m.max_abs())
}

fn one_one_c() -> Presentation {
    Presentation::parse(
        &["x", "y", "z"],
        &["c"],
        &["y*z + z*y + c*x^2", "z*x + x*z + c*y^2", "x*y + y*x + c*z^2"],
    )
    .expect("relation text is well formed")
}

/// Central character of a solution of the `S(1,1,c)` relations with `c`
/// bound in the rep's environment.
///
/// On an irreducible rep every central image must be scalar within `tol`;
/// on a reducible one the diagonal mean is reported.
pub fn central_character(r: &Rep, tol: f64) -> Result<CenterChar> {
    let res = relation_residual(&one_one_c(), r)?;
    if res > tol {
        return Err(Error::Precondition(format!(
            "not a solution of the relations (residual {res:e})"
        )));
    }
    let mats: Vec<CMat> = ["x", "y", "z"]
        .iter()
        .map(|g| r.image(g).cloned())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::DimensionMismatch("need images for x, y, z".into()))?;
    let irreducible = is_irreducible_burnside(r, 1e-8);
    let mut vals = [C64::new(0.0, 0.0); 4];
    for (k, (p, (name, _))) in center_words().iter().zip(CENTER_TEXT).enumerate() {
        let m = eval_ncpoly(p, &mats, &r.env)?;
        if irreducible && scalar_defect(&m) > tol {
            return Err(Error::NonScalarCentral(name.to_string()));
        }
        vals[k] = m.trace() / r.n as f64;
    }
    let c = r.env.get("c")?;
    Ok(CenterChar {
        u1: vals[0],
        u2: vals[1],
        u3: vals[2],
        g: vals[3],
        f_residual: f_value(c, vals).norm(),
    })
}

/// Gradient `(∂F/∂u1, ∂F/∂u2, ∂F/∂u3, ∂F/∂g)`.
pub fn xc_gradient(c: C64, [u1, u2, u3, g]: [C64; 4]) -> [C64; 4] {
    let k = c.powu(3) - 4.0;
    let c2 = c * c;
    [
        -3.0 * c2 * u1 * u1 - k * u2 * u3,
        -3.0 * c2 * u2 * u2 - k * u1 * u3,
        -3.0 * c2 * u3 * u3 - k * u1 * u2,
        2.0 * g,
    ]
}

/// `steps` evenly spaced values from `min` to `max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        (0..self.steps)
            .map(|k| self.min + (self.max - self.min) * k as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;
    /// `min:max:steps`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Schema(format!("grid `{s}`: {msg}"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected min:max:steps"));
        }
        let min: f64 = parts[0].trim().parse().map_err(|_| bad("bad min"))?;
        let max: f64 = parts[1].trim().parse().map_err(|_| bad("bad max"))?;
        let steps: usize = parts[2].trim().parse().map_err(|_| bad("bad steps"))?;
        if !min.is_finite() || !max.is_finite() {
            return Err(bad("bounds must be finite"));
        }
        if steps == 0 {
            return Err(bad("steps must be positive"));
        }
        Ok(GridSpec { min, max, steps })
    }
}

/// `Re √(c²(u1³ + u2³ + u3³) + (c³ − 4)·u1·u2·u3)` over the `(u2, u3)` grid,
/// rows in `u2`-major order.
pub fn xc_slice(c: C64, u1: f64, grid: &GridSpec) -> Vec<(f64, f64, f64)> {
    let vals = grid.values();
    let u1c = C64::new(u1, 0.0);
    let mut out = Vec::with_capacity(vals.len() * vals.len());
    for &u2 in &vals {
        for &u3 in &vals {
            let (a, b) = (C64::new(u2, 0.0), C64::new(u3, 0.0));
            let inner = c * c * (u1c.powu(3) + a.powu(3) + b.powu(3)) + (c.powu(3) - 4.0) * u1c * a * b;
            out.push((u2, u3, inner.sqrt().re));
        }
    }
    out
}

/// [`xc_slice`] as CSV with header `u2,u3,value`.
pub fn xc_slice_csv(c: C64, u1: f64, grid: &GridSpec) -> String {
    let mut s = String::from("u2,u3,value\n");
    for (a, b, v) in xc_slice(c, u1, grid) {
        writeln!(s, "{a:.16e},{b:.16e},{v:.16e}").unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{ParamEnv, Word};
    use crate::sklyanin::{family, FamilyId};

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn center_word_shapes() {
        let w = center_words();
        assert_eq!(w[0].len(), 1);
        assert!(w[0].coefficient(&Word(vec![0, 0])).is_some());
        let g = &w[3];
        assert_eq!(g.len(), 4);
        let env = ParamEnv::new().with("c", r(3.0));
        let coef = |word: Vec<usize>| g.coefficient(&Word(word)).unwrap().eval(&env).unwrap();
        assert_eq!(coef(vec![1, 1, 1]), r(3.0));
        assert_eq!(coef(vec![1, 0, 2]), r(1.0));
        assert_eq!(coef(vec![0, 1, 2]), r(-1.0));
        assert_eq!(coef(vec![0, 0, 0]), r(-3.0));
        let z = eval_ncpoly(&w[2], &[CMat::zeros(2, 2), CMat::zeros(2, 2), CMat::identity(2)], &env).unwrap();
        assert_eq!(z, CMat::identity(2));
    }

    #[test]
    fn t3f2_character() {
        let env = ParamEnv::new().with("c", r(2.0)).with("z4", r(1.0));
        let rep = family(FamilyId::T3f2, &env).unwrap();
        let cc = central_character(&rep, 1e-8).unwrap();
        let want = [0.0, 0.0, 1.0, -2.0];
        for (z, w) in cc.as_array().iter().zip(want) {
            assert!((z - r(w)).norm() < 1e-12);
        }
        assert!(cc.f_residual < 1e-12);
        let grad = xc_gradient(r(2.0), cc.as_array());
        let want = [0.0, 0.0, -12.0, -4.0];
        for (z, w) in grad.iter().zip(want) {
            assert!((z - r(w)).norm() < 1e-12);
        }
    }

    #[test]
    fn trivial_and_broken_reps() {
        let triv = Rep::trivial(&["x", "y", "z"], 2, ParamEnv::new().with("c", r(2.0)));
        let cc = central_character(&triv, 1e-8).unwrap();
        assert_eq!(cc.as_array(), [r(0.0); 4]);
        assert_eq!(cc.f_residual, 0.0);
        let bad = Rep::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![CMat::diag(&[r(-1.0), r(1.0)]), CMat::m2(r(0.0), r(1.0), r(1.0), r(0.0)), CMat::zeros(2, 2)],
            ParamEnv::new().with("c", r(2.0)),
        )
        .unwrap();
        assert!(matches!(central_character(&bad, 1e-8), Err(Error::Precondition(_))));
    }

    #[test]
    fn gradient_at_origin_is_zero() {
        assert_eq!(xc_gradient(r(5.0), [r(0.0); 4]), [r(0.0); 4]);
    }

    #[test]
    fn slice_values() {
        let g = GridSpec { min: 0.0, max: 1.0, steps: 2 };
        let rows = xc_slice(r(5.0), 0.0, &g);
        assert_eq!(rows[0], (0.0, 0.0, 0.0));
        assert_eq!(rows[2], (1.0, 0.0, 5.0));
        let csv = xc_slice_csv(r(5.0), 0.0, &g);
        assert!(csv.starts_with("u2,u3,value\n"));
        assert_eq!(csv.lines().count(), 5);
        assert!("0:1".parse::<GridSpec>().is_err());
        assert!("0:1:0".parse::<GridSpec>().is_err());
        assert!("a:1:3".parse::<GridSpec>().is_err());
        assert_eq!("-1:2:4".parse::<GridSpec>().unwrap().values(), vec![-1.0, 0.0, 1.0, 2.0]);
    }
}
