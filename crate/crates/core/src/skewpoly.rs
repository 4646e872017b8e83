//! The skew polynomial ring `C⟨x,y⟩/(xy + yx)`.
//!
//! Its irreducible representations are the characters `x ↦ α, y ↦ 0` and
//! `x ↦ 0, y ↦ β`, and for `αβ ≠ 0` the 2-dimensional
//! `x ↦ diag(−α, α), y ↦ [[0, 1], [β, 0]]`. The center `C[x², y²]` sends the
//! latter to `(α², β)`.

use std::fmt::Write as _;

use crate::freealg::{eval_ncpoly, parse_ncpoly, ParamEnv};
use crate::matkit::CMat;
use crate::reptheory::{is_irreducible_burnside, relation_residual, Presentation, Rep};
use crate::sklyanin::GridSpec;
use crate::{Error, Result, C64};

pub fn skew_presentation() -> Presentation {
    Presentation::parse(&["x", "y"], &[], &["x*y + y*x"]).expect("relation text is well formed")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SkewRepSpec {
    OneDimX(C64),
    OneDimY(C64),
    TwoDim(C64, C64),
}

pub fn skew_rep(spec: SkewRepSpec) -> Rep {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let images = match spec {
        SkewRepSpec::OneDimX(a) => vec![CMat::diag(&[a]), CMat::diag(&[z])],
        SkewRepSpec::OneDimY(b) => vec![CMat::diag(&[z]), CMat::diag(&[b])],
        SkewRepSpec::TwoDim(a, b) => vec![CMat::diag(&[-a, a]), CMat::m2(z, one, b, z)],
    };
    Rep::new(vec!["x".into(), "y".into()], images, ParamEnv::new()).expect("shapes agree")
}

/// `(u1, u2)`, the scalars by which `x²` and `y²` act.
pub fn skew_center_point(r: &Rep, tol: f64) -> Result<(C64, C64)> {
    let res = relation_residual(&skew_presentation(), r)?;
    if res > tol {
        return Err(Error::Precondition(format!(
            "not a solution of xy + yx = 0 (residual {res:e})"
        )));
    }
    let mats = [
        r.image("x").cloned().ok_or_else(|| Error::DimensionMismatch("no image for x".into()))?,
        r.image("y").cloned().ok_or_else(|| Error::DimensionMismatch("no image for y".into()))?,
    ];
    let irreducible = is_irreducible_burnside(r, 1e-8);
    let mut out = [C64::new(0.0, 0.0); 2];
    for (k, (name, text)) in [("u1", "x^2"), ("u2", "y^2")].into_iter().enumerate() {
        let p = parse_ncpoly(text, &["x", "y"], &[]).expect("well formed");
        let m = eval_ncpoly(&p, &mats, &r.env)?;
        let lam = m.trace() / r.n as f64;
        if irreducible {
            let mut d = m.clone();
            d.axpy(-lam, &CMat::identity(r.n));
            if d.max_abs() > tol * (1.0 + m.max_abs()) {
                return Err(Error::NonScalarCentral(name.into()));
            }
        }
        out[k] = lam;
    }
    Ok((out[0], out[1]))
}

/// Which irreducible representations sit over a point of the `(u1, u2)` plane.
pub fn point_kind(u1: f64, u2: f64) -> &'static str {
    match (u1 == 0.0, u2 == 0.0) {
        (true, true) => "trivial",
        (false, false) => "two_dim",
        _ => "one_dim",
    }
}

/// The `(u1, u2)` parameter plane as CSV `u1,u2,kind`: `two_dim` off the
/// axes, `one_dim` on the axes, `trivial` at the origin.
pub fn center_plane_csv(grid: &GridSpec) -> String {
    let vals = grid.values();
    let mut s = String::from("u1,u2,kind\n");
    for &a in &vals {
        for &b in &vals {
            writeln!(s, "{a:.16e},{b:.16e},{}", point_kind(a, b)).unwrap();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reptheory::{find_conjugator, find_invariant_line};

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn presentation_evaluates() {
        let p = skew_presentation();
        assert_eq!(p.relations.len(), 1);
        for spec in [SkewRepSpec::TwoDim(r(1.3), r(-0.4)), SkewRepSpec::OneDimX(r(2.0)), SkewRepSpec::OneDimY(r(0.5))] {
            assert!(relation_residual(&p, &skew_rep(spec)).unwrap() < 1e-15);
        }
        // commuting X, Y give 2XY
        let x = CMat::diag(&[r(1.0), r(2.0)]);
        let y = CMat::diag(&[r(3.0), r(-1.0)]);
        let m = eval_ncpoly(&p.relations[0], &[x.clone(), y.clone()], &ParamEnv::new()).unwrap();
        assert_eq!(m, (&x * &y).scale(r(2.0)));
    }

    #[test]
    fn reps_and_irreducibility() {
        let two = skew_rep(SkewRepSpec::TwoDim(r(1.0), r(1.0)));
        assert_eq!(two.images[0], CMat::diag(&[r(-1.0), r(1.0)]));
        assert_eq!(two.images[1], CMat::m2(r(0.0), r(1.0), r(1.0), r(0.0)));
        assert!(is_irreducible_burnside(&two, 1e-8));
        let red = skew_rep(SkewRepSpec::TwoDim(r(1.0), r(0.0)));
        assert!(!is_irreducible_burnside(&red, 1e-8));
        assert!(find_invariant_line(&red, 1e-8).is_some());
        let one = skew_rep(SkewRepSpec::OneDimX(r(3.0)));
        assert_eq!((one.n, one.images[0][(0, 0)], one.images[1][(0, 0)]), (1, r(3.0), r(0.0)));
    }

    #[test]
    fn center_points() {
        let (u1, u2) = skew_center_point(&skew_rep(SkewRepSpec::TwoDim(r(1.5), r(-0.7))), 1e-8).unwrap();
        assert!((u1 - r(2.25)).norm() < 1e-14 && (u2 - r(-0.7)).norm() < 1e-14);
        let (u1, u2) = skew_center_point(&skew_rep(SkewRepSpec::OneDimX(r(2.0))), 1e-8).unwrap();
        assert_eq!((u1, u2), (r(4.0), r(0.0)));
        let triv = Rep::trivial(&["x", "y"], 2, ParamEnv::new());
        assert_eq!(skew_center_point(&triv, 1e-8).unwrap(), (r(0.0), r(0.0)));
        let bad = Rep::new(vec!["x".into(), "y".into()], vec![CMat::identity(2), CMat::identity(2)], ParamEnv::new()).unwrap();
        assert!(matches!(skew_center_point(&bad, 1e-8), Err(Error::Precondition(_))));
    }

    #[test]
    fn sign_of_alpha_is_invisible() {
        let a = skew_rep(SkewRepSpec::TwoDim(r(0.8), r(1.7)));
        let b = skew_rep(SkewRepSpec::TwoDim(r(-0.8), r(1.7)));
        assert!(find_conjugator(&a, &b, 1e-7).is_some());
        let c = skew_rep(SkewRepSpec::TwoDim(r(0.8), r(1.6)));
        assert!(find_conjugator(&a, &c, 1e-7).is_none());
    }

    #[test]
    fn plane_csv_marks_axes() {
        let csv = center_plane_csv(&GridSpec { min: -1.0, max: 1.0, steps: 3 });
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "u1,u2,kind");
        assert_eq!(lines.len(), 10);
        assert!(lines[5].ends_with(",trivial"));
        assert!(lines[1].ends_with(",two_dim"));
        assert!(lines[2].ends_with(",one_dim"));
    }
}
