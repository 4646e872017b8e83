//! The algebras `S(a,b,c)`: parameters, the curve `E`, the automorphism `σ`,
//! closed-form families of 2-dimensional representations, and the center.

mod center;
mod families;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::freealg::ParamEnv;
use crate::reptheory::Presentation;
use crate::{Error, Result, C64};

pub use center::{
    center_words, central_character, f_value, xc_gradient, xc_slice, xc_slice_csv, CenterChar,
    GridSpec,
};
pub use families::{family, family_unchecked, family_with_branch, Branch, FamilyId};

/// Margin for the strict inequalities on `(a, b, c)`.
pub const VALIDITY_MARGIN: f64 = 1e-6;

/// Relation text with symbolic `a, b, c`.
pub const RELATIONS: [&str; 3] = [
    "a*y*z + b*z*y + c*x^2",
    "a*z*x + b*x*z + c*y^2",
    "a*x*y + b*y*x + c*z^2",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SklyaninParams {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    /// Constructed without the validity check.
    pub relaxed: bool,
}

fn validity_problem(a: C64, b: C64, c: C64) -> Option<String> {
    let abc = a * b * c;
    if abc.norm() < VALIDITY_MARGIN {
        return Some("abc = 0".into());
    }
    let lhs = (abc * 3.0).powu(3);
    let rhs = (a.powu(3) + b.powu(3) + c.powu(3)).powu(3);
    if (lhs - rhs).norm() < VALIDITY_MARGIN {
        return Some("(3abc)^3 = (a^3+b^3+c^3)^3".into());
    }
    let one = C64::new(1.0, 0.0);
    if a == one && b == one {
        if (c.powu(3) - 1.0).norm() < VALIDITY_MARGIN {
            return Some("c^3 = 1".into());
        }
        if (c.powu(3) + 8.0).norm() < VALIDITY_MARGIN {
            return Some("c^3 = -8".into());
        }
    }
    None
}

impl SklyaninParams {
    pub fn new(a: C64, b: C64, c: C64) -> Result<Self> {
        match validity_problem(a, b, c) {
            Some(msg) => Err(Error::InvalidParameters(msg)),
            None => Ok(SklyaninParams {
                a,
                b,
                c,
                relaxed: false,
            }),
        }
    }

    /// `S(1,1,c)`.
    pub fn one_one(c: C64) -> Result<Self> {
        Self::new(C64::new(1.0, 0.0), C64::new(1.0, 0.0), c)
    }

    /// No validity check; `relaxed` is set when the triple is invalid.
    pub fn relaxed(a: C64, b: C64, c: C64) -> Self {
        SklyaninParams {
            a,
            b,
            c,
            relaxed: validity_problem(a, b, c).is_some(),
        }
    }

    pub fn is_valid(&self) -> bool {
        validity_problem(self.a, self.b, self.c).is_none()
    }

    pub fn env(&self) -> ParamEnv {
        ParamEnv::new()
            .with("a", self.a)
            .with("b", self.b)
            .with("c", self.c)
    }
}

/// The three relations with `a, b, c` left symbolic.
pub fn symbolic_presentation() -> Presentation {
    Presentation::parse(&["x", "y", "z"], &["a", "b", "c"], &RELATIONS)
        .expect("relation text is well formed")
}

/// The three relations with `(a, b, c)` substituted.
pub fn presentation(p: &SklyaninParams) -> Result<Presentation> {
    if !p.is_valid() {
        return Err(Error::InvalidParameters(
            validity_problem(p.a, p.b, p.c).unwrap_or_default(),
        ));
    }
    symbolic_presentation().bind(&p.env())
}

/// A point of the projective plane, scaled so its largest-modulus
/// coordinate is exactly 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjPoint {
    pub u: C64,
    pub v: C64,
    pub w: C64,
}

impl ProjPoint {
    pub fn new(u: C64, v: C64, w: C64) -> Result<Self> {
        let coords = [u, v, w];
        if !coords.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Degenerate("non-finite projective coordinates".into()));
        }
        let mut k = 0;
        for i in 1..3 {
            if coords[i].norm() > coords[k].norm() {
                k = i;
            }
        }
        let big = coords[k];
        if big.norm() == 0.0 {
            return Err(Error::Degenerate("[0:0:0] is not a projective point".into()));
        }
        let mut out = coords.map(|z| z / big);
        out[k] = C64::new(1.0, 0.0);
        Ok(ProjPoint {
            u: out[0],
            v: out[1],
            w: out[2],
        })
    }

    pub fn coords(&self) -> [C64; 3] {
        [self.u, self.v, self.w]
    }

    /// All three 2×2 cross-determinants at most `tol` times the product of
    /// the coordinate norms.
    pub fn proj_eq(&self, other: &ProjPoint, tol: f64) -> bool {
        let p = self.coords();
        let q = other.coords();
        let np = p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let nq = q.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        [(0, 1), (0, 2), (1, 2)]
            .iter()
            .all(|&(i, j)| (p[i] * q[j] - p[j] * q[i]).norm() <= tol * np * nq)
    }
}

impl std::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let z = |c: C64| format!("{:.17e}{:+.17e}i", c.re, c.im);
        write!(f, "[{} : {} : {}]", z(self.u), z(self.v), z(self.w))
    }
}

fn curve_value(p: &SklyaninParams, [u, v, w]: [C64; 3]) -> C64 {
    let (a, b, c) = (p.a, p.b, p.c);
    (a.powu(3) + b.powu(3) + c.powu(3)) * u * v * w
        - a * b * c * (u.powu(3) + v.powu(3) + w.powu(3))
}

/// `|E(pt)|` at the normalized point.
pub fn curve_residual(p: &SklyaninParams, pt: &ProjPoint) -> f64 {
    curve_value(p, pt.coords()).norm()
}

/// Roots of the monic cubic `w³ + c2·w² + c1·w + c0` by Durand-Kerner with
/// a Newton polish.
fn cubic_roots(c2: C64, c1: C64, c0: C64) -> [C64; 3] {
    let f = |w: C64| ((w + c2) * w + c1) * w + c0;
    let df = |w: C64| (w * 3.0 + c2 * 2.0) * w + c1;
    let seed = C64::new(0.4, 0.9);
    let mut r = [seed, seed * seed, seed * seed * seed];
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..3 {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..3 {
                if j != i {
                    den *= r[i] - r[j];
                }
            }
            if den.norm() == 0.0 {
                continue;
            }
            let step = f(r[i]) / den;
            r[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    for z in r.iter_mut() {
        for _ in 0..3 {
            let d = df(*z);
            if d.norm() > 0.0 {
                *z -= f(*z) / d;
            }
        }
    }
    r
}

const SAMPLE_TRIES: usize = 64;

fn random_disk(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    let r = radius * rng.random::<f64>().sqrt();
    let t = rng.random_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r, t)
}

/// A point of `E` drawn with `u = 1`, random `v`, and a random root of the
/// cubic in `w`.
pub fn curve_sample(p: &SklyaninParams, seed: u64) -> Result<ProjPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(p, &mut rng)
}

fn sample_with(p: &SklyaninParams, rng: &mut ChaCha8Rng) -> Result<ProjPoint> {
    if !p.relaxed && !p.is_valid() {
        return Err(Error::InvalidParameters(
            validity_problem(p.a, p.b, p.c).unwrap_or_default(),
        ));
    }
    let one = C64::new(1.0, 0.0);
    let abc = p.a * p.b * p.c;
    let s = p.a.powu(3) + p.b.powu(3) + p.c.powu(3);
    for _ in 0..SAMPLE_TRIES {
        let v = random_disk(rng, 2.0);
        let w = if abc.norm() < VALIDITY_MARGIN {
            if s.norm() < VALIDITY_MARGIN {
                // E vanishes identically
                random_disk(rng, 2.0)
            } else {
                C64::new(0.0, 0.0)
            }
        } else {
            // w³ − (s/abc)·v·w + (1 + v³) = 0
            let roots = cubic_roots(C64::new(0.0, 0.0), -(s / abc) * v, one + v.powu(3));
            roots[rng.random_range(0..3)]
        };
        let Ok(pt) = ProjPoint::new(one, v, w) else {
            continue;
        };
        if curve_residual(p, &pt) <= 1e-10 {
            return Ok(pt);
        }
    }
    Err(Error::SamplingFailed(SAMPLE_TRIES))
}

/// `σ([u:v:w]) = [acv² − b²uw : bcu² − a²vw : abw² − c²uv]`.
pub fn sigma(p: &SklyaninParams, pt: &ProjPoint) -> Result<ProjPoint> {
    let (a, b, c) = (p.a, p.b, p.c);
    let [u, v, w] = pt.coords();
    let raw = [
        a * c * v * v - b * b * u * w,
        b * c * u * u - a * a * v * w,
        a * b * w * w - c * c * u * v,
    ];
    let scale = 1.0 + [a.norm(), b.norm(), c.norm()].into_iter().fold(0.0, f64::max).powi(2);
    if raw.iter().all(|z| z.norm() <= 1e-10 * scale) {
        return Err(Error::Degenerate(format!("raw image of {pt} vanishes")));
    }
    ProjPoint::new(raw[0], raw[1], raw[2])
}

/// Outcome of [`sigma_order`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaOrderReport {
    pub order: Option<usize>,
    pub max_order: usize,
    pub relaxed: bool,
    /// For each sampled point, its orbit `pt, σ(pt), …, σ^max_order(pt)`.
    pub orbits: Vec<Vec<ProjPoint>>,
}

/// Smallest `n ≤ max_order` with `σⁿ(pt) ~ pt` at every one of `trials`
/// sampled curve points.
pub fn sigma_order(
    p: &SklyaninParams,
    max_order: usize,
    trials: usize,
    seed: u64,
    proj_tol: f64,
) -> Result<SigmaOrderReport> {
    if max_order == 0 || trials == 0 {
        return Err(Error::Precondition("max_order and trials must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orbits = Vec::with_capacity(trials);
    'trial: while orbits.len() < trials {
        for _ in 0..SAMPLE_TRIES {
            let start = sample_with(p, &mut rng)?;
            let mut orbit = vec![start];
            let mut ok = true;
            for _ in 0..max_order {
                match sigma(p, orbit.last().unwrap()) {
                    Ok(next) => orbit.push(next),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                orbits.push(orbit);
                continue 'trial;
            }
        }
        return Err(Error::SamplingFailed(SAMPLE_TRIES));
    }
    let order = (1..=max_order).find(|&n| {
        orbits
            .iter()
            .all(|o| o[n].proj_eq(&o[0], proj_tol))
    });
    Ok(SigmaOrderReport {
        order,
        max_order,
        relaxed: p.relaxed,
        orbits,
    })
}
