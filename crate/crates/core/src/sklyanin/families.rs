//! Closed-form 2-dimensional solutions of the `S(1,1,c)` relations.
//!
//! `t1*` and `t3*` have `X` a single Jordan block, `t2*` and `t4*` have `X`
//! diagonal. The `t3*` and `t4*` rows are representatives of the equivalence
//! classes of irreducible solutions; the others are kept for testing the
//! equivalences between them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::freealg::ParamEnv;
use crate::matkit::CMat;
use crate::reptheory::Rep;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyId {
    T1f1,
    T1f2,
    T1f3,
    T1f4,
    T1f5,
    T2f1,
    T2f2,
    T2f3,
    T2f4,
    T2f5,
    T2f6,
    T3f1,
    T3f2,
    T4f1,
    T4f2,
    T4f3,
    T4f4,
}

/// Sign in front of the square root in a family formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    #[default]
    Principal,
    Negated,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Principal => 1.0,
            Branch::Negated => -1.0,
        }
    }

    pub fn flip(self) -> Branch {
        match self {
            Branch::Principal => Branch::Negated,
            Branch::Negated => Branch::Principal,
        }
    }
}

impl FamilyId {
    pub const ALL: [FamilyId; 17] = [
        FamilyId::T1f1,
        FamilyId::T1f2,
        FamilyId::T1f3,
        FamilyId::T1f4,
        FamilyId::T1f5,
        FamilyId::T2f1,
        FamilyId::T2f2,
        FamilyId::T2f3,
        FamilyId::T2f4,
        FamilyId::T2f5,
        FamilyId::T2f6,
        FamilyId::T3f1,
        FamilyId::T3f2,
        FamilyId::T4f1,
        FamilyId::T4f2,
        FamilyId::T4f3,
        FamilyId::T4f4,
    ];

    pub const REPRESENTATIVES: [FamilyId; 6] = [
        FamilyId::T3f1,
        FamilyId::T3f2,
        FamilyId::T4f1,
        FamilyId::T4f2,
        FamilyId::T4f3,
        FamilyId::T4f4,
    ];

    pub fn as_str(self) -> &'static str {
        use FamilyId::*;
        match self {
            T1f1 => "t1f1",
            T1f2 => "t1f2",
            T1f3 => "t1f3",
            T1f4 => "t1f4",
            T1f5 => "t1f5",
            T2f1 => "t2f1",
            T2f2 => "t2f2",
            T2f3 => "t2f3",
            T2f4 => "t2f4",
            T2f5 => "t2f5",
            T2f6 => "t2f6",
            T3f1 => "t3f1",
            T3f2 => "t3f2",
            T4f1 => "t4f1",
            T4f2 => "t4f2",
            T4f3 => "t4f3",
            T4f4 => "t4f4",
        }
    }

    /// Free parameter names besides `c`.
    pub fn params(self) -> &'static [&'static str] {
        use FamilyId::*;
        match self {
            T1f1 | T1f2 | T1f5 => &["y4", "z4"],
            T1f3 | T1f4 => &["z2", "z3", "z4"],
            T2f1 => &["y3", "y4", "z4"],
            T2f2 => &["x4", "y3"],
            T2f3 => &["y4", "z3", "z4"],
            T2f4 => &["x4", "z3"],
            T2f5 | T2f6 => &["y3", "y4", "z3", "z4"],
            T3f1 => &["z2", "z3"],
            T3f2 => &["z4"],
            T4f1 => &["y4", "z4"],
            T4f2 => &["x4"],
            T4f3 => &["y4", "z4"],
            T4f4 => &["y4", "z3", "z4"],
        }
    }

    /// Whether the formulas contain a square root.
    pub fn has_branch(self) -> bool {
        use FamilyId::*;
        matches!(self, T1f1 | T1f2 | T1f3 | T1f4 | T2f5 | T2f6 | T3f1 | T4f4)
    }

    pub fn is_representative(self) -> bool {
        Self::REPRESENTATIVES.contains(&self)
    }

    /// `X` is a single Jordan block.
    pub fn is_one_block(self) -> bool {
        use FamilyId::*;
        matches!(self, T1f1 | T1f2 | T1f3 | T1f4 | T1f5 | T3f1 | T3f2)
    }

    /// Human-readable side conditions.
    pub fn constraint_text(self) -> &'static str {
        use FamilyId::*;
        match self {
            T1f1 | T1f2 | T1f5 => "z4 != 0",
            T1f3 | T1f4 | T3f1 => "z3 != 0",
            T2f1 => "y3 != 0, y4 != 0",
            T2f2 => "y3 != 0",
            T2f3 => "z3 != 0, z4 != 0",
            T2f4 => "z3 != 0",
            T2f5 | T2f6 => "y3 != 0, z3 != 0",
            T3f2 => "z4 != 0",
            T4f1 => "z4 != 0",
            T4f2 => "x4 != 0",
            T4f3 => "y4 != 0, z4 != zeta*y4 for zeta^3 = 1",
            T4f4 => "y4 != exp(+-2 pi i/3)*z4, z4 != y4*z3",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Schema(format!("unknown family `{s}`")))
    }
}

impl FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "principal" | "+" => Ok(Branch::Principal),
            "negated" | "-" => Ok(Branch::Negated),
            _ => Err(Error::Schema(format!("unknown branch `{s}`"))),
        }
    }
}

/// Denominators at or below this modulus count as vanishing.
const DENOM_EPS: f64 = 1e-12;
/// Relative tolerance of the `≠` side conditions.
const CONSTRAINT_TOL: f64 = 1e-8;

struct Build {
    id: FamilyId,
    c: C64,
    s: f64,
}

impl Build {
    fn div(&self, num: C64, den: C64, name: &str) -> Result<C64> {
        if den.norm() <= DENOM_EPS || !den.re.is_finite() || !den.im.is_finite() {
            return Err(Error::Denominator {
                family: self.id.to_string(),
                denominator: name.to_string(),
            });
        }
        Ok(num / den)
    }

    fn sqrt(&self, z: C64) -> C64 {
        z.sqrt() * self.s
    }
}

fn m(a: C64, b: C64, c: C64, d: C64) -> CMat {
    CMat::m2(a, b, c, d)
}

fn z0() -> C64 {
    C64::new(0.0, 0.0)
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn jordan() -> CMat {
    m(z0(), one(), z0(), z0())
}

fn diag(x: C64) -> CMat {
    m(x, z0(), z0(), -x)
}

fn t1f1_2(b: &Build, y4: C64, z4: C64, first: bool) -> Result<[CMat; 3]> {
    let c = b.c;
    let r = b.sqrt(y4.powu(4) - 8.0 * y4 * z4.powu(3));
    let (y12, z21) = if first {
        (
            b.div(y4 * y4 + r, 2.0 * c * z4 * z4, "2*c*z4^2")?,
            c * (y4 * y4 + r) / 2.0 - c * y4 * y4,
        )
    } else {
        (
            -b.div(-y4 * y4 + r, 2.0 * c * z4 * z4, "2*c*z4^2")?,
            -c * (-y4 * y4 + r) / 2.0 - c * y4 * y4,
        )
    };
    Ok([
        jordan(),
        m(-y4, y12, -c * z4 * z4, y4),
        m(-z4, z0(), z21, z4),
    ])
}

/// `w = z2·z3 + z4²`; the discriminant is `c⁴w³ − c·z3³`.
fn d13(c: C64, z2: C64, z3: C64, z4: C64) -> C64 {
    let w = z2 * z3 + z4 * z4;
    c.powu(4) * w.powu(3) - c * z3.powu(3)
}

/// `(σ·c²·z4·w + √d) / (c·z3)`, evaluated through the conjugate product
/// `(σA + r)(r − σA) = c·z3·(c³w²z2 − z3²)` when the direct sum cancels.
fn t1_q(b: &Build, sigma: f64, z2: C64, z3: C64, z4: C64) -> Result<C64> {
    let c = b.c;
    let w = z2 * z3 + z4 * z4;
    let a = c * c * z4 * w * sigma;
    let r = b.sqrt(d13(c, z2, z3, z4));
    let (u, v) = (a + r, r - a);
    if u.norm() >= v.norm() {
        b.div(u, c * z3, "c*z3")
    } else {
        b.div(c.powu(3) * w * w * z2 - z3 * z3, v, "c*z3")
    }
}

fn t1f3(b: &Build, z2: C64, z3: C64, z4: C64) -> Result<[CMat; 3]> {
    let c = b.c;
    b.div(one(), c * z3, "c*z3")?;
    let q = t1_q(b, 1.0, z2, z3, z4)?;
    let y12 = (c * z2 * (z2 * z3 + z4 * z4) + 2.0 * q * z4) / z3;
    Ok([
        jordan(),
        m(q, y12, -c * z2 * z3 - c * z4 * z4, -q),
        m(-z4, z2, z3, z4),
    ])
}

fn t1f4(b: &Build, z2: C64, z3: C64, z4: C64) -> Result<[CMat; 3]> {
    let c = b.c;
    b.div(one(), c * z3, "c*z3")?;
    let q = t1_q(b, -1.0, z2, z3, z4)?;
    let y12 = (c * z2 * (z2 * z3 + z4 * z4) - 2.0 * q * z4) / z3;
    Ok([
        jordan(),
        m(-q, y12, -c * z2 * z3 - c * z4 * z4, q),
        m(-z4, z2, z3, z4),
    ])
}

fn t1f5(b: &Build, y4: C64, z4: C64) -> Result<[CMat; 3]> {
    let c = b.c;
    Ok([
        jordan(),
        m(-y4, b.div(y4 * y4, c * z4 * z4, "c*z4^2")?, -c * z4 * z4, y4),
        m(-z4, b.div(2.0 * y4, c * z4, "c*z4")?, z0(), z4),
    ])
}

fn t2f1(b: &Build, y3: C64, y4: C64, z4: C64) -> Result<[CMat; 3]> {
    let c = b.c;
    let x = b.div(c * z4 * z4, 2.0 * y4, "2*y4")?;
    let y12 = -b.div(y4.powu(3) - z4.powu(3), y4 * y3, "y4*y3")?;
    let z12 = -b.div(
        z4 * (8.0 * y4.powu(3) + c.powu(3) * z4.powu(3)),
        4.0 * y4 * y4 * y3,
        "4*y4^2*y3",
    )?;
    Ok([diag(x), m(-y4, y12, y3, y4), m(-z4, z12, z0(), z4)])
}

fn t2f2(b: &Build, x4: C64, y3: C64) -> Result<[CMat; 3]> {
    let z12 = -b.div(b.c * x4 * x4, y3, "y3")?;
    Ok([
        diag(-x4),
        m(z0(), z0(), y3, z0()),
        m(z0(), z12, z0(), z0()),
    ])
}

fn t2f3(b: &Build, y4: C64, z3: C64, z4: C64) -> Result<[CMat; 3]> {
    let c = b.c;
    let x = b.div(c * y4 * y4, 2.0 * z4, "2*z4")?;
    let y12 = -b.div(
        y4 * (8.0 * z4.powu(3) + c.powu(3) * y4.powu(3)),
        4.0 * z3 * z4 * z4,
        "4*z3*z4^2",
    )?;
    let z12 = b.div(y4.powu(3) - z4.powu(3), z4 * z3, "z4*z3")?;
    Ok([diag(x), m(-y4, y12, z0(), y4), m(-z4, z12, z3, z4)])
}

fn t2f4(b: &Build, x4: C64, z3: C64) -> Result<[CMat; 3]> {
    let y12 = -b.div(b.c * x4 * x4, z3, "z3")?;
    Ok([
        diag(-x4),
        m(z0(), y12, z0(), z0()),
        m(z0(), z0(), z3, z0()),
    ])
}

/// `P² + c³·y3·z3·(z3·y4 − y3·z4)²` with `P = z3²·z4 + y3²·y4`.
fn g_disc(c: C64, y3: C64, y4: C64, z3: C64, z4: C64) -> C64 {
    let p = z3 * z3 * z4 + y3 * y3 * y4;
    let k = z3 * y4 - y3 * z4;
    p * p + c.powu(3) * y3 * z3 * k * k
}

/// `(σP + r) / (c²·y3·z3)`, switching to `c·k² / (r − σP)` when the sum
/// cancels (the two agree since `r² − P² = c³·y3·z3·k²`).
fn t2_e(b: &Build, sigma: f64, y3: C64, y4: C64, z3: C64, z4: C64) -> Result<C64> {
    let c = b.c;
    let p = (z3 * z3 * z4 + y3 * y3 * y4) * sigma;
    let k = z3 * y4 - y3 * z4;
    let r = b.sqrt(g_disc(c, y3, y4, z3, z4));
    let (u, v) = (p + r, r - p);
    let e = b.div(u, c * c * y3 * z3, "c^2*y3*z3")?;
    if u.norm() >= v.norm() {
        Ok(e)
    } else {
        b.div(c * k * k, v, "c^2*y3*z3")
    }
}

fn t2f5(b: &Build, y3: C64, y4: C64, z3: C64, z4: C64) -> Result<[CMat; 3]> {
    let c = b.c;
    let e = t2_e(b, -1.0, y3, y4, z3, z4)?;
    let y12 = -(-2.0 * z4 * e + c * y4 * y4) / (c * y3);
    let z12 = -(-2.0 * e * y4 + c * z4 * z4) / (c * z3);
    Ok([diag(e), m(-y4, y12, y3, y4), m(-z4, z12, z3, z4)])
}

fn t2f6(b: &Build, y3: C64, y4: C64, z3: C64, z4: C64) -> Result<[CMat; 3]> {
    let c = b.c;
    let x = t2_e(b, 1.0, y3, y4, z3, z4)?;
    let y12 = -(2.0 * z4 * x + c * y4 * y4) / (c * y3);
    let z12 = -(2.0 * x * y4 + c * z4 * z4) / (c * z3);
    Ok([diag(-x), m(-y4, y12, y3, y4), m(-z4, z12, z3, z4)])
}

fn nonzero(id: FamilyId, name: &str, v: C64, scale: f64) -> Result<()> {
    if v.norm() <= CONSTRAINT_TOL * (1.0 + scale) {
        return Err(Error::Constraint {
            family: id.to_string(),
            msg: format!("{name} must be nonzero"),
        });
    }
    Ok(())
}

fn check_constraints(id: FamilyId, p: &[C64]) -> Result<()> {
    use FamilyId::*;
    let cube_roots = |k: f64| C64::from_polar(1.0, k * std::f64::consts::TAU / 3.0);
    match id {
        T1f1 | T1f2 | T1f5 => nonzero(id, "z4", p[1], 0.0),
        T1f3 | T1f4 => nonzero(id, "z3", p[1], 0.0),
        T2f1 => {
            nonzero(id, "y3", p[0], 0.0)?;
            nonzero(id, "y4", p[1], 0.0)
        }
        T2f2 => nonzero(id, "y3", p[1], 0.0),
        T2f3 => {
            nonzero(id, "z3", p[1], 0.0)?;
            nonzero(id, "z4", p[2], 0.0)
        }
        T2f4 => nonzero(id, "z3", p[1], 0.0),
        T2f5 | T2f6 => {
            nonzero(id, "y3", p[0], 0.0)?;
            nonzero(id, "z3", p[2], 0.0)
        }
        T3f1 => nonzero(id, "z3", p[1], 0.0),
        T3f2 => nonzero(id, "z4", p[0], 0.0),
        T4f1 => nonzero(id, "z4", p[1], 0.0),
        T4f2 => nonzero(id, "x4", p[0], 0.0),
        T4f3 => {
            let (y4, z4) = (p[0], p[1]);
            nonzero(id, "y4", y4, 0.0)?;
            for k in 0..3 {
                let zeta = cube_roots(k as f64);
                if (z4 - zeta * y4).norm() <= CONSTRAINT_TOL * (1.0 + y4.norm()) {
                    return Err(Error::Constraint {
                        family: id.to_string(),
                        msg: format!("z4 = zeta*y4 with zeta = exp(2 pi i {k}/3)"),
                    });
                }
            }
            Ok(())
        }
        T4f4 => {
            let (y4, z3, z4) = (p[0], p[1], p[2]);
            for k in [1.0, 2.0] {
                if (y4 - cube_roots(k) * z4).norm() <= CONSTRAINT_TOL * (1.0 + z4.norm()) {
                    return Err(Error::Constraint {
                        family: id.to_string(),
                        msg: "y4 = exp(+-2 pi i/3)*z4".into(),
                    });
                }
            }
            if (z4 - y4 * z3).norm() <= CONSTRAINT_TOL * (1.0 + (y4 * z3).norm()) {
                return Err(Error::Constraint {
                    family: id.to_string(),
                    msg: "z4 = y4*z3".into(),
                });
            }
            Ok(())
        }
    }
}

fn build(id: FamilyId, c: C64, p: &[C64], branch: Branch) -> Result<[CMat; 3]> {
    use FamilyId::*;
    let b = Build {
        id,
        c,
        s: branch.sign(),
    };
    let one = one();
    match id {
        T1f1 => t1f1_2(&b, p[0], p[1], true),
        T1f2 => t1f1_2(&b, p[0], p[1], false),
        T1f3 => t1f3(&b, p[0], p[1], p[2]),
        T1f4 => t1f4(&b, p[0], p[1], p[2]),
        T1f5 => t1f5(&b, p[0], p[1]),
        T2f1 => t2f1(&b, p[0], p[1], p[2]),
        T2f2 => t2f2(&b, p[0], p[1]),
        T2f3 => t2f3(&b, p[0], p[1], p[2]),
        T2f4 => t2f4(&b, p[0], p[1]),
        T2f5 => t2f5(&b, p[0], p[1], p[2], p[3]),
        T2f6 => t2f6(&b, p[0], p[1], p[2], p[3]),
        T3f1 => t1f4(&b, p[0], p[1], one),
        T3f2 => t1f5(&b, one, p[0]),
        T4f1 => t2f1(&b, one, p[0], p[1]),
        T4f2 => t2f2(&b, p[0], one),
        T4f3 => t2f3(&b, p[0], one, p[1]),
        T4f4 => t2f5(&b, one, p[0], p[1], p[2]),
    }
}

fn read_params(id: FamilyId, env: &ParamEnv) -> Result<(C64, Vec<C64>)> {
    let c = env.get("c")?;
    let p = id
        .params()
        .iter()
        .map(|k| env.get(k))
        .collect::<Result<Vec<_>>>()?;
    Ok((c, p))
}

fn make_rep(id: FamilyId, c: C64, names: &[&str], p: &[C64], mats: [CMat; 3]) -> Result<Rep> {
    let mut env = ParamEnv::new()
        .with("a", one())
        .with("b", one())
        .with("c", c);
    for (k, v) in names.iter().zip(p) {
        env.set(k, *v);
    }
    let rep = Rep::new(
        vec!["x".into(), "y".into(), "z".into()],
        mats.to_vec(),
        env,
    )?;
    if !rep.is_finite() {
        return Err(Error::Denominator {
            family: id.to_string(),
            denominator: "overflow".into(),
        });
    }
    Ok(rep)
}

/// The family member at the parameters bound in `env` (principal branch).
pub fn family(id: FamilyId, env: &ParamEnv) -> Result<Rep> {
    family_with_branch(id, env, Branch::Principal)
}

/// The family member on the given radical branch.
pub fn family_with_branch(id: FamilyId, env: &ParamEnv, branch: Branch) -> Result<Rep> {
    let (c, p) = read_params(id, env)?;
    check_constraints(id, &p)?;
    make_rep(id, c, id.params(), &p, build(id, c, &p, branch)?)
}

/// Like [`family_with_branch`] without the side conditions; vanishing
/// denominators are still reported.
pub fn family_unchecked(id: FamilyId, env: &ParamEnv, branch: Branch) -> Result<Rep> {
    let (c, p) = read_params(id, env)?;
    make_rep(id, c, id.params(), &p, build(id, c, &p, branch)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reptheory::{find_invariant_line, is_irreducible_burnside, relation_residual};
    use crate::sklyanin::symbolic_presentation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn env(pairs: &[(&str, f64)]) -> ParamEnv {
        pairs.iter().map(|(k, v)| (*k, r(*v))).collect()
    }

    #[test]
    fn t3f2_example() {
        let rep = family(FamilyId::T3f2, &env(&[("c", 2.0), ("z4", 1.0)])).unwrap();
        assert_eq!(rep.images[0], CMat::m2(r(0.0), r(1.0), r(0.0), r(0.0)));
        assert_eq!(rep.images[1], CMat::m2(r(-1.0), r(0.5), r(-2.0), r(1.0)));
        assert_eq!(rep.images[2], CMat::m2(r(-1.0), r(1.0), r(0.0), r(1.0)));
        assert!(relation_residual(&symbolic_presentation(), &rep).unwrap() <= 1e-12);
    }

    #[test]
    fn t2f2_example() {
        let rep = family(FamilyId::T2f2, &env(&[("c", 2.0), ("x4", 1.0), ("y3", 1.0)])).unwrap();
        assert_eq!(rep.images[0], CMat::diag(&[r(-1.0), r(1.0)]));
        assert_eq!(rep.images[1], CMat::m2(r(0.0), r(0.0), r(1.0), r(0.0)));
        assert_eq!(rep.images[2], CMat::m2(r(0.0), r(-2.0), r(0.0), r(0.0)));
    }

    #[test]
    fn constraint_and_denominator_errors() {
        let e = family(FamilyId::T4f1, &env(&[("c", 5.0), ("y4", 1.0), ("z4", 0.0)]));
        assert!(matches!(e, Err(Error::Constraint { .. })));
        let e = family_unchecked(FamilyId::T4f1, &env(&[("c", 5.0), ("y4", 0.0), ("z4", 1.0)]), Branch::Principal);
        assert!(matches!(e, Err(Error::Denominator { ref denominator, .. }) if denominator == "2*y4"));
        let e = family(FamilyId::T4f3, &env(&[("c", 5.0), ("y4", 1.5), ("z4", 1.5)]));
        assert!(matches!(e, Err(Error::Constraint { .. })));
        let e = family(FamilyId::T3f2, &env(&[("c", 5.0)]));
        assert_eq!(e, Err(Error::UnboundParameter("z4".into())));
    }

    #[test]
    fn ids_round_trip() {
        for id in FamilyId::ALL {
            assert_eq!(id.as_str().parse::<FamilyId>().unwrap(), id);
            let j = serde_json::to_string(&id).unwrap();
            assert_eq!(j, format!("\"{id}\""));
        }
        assert!("t5f1".parse::<FamilyId>().is_err());
    }

    #[test]
    fn branches_pair_up() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rc = |rng: &mut ChaCha8Rng| C64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        for _ in 0..50 {
            let c = rc(&mut rng) + 2.0;
            let p: Vec<C64> = (0..4).map(|_| rc(&mut rng)).collect();
            let e3: ParamEnv = [("c", c), ("z2", p[0]), ("z3", p[1]), ("z4", p[2])].into_iter().collect();
            let a = family_with_branch(FamilyId::T1f3, &e3, Branch::Principal).unwrap();
            let b = family_with_branch(FamilyId::T1f4, &e3, Branch::Negated).unwrap();
            assert!(a.images.iter().zip(&b.images).all(|(x, y)| (x - y).max_abs() < 1e-9));
            let e5: ParamEnv = [("c", c), ("y3", p[0]), ("y4", p[1]), ("z3", p[2]), ("z4", p[3])].into_iter().collect();
            let a = family_with_branch(FamilyId::T2f6, &e5, Branch::Principal).unwrap();
            let b = family_with_branch(FamilyId::T2f5, &e5, Branch::Negated).unwrap();
            assert!(a.images.iter().zip(&b.images).all(|(x, y)| (x - y).max_abs() < 1e-9));
        }
    }

    #[test]
    fn every_family_solves_the_relations() {
        let pres = symbolic_presentation();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for id in FamilyId::ALL {
            for branch in [Branch::Principal, Branch::Negated] {
                let mut done = 0;
                while done < 40 {
                    let c = C64::from_polar(rng.random_range(0.5..3.0), rng.random_range(0.0..6.3));
                    let mut e = ParamEnv::new().with("c", c);
                    for k in id.params() {
                        e.set(k, C64::from_polar(rng.random_range(0.3..2.0), rng.random_range(0.0..6.3)));
                    }
                    let Ok(rep) = family_with_branch(id, &e, branch) else {
                        continue;
                    };
                    done += 1;
                    let res = relation_residual(&pres, &rep).unwrap();
                    assert!(res <= 1e-8, "{id} {branch:?}: {res}");
                    if id.is_representative() {
                        assert!(is_irreducible_burnside(&rep, 1e-8), "{id}");
                        assert!(find_invariant_line(&rep, 1e-8).is_none(), "{id}");
                    }
                }
            }
        }
    }
}
