//! Matching a numerical solution to a representative family member.
//!
//! Candidate parameters are read off designated entries after moving the
//! solution into the family's normal form, refined by one least-squares
//! step, and accepted only when an explicit conjugator exists.

use serde::Serialize;

use crate::freealg::ParamEnv;
use crate::matkit::{lstsq, CMat};
use crate::reptheory::{find_conjugator, Rep};
use crate::skewpoly::{skew_rep, SkewRepSpec};
use crate::sklyanin::{family_with_branch, Branch, FamilyId};
use crate::C64;

/// Result of a successful match.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyMatch {
    /// Family id, or `psi` for the skew ring.
    pub family: String,
    pub branch: Option<Branch>,
    pub params: Vec<(String, C64)>,
    /// `Q` with `Q·member·Q⁻¹ = solution`.
    #[serde(skip)]
    pub conjugator: CMat,
}

const PIVOT_EPS: f64 = 1e-6;

fn z(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Family member at `params` (in the order of `id.params()`).
fn member(id: FamilyId, c: C64, params: &[C64], branch: Branch) -> Option<Rep> {
    let mut env = ParamEnv::new().with("c", c);
    for (k, v) in id.params().iter().zip(params) {
        env.set(k, *v);
    }
    family_with_branch(id, &env, branch).ok()
}

fn mismatch(a: &Rep, target: &[CMat]) -> Vec<C64> {
    a.images
        .iter()
        .zip(target)
        .flat_map(|(m, t)| (m - t).as_slice().to_vec())
        .collect()
}

/// One Gauss-Newton step on `‖member(p) − target‖` with a forward
/// difference Jacobian; keeps the step only if it helps.
fn refine(id: FamilyId, c: C64, p: Vec<C64>, branch: Branch, target: &[CMat]) -> Vec<C64> {
    let Some(m0) = member(id, c, &p, branch) else {
        return p;
    };
    let f0 = mismatch(&m0, target);
    let n0: f64 = f0.iter().map(|z| z.norm_sqr()).sum();
    if n0 == 0.0 {
        return p;
    }
    let h = 1e-7;
    let mut jac = CMat::zeros(f0.len(), p.len());
    for k in 0..p.len() {
        let mut q = p.clone();
        let step = h * (1.0 + p[k].norm());
        q[k] += step;
        let Some(mk) = member(id, c, &q, branch) else {
            return p;
        };
        for (r, (a, b)) in mismatch(&mk, target).iter().zip(&f0).enumerate() {
            jac[(r, k)] = (a - b) / step;
        }
    }
    let rhs: Vec<C64> = f0.iter().map(|z| -z).collect();
    let d = lstsq(&jac, &rhs, 1e-10);
    let q: Vec<C64> = p.iter().zip(&d).map(|(a, b)| a + b).collect();
    match member(id, c, &q, branch) {
        Some(m1) if mismatch(&m1, target).iter().map(|z| z.norm_sqr()).sum::<f64>() < n0 => q,
        _ => p,
    }
}

/// A solution moved by `frame`: `images = frame·solution·frame⁻¹`.
struct Normal {
    rep: Rep,
    frame: CMat,
}

impl Normal {
    fn of(solution: &Rep) -> Normal {
        Normal {
            rep: solution.clone(),
            frame: CMat::identity(solution.n),
        }
    }

    fn then(&self, q: &CMat) -> Normal {
        Normal {
            rep: self.rep.conjugate(q).expect("normalizing transforms are invertible"),
            frame: q * &self.frame,
        }
    }

    fn images(&self) -> &[CMat] {
        &self.rep.images
    }
}

/// Tries `id` near `guess`; the conjugator is found in the normal frame,
/// where the member and the solution have comparable entries, and then
/// composed with the inverse frame.
fn try_family(id: FamilyId, c: C64, guess: Vec<C64>, normal: &Normal, tol: f64) -> Option<FamilyMatch> {
    let branches: &[Branch] = if id.has_branch() {
        &[Branch::Principal, Branch::Negated]
    } else {
        &[Branch::Principal]
    };
    let params_of = |cand: Vec<C64>| -> Vec<(String, C64)> {
        id.params().iter().map(|s| s.to_string()).zip(cand).collect()
    };
    for &branch in branches {
        let p = refine(id, c, guess.clone(), branch, normal.images());
        for cand in [p, guess.clone()] {
            let Some(m) = member(id, c, &cand, branch) else {
                continue;
            };
            if let Some(q) = find_conjugator(&m, &normal.rep, tol) {
                let back = normal.frame.inverse().expect("frames are invertible");
                return Some(FamilyMatch {
                    family: id.to_string(),
                    branch: id.has_branch().then_some(branch),
                    params: params_of(cand),
                    conjugator: &back * &q,
                });
            }
        }
    }
    None
}

/// Matches a solution with `X = [[x1, 1], [0, x1]]` against `t3f1`, `t3f2`.
pub fn match_one_block(solution: &Rep, c: C64, tol: f64) -> Option<FamilyMatch> {
    let start = Normal::of(solution);
    let zm = &solution.images[2];
    if zm[(1, 0)].norm() > PIVOT_EPS {
        // [[1, q], [0, 1]] commutes with X and moves Z22 to 1
        let q = (zm[(1, 1)] - 1.0) / zm[(1, 0)];
        let normal = start.then(&CMat::m2(z(1.0), q, z(0.0), z(1.0)));
        let guess = vec![normal.images()[2][(0, 1)], normal.images()[2][(1, 0)]];
        if let Some(m) = try_family(FamilyId::T3f1, c, guess, &normal, tol) {
            return Some(m);
        }
    }
    let y21 = solution.images[1][(1, 0)];
    let normal = if y21.norm() > PIVOT_EPS {
        // move Y22 to 1 without touching Z22 when Z21 = 0
        let q = (1.0 - solution.images[1][(1, 1)]) / -y21;
        start.then(&CMat::m2(z(1.0), q, z(0.0), z(1.0)))
    } else {
        start
    };
    let guess = vec![normal.images()[2][(1, 1)]];
    try_family(FamilyId::T3f2, c, guess, &normal, tol)
}

/// Matches a solution with diagonal `X` against `t4f1..t4f4`, in that order.
///
/// Members of `t4f4` with `Z12 = 0` are orientation swaps of `t4f1`
/// members, so `t4f1` is tried in both orientations first.
pub fn match_two_blocks(solution: &Rep, c: C64, tol: f64) -> Option<FamilyMatch> {
    let start = Normal::of(solution);
    let swap = CMat::m2(z(0.0), z(1.0), z(1.0), z(0.0));
    let orients = [start.then(&CMat::identity(2)), start.then(&swap)];
    // the (2,1) entry of image `g` scaled to 1
    let scaled = |o: &Normal, g: usize| {
        let p = o.images()[g][(1, 0)];
        (p.norm() > PIVOT_EPS).then(|| o.then(&CMat::diag(&[z(1.0), p.inv()])))
    };
    for id in [FamilyId::T4f1, FamilyId::T4f2, FamilyId::T4f3, FamilyId::T4f4] {
        for o in &orients {
            let pivot = if id == FamilyId::T4f3 { 2 } else { 1 };
            let Some(normal) = scaled(o, pivot) else {
                continue;
            };
            let [x, y, zz] = normal.images() else {
                return None;
            };
            let guess = match id {
                FamilyId::T4f1 | FamilyId::T4f3 => vec![y[(1, 1)], zz[(1, 1)]],
                FamilyId::T4f2 => vec![x[(1, 1)]],
                _ => vec![y[(1, 1)], zz[(1, 0)], zz[(1, 1)]],
            };
            if let Some(m) = try_family(id, c, guess, &normal, tol) {
                return Some(m);
            }
        }
    }
    None
}

/// Matches a skew-ring solution against `x ↦ diag(−α, α), y ↦ [[0, 1], [β, 0]]`.
pub fn match_psi(solution: &Rep, tol: f64) -> Option<FamilyMatch> {
    let x = &solution.images[0];
    let y = &solution.images[1];
    let alpha = (x * x)[(0, 0)].sqrt();
    let beta = (y * y)[(0, 0)];
    for a in [alpha, -alpha] {
        let psi = skew_rep(SkewRepSpec::TwoDim(a, beta));
        if let Some(q) = find_conjugator(&psi, solution, tol) {
            return Some(FamilyMatch {
                family: "psi".into(),
                branch: None,
                params: vec![("alpha".into(), a), ("beta".into(), beta)],
                conjugator: q,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sklyanin::family;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn recovers_conjugated_representatives() {
        let c = r(5.0);
        // unipotent conjugation keeps X = J; diagonal and swap keep X diagonal
        let q1 = CMat::m2(r(1.0), C64::new(0.3, -0.7), r(0.0), r(1.0));
        let q2 = CMat::m2(r(0.0), C64::new(1.7, 0.2), C64::new(-0.4, 0.0), r(0.0));
        let cases: [(FamilyId, &[(&str, C64)], &CMat); 6] = [
            (FamilyId::T3f1, &[("z2", C64::new(0.4, 0.3)), ("z3", C64::new(-0.8, 0.5))], &q1),
            (FamilyId::T3f2, &[("z4", C64::new(1.1, -0.6))], &q1),
            (FamilyId::T4f1, &[("y4", C64::new(0.9, 0.2)), ("z4", C64::new(-0.5, 0.7))], &q2),
            (FamilyId::T4f2, &[("x4", C64::new(1.3, 0.1))], &q2),
            (FamilyId::T4f3, &[("y4", C64::new(0.6, -0.9)), ("z4", C64::new(1.2, 0.4))], &q2),
            (FamilyId::T4f4, &[("y4", C64::new(0.7, 0.1)), ("z3", C64::new(-1.1, 0.3)), ("z4", C64::new(0.5, 0.8))], &q2),
        ];
        for (id, params, q) in cases {
            let mut env = ParamEnv::new().with("c", c);
            for (k, v) in params {
                env.set(k, *v);
            }
            let rep = family(id, &env).unwrap().conjugate(q).unwrap();
            let m = if id.is_one_block() {
                match_one_block(&rep, c, 1e-7)
            } else {
                match_two_blocks(&rep, c, 1e-7)
            };
            let m = m.unwrap_or_else(|| panic!("{id} not matched"));
            assert_eq!(m.family, id.as_str());
        }
    }

    #[test]
    fn psi_match() {
        let rep = skew_rep(SkewRepSpec::TwoDim(r(0.7), r(-1.2)));
        let q = CMat::diag(&[r(2.0), r(0.5)]);
        let m = match_psi(&rep.conjugate(&q).unwrap(), 1e-7).unwrap();
        assert_eq!(m.family, "psi");
        assert!((m.params[1].1 - r(-1.2)).norm() < 1e-12);
    }
}
