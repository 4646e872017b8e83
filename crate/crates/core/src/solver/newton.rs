//! Damped Gauss-Newton on relation entries plus linear side equations.

use crate::freealg::{eval_ncpoly, eval_ncpoly_derivative, ParamEnv};
use crate::matkit::{lstsq, CMat};
use crate::reptheory::Presentation;
use crate::C64;

/// One unknown: moving it by `t` adds `t·dir` to image `gen`.
#[derive(Debug, Clone)]
pub struct Unknown {
    pub name: String,
    pub gen: usize,
    pub dir: CMat,
}

/// Generator images as a fixed part plus a linear combination of unknowns.
#[derive(Debug, Clone)]
pub struct Layout {
    pub base: Vec<CMat>,
    pub unknowns: Vec<Unknown>,
}

impl Layout {
    pub fn assemble(&self, u: &[C64]) -> Vec<CMat> {
        let mut mats = self.base.clone();
        for (k, t) in self.unknowns.iter().zip(u) {
            mats[k.gen].axpy(*t, &k.dir);
        }
        mats
    }

    pub fn len(&self) -> usize {
        self.unknowns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unknowns.is_empty()
    }
}

/// `a·u = t`.
#[derive(Debug, Clone)]
pub struct LinearEq {
    pub coeffs: Vec<C64>,
    pub target: C64,
}

pub struct System<'a> {
    pub pres: &'a Presentation,
    pub env: &'a ParamEnv,
    pub layout: &'a Layout,
    pub linear: Vec<LinearEq>,
}

impl System<'_> {
    pub fn residual(&self, u: &[C64]) -> Vec<C64> {
        let mats = self.layout.assemble(u);
        let mut out = Vec::new();
        for rel in &self.pres.relations {
            let m = eval_ncpoly(rel, &mats, self.env).expect("layout matches presentation");
            out.extend_from_slice(m.as_slice());
        }
        for eq in &self.linear {
            let v: C64 = eq.coeffs.iter().zip(u).map(|(a, x)| a * x).sum();
            out.push(v - eq.target);
        }
        out
    }

    pub fn jacobian(&self, u: &[C64]) -> CMat {
        let mats = self.layout.assemble(u);
        let nu = self.layout.len();
        let per = mats[0].rows() * mats[0].cols();
        let rows = self.pres.relations.len() * per + self.linear.len();
        let mut j = CMat::zeros(rows, nu);
        for (k, unk) in self.layout.unknowns.iter().enumerate() {
            for (r, rel) in self.pres.relations.iter().enumerate() {
                let d = eval_ncpoly_derivative(rel, &mats, self.env, unk.gen, &unk.dir)
                    .expect("layout matches presentation");
                for (e, v) in d.as_slice().iter().enumerate() {
                    j[(r * per + e, k)] = *v;
                }
            }
        }
        let off = self.pres.relations.len() * per;
        for (i, eq) in self.linear.iter().enumerate() {
            for (k, a) in eq.coeffs.iter().enumerate() {
                j[(off + i, k)] = *a;
            }
        }
        j
    }
}

pub fn max_abs(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub u: Vec<C64>,
    /// Largest residual entry at `u`.
    pub residual: f64,
    pub steps: usize,
    pub converged: bool,
}

/// Minimum-norm Gauss-Newton steps, halving on residual increase.
///
/// Stops when the largest residual entry is at most `conv_tol`, after
/// `max_steps`, when no halving decreases the residual, or when `‖u‖`
/// exceeds `1e8`.
pub fn gauss_newton(sys: &System, u0: &[C64], max_steps: usize, conv_tol: f64) -> NewtonOutcome {
    let mut u = u0.to_vec();
    let mut f = sys.residual(&u);
    let mut steps = 0;
    while steps < max_steps {
        if max_abs(&f) <= conv_tol {
            break;
        }
        steps += 1;
        let j = sys.jacobian(&u);
        let rhs: Vec<C64> = f.iter().map(|z| -z).collect();
        let delta = lstsq(&j, &rhs, 1e-12);
        let f0 = norm2(&f);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<C64> = u.iter().zip(&delta).map(|(a, d)| a + d * t).collect();
            let ft = sys.residual(&trial);
            let n = norm2(&ft);
            if n.is_finite() && n < f0 {
                u = trial;
                f = ft;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted || norm2(&u) > 1e8 {
            break;
        }
    }
    let residual = max_abs(&f);
    NewtonOutcome {
        converged: residual <= conv_tol && norm2(&u) <= 1e8,
        u,
        residual,
        steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_square_system() {
        // x*x - 2 = 0 on a 1×1 image, plus nothing else
        let pres = Presentation::parse(&["x"], &[], &["x*x - 2"]).unwrap();
        let layout = Layout {
            base: vec![CMat::zeros(1, 1)],
            unknowns: vec![Unknown {
                name: "x".into(),
                gen: 0,
                dir: CMat::identity(1),
            }],
        };
        let env = ParamEnv::new();
        let sys = System {
            pres: &pres,
            env: &env,
            layout: &layout,
            linear: vec![],
        };
        let out = gauss_newton(&sys, &[C64::new(1.0, 0.1)], 100, 1e-13);
        assert!(out.converged);
        assert!((out.u[0] - C64::new(2f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn jacobian_matches_differences() {
        let pres = Presentation::parse(&["x", "y"], &[], &["x*y + y*x + x*x"]).unwrap();
        let z = CMat::zeros(2, 2);
        let mut unknowns = Vec::new();
        for g in 0..2 {
            for e in 0..4 {
                let mut d = CMat::zeros(2, 2);
                d[(e / 2, e % 2)] = C64::new(1.0, 0.0);
                unknowns.push(Unknown {
                    name: format!("{g}{e}"),
                    gen: g,
                    dir: d,
                });
            }
        }
        let layout = Layout {
            base: vec![z.clone(), z],
            unknowns,
        };
        let env = ParamEnv::new();
        let sys = System {
            pres: &pres,
            env: &env,
            layout: &layout,
            linear: vec![LinearEq {
                coeffs: (0..8).map(|k| C64::new(k as f64, 1.0)).collect(),
                target: C64::new(1.0, 0.0),
            }],
        };
        let u: Vec<C64> = (0..8).map(|k| C64::new(0.1 * k as f64, -0.05 * k as f64)).collect();
        let j = sys.jacobian(&u);
        let f0 = sys.residual(&u);
        let h = 1e-7;
        for k in 0..8 {
            let mut up = u.clone();
            up[k] += h;
            let f1 = sys.residual(&up);
            for (r, (a, b)) in f1.iter().zip(&f0).enumerate() {
                assert!(((a - b) / h - j[(r, k)]).norm() < 1e-5);
            }
        }
    }
}
