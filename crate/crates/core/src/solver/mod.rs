//! Numerical rediscovery of the 2-dimensional classification.
//!
//! `X` is fixed in Jordan form and the remaining entries are found by
//! Gauss-Newton from random starts on the relation entries plus random
//! affine slices. Converged points are polished on the unsliced system,
//! deduplicated up to conjugation and matched to a representative family.

mod matching;
mod newton;

pub use matching::{match_one_block, match_psi, match_two_blocks, FamilyMatch};
pub use newton::{gauss_newton, max_abs, LinearEq, Layout, NewtonOutcome, System, Unknown};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::freealg::ParamEnv;
use crate::matkit::CMat;
use crate::reptheory::{
    find_conjugator, find_invariant_line, fingerprint, is_irreducible_burnside, relation_residual,
    Fingerprint, Presentation, Rep, RepJson,
};
use crate::skewpoly::skew_presentation;
use crate::sklyanin::{presentation, SklyaninParams};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Sklyanin,
    Skew,
}

impl FromStr for Algebra {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sklyanin" => Ok(Algebra::Sklyanin),
            "skew" => Ok(Algebra::Skew),
            _ => Err(Error::Schema(format!("unknown algebra `{s}`"))),
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algebra::Sklyanin => "sklyanin",
            Algebra::Skew => "skew",
        })
    }
}

/// Shape of `X`: `[[x1, 1], [0, x1]]` or `diag(x1, x4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JordanKind {
    OneBlock,
    TwoBlocks,
}

impl FromStr for JordanKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" | "one_block" => Ok(JordanKind::OneBlock),
            "two" | "two_blocks" => Ok(JordanKind::TwoBlocks),
            _ => Err(Error::Schema(format!("unknown jordan kind `{s}`"))),
        }
    }
}

impl fmt::Display for JordanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JordanKind::OneBlock => "one_block",
            JordanKind::TwoBlocks => "two_blocks",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveTask {
    pub algebra: Algebra,
    pub jordan: JordanKind,
    /// Ignored for the skew ring.
    pub c: C64,
    pub num_starts: usize,
    pub seed: u64,
    /// `None` picks the default for the algebra and Jordan kind.
    pub slice_count: Option<usize>,
}

impl SolveTask {
    pub fn new(algebra: Algebra, jordan: JordanKind, c: C64, num_starts: usize, seed: u64) -> Self {
        SolveTask {
            algebra,
            jordan,
            c,
            num_starts,
            seed,
            slice_count: None,
        }
    }

    pub fn default_slices(&self) -> usize {
        match (self.algebra, self.jordan) {
            (Algebra::Sklyanin, JordanKind::OneBlock) => 2,
            (Algebra::Sklyanin, JordanKind::TwoBlocks) => 3,
            (Algebra::Skew, _) => 2,
        }
    }

    pub fn slices(&self) -> usize {
        self.slice_count.unwrap_or_else(|| self.default_slices())
    }
}

/// Residual accepted by the sliced run.
pub const SLICED_TOL: f64 = 1e-9;
/// Newton target residual.
pub const CONV_TOL: f64 = 1e-11;
/// Target of the unsliced polish; singular directions converge slowly.
pub const POLISH_TOL: f64 = 1e-15;
/// Normalized relation residual every reported solution satisfies.
pub const REPORT_TOL: f64 = 1e-8;
pub const MAX_STEPS: usize = 100;
/// Radius of the start disk and bound on slice targets.
pub const START_RADIUS: f64 = 2.0;
/// Entries below this, relative to `1 + max|u|`, are candidates for snapping.
pub const SNAP_TOL: f64 = 1e-5;
/// Fraction of starts that also pin random unknowns to zero.
pub const PIN_FRACTION: f64 = 0.5;
/// Chance of pinning each non-`X` unknown in a pinned start.
pub const PIN_PROB: f64 = 0.35;

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub rep: Rep,
    /// Normalized relation residual on the unsliced system.
    pub residual: f64,
    pub irreducible: bool,
    pub matched: Option<FamilyMatch>,
    /// Invariant line of a reducible solution.
    pub witness: Option<Vec<C64>>,
    /// Index of the first start that reached this class.
    pub start: usize,
    /// Number of converged starts in this class.
    pub hits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub starts: usize,
    pub converged: usize,
    pub deduped: usize,
    pub irreducible: usize,
    pub matched: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub task: SolveTask,
    pub solutions: Vec<Solution>,
    pub stats: SolveStats,
}

fn unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(i, j)] = C64::new(1.0, 0.0);
    m
}

fn unknown(name: &str, gen: usize, dir: CMat) -> Unknown {
    Unknown {
        name: name.into(),
        gen,
        dir,
    }
}

/// Unknowns and fixed part of `X` for a task; the first one or two unknowns
/// belong to `X`.
pub fn layout(algebra: Algebra, jordan: JordanKind) -> (Layout, usize) {
    let ngen = match algebra {
        Algebra::Sklyanin => 3,
        Algebra::Skew => 2,
    };
    let mut base = vec![CMat::zeros(2, 2); ngen];
    let mut unknowns = Vec::new();
    let x_count = match jordan {
        JordanKind::OneBlock => {
            base[0] = unit(2, 0, 1);
            unknowns.push(unknown("x1", 0, CMat::identity(2)));
            1
        }
        JordanKind::TwoBlocks => {
            unknowns.push(unknown("x1", 0, unit(2, 0, 0)));
            unknowns.push(unknown("x4", 0, unit(2, 1, 1)));
            2
        }
    };
    for (g, letter) in ["y", "z"].iter().enumerate().take(ngen - 1) {
        for e in 0..4 {
            unknowns.push(unknown(&format!("{letter}{}", e + 1), g + 1, unit(2, e / 2, e % 2)));
        }
    }
    (Layout { base, unknowns }, x_count)
}

fn task_presentation(task: &SolveTask) -> Result<(Presentation, ParamEnv, Vec<String>)> {
    match task.algebra {
        Algebra::Sklyanin => {
            let p = SklyaninParams::one_one(task.c)?;
            Ok((presentation(&p)?, p.env(), vec!["x".into(), "y".into(), "z".into()]))
        }
        Algebra::Skew => Ok((skew_presentation(), ParamEnv::new(), vec!["x".into(), "y".into()])),
    }
}

fn disk(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    let r = radius * rng.random::<f64>().sqrt();
    let t = rng.random_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r, t)
}

struct Found {
    start: usize,
    rep: Rep,
    residual: f64,
}

fn run_start(
    task: &SolveTask,
    pres: &Presentation,
    env: &ParamEnv,
    lay: &Layout,
    x_count: usize,
    start: usize,
    generators: &[String],
) -> Option<Found> {
    let mut rng = ChaCha8Rng::seed_from_u64(task.seed);
    rng.set_stream(start as u64 + 1);
    let nu = lay.len();
    let u0: Vec<C64> = (0..nu).map(|_| disk(&mut rng, START_RADIUS)).collect();
    let mut linear = Vec::new();
    if rng.random::<f64>() < PIN_FRACTION {
        for k in x_count..nu {
            if rng.random::<f64>() < PIN_PROB {
                let mut coeffs = vec![C64::new(0.0, 0.0); nu];
                coeffs[k] = C64::new(1.0, 0.0);
                linear.push(LinearEq {
                    coeffs,
                    target: C64::new(0.0, 0.0),
                });
            }
        }
    }
    let slices = task.slices().saturating_sub(linear.len());
    for _ in 0..slices {
        let coeffs: Vec<C64> = (0..nu).map(|_| disk(&mut rng, 1.0)).collect();
        linear.push(LinearEq {
            coeffs,
            target: disk(&mut rng, START_RADIUS),
        });
    }
    let sliced = System {
        pres,
        env,
        layout: lay,
        linear,
    };
    let out = gauss_newton(&sliced, &u0, MAX_STEPS, CONV_TOL);
    if out.residual > SLICED_TOL || !out.u.iter().all(|z| z.is_finite()) {
        return None;
    }
    let free = System {
        pres,
        env,
        layout: lay,
        linear: Vec::new(),
    };
    let polished = gauss_newton(&free, &out.u, MAX_STEPS, POLISH_TOL);
    let u = if polished.residual <= out.residual { polished.u } else { out.u };
    let u = snap(&free, u);
    let rep = Rep::new(generators.to_vec(), lay.assemble(&u), env.clone()).ok()?;
    let residual = relation_residual(pres, &rep).ok()?;
    (residual <= REPORT_TOL && rep.is_finite()).then_some(Found {
        start,
        rep,
        residual,
    })
}

/// Near a singular point of the solution set Newton converges only
/// linearly and stalls with entries of size `√ε` that should be zero.
/// Such entries are set to zero and held there while the remaining ones
/// are polished; the snapped point is kept when it converges.
fn snap(free: &System, u: Vec<C64>) -> Vec<C64> {
    let scale = 1.0 + max_abs(&u);
    let small: Vec<usize> = (0..u.len())
        .filter(|&k| u[k] != C64::new(0.0, 0.0) && u[k].norm() <= SNAP_TOL * scale)
        .collect();
    if small.is_empty() {
        return u;
    }
    let nu = u.len();
    let mut u0 = u.clone();
    let mut linear = Vec::new();
    for &k in &small {
        u0[k] = C64::new(0.0, 0.0);
        let mut coeffs = vec![C64::new(0.0, 0.0); nu];
        coeffs[k] = C64::new(1.0, 0.0);
        linear.push(LinearEq {
            coeffs,
            target: C64::new(0.0, 0.0),
        });
    }
    let pinned = System {
        pres: free.pres,
        env: free.env,
        layout: free.layout,
        linear,
    };
    let out = gauss_newton(&pinned, &u0, MAX_STEPS, POLISH_TOL);
    if out.residual <= CONV_TOL {
        let mut v = out.u;
        for &k in &small {
            v[k] = C64::new(0.0, 0.0);
        }
        v
    } else {
        u
    }
}

/// Runs every start, then deduplicates, classifies and matches.
pub fn solve_reps(task: &SolveTask) -> Result<SolveReport> {
    if task.num_starts == 0 {
        return Err(Error::Precondition("num_starts must be at least 1".into()));
    }
    let (pres, env, generators) = task_presentation(task)?;
    let (lay, x_count) = layout(task.algebra, task.jordan);
    let found: Vec<Found> = (0..task.num_starts)
        .into_par_iter()
        .filter_map(|s| run_start(task, &pres, &env, &lay, x_count, s, &generators))
        .collect();
    let converged = found.len();

    let mut keyed: Vec<(Fingerprint, Found)> = found.into_iter().map(|f| (fingerprint(&f.rep), f)).collect();
    keyed.sort_by(|a, b| {
        a.0.cmp_lex(&b.0)
            .then(a.1.residual.total_cmp(&b.1.residual))
            .then(a.1.start.cmp(&b.1.start))
    });

    // greedy dedup against the kept solutions with close fingerprints
    let mut kept: Vec<(Fingerprint, Found, usize)> = Vec::new();
    for (fp, f) in keyed {
        let dup = kept
            .par_iter()
            .position_first(|(kfp, k, _)| kfp.close(&fp, 1e-6) && find_conjugator(&k.rep, &f.rep, 1e-7).is_some());
        match dup {
            Some(i) => {
                kept[i].2 += 1;
                kept[i].1.start = kept[i].1.start.min(f.start);
            }
            None => kept.push((fp, f, 1)),
        }
    }

    let solutions: Vec<Solution> = kept
        .into_par_iter()
        .map(|(_, f, hits)| {
            let irreducible = is_irreducible_burnside(&f.rep, 1e-8);
            let matched = if irreducible {
                match (task.algebra, task.jordan) {
                    (Algebra::Skew, _) => match_psi(&f.rep, 1e-7),
                    (Algebra::Sklyanin, JordanKind::OneBlock) => match_one_block(&f.rep, task.c, 1e-7),
                    (Algebra::Sklyanin, JordanKind::TwoBlocks) => match_two_blocks(&f.rep, task.c, 1e-7),
                }
            } else {
                None
            };
            let witness = if irreducible {
                None
            } else {
                find_invariant_line(&f.rep, 1e-8).map(|w| w.vector)
            };
            Solution {
                rep: f.rep,
                residual: f.residual,
                irreducible,
                matched,
                witness,
                start: f.start,
                hits,
            }
        })
        .collect();
    let stats = SolveStats {
        starts: task.num_starts,
        converged,
        deduped: solutions.len(),
        irreducible: solutions.iter().filter(|s| s.irreducible).count(),
        matched: solutions.iter().filter(|s| s.matched.is_some()).count(),
    };
    Ok(SolveReport {
        task: task.clone(),
        solutions,
        stats,
    })
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Serialize)]
struct SolutionJson<'a> {
    rep: RepJson,
    residual: f64,
    irreducible: bool,
    matched_family: Option<&'a str>,
    branch: Option<crate::sklyanin::Branch>,
    params: Option<BTreeMap<&'a str, [f64; 2]>>,
    conjugator: Option<Vec<Vec<[f64; 2]>>>,
    witness: Option<Vec<[f64; 2]>>,
    start: usize,
    hits: usize,
}

#[derive(Serialize)]
struct TaskJson {
    algebra: Algebra,
    jordan: JordanKind,
    c: [f64; 2],
    num_starts: usize,
    seed: u64,
    slice_count: usize,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    task: TaskJson,
    stats: SolveStats,
    solutions: Vec<SolutionJson<'a>>,
}

impl SolveReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        let t = &self.task;
        let report = ReportJson {
            task: TaskJson {
                algebra: t.algebra,
                jordan: t.jordan,
                c: pair(t.c),
                num_starts: t.num_starts,
                seed: t.seed,
                slice_count: t.slices(),
            },
            stats: self.stats,
            solutions: self
                .solutions
                .iter()
                .map(|s| SolutionJson {
                    rep: s.rep.to_json(),
                    residual: s.residual,
                    irreducible: s.irreducible,
                    matched_family: s.matched.as_ref().map(|m| m.family.as_str()),
                    branch: s.matched.as_ref().and_then(|m| m.branch),
                    params: s
                        .matched
                        .as_ref()
                        .map(|m| m.params.iter().map(|(k, v)| (k.as_str(), pair(*v))).collect()),
                    conjugator: s.matched.as_ref().map(|m| {
                        m.conjugator
                            .to_rows()
                            .into_iter()
                            .map(|r| r.into_iter().map(pair).collect())
                            .collect()
                    }),
                    witness: s.witness.as_ref().map(|w| w.iter().copied().map(pair).collect()),
                    start: s.start,
                    hits: s.hits,
                })
                .collect(),
        };
        serde_json::to_value(report).expect("report is serializable")
    }
}

/// Scalar solutions of the relations, from 200 random starts, deduplicated
/// within `1e-6`. Coordinates below `1e-6` are reported as zero.
pub fn one_dim_solutions(algebra: Algebra, c: C64, seed: u64) -> Result<Vec<Vec<C64>>> {
    let task = SolveTask::new(algebra, JordanKind::TwoBlocks, c, 1, seed);
    let (pres, env, _) = task_presentation(&task)?;
    let ngen = pres.arity();
    let lay = Layout {
        base: vec![CMat::zeros(1, 1); ngen],
        unknowns: (0..ngen)
            .map(|g| unknown(&pres.generators[g], g, CMat::identity(1)))
            .collect(),
    };
    let sys = System {
        pres: &pres,
        env: &env,
        layout: &lay,
        linear: Vec::new(),
    };
    let roots: Vec<Vec<C64>> = (0..200u64)
        .into_par_iter()
        .filter_map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s + 1);
            let u0: Vec<C64> = (0..ngen).map(|_| disk(&mut rng, START_RADIUS)).collect();
            // the origin is a singular root: convergence there is only linear
            let out = gauss_newton(&sys, &u0, 4 * MAX_STEPS, 1e-30);
            let scale = 1.0 + out.u.iter().map(|z| z.norm_sqr()).sum::<f64>();
            (out.residual <= 1e-20 * scale).then_some(out.u)
        })
        .collect();
    let mut uniq: Vec<Vec<C64>> = Vec::new();
    for r in roots {
        let clean: Vec<C64> = r
            .iter()
            .map(|z| if z.norm() < 1e-6 { C64::new(0.0, 0.0) } else { *z })
            .collect();
        if !uniq
            .iter()
            .any(|u| u.iter().zip(&clean).all(|(a, b)| (a - b).norm() <= 1e-6))
        {
            uniq.push(clean);
        }
    }
    uniq.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(uniq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn layout_sizes() {
        assert_eq!(layout(Algebra::Sklyanin, JordanKind::OneBlock).0.len(), 9);
        assert_eq!(layout(Algebra::Sklyanin, JordanKind::TwoBlocks).0.len(), 10);
        assert_eq!(layout(Algebra::Skew, JordanKind::TwoBlocks).0.len(), 6);
        let (lay, _) = layout(Algebra::Sklyanin, JordanKind::OneBlock);
        let mats = lay.assemble(&[r(2.0), r(0.0), r(0.0), r(0.0), r(0.0), r(0.0), r(0.0), r(1.0), r(0.0)]);
        assert_eq!(mats[0], CMat::m2(r(2.0), r(1.0), r(0.0), r(2.0)));
        assert_eq!(mats[2], CMat::m2(r(0.0), r(0.0), r(1.0), r(0.0)));
    }

    #[test]
    fn deterministic_and_sound() {
        let mut task = SolveTask::new(Algebra::Sklyanin, JordanKind::TwoBlocks, r(5.0), 24, 7);
        task.slice_count = Some(3);
        let a = solve_reps(&task).unwrap();
        let b = solve_reps(&task).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json_value(), b.to_json_value());
        for s in &a.solutions {
            assert!(s.residual <= REPORT_TOL);
        }
    }

    #[test]
    fn scalar_solutions() {
        assert_eq!(one_dim_solutions(Algebra::Sklyanin, r(2.0), 1).unwrap(), vec![vec![r(0.0); 3]]);
        let skew = one_dim_solutions(Algebra::Skew, r(0.0), 1).unwrap();
        assert!(skew.len() > 1);
        assert!(skew.iter().all(|p| p[0].norm() < 1e-6 || p[1].norm() < 1e-6));
    }

    #[test]
    fn rejects_bad_tasks() {
        let t = SolveTask::new(Algebra::Sklyanin, JordanKind::OneBlock, r(1.0), 5, 0);
        assert!(solve_reps(&t).is_err());
        let t = SolveTask::new(Algebra::Sklyanin, JordanKind::OneBlock, r(5.0), 0, 0);
        assert!(solve_reps(&t).is_err());
    }
}
