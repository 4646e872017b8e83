//! Representations as tuples of matrices: relation residuals, the two
//! irreducibility tests, trace fingerprints, intertwiners and classification.

mod json;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::freealg::{eval_ncpoly, parse_ncpoly, NcPoly, ParamEnv};
use crate::matkit::{self, CMat};
use crate::{Error, Result, C64};

pub use json::RepJson;

/// Numerical tolerances shared across the pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Normalized relation residual accepted as a solution.
    pub residual: f64,
    /// Relative singular value cut for ranks and nullspaces.
    pub rank: f64,
    /// Relative gap below which eigenvalues coincide.
    pub eig: f64,
    /// Cross-determinant cut for projective equality.
    pub proj: f64,
    /// Relative distance below which fingerprints are considered equal.
    pub fingerprint: f64,
    /// Relative conjugation error accepted for an intertwiner.
    pub conjugator: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-8,
            rank: 1e-8,
            eig: 1e-8,
            proj: 1e-8,
            fingerprint: 1e-6,
            conjugator: 1e-7,
        }
    }
}

/// Generators, parameter names and defining relations of an algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub params: Vec<String>,
    pub relations: Vec<NcPoly>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, params: Vec<String>, relations: Vec<NcPoly>) -> Result<Self> {
        for r in &relations {
            if r.arity() > generators.len() {
                return Err(Error::DimensionMismatch(format!(
                    "relation uses {} generators, {} declared",
                    r.arity(),
                    generators.len()
                )));
            }
            if let Some(p) = r.params().into_iter().find(|p| !params.contains(p)) {
                return Err(Error::UnknownIdentifier { name: p, pos: 0 });
            }
        }
        Ok(Presentation {
            generators,
            params,
            relations,
        })
    }

    /// Parses each relation with [`parse_ncpoly`].
    pub fn parse(generators: &[&str], params: &[&str], relations: &[&str]) -> Result<Self> {
        let rels = relations
            .iter()
            .map(|t| parse_ncpoly(t, generators, params))
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            generators.iter().map(|s| s.to_string()).collect(),
            params.iter().map(|s| s.to_string()).collect(),
            rels,
        )
    }

    /// Substitutes the bound parameters into every relation.
    pub fn bind(&self, env: &ParamEnv) -> Result<Presentation> {
        Ok(Presentation {
            generators: self.generators.clone(),
            params: Vec::new(),
            relations: self
                .relations
                .iter()
                .map(|r| r.bind(env))
                .collect::<Result<_>>()?,
        })
    }

    pub fn arity(&self) -> usize {
        self.generators.len()
    }
}

/// A candidate representation: one `n×n` image per generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Rep {
    pub n: usize,
    pub generators: Vec<String>,
    pub images: Vec<CMat>,
    pub env: ParamEnv,
}

impl Rep {
    pub fn new(generators: Vec<String>, images: Vec<CMat>, env: ParamEnv) -> Result<Self> {
        if generators.len() != images.len() || images.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "{} generators but {} images",
                generators.len(),
                images.len()
            )));
        }
        let n = images[0].rows();
        if images.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch(
                "images must be square of equal size".into(),
            ));
        }
        Ok(Rep {
            n,
            generators,
            images,
            env,
        })
    }

    /// All images zero.
    pub fn trivial(generators: &[&str], n: usize, env: ParamEnv) -> Self {
        Rep {
            n,
            generators: generators.iter().map(|s| s.to_string()).collect(),
            images: vec![CMat::zeros(n, n); generators.len()],
            env,
        }
    }

    pub fn image(&self, name: &str) -> Option<&CMat> {
        self.generators
            .iter()
            .position(|g| g == name)
            .map(|i| &self.images[i])
    }

    /// `Q·M·Q⁻¹` for every image; `None` when `q` is singular.
    pub fn conjugate(&self, q: &CMat) -> Option<Rep> {
        let qi = q.inverse()?;
        Some(Rep {
            images: self.images.iter().map(|m| &(q * m) * &qi).collect(),
            ..self.clone()
        })
    }

    /// Largest Frobenius norm among the images.
    pub fn max_norm(&self) -> f64 {
        self.images.iter().map(CMat::norm).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.images.iter().all(CMat::is_finite)
    }

    pub fn to_json(&self) -> RepJson {
        RepJson::from_rep(self)
    }

    pub fn from_json(j: &RepJson) -> Result<Rep> {
        j.to_rep()
    }
}

/// Images reordered to match the presentation's generator order.
fn images_for<'a>(p: &Presentation, r: &'a Rep) -> Result<Vec<&'a CMat>> {
    p.generators
        .iter()
        .map(|g| {
            r.image(g).ok_or_else(|| {
                Error::DimensionMismatch(format!("representation has no image for `{g}`"))
            })
        })
        .collect()
}

/// Largest relation norm, scaled by `1 + max‖image‖²`.
pub fn relation_residual(p: &Presentation, r: &Rep) -> Result<f64> {
    let mats: Vec<CMat> = images_for(p, r)?.into_iter().cloned().collect();
    let scale = 1.0 + r.max_norm().powi(2);
    let mut worst = 0.0f64;
    for rel in &p.relations {
        worst = worst.max(eval_ncpoly(rel, &mats, &r.env)?.norm() / scale);
    }
    Ok(worst)
}

/// Burnside test: the images generate the full matrix algebra.
///
/// Images are scaled to unit Frobenius norm, so every word has norm at most
/// `√n`; images below `tol` times the largest norm count as zero. Words are enumerated breadth-first by length up to `n²−1`; a word
/// whose distance from the span found so far is at most `tol` is not
/// extended further.
pub fn is_irreducible_burnside(r: &Rep, tol: f64) -> bool {
    let n = r.n;
    if n <= 1 {
        return true;
    }
    let target = n * n;
    let top = r.max_norm();
    let gens: Vec<CMat> = r
        .images
        .iter()
        .filter(|m| m.norm() > tol * top && m.norm() > 0.0)
        .map(|m| m.scale(C64::new(1.0 / m.norm(), 0.0)))
        .collect();
    let mut basis: Vec<Vec<C64>> = Vec::new();
    let mut frontier = vec![CMat::identity(n)];
    let mut kept = Vec::new();
    // Gram-Schmidt on vectorized words
    let absorb = |m: &CMat, basis: &mut Vec<Vec<C64>>| -> bool {
        let mut v: Vec<C64> = m.as_slice().to_vec();
        for _ in 0..2 {
            for b in basis.iter() {
                let d: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= d * bi;
                }
            }
        }
        let res = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if res <= tol.max(1e-12) {
            return false;
        }
        basis.push(v.into_iter().map(|z| z / res).collect());
        true
    };
    absorb(&frontier[0], &mut basis);
    for _len in 1..target {
        kept.clear();
        for w in &frontier {
            for g in &gens {
                let m = g * w;
                if absorb(&m, &mut basis) {
                    if basis.len() == target {
                        return true;
                    }
                    kept.push(m);
                }
            }
        }
        if kept.is_empty() {
            break;
        }
        std::mem::swap(&mut frontier, &mut kept);
    }
    basis.len() == target
}

/// A common eigenvector of all generator images.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducibilityWitness {
    pub vector: Vec<C64>,
}

fn unit(v: &[C64]) -> Vec<C64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|z| z / n).collect()
}

/// `‖M v − (v*Mv) v‖` for unit `v`, relative to `1+‖M‖`.
fn line_defect(m: &CMat, v: &[C64]) -> f64 {
    let mv = m.mul_vec(v);
    let lam: C64 = v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum();
    let d = mv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - lam * b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    d / (1.0 + m.norm())
}

/// Searches for a common invariant line of a 2-dimensional rep.
///
/// Candidates are the eigenvectors of each non-scalar image and of a fixed
/// pseudo-random combination of all images.
pub fn find_invariant_line(r: &Rep, tol: f64) -> Option<ReducibilityWitness> {
    if r.n == 1 {
        return Some(ReducibilityWitness {
            vector: vec![C64::new(1.0, 0.0)],
        });
    }
    assert_eq!(r.n, 2, "find_invariant_line needs a 2-dimensional rep");
    let mut sources: Vec<CMat> = r
        .images
        .iter()
        .filter(|m| !m.is_scalar(tol))
        .cloned()
        .collect();
    if sources.is_empty() {
        return Some(ReducibilityWitness {
            vector: vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1ee7);
    let mut combo = CMat::zeros(2, 2);
    for m in &r.images {
        let w = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        combo.axpy(w, &m.scale(C64::new(1.0 / (1.0 + m.norm()), 0.0)));
    }
    if !combo.is_scalar(tol) {
        sources.push(combo);
    }
    let mut best: Option<(f64, Vec<C64>)> = None;
    for s in &sources {
        for (_, v) in matkit::eigvecs_2x2(s, tol) {
            let v = unit(&v);
            let defect = r
                .images
                .iter()
                .map(|m| line_defect(m, &v))
                .fold(0.0, f64::max);
            if defect <= tol && best.as_ref().is_none_or(|(d, _)| defect < *d) {
                best = Some((defect, v));
            }
        }
    }
    best.map(|(_, vector)| ReducibilityWitness { vector })
}

/// Conjugation-invariant traces of short words.
#[derive(Debug, Clone, PartialEq)]
pub struct Fingerprint {
    pub values: Vec<C64>,
}

impl Fingerprint {
    /// Largest entrywise distance.
    pub fn distance(&self, other: &Fingerprint) -> f64 {
        if self.values.len() != other.values.len() {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Distance within `tol·(1 + max|entry|)`.
    pub fn close(&self, other: &Fingerprint, tol: f64) -> bool {
        self.distance(other) <= tol * (1.0 + self.max_abs().max(other.max_abs()))
    }

    /// Lexicographic comparison on (re, im) of each entry.
    pub fn cmp_lex(&self, other: &Fingerprint) -> std::cmp::Ordering {
        for (a, b) in self.values.iter().zip(&other.values) {
            let o = a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
            if o.is_ne() {
                return o;
            }
        }
        self.values.len().cmp(&other.values.len())
    }
}

/// Traces of each image, each square, each ordered pair `i<j` and, with three
/// or more generators, the product of the first three.
///
/// For `(x, y, z)` this is `(tr X, tr Y, tr Z, tr X², tr Y², tr Z², tr XY,
/// tr XZ, tr YZ, tr XYZ)`; for two generators `(tr X, tr Y, tr X², tr Y², tr XY)`.
pub fn fingerprint(r: &Rep) -> Fingerprint {
    let m = &r.images;
    let k = m.len();
    let mut values: Vec<C64> = m.iter().map(CMat::trace).collect();
    values.extend(m.iter().map(|a| (a * a).trace()));
    for i in 0..k {
        for j in i + 1..k {
            values.push((&m[i] * &m[j]).trace());
        }
    }
    if k >= 3 {
        values.push((&(&m[0] * &m[1]) * &m[2]).trace());
    }
    Fingerprint { values }
}

/// Stacked Sylvester system `Q·M₁ − M₂·Q = 0` in the row-major entries of `Q`,
/// one block per generator, each block scaled by `1/(1+‖M₁‖+‖M₂‖)`.
pub fn sylvester_system(r1: &Rep, r2: &Rep) -> CMat {
    let n = r1.n;
    let nn = n * n;
    let mut a = CMat::zeros(nn * r1.images.len(), nn);
    for (g, (m1, m2)) in r1.images.iter().zip(&r2.images).enumerate() {
        let s = 1.0 / (1.0 + m1.norm() + m2.norm());
        for i in 0..n {
            for j in 0..n {
                let row = g * nn + i * n + j;
                for k in 0..n {
                    // (Q M1)_ij = Σ_k Q_ik M1_kj
                    a[(row, i * n + k)] += m1[(k, j)] * s;
                    // (M2 Q)_ij = Σ_k M2_ik Q_kj
                    a[(row, k * n + j)] -= m2[(i, k)] * s;
                }
            }
        }
    }
    a
}

/// Largest relative conjugation error `‖Q·M₁·Q⁻¹ − M₂‖/(1+‖M₂‖)`.
pub fn conjugation_error(q: &CMat, r1: &Rep, r2: &Rep) -> f64 {
    let Some(qi) = q.inverse() else {
        return f64::INFINITY;
    };
    r1.images
        .iter()
        .zip(&r2.images)
        .map(|(m1, m2)| (&(&(q * m1) * &qi) - m2).norm() / (1.0 + m2.norm()))
        .fold(0.0, f64::max)
}

/// Unit Frobenius norm with the largest entry real and positive.
fn normalize_q(mut q: CMat) -> CMat {
    let big = q
        .as_slice()
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or_default();
    if big.norm() > 0.0 {
        let s = big.conj() / (big.norm() * q.norm());
        q = q.scale(s);
    }
    q
}

/// Reciprocal condition number from the singular values.
fn rcond(q: &CMat) -> f64 {
    let sv = matkit::svd(q).singular_values;
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    }
}

/// Seed used by [`find_conjugator`].
pub const CONJUGATOR_SEED: u64 = 0xC0_41_06;

/// Finds an invertible `Q` with `Q·M₁·Q⁻¹ = M₂` for every generator.
pub fn find_conjugator(r1: &Rep, r2: &Rep, tol: f64) -> Option<CMat> {
    find_conjugator_seeded(r1, r2, tol, CONJUGATOR_SEED)
}

/// [`find_conjugator`] with an explicit seed for the random nullspace
/// combinations tried when the intertwiner space has dimension above one.
pub fn find_conjugator_seeded(r1: &Rep, r2: &Rep, tol: f64, seed: u64) -> Option<CMat> {
    if r1.n != r2.n || r1.generators != r2.generators {
        return None;
    }
    if !r1.is_finite() || !r2.is_finite() {
        return None;
    }
    let n = r1.n;
    let d = matkit::svd(&sylvester_system(r1, r2));
    let smax = d.singular_values.first().copied().unwrap_or(0.0);
    let nn = n * n;
    // kernel at a loose cut; the conjugation check below is the authority
    let mut kernel: Vec<Vec<C64>> = (0..nn)
        .filter(|&k| d.singular_values[k] <= 1e-6 * smax.max(1e-300))
        .map(|k| d.v.column(k))
        .collect();
    if kernel.is_empty() {
        kernel.push(d.v.column(nn - 1));
    }
    let accept = |q: CMat| -> Option<(f64, CMat)> {
        let q = normalize_q(q);
        if rcond(&q) < 1e-8 {
            return None;
        }
        let e = conjugation_error(&q, r1, r2);
        (e <= tol).then_some((e, q))
    };
    let as_mat = |v: &[C64]| CMat::from_vec(n, n, v.to_vec());
    if kernel.len() == 1 {
        return accept(as_mat(&kernel[0])).map(|(_, q)| q);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<Vec<C64>> = kernel.clone();
    for _ in 0..32 {
        let mut v = vec![C64::new(0.0, 0.0); nn];
        for b in &kernel {
            let w = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += w * bi;
            }
        }
        candidates.push(v);
    }
    candidates
        .iter()
        .filter_map(|v| accept(as_mat(v)))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, q)| q)
}

/// One equivalence class of a classification.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivClass {
    /// Input indices, ascending; the first is the representative.
    pub members: Vec<usize>,
    pub representative: usize,
    /// For each member, `Q` with `Q·rep·Q⁻¹ = member`.
    pub conjugators: Vec<CMat>,
}

/// Partitions reps into equivalence classes.
///
/// Each rep is compared, in input order, with the representatives of the
/// classes found so far whose fingerprints are close; the lowest-index class
/// admitting a conjugator absorbs it.
pub fn classify(reps: &[Rep], tol: &Tolerances, seed: u64) -> Vec<EquivClass> {
    let fps: Vec<Fingerprint> = reps.par_iter().map(fingerprint).collect();
    let mut classes: Vec<EquivClass> = Vec::new();
    for (i, r) in reps.iter().enumerate() {
        let hit = classes
            .par_iter()
            .enumerate()
            .filter(|(_, cl)| fps[cl.representative].close(&fps[i], tol.fingerprint))
            .filter_map(|(k, cl)| {
                let s = seed ^ ((i as u64) << 32) ^ k as u64;
                find_conjugator_seeded(&reps[cl.representative], r, tol.conjugator, s)
                    .map(|q| (k, q))
            })
            .min_by_key(|(k, _)| *k);
        match hit {
            Some((k, q)) => {
                classes[k].members.push(i);
                classes[k].conjugators.push(q);
            }
            None => classes.push(EquivClass {
                members: vec![i],
                representative: i,
                conjugators: vec![CMat::identity(r.n)],
            }),
        }
    }
    classes
}
