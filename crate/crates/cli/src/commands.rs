use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sklyrep::freealg::ParamEnv;
use sklyrep::reptheory::{
    classify as classify_reps, find_invariant_line, fingerprint, is_irreducible_burnside, relation_residual,
    Presentation, Rep, RepJson, Tolerances,
};
use sklyrep::skewpoly::{center_plane_csv, point_kind, skew_center_point, skew_presentation};
use sklyrep::sklyanin::{
    central_character, curve_residual, family_with_branch, presentation, sigma_order, xc_slice, xc_slice_csv,
    Branch, CenterChar, FamilyId, GridSpec, SklyaninParams,
};
use sklyrep::solver::{one_dim_solutions, solve_reps, Algebra, JordanKind, SolveTask};
use sklyrep::{Error, Result, C64};

use crate::fmt::{complex, csv_complex, json, pair, rows, sci};
use crate::{Format, Output};

/// Tolerance for both irreducibility tests.
const IRRED_TOL: f64 = 1e-8;
/// Cross-determinant cut for projective equality of orbit points.
const PROJ_TOL: f64 = 1e-8;

pub struct Opts {
    pub seed: u64,
    pub tol: f64,
    pub format: Option<Format>,
}

impl Opts {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn ok(text: String) -> Output {
    Output { text, code: 0 }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

/// `k=v,k=v` with complex values.
pub fn parse_bindings(text: &str) -> Result<ParamEnv> {
    let mut env = ParamEnv::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Schema(format!("binding `{item}` is not k=v")))?;
        env.set(k.trim(), sklyrep::parse_complex(v)?);
    }
    Ok(env)
}

// ---------------------------------------------------------------- verify

pub enum VerifyInput {
    File(PathBuf),
    Family { id: String, set: String, branch: String },
}

enum Kind {
    Sklyanin(SklyaninParams),
    Skew,
}

fn kind_of(rep: &Rep) -> Result<Kind> {
    let gens: Vec<&str> = rep.generators.iter().map(String::as_str).collect();
    match gens.as_slice() {
        ["x", "y", "z"] => {
            let one = C64::new(1.0, 0.0);
            let get = |k: &str| if rep.env.contains(k) { rep.env.get(k) } else { Ok(one) };
            let c = rep.env.get("c")?;
            Ok(Kind::Sklyanin(SklyaninParams::new(get("a")?, get("b")?, c)?))
        }
        ["x", "y"] => Ok(Kind::Skew),
        _ => Err(Error::Schema(format!(
            "generators {gens:?} match neither [x, y, z] nor [x, y]"
        ))),
    }
}

#[derive(Serialize)]
struct FamilyEcho<'a> {
    id: &'a str,
    branch: Option<Branch>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum CenterJson {
    Sklyanin(CenterChar),
    Skew { u1: C64, u2: C64 },
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    algebra: &'a str,
    family: Option<FamilyEcho<'a>>,
    rep: RepJson,
    residual: f64,
    tol: f64,
    irreducible: bool,
    burnside: bool,
    invariant_line: Option<Vec<[f64; 2]>>,
    tests_agree: bool,
    fingerprint: Vec<[f64; 2]>,
    center: Option<CenterJson>,
    center_error: Option<String>,
    status: &'a str,
}

pub fn verify(opts: &Opts, input: VerifyInput, expect_irreducible: bool) -> Result<Output> {
    let (rep, fam) = match &input {
        VerifyInput::File(path) => {
            let text = read(path)?;
            let j: RepJson = serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
            (j.to_rep()?, None)
        }
        VerifyInput::Family { id, set, branch } => {
            let fid: FamilyId = id.parse()?;
            let br: Branch = branch.parse()?;
            let env = parse_bindings(set)?;
            (family_with_branch(fid, &env, br)?, Some((fid, br)))
        }
    };
    let kind = kind_of(&rep)?;
    let pres: Presentation = match &kind {
        Kind::Sklyanin(p) => presentation(p)?,
        Kind::Skew => skew_presentation(),
    };
    let residual = relation_residual(&pres, &rep)?;
    let burnside = is_irreducible_burnside(&rep, IRRED_TOL);
    let line = find_invariant_line(&rep, IRRED_TOL);
    let irreducible = burnside && line.is_none();
    let one = C64::new(1.0, 0.0);
    let (center, center_error) = if residual > opts.tol {
        (None, None)
    } else {
        let got = match &kind {
            Kind::Sklyanin(p) if p.a == one && p.b == one => {
                Some(central_character(&rep, opts.tol).map(CenterJson::Sklyanin))
            }
            Kind::Sklyanin(_) => None,
            Kind::Skew => Some(skew_center_point(&rep, opts.tol).map(|(u1, u2)| CenterJson::Skew { u1, u2 })),
        };
        match got {
            Some(Ok(c)) => (Some(c), None),
            Some(Err(e @ Error::NonScalarCentral(_))) => (None, Some(e.to_string())),
            Some(Err(e)) => return Err(e),
            None => (None, None),
        }
    };
    let pass = residual <= opts.tol && center_error.is_none() && (irreducible || !expect_irreducible);
    let status = if pass { "ok" } else { "fail" };
    let algebra = match kind {
        Kind::Sklyanin(_) => "sklyanin",
        Kind::Skew => "skew",
    };
    let fp = fingerprint(&rep);
    let report = VerifyJson {
        algebra,
        family: fam.map(|(id, br)| FamilyEcho {
            id: id.as_str(),
            branch: id.has_branch().then_some(br),
        }),
        rep: rep.to_json(),
        residual,
        tol: opts.tol,
        irreducible,
        burnside,
        invariant_line: line.as_ref().map(|w| w.vector.iter().copied().map(pair).collect()),
        tests_agree: burnside == line.is_none(),
        fingerprint: fp.values.iter().copied().map(pair).collect(),
        center,
        center_error,
        status,
    };
    let text = match opts.format_or(Format::Json) {
        Format::Json => json(&report),
        Format::Csv => verify_csv(&report),
        Format::Human => verify_human(&report),
    };
    Ok(Output {
        text,
        code: if pass { 0 } else { 1 },
    })
}

fn center_values(c: &CenterJson) -> Vec<(&'static str, C64)> {
    match c {
        CenterJson::Sklyanin(cc) => vec![("u1", cc.u1), ("u2", cc.u2), ("u3", cc.u3), ("g", cc.g)],
        CenterJson::Skew { u1, u2 } => vec![("u1", *u1), ("u2", *u2)],
    }
}

fn verify_csv(r: &VerifyJson) -> String {
    let mut s = String::from("quantity,re,im\n");
    let c = |z: [f64; 2]| C64::new(z[0], z[1]);
    writeln!(s, "residual,{},{}", sci(r.residual), sci(0.0)).unwrap();
    writeln!(s, "irreducible,{},{}", r.irreducible as u8, 0).unwrap();
    for (k, z) in r.fingerprint.iter().enumerate() {
        writeln!(s, "fingerprint_{k},{}", csv_complex([c(*z)])).unwrap();
    }
    if let Some(center) = &r.center {
        for (name, z) in center_values(center) {
            writeln!(s, "{name},{}", csv_complex([z])).unwrap();
        }
        if let CenterJson::Sklyanin(cc) = center {
            writeln!(s, "f_residual,{},{}", sci(cc.f_residual), sci(0.0)).unwrap();
        }
    }
    s
}

fn verify_human(r: &VerifyJson) -> String {
    let mut s = String::new();
    let source = match &r.family {
        Some(f) => match f.branch {
            Some(b) => format!("family {} ({b:?} branch)", f.id),
            None => format!("family {}", f.id),
        },
        None => "rep file".to_string(),
    };
    writeln!(s, "source       {source}").unwrap();
    writeln!(s, "algebra      {}", r.algebra).unwrap();
    writeln!(s, "residual     {} (tol {})", sci(r.residual), sci(r.tol)).unwrap();
    let line = if r.invariant_line.is_some() { "found" } else { "none" };
    writeln!(s, "irreducible  {} (burnside {}, invariant line {line})", r.irreducible, r.burnside).unwrap();
    let fp: Vec<String> = r.fingerprint.iter().map(|z| complex(C64::new(z[0], z[1]))).collect();
    writeln!(s, "fingerprint  {}", fp.join(" ")).unwrap();
    if let Some(center) = &r.center {
        for (name, z) in center_values(center) {
            writeln!(s, "{name:<12} {}", complex(z)).unwrap();
        }
        if let CenterJson::Sklyanin(cc) = center {
            writeln!(s, "f_residual   {}", sci(cc.f_residual)).unwrap();
        }
    }
    if let Some(e) = &r.center_error {
        writeln!(s, "center       {e}").unwrap();
    }
    writeln!(s, "status       {}", r.status).unwrap();
    s
}

// -------------------------------------------------------------- classify

#[derive(Serialize)]
struct ClassJson {
    representative: usize,
    members: Vec<usize>,
    conjugators: Vec<Vec<Vec<[f64; 2]>>>,
}

pub fn classify(opts: &Opts, input: &Path) -> Result<Output> {
    let text = read(input)?;
    let reps: Vec<Rep> = if text.trim().is_empty() {
        Vec::new()
    } else {
        let js: Vec<RepJson> = serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
        js.iter().map(RepJson::to_rep).collect::<Result<_>>()?
    };
    // family parameters may differ; generators and a, b, c may not
    let key = |r: &Rep| {
        let params: Vec<Option<C64>> = ["a", "b", "c"].iter().map(|k| r.env.get(k).ok()).collect();
        (r.generators.clone(), params)
    };
    if let Some(first) = reps.first().map(key) {
        if let Some(k) = reps.iter().position(|r| key(r) != first) {
            return Err(Error::Schema(format!(
                "rep {k} does not share the presentation of rep 0"
            )));
        }
    }
    let tol = Tolerances {
        residual: opts.tol,
        ..Tolerances::default()
    };
    let classes = classify_reps(&reps, &tol, opts.seed);
    let out: Vec<ClassJson> = classes
        .iter()
        .map(|cl| ClassJson {
            representative: cl.representative,
            members: cl.members.clone(),
            conjugators: cl.conjugators.iter().map(rows).collect(),
        })
        .collect();
    let text = match opts.format_or(Format::Json) {
        Format::Json => json(&out),
        Format::Csv => {
            let mut s = String::from("index,class,representative\n");
            let mut by_index = BTreeMap::new();
            for (k, cl) in out.iter().enumerate() {
                for m in &cl.members {
                    by_index.insert(*m, (k, cl.representative));
                }
            }
            for (i, (k, r)) in by_index {
                writeln!(s, "{i},{k},{r}").unwrap();
            }
            s
        }
        Format::Human => {
            let mut s = format!("{} reps, {} classes\n", reps.len(), out.len());
            for (k, cl) in out.iter().enumerate() {
                let ms: Vec<String> = cl.members.iter().map(usize::to_string).collect();
                writeln!(s, "class {k}: representative {}, members {}", cl.representative, ms.join(" ")).unwrap();
            }
            s
        }
    };
    Ok(ok(text))
}

// ----------------------------------------------------------------- sigma

#[derive(Serialize)]
struct SigmaJson {
    a: C64,
    b: C64,
    c: C64,
    relaxed: bool,
    max_order: usize,
    trials: usize,
    seed: u64,
    order: Option<usize>,
    result: String,
    max_curve_residual: f64,
    orbits: Vec<Vec<[C64; 3]>>,
}

pub fn sigma(opts: &Opts, a: C64, b: C64, c: C64, max_order: usize, trials: usize) -> Result<Output> {
    let p = SklyaninParams::relaxed(a, b, c);
    let rep = sigma_order(&p, max_order, trials, opts.seed, PROJ_TOL)?;
    let max_curve_residual = rep
        .orbits
        .iter()
        .flatten()
        .map(|pt| curve_residual(&p, pt))
        .fold(0.0, f64::max);
    let result = match rep.order {
        Some(n) => n.to_string(),
        None => format!("exceeds {max_order}"),
    };
    let report = SigmaJson {
        a,
        b,
        c,
        relaxed: rep.relaxed,
        max_order,
        trials,
        seed: opts.seed,
        order: rep.order,
        result,
        max_curve_residual,
        orbits: rep.orbits.iter().map(|o| o.iter().map(|pt| pt.coords()).collect()).collect(),
    };
    let text = match opts.format_or(Format::Json) {
        Format::Json => json(&report),
        Format::Csv => {
            let mut s = String::from("trial,step,u_re,u_im,v_re,v_im,w_re,w_im\n");
            for (t, orbit) in report.orbits.iter().enumerate() {
                for (k, pt) in orbit.iter().enumerate() {
                    writeln!(s, "{t},{k},{}", csv_complex(*pt)).unwrap();
                }
            }
            s
        }
        Format::Human => {
            let mut s = format!("order        {}\n", report.result);
            writeln!(s, "relaxed      {}", report.relaxed).unwrap();
            writeln!(s, "on curve     max residual {}", sci(report.max_curve_residual)).unwrap();
            for (t, orbit) in report.orbits.iter().enumerate() {
                writeln!(s, "trial {t}").unwrap();
                for (k, pt) in orbit.iter().enumerate() {
                    let cs: Vec<String> = pt.iter().copied().map(complex).collect();
                    writeln!(s, "  sigma^{k:<3} [{}]", cs.join(" : ")).unwrap();
                }
            }
            s
        }
    };
    Ok(ok(text))
}

// ----------------------------------------------------------------- solve

pub fn solve(
    opts: &Opts,
    algebra: Algebra,
    c: C64,
    jordan: JordanKind,
    starts: usize,
    slices: Option<usize>,
) -> Result<Output> {
    let mut task = SolveTask::new(algebra, jordan, c, starts, opts.seed);
    task.slice_count = slices;
    let report = solve_reps(&task)?;
    let text = match opts.format_or(Format::Json) {
        Format::Json => json(&report.to_json_value()),
        Format::Csv => {
            let gens = &report.solutions.first().map(|s| s.rep.generators.clone()).unwrap_or_default();
            let mut s = String::from("index,start,hits,residual,irreducible,matched_family,branch");
            for g in gens {
                for e in ["11", "12", "21", "22"] {
                    write!(s, ",{g}{e}_re,{g}{e}_im").unwrap();
                }
            }
            s.push('\n');
            for (k, sol) in report.solutions.iter().enumerate() {
                let fam = sol.matched.as_ref().map(|m| m.family.as_str()).unwrap_or("");
                let br = sol
                    .matched
                    .as_ref()
                    .and_then(|m| m.branch)
                    .map(|b| format!("{b:?}").to_lowercase())
                    .unwrap_or_default();
                let entries = sol.rep.images.iter().flat_map(|m| m.as_slice().to_vec());
                writeln!(
                    s,
                    "{k},{},{},{},{},{fam},{br},{}",
                    sol.start,
                    sol.hits,
                    sci(sol.residual),
                    sol.irreducible as u8,
                    csv_complex(entries)
                )
                .unwrap();
            }
            s
        }
        Format::Human => {
            let st = report.stats;
            let mut s = format!(
                "{algebra} {jordan} c={} seed={} slices={}\n",
                complex(c),
                opts.seed,
                task.slices()
            );
            writeln!(
                s,
                "starts {} converged {} classes {} irreducible {} matched {}",
                st.starts, st.converged, st.deduped, st.irreducible, st.matched
            )
            .unwrap();
            let mut hits: BTreeMap<&str, usize> = BTreeMap::new();
            for sol in &report.solutions {
                let key = match (&sol.matched, sol.irreducible) {
                    (Some(m), _) => m.family.as_str(),
                    (None, true) => "unmatched irreducible",
                    (None, false) => "reducible",
                };
                *hits.entry(key).or_default() += 1;
            }
            for (k, v) in hits {
                writeln!(s, "  {k:<22} {v}").unwrap();
            }
            s
        }
    };
    Ok(ok(text))
}

// --------------------------------------------------------------- scalars

#[derive(Serialize)]
struct ScalarsJson {
    algebra: Algebra,
    c: [f64; 2],
    seed: u64,
    solutions: Vec<Vec<[f64; 2]>>,
}

pub fn scalars(opts: &Opts, algebra: Algebra, c: C64) -> Result<Output> {
    let sols = one_dim_solutions(algebra, c, opts.seed)?;
    let text = match opts.format_or(Format::Json) {
        Format::Json => json(&ScalarsJson {
            algebra,
            c: pair(c),
            seed: opts.seed,
            solutions: sols.iter().map(|v| v.iter().copied().map(pair).collect()).collect(),
        }),
        Format::Csv => {
            let names = match algebra {
                Algebra::Sklyanin => &["x", "y", "z"][..],
                Algebra::Skew => &["x", "y"][..],
            };
            let cols: Vec<String> = names.iter().map(|g| format!("{g}_re,{g}_im")).collect();
            let mut s = format!("{}\n", cols.join(","));
            for v in &sols {
                writeln!(s, "{}", csv_complex(v.iter().copied())).unwrap();
            }
            s
        }
        Format::Human => {
            let mut s = format!("{} scalar solutions\n", sols.len());
            for v in &sols {
                let cs: Vec<String> = v.iter().copied().map(complex).collect();
                writeln!(s, "  ({})", cs.join(", ")).unwrap();
            }
            s
        }
    };
    Ok(ok(text))
}

// ----------------------------------------------------------------- slices

#[derive(Serialize)]
struct SliceRow {
    u2: f64,
    u3: f64,
    value: f64,
}

pub fn slice(opts: &Opts, c: C64, u1: f64, grid: &GridSpec) -> Result<Output> {
    let text = match opts.format_or(Format::Csv) {
        Format::Json => {
            let rows: Vec<SliceRow> = xc_slice(c, u1, grid)
                .into_iter()
                .map(|(u2, u3, value)| SliceRow { u2, u3, value })
                .collect();
            json(&rows)
        }
        Format::Csv | Format::Human => xc_slice_csv(c, u1, grid),
    };
    Ok(ok(text))
}

#[derive(Serialize)]
struct PlaneRow {
    u1: f64,
    u2: f64,
    kind: &'static str,
}

pub fn skew_plane(opts: &Opts, grid: &GridSpec) -> Result<Output> {
    let text = match opts.format_or(Format::Csv) {
        Format::Json => {
            let vals = grid.values();
            let rows: Vec<PlaneRow> = vals
                .iter()
                .flat_map(|&u1| vals.iter().map(move |&u2| PlaneRow { u1, u2, kind: point_kind(u1, u2) }))
                .collect();
            json(&rows)
        }
        Format::Csv | Format::Human => center_plane_csv(grid),
    };
    Ok(ok(text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bindings() {
        let env = parse_bindings("c=2, z4=0.5-1i").unwrap();
        assert_eq!(env.get("c").unwrap(), C64::new(2.0, 0.0));
        assert_eq!(env.get("z4").unwrap(), C64::new(0.5, -1.0));
        assert!(parse_bindings("c").is_err());
        assert!(parse_bindings("c=x").is_err());
        assert!(parse_bindings("").unwrap().bindings.is_empty());
    }
}
