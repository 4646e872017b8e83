use serde_json::{json, Value};
use sklyrep::freealg::ParamEnv;
use sklyrep::reptheory::{find_invariant_line, is_irreducible_burnside, relation_residual};
use sklyrep::sklyanin::{
    central_character, family_with_branch, presentation, sigma_order, Branch, FamilyId, GridSpec,
    SklyaninParams,
};
use sklyrep::{parse_complex, Result, C64};
use wasm_bindgen::prelude::*;

const TOL: f64 = 1e-8;

fn reply(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

/// Row-major `steps × steps` heights of the center surface over `(u2, u3)`.
/// Empty on a bad grid.
#[wasm_bindgen]
pub fn xc_slice_grid(c_re: f64, c_im: f64, u1: f64, min: f64, max: f64, steps: usize) -> Vec<f64> {
    let Ok(grid) = format!("{min}:{max}:{steps}").parse::<GridSpec>() else {
        return Vec::new();
    };
    sklyrep::sklyanin::xc_slice(C64::new(c_re, c_im), u1, &grid)
        .into_iter()
        .map(|(_, _, v)| v)
        .collect()
}

#[wasm_bindgen]
pub fn sigma_orbit(a: &str, b: &str, c: &str, max_order: usize, trials: usize, seed: u32) -> String {
    reply((|| {
        let p = SklyaninParams::relaxed(parse_complex(a)?, parse_complex(b)?, parse_complex(c)?);
        let rep = sigma_order(&p, max_order, trials, seed as u64, 1e-7)?;
        Ok(serde_json::to_value(&rep).expect("report serializes"))
    })())
}

/// `bindings` is `k=v,k=v`, e.g. `c=5,y4=1,z4=2i`.
#[wasm_bindgen]
pub fn verify_family(id: &str, bindings: &str, negated: bool) -> String {
    reply((|| {
        let fid: FamilyId = id.parse()?;
        let mut env = ParamEnv::new();
        for item in bindings.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let Some((k, v)) = item.split_once('=') else {
                return Err(sklyrep::Error::Schema(format!("binding `{item}` is not k=v")));
            };
            env.set(k.trim(), parse_complex(v)?);
        }
        let branch = if negated { Branch::Negated } else { Branch::Principal };
        let rep = family_with_branch(fid, &env, branch)?;
        let pres = presentation(&SklyaninParams::one_one(env.get("c")?)?)?;
        let residual = relation_residual(&pres, &rep)?;
        let irreducible = is_irreducible_burnside(&rep, TOL) && find_invariant_line(&rep, TOL).is_none();
        let center = central_character(&rep, TOL)?;
        let matrices: Vec<_> = rep.images.iter().map(|m| m.to_rows()).collect();
        Ok(json!({
            "family": fid.to_string(),
            "residual": residual,
            "irreducible": irreducible,
            "center": center,
            "matrices": matrices,
        }))
    })())
}
