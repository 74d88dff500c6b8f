//! Browser bindings: count tables, ratio curves and characteristic-system constants.

use std::fmt::Write as _;

use galled_core::asym::{self, CharSysFamily};
use galled_core::counts::{self, Labeling, TreeClass, TreeClassSpec};
use wasm_bindgen::prelude::*;

/// Keeps the page responsive; the recursion is quartic in `n`.
pub const MAX_TABLE_N: usize = 30;
pub const MAX_RATIO_N: usize = 1000;

fn spec(class: &str, labeling: &str) -> Result<TreeClassSpec, String> {
    let class: TreeClass = class.parse().map_err(|e| format!("{e}"))?;
    let labeling: Labeling = labeling.parse().map_err(|e| format!("{e}"))?;
    Ok(TreeClassSpec::new(class, labeling))
}

/// CSV `n,g0,…,total` for `1 ≤ n ≤ max_n`.
pub fn table_csv(class: &str, labeling: &str, max_n: usize) -> Result<String, String> {
    if !(1..=MAX_TABLE_N).contains(&max_n) {
        return Err(format!("max n must be between 1 and {MAX_TABLE_N}"));
    }
    let t = counts::build_table(spec(class, labeling)?, max_n).map_err(|e| e.to_string())?;
    let mut s = String::from("n");
    for g in 0..t.width() {
        write!(s, ",g{g}").ok();
    }
    s.push_str(",total\n");
    for n in 1..=max_n {
        write!(s, "{n}").ok();
        for g in 0..t.width() {
            match t.row(n).get(g) {
                Some(v) => write!(s, ",{v}").ok(),
                None => write!(s, ",").ok(),
            };
        }
        writeln!(s, ",{}", t.total(n)).ok();
    }
    Ok(s)
}

/// JSON `[[n, ratio], …]` of exact/estimate at `step, 2·step, …, n_max`.
pub fn ratio_json(class: &str, labeling: &str, g: usize, n_max: usize, step: usize) -> Result<String, String> {
    if step == 0 || n_max < step.max(2) || n_max > MAX_RATIO_N {
        return Err(format!("need 2 ≤ step ≤ n max ≤ {MAX_RATIO_N}"));
    }
    let sp = spec(class, labeling)?;
    let c = asym::singular_constants();
    let est = asym::estimate(sp, g, &c).map_err(|e| e.to_string())?;
    let ns: Vec<usize> = (step.max(2)..=n_max).step_by(step).collect();
    let exact = asym::exact_counts(sp, g, &ns).map_err(|e| e.to_string())?;
    let pts: Vec<String> = ns.iter().zip(&exact).map(|(&n, e)| format!("[{n},{:.8}]", est.ratio(n, e))).collect();
    Ok(format!("[{}]", pts.join(",")))
}

/// `name = value` lines for one family's characteristic system.
pub fn charsys_text(family: &str, truncation: usize) -> Result<String, String> {
    let f: CharSysFamily = family.parse().map_err(|e| format!("{e}"))?;
    let sol = asym::solve_charsys(f, truncation).map_err(|e| e.to_string())?;
    let mut s = String::new();
    for (k, v) in [("r", sol.r), ("s", sol.s), ("phi_t", sol.phi_t), ("phi_ww", sol.phi_ww), ("delta", sol.delta)] {
        writeln!(s, "{k} = {v:.10}").ok();
    }
    if let Some(b) = sol.b {
        writeln!(s, "b = {b:.10}").ok();
    }
    Ok(s)
}

#[wasm_bindgen]
pub fn count_table(class: &str, labeling: &str, max_n: usize) -> Result<String, JsError> {
    table_csv(class, labeling, max_n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ratio_curve(class: &str, labeling: &str, g: usize, n_max: usize, step: usize) -> Result<String, JsError> {
    ratio_json(class, labeling, g, n_max, step).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn charsys_constants(family: &str, truncation: usize) -> Result<String, JsError> {
    charsys_text(family, truncation).map_err(|e| JsError::new(&e))
}
