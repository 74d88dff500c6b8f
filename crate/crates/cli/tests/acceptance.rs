//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::time::Instant;

use galled_cli::golden;
use galled_cli::output::{Format, TableData};
use galled_core::asym::{self, CharSysFamily};
use galled_core::bijections::{
    image, plane_to_saturated_general, plane_trees, saturated_count_checks, tree_to_saturated_simplex, unordered_trees,
};
use galled_core::comb::catalan;
use galled_core::counts::{self, Labeling, TreeClass, TreeClassSpec};
use galled_core::oracle::{self, validate, CanonicalForm, GalledStructure};
use num_bigint::BigInt;
use num_rational::BigRational;

const RHO: f64 = 0.40270;
const GAMMA: f64 = 1.13003;
const CONSTANT_TOL: f64 = 5e-6;
const BETA_G_MAX: usize = 20;

const SIMPLEX_UNLABELED: [(&str, f64); 6] =
    [("r", 0.2344), ("s", 0.4349), ("b", 0.0584), ("phi_t", 1.6716), ("phi_ww", 5.2993), ("delta", 0.3846)];
const SIMPLEX_UNLABELED_TOL: f64 = 5e-4;
const CLOSED_FORM_TOL: f64 = 1e-12;
const SIMPLEX_LABELED_DELTA: f64 = 0.3525;
const SIMPLEX_LABELED_DELTA_TOL: f64 = 5e-4;
const GENERAL_UNLABELED: (f64, f64) = (0.11647, 0.19659);
const GENERAL_UNLABELED_TOL: f64 = 1e-4;
const GENERAL_LABELED_R: f64 = 0.1250;
const GENERAL_LABELED_R_TOL: f64 = 1e-6;
const GENERAL_LABELED_DELTA: f64 = 0.1894;
const GENERAL_LABELED_DELTA_TOL: f64 = 1e-4;
const CHARSYS_TRUNCATION: usize = 25;

const RATIO_N: [usize; 2] = [500, 1000];
const RATIO_TOL: f64 = 0.10;
const CROSS_FAMILY_TOL: f64 = 0.05;

const ORACLE_UNLABELED_N: usize = 7;
const ORACLE_LABELED_N: usize = 5;
const ENGINE_N: usize = 12;
const CLOSED_ORDER: usize = 40;
const GENERAL_IDENTITY_N: usize = 12;
const SIMPLEX_IDENTITY_N: usize = 15;
const MAP_N: usize = 7;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(problems: Vec<String>, ok_detail: String) -> Outcome {
    if problems.is_empty() {
        Outcome { pass: true, detail: ok_detail }
    } else {
        Outcome { pass: false, detail: problems.join("; ") }
    }
}

fn table_reproduction() -> Outcome {
    let mut bad = Vec::new();
    let mut cells = 0;
    for t in golden::tables() {
        let max_n = t.rows.last().map_or(0, |r| r.n);
        let ours = counts::build_table(t.spec, max_n).expect("table builds");
        for row in &t.rows {
            for (g, c) in row.cells.iter().enumerate() {
                if let Some(v) = c {
                    cells += 1;
                    if *v != ours.get(row.n, g) {
                        bad.push(format!("{} n={} g{g}: printed {v}, exact {}", t.name, row.n, ours.get(row.n, g)));
                    }
                }
            }
            cells += 1;
            if row.total != ours.total(row.n) {
                bad.push(format!("{} n={} total: printed {}, exact {}", t.name, row.n, row.total, ours.total(row.n)));
            }
        }
    }
    let su = TreeClassSpec::new(TreeClass::SimplexTimeConsistent, Labeling::Unlabeled);
    for (n, v) in golden::simplex_unlabeled_totals() {
        cells += 1;
        let exact = counts::total(su, n).expect("total");
        if v != exact {
            bad.push(format!("simplex_unlabeled total n={n}: printed {v}, exact {exact}"));
        }
    }
    if !bad.is_empty() {
        bad.insert(0, format!("{} of {cells} printed values differ", bad.len()));
    }
    outcome(bad, format!("{cells} printed values reproduced"))
}

fn engine_agreement() -> Outcome {
    let rep = galled_cli::verify::engines();
    let mut bad = rep.failures.clone();
    for spec in TreeClassSpec::all() {
        for g in 1..=2 {
            for order in [10, 25, CLOSED_ORDER] {
                let c = galled_core::genfunc::closed_small_g(spec, g, order);
                let f = galled_core::genfunc::fixed_g_series(spec, g, order);
                if c.is_err() || c != f {
                    bad.push(format!("{spec} g={g} N={order}: closed form differs"));
                }
            }
        }
    }
    outcome(bad, format!("6 classes, n <= {ENGINE_N}, closed forms to N = {CLOSED_ORDER}"))
}

fn oracle_ground_truth() -> Outcome {
    let mut bad = Vec::new();
    let mut structures = 0;
    for class in TreeClass::ALL {
        for n in 1..=ORACLE_UNLABELED_N {
            let all = oracle::generate_all(class, n).expect("within oracle limit");
            structures += all.len();
            for s in all.values() {
                if !validate(s, class).is_valid() {
                    bad.push(format!("{class} {}: fails validation", s.to_text()));
                }
            }
            let mut labelings = vec![(Labeling::Unlabeled, oracle::count_by_galls(class, n).expect("counts"))];
            if n <= ORACLE_LABELED_N {
                labelings.push((Labeling::LeafLabeled, oracle::labeled_count(class, n).expect("counts")));
            }
            for (labeling, by_g) in labelings {
                let spec = TreeClassSpec::new(class, labeling);
                for g in 0..=spec.max_galls(n) {
                    let o = by_g.get(&g).cloned().unwrap_or_default();
                    let r = counts::count(spec, n, g).expect("count");
                    if o != r {
                        bad.push(format!("{spec} n={n} g={g}: enumerated {o}, recursion {r}"));
                    }
                }
            }
        }
    }
    outcome(bad, format!("{structures} structures enumerated and validated"))
}

fn slice(class: TreeClass, n: usize, g: usize) -> BTreeSet<CanonicalForm> {
    oracle::generate_all(class, n)
        .expect("within oracle limit")
        .into_iter()
        .filter(|(_, s)| s.galls() == g)
        .map(|(k, _)| k)
        .collect()
}

fn bijective_onto(imgs: &[GalledStructure], target: &BTreeSet<CanonicalForm>) -> bool {
    let got = image(imgs.iter().cloned());
    got.len() == imgs.len() && got == *target
}

fn bijection_identities() -> Outcome {
    let mut bad = Vec::new();
    for c in saturated_count_checks(SIMPLEX_IDENTITY_N).expect("checks run") {
        let in_range = match c.class {
            TreeClass::General => c.n <= GENERAL_IDENTITY_N,
            _ => true,
        };
        if in_range && !c.holds() {
            bad.push(format!("{} {} n={}: expected {}, got {}", c.class, c.labeling, c.n, c.expected, c.actual));
        }
    }
    for n in 1..=MAP_N {
        let imgs: Vec<_> = plane_trees(n).iter().map(plane_to_saturated_general).collect();
        if !bijective_onto(&imgs, &slice(TreeClass::General, n, n - 1)) {
            bad.push(format!("general map not bijective at n={n}"));
        }
        if n % 2 == 1 {
            let m = (n + 1) / 2;
            let imgs: Vec<_> = unordered_trees(m).iter().map(|t| tree_to_saturated_simplex(t).expect("gall-free")).collect();
            if !bijective_onto(&imgs, &slice(TreeClass::SimplexTimeConsistent, n, m - 1)) {
                bad.push(format!("simplex map not bijective at n={n}"));
            }
        }
    }
    outcome(bad, format!("identities to n = {SIMPLEX_IDENTITY_N}, maps bijective for n <= {MAP_N}"))
}

fn singular_constants() -> Outcome {
    let c = asym::singular_constants();
    let mut bad = Vec::new();
    if (c.rho - RHO).abs() > CONSTANT_TOL {
        bad.push(format!("rho = {:.8}", c.rho));
    }
    if (c.gamma - GAMMA).abs() > CONSTANT_TOL {
        bad.push(format!("gamma = {:.8}", c.gamma));
    }
    for g in 1..=BETA_G_MAX {
        let lhs = asym::beta(g).expect("g >= 1") * BigRational::from_integer(BigInt::from(2).pow(2 * g as u32 - 1));
        if lhs != BigRational::from_integer(BigInt::from(catalan(2 * g - 1))) {
            bad.push(format!("beta identity fails at g={g}"));
        }
    }
    outcome(bad, format!("rho = {:.8}, gamma = {:.8}, beta identity for g <= {BETA_G_MAX}", c.rho, c.gamma))
}

fn near(bad: &mut Vec<String>, name: &str, got: f64, want: f64, tol: f64) {
    if !((got - want).abs() <= tol) {
        bad.push(format!("{name} = {got:.6} vs {want} (|diff| {:.2e} > {tol:.0e})", (got - want).abs()));
    }
}

fn characteristic_systems() -> Outcome {
    let mut bad = Vec::new();
    let su = asym::solve_charsys(CharSysFamily::SimplexUnlabeled, CHARSYS_TRUNCATION).expect("solves");
    let got = [su.r, su.s, su.b.unwrap_or(f64::NAN), su.phi_t, su.phi_ww, su.delta];
    for ((name, want), v) in SIMPLEX_UNLABELED.iter().zip(got) {
        near(&mut bad, &format!("simplex-unlabeled {name}"), v, *want, SIMPLEX_UNLABELED_TOL);
    }

    let sl = asym::solve_charsys(CharSysFamily::SimplexLabeled, CHARSYS_TRUNCATION).expect("solves");
    let sqrt3 = 3f64.sqrt();
    near(&mut bad, "simplex-labeled tau", sl.r, (3.0 + sqrt3) / 18.0, CLOSED_FORM_TOL);
    near(&mut bad, "simplex-labeled omega", sl.s, (3.0 - sqrt3) / 3.0, CLOSED_FORM_TOL);
    near(&mut bad, "simplex-labeled delta", sl.delta, SIMPLEX_LABELED_DELTA, SIMPLEX_LABELED_DELTA_TOL);

    let gu = asym::solve_charsys(CharSysFamily::GeneralUnlabeled, CHARSYS_TRUNCATION).expect("solves");
    near(&mut bad, "general-unlabeled r", gu.r, GENERAL_UNLABELED.0, GENERAL_UNLABELED_TOL);
    near(&mut bad, "general-unlabeled delta", gu.delta, GENERAL_UNLABELED.1, GENERAL_UNLABELED_TOL);

    let gl = asym::solve_charsys(CharSysFamily::GeneralLabeled, CHARSYS_TRUNCATION).expect("solves");
    near(&mut bad, "general-labeled r", gl.r, GENERAL_LABELED_R, GENERAL_LABELED_R_TOL);
    near(&mut bad, "general-labeled delta", gl.delta, GENERAL_LABELED_DELTA, GENERAL_LABELED_DELTA_TOL);

    outcome(bad, "all families within tolerance".into())
}

fn ratio_convergence() -> Outcome {
    let c = asym::singular_constants();
    let mut bad = Vec::new();
    let mut summary = Vec::new();
    let mut unlabeled_exact = std::collections::HashMap::new();
    for class in [TreeClass::General, TreeClass::SimplexTimeConsistent] {
        for labeling in Labeling::ALL {
            let spec = TreeClassSpec::new(class, labeling);
            for g in 1..=2 {
                let est = asym::estimate(spec, g, &c).expect("estimate");
                let exact = asym::exact_counts(spec, g, &RATIO_N).expect("series");
                let r: Vec<f64> = RATIO_N.iter().zip(&exact).map(|(&n, e)| est.ratio(n, e)).collect();
                let (r500, r1000) = (r[0], r[1]);
                summary.push(format!("{spec} g={g}: {r500:.4} -> {r1000:.4}"));
                if (r1000 - 1.0).abs() > RATIO_TOL {
                    bad.push(format!("{spec} g={g}: ratio {r1000:.4} at n=1000 outside 1 ± {RATIO_TOL}"));
                }
                if (r1000 - 1.0).abs() >= (r500 - 1.0).abs() {
                    bad.push(format!("{spec} g={g}: no improvement from n=500 ({r500:.4}) to n=1000 ({r1000:.4})"));
                }
                if labeling == Labeling::Unlabeled {
                    unlabeled_exact.insert((class, g), exact[1].clone());
                }
            }
        }
    }
    for g in 1..=2 {
        let s = asym::ln_bigint(&unlabeled_exact[&(TreeClass::SimplexTimeConsistent, g)]);
        let e = asym::ln_bigint(&unlabeled_exact[&(TreeClass::General, g)]);
        let q = (s - e).exp();
        let target = c.rho.powi(g as i32);
        summary.push(format!("simplex/general g={g}: {q:.5} vs rho^g {target:.5}"));
        if (q / target - 1.0).abs() > CROSS_FAMILY_TOL {
            bad.push(format!("simplex/general g={g} at n=1000: {q:.5} is {:.1}% from rho^g", 100.0 * (q / target - 1.0).abs()));
        }
    }
    outcome(bad, summary.join(", "))
}

fn call(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = galled_cli::run(std::iter::once("galled").chain(args.iter().copied()), &mut out, &mut err);
    (code, out)
}

fn determinism_and_interface() -> Outcome {
    let mut bad = Vec::new();
    let (code, first) = call(&["verify", "--scope", "all"]);
    if code != 0 {
        bad.push(format!("verify --scope all exited {code}: {}", String::from_utf8_lossy(&first)));
    }
    if call(&["verify", "--scope", "all"]).1 != first {
        bad.push("verify output differs between runs".into());
    }
    let runs: [&[&str]; 4] = [
        &["table", "--class", "general", "--labeling", "labeled", "--max-n", "12", "--format", "json"],
        &["series", "--class", "simplex-tc", "--labeling", "labeled", "-N", "30"],
        &["asym", "charsys", "--family", "general-unlabeled"],
        &["asym", "ratio", "-g", "1", "-n", "200", "--points", "50,100"],
    ];
    for args in runs {
        let a = call(args);
        if a.0 != 0 || a != call(args) {
            bad.push(format!("`{}` is not deterministic", args.join(" ")));
        }
    }
    let mut tables = 0;
    for spec in TreeClassSpec::all() {
        let t = galled_cli::table_data(spec, ENGINE_N).expect("table");
        for f in [Format::Csv, Format::Tsv, Format::Json] {
            tables += 1;
            let text = t.render(f, false).expect("renders");
            let back = match f {
                Format::Json => TableData::parse_json(&text),
                _ => TableData::parse_delimited(&text, f, &t.class, &t.labeling),
            }
            .expect("parses");
            if back != t || back.render(f, false).expect("renders") != text {
                bad.push(format!("{spec} {f:?} round-trip is not the identity"));
            }
        }
    }
    outcome(bad, format!("verify exits 0, 5 commands byte-identical, {tables} round-trips exact"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("table reproduction", table_reproduction),
        ("triple-engine agreement", engine_agreement),
        ("oracle ground truth", oracle_ground_truth),
        ("bijection identities", bijection_identities),
        ("singular constants", singular_constants),
        ("characteristic systems", characteristic_systems),
        ("asymptotic ratio convergence", ratio_convergence),
        ("determinism and interface", determinism_and_interface),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let secs = start.elapsed().as_secs_f64();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {} {name} ({secs:.1}s): {}", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
