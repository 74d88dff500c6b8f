//! Leading-order asymptotics.
//!
//! Fixed-gall sequences grow like `C·n^{2g−3/2}·ρ^{−n}` (unlabeled) or
//! `C·n^{2g−3/2}·2^n·n!` (labeled). Totals over all gall numbers fall under the
//! smooth implicit-function schema and are handled by solving the characteristic
//! system `s = φ(r, s)`, `1 = φ_w(r, s)` of each class.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::comb::{catalan, double_factorial_odd, factorial, multinomial, weighted_partitions};
use crate::counts::{Labeling, TreeClass, TreeClassSpec};
use crate::error::GalledError;
use crate::genfunc::{arbitrary_galls_series, closed_small_g, counts_of, fixed_g_series, tree_series};
use crate::series::TruncatedSeries;

/// Radius of convergence of the unlabeled binary-tree series and the constant in
/// `U(t) ≈ 1 − γ·(1 − t/ρ)^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularConstants {
    pub rho: f64,
    pub gamma: f64,
}

/// `ρ` by bisection on `r + ½ + ½·U_N(r²) − 1` over `(0, ½)`; `γ = √(2ρ·φ_t)`.
pub fn solve_rho_gamma(truncation: usize) -> Result<SingularConstants, GalledError> {
    if truncation < 40 {
        return Err(GalledError::InvalidInput(format!("truncation {truncation} < 40")));
    }
    let u = tree_series(Labeling::Unlabeled, truncation);
    let f = |r: f64| r - 0.5 + 0.5 * u.eval_f64(r * r);
    let rho = bisect(f, 0.0, 0.5, 1e-15)?;
    let du = derivative_at(&u, rho * rho, DerivativeMode::ExactSeriesDerivative);
    let phi_t = 1.0 + rho * du;
    Ok(SingularConstants { rho, gamma: (2.0 * rho * phi_t).sqrt() })
}

/// The constants at the default truncation.
pub fn singular_constants() -> SingularConstants {
    solve_rho_gamma(60).expect("bracket holds at N = 60")
}

/// `β_1, …, β_g` from `β_g = ½Σ β_ℓβ_{g−ℓ} + ½Σ_k multinom(ℓ; k)·(ℓ+1)·Π β^k`,
/// the second sum over multiplicity vectors `k` of weight `g − 1` with `ℓ = Σk`.
pub fn beta_ladder(g: usize) -> Vec<BigRational> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut b = vec![BigRational::zero(), half.clone()];
    for m in 2..=g {
        let mut conv = BigRational::zero();
        for l in 1..m {
            conv += &b[l] * &b[m - l];
        }
        let mut part_sum = BigRational::zero();
        for p in weighted_partitions(m - 1) {
            let len = p.length();
            let coef = multinomial(len, &p.multiplicities()).expect("multiplicities sum to length");
            let mut term = BigRational::from_integer(BigInt::from(coef) * BigInt::from(len + 1));
            for (idx, k) in p.iter() {
                for _ in 0..k {
                    term *= &b[idx];
                }
            }
            part_sum += term;
        }
        b.push((conv + part_sum) * &half);
    }
    b.truncate(g + 1);
    b
}

/// `β_g` for `g ≥ 1`.
pub fn beta(g: usize) -> Result<BigRational, GalledError> {
    if g == 0 {
        return Err(GalledError::InvalidInput("beta needs g >= 1".into()));
    }
    Ok(beta_ladder(g).swap_remove(g))
}

/// `(4g−3)!!/(2g)!`, the closed form of `β_g`.
pub fn beta_closed(g: usize) -> BigRational {
    BigRational::new(double_factorial_odd(2 * g - 1).into(), factorial(2 * g).into())
}

/// `C_{2g−1} / 2^{2g−1}`, the Catalan form of `β_g`.
pub fn beta_catalan(g: usize) -> BigRational {
    BigRational::new(catalan(2 * g - 1).into(), BigInt::one() << (2 * g - 1))
}

/// `log_constant + poly_exponent·ln n + n·ln exp_base (+ ln n!)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEstimate {
    pub log_constant: f64,
    pub poly_exponent: f64,
    pub exp_base: f64,
    pub includes_factorial: bool,
}

impl AsymptoticEstimate {
    pub fn log_value(&self, n: usize) -> f64 {
        let nf = n as f64;
        let mut v = self.log_constant + self.poly_exponent * nf.ln() + nf * self.exp_base.ln();
        if self.includes_factorial {
            v += ln_factorial(n);
        }
        v
    }

    /// `exact / estimate` for a count at `n`.
    pub fn ratio(&self, n: usize, exact: &BigInt) -> f64 {
        (ln_bigint(exact) - self.log_value(n)).exp()
    }
}

/// Estimate for `g ≥ 1` galls. Time-consistent trees share the general formula.
pub fn estimate(spec: TreeClassSpec, g: usize, constants: &SingularConstants) -> Result<AsymptoticEstimate, GalledError> {
    if g == 0 {
        return Err(GalledError::InvalidInput("asymptotic estimate needs g >= 1".into()));
    }
    let gf = g as f64;
    // 2^{2g−1} / ((2g)!·√π)
    let mut c = (2.0 * gf - 1.0) * std::f64::consts::LN_2 - ln_factorial(2 * g) - 0.5 * std::f64::consts::PI.ln();
    let simplex = spec.class == TreeClass::SimplexTimeConsistent;
    let est = match spec.labeling {
        Labeling::Unlabeled => {
            c -= (4.0 * gf - 1.0) * constants.gamma.ln();
            if simplex {
                c += gf * constants.rho.ln();
            }
            AsymptoticEstimate {
                log_constant: c,
                poly_exponent: 2.0 * gf - 1.5,
                exp_base: 1.0 / constants.rho,
                includes_factorial: false,
            }
        }
        Labeling::LeafLabeled => {
            if simplex {
                c -= gf * std::f64::consts::LN_2;
            }
            AsymptoticEstimate {
                log_constant: c,
                poly_exponent: 2.0 * gf - 1.5,
                exp_base: 2.0,
                includes_factorial: true,
            }
        }
    };
    Ok(est)
}

/// Exact `g`-gall counts at each `n` in `ns`, from the series engine.
pub fn exact_counts(spec: TreeClassSpec, g: usize, ns: &[usize]) -> Result<Vec<BigInt>, GalledError> {
    let order = ns.iter().copied().max().unwrap_or(0);
    let s = if (1..=2).contains(&g) { closed_small_g(spec, g, order)? } else { fixed_g_series(spec, g, order)? };
    let all = counts_of(spec.labeling, &s)?;
    Ok(ns.iter().map(|&n| all[n].clone()).collect())
}

/// `exact(n) / estimate(n)` for each `n` in `ns`.
pub fn ratio_curve(
    spec: TreeClassSpec,
    g: usize,
    ns: &[usize],
    constants: &SingularConstants,
) -> Result<Vec<f64>, GalledError> {
    let est = estimate(spec, g, constants)?;
    let exact = exact_counts(spec, g, ns)?;
    Ok(ns.iter().zip(&exact).map(|(&n, e)| est.ratio(n, e)).collect())
}

/// `ln [t^n] (4g−3)!!/(2g)! · (1 − 2t)^{−(2g−½)}`: the coefficient predicted by the
/// singular expansion of the labeled `g`-gall series.
pub fn labeled_singular_coeff_ln(g: usize, n: usize) -> f64 {
    let alpha = 2.0 * g as f64 - 0.5;
    let mut v = ln_bigrational(&beta_closed(g)) + n as f64 * std::f64::consts::LN_2;
    // binom(n + α − 1, n) = Π_{j<n} (α + j)/(j + 1)
    for j in 0..n {
        v += ((alpha + j as f64) / (j as f64 + 1.0)).ln();
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivativeMode {
    ExactSeriesDerivative,
    /// Backward difference with step 0.001.
    BackwardDifference,
}

pub const BACKWARD_DIFFERENCE_STEP: f64 = 0.001;

/// Derivative of a truncated series at a real point.
pub fn derivative_at(series: &TruncatedSeries, point: f64, mode: DerivativeMode) -> f64 {
    match mode {
        DerivativeMode::ExactSeriesDerivative => series.derivative().eval_f64(point),
        DerivativeMode::BackwardDifference => {
            let h = BACKWARD_DIFFERENCE_STEP;
            (series.eval_f64(point) - series.eval_f64(point - h)) / h
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharSysFamily {
    GeneralUnlabeled,
    GeneralLabeled,
    TimeConsistentUnlabeled,
    TimeConsistentLabeled,
    SimplexUnlabeled,
    SimplexLabeled,
}

impl CharSysFamily {
    pub const ALL: [CharSysFamily; 6] = [
        CharSysFamily::GeneralUnlabeled,
        CharSysFamily::GeneralLabeled,
        CharSysFamily::TimeConsistentUnlabeled,
        CharSysFamily::TimeConsistentLabeled,
        CharSysFamily::SimplexUnlabeled,
        CharSysFamily::SimplexLabeled,
    ];

    pub fn spec(self) -> TreeClassSpec {
        use CharSysFamily::*;
        let (class, labeling) = match self {
            GeneralUnlabeled => (TreeClass::General, Labeling::Unlabeled),
            GeneralLabeled => (TreeClass::General, Labeling::LeafLabeled),
            TimeConsistentUnlabeled => (TreeClass::TimeConsistent, Labeling::Unlabeled),
            TimeConsistentLabeled => (TreeClass::TimeConsistent, Labeling::LeafLabeled),
            SimplexUnlabeled => (TreeClass::SimplexTimeConsistent, Labeling::Unlabeled),
            SimplexLabeled => (TreeClass::SimplexTimeConsistent, Labeling::LeafLabeled),
        };
        TreeClassSpec::new(class, labeling)
    }

    pub fn from_spec(spec: TreeClassSpec) -> Self {
        *Self::ALL.iter().find(|f| f.spec() == spec).expect("every spec has a family")
    }

    pub fn name(self) -> &'static str {
        use CharSysFamily::*;
        match self {
            GeneralUnlabeled => "general-unlabeled",
            GeneralLabeled => "general-labeled",
            TimeConsistentUnlabeled => "time-consistent-unlabeled",
            TimeConsistentLabeled => "time-consistent-labeled",
            SimplexUnlabeled => "simplex-unlabeled",
            SimplexLabeled => "simplex-labeled",
        }
    }

    fn unlabeled(self) -> bool {
        self.spec().labeling == Labeling::Unlabeled
    }
}

impl std::str::FromStr for CharSysFamily {
    type Err = GalledError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        let key = key.replace("simplex-tc", "simplex").replace("tc-", "time-consistent-");
        Self::ALL
            .iter()
            .copied()
            .find(|f| f.name() == key)
            .ok_or_else(|| GalledError::InvalidInput(format!("unknown family '{s}'")))
    }
}

/// A point `(r, s)` of the characteristic system with the derived constant `δ`,
/// where the total count behaves like `δ/(2√π)·n^{−3/2}·r^{−n}` (times `n!` if labeled).
#[derive(Debug, Clone, PartialEq)]
pub struct CharSysSolution {
    pub family: CharSysFamily,
    pub r: f64,
    pub s: f64,
    /// `A(r²)` from the truncated total series; unlabeled families only.
    pub b: Option<f64>,
    pub a_prime: Option<f64>,
    pub phi_t: f64,
    pub phi_ww: f64,
    pub delta: f64,
    pub truncation_n: usize,
}

impl CharSysSolution {
    /// `(s − φ(r, s), 1 − φ_w(r, s))`.
    pub fn residuals(&self) -> (f64, f64) {
        let b = self.b.unwrap_or(0.0);
        (self.s - phi(self.family, self.r, self.s, b), 1.0 - phi_w(self.family, self.r, self.s, b))
    }
}

fn phi(family: CharSysFamily, t: f64, w: f64, b: f64) -> f64 {
    use CharSysFamily::*;
    let q = w / (1.0 - w);
    let bb = b / (1.0 - b);
    let mut v = t + 0.5 * w * w + 0.5 * b;
    match family {
        SimplexUnlabeled | SimplexLabeled => v += 0.5 * t * (q * q + bb),
        _ => v += 0.5 * w * (q * q + bb),
    }
    if matches!(family, GeneralUnlabeled | GeneralLabeled) {
        v += w * w / (1.0 - w);
    }
    v
}

fn phi_w(family: CharSysFamily, t: f64, w: f64, b: f64) -> f64 {
    use CharSysFamily::*;
    let d = 1.0 - w;
    match family {
        SimplexUnlabeled | SimplexLabeled => w + t * w / d.powi(3),
        _ => {
            let mut v = w + 0.5 * w * w * (3.0 - w) / d.powi(3) + 0.5 * b / (1.0 - b);
            if matches!(family, GeneralUnlabeled | GeneralLabeled) {
                v += 1.0 / (d * d) - 1.0;
            }
            v
        }
    }
}

fn phi_ww(family: CharSysFamily, t: f64, w: f64) -> f64 {
    use CharSysFamily::*;
    let d = 1.0 - w;
    match family {
        SimplexUnlabeled | SimplexLabeled => 1.0 + t * (1.0 + 2.0 * w) / d.powi(4),
        TimeConsistentUnlabeled | TimeConsistentLabeled => 1.0 + 3.0 * w / d.powi(4),
        GeneralUnlabeled | GeneralLabeled => 1.0 + 3.0 * w / d.powi(4) + 2.0 / d.powi(3),
    }
}

/// `φ_t` given `b = A(t²)` and `a' = A'(t²)` (both zero when labeled).
fn phi_t(family: CharSysFamily, t: f64, w: f64, b: f64, a_prime: f64) -> f64 {
    use CharSysFamily::*;
    let d = 1.0 - b;
    match family {
        SimplexUnlabeled | SimplexLabeled => {
            let q = w / (1.0 - w);
            1.0 + t * a_prime + 0.5 * q * q + 0.5 * b / d + t * t * a_prime / (d * d)
        }
        _ => 1.0 + t * a_prime * (1.0 + w / (d * d)),
    }
}

/// Solve with `A'(r²)` taken as the exact series derivative.
pub fn solve_charsys(family: CharSysFamily, truncation: usize) -> Result<CharSysSolution, GalledError> {
    solve_charsys_with(family, truncation, DerivativeMode::ExactSeriesDerivative)
}

/// Solve the characteristic system. For unlabeled families the unknown
/// `b = Σ_{n≤N} A_n r^{2n}` is iterated to a fixed point around the `(r, s)` solve.
pub fn solve_charsys_with(
    family: CharSysFamily,
    truncation: usize,
    mode: DerivativeMode,
) -> Result<CharSysSolution, GalledError> {
    let unlabeled = family.unlabeled();
    if unlabeled && truncation < 25 {
        return Err(GalledError::InvalidInput(format!("truncation {truncation} < 25")));
    }
    let a = if unlabeled { Some(arbitrary_galls_series(family.spec(), truncation)?) } else { None };
    let mut b = 0.0;
    let mut point = solve_given_b(family, b)?;
    if let Some(a) = &a {
        let mut converged = false;
        for _ in 0..200 {
            let next = a.eval_f64(point.0 * point.0);
            if !(0.0..1.0).contains(&next) {
                return Err(GalledError::NoRoot(format!("A(r²) = {next} left [0, 1)")));
            }
            let step = (next - b).abs();
            b = next;
            point = solve_given_b(family, b)?;
            if step < 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(GalledError::Divergence { index: truncation });
        }
    }
    let (r, s) = point;
    let a_prime = a.as_ref().map(|a| derivative_at(a, r * r, mode));
    let pt = phi_t(family, r, s, b, a_prime.unwrap_or(0.0));
    let pww = phi_ww(family, r, s);
    Ok(CharSysSolution {
        family,
        r,
        s,
        b: a.as_ref().map(|_| b),
        a_prime,
        phi_t: pt,
        phi_ww: pww,
        delta: (2.0 * r * pt / pww).sqrt(),
        truncation_n: truncation,
    })
}

/// `(r, s)` for a fixed `b`; among valid roots with `s ∈ (0, 1)` the one with least `r`.
fn solve_given_b(family: CharSysFamily, b: f64) -> Result<(f64, f64), GalledError> {
    use CharSysFamily::*;
    match family {
        SimplexUnlabeled | SimplexLabeled => {
            // 1 = φ_w gives r = (1 − s)⁴/s; then s = φ(r, s) is one equation in s.
            let r_of = |s: f64| (1.0 - s).powi(4) / s;
            let f = |s: f64| phi(family, r_of(s), s, b) - s;
            let roots = all_roots(f, 1e-6, 1.0 - 1e-6, 4000)?;
            roots
                .into_iter()
                .map(|s| (r_of(s), s))
                .filter(|&(r, _)| r > 0.0 && r < 1.0)
                .min_by(|x, y| x.0.total_cmp(&y.0))
                .ok_or_else(|| GalledError::NoRoot(format!("{}: no r in (0, 1)", family.name())))
        }
        _ => {
            // φ_w does not involve t: solve for s, then read r off s = φ(r, s).
            let s = bisect(|w| phi_w(family, 0.0, w, b) - 1.0, 0.0, 1.0 - 1e-9, 1e-16)?;
            let r = s - phi(family, 0.0, s, b);
            if r <= 0.0 || r >= 1.0 {
                return Err(GalledError::NoRoot(format!("{}: r = {r}", family.name())));
            }
            Ok((r, s))
        }
    }
}

/// `ω = (3 − √3)/3` and `τ = (3 + √3)/18` for labeled simplex trees.
pub fn simplex_labeled_closed_form() -> (f64, f64) {
    let r3 = 3f64.sqrt();
    ((3.0 - r3) / 3.0, (3.0 + r3) / 18.0)
}

/// `(9 − √3)·√(3(9 + √3))/117`.
pub fn simplex_labeled_delta_closed_form() -> f64 {
    let r3 = 3f64.sqrt();
    (9.0 - r3) * (3.0 * (9.0 + r3)).sqrt() / 117.0
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64, GalledError> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(GalledError::NoRoot(format!("f({lo}) = {flo}, f({hi}) = {fhi}")));
    }
    let lo_neg = flo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid == lo || mid == hi {
            break;
        }
        if (f(mid) < 0.0) == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Every sign change of `f` on a uniform grid, refined by bisection.
fn all_roots<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, samples: usize) -> Result<Vec<f64>, GalledError> {
    let step = (hi - lo) / samples as f64;
    let mut roots = Vec::new();
    let mut prev = (lo, f(lo));
    for i in 1..=samples {
        let x = lo + step * i as f64;
        let fx = f(x);
        if prev.1.is_finite() && fx.is_finite() && prev.1.signum() != fx.signum() {
            roots.push(bisect(&f, prev.0, x, 1e-16)?);
        }
        prev = (x, fx);
    }
    if roots.is_empty() {
        return Err(GalledError::NoRoot(format!("no sign change on [{lo}, {hi}]")));
    }
    Ok(roots)
}

/// `ln n!`, summed exactly for small `n`, Stirling series beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 256 {
        return (2..=n).map(|k| (k as f64).ln()).sum();
    }
    let x = n as f64;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
}

/// Natural log of a positive big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a big integer; `NaN` unless positive.
pub fn ln_bigint(x: &BigInt) -> f64 {
    match x.sign() {
        Sign::Plus => ln_biguint(x.magnitude()),
        _ => f64::NAN,
    }
}

pub fn ln_bigrational(x: &BigRational) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}
