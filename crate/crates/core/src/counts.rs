//! Exact counting recursions for galled trees by leaves and galls.
//!
//! A rooted galled tree is a leaf, an unordered cherry of two smaller trees, or a
//! root gall: a top node, two ordered sides of pendant subtrees and a reticulation
//! with its own subtree. Writing `S_k(n, g)` for the number of ordered `k`-tuples of
//! trees with `n` leaves and `g` galls in total, every count below is a short
//! expression in the `S_k` of strictly smaller leaf counts. The `S_k` are kept as
//! convolution powers and grown row by row in `n`.
//!
//! [`reference`] evaluates the same sums by literal composition enumeration.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::comb::{binomial, double_factorial_odd};
use crate::error::GalledError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeClass {
    General,
    TimeConsistent,
    SimplexTimeConsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Labeling {
    Unlabeled,
    LeafLabeled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeClassSpec {
    pub class: TreeClass,
    pub labeling: Labeling,
}

impl TreeClass {
    pub const ALL: [TreeClass; 3] =
        [TreeClass::General, TreeClass::TimeConsistent, TreeClass::SimplexTimeConsistent];

    pub fn name(self) -> &'static str {
        match self {
            TreeClass::General => "general",
            TreeClass::TimeConsistent => "time-consistent",
            TreeClass::SimplexTimeConsistent => "simplex-tc",
        }
    }

    /// Largest legal gall count for `n` leaves.
    pub fn max_galls(self, n: usize) -> usize {
        match self {
            TreeClass::General => n.saturating_sub(1),
            _ => n.saturating_sub(1) / 2,
        }
    }
}

impl Labeling {
    pub const ALL: [Labeling; 2] = [Labeling::Unlabeled, Labeling::LeafLabeled];

    pub fn name(self) -> &'static str {
        match self {
            Labeling::Unlabeled => "unlabeled",
            Labeling::LeafLabeled => "labeled",
        }
    }
}

impl TreeClassSpec {
    pub const fn new(class: TreeClass, labeling: Labeling) -> Self {
        TreeClassSpec { class, labeling }
    }

    pub fn all() -> impl Iterator<Item = TreeClassSpec> {
        TreeClass::ALL
            .into_iter()
            .flat_map(|c| Labeling::ALL.into_iter().map(move |l| TreeClassSpec::new(c, l)))
    }

    pub fn max_galls(&self, n: usize) -> usize {
        self.class.max_galls(n)
    }

    pub fn is_labeled(&self) -> bool {
        self.labeling == Labeling::LeafLabeled
    }
}

impl fmt::Display for TreeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for TreeClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.class, self.labeling)
    }
}

impl FromStr for TreeClass {
    type Err = GalledError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "general" | "g" => Ok(TreeClass::General),
            "time-consistent" | "tc" => Ok(TreeClass::TimeConsistent),
            "simplex-tc" | "simplex" => Ok(TreeClass::SimplexTimeConsistent),
            other => Err(GalledError::InvalidInput(format!("unknown class `{other}`"))),
        }
    }
}

impl FromStr for Labeling {
    type Err = GalledError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unlabeled" => Ok(Labeling::Unlabeled),
            "labeled" | "leaf-labeled" => Ok(Labeling::LeafLabeled),
            other => Err(GalledError::InvalidInput(format!("unknown labeling `{other}`"))),
        }
    }
}

/// Rows `n = 1..=max_n` of counts by gall number, with row totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub spec: TreeClassSpec,
    rows: Vec<Vec<BigUint>>,
    totals: Vec<BigUint>,
}

impl CountTable {
    pub fn max_n(&self) -> usize {
        self.rows.len()
    }

    /// Zero outside the legal gall range.
    pub fn get(&self, n: usize, g: usize) -> BigUint {
        self.row(n).get(g).cloned().unwrap_or_default()
    }

    /// Cells `g = 0..=max_galls(n)`.
    pub fn row(&self, n: usize) -> &[BigUint] {
        match n {
            0 => &[],
            _ => self.rows.get(n - 1).map_or(&[], Vec::as_slice),
        }
    }

    pub fn total(&self, n: usize) -> BigUint {
        match n {
            0 => BigUint::zero(),
            _ => self.totals.get(n - 1).cloned().unwrap_or_default(),
        }
    }

    /// Widest row, in gall columns.
    pub fn width(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Memoized evaluation of one `(class, labeling)` recursion, grown bottom-up in `n`.
#[derive(Debug, Clone)]
pub struct CountEngine {
    spec: TreeClassSpec,
    // e[n][g]; row 0 is empty.
    e: Vec<Vec<BigUint>>,
    // seq[k][n][g] for k >= 1: ordered k-tuples of trees; seq[0] is the empty tuple.
    seq: Vec<Vec<Vec<BigUint>>>,
}

impl CountEngine {
    pub fn new(spec: TreeClassSpec) -> Self {
        CountEngine { spec, e: vec![Vec::new()], seq: vec![vec![vec![BigUint::one()]]] }
    }

    pub fn spec(&self) -> TreeClassSpec {
        self.spec
    }

    pub fn computed_up_to(&self) -> usize {
        self.e.len() - 1
    }

    pub fn count(&mut self, n: usize, g: usize) -> Result<BigUint, GalledError> {
        check_n(n)?;
        self.ensure(n);
        Ok(self.e[n].get(g).cloned().unwrap_or_default())
    }

    pub fn total(&mut self, n: usize) -> Result<BigUint, GalledError> {
        check_n(n)?;
        self.ensure(n);
        Ok(self.e[n].iter().sum())
    }

    pub fn table(&mut self, max_n: usize) -> Result<CountTable, GalledError> {
        check_n(max_n)?;
        self.ensure(max_n);
        let rows: Vec<Vec<BigUint>> = self.e[1..=max_n].to_vec();
        let totals = rows.iter().map(|r| r.iter().sum()).collect();
        Ok(CountTable { spec: self.spec, rows, totals })
    }

    pub fn ensure(&mut self, n: usize) {
        while self.computed_up_to() < n {
            self.extend();
        }
    }

    fn e_at(&self, n: usize, g: usize) -> BigUint {
        self.e.get(n).and_then(|r| r.get(g)).cloned().unwrap_or_default()
    }

    fn seq_at(&self, k: usize, n: usize, g: usize) -> BigUint {
        self.seq
            .get(k)
            .and_then(|s| s.get(n))
            .and_then(|r| r.get(g))
            .cloned()
            .unwrap_or_default()
    }

    /// Sequence row `seq[k][n][..]` for `k >= 2` from rows of smaller `n`.
    fn seq_row(&self, k: usize, n: usize) -> Vec<BigUint> {
        let width = n;
        let mut row = vec![BigUint::zero(); width];
        let labeled = self.spec.is_labeled();
        for j in 1..n {
            if n - j < k - 1 {
                break;
            }
            let w = if labeled { binomial(n, j) } else { BigUint::one() };
            let head = &self.e[j];
            let tail = &self.seq[k - 1][n - j];
            for (h, a) in head.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let wa = a * &w;
                for (r, b) in tail.iter().enumerate() {
                    if !b.is_zero() && h + r < width {
                        row[h + r] += &wa * b;
                    }
                }
            }
        }
        row
    }

    fn extend(&mut self) {
        let n = self.computed_up_to() + 1;
        for k in 1..=n {
            if self.seq.len() <= k {
                self.seq.push(vec![Vec::new(); n]);
            }
            debug_assert_eq!(self.seq[k].len(), n);
            let row = if k >= 2 { self.seq_row(k, n) } else { Vec::new() };
            self.seq[k].push(row);
        }
        // Empty tuples only reach zero leaves.
        self.seq[0].push(Vec::new());

        let row = if n == 1 { vec![BigUint::one()] } else { self.leaf_row(n) };
        self.seq[1][n] = row.clone();
        self.e.push(row);
    }

    fn leaf_row(&self, n: usize) -> Vec<BigUint> {
        let spec = self.spec;
        let labeled = spec.is_labeled();
        let gmax = spec.max_galls(n);
        let mut row = Vec::with_capacity(gmax + 1);
        for g in 0..=gmax {
            // Twice the swap-symmetric part, then halved.
            let mut sym = self.seq_at(2, n, g);
            let mut plain = BigUint::zero();
            if !labeled && n % 2 == 0 && g % 2 == 0 {
                sym += self.e_at(n / 2, g / 2);
            }
            if g >= 1 {
                match spec.class {
                    TreeClass::General | TreeClass::TimeConsistent => {
                        for k in 3..=n {
                            sym += self.seq_at(k, n, g - 1) * (k - 2);
                        }
                        if !labeled {
                            sym += self.gall_palindromes(n, g);
                        }
                        if spec.class == TreeClass::General {
                            for k in 2..=n {
                                plain += self.seq_at(k, n, g - 1);
                            }
                        }
                    }
                    TreeClass::SimplexTimeConsistent => {
                        let ret_choices = if labeled { n } else { 1 };
                        for k in 3..=n {
                            sym += self.seq_at(k - 1, n - 1, g - 1) * ((k - 2) * ret_choices);
                        }
                        if !labeled && n % 2 == 1 && g % 2 == 1 {
                            for a in 1..=n / 2 {
                                sym += self.seq_at(a, (n - 1) / 2, (g - 1) / 2);
                            }
                        }
                    }
                }
            }
            debug_assert!(!(&sym % 2u32).is_one(), "odd symmetric sum at n={n} g={g}");
            row.push(sym / 2u32 + plain);
        }
        row
    }

    /// Root galls whose two sides are equal sequences.
    fn gall_palindromes(&self, n: usize, g: usize) -> BigUint {
        let mut acc = BigUint::zero();
        for m in 1..n {
            if (n - m) % 2 == 1 {
                continue;
            }
            let half = (n - m) / 2;
            for (h, ret) in self.e[m].iter().enumerate() {
                if ret.is_zero() || h > g - 1 || (g - 1 - h) % 2 == 1 {
                    continue;
                }
                let side_galls = (g - 1 - h) / 2;
                for a in 1..=half {
                    let s = self.seq_at(a, half, side_galls);
                    if !s.is_zero() {
                        acc += ret * s;
                    }
                }
            }
        }
        acc
    }
}

fn check_n(n: usize) -> Result<(), GalledError> {
    if n == 0 {
        return Err(GalledError::InvalidInput("n must be at least 1".into()));
    }
    Ok(())
}

fn engines() -> &'static Mutex<HashMap<TreeClassSpec, CountEngine>> {
    static ENGINES: OnceLock<Mutex<HashMap<TreeClassSpec, CountEngine>>> = OnceLock::new();
    ENGINES.get_or_init(|| Mutex::new(HashMap::new()))
}

fn with_engine<T>(spec: TreeClassSpec, f: impl FnOnce(&mut CountEngine) -> T) -> T {
    let mut map = engines().lock().unwrap_or_else(|p| p.into_inner());
    f(map.entry(spec).or_insert_with(|| CountEngine::new(spec)))
}

/// Number of trees of `spec` with `n` leaves and `g` galls.
pub fn count(spec: TreeClassSpec, n: usize, g: usize) -> Result<BigUint, GalledError> {
    with_engine(spec, |e| e.count(n, g))
}

pub fn total(spec: TreeClassSpec, n: usize) -> Result<BigUint, GalledError> {
    with_engine(spec, |e| e.total(n))
}

pub fn build_table(spec: TreeClassSpec, max_n: usize) -> Result<CountTable, GalledError> {
    with_engine(spec, |e| e.table(max_n))
}

/// Wedderburn–Etherington numbers.
pub fn wedderburn(n: usize) -> BigUint {
    wedderburn_upto(n).pop().unwrap_or_default()
}

/// `U_0..=U_n` with `U_0 = 0`.
pub fn wedderburn_upto(n: usize) -> Vec<BigUint> {
    let mut u = vec![BigUint::zero(); n + 1];
    if n >= 1 {
        u[1] = BigUint::one();
    }
    for m in 2..=n {
        let mut s = BigUint::zero();
        for i in 1..=(m - 1) / 2 {
            s += &u[i] * &u[m - i];
        }
        if m % 2 == 0 {
            let h = &u[m / 2];
            s += h * (h + 1u32) / 2u32;
        }
        u[m] = s;
    }
    u
}

/// Leaf-labeled rooted binary trees, `(2n−3)!!`.
pub fn labeled_tree_count(n: usize) -> BigUint {
    match n {
        0 => BigUint::zero(),
        1 => BigUint::one(),
        _ => double_factorial_odd(n - 1),
    }
}

/// Unlabeled simplex trees with any number of galls, by the single-variable recursion.
pub fn simplex_total_direct(n: usize) -> Result<BigUint, GalledError> {
    check_n(n)?;
    Ok(simplex_totals_direct(n).swap_remove(n))
}

/// `A_0..=A_n` for the simplex class, `A_0 = 0`.
pub fn simplex_totals_direct(n: usize) -> Vec<BigUint> {
    let mut a = vec![BigUint::zero(); n + 1];
    // pow[j][m]: ordered j-tuples of simplex trees with m leaves in total.
    let mut pow: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); n + 1]; n + 1];
    pow[0][0] = BigUint::one();
    for m in 1..=n {
        if m == 1 {
            a[1] = BigUint::one();
        } else {
            let mut s = BigUint::zero();
            for i in 1..m {
                s += &a[i] * &a[m - i];
            }
            if m % 2 == 0 {
                s += &a[m / 2];
            }
            for k in 3..=m {
                s += &pow[k - 1][m - 1] * (k - 2);
            }
            if m % 2 == 1 {
                for j in 1..=(m - 1) / 2 {
                    s += &pow[j][(m - 1) / 2];
                }
            }
            a[m] = s / 2u32;
        }
        for j in 1..=m {
            let mut v = BigUint::zero();
            for i in 1..=m - j + 1 {
                if !a[i].is_zero() {
                    v += &a[i] * &pow[j - 1][m - i];
                }
            }
            pow[j][m] = v;
        }
    }
    a
}

/// The same recursions evaluated by literal enumeration of leaf and gall compositions.
///
/// Exponential in `n`; serves as an independent check of [`CountEngine`] for small `n`.
pub mod reference {
    use num_bigint::BigUint;
    use num_traits::{One, Zero};

    use super::{TreeClass, TreeClassSpec};
    use crate::comb::{compositions, multinomial, palindromic_compositions};

    /// Rows `e[n][g]` for `n = 0..=max_n`.
    pub fn table(spec: TreeClassSpec, max_n: usize) -> Vec<Vec<BigUint>> {
        let mut e: Vec<Vec<BigUint>> = vec![Vec::new()];
        for n in 1..=max_n {
            let row = if n == 1 {
                vec![BigUint::one()]
            } else {
                (0..=spec.max_galls(n)).map(|g| cell(spec, &e, n, g)).collect()
            };
            e.push(row);
        }
        e
    }

    fn at(e: &[Vec<BigUint>], n: usize, g: usize) -> BigUint {
        e.get(n).and_then(|r| r.get(g)).cloned().unwrap_or_default()
    }

    /// Ordered `k`-tuples with `n` leaves and `g` galls: leaf compositions of `n`
    /// against gall compositions of `g + k` with every part lowered by one.
    fn tuples(spec: TreeClassSpec, e: &[Vec<BigUint>], n: usize, g: usize, k: usize) -> BigUint {
        let mut acc = BigUint::zero();
        for c in compositions(n, k) {
            let weight = if spec.is_labeled() {
                multinomial(n, &c).expect("composition sums to n")
            } else {
                BigUint::one()
            };
            for d in compositions(g + k, k) {
                let prod = c
                    .iter()
                    .zip(d.iter())
                    .fold(weight.clone(), |p, (&ci, &di)| p * at(e, ci, di - 1));
                acc += prod;
            }
        }
        acc
    }

    /// Palindromic `k`-tuples: the middle entry (odd `k`) and first half fixed.
    fn palindromic_tuples(e: &[Vec<BigUint>], n: usize, g: usize, k: usize) -> BigUint {
        let mut acc = BigUint::zero();
        for c in palindromic_compositions(n, k) {
            for d in palindromic_compositions(g + k, k) {
                let prod = c
                    .iter()
                    .zip(d.iter())
                    .take(k.div_ceil(2))
                    .fold(BigUint::one(), |p, (&ci, &di)| p * at(e, ci, di - 1));
                acc += prod;
            }
        }
        acc
    }

    fn cell(spec: TreeClassSpec, e: &[Vec<BigUint>], n: usize, g: usize) -> BigUint {
        let labeled = spec.is_labeled();
        let mut sym = tuples(spec, e, n, g, 2);
        let mut plain = BigUint::zero();
        if !labeled && n % 2 == 0 && g % 2 == 0 {
            sym += at(e, n / 2, g / 2);
        }
        if g >= 1 {
            match spec.class {
                TreeClass::General | TreeClass::TimeConsistent => {
                    for k in 3..=n {
                        sym += tuples(spec, e, n, g - 1, k) * (k - 2);
                        // Equal sides around the reticulation subtree in the middle.
                        if !labeled && k % 2 == 1 {
                            sym += palindromic_tuples(e, n, g - 1, k);
                        }
                    }
                    if spec.class == TreeClass::General {
                        for k in 2..=n {
                            plain += tuples(spec, e, n, g - 1, k);
                        }
                    }
                }
                TreeClass::SimplexTimeConsistent => {
                    let ret = if labeled { n } else { 1 };
                    for k in 3..=n {
                        sym += tuples(spec, e, n - 1, g - 1, k - 1) * ((k - 2) * ret);
                        if !labeled && k % 2 == 1 {
                            sym += palindromic_tuples(e, n - 1, g - 1, k - 1);
                        }
                    }
                }
            }
        }
        sym / 2u32 + plain
    }
}
