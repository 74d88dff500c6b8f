//! Published count tables, embedded as CSV.

use std::str::FromStr;

use galled_core::counts::{Labeling, TreeClass, TreeClassSpec};
use num_bigint::BigUint;

const GENERAL_UNLABELED: &str = include_str!("../data/general_unlabeled.csv");
const GENERAL_LABELED: &str = include_str!("../data/general_labeled.csv");
const SIMPLEX_UNLABELED: &str = include_str!("../data/simplex_unlabeled.csv");
const SIMPLEX_LABELED: &str = include_str!("../data/simplex_labeled.csv");
const SIMPLEX_UNLABELED_TOTALS: &str = include_str!("../data/simplex_unlabeled_totals.csv");
const ERRATA: &str = include_str!("../data/errata.csv");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenRow {
    pub n: usize,
    /// `cells[g]`, empty where `g` exceeds the class maximum.
    pub cells: Vec<Option<BigUint>>,
    pub total: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenTable {
    pub name: &'static str,
    pub spec: TreeClassSpec,
    pub rows: Vec<GoldenRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Erratum {
    pub table: String,
    pub n: usize,
    /// `g<k>` or `total`.
    pub column: String,
    pub published: BigUint,
    pub exact: BigUint,
}

fn reader(src: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(src.as_bytes())
}

fn big(s: &str) -> BigUint {
    BigUint::from_str(s).unwrap_or_else(|_| panic!("embedded value '{s}' is not an integer"))
}

fn parse_table(name: &'static str, spec: TreeClassSpec, src: &str) -> GoldenTable {
    let mut rows = Vec::new();
    for rec in reader(src).records() {
        let rec = rec.expect("embedded CSV is well formed");
        let last = rec.len() - 1;
        let cells = (1..last).map(|i| Some(&rec[i]).filter(|s| !s.is_empty()).map(big)).collect();
        rows.push(GoldenRow { n: rec[0].parse().expect("n"), cells, total: big(&rec[last]) });
    }
    GoldenTable { name, spec, rows }
}

pub fn tables() -> Vec<GoldenTable> {
    use Labeling::*;
    use TreeClass::*;
    vec![
        parse_table("general_unlabeled", TreeClassSpec::new(General, Unlabeled), GENERAL_UNLABELED),
        parse_table("general_labeled", TreeClassSpec::new(General, LeafLabeled), GENERAL_LABELED),
        parse_table("simplex_unlabeled", TreeClassSpec::new(SimplexTimeConsistent, Unlabeled), SIMPLEX_UNLABELED),
        parse_table("simplex_labeled", TreeClassSpec::new(SimplexTimeConsistent, LeafLabeled), SIMPLEX_LABELED),
    ]
}

/// Simplex unlabeled totals for `16 ≤ n ≤ 25`.
pub fn simplex_unlabeled_totals() -> Vec<(usize, BigUint)> {
    reader(SIMPLEX_UNLABELED_TOTALS)
        .records()
        .map(|r| {
            let r = r.expect("embedded CSV is well formed");
            (r[0].parse().expect("n"), big(&r[1]))
        })
        .collect()
}

pub fn errata() -> Vec<Erratum> {
    reader(ERRATA)
        .records()
        .map(|r| {
            let r = r.expect("embedded CSV is well formed");
            Erratum {
                table: r[0].to_string(),
                n: r[1].parse().expect("n"),
                column: r[2].to_string(),
                published: big(&r[3]),
                exact: big(&r[4]),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_tables_parse() {
        let t = tables();
        assert_eq!(t.len(), 4);
        assert_eq!(t[0].rows.len(), 12);
        assert_eq!(t[2].rows.len(), 15);
        assert_eq!(t[0].rows[4].cells[2], Some(BigUint::from(113u32)));
        assert_eq!(t[3].rows[4].total, BigUint::from(870u32));
        assert_eq!(simplex_unlabeled_totals().last().unwrap().1, BigUint::from(4911122651176u64));
        assert_eq!(errata().len(), 7);
    }
}
