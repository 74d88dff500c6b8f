use galled_core::counts::{self, Labeling, TreeClass, TreeClassSpec};
use galled_core::genfunc::{arbitrary_galls_series, counts_of, fixed_g_series};
use galled_core::oracle::{self, GalledStructure};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = TreeClassSpec> {
    (0..3usize, 0..2usize).prop_map(|(c, l)| TreeClassSpec::new(TreeClass::ALL[c], Labeling::ALL[l]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn row_sums_are_totals(spec in spec_strategy(), n in 1usize..18) {
        let t = counts::build_table(spec, n).unwrap();
        let sum: BigUint = t.row(n).iter().sum();
        prop_assert_eq!(sum, counts::total(spec, n).unwrap());
        prop_assert_eq!(t.row(n).len(), spec.max_galls(n) + 1);
    }

    #[test]
    fn counts_vanish_above_the_gall_maximum(spec in spec_strategy(), n in 1usize..14, extra in 1usize..4) {
        prop_assert_eq!(counts::count(spec, n, spec.max_galls(n) + extra).unwrap(), BigUint::default());
    }

    #[test]
    fn subclasses_never_exceed_general(n in 1usize..16, g in 0usize..8, labeled in any::<bool>()) {
        let l = if labeled { Labeling::LeafLabeled } else { Labeling::Unlabeled };
        let gen = counts::count(TreeClassSpec::new(TreeClass::General, l), n, g).unwrap();
        let tc = counts::count(TreeClassSpec::new(TreeClass::TimeConsistent, l), n, g).unwrap();
        let sx = counts::count(TreeClassSpec::new(TreeClass::SimplexTimeConsistent, l), n, g).unwrap();
        prop_assert!(sx <= tc && tc <= gen);
    }

    #[test]
    fn parsed_structures_keep_their_canonical_form(n in 1usize..6, pick in any::<prop::sample::Index>()) {
        let all = oracle::generate_all(TreeClass::General, n).unwrap();
        let s = pick.get(&all.values().cloned().collect::<Vec<_>>()).clone();
        let back: GalledStructure = s.to_text().parse().unwrap();
        prop_assert_eq!(back.canonical_form(), s.canonical_form());
    }
}

#[test]
fn totals_series_matches_recursion() {
    for spec in TreeClassSpec::all() {
        let s = counts_of(spec.labeling, &arbitrary_galls_series(spec, 16).unwrap()).unwrap();
        for n in 1..=16 {
            assert_eq!(s[n], BigInt::from(counts::total(spec, n).unwrap()), "{spec} n={n}");
        }
    }
}

#[test]
fn fixed_gall_series_reaches_large_orders() {
    let spec = TreeClassSpec::new(TreeClass::General, Labeling::Unlabeled);
    let s = counts_of(spec.labeling, &fixed_g_series(spec, 1, 300).unwrap()).unwrap();
    assert_eq!(s[30], BigInt::from(counts::count(spec, 30, 1).unwrap()));
    assert!(s[300] > BigInt::from(0));
}
