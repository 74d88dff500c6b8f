//! Compositions, weighted partitions and exact integer coefficients.

use std::collections::BTreeMap;
use std::ops::Deref;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::GalledError;

/// An ordered tuple of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_palindrome(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    pub fn into_parts(self) -> Vec<usize> {
        self.0
    }
}

impl Deref for Composition {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// Lexicographic stream of the compositions of `total` into `parts` positive parts.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Vec<usize>,
    total: usize,
    done: bool,
}

impl Compositions {
    fn new(total: usize, parts: usize) -> Self {
        if parts == 0 || parts > total {
            return Compositions { current: Vec::new(), total, done: true };
        }
        // Lexicographically first tuple: all ones, remainder in the last slot.
        let mut current = vec![1; parts];
        current[parts - 1] = total - (parts - 1);
        Compositions { current, total, done: false }
    }
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        if self.done {
            return None;
        }
        let out = Composition(self.current.clone());
        let k = self.current.len();
        // Successor: grow the rightmost part whose tail still has slack, reset the tail.
        let mut tail = self.current[k - 1];
        let mut next = None;
        for i in (0..k - 1).rev() {
            if tail > k - 1 - i {
                next = Some(i);
                break;
            }
            tail += self.current[i];
        }
        match next {
            Some(i) => {
                self.current[i] += 1;
                for p in &mut self.current[i + 1..k - 1] {
                    *p = 1;
                }
                let head: usize = self.current[..k - 1].iter().sum();
                self.current[k - 1] = self.total - head;
            }
            None => self.done = true,
        }
        Some(out)
    }
}

pub fn compositions(total: usize, parts: usize) -> Compositions {
    Compositions::new(total, parts)
}

/// Palindromic compositions, in lexicographic order.
pub fn palindromic_compositions(total: usize, parts: usize) -> std::vec::IntoIter<Composition> {
    let mut out = Vec::new();
    if parts == 0 || parts > total {
        return out.into_iter();
    }
    let half = parts / 2;
    if parts % 2 == 0 {
        if total % 2 == 0 {
            for c in compositions(total / 2, half) {
                out.push(mirror(c.parts(), None));
            }
        }
    } else if half == 0 {
        out.push(Composition(vec![total]));
    } else {
        // Middle part shares the parity of `total`.
        let mut mid = if total % 2 == 0 { 2 } else { 1 };
        while mid + 2 * half <= total {
            for c in compositions((total - mid) / 2, half) {
                out.push(mirror(c.parts(), Some(mid)));
            }
            mid += 2;
        }
        out.sort();
    }
    out.into_iter()
}

fn mirror(half: &[usize], mid: Option<usize>) -> Composition {
    let mut v = half.to_vec();
    v.extend(mid);
    v.extend(half.iter().rev());
    Composition(v)
}

/// Sparse multiplicity vector: index `i` occurs `k_i` times, with `Σ i·k_i` fixed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct WeightedPartition {
    mult: BTreeMap<usize, usize>,
}

impl WeightedPartition {
    pub fn multiplicity(&self, index: usize) -> usize {
        self.mult.get(&index).copied().unwrap_or(0)
    }

    /// `(index, multiplicity)` pairs with nonzero multiplicity, ascending by index.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mult.iter().map(|(&i, &k)| (i, k))
    }

    pub fn weight(&self) -> usize {
        self.iter().map(|(i, k)| i * k).sum()
    }

    /// `ℓ = Σ k_i`.
    pub fn length(&self) -> usize {
        self.mult.values().sum()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.mult.values().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }
}

/// Every multiplicity vector with `Σ i·k_i = weight`.
pub fn weighted_partitions(weight: usize) -> Vec<WeightedPartition> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    partitions_into(weight, weight, &mut stack, &mut out);
    out
}

/// Multiplicity vectors supported on even indices with `Σ 2i·r_{2i} = weight`.
pub fn even_weighted_partitions(weight: usize) -> Vec<WeightedPartition> {
    if weight % 2 == 1 {
        return Vec::new();
    }
    weighted_partitions(weight / 2)
        .into_iter()
        .map(|p| WeightedPartition {
            mult: p.mult.into_iter().map(|(i, k)| (2 * i, k)).collect(),
        })
        .collect()
}

fn partitions_into(
    rest: usize,
    max_part: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<WeightedPartition>,
) {
    if rest == 0 {
        let mut mult = BTreeMap::new();
        for &p in stack.iter() {
            *mult.entry(p).or_insert(0) += 1;
        }
        out.push(WeightedPartition { mult });
        return;
    }
    for p in (1..=max_part.min(rest)).rev() {
        stack.push(p);
        partitions_into(rest - p, p, stack, out);
        stack.pop();
    }
}

pub fn factorial(m: usize) -> BigUint {
    (2..=m).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn multinomial(n: usize, parts: &[usize]) -> Result<BigUint, GalledError> {
    let sum: usize = parts.iter().sum();
    if sum != n {
        return Err(GalledError::PartsMismatch { expected: n, actual: sum });
    }
    let mut acc = BigUint::one();
    let mut used = 0;
    for &p in parts {
        used += p;
        acc *= binomial(used, p);
    }
    Ok(acc)
}

pub fn catalan(m: usize) -> BigUint {
    binomial(2 * m, m) / (m + 1)
}

/// `(2m−1)!!`, with the empty product for `m = 0`.
pub fn double_factorial_odd(m: usize) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, k| acc * (2 * k - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parts_of(it: impl Iterator<Item = Composition>) -> Vec<Vec<usize>> {
        it.map(Composition::into_parts).collect()
    }

    fn brute_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = vec![1; parts];
        loop {
            if cur.iter().sum::<usize>() == total {
                out.push(cur.clone());
            }
            let mut i = parts;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < total {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 1;
            }
        }
    }

    fn partition_count(n: usize) -> usize {
        let mut p = vec![0usize; n + 1];
        p[0] = 1;
        for part in 1..=n {
            for s in part..=n {
                p[s] += p[s - part];
            }
        }
        p[n]
    }

    #[test]
    fn small_compositions() {
        assert_eq!(parts_of(compositions(3, 2)), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(parts_of(compositions(4, 1)), vec![vec![4]]);
        assert_eq!(compositions(6, 3).count(), 10);
        assert_eq!(compositions(2, 3).count(), 0);
        assert_eq!(compositions(3, 0).count(), 0);
    }

    #[test]
    fn compositions_match_brute_force_in_order() {
        for total in 1..=9 {
            for parts in 1..=total {
                assert_eq!(parts_of(compositions(total, parts)), brute_compositions(total, parts));
            }
        }
    }

    #[test]
    fn composition_counts() {
        for a in 1..=12 {
            let mut all = 0u64;
            for b in 1..=a {
                let c = compositions(a, b).count();
                assert_eq!(BigUint::from(c), binomial(a - 1, b - 1));
                all += c as u64;
            }
            assert_eq!(all, 1 << (a - 1));
        }
    }

    #[test]
    fn small_palindromes() {
        assert_eq!(parts_of(palindromic_compositions(5, 3)), vec![vec![1, 3, 1], vec![2, 1, 2]]);
        assert_eq!(parts_of(palindromic_compositions(4, 2)), vec![vec![2, 2]]);
        assert_eq!(palindromic_compositions(3, 2).count(), 0);
        assert_eq!(parts_of(palindromic_compositions(4, 1)), vec![vec![4]]);
    }

    #[test]
    fn palindromes_are_filtered_stream() {
        for a in 1..=10 {
            for b in 1..=a {
                let filtered: Vec<_> = compositions(a, b).filter(Composition::is_palindrome).collect();
                let direct: Vec<_> = palindromic_compositions(a, b).collect();
                assert_eq!(direct, filtered, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn small_weighted_partitions() {
        let two = weighted_partitions(2);
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].multiplicity(2), 1);
        assert_eq!(two[1].multiplicity(1), 2);
        let zero = weighted_partitions(0);
        assert_eq!(zero.len(), 1);
        assert!(zero[0].is_empty());
        assert_eq!(weighted_partitions(4).len(), 5);
    }

    #[test]
    fn weighted_partition_counts() {
        for w in 0..=12 {
            let ps = weighted_partitions(w);
            assert_eq!(ps.len(), partition_count(w));
            assert!(ps.iter().all(|p| p.weight() == w));
        }
    }

    #[test]
    fn even_partitions() {
        assert!(even_weighted_partitions(3).is_empty());
        let four = even_weighted_partitions(4);
        assert_eq!(four.len(), 2);
        for p in &four {
            assert_eq!(p.weight(), 4);
            assert!(p.iter().all(|(i, _)| i % 2 == 0));
        }
        assert_eq!(even_weighted_partitions(0).len(), 1);
    }

    #[test]
    fn coefficients() {
        assert_eq!(multinomial(4, &[2, 2]).unwrap(), BigUint::from(6u32));
        assert_eq!(multinomial(5, &[5]).unwrap(), BigUint::one());
        let oracle = factorial(7) / (factorial(2) * factorial(2) * factorial(3));
        assert_eq!(multinomial(7, &[2, 2, 3]).unwrap(), oracle);
        assert_eq!(oracle, BigUint::from(210u32));
        assert!(multinomial(5, &[2, 2]).is_err());
        assert_eq!(catalan(3), BigUint::from(5u32));
        assert_eq!(catalan(11), BigUint::from(58786u32));
        assert_eq!(double_factorial_odd(5 - 1 - 1), BigUint::from(15u32));
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(20), BigUint::from(2432902008176640000u64));
    }

    proptest! {
        #[test]
        fn compositions_sum_and_count(total in 1usize..14, parts in 1usize..14) {
            let all: Vec<_> = compositions(total, parts).collect();
            prop_assert_eq!(BigUint::from(all.len()), if parts <= total { binomial(total - 1, parts - 1) } else { BigUint::ZERO });
            for c in &all {
                prop_assert_eq!(c.total(), total);
                prop_assert!(c.iter().all(|&p| p >= 1));
            }
            prop_assert!(all.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn multinomial_is_factorial_ratio(parts in proptest::collection::vec(0usize..6, 0..5)) {
            let n: usize = parts.iter().sum();
            let den = parts.iter().fold(BigUint::one(), |acc, &p| acc * factorial(p));
            prop_assert_eq!(multinomial(n, &parts).unwrap(), factorial(n) / den);
        }

        #[test]
        fn catalan_recurrence(m in 1usize..30) {
            let conv = (0..m).fold(BigUint::ZERO, |acc, i| acc + catalan(i) * catalan(m - 1 - i));
            prop_assert_eq!(catalan(m), conv);
        }
    }
}
