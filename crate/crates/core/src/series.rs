//! Truncated power series with exact rational coefficients.
//!
//! Coefficients share one positive denominator, so products of integer or dyadic
//! series reduce to big-integer convolutions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::GalledError;

/// `c_0 + c_1 t + … + c_N t^N`, stored as numerators over a common denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    num: Vec<BigInt>,
    den: BigInt,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs().iter().map(ToString::to_string)).finish()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let coef = if c.is_one() && n > 0 { String::new() } else { c.to_string() };
            let sep = if coef.is_empty() || n == 0 { "" } else { "*" };
            match n {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}{sep}t")?,
                _ => write!(f, "{coef}{sep}t^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

impl TruncatedSeries {
    fn from_parts(num: Vec<BigInt>, den: BigInt) -> Self {
        let mut s = TruncatedSeries { num, den };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if g.is_one() {
            return;
        }
        for c in &mut self.num {
            if !c.is_zero() {
                *c /= &g;
            }
        }
        self.den /= &g;
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries { num: vec![BigInt::zero(); order + 1], den: BigInt::one() }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, BigRational::one())
    }

    /// The series variable `t` (zero at order 0).
    pub fn t(order: usize) -> Self {
        Self::monomial(order, 1, BigRational::one())
    }

    pub fn monomial(order: usize, power: usize, coeff: BigRational) -> Self {
        let mut num = vec![BigInt::zero(); order + 1];
        if power <= order {
            num[power] = coeff.numer().clone();
        }
        Self::from_parts(num, coeff.denom().clone())
    }

    /// Integer coefficients, zero-padded or cut to `order`.
    pub fn from_integers<T: Into<BigInt> + Clone>(order: usize, coeffs: &[T]) -> Self {
        let mut num: Vec<BigInt> = coeffs.iter().take(order + 1).cloned().map(Into::into).collect();
        num.resize(order + 1, BigInt::zero());
        TruncatedSeries { num, den: BigInt::one() }
    }

    pub fn from_rationals(order: usize, coeffs: &[BigRational]) -> Self {
        let den = coeffs
            .iter()
            .take(order + 1)
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num: Vec<BigInt> =
            coeffs.iter().take(order + 1).map(|c| c.numer() * (&den / c.denom())).collect();
        num.resize(order + 1, BigInt::zero());
        Self::from_parts(num, den)
    }

    pub fn order(&self) -> usize {
        self.num.len() - 1
    }

    pub fn coeff(&self, n: usize) -> BigRational {
        match self.num.get(n) {
            Some(c) => BigRational::new(c.clone(), self.den.clone()),
            None => BigRational::zero(),
        }
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..=self.order()).map(|n| self.coeff(n)).collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coeff_f64(&self, n: usize) -> f64 {
        self.coeff(n).to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// Cut to a lower order or pad with zeros to a higher one.
    pub fn truncate(&self, order: usize) -> Self {
        let mut num = self.num.clone();
        num.resize(order + 1, BigInt::zero());
        Self::from_parts(num, self.den.clone())
    }

    fn common(&self, other: &Self) -> (usize, BigInt, BigInt, BigInt) {
        let order = self.order().min(other.order());
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        (order, den, fa, fb)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (order, den, fa, fb) = self.common(other);
        let num = (0..=order).map(|n| &self.num[n] * &fa + &other.num[n] * &fb).collect();
        Self::from_parts(num, den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (order, den, fa, fb) = self.common(other);
        let num = (0..=order).map(|n| &self.num[n] * &fa - &other.num[n] * &fb).collect();
        Self::from_parts(num, den)
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut num = vec![BigInt::zero(); order + 1];
        for (i, a) in self.num.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    num[i + j] += a * b;
                }
            }
        }
        Self::from_parts(num, &self.den * &other.den)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.order());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let num = self.num.iter().map(|x| x * c.numer()).collect();
        Self::from_parts(num, &self.den * c.denom())
    }

    pub fn scale_int(&self, c: i64) -> Self {
        let c = BigInt::from(c);
        Self::from_parts(self.num.iter().map(|x| x * &c).collect(), self.den.clone())
    }

    pub fn half(&self) -> Self {
        self.scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    /// Multiply by `t`, dropping the coefficient pushed past the order.
    pub fn shift_by_t(&self) -> Self {
        let mut num = Vec::with_capacity(self.num.len());
        num.push(BigInt::zero());
        num.extend(self.num[..self.order()].iter().cloned());
        TruncatedSeries { num, den: self.den.clone() }
    }

    /// `1/(1 − f)`; requires `f(0) = 0`.
    pub fn geom_inverse(&self) -> Result<Self, GalledError> {
        if !self.num[0].is_zero() {
            return Err(GalledError::NonzeroConstant);
        }
        // h = 1 + f·h, solved coefficient by coefficient over a growing common denominator.
        let order = self.order();
        let mut h: Vec<BigInt> = vec![BigInt::one()];
        let mut dh = BigInt::one();
        for n in 1..=order {
            let mut acc = BigInt::zero();
            for k in 1..=n {
                let f = &self.num[k];
                if !f.is_zero() && !h[n - k].is_zero() {
                    acc += f * &h[n - k];
                }
            }
            // h_n = acc / (den·dh); widen dh only by the reduced denominator.
            let full = &self.den * &dh;
            let g = acc.gcd(&full);
            let dn = if g.is_zero() { BigInt::one() } else { &full / &g };
            let lifted = dh.lcm(&dn);
            let widen = &lifted / &dh;
            if !widen.is_one() {
                for c in &mut h {
                    *c *= &widen;
                }
                dh = lifted;
            }
            // acc/full expressed over dh.
            let value = if acc.is_zero() { BigInt::zero() } else { (&acc / &g) * (&dh / &dn) };
            h.push(value);
        }
        Ok(Self::from_parts(h, dh))
    }

    /// `f(t²)`, truncated at the same order.
    pub fn substitute_t_squared(&self) -> Self {
        let order = self.order();
        let mut num = vec![BigInt::zero(); order + 1];
        for (k, c) in self.num.iter().enumerate() {
            if 2 * k > order {
                break;
            }
            num[2 * k] = c.clone();
        }
        Self::from_parts(num, self.den.clone())
    }

    /// Termwise derivative; the top coefficient becomes zero.
    pub fn derivative(&self) -> Self {
        let order = self.order();
        let mut num = vec![BigInt::zero(); order + 1];
        for n in 1..=order {
            num[n - 1] = &self.num[n] * BigInt::from(n);
        }
        Self::from_parts(num, self.den.clone())
    }

    /// Integer coefficients, or the first index that is not integral.
    pub fn to_integers(&self) -> Result<Vec<BigInt>, GalledError> {
        if self.den.is_one() {
            return Ok(self.num.clone());
        }
        self.num
            .iter()
            .enumerate()
            .map(|(n, c)| {
                let (q, r) = c.div_rem(&self.den);
                if r.is_zero() {
                    Ok(q)
                } else {
                    Err(GalledError::NotIntegral { index: n })
                }
            })
            .collect()
    }

    /// `n!·c_n`, required to be integral.
    pub fn egf_counts(&self) -> Result<Vec<BigInt>, GalledError> {
        let mut fact = BigInt::one();
        let mut out = Vec::with_capacity(self.num.len());
        for (n, c) in self.num.iter().enumerate() {
            if n > 0 {
                fact *= n;
            }
            let (q, r) = (c * &fact).div_rem(&self.den);
            if !r.is_zero() {
                return Err(GalledError::NotIntegral { index: n });
            }
            out.push(q);
        }
        Ok(out)
    }

    /// Evaluate the truncated polynomial at a real point.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs()
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::add(self, rhs)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::sub(self, rhs)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

/// Solve `F = Φ(F)` with `F(0) = 0`, one exact coefficient per pass.
///
/// `update` must be contractive: coefficient `n` of `Φ(F)` may depend only on
/// coefficients `< n` of `F`. Each pass evaluates `Φ` one order higher; a coefficient
/// that moves after it was fixed reports divergence.
pub fn fixed_point_solve<F>(order: usize, update: F) -> Result<TruncatedSeries, GalledError>
where
    F: Fn(&TruncatedSeries) -> TruncatedSeries,
{
    let mut cur = TruncatedSeries::zero(0);
    for p in 1..=order {
        let next = update(&cur.truncate(p));
        check_prefix(&cur, &next, p - 1)?;
        cur = next;
    }
    let again = update(&cur.truncate(order));
    check_prefix(&cur, &again, order)?;
    Ok(cur.truncate(order))
}

fn check_prefix(old: &TruncatedSeries, new: &TruncatedSeries, upto: usize) -> Result<(), GalledError> {
    for n in 0..=upto.min(old.order()) {
        if old.coeff(n) != new.coeff(n) {
            return Err(GalledError::Divergence { index: n });
        }
    }
    Ok(())
}

/// Series in `t` and `u`, stored as one [`TruncatedSeries`] in `t` per power of `u`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BivariateSeries {
    slices: Vec<TruncatedSeries>,
}

impl BivariateSeries {
    pub fn zero(t_order: usize, u_order: usize) -> Self {
        BivariateSeries { slices: vec![TruncatedSeries::zero(t_order); u_order + 1] }
    }

    /// Lift a series in `t` to `u`-degree zero.
    pub fn from_t(f: &TruncatedSeries, u_order: usize) -> Self {
        let mut s = Self::zero(f.order(), u_order);
        s.slices[0] = f.clone();
        s
    }

    pub fn t(t_order: usize, u_order: usize) -> Self {
        Self::from_t(&TruncatedSeries::t(t_order), u_order)
    }

    pub fn one(t_order: usize, u_order: usize) -> Self {
        Self::from_t(&TruncatedSeries::one(t_order), u_order)
    }

    pub fn t_order(&self) -> usize {
        self.slices[0].order()
    }

    pub fn u_order(&self) -> usize {
        self.slices.len() - 1
    }

    /// Coefficient of `u^m`, a series in `t`.
    pub fn slice(&self, m: usize) -> Option<&TruncatedSeries> {
        self.slices.get(m)
    }

    pub fn coeff(&self, n: usize, m: usize) -> BigRational {
        self.slices.get(m).map_or_else(BigRational::zero, |s| s.coeff(n))
    }

    /// `f(t, 1)`.
    pub fn sum_over_u(&self) -> TruncatedSeries {
        self.slices.iter().skip(1).fold(self.slices[0].clone(), |acc, s| acc.add(s))
    }

    pub fn truncate(&self, t_order: usize, u_order: usize) -> Self {
        let mut slices: Vec<TruncatedSeries> =
            self.slices.iter().take(u_order + 1).map(|s| s.truncate(t_order)).collect();
        slices.resize(u_order + 1, TruncatedSeries::zero(t_order));
        BivariateSeries { slices }
    }

    fn orders(&self, other: &Self) -> (usize, usize) {
        (self.t_order().min(other.t_order()), self.u_order().min(other.u_order()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (_, g) = self.orders(other);
        BivariateSeries { slices: (0..=g).map(|m| self.slices[m].add(&other.slices[m])).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (_, g) = self.orders(other);
        BivariateSeries { slices: (0..=g).map(|m| self.slices[m].sub(&other.slices[m])).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (n, g) = self.orders(other);
        let mut slices = Vec::with_capacity(g + 1);
        for m in 0..=g {
            let mut acc = TruncatedSeries::zero(n);
            for i in 0..=m {
                let (a, b) = (&self.slices[i], &other.slices[m - i]);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            slices.push(acc);
        }
        BivariateSeries { slices }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        BivariateSeries { slices: self.slices.iter().map(|s| s.scale(c)).collect() }
    }

    pub fn half(&self) -> Self {
        BivariateSeries { slices: self.slices.iter().map(TruncatedSeries::half).collect() }
    }

    pub fn shift_by_t(&self) -> Self {
        BivariateSeries { slices: self.slices.iter().map(TruncatedSeries::shift_by_t).collect() }
    }

    /// Multiply by `u`, dropping the top slice.
    pub fn shift_by_u(&self) -> Self {
        let mut slices = Vec::with_capacity(self.slices.len());
        slices.push(TruncatedSeries::zero(self.t_order()));
        slices.extend(self.slices[..self.u_order()].iter().cloned());
        BivariateSeries { slices }
    }

    /// `1/(1 − f)`; requires `f(0, 0) = 0`.
    pub fn geom_inverse(&self) -> Result<Self, GalledError> {
        let h0 = self.slices[0].geom_inverse()?;
        let mut slices = vec![h0.clone()];
        for m in 1..=self.u_order() {
            let mut acc = TruncatedSeries::zero(self.t_order());
            for j in 1..=m {
                if !self.slices[j].is_zero() {
                    acc = acc.add(&self.slices[j].mul(&slices[m - j]));
                }
            }
            slices.push(h0.mul(&acc));
        }
        Ok(BivariateSeries { slices })
    }

    /// `f(t², u²)`.
    pub fn substitute_squares(&self) -> Self {
        let mut out = Self::zero(self.t_order(), self.u_order());
        for (m, s) in self.slices.iter().enumerate() {
            if 2 * m > self.u_order() {
                break;
            }
            out.slices[2 * m] = s.substitute_t_squared();
        }
        out
    }
}

/// Bivariate analogue of [`fixed_point_solve`], filtering by `t`-degree.
pub fn fixed_point_solve_bivariate<F>(
    t_order: usize,
    u_order: usize,
    update: F,
) -> Result<BivariateSeries, GalledError>
where
    F: Fn(&BivariateSeries) -> BivariateSeries,
{
    let mut cur = BivariateSeries::zero(0, u_order);
    for p in 1..=t_order {
        let next = update(&cur.truncate(p, u_order));
        check_prefix_bi(&cur, &next, p - 1)?;
        cur = next;
    }
    let again = update(&cur.truncate(t_order, u_order));
    check_prefix_bi(&cur, &again, t_order)?;
    Ok(cur.truncate(t_order, u_order))
}

fn check_prefix_bi(old: &BivariateSeries, new: &BivariateSeries, upto: usize) -> Result<(), GalledError> {
    for (a, b) in old.slices.iter().zip(&new.slices) {
        check_prefix(a, b, upto)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn basic_arithmetic() {
        let t = TruncatedSeries::t(5);
        assert_eq!(t.mul(&t), TruncatedSeries::monomial(5, 2, BigRational::one()));
        assert_eq!(t.scale(&r(1, 2)).coeff(1), r(1, 2));
        let u = TruncatedSeries::from_integers(4, &[0, 1, 1, 1, 2]);
        assert_eq!(u.square().coeff(4), r(3, 1));
        assert_eq!((&u - &u), TruncatedSeries::zero(4));
        assert_eq!(t.shift_by_t().coeff(2), r(1, 1));
    }

    #[test]
    fn geometric_inverses() {
        let t = TruncatedSeries::t(6);
        assert_eq!(t.geom_inverse().unwrap().to_integers().unwrap(), ints(&[1; 7]));
        assert_eq!(TruncatedSeries::zero(3).geom_inverse().unwrap(), TruncatedSeries::one(3));
        assert!(TruncatedSeries::one(3).geom_inverse().is_err());
        // Sequences of unlabeled binary trees by total leaves.
        let u = TruncatedSeries::from_integers(5, &[0, 1, 1, 1, 2, 3]);
        assert_eq!(u.geom_inverse().unwrap().to_integers().unwrap(), ints(&[1, 1, 2, 4, 9, 20]));
    }

    #[test]
    fn sequences_of_trees_by_brute_force() {
        let u = [0i64, 1, 1, 1, 2, 3, 6];
        // Ordered tuples of trees: sum over compositions of n of the product of counts.
        let mut seq = vec![0i64; 7];
        seq[0] = 1;
        for n in 1..=6 {
            for k in 1..=n {
                for c in crate::comb::compositions(n, k) {
                    seq[n] += c.iter().map(|&p| u[p]).product::<i64>();
                }
            }
        }
        let h = TruncatedSeries::from_integers(6, &u).geom_inverse().unwrap();
        assert_eq!(h.to_integers().unwrap(), ints(&seq));
    }

    #[test]
    fn squares_substitution() {
        let t = TruncatedSeries::t(4);
        assert_eq!(t.substitute_t_squared(), TruncatedSeries::monomial(4, 2, BigRational::one()));
        let f = TruncatedSeries::from_integers(4, &[1, 1, 3]);
        assert_eq!(f.substitute_t_squared().to_integers().unwrap(), ints(&[1, 0, 1, 0, 3]));
        let u = TruncatedSeries::from_integers(8, &[0, 1, 1, 1, 2]);
        assert_eq!(u.substitute_t_squared().to_integers().unwrap(), ints(&[0, 0, 1, 0, 1, 0, 1, 0, 2]));
    }

    #[test]
    fn fixed_points() {
        // U = t + (U² + U(t²))/2
        let u = fixed_point_solve(8, |f| {
            let t = TruncatedSeries::t(f.order());
            t.add(&f.square().add(&f.substitute_t_squared()).half())
        })
        .unwrap();
        assert_eq!(u.to_integers().unwrap(), ints(&[0, 1, 1, 1, 2, 3, 6, 11, 23]));
        // Labeled: 𝔘 = t + 𝔘²/2
        let l = fixed_point_solve(5, |f| TruncatedSeries::t(f.order()).add(&f.square().half())).unwrap();
        assert_eq!(l.egf_counts().unwrap(), ints(&[0, 1, 1, 3, 15, 105]));
        // F = t + F²: Catalan numbers shifted by one.
        let c = fixed_point_solve(5, |f| TruncatedSeries::t(f.order()).add(&f.square())).unwrap();
        assert_eq!(c.to_integers().unwrap(), ints(&[0, 1, 1, 2, 5, 14]));
    }

    #[test]
    fn non_contractive_update_diverges() {
        let err = fixed_point_solve(4, |f| f.scale_int(2).add(&TruncatedSeries::one(f.order())));
        assert!(matches!(err, Err(GalledError::Divergence { .. })));
    }

    #[test]
    fn bivariate_basics() {
        let t = BivariateSeries::t(6, 3);
        let tu = t.shift_by_u();
        assert_eq!(tu.coeff(1, 1), r(1, 1));
        let h = tu.geom_inverse().unwrap();
        for m in 0..=3 {
            assert_eq!(h.coeff(m, m), r(1, 1));
        }
        let sq = tu.substitute_squares();
        assert_eq!(sq.coeff(2, 2), r(1, 1));
        assert_eq!(tu.mul(&tu).coeff(2, 2), r(1, 1));
        assert_eq!(h.sum_over_u().to_integers().unwrap(), ints(&[1, 1, 1, 1, 0, 0, 0]));
    }

    #[test]
    fn dyadic_coefficients_stay_reduced() {
        let l = fixed_point_solve(12, |f| TruncatedSeries::t(f.order()).add(&f.square().half())).unwrap();
        // c_n = C_{n-1}/2^{n-1}: the common denominator is a power of two.
        let den = l.denominator();
        assert!(den <= &BigInt::from(2048) && (den & (den - 1u32)).is_zero());
    }

    fn series_strategy() -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec(-20i64..20, 1..12)
            .prop_map(|mut v| {
                v[0] = 0;
                TruncatedSeries::from_integers(10, &v)
            })
    }

    proptest! {
        #[test]
        fn geom_inverse_is_inverse(f in series_strategy()) {
            let h = f.geom_inverse().unwrap();
            let one_minus = TruncatedSeries::one(10).sub(&f);
            prop_assert_eq!(h.mul(&one_minus), TruncatedSeries::one(10));
        }

        #[test]
        fn squaring_commutes_with_substitution(f in series_strategy()) {
            let lhs = f.square().substitute_t_squared();
            let s = f.substitute_t_squared();
            prop_assert_eq!(lhs, s.square());
        }

        #[test]
        fn ring_laws(a in series_strategy(), b in series_strategy(), c in series_strategy()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            let half = a.half();
            prop_assert_eq!(half.add(&half), a.clone());
            prop_assert_eq!(a.pow(3), a.mul(&a).mul(&a));
        }

        #[test]
        fn bivariate_inverse(v in proptest::collection::vec(-5i64..5, 12)) {
            let mut f = BivariateSeries::zero(5, 2);
            for m in 0..=2 {
                let mut c = v[4 * m..4 * m + 4].to_vec();
                if m == 0 { c[0] = 0; }
                f.slices[m] = TruncatedSeries::from_integers(5, &c);
            }
            let h = f.geom_inverse().unwrap();
            let one_minus = BivariateSeries::one(5, 2).sub(&f);
            prop_assert_eq!(h.mul(&one_minus), BivariateSeries::one(5, 2));
        }
    }
}
