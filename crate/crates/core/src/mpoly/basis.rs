use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::exactlin::Field;

/// Number of monomials of total `degree` in `nvars` variables, i.e.
/// `C(degree + nvars - 1, nvars - 1)`; zero for negative degree.
pub fn monomial_count(nvars: usize, degree: i64) -> usize {
    assert!(nvars >= 1, "at least one variable is required");
    if degree < 0 {
        return 0;
    }
    let k = nvars as u128 - 1;
    let n = degree as u128 + k;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc as usize
}

/// An exponent vector.
///
/// Ordered by total degree first, then lexicographically descending, so that
/// within one degree `X_0^d` is the smallest element (it comes first).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Value at a point, given per-variable power tables.
    pub(crate) fn eval_with_powers(&self, field: Field, powers: &[Vec<u32>]) -> u32 {
        self.0
            .iter()
            .enumerate()
            .fold(1, |acc, (i, &e)| field.mul(acc, powers[i][e as usize]))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            match e {
                1 => write!(f, "X{i}")?,
                _ => write!(f, "X{i}^{e}")?,
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All monomials of one degree in canonical order, with an index lookup.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    nvars: usize,
    degree: i32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: i32) -> Self {
        assert!(nvars >= 1);
        let mut monomials = Vec::with_capacity(monomial_count(nvars, degree as i64));
        if degree >= 0 {
            let mut current = vec![0u32; nvars];
            fill(&mut current, 0, degree as u32, &mut monomials);
        }
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis {
            nvars,
            degree,
            monomials,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn degree(&self) -> i32 {
        self.degree
    }
    pub fn len(&self) -> usize {
        self.monomials.len()
    }
    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Values of every basis monomial at `point`.
    pub fn evaluate_all(&self, field: Field, point: &[u32]) -> Vec<u32> {
        let powers = power_table(field, point, self.degree.max(0) as usize);
        self.monomials
            .iter()
            .map(|m| m.eval_with_powers(field, &powers))
            .collect()
    }

    /// For each basis monomial, the index of its product with `X_var` in
    /// `target` (which must have degree one higher).
    pub fn shift_map(&self, var: usize, target: &MonomialBasis) -> Vec<usize> {
        assert_eq!(target.degree, self.degree + 1);
        let x = Monomial::var(self.nvars, var);
        self.monomials
            .iter()
            .map(|m| target.index[&m.mul(&x)])
            .collect()
    }
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(Monomial(current.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(current, pos + 1, remaining - e, out);
    }
    current[pos] = 0;
}

pub(crate) fn power_table(field: Field, point: &[u32], max_exp: usize) -> Vec<Vec<u32>> {
    point
        .iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(max_exp + 1);
            let mut acc = 1;
            for _ in 0..=max_exp {
                row.push(acc);
                acc = field.mul(acc, x);
            }
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(monomial_count(4, 3), 20);
        assert_eq!(monomial_count(3, 0), 1);
        assert_eq!(monomial_count(3, -2), 0);
        assert_eq!(monomial_count(4, 14), 680);
        assert_eq!(monomial_count(4, 15), 816);
        assert_eq!(monomial_count(1, 9), 1);
    }

    #[test]
    fn basis_order_is_canonical() {
        let b = MonomialBasis::new(3, 2);
        let exps: Vec<&[u32]> = b.monomials().iter().map(|m| m.exponents()).collect();
        assert_eq!(
            exps,
            vec![
                &[2, 0, 0][..],
                &[1, 1, 0],
                &[1, 0, 1],
                &[0, 2, 0],
                &[0, 1, 1],
                &[0, 0, 2]
            ]
        );
        for (n, d) in [(1, 4), (2, 5), (4, 6), (6, 3)] {
            let b = MonomialBasis::new(n, d);
            assert_eq!(b.len(), monomial_count(n, d as i64));
            assert!(b.monomials().windows(2).all(|w| w[0] < w[1]));
        }
        assert!(MonomialBasis::new(3, -1).is_empty());
    }

    #[test]
    fn shift_map_lands_on_products() {
        let lo = MonomialBasis::new(3, 2);
        let hi = MonomialBasis::new(3, 3);
        let map = lo.shift_map(1, &hi);
        for (i, &j) in map.iter().enumerate() {
            assert_eq!(
                hi.monomials()[j],
                lo.monomials()[i].mul(&Monomial::var(3, 1))
            );
        }
    }
}
