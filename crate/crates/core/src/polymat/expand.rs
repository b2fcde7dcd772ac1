//! Subset expansions of determinants and pfaffians. Exponential in the
//! size; used for small matrices and as reference values in tests.

use std::collections::HashMap;

use super::{GradedMatrix, Symmetry};
use crate::error::{Error, Result};
use crate::exactlin::ScalarMatrix;
use crate::mpoly::HomogeneousForm;

fn accumulate(slot: &mut Option<HomogeneousForm>, term: HomogeneousForm) -> Result<()> {
    if term.is_zero() {
        return Ok(());
    }
    *slot = Some(match slot.take() {
        Some(acc) => acc.add(&term)?,
        None => term,
    });
    Ok(())
}

/// Determinant by dynamic programming over the set of used columns.
pub fn determinant_by_expansion(m: &GradedMatrix) -> Result<HomogeneousForm> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    let n = m.nrows();
    assert!(n < 24, "expansion is exponential in the size");
    let field = m.field();
    let mut dp: Vec<Option<HomogeneousForm>> = vec![None; 1 << n];
    dp[0] = Some(HomogeneousForm::constant(field, m.nvars(), 1));
    for mask in 0usize..(1 << n) {
        let Some(partial) = dp[mask].take() else {
            continue;
        };
        let row = mask.count_ones() as usize;
        if row == n {
            dp[mask] = Some(partial);
            continue;
        }
        for c in 0..n {
            if mask & (1 << c) != 0 || m.entry(row, c).is_zero() {
                continue;
            }
            let inversions = (mask >> (c + 1)).count_ones() as usize;
            let term = partial.mul(m.entry(row, c))?.scale(field.sign(inversions));
            accumulate(&mut dp[mask | (1 << c)], term)?;
        }
    }
    Ok(dp[(1 << n) - 1]
        .take()
        .unwrap_or_else(|| HomogeneousForm::zero(field, m.nvars(), m.det_degree())))
}

/// Pfaffian by expansion along the first remaining row.
pub fn pfaffian_by_expansion(m: &GradedMatrix) -> Result<HomogeneousForm> {
    if m.symmetry() != Symmetry::Skew {
        return Err(Error::NotSkew);
    }
    let n = m.nrows();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    assert!(n < 24, "expansion is exponential in the size");
    let mut memo = HashMap::new();
    let full = (1usize << n) - 1;
    Ok(pf_rec(m, full, &mut memo)?
        .unwrap_or_else(|| HomogeneousForm::zero(m.field(), m.nvars(), m.det_degree() / 2)))
}

fn pf_rec(
    m: &GradedMatrix,
    mask: usize,
    memo: &mut HashMap<usize, Option<HomogeneousForm>>,
) -> Result<Option<HomogeneousForm>> {
    if mask == 0 {
        return Ok(Some(HomogeneousForm::constant(m.field(), m.nvars(), 1)));
    }
    if let Some(v) = memo.get(&mask) {
        return Ok(v.clone());
    }
    let first = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << first);
    let mut acc = None;
    let mut t = 0;
    for j in first + 1..m.nrows() {
        if rest & (1 << j) == 0 {
            continue;
        }
        t += 1;
        let a = m.entry(first, j);
        if a.is_zero() {
            continue;
        }
        if let Some(sub) = pf_rec(m, rest & !(1 << j), memo)? {
            let term = a.mul(&sub)?.scale(m.field().sign(t + 1));
            accumulate(&mut acc, term)?;
        }
    }
    memo.insert(mask, acc.clone());
    Ok(acc)
}

/// Pfaffian of a numeric skew matrix by expansion.
pub fn pfaffian_numeric_by_expansion(a: &ScalarMatrix) -> Result<u32> {
    if !a.is_square() {
        return Err(Error::NotSquare);
    }
    if !a.is_skew() {
        return Err(Error::NotSkew);
    }
    let n = a.rows();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    assert!(n < 24, "expansion is exponential in the size");
    let f = a.field();
    let mut table = vec![0u32; 1 << n];
    table[0] = 1;
    // Masks of even popcount in increasing order; sub-masks are smaller.
    for mask in 1usize..(1 << n) {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let first = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << first);
        let mut acc = 0;
        let mut t = 0;
        for j in first + 1..n {
            if rest & (1 << j) == 0 {
                continue;
            }
            t += 1;
            let term = f.mul(a[(first, j)], table[rest & !(1 << j)]);
            acc = f.add(acc, f.mul(f.sign(t + 1), term));
        }
        table[mask] = acc;
    }
    Ok(table[(1 << n) - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf() -> Field {
        Field::default_prime()
    }

    #[test]
    fn numeric_pfaffian_squares_to_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in [0, 2, 4, 6, 8] {
            let a = ScalarMatrix::random_skew(gf(), n, &mut rng);
            let pf = pfaffian_numeric_by_expansion(&a).unwrap();
            assert_eq!(gf().mul(pf, pf), a.determinant().unwrap());
        }
    }

    #[test]
    fn small_pfaffians() {
        let a = ScalarMatrix::from_rows(gf(), &[vec![0, 5], vec![-5, 0]]);
        assert_eq!(pfaffian_numeric_by_expansion(&a).unwrap(), 5);
        // pf = a01 a23 - a02 a13 + a03 a12
        let a = ScalarMatrix::from_rows(
            gf(),
            &[
                vec![0, 2, 3, 5],
                vec![-2, 0, 7, 11],
                vec![-3, -7, 0, 13],
                vec![-5, -11, -13, 0],
            ],
        );
        let expect = gf().from_i64(2 * 13 - 3 * 11 + 5 * 7);
        assert_eq!(pfaffian_numeric_by_expansion(&a).unwrap(), expect);
    }

    #[test]
    fn determinant_matches_numeric_at_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = GradedMatrix::from_fn(gf(), 3, vec![1, 0, 0, 2], vec![0, -1, -1, 0], Symmetry::General, |i, j| {
            let d = [1, 0, 0, 2][i] - [0, -1, -1, 0][j];
            if d < 0 {
                HomogeneousForm::zero(gf(), 3, d)
            } else {
                HomogeneousForm::random(gf(), 3, d, &mut rng)
            }
        })
        .unwrap();
        let det = determinant_by_expansion(&m).unwrap();
        assert_eq!(det.degree(), m.det_degree());
        for pt in [[1, 2, 3], [4, 0, 31990], [17, 23, 5]] {
            assert_eq!(det.evaluate(&pt), m.evaluate(&pt).determinant().unwrap());
        }
    }
}
