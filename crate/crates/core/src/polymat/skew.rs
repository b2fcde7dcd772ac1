//! Skew-symmetric matrices of linear forms and their pfaffians.

use rand::Rng;
use sha2::{Digest, Sha256};

use super::{pfaffian_by_expansion, GradedMatrix, PolyConfig, Symmetry};
use crate::error::{Error, Result};
use crate::exactlin::{Field, ScalarMatrix};
use crate::mpoly::{interpolate_many, HomogeneousForm};

/// Pfaffian of a numeric skew matrix by skew Gaussian elimination, O(n³).
pub fn pfaffian_numeric(a: &ScalarMatrix) -> Result<u32> {
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
    let f = a.field();
    let mut c = a.clone();
    let mut pf = 1u32;
    for k in (0..n).step_by(2) {
        let Some(j) = (k + 1..n).find(|&j| c[(k, j)] != 0) else {
            return Ok(0);
        };
        if j != k + 1 {
            swap_index(&mut c, j, k + 1);
            pf = f.neg(pf);
        }
        let a_kk1 = c[(k, k + 1)];
        pf = f.mul(pf, a_kk1);
        let inv = f.inv(a_kk1);
        for i in k + 2..n {
            let (ui, vi) = (c[(k, i)], c[(k + 1, i)]);
            for j in k + 2..n {
                let (uj, vj) = (c[(k, j)], c[(k + 1, j)]);
                let cross = f.sub(f.mul(vi, uj), f.mul(ui, vj));
                c[(i, j)] = f.add(c[(i, j)], f.mul(cross, inv));
            }
        }
    }
    Ok(pf)
}

fn swap_index(c: &mut ScalarMatrix, a: usize, b: usize) {
    c.swap_rows(a, b);
    for i in 0..c.rows() {
        let t = c[(i, a)];
        c[(i, a)] = c[(i, b)];
        c[(i, b)] = t;
    }
}

/// Position of the pair `(i, j)`, `i < j`, in the order (0,1), (0,2), ...,
/// (0,n-1), (1,2), ...
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    assert!(i < j && j < n, "pair must satisfy i < j < n");
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// `Σ x_k A_k` with each `A_k` skew.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSkewMatrix {
    field: Field,
    size: usize,
    coeffs: Vec<ScalarMatrix>,
}

/// Submaximal pfaffians `P_ij` (rows and columns `i`, `j` deleted), in
/// [`pair_index`] order.
#[derive(Clone, Debug)]
pub struct SubPfaffians {
    pub size: usize,
    pub forms: Vec<HomogeneousForm>,
    pub points_used: usize,
    pub rejected: usize,
}

impl SubPfaffians {
    pub fn get(&self, i: usize, j: usize) -> &HomogeneousForm {
        &self.forms[pair_index(self.size, i, j)]
    }
}

impl LinearSkewMatrix {
    pub fn new(field: Field, coeffs: Vec<ScalarMatrix>) -> Result<Self> {
        let size = coeffs.first().map_or(0, ScalarMatrix::rows);
        for a in &coeffs {
            if a.field() != field {
                return Err(Error::FieldMismatch);
            }
            if a.rows() != size || a.cols() != size {
                return Err(Error::SizeMismatch("coefficient matrices differ in shape".into()));
            }
            if !a.is_skew() {
                return Err(Error::NotSkew);
            }
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("at least one variable required".into()));
        }
        Ok(LinearSkewMatrix {
            field,
            size,
            coeffs,
        })
    }

    /// Uniform random coefficients, drawn pair by pair (`i < j`) and, within
    /// a pair, variable by variable.
    pub fn random<R: Rng + ?Sized>(field: Field, size: usize, nvars: usize, rng: &mut R) -> Self {
        let mut coeffs = vec![ScalarMatrix::zeros(field, size, size); nvars];
        for i in 0..size {
            for j in i + 1..size {
                for a in coeffs.iter_mut() {
                    let v = field.random(rng);
                    a[(i, j)] = v;
                    a[(j, i)] = field.neg(v);
                }
            }
        }
        LinearSkewMatrix {
            field,
            size,
            coeffs,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn size(&self) -> usize {
        self.size
    }
    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }
    pub fn coefficients(&self) -> &[ScalarMatrix] {
        &self.coeffs
    }

    pub fn evaluate(&self, point: &[u32]) -> ScalarMatrix {
        assert_eq!(point.len(), self.nvars(), "point length must equal nvars");
        let mut out = ScalarMatrix::zeros(self.field, self.size, self.size);
        for (a, &x) in self.coeffs.iter().zip(point) {
            if x != 0 {
                out.add_scaled(x, a);
            }
        }
        out
    }

    pub fn to_graded(&self) -> GradedMatrix {
        let nv = self.nvars();
        GradedMatrix::from_fn(
            self.field,
            nv,
            vec![0; self.size],
            vec![-1; self.size],
            Symmetry::Skew,
            |i, j| {
                let c: Vec<u32> = self.coeffs.iter().map(|a| a[(i, j)]).collect();
                HomogeneousForm::linear(self.field, &c)
            },
        )
        .expect("skew linear matrix is valid")
    }

    pub fn from_graded(m: &GradedMatrix) -> Result<Self> {
        if m.symmetry() != Symmetry::Skew {
            return Err(Error::NotSkew);
        }
        if !m.is_linear() {
            return Err(Error::NotLinear);
        }
        let (n, nv, f) = (m.nrows(), m.nvars(), m.field());
        let mut coeffs = vec![ScalarMatrix::zeros(f, n, n); nv];
        for i in 0..n {
            for j in 0..n {
                for (k, a) in coeffs.iter_mut().enumerate() {
                    a[(i, j)] = m.entry(i, j).coeff(&crate::mpoly::Monomial::var(nv, k));
                }
            }
        }
        Self::new(f, coeffs)
    }

    /// SHA-256 over the modulus, shape and coefficients (little-endian u32s).
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.field.modulus().to_le_bytes());
        h.update((self.size as u32).to_le_bytes());
        h.update((self.nvars() as u32).to_le_bytes());
        for a in &self.coeffs {
            for v in a.data() {
                h.update(v.to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }

    /// All submaximal pfaffians at once, interpolated from
    /// `P_ij(x) = (-1)^(i+j) pf(A(x)) (A(x)^-1)_ij`. Points where `pf`
    /// vanishes are rejected.
    pub fn submaximal_pfaffians(&self, seed: u64, config: &PolyConfig) -> Result<SubPfaffians> {
        let n = self.size;
        if n < 4 || n % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "submaximal pfaffians need even size at least 4, got {n}"
            )));
        }
        let f = self.field;
        let degree = (n / 2 - 1) as i32;
        let pairs = n * (n - 1) / 2;
        let out = interpolate_many(
            f,
            self.nvars(),
            degree,
            pairs,
            seed,
            &config.interpolation,
            |pt| {
                let a = self.evaluate(pt);
                let pf = pfaffian_numeric(&a).expect("skew by construction");
                if pf == 0 {
                    return None;
                }
                let inv = a.invert().ok()?;
                let mut vals = Vec::with_capacity(pairs);
                for i in 0..n {
                    for j in i + 1..n {
                        vals.push(f.mul(f.sign(i + j), f.mul(pf, inv[(i, j)])));
                    }
                }
                Some(vals)
            },
        )?;
        Ok(SubPfaffians {
            size: n,
            forms: out.forms,
            points_used: out.points_used,
            rejected: out.rejected,
        })
    }

    /// Reference computation: delete rows and columns and expand.
    pub fn submaximal_pfaffians_by_deletion(&self) -> Result<Vec<HomogeneousForm>> {
        let m = self.to_graded();
        let n = self.size;
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let keep: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
                out.push(pfaffian_by_expansion(&m.submatrix(&keep, &keep)?)?);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymat::pfaffian_numeric_by_expansion;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf() -> Field {
        Field::default_prime()
    }

    #[test]
    fn pair_order() {
        let n = 5;
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(pair_index(n, i, j), k);
                k += 1;
            }
        }
    }

    #[test]
    fn pfaffian_errors() {
        let a = ScalarMatrix::from_rows(gf(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(pfaffian_numeric(&a), Err(Error::NotSkew));
        assert_eq!(
            pfaffian_numeric(&ScalarMatrix::zeros(gf(), 3, 3)),
            Err(Error::OddSize(3))
        );
        assert_eq!(
            pfaffian_numeric(&ScalarMatrix::zeros(gf(), 2, 3)),
            Err(Error::NotSquare)
        );
        assert_eq!(pfaffian_numeric(&ScalarMatrix::zeros(gf(), 4, 4)), Ok(0));
    }

    #[test]
    fn pivoting_needed() {
        // a01 = 0 forces a swap.
        let a = ScalarMatrix::from_rows(
            gf(),
            &[
                vec![0, 0, 3, 5],
                vec![0, 0, 7, 11],
                vec![-3, -7, 0, 0],
                vec![-5, -11, 0, 0],
            ],
        );
        assert_eq!(pfaffian_numeric(&a).unwrap(), pfaffian_numeric_by_expansion(&a).unwrap());
    }

    proptest! {
        #[test]
        fn elimination_matches_expansion(seed in any::<u64>(), half in 0usize..6, sparse in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut a = ScalarMatrix::random_skew(gf(), 2 * half, &mut rng);
            if sparse {
                for i in 0..2 * half {
                    for j in i + 1..2 * half {
                        if rand::Rng::gen_bool(&mut rng, 0.6) {
                            a[(i, j)] = 0;
                            a[(j, i)] = 0;
                        }
                    }
                }
            }
            prop_assert_eq!(pfaffian_numeric(&a).unwrap(), pfaffian_numeric_by_expansion(&a).unwrap());
        }
    }

    #[test]
    fn graded_round_trip_and_hash() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = LinearSkewMatrix::random(gf(), 6, 4, &mut rng);
        let g = a.to_graded();
        assert!(g.is_linear());
        assert_eq!(LinearSkewMatrix::from_graded(&g).unwrap(), a);
        let b = LinearSkewMatrix::random(gf(), 6, 4, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a.content_hash(), b.content_hash());
        assert_eq!(a.content_hash().len(), 64);
        let c = LinearSkewMatrix::random(gf(), 6, 4, &mut ChaCha8Rng::seed_from_u64(2));
        assert_ne!(a.content_hash(), c.content_hash());
    }

    #[test]
    fn inverse_identity_matches_deletion() {
        for (n, seed) in [(4, 1u64), (6, 2), (6, 3), (8, 4)] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = LinearSkewMatrix::random(gf(), n, 3, &mut rng);
            let fast = a.submaximal_pfaffians(seed, &PolyConfig::default()).unwrap();
            let slow = a.submaximal_pfaffians_by_deletion().unwrap();
            assert_eq!(fast.forms, slow, "size {n}");
            assert_eq!(fast.get(0, 1), &slow[0]);
        }
    }

    #[test]
    fn submaximal_requires_even_size_at_least_four() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [2, 5] {
            let a = LinearSkewMatrix::random(gf(), n, 3, &mut rng);
            assert!(matches!(
                a.submaximal_pfaffians(0, &PolyConfig::default()),
                Err(Error::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn degenerate_pencil_is_reported() {
        // Rank 2 in every specialization: pf vanishes identically.
        let mut a0 = ScalarMatrix::zeros(gf(), 4, 4);
        a0[(0, 1)] = 1;
        a0[(1, 0)] = gf().neg(1);
        let a = LinearSkewMatrix::new(gf(), vec![a0.clone(), a0.scale(2), a0.scale(3)]).unwrap();
        assert!(matches!(
            a.submaximal_pfaffians(0, &PolyConfig::default()),
            Err(Error::DegeneratePencil { .. })
        ));
    }
}
