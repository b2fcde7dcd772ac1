//! Explicit matrices: cyclic determinantal matrices and Fermat
//! hypersurfaces, block pfaffians, pullback by squares, the bordered
//! symmetric shape of plane curves, and random matrices of a given shape.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::mpoly::HomogeneousForm;
use crate::polymat::{GradedMatrix, Symmetry};

/// The `ℓ×ℓ` matrix with `F_i` on the diagonal, `G_i` at `(i, i+1)` and
/// `G_ℓ` in the lower-left corner:
///
/// ```text
/// F_1 G_1  0  ...  0
///  0  F_2 G_2 ...  0
/// ...
/// G_ℓ  0  ...  0  F_ℓ
/// ```
///
/// Its determinant is `∏F_i + (-1)^(ℓ+1) ∏G_i`. Twists start from `e_1 = 0`
/// and are shifted so that the largest row twist is 0.
pub fn cyclic_matrix(f_list: &[HomogeneousForm], g_list: &[HomogeneousForm]) -> Result<GradedMatrix> {
    let l = f_list.len();
    if g_list.len() != l {
        return Err(Error::DegreeInconsistency(format!(
            "{} diagonal entries but {} off-diagonal entries",
            l,
            g_list.len()
        )));
    }
    if l < 2 {
        return Err(Error::InvalidParameter("cyclic matrix needs at least 2 rows".into()));
    }
    let field = f_list[0].field();
    let nvars = f_list[0].nvars();
    for g in f_list.iter().chain(g_list) {
        if g.field() != field {
            return Err(Error::FieldMismatch);
        }
        if g.nvars() != nvars {
            return Err(Error::VariableCountMismatch {
                expected: nvars,
                found: g.nvars(),
            });
        }
    }
    let mut rows = vec![0i32; l];
    let mut cols = vec![0i32; l];
    for i in 0..l {
        rows[i] = cols[i] + f_list[i].degree();
        if i + 1 < l {
            cols[i + 1] = rows[i] - g_list[i].degree();
        }
    }
    if rows[l - 1] - cols[0] != g_list[l - 1].degree() {
        return Err(Error::DegreeInconsistency(format!(
            "diagonal degrees sum to {}, off-diagonal degrees to {}",
            f_list.iter().map(HomogeneousForm::degree).sum::<i32>(),
            g_list.iter().map(HomogeneousForm::degree).sum::<i32>()
        )));
    }
    let top = *rows.iter().max().expect("l >= 2");
    rows.iter_mut().for_each(|d| *d -= top);
    cols.iter_mut().for_each(|e| *e -= top);
    GradedMatrix::from_fn(field, nvars, rows, cols, Symmetry::General, |i, j| {
        if i == j {
            f_list[i].clone()
        } else if j == (i + 1) % l {
            g_list[i].clone()
        } else {
            HomogeneousForm::zero(field, nvars, 0)
        }
    })
}

/// A Fermat-type determinantal representation and the form it represents.
#[derive(Clone, Debug)]
pub struct FermatMatrix {
    pub matrix: GradedMatrix,
    pub target: HomogeneousForm,
    /// Set when `p | d` in `P³`: the target is then
    /// `X_0(X_0^(d-1) + X_1^(d-1)) + (X_1 + X_2)(X_2^(d-1) + X_3^(d-1))`.
    pub char_p_variant: bool,
}

/// Factors of `X_a^m + X_b^m` over GF(p): one linear factor `X_a - r X_b`
/// per root of `t^m = -1` in GF(p), followed by the remaining cofactor when
/// not every root is rational.
pub fn binomial_factors(field: Field, nvars: usize, a: usize, b: usize, m: u32) -> Vec<HomogeneousForm> {
    assert!(m >= 1 && a < nvars && b < nvars && a != b);
    let p1 = field.modulus() as u64 - 1;
    let k = gcd(2 * m as u64, p1);
    let h = field.pow(field.primitive_root(), p1 / k);
    let minus_one = field.neg(1);
    let mut roots: Vec<u32> = (0..k)
        .map(|s| field.pow(h, s))
        .filter(|&r| field.pow(r, m as u64) == minus_one)
        .collect();
    roots.sort_unstable();

    let xa = HomogeneousForm::var(field, nvars, a);
    let xb = HomogeneousForm::var(field, nvars, b);
    let mut out: Vec<HomogeneousForm> = roots
        .iter()
        .map(|&r| xa.sub(&xb.scale(r)).expect("same ring"))
        .collect();

    // Divide t^m + 1 by (t - r) for each root; coefficients low to high.
    let mut quotient = vec![0u32; m as usize + 1];
    quotient[0] = 1;
    quotient[m as usize] = 1;
    for &r in &roots {
        let deg = quotient.len() - 1;
        let mut next = vec![0u32; deg];
        let mut carry = 0;
        for s in (0..deg).rev() {
            carry = field.add(quotient[s + 1], field.mul(carry, r));
            next[s] = carry;
        }
        quotient = next;
    }
    let q = quotient.len() as u32 - 1;
    if q > 0 {
        let terms = quotient.iter().enumerate().filter(|(_, &c)| c != 0).map(|(s, &c)| {
            let mut e = vec![0u32; nvars];
            e[a] = s as u32;
            e[b] = q - s as u32;
            (e, c)
        });
        out.push(HomogeneousForm::from_terms(field, nvars, q as i32, terms).expect("homogeneous"));
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn product(field: Field, nvars: usize, forms: &[HomogeneousForm]) -> HomogeneousForm {
    forms.iter().fold(HomogeneousForm::constant(field, nvars, 1), |acc, f| {
        acc.mul(f).expect("same ring")
    })
}

/// Cyclic matrix with `det = ∏F + ∏G`, padding the shorter side with ones.
fn balanced_cyclic(
    field: Field,
    nvars: usize,
    mut f_side: Vec<HomogeneousForm>,
    mut g_side: Vec<HomogeneousForm>,
) -> Result<GradedMatrix> {
    let l = f_side.len().max(g_side.len()).max(2);
    let one = HomogeneousForm::constant(field, nvars, 1);
    f_side.resize(l, one.clone());
    g_side.resize(l, one);
    g_side[0] = g_side[0].scale(field.sign(l + 1));
    cyclic_matrix(&f_side, &g_side)
}

/// Determinantal representation of `Σ X_i^d` in `P^n`, `n ∈ {2, 3}`.
///
/// In `P²` the diagonal is `X_0` repeated and the off-diagonal entries are
/// the factors of `X_1^d + X_2^d`. In `P³` the variables split as
/// `(X_0, X_1 | X_2, X_3)`. When `p | d` in `P³` the Fermat surface is
/// singular and the smooth substitute surface is produced instead.
pub fn fermat_matrix(field: Field, n: usize, d: u32) -> Result<FermatMatrix> {
    if d < 1 {
        return Err(Error::InvalidParameter("degree must be positive".into()));
    }
    let nv = n + 1;
    let x = |i| HomogeneousForm::var(field, nv, i);
    let char_p = n == 3 && (d as u64).is_multiple_of(field.modulus() as u64);
    let (f_side, g_side) = match n {
        2 => (vec![x(0); d as usize], binomial_factors(field, nv, 1, 2, d)),
        3 if char_p => {
            let mut f = vec![x(0)];
            f.extend(binomial_factors(field, nv, 0, 1, d - 1));
            let mut g = vec![x(1).add(&x(2))?];
            g.extend(binomial_factors(field, nv, 2, 3, d - 1));
            (f, g)
        }
        3 => (binomial_factors(field, nv, 0, 1, d), binomial_factors(field, nv, 2, 3, d)),
        other => return Err(Error::UnsupportedAmbient(other)),
    };
    let target = product(field, nv, &f_side).add(&product(field, nv, &g_side))?;
    let matrix = balanced_cyclic(field, nv, f_side, g_side)?;
    Ok(FermatMatrix {
        matrix,
        target,
        char_p_variant: char_p,
    })
}

/// `Σ X_i^d` in `nvars` variables.
pub fn fermat_form(field: Field, nvars: usize, d: u32) -> HomogeneousForm {
    (0..nvars).fold(HomogeneousForm::zero(field, nvars, d as i32), |acc, i| {
        acc.add(&HomogeneousForm::var(field, nvars, i).pow(d)).expect("same degree")
    })
}

/// `[[0, N], [-ᵗN, 0]]`, whose pfaffian is `(-1)^(ℓ(ℓ-1)/2) det N` for `N`
/// of size `ℓ`. Twists are `(d, -e)` on rows and `(-d, e)` on columns.
pub fn block_skew_from(n: &GradedMatrix) -> Result<GradedMatrix> {
    if !n.is_square() {
        return Err(Error::NotSquare);
    }
    let l = n.nrows();
    let rows: Vec<i32> = n
        .row_twists()
        .iter()
        .copied()
        .chain(n.col_twists().iter().map(|e| -e))
        .collect();
    let cols: Vec<i32> = n
        .row_twists()
        .iter()
        .map(|d| -d)
        .chain(n.col_twists().iter().copied())
        .collect();
    GradedMatrix::from_fn(n.field(), n.nvars(), rows, cols, Symmetry::Skew, |i, j| {
        match (i < l, j < l) {
            (true, false) => n.entry(i, j - l).clone(),
            (false, true) => n.entry(j, i - l).neg(),
            _ => HomogeneousForm::zero(n.field(), n.nvars(), 0),
        }
    })
}

/// `(-1)^(ℓ(ℓ-1)/2)`, the sign relating `pf(block_skew_from(N))` to `det N`.
pub fn block_skew_sign(l: usize) -> i64 {
    if (l * l.saturating_sub(1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Substitutes `X_i ↦ X_i²` in every entry and doubles the twists.
pub fn pullback_squares(m: &GradedMatrix) -> Result<GradedMatrix> {
    let f = m.field();
    let squares: Vec<HomogeneousForm> = (0..m.nvars())
        .map(|i| HomogeneousForm::var(f, m.nvars(), i).pow(2))
        .collect();
    m.map_entries(
        m.row_twists().iter().map(|d| 2 * d).collect(),
        m.col_twists().iter().map(|e| 2 * e).collect(),
        |e| e.substitute(&squares),
    )
}

/// Random symmetric `(d-2)×(d-2)` matrix in 3 variables: a linear
/// `(d-3)×(d-3)` block bordered by a quadratic column and row, with a cubic
/// corner. Its determinant has degree `d`.
pub fn theta_shape_random<R: Rng + ?Sized>(field: Field, d: u32, rng: &mut R) -> Result<GradedMatrix> {
    let shape = ResolutionShape::theta(d)?;
    random_graded_matrix(field, 3, &shape, rng)
}

/// Twists, symmetry and forced zeros of a presentation matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionShape {
    pub row_twists: Vec<i32>,
    pub col_twists: Vec<i32>,
    pub symmetry: Symmetry,
    /// Positions kept zero in addition to those of negative degree.
    #[serde(default)]
    pub forced_zero: Vec<(usize, usize)>,
}

impl ResolutionShape {
    fn plain(row_twists: Vec<i32>, col_twists: Vec<i32>, symmetry: Symmetry) -> Self {
        ResolutionShape {
            row_twists,
            col_twists,
            symmetry,
            forced_zero: Vec::new(),
        }
    }

    /// `n×n` with linear entries.
    pub fn linear(n: usize) -> Self {
        Self::plain(vec![0; n], vec![-1; n], Symmetry::General)
    }

    pub fn symmetric_linear(n: usize) -> Self {
        Self::plain(vec![0; n], vec![-1; n], Symmetry::Symmetric)
    }

    pub fn skew_linear(n: usize) -> Self {
        Self::plain(vec![0; n], vec![-1; n], Symmetry::Skew)
    }

    /// `e×e` with quadratic entries.
    pub fn quadratic(e: usize) -> Self {
        Self::plain(vec![0; e], vec![-2; e], Symmetry::General)
    }

    /// Presentation `O(-2)^(d-h) → O(-1)^(d-2h) ⊕ O^h` of a plane curve of
    /// degree `d` with `h` sections, for `h ≤ d/2`; for `h > d/2` it is
    /// `O(-2)^(d-h) ⊕ O(-1)^(2h-d) → O^h`.
    pub fn with_sections(d: usize, h: usize) -> Result<Self> {
        if h == 0 || h > d {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= h <= d, got h={h}, d={d}"
            )));
        }
        Ok(if 2 * h <= d {
            let mut rows = vec![-1; d - 2 * h];
            rows.extend(vec![0; h]);
            Self::plain(rows, vec![-2; d - h], Symmetry::General)
        } else {
            let mut cols = vec![-2; d - h];
            cols.extend(vec![-1; 2 * h - d]);
            Self::plain(vec![0; h], cols, Symmetry::General)
        })
    }

    /// The bordered symmetric shape behind [`theta_shape_random`].
    pub fn theta(d: u32) -> Result<Self> {
        if d < 4 {
            return Err(Error::InvalidParameter(format!("theta shape needs d >= 4, got {d}")));
        }
        let k = d as usize - 3;
        let mut rows = vec![-1; k];
        rows.push(0);
        let mut cols = vec![-2; k];
        cols.push(-3);
        Ok(Self::plain(rows, cols, Symmetry::Symmetric))
    }

    pub fn size(&self) -> (usize, usize) {
        (self.row_twists.len(), self.col_twists.len())
    }

    pub fn entry_degree(&self, i: usize, j: usize) -> i32 {
        self.row_twists[i] - self.col_twists[j]
    }

    fn is_forced_zero(&self, i: usize, j: usize) -> bool {
        self.forced_zero
            .iter()
            .any(|&(a, b)| (a, b) == (i, j) || (self.symmetry != Symmetry::General && (b, a) == (i, j)))
    }

    pub fn validate(&self) -> Result<()> {
        let (r, c) = self.size();
        if let Some(&(i, j)) = self.forced_zero.iter().find(|&&(i, j)| i >= r || j >= c) {
            return Err(Error::InvalidParameter(format!(
                "forced zero ({i},{j}) outside a {r}x{c} shape"
            )));
        }
        if self.symmetry != Symmetry::General {
            if r != c {
                return Err(Error::NotSquare);
            }
            let s = self.row_twists.first().zip(self.col_twists.first()).map(|(a, b)| a + b);
            if (0..r).any(|i| Some(self.row_twists[i] + self.col_twists[i]) != s) {
                return Err(Error::IncompatibleTwists(if self.symmetry == Symmetry::Skew {
                    "skew"
                } else {
                    "symmetric"
                }));
            }
        }
        Ok(())
    }
}

/// Uniformly random coefficients at every allowed position. Symmetric and
/// skew shapes sample the upper triangle (row by row) and mirror it.
pub fn random_graded_matrix<R: Rng + ?Sized>(
    field: Field,
    nvars: usize,
    shape: &ResolutionShape,
    rng: &mut R,
) -> Result<GradedMatrix> {
    shape.validate()?;
    let (r, c) = shape.size();
    let mut entries: Vec<Option<HomogeneousForm>> = vec![None; r * c];
    for i in 0..r {
        for j in 0..c {
            let upper = match shape.symmetry {
                Symmetry::General => true,
                Symmetry::Symmetric => j >= i,
                Symmetry::Skew => j > i,
            };
            let deg = shape.entry_degree(i, j);
            if !upper || deg < 0 || shape.is_forced_zero(i, j) {
                continue;
            }
            let e = HomogeneousForm::random(field, nvars, deg, rng);
            if shape.symmetry != Symmetry::General {
                entries[j * c + i] = Some(if shape.symmetry == Symmetry::Skew { e.neg() } else { e.clone() });
            }
            entries[i * c + j] = Some(e);
        }
    }
    let entries = entries
        .into_iter()
        .enumerate()
        .map(|(k, e)| e.unwrap_or_else(|| HomogeneousForm::zero(field, nvars, shape.entry_degree(k / c, k % c))))
        .collect();
    GradedMatrix::new(
        field,
        nvars,
        shape.row_twists.clone(),
        shape.col_twists.clone(),
        shape.symmetry,
        entries,
    )
}
