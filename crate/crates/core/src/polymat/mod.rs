//! Graded polynomial matrices.
//!
//! A [`GradedMatrix`] with row twists `d_i` and column twists `e_j` has its
//! `(i, j)` entry homogeneous of degree `d_i - e_j` (the zero form when that
//! is negative). Its determinant, when nonzero, has degree `Σd_i - Σe_j`. The
//! linear case uses `d_i = 0`, `e_j = -1`.
//!
//! Determinants and pfaffians have two independent routes: subset expansion
//! over forms (small sizes, also the reference for tests) and
//! evaluation/interpolation over random points (any size).

mod expand;
mod skew;
mod text;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{Field, ScalarMatrix};
use crate::mpoly::{interpolate_homogeneous, power_table, HomogeneousForm, InterpolationConfig};

pub use expand::{determinant_by_expansion, pfaffian_by_expansion, pfaffian_numeric_by_expansion};
pub use skew::{pair_index, pfaffian_numeric, LinearSkewMatrix, SubPfaffians};
pub use text::parse_graded_matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    General,
    Symmetric,
    Skew,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::General => "general",
            Symmetry::Symmetric => "symmetric",
            Symmetry::Skew => "skew",
        })
    }
}

impl FromStr for Symmetry {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "general" => Ok(Symmetry::General),
            "symmetric" => Ok(Symmetry::Symmetric),
            "skew" => Ok(Symmetry::Skew),
            other => Err(format!("unknown symmetry tag `{other}`")),
        }
    }
}

/// Strategy knobs for determinants and pfaffians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyConfig {
    /// Largest size handled by expansion for determinants.
    pub det_expansion_max: usize,
    /// Largest size handled by expansion for pfaffians.
    pub pf_expansion_max: usize,
    pub interpolation: InterpolationConfig,
    /// Root seed for sample points. The exact result does not depend on it.
    pub seed: u64,
}

impl Default for PolyConfig {
    fn default() -> Self {
        PolyConfig {
            det_expansion_max: 6,
            pf_expansion_max: 8,
            interpolation: InterpolationConfig::default(),
            seed: 0x5eed_0ff0_7a1e,
        }
    }
}

impl PolyConfig {
    /// Forces the interpolation route at every size.
    pub fn interpolation_only() -> Self {
        PolyConfig {
            det_expansion_max: 0,
            pf_expansion_max: 0,
            ..Self::default()
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct GradedMatrix {
    field: Field,
    nvars: usize,
    row_twists: Vec<i32>,
    col_twists: Vec<i32>,
    symmetry: Symmetry,
    entries: Vec<HomogeneousForm>,
}

impl GradedMatrix {
    /// Validates twists, entry degrees and the symmetry tag. Zero entries are
    /// re-degreed to match the twists; nonzero entries must already match.
    pub fn new(
        field: Field,
        nvars: usize,
        row_twists: Vec<i32>,
        col_twists: Vec<i32>,
        symmetry: Symmetry,
        entries: Vec<HomogeneousForm>,
    ) -> Result<Self> {
        let (rows, cols) = (row_twists.len(), col_twists.len());
        if entries.len() != rows * cols {
            return Err(Error::SizeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let mut fixed = Vec::with_capacity(entries.len());
        for (k, e) in entries.into_iter().enumerate() {
            let (i, j) = (k / cols, k % cols);
            if e.field() != field {
                return Err(Error::FieldMismatch);
            }
            if e.nvars() != nvars {
                return Err(Error::VariableCountMismatch {
                    expected: nvars,
                    found: e.nvars(),
                });
            }
            let expected = row_twists[i] - col_twists[j];
            if e.degree() != expected {
                if !e.is_zero() {
                    return Err(Error::TwistMismatch {
                        row: i,
                        col: j,
                        expected,
                        found: e.degree(),
                    });
                }
                fixed.push(HomogeneousForm::zero(field, nvars, expected));
            } else {
                fixed.push(e);
            }
        }
        let m = GradedMatrix {
            field,
            nvars,
            row_twists,
            col_twists,
            symmetry,
            entries: fixed,
        };
        m.check_symmetry()?;
        Ok(m)
    }

    pub fn from_fn(
        field: Field,
        nvars: usize,
        row_twists: Vec<i32>,
        col_twists: Vec<i32>,
        symmetry: Symmetry,
        mut f: impl FnMut(usize, usize) -> HomogeneousForm,
    ) -> Result<Self> {
        let cols = col_twists.len();
        let entries = (0..row_twists.len() * cols)
            .map(|k| f(k / cols, k % cols))
            .collect();
        Self::new(field, nvars, row_twists, col_twists, symmetry, entries)
    }

    fn check_symmetry(&self) -> Result<()> {
        if self.symmetry == Symmetry::General {
            return Ok(());
        }
        let tag = if self.symmetry == Symmetry::Skew {
            "skew"
        } else {
            "symmetric"
        };
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let n = self.nrows();
        let s0 = self.row_twists[0] + self.col_twists[0];
        if (0..n).any(|i| self.row_twists[i] + self.col_twists[i] != s0) {
            return Err(Error::IncompatibleTwists(tag));
        }
        for i in 0..n {
            if self.symmetry == Symmetry::Skew && !self.entry(i, i).is_zero() {
                return Err(Error::NotSkew);
            }
            for j in i + 1..n {
                let (a, b) = (self.entry(i, j), self.entry(j, i));
                match self.symmetry {
                    Symmetry::Symmetric if a != b => return Err(Error::NotSymmetric),
                    Symmetry::Skew if *b != a.neg() => return Err(Error::NotSkew),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn nrows(&self) -> usize {
        self.row_twists.len()
    }
    pub fn ncols(&self) -> usize {
        self.col_twists.len()
    }
    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }
    pub fn row_twists(&self) -> &[i32] {
        &self.row_twists
    }
    pub fn col_twists(&self) -> &[i32] {
        &self.col_twists
    }
    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }
    pub fn entries(&self) -> &[HomogeneousForm] {
        &self.entries
    }
    pub fn entry(&self, i: usize, j: usize) -> &HomogeneousForm {
        &self.entries[i * self.ncols() + j]
    }
    pub fn entry_degree(&self, i: usize, j: usize) -> i32 {
        self.row_twists[i] - self.col_twists[j]
    }

    /// `Σd_i - Σe_j`, the degree of the determinant.
    pub fn det_degree(&self) -> i32 {
        self.row_twists.iter().sum::<i32>() - self.col_twists.iter().sum::<i32>()
    }

    pub fn is_linear(&self) -> bool {
        (0..self.nrows()).all(|i| (0..self.ncols()).all(|j| self.entry_degree(i, j) == 1))
    }

    /// True iff no entry at a position with `d_i = e_j` is nonzero, i.e. the
    /// matrix has no unit entries.
    pub fn is_minimal(&self) -> bool {
        (0..self.nrows()).all(|i| {
            (0..self.ncols())
                .all(|j| self.row_twists[i] != self.col_twists[j] || self.entry(i, j).is_zero())
        })
    }

    pub fn transpose(&self) -> Result<Self> {
        // deg m_ji = d_j - e_i, so the transpose has twists (-e, -d).
        let rows: Vec<i32> = self.col_twists.iter().map(|e| -e).collect();
        let cols: Vec<i32> = self.row_twists.iter().map(|d| -d).collect();
        Self::from_fn(self.field, self.nvars, rows, cols, self.symmetry, |i, j| {
            self.entry(j, i).clone()
        })
    }

    /// Keeps the listed rows and columns; the tag survives only for
    /// principal selections.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        let symmetry = if rows == cols {
            self.symmetry
        } else {
            Symmetry::General
        };
        Self::from_fn(
            self.field,
            self.nvars,
            rows.iter().map(|&i| self.row_twists[i]).collect(),
            cols.iter().map(|&j| self.col_twists[j]).collect(),
            symmetry,
            |i, j| self.entry(rows[i], cols[j]).clone(),
        )
    }

    /// Applies `f` to every entry with new twists.
    pub fn map_entries(
        &self,
        row_twists: Vec<i32>,
        col_twists: Vec<i32>,
        mut f: impl FnMut(&HomogeneousForm) -> Result<HomogeneousForm>,
    ) -> Result<Self> {
        let entries = self.entries.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        let nvars = entries.first().map_or(self.nvars, HomogeneousForm::nvars);
        Self::new(self.field, nvars, row_twists, col_twists, self.symmetry, entries)
    }

    /// Numeric matrix of entry values at `point`.
    pub fn evaluate(&self, point: &[u32]) -> ScalarMatrix {
        assert_eq!(point.len(), self.nvars, "point length must equal nvars");
        let max_deg = self
            .entries
            .iter()
            .filter(|e| !e.is_zero())
            .map(|e| e.degree())
            .max()
            .unwrap_or(0)
            .max(0) as usize;
        let powers = power_table(self.field, point, max_deg);
        let data = self
            .entries
            .iter()
            .map(|e| e.evaluate_with_powers(&powers))
            .collect();
        ScalarMatrix::from_data(self.field, self.nrows(), self.ncols(), data)
    }

    pub fn determinant(&self, config: &PolyConfig) -> Result<HomogeneousForm> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let degree = self.det_degree();
        if self.nrows() == 0 {
            return Ok(HomogeneousForm::constant(self.field, self.nvars, 1));
        }
        if degree < 0 {
            return Ok(HomogeneousForm::zero(self.field, self.nvars, degree));
        }
        if self.nrows() <= config.det_expansion_max {
            return determinant_by_expansion(self);
        }
        interpolate_homogeneous(
            self.field,
            |pt| {
                self.evaluate(pt)
                    .determinant()
                    .expect("square by construction")
            },
            self.nvars,
            degree,
            config.seed,
            &config.interpolation,
        )
    }

    /// Pfaffian of a skew matrix, of degree `(Σd_i - Σe_j) / 2`.
    pub fn pfaffian(&self, config: &PolyConfig) -> Result<HomogeneousForm> {
        if self.symmetry != Symmetry::Skew {
            return Err(Error::NotSkew);
        }
        let n = self.nrows();
        if n % 2 == 1 {
            return Err(Error::OddSize(n));
        }
        if n == 0 {
            return Ok(HomogeneousForm::constant(self.field, self.nvars, 1));
        }
        let degree = self.det_degree() / 2;
        if degree < 0 {
            return Ok(HomogeneousForm::zero(self.field, self.nvars, degree));
        }
        if n <= config.pf_expansion_max {
            return pfaffian_by_expansion(self);
        }
        interpolate_homogeneous(
            self.field,
            |pt| pfaffian_numeric(&self.evaluate(pt)).expect("skew by construction"),
            self.nvars,
            degree,
            config.seed,
            &config.interpolation,
        )
    }

    /// `A · M · ᵗA` for an invertible scalar `A`, keeping twists and tag.
    /// `A` may only mix rows whose twists agree.
    pub fn congruence_transform(&self, a: &ScalarMatrix) -> Result<Self> {
        if self.symmetry == Symmetry::General {
            return Err(Error::SymmetryRequired);
        }
        let n = self.nrows();
        if a.rows() != n || a.cols() != n {
            return Err(Error::SizeMismatch(format!(
                "transform is {}x{}, matrix is {n}x{n}",
                a.rows(),
                a.cols()
            )));
        }
        if a.determinant()? == 0 {
            return Err(Error::Singular);
        }
        // (A·M)_{ij} = Σ_k a_ik m_kj, then (A·M·ᵗA)_{ij} = Σ_l (A·M)_{il} a_jl.
        let left = GradedProduct::combine(self, n, n, |i, j| {
            (0..n).map(move |k| (a[(i, k)], k, j)).collect()
        })?;
        let both = GradedProduct::combine_from(&left, self, n, n, |i, j| {
            (0..n).map(move |l| (a[(j, l)], i, l)).collect()
        })?;
        Self::new(
            self.field,
            self.nvars,
            self.row_twists.clone(),
            self.col_twists.clone(),
            self.symmetry,
            both,
        )
    }
}

/// Scalar linear combinations of matrix entries with degree checking.
struct GradedProduct;

impl GradedProduct {
    fn combine(
        m: &GradedMatrix,
        rows: usize,
        cols: usize,
        terms: impl Fn(usize, usize) -> Vec<(u32, usize, usize)>,
    ) -> Result<Vec<HomogeneousForm>> {
        Self::combine_from(&m.entries, m, rows, cols, terms)
    }

    fn combine_from(
        source: &[HomogeneousForm],
        shape: &GradedMatrix,
        rows: usize,
        cols: usize,
        terms: impl Fn(usize, usize) -> Vec<(u32, usize, usize)>,
    ) -> Result<Vec<HomogeneousForm>> {
        let width = shape.ncols();
        let mut out = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let target = shape.entry_degree(i, j);
                let mut acc = HomogeneousForm::zero(shape.field, shape.nvars, target);
                for (c, k, l) in terms(i, j) {
                    let e = &source[k * width + l];
                    if c == 0 || e.is_zero() {
                        continue;
                    }
                    if e.degree() != target {
                        return Err(Error::DegreeMismatch {
                            expected: target,
                            found: e.degree(),
                        });
                    }
                    acc = acc.add(&e.scale(c))?;
                }
                out.push(acc);
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepresentationKind {
    Det,
    Pf,
}

impl FromStr for RepresentationKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "det" => Ok(RepresentationKind::Det),
            "pf" => Ok(RepresentationKind::Pf),
            other => Err(format!("unknown representation kind `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub ok: bool,
    /// `λ` with `det M = λ·F` (or `pf M = λ·F`) when `ok`.
    pub scalar: Option<u32>,
}

/// Checks that `det M` (or `pf M`) is a nonzero multiple of `target`.
pub fn verify_representation(
    m: &GradedMatrix,
    target: &HomogeneousForm,
    kind: RepresentationKind,
    config: &PolyConfig,
) -> Result<Verification> {
    if target.is_zero() {
        return Err(Error::InvalidParameter(
            "target form must be nonzero".into(),
        ));
    }
    let value = match kind {
        RepresentationKind::Det => m.determinant(config)?,
        RepresentationKind::Pf => m.pfaffian(config)?,
    };
    let scalar = value.ratio_to(target);
    Ok(Verification {
        ok: scalar.is_some(),
        scalar,
    })
}

impl fmt::Debug for GradedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "GradedMatrix {}x{} ({}, {} vars, {}) d={:?} e={:?}",
            self.nrows(),
            self.ncols(),
            self.symmetry,
            self.nvars,
            self.field,
            self.row_twists,
            self.col_twists
        )?;
        for i in 0..self.nrows() {
            let row: Vec<String> = (0..self.ncols())
                .map(|j| self.entry(i, j).to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf() -> Field {
        Field::default_prime()
    }

    fn x(i: usize) -> HomogeneousForm {
        HomogeneousForm::var(gf(), 3, i)
    }

    fn linear(n: usize, symmetry: Symmetry, mut f: impl FnMut(usize, usize) -> HomogeneousForm) -> GradedMatrix {
        GradedMatrix::from_fn(gf(), 3, vec![0; n], vec![-1; n], symmetry, &mut f).unwrap()
    }

    #[test]
    fn validation() {
        let bad = GradedMatrix::from_fn(gf(), 3, vec![0], vec![-1], Symmetry::General, |_, _| {
            x(0).pow(2)
        });
        assert!(matches!(bad, Err(Error::TwistMismatch { expected: 1, found: 2, .. })));

        let not_skew = GradedMatrix::from_fn(gf(), 3, vec![0, 0], vec![-1, -1], Symmetry::Skew, |i, j| {
            if i == j { x(0).zero_like(1) } else { x(i) }
        });
        assert_eq!(not_skew.unwrap_err(), Error::NotSkew);

        let not_sym = GradedMatrix::from_fn(gf(), 3, vec![0, 0], vec![-1, -1], Symmetry::Symmetric, |i, j| {
            x((i + 2 * j) % 3)
        });
        assert_eq!(not_sym.unwrap_err(), Error::NotSymmetric);

        let twists = GradedMatrix::from_fn(gf(), 3, vec![0, 1], vec![-1, -1], Symmetry::Symmetric, |_, _| {
            x(0).zero_like(0)
        });
        assert_eq!(twists.unwrap_err(), Error::IncompatibleTwists("symmetric"));

        // Negative-degree positions are re-degreed zero forms.
        let m = GradedMatrix::from_fn(gf(), 3, vec![0, -2], vec![-1, 0], Symmetry::General, |i, j| {
            match (i, j) {
                (0, 0) => x(0),
                (0, 1) => HomogeneousForm::constant(gf(), 3, 1),
                _ => HomogeneousForm::zero(gf(), 3, 0),
            }
        })
        .unwrap();
        assert_eq!(m.entry(1, 0).degree(), -1);
        assert_eq!(m.entry(1, 1).degree(), -2);
    }

    #[test]
    fn evaluation_preserves_skewness() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = LinearSkewMatrix::random(gf(), 6, 3, &mut rng).to_graded();
        let pt = [5, 17, 31000];
        assert!(m.evaluate(&pt).is_skew());
        let z = linear(3, Symmetry::General, |_, _| x(0).zero_like(1));
        assert!(z.evaluate(&pt).is_zero());
    }

    #[test]
    fn trivial_determinants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = HomogeneousForm::random(gf(), 3, 4, &mut rng);
        let g = HomogeneousForm::random(gf(), 3, 2, &mut rng);
        let one = GradedMatrix::from_fn(gf(), 3, vec![4], vec![0], Symmetry::General, |_, _| f.clone()).unwrap();
        assert_eq!(one.determinant(&PolyConfig::default()).unwrap(), f);

        let diag = GradedMatrix::from_fn(gf(), 3, vec![4, 2], vec![0, 0], Symmetry::General, |i, j| {
            match (i, j) {
                (0, 0) => f.clone(),
                (1, 1) => g.clone(),
                _ => HomogeneousForm::zero(gf(), 3, 0),
            }
        })
        .unwrap();
        let fg = f.mul(&g).unwrap();
        assert_eq!(diag.determinant(&PolyConfig::default()).unwrap(), fg);
        assert_eq!(diag.determinant(&PolyConfig::interpolation_only()).unwrap(), fg);
    }

    #[test]
    fn minimality() {
        assert!(linear(3, Symmetry::General, |i, j| x((i + j) % 3)).is_minimal());
        let m = GradedMatrix::from_fn(gf(), 3, vec![0, 1], vec![0, -1], Symmetry::General, |i, j| {
            match (i, j) {
                (0, 0) => HomogeneousForm::constant(gf(), 3, 1),
                _ => HomogeneousForm::zero(gf(), 3, 0),
            }
        })
        .unwrap();
        assert!(!m.is_minimal());
    }

    #[test]
    fn pfaffian_rejects_bad_input() {
        let odd = linear(3, Symmetry::Skew, |i, j| match (i, j) {
            (0, 1) => x(0),
            (1, 0) => x(0).neg(),
            _ => x(0).zero_like(1),
        });
        assert_eq!(odd.pfaffian(&PolyConfig::default()), Err(Error::OddSize(3)));
        let gen = linear(2, Symmetry::General, |_, _| x(0));
        assert_eq!(gen.pfaffian(&PolyConfig::default()), Err(Error::NotSkew));
    }

    #[test]
    fn congruence_identity_and_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = LinearSkewMatrix::random(gf(), 4, 3, &mut rng).to_graded();
        assert_eq!(m.congruence_transform(&ScalarMatrix::identity(gf(), 4)).unwrap(), m);
        assert!(matches!(
            m.congruence_transform(&ScalarMatrix::identity(gf(), 3)),
            Err(Error::SizeMismatch(_))
        ));
        assert_eq!(
            m.congruence_transform(&ScalarMatrix::zeros(gf(), 4, 4)),
            Err(Error::Singular)
        );
        let g = linear(4, Symmetry::General, |_, _| x(1));
        assert_eq!(
            g.congruence_transform(&ScalarMatrix::identity(gf(), 4)),
            Err(Error::SymmetryRequired)
        );
    }

    #[test]
    fn verify_rejects_wrong_form() {
        let m = linear(2, Symmetry::General, |i, j| x(i + j));
        let cfg = PolyConfig::default();
        let det = m.determinant(&cfg).unwrap();
        let v = verify_representation(&m, &det.scale(5), RepresentationKind::Det, &cfg).unwrap();
        assert_eq!(v, Verification { ok: true, scalar: Some(gf().inv(5)) });
        let wrong = det.add(&x(0).pow(2)).unwrap();
        let v = verify_representation(&m, &wrong, RepresentationKind::Det, &cfg).unwrap();
        assert!(!v.ok);
    }
}
