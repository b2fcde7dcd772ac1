use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use super::basis::{power_table, Monomial, MonomialBasis};
use crate::error::{Error, Result};
use crate::exactlin::Field;

/// A homogeneous polynomial in `nvars` variables over GF(p).
///
/// Zero coefficients are never stored, so equality is structural. The zero
/// form carries a degree like any other form (possibly negative, which is
/// how forced-zero matrix entries are represented).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousForm {
    field: Field,
    nvars: usize,
    degree: i32,
    terms: BTreeMap<Monomial, u32>,
}

impl HomogeneousForm {
    pub fn zero(field: Field, nvars: usize, degree: i32) -> Self {
        assert!(nvars >= 1);
        HomogeneousForm {
            field,
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: Field, nvars: usize, c: u32) -> Self {
        Self::monomial(field, Monomial::one(nvars), c)
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        Self::monomial(field, Monomial::var(nvars, i), 1)
    }

    pub fn monomial(field: Field, m: Monomial, coeff: u32) -> Self {
        let mut f = Self::zero(field, m.nvars(), m.degree() as i32);
        let c = coeff % field.modulus();
        if c != 0 {
            f.terms.insert(m, c);
        }
        f
    }

    /// `Σ coeffs[i] · X_i`.
    pub fn linear(field: Field, coeffs: &[u32]) -> Self {
        let n = coeffs.len();
        let mut f = Self::zero(field, n, 1);
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                f.terms.insert(Monomial::var(n, i), c);
            }
        }
        f
    }

    /// Builds a form from `(exponents, coefficient)` pairs. Repeated
    /// monomials are summed.
    pub fn from_terms<I>(field: Field, nvars: usize, degree: i32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, u32)>,
    {
        let mut f = Self::zero(field, nvars, degree);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::VariableCountMismatch {
                    expected: nvars,
                    found: exps.len(),
                });
            }
            let m = Monomial::new(exps);
            if m.degree() as i32 != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: m.degree() as i32,
                });
            }
            f.add_term(m, c % field.modulus());
        }
        Ok(f)
    }

    /// Uniformly random coefficients on every monomial of the degree.
    pub fn random<R: Rng + ?Sized>(field: Field, nvars: usize, degree: i32, rng: &mut R) -> Self {
        let basis = MonomialBasis::new(nvars, degree);
        let coeffs: Vec<u32> = (0..basis.len()).map(|_| field.random(rng)).collect();
        Self::from_coefficients(field, &basis, &coeffs)
    }

    pub fn from_coefficients(field: Field, basis: &MonomialBasis, coeffs: &[u32]) -> Self {
        assert_eq!(coeffs.len(), basis.len());
        let mut f = Self::zero(field, basis.nvars(), basis.degree());
        for (m, &c) in basis.monomials().iter().zip(coeffs) {
            if c != 0 {
                f.terms.insert(m.clone(), c);
            }
        }
        f
    }

    fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let field = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let v = field.add(*slot.get(), c);
                if v == 0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = v;
                }
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn degree(&self) -> i32 {
        self.degree
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }
    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// A zero form of the given degree in the same ring.
    pub fn zero_like(&self, degree: i32) -> Self {
        Self::zero(self.field, self.nvars, degree)
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.modulus() - 1)
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        let c = c % f.modulus();
        let mut out = self.zero_like(self.degree);
        if c != 0 {
            out.terms = self.terms.iter().map(|(m, &v)| (m.clone(), f.mul(v, c))).collect();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.zero_like(self.degree + other.degree);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(a.mul(b), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.field, self.nvars, 1);
        for _ in 0..k {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    pub fn evaluate(&self, point: &[u32]) -> u32 {
        assert_eq!(point.len(), self.nvars, "point length must equal nvars");
        if self.terms.is_empty() {
            return 0;
        }
        let f = self.field;
        let powers = power_table(f, point, self.degree as usize);
        self.terms
            .iter()
            .fold(0, |acc, (m, &c)| f.add(acc, f.mul(c, m.eval_with_powers(f, &powers))))
    }

    /// Evaluation against a precomputed power table (see `power_table`).
    pub(crate) fn evaluate_with_powers(&self, powers: &[Vec<u32>]) -> u32 {
        let f = self.field;
        self.terms
            .iter()
            .fold(0, |acc, (m, &c)| f.add(acc, f.mul(c, m.eval_with_powers(f, powers))))
    }

    /// Replaces `X_i` by `images[i]`. All images must share one degree `m`;
    /// the result has degree `m · deg(self)`.
    pub fn substitute(&self, images: &[HomogeneousForm]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::VariableCountMismatch {
                expected: self.nvars,
                found: images.len(),
            });
        }
        let img_deg = images[0].degree;
        let img_vars = images[0].nvars;
        for g in images {
            if g.degree != img_deg {
                return Err(Error::NonUniformImageDegrees);
            }
            images[0].check_ring(g)?;
            if g.field != self.field {
                return Err(Error::FieldMismatch);
            }
        }
        let mut out = Self::zero(self.field, img_vars, img_deg * self.degree);
        if self.terms.is_empty() {
            return Ok(out);
        }
        let max_e = self.degree.max(0) as usize;
        let powers: Vec<Vec<HomogeneousForm>> = images
            .iter()
            .map(|g| {
                let mut row = vec![Self::constant(self.field, img_vars, 1)];
                for k in 1..=max_e {
                    let next = row[k - 1].mul(g)?;
                    row.push(next);
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        for (m, &c) in &self.terms {
            let mut term = Self::constant(self.field, img_vars, c);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[i][e as usize])?;
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    pub fn coefficient_vector(&self, basis: &MonomialBasis) -> Result<Vec<u32>> {
        if basis.nvars() != self.nvars || basis.degree() != self.degree {
            return Err(Error::BasisMismatch);
        }
        let mut v = vec![0u32; basis.len()];
        for (m, &c) in &self.terms {
            v[basis.index_of(m).ok_or(Error::BasisMismatch)?] = c;
        }
        Ok(v)
    }

    /// `∂/∂X_i`.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.nvars);
        let f = self.field;
        let mut out = self.zero_like(self.degree - 1);
        for (m, &c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), f.mul(c, f.from_i64(e as i64)));
        }
        out
    }

    /// The scalar `λ` with `self = λ · other`, if one exists and is nonzero.
    pub fn ratio_to(&self, other: &Self) -> Option<u32> {
        if self.check_ring(other).is_err() || self.degree != other.degree || other.is_zero() {
            return None;
        }
        let f = self.field;
        let (m, &c) = other.terms.iter().next()?;
        let lambda = f.mul(self.coeff(m), f.inv(c));
        (lambda != 0 && *self == other.scale(lambda)).then_some(lambda)
    }
}

impl fmt::Debug for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[deg {}] ", self.degree)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, &c)) in self.terms.iter().enumerate() {
            let c = self.field.to_signed(c);
            let sep = match (k, c < 0) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let abs = c.unsigned_abs();
            if m.degree() == 0 {
                write!(f, "{sep}{abs}")?;
            } else if abs == 1 {
                write!(f, "{sep}{m:?}")?;
            } else {
                write!(f, "{sep}{abs}*{m:?}")?;
            }
        }
        Ok(())
    }
}
