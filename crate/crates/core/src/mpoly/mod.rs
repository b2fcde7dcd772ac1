//! Homogeneous forms over GF(p).
//!
//! A [`HomogeneousForm`] is a sparse map from exponent vectors to nonzero
//! coefficients. All exponent vectors of a form share one total degree, and
//! traversal follows the canonical [`MonomialBasis`] order (lexicographic
//! with `X_0` largest, so `X_0^d` comes first).

mod basis;
mod form;
mod interpolate;
mod text;

pub use basis::{monomial_count, Monomial, MonomialBasis};
pub(crate) use basis::power_table;
pub(crate) use text::{header_field, header_value, parse_header, parse_int, read_form, LineReader};
pub use form::HomogeneousForm;
pub use interpolate::{
    interpolate_homogeneous, interpolate_many, sample_point, InterpolationConfig, Interpolated,
};
pub use text::{parse_form, parse_forms};
