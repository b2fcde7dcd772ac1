//! Recovery of homogeneous forms from black-box evaluations.
//!
//! Sample points are affine points of GF(p)^n drawn from a stream keyed by
//! `(seed, point index)`, so the set of points, and therefore the result, is
//! independent of how many workers evaluate the black box.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::basis::{monomial_count, MonomialBasis};
use super::form::HomogeneousForm;
use crate::error::{Error, Result};
use crate::exactlin::{Field, ScalarMatrix};
use crate::seeds;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpolationConfig {
    /// Extra rows beyond the square system on the first pass.
    pub oversample: f64,
    /// Cap on the sample count, as a multiple of the monomial count.
    pub max_growth: f64,
    /// Absolute cap on the number of accepted sample points.
    pub max_points: usize,
}

impl Default for InterpolationConfig {
    fn default() -> Self {
        InterpolationConfig {
            oversample: 0.10,
            max_growth: 4.0,
            max_points: 1 << 20,
        }
    }
}

/// Forms recovered by [`interpolate_many`], with sampling statistics.
#[derive(Clone, Debug)]
pub struct Interpolated {
    pub forms: Vec<HomogeneousForm>,
    pub points_used: usize,
    pub rejected: usize,
}

/// The `index`-th sample point of the stream keyed by `seed`.
pub fn sample_point(field: Field, nvars: usize, seed: u64, index: u64) -> Vec<u32> {
    let mut rng = seeds::rng(seed, &[index]);
    (0..nvars).map(|_| rng.gen_range(0..field.modulus())).collect()
}

/// Interpolates `outputs` forms of one degree from a black box that returns
/// all their values at a point, sharing one elimination across outputs.
///
/// The black box may return `None` to reject a point; it is then replaced by
/// the next point in the stream. More than half of the attempted points
/// being rejected is reported as [`Error::DegeneratePencil`].
pub fn interpolate_many<F>(
    field: Field,
    nvars: usize,
    degree: i32,
    outputs: usize,
    seed: u64,
    config: &InterpolationConfig,
    black_box: F,
) -> Result<Interpolated>
where
    F: Fn(&[u32]) -> Option<Vec<u32>> + Sync,
{
    let needed = monomial_count(nvars, degree as i64);
    if needed == 0 {
        return Ok(Interpolated {
            forms: vec![HomogeneousForm::zero(field, nvars, degree); outputs],
            points_used: 0,
            rejected: 0,
        });
    }
    let basis = MonomialBasis::new(nvars, degree);
    let first = ((needed as f64) * (1.0 + config.oversample)).ceil() as usize;
    let first = first.max(needed);
    let cap = (((needed as f64) * config.max_growth).ceil() as usize)
        .max(first)
        .min(config.max_points.max(needed));

    let mut accepted: Vec<(Vec<u32>, Vec<u32>)> = Vec::with_capacity(first);
    let mut next_index = 0u64;
    let mut attempted = 0usize;
    let mut rejected = 0usize;
    let mut target = first.min(cap);

    loop {
        while accepted.len() < target {
            let batch = (target - accepted.len()) as u64;
            let fresh: Vec<Option<(Vec<u32>, Vec<u32>)>> = (next_index..next_index + batch)
                .into_par_iter()
                .map(|i| {
                    let pt = sample_point(field, nvars, seed, i);
                    black_box(&pt).map(|vals| {
                        assert_eq!(vals.len(), outputs, "black box returned wrong arity");
                        (pt, vals)
                    })
                })
                .collect();
            next_index += batch;
            attempted += batch as usize;
            for item in fresh {
                match item {
                    Some(pair) => accepted.push(pair),
                    None => rejected += 1,
                }
            }
            if rejected * 2 > attempted {
                return Err(Error::DegeneratePencil {
                    rejected,
                    attempted,
                });
            }
        }

        let rows = accepted.len();
        let mut vandermonde = Vec::with_capacity(rows * needed);
        let mut rhs = Vec::with_capacity(rows * outputs);
        for (pt, vals) in &accepted {
            vandermonde.extend(basis.evaluate_all(field, pt));
            rhs.extend_from_slice(vals);
        }
        let system = ScalarMatrix::from_data(field, rows, needed, vandermonde);
        let rhs = ScalarMatrix::from_data(field, rows, outputs, rhs);
        match system.solve_many(&rhs) {
            Ok(coeffs) => {
                let forms = (0..outputs)
                    .map(|j| {
                        let column: Vec<u32> = (0..needed).map(|i| coeffs[(i, j)]).collect();
                        HomogeneousForm::from_coefficients(field, &basis, &column)
                    })
                    .collect();
                return Ok(Interpolated {
                    forms,
                    points_used: rows,
                    rejected,
                });
            }
            Err(Error::RankDeficient { rank, .. }) => {
                if target >= cap {
                    return Err(Error::RankNotReached {
                        rank,
                        needed,
                        points: rows,
                    });
                }
                target = (target * 2).min(cap);
            }
            Err(e) => return Err(e),
        }
    }
}

/// Single-output convenience wrapper around [`interpolate_many`].
pub fn interpolate_homogeneous<F>(
    field: Field,
    black_box: F,
    nvars: usize,
    degree: i32,
    seed: u64,
    config: &InterpolationConfig,
) -> Result<HomogeneousForm>
where
    F: Fn(&[u32]) -> u32 + Sync,
{
    let mut out = interpolate_many(field, nvars, degree, 1, seed, config, |pt| {
        Some(vec![black_box(pt)])
    })?;
    Ok(out.forms.pop().expect("one output"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf() -> Field {
        Field::default_prime()
    }

    #[test]
    fn zero_and_pure_power() {
        let cfg = InterpolationConfig::default();
        let z = interpolate_homogeneous(gf(), |_| 0, 3, 4, 1, &cfg).unwrap();
        assert_eq!(z, HomogeneousForm::zero(gf(), 3, 4));

        for d in [1, 5, 9] {
            let target = HomogeneousForm::var(gf(), 4, 0).pow(d);
            let got = interpolate_homogeneous(gf(), |p| target.evaluate(p), 4, d as i32, 2, &cfg)
                .unwrap();
            assert_eq!(got, target);
        }
    }

    #[test]
    fn recovers_dense_degree_14_in_four_variables() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let f = HomogeneousForm::random(gf(), 4, 14, &mut rng);
        let got = interpolate_homogeneous(
            gf(),
            |p| f.evaluate(p),
            4,
            14,
            77,
            &InterpolationConfig::default(),
        )
        .unwrap();
        assert_eq!(got, f);
    }

    #[test]
    fn round_trips_random_forms() {
        let cfg = InterpolationConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for trial in 0..100u64 {
            let n = 1 + (trial % 4) as usize;
            let d = (trial % 6) as i32;
            let f = HomogeneousForm::random(gf(), n, d, &mut rng);
            let got = interpolate_homogeneous(gf(), |p| f.evaluate(p), n, d, trial, &cfg).unwrap();
            assert_eq!(got, f);
        }
    }

    #[test]
    fn lying_black_box_is_detected() {
        // Values of a cubic presented as a quadric.
        let cube = HomogeneousForm::var(gf(), 3, 0).pow(3);
        let err = interpolate_homogeneous(
            gf(),
            |p| cube.evaluate(p),
            3,
            2,
            9,
            &InterpolationConfig::default(),
        )
        .unwrap_err();
        assert_eq!(err, Error::Inconsistent);
    }

    #[test]
    fn tiny_field_never_spans() {
        // Over GF(3), x^3 y and x y^3 agree as functions on GF(3)^2.
        let f3 = Field::new(3).unwrap();
        let err = interpolate_homogeneous(
            f3,
            |_| 0,
            2,
            4,
            1,
            &InterpolationConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::RankNotReached { needed: 5, .. }));
    }

    #[test]
    fn rejections_are_replaced_and_counted() {
        let f = HomogeneousForm::var(gf(), 2, 1).pow(2);
        let out = interpolate_many(gf(), 2, 2, 1, 5, &InterpolationConfig::default(), |p| {
            (p[0] % 3 != 0).then(|| vec![f.evaluate(p)])
        })
        .unwrap();
        assert_eq!(out.forms[0], f);

        let err = interpolate_many(gf(), 2, 2, 1, 5, &InterpolationConfig::default(), |_| None)
            .unwrap_err();
        assert!(matches!(err, Error::DegeneratePencil { .. }));
    }

    #[test]
    fn thread_count_does_not_change_the_result() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let f = HomogeneousForm::random(gf(), 3, 6, &mut rng);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    interpolate_many(gf(), 3, 6, 1, 11, &InterpolationConfig::default(), |p| {
                        Some(vec![f.evaluate(p)])
                    })
                    .unwrap()
                })
        };
        let (a, b) = (run(1), run(4));
        assert_eq!(a.forms, b.forms);
        assert_eq!(a.points_used, b.points_used);
    }
}
