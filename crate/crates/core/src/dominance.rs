//! Dominance of the linear pfaffian map and the closed-form counts around it.
//!
//! For a random `2d×2d` skew matrix `M` of linear forms in `r+1` variables,
//! the forms `X_k · P_ij` (with `P_ij` the submaximal pfaffians) span the
//! tangent space of the image of `M ↦ pf M` in `S_d`. The codimension of
//! their span is `cd`; `cd = 0` at a single sample proves dominance onto
//! `|O(d)|` because the rank can only go up at a general point.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{Field, ScalarMatrix};
use crate::mpoly::{monomial_count, MonomialBasis};
use crate::polymat::{LinearSkewMatrix, PolyConfig};
use crate::seeds;

/// `(n+1)·d·(2d-1) - 4d²`: the dimension of the space of linear skew
/// `2d×2d` matrices in `n+1` variables modulo congruence.
pub fn moduli_dimension(n: i64, d: i64) -> i64 {
    (n + 1) * d * (2 * d - 1) - 4 * d * d
}

/// `dim |O_{P^n}(d)| = C(d+n, n) - 1`.
pub fn linear_system_dimension(n: usize, d: i64) -> i64 {
    monomial_count(n + 1, d) as i64 - 1
}

/// Degree and genus of the curve attached to a linear pfaffian surface of
/// degree `d`: `(d(d-1)/2, (d-2)(d-3)(2d+1)/6)`.
pub fn curve_invariants(d: i64) -> (i64, i64) {
    let g = (d - 2) * (d - 3) * (2 * d + 1);
    debug_assert_eq!(g % 6, 0);
    (d * (d - 1) / 2, g / 6)
}

/// `d(d-1)(2d-1)/6`.
pub fn gorenstein_degree(d: i64) -> i64 {
    d * (d - 1) * (2 * d - 1) / 6
}

/// `(d-1)(d-2)/2`.
pub fn plane_genus(d: i64) -> i64 {
    (d - 1) * (d - 2) / 2
}

/// The image of the pfaffian map has dimension at most the moduli
/// dimension, so it cannot fill a larger linear system.
pub fn counting_obstructs(n: usize, d: i64) -> bool {
    moduli_dimension(n as i64, d) < linear_system_dimension(n, d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaTable {
    pub ambient: usize,
    pub degree: i64,
    pub moduli_dim: i64,
    pub linsys_dim: i64,
    pub curve_degree: i64,
    pub curve_genus: i64,
    pub gorenstein_degree: i64,
    pub plane_genus: i64,
}

impl FormulaTable {
    pub fn new(ambient: usize, degree: i64) -> Self {
        let (curve_degree, curve_genus) = curve_invariants(degree);
        FormulaTable {
            ambient,
            degree,
            moduli_dim: moduli_dimension(ambient as i64, degree),
            linsys_dim: linear_system_dimension(ambient, degree),
            curve_degree,
            curve_genus,
            gorenstein_degree: gorenstein_degree(degree),
            plane_genus: plane_genus(degree),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// `cd = 0` at a sample: a proof of dominance.
    Dominant,
    /// `cd > 0` at every sample tried; not a proof.
    NotDominantEvidence,
    /// The counting bound rules dominance out.
    NotDominantByCount,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Dominant => "Dominant",
            Verdict::NotDominantEvidence => "NotDominantEvidence",
            Verdict::NotDominantByCount => "NotDominantByCount",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceCertificate {
    pub ambient: usize,
    pub degree: usize,
    pub prime: u32,
    /// Root seed; attempt `a` samples with `derive(seed, [r, d, a])`.
    pub seed: u64,
    /// Samples drawn, including ones lost to a degenerate pencil.
    pub attempts: usize,
    pub cd: usize,
    /// Rank of the span of `X_k · P_ij`. Without a sample this is the
    /// counting upper bound `moduli_dim + 1`.
    pub rank_achieved: usize,
    pub target_dim: usize,
    pub sample_points_used: usize,
    pub elapsed_ms: u64,
    pub verdict: Verdict,
    pub toolkit_version: String,
    /// SHA-256 of the sampled matrix behind `cd`.
    pub matrix_sha256: Option<String>,
}

impl DominanceCertificate {
    pub fn is_dominant(&self) -> bool {
        self.verdict == Verdict::Dominant
    }

    /// The certificate with its timing zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Self {
        DominanceCertificate {
            elapsed_ms: 0,
            ..self.clone()
        }
    }

    pub const CSV_HEADER: &'static str = "r,d,prime,seed,cd,rank,target,verdict,elapsed_ms";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.ambient,
            self.degree,
            self.prime,
            self.seed,
            self.cd,
            self.rank_achieved,
            self.target_dim,
            self.verdict,
            self.elapsed_ms
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceConfig {
    pub prime: Field,
    pub seed: u64,
    /// Number of independent samples before giving up.
    pub retries: usize,
    /// Sample even when the counting bound already decides the answer.
    pub sample_when_obstructed: bool,
    /// `lower_bound_for_dominant_degree` stops with an error past this.
    pub max_degree: usize,
    pub poly: PolyConfig,
}

impl Default for DominanceConfig {
    fn default() -> Self {
        DominanceConfig {
            prime: Field::default_prime(),
            seed: 1,
            retries: 3,
            sample_when_obstructed: false,
            max_degree: 40,
            poly: PolyConfig::default(),
        }
    }
}

struct Sample {
    rank: usize,
    points: usize,
    hash: String,
}

fn check_params(r: usize, d: usize) -> Result<()> {
    if !(2..=5).contains(&r) {
        return Err(Error::InvalidParameter(format!("ambient dimension must be 2..=5, got {r}")));
    }
    if d < 2 {
        return Err(Error::InvalidParameter(format!("degree must be at least 2, got {d}")));
    }
    Ok(())
}

fn sample_rank(r: usize, d: usize, config: &DominanceConfig, attempt: usize) -> Result<Sample> {
    let field = config.prime;
    let nvars = r + 1;
    let attempt_seed = seeds::derive(config.seed, &[r as u64, d as u64, attempt as u64]);
    let mut rng = seeds::rng(attempt_seed, &[0]);
    let m = LinearSkewMatrix::random(field, 2 * d, nvars, &mut rng);
    let sub = m.submaximal_pfaffians(seeds::derive(attempt_seed, &[1]), &config.poly)?;

    let low = MonomialBasis::new(nvars, d as i32 - 1);
    let high = MonomialBasis::new(nvars, d as i32);
    let shifts: Vec<Vec<usize>> = (0..nvars).map(|k| low.shift_map(k, &high)).collect();
    let mut data = Vec::with_capacity(sub.forms.len() * nvars * high.len());
    for p in &sub.forms {
        let v = p.coefficient_vector(&low)?;
        for shift in &shifts {
            let mut row = vec![0u32; high.len()];
            for (src, &c) in v.iter().enumerate() {
                row[shift[src]] = c;
            }
            data.extend(row);
        }
    }
    let rows = data.len() / high.len();
    let rank = ScalarMatrix::from_data(field, rows, high.len(), data).rank();
    Ok(Sample {
        rank,
        points: sub.points_used,
        hash: m.content_hash(),
    })
}

fn verdict_for(r: usize, d: usize, cd: usize) -> Verdict {
    if cd == 0 {
        Verdict::Dominant
    } else if counting_obstructs(r, d as i64) {
        Verdict::NotDominantByCount
    } else {
        Verdict::NotDominantEvidence
    }
}

fn certificate(
    r: usize,
    d: usize,
    config: &DominanceConfig,
    attempts: usize,
    sample: &Sample,
    started: Instant,
) -> DominanceCertificate {
    let target = monomial_count(r + 1, d as i64);
    let cd = target - sample.rank;
    DominanceCertificate {
        ambient: r,
        degree: d,
        prime: config.prime.modulus(),
        seed: config.seed,
        attempts,
        cd,
        rank_achieved: sample.rank,
        target_dim: target,
        sample_points_used: sample.points,
        elapsed_ms: started.elapsed().as_millis() as u64,
        verdict: verdict_for(r, d, cd),
        toolkit_version: crate::TOOLKIT_VERSION.to_string(),
        matrix_sha256: Some(sample.hash.clone()),
    }
}

/// One sampled value of `cd`. Samples lost to a degenerate pencil are
/// redrawn, up to `config.retries` samples in total.
pub fn pfaffian_codim(r: usize, d: usize, config: &DominanceConfig) -> Result<DominanceCertificate> {
    check_params(r, d)?;
    let started = Instant::now();
    let mut last_err = None;
    for attempt in 0..config.retries.max(1) {
        match sample_rank(r, d, config, attempt) {
            Ok(s) => return Ok(certificate(r, d, config, attempt + 1, &s, started)),
            Err(e @ Error::DegeneratePencil { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn counting_certificate(r: usize, d: usize, config: &DominanceConfig) -> DominanceCertificate {
    let target = monomial_count(r + 1, d as i64);
    let bound = (moduli_dimension(r as i64, d as i64) + 1).max(0) as usize;
    DominanceCertificate {
        ambient: r,
        degree: d,
        prime: config.prime.modulus(),
        seed: config.seed,
        attempts: 0,
        cd: target - bound.min(target),
        rank_achieved: bound.min(target),
        target_dim: target,
        sample_points_used: 0,
        elapsed_ms: 0,
        verdict: Verdict::NotDominantByCount,
        toolkit_version: crate::TOOLKIT_VERSION.to_string(),
        matrix_sha256: None,
    }
}

/// Samples until `cd = 0` or `config.retries` samples are spent, returning
/// the certificate with the smallest `cd`. When the counting bound applies
/// no sample is drawn unless `sample_when_obstructed` is set.
pub fn is_dominant(r: usize, d: usize, config: &DominanceConfig) -> Result<(bool, DominanceCertificate)> {
    check_params(r, d)?;
    let obstructed = counting_obstructs(r, d as i64);
    if obstructed && !config.sample_when_obstructed {
        return Ok((false, counting_certificate(r, d, config)));
    }
    let started = Instant::now();
    let budget = if obstructed { 1 } else { config.retries.max(1) };
    let mut best: Option<Sample> = None;
    let mut last_err = None;
    let mut attempts = 0;
    for attempt in 0..budget {
        attempts += 1;
        match sample_rank(r, d, config, attempt) {
            Ok(s) => {
                let full = s.rank == monomial_count(r + 1, d as i64);
                if best.as_ref().is_none_or(|b| s.rank > b.rank) {
                    best = Some(s);
                }
                if full {
                    break;
                }
            }
            Err(e @ Error::DegeneratePencil { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    let Some(best) = best else {
        return Err(last_err.expect("every attempt failed"));
    };
    let cert = certificate(r, d, config, attempts, &best, started);
    Ok((cert.is_dominant(), cert))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBound {
    pub ambient: usize,
    /// Largest `d` such that every degree `3..=d` was certified dominant.
    pub degree: usize,
    pub trail: Vec<DominanceCertificate>,
}

/// Walks `d = 3, 4, ...` while [`is_dominant`] holds.
pub fn lower_bound_for_dominant_degree(r: usize, config: &DominanceConfig) -> Result<LowerBound> {
    let mut trail = Vec::new();
    for d in 3..=config.max_degree {
        let (ok, cert) = is_dominant(r, d, config)?;
        trail.push(cert);
        if !ok {
            return Ok(LowerBound {
                ambient: r,
                degree: d - 1,
                trail,
            });
        }
    }
    Err(Error::WorkLimitExceeded(format!(
        "still dominant at degree {}",
        config.max_degree
    )))
}

/// [`is_dominant`] for each degree in `degrees`, run in parallel and
/// returned in degree order.
pub fn sweep(r: usize, degrees: std::ops::RangeInclusive<usize>, config: &DominanceConfig) -> Result<Vec<DominanceCertificate>> {
    let ds: Vec<usize> = degrees.collect();
    ds.par_iter()
        .map(|&d| is_dominant(r, d, config).map(|(_, c)| c))
        .collect()
}
