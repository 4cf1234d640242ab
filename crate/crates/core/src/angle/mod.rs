//! Normalized solid angles of cones and of points relative to polytopes.
//!
//! Values are fractions of the full sphere, so an orthant in `R^d` has
//! angle `2^{-d}` and a halfspace `1/2`.

pub mod aomoto;
pub mod montecarlo;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measured::Measured;
use crate::polytope::{PointedCone, Polytope};
use crate::rational::Rational;

pub use aomoto::{AomotoInput, Convention, IndexSet, Scaling};

/// Rounding allowance attached to each closed-form piece.
pub const EXACT_ERROR: f64 = 1e-13;

/// How far an arccos argument may stray outside `[-1, 1]` before it is
/// treated as a bug rather than rounding.
pub const CLAMP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Aomoto,
    MonteCarlo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Aomoto => "aomoto",
            Method::MonteCarlo => "monte-carlo",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleValue {
    pub value: f64,
    pub method: Method,
    pub abs_error: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
}

impl AngleValue {
    pub fn exact(value: f64) -> Self {
        Self::exact_with_error(value, 0.0)
    }

    fn exact_with_error(value: f64, abs_error: f64) -> Self {
        Self {
            value: value.clamp(0.0, 1.0),
            method: Method::Exact,
            abs_error,
            seed: None,
            n: None,
        }
    }

    pub fn to_measured(&self) -> Measured {
        Measured::new(self.value, self.abs_error)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    /// Closed forms up to dimension 3, series beyond.
    #[default]
    Exact,
    /// Series wherever a cone has dimension at least 3.
    Aomoto,
    /// Sampling wherever a cone has dimension at least 3.
    #[serde(rename = "mc")]
    MonteCarlo,
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Policy::Exact),
            "aomoto" => Ok(Policy::Aomoto),
            "mc" | "monte-carlo" => Ok(Policy::MonteCarlo),
            _ => Err(Error::Parse(format!("unknown policy {s:?}"))),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Policy::Exact => "exact",
            Policy::Aomoto => "aomoto",
            Policy::MonteCarlo => "mc",
        })
    }
}

/// Angle engine configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngleEngine {
    pub policy: Policy,
    pub mc_samples: u64,
    pub seed: u64,
    pub aomoto_tol: f64,
    pub max_order: usize,
    pub convention: Convention,
}

impl Default for AngleEngine {
    fn default() -> Self {
        Self {
            policy: Policy::Exact,
            mc_samples: 1_000_000,
            seed: 0,
            aomoto_tol: 1e-10,
            max_order: 60,
            convention: Convention::default(),
        }
    }
}

impl AngleEngine {
    pub fn with_policy(policy: Policy) -> Self {
        Self {
            policy,
            ..Self::default()
        }
    }

    /// Angle of a cone at its apex, using the engine seed for sampling.
    pub fn cone_angle(&self, c: &PointedCone) -> Result<AngleValue> {
        self.cone_angle_seeded(c, self.seed)
    }

    pub fn cone_angle_seeded(&self, c: &PointedCone, seed: u64) -> Result<AngleValue> {
        if !c.is_pointed() {
            let q = c.pointed_quotient()?;
            return if q.dim() == 0 {
                Ok(AngleValue::exact(1.0))
            } else {
                self.cone_angle_seeded(&q, seed)
            };
        }
        match (c.dim(), self.policy) {
            (0, _) => Ok(AngleValue::exact(1.0)),
            (1, _) => Ok(AngleValue::exact(0.5)),
            (2, _) => planar_angle(c),
            (3, Policy::Exact) => cone_angle_3d(c),
            (_, Policy::MonteCarlo) => monte_carlo_angle(c, self.mc_samples, seed),
            _ => match self.aomoto_pieces(c) {
                Ok(v) => Ok(v),
                Err(Error::Divergence { .. }) => monte_carlo_angle(c, self.mc_samples, seed),
                Err(e) => Err(e),
            },
        }
    }

    fn aomoto_pieces(&self, c: &PointedCone) -> Result<AngleValue> {
        let frame = c.frame();
        let mut value = 0.0;
        let mut abs_error = 0.0;
        for piece in c.triangulation()? {
            let gens: Vec<Vec<f64>> = piece.iter().map(|&i| frame.generators[i].clone()).collect();
            let (v, e) = aomoto::calibrated_angle(
                &dual_normals(&gens)?,
                self.convention,
                self.aomoto_tol,
                self.max_order,
            )?;
            value += v;
            abs_error += e;
        }
        Ok(AngleValue {
            value: value.clamp(0.0, 1.0),
            method: Method::Aomoto,
            abs_error,
            seed: None,
            n: None,
        })
    }

    /// `ω_P(x)`.
    pub fn solid_angle(&self, p: &Polytope, x: &[Rational]) -> Result<AngleValue> {
        if x.len() != p.dim() {
            return Err(Error::Shape(format!(
                "point of dimension {} for a polytope in R^{}",
                x.len(),
                p.dim()
            )));
        }
        match p.carrier_face(x) {
            None => Ok(AngleValue::exact(0.0)),
            Some(face) => self.face_angle(p, face),
        }
    }

    /// Angle of `P` at any point of the relative interior of a face.
    pub fn face_angle(&self, p: &Polytope, face: usize) -> Result<AngleValue> {
        self.cone_angle_seeded(&p.face_cone(face), face_seed(self.seed, face))
    }

    /// Angles at every face, indexed like `p.faces()`.
    pub fn face_angles(&self, p: &Polytope) -> Result<Vec<AngleValue>> {
        (0..p.faces().len())
            .into_par_iter()
            .map(|f| self.face_angle(p, f))
            .collect()
    }
}

/// Sampling seed for the cone at a given face, derived from the engine seed.
pub fn face_seed(seed: u64, face: usize) -> u64 {
    seed.wrapping_add((face as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Inward facet normals of the simplicial cone spanned by `gens`: the rows
/// of the inverse generator matrix.
pub fn dual_normals(gens: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let d = gens.len();
    let m = DMatrix::from_fn(d, d, |i, j| gens[j][i]);
    let inv = m.try_inverse().ok_or(Error::Degenerate)?;
    Ok((0..d).map(|i| (0..d).map(|j| inv[(i, j)]).collect()).collect())
}

fn acos_clamped(x: f64) -> Result<f64> {
    if !(-1.0 - CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&x) {
        return Err(Error::Consistency(format!("arccos argument {x} outside [-1, 1]")));
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}

/// Angle of a 2-dimensional cone. A closed halfplane gives `1/2`.
pub fn planar_angle(c: &PointedCone) -> Result<AngleValue> {
    if c.dim() != 2 {
        return Err(Error::Shape(format!("planar angle of a {}-dimensional cone", c.dim())));
    }
    match c.lineality_dim() {
        0 => {}
        1 => return Ok(AngleValue::exact(0.5)),
        l => return Err(Error::Lineality(l)),
    }
    let f = c.frame();
    let (a, b) = (&f.generators[0], &f.generators[1]);
    let cross = a[0] * b[1] - a[1] * b[0];
    let dot = a[0] * b[0] + a[1] * b[1];
    Ok(AngleValue::exact_with_error(
        cross.abs().atan2(dot) / (2.0 * PI),
        EXACT_ERROR,
    ))
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Spherical-excess formula for the simplicial cone spanned by three
/// vectors in `R^3`.
pub fn girard_angle(v1: &[f64], v2: &[f64], v3: &[f64]) -> Result<AngleValue> {
    if [v1, v2, v3].iter().any(|v| v.len() != 3) {
        return Err(Error::Shape("girard_angle needs vectors in R^3".into()));
    }
    let scale = dot3(v1, v1).sqrt() * dot3(v2, v2).sqrt() * dot3(v3, v3).sqrt();
    let triple = dot3(&cross(v1, v2), v3);
    if scale == 0.0 || triple.abs() <= 1e-12 * scale {
        return Err(Error::Degenerate);
    }
    let corner = |a: &[f64], b: &[f64], c: &[f64]| {
        let (x, y) = (cross(a, b), cross(a, c));
        acos_clamped(dot3(&x, &y) / (dot3(&x, &x).sqrt() * dot3(&y, &y).sqrt()))
    };
    let excess = corner(v1, v2, v3)? + corner(v2, v1, v3)? + corner(v3, v1, v2)? - PI;
    Ok(AngleValue::exact_with_error(excess / (4.0 * PI), EXACT_ERROR))
}

/// Angle of a pointed 3-dimensional cone as a sum over a fan triangulation.
pub fn cone_angle_3d(c: &PointedCone) -> Result<AngleValue> {
    if c.dim() != 3 {
        return Err(Error::Shape(format!("cone_angle_3d on a {}-dimensional cone", c.dim())));
    }
    let f = c.frame();
    let pieces = c.triangulation()?;
    let mut total = 0.0;
    for s in &pieces {
        total += girard_angle(&f.generators[s[0]], &f.generators[s[1]], &f.generators[s[2]])?.value;
    }
    Ok(AngleValue::exact_with_error(total, EXACT_ERROR * pieces.len() as f64))
}

/// Calibrated series angle of a spherical simplex.
pub fn aomoto_angle(
    normals: &[Vec<f64>],
    convention: Convention,
    tol: f64,
    max_order: usize,
) -> Result<AngleValue> {
    let (value, abs_error) = aomoto::calibrated_angle(normals, convention, tol, max_order)?;
    Ok(AngleValue {
        value: value.clamp(0.0, 1.0),
        method: Method::Aomoto,
        abs_error,
        seed: None,
        n: None,
    })
}

/// Fraction of `n` isotropic directions inside the cone.
pub fn monte_carlo_angle(c: &PointedCone, n: u64, seed: u64) -> Result<AngleValue> {
    if n == 0 {
        return Err(Error::Validation("Monte Carlo needs at least one sample".into()));
    }
    if c.dim() == 0 {
        return Ok(AngleValue::exact(1.0));
    }
    let f = c.frame();
    Ok(monte_carlo_normals(&f.normals, c.dim(), n, seed))
}

/// Sampled angle of `{u ∈ R^dim : ⟨n, u⟩ ≥ 0 for all normals}`.
pub fn monte_carlo_normals(normals: &[Vec<f64>], dim: usize, n: u64, seed: u64) -> AngleValue {
    let hits = montecarlo::hits(normals, dim, n, seed);
    let (value, abs_error) = montecarlo::estimate(hits, n);
    AngleValue {
        value,
        method: Method::MonteCarlo,
        abs_error,
        seed: Some(seed),
        n: Some(n),
    }
}

/// `ω_P(x)` with the default engine.
pub fn solid_angle(p: &Polytope, x: &[Rational], engine: &AngleEngine) -> Result<AngleValue> {
    engine.solid_angle(p, x)
}

/// Volume of the unit ball in `R^k`.
pub fn unit_ball_volume(k: usize) -> f64 {
    // Γ(k/2 + 1) by the half-integer recurrence
    let mut gamma = if k.is_multiple_of(2) { 1.0 } else { PI.sqrt() / 2.0 };
    let mut x = if k.is_multiple_of(2) { 1.0 } else { 1.5 };
    while x < k as f64 / 2.0 + 1.0 - 1e-9 {
        gamma *= x;
        x += 1.0;
    }
    PI.powf(k as f64 / 2.0) / gamma
}

/// Two corner angles of the prism over a cone versus the base angle.
#[derive(Clone, Debug, Serialize)]
pub struct PrismReport {
    pub dim: usize,
    pub base: AngleValue,
    pub corner_low: AngleValue,
    pub corner_high: AngleValue,
    /// Half the base angle: the corner of `K × [0, ∞)`.
    pub exact_corner: f64,
    /// `vol(B^k) / vol(B^{k+1})`.
    pub ball_ratio: f64,
    pub bound: f64,
    pub symmetric: bool,
    pub bound_holds: bool,
    pub corner_matches_exact: bool,
}

impl PrismReport {
    pub fn ok(&self) -> bool {
        self.symmetric && self.bound_holds && self.corner_matches_exact
    }
}

/// Estimates the angles of `K × [0, 1]` at its two apex copies by sampling
/// and checks them against each other and against `c · ω_K`.
pub fn prism_angle_bound_check(c: &PointedCone, n: u64, seed: u64) -> Result<PrismReport> {
    let k = c.dim();
    if !c.is_pointed() || k == 0 || k > 3 {
        return Err(Error::Precondition(format!(
            "prism check needs a pointed cone of dimension 1..=3, got dim {k}, lineality {}",
            c.lineality_dim()
        )));
    }
    let base = AngleEngine::default().cone_angle(c)?;
    let frame = c.frame();
    let lift = |sign: f64| -> Vec<Vec<f64>> {
        let mut normals: Vec<Vec<f64>> = frame
            .normals
            .iter()
            .map(|nv| {
                let mut w = nv.clone();
                w.push(0.0);
                w
            })
            .collect();
        let mut e = vec![0.0; k + 1];
        e[k] = sign;
        normals.push(e);
        normals
    };
    let corner_low = monte_carlo_normals(&lift(1.0), k + 1, n, seed);
    let corner_high = monte_carlo_normals(&lift(-1.0), k + 1, n, seed.wrapping_add(1));
    let sigma = |a: &AngleValue| a.abs_error / 3.0;
    let combined = (sigma(&corner_low).powi(2) + sigma(&corner_high).powi(2)).sqrt();
    let ball_ratio = unit_ball_volume(k) / unit_ball_volume(k + 1);
    let bound = ball_ratio * base.value;
    let exact_corner = base.value / 2.0;
    let within = |a: &AngleValue, target: f64| (a.value - target).abs() <= 4.0 * sigma(a) + 1e-12;
    Ok(PrismReport {
        dim: k,
        symmetric: (corner_low.value - corner_high.value).abs() <= 4.0 * combined + 1e-12,
        bound_holds: [&corner_low, &corner_high]
            .iter()
            .all(|a| a.value <= bound + 4.0 * sigma(a)),
        corner_matches_exact: within(&corner_low, exact_corner) && within(&corner_high, exact_corner),
        base,
        corner_low,
        corner_high,
        exact_corner,
        ball_ratio,
        bound,
    })
}
