//! The solid-angle sum `A_P(t) = Σ_x ω_{tP}(x)`, its polynomial or
//! quasipolynomial fit, and the identities it satisfies.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::angle::{AngleEngine, AngleValue};
use crate::ehrhart::{
    binomial_transform, check_period, minimal_period, residue_points, NumeratorVector,
    QuasiPolynomial,
};
use crate::error::{Error, Result};
use crate::measured::Measured;
use crate::polytope::Polytope;
use crate::rational::{
    fit_polynomial, has_integer_solution, int, snap_to_fraction, to_f64, Polynomial, Rational,
    Residual, Sample,
};

/// Float allowance for identities that hold exactly with exact engines.
pub const IDENTITY_TOL: f64 = 1e-9;

/// `A_P(t)` evaluator holding the angle at every face of `P`. Angles of
/// `tP` at a lattice point only depend on its carrier face, so they are
/// computed once.
#[derive(Clone, Debug)]
pub struct SolidAngleSum<'a> {
    p: &'a Polytope,
    angles: Vec<AngleValue>,
}

impl<'a> SolidAngleSum<'a> {
    pub fn new(p: &'a Polytope, engine: &AngleEngine) -> Result<Self> {
        Ok(Self {
            p,
            angles: engine.face_angles(p)?,
        })
    }

    pub fn polytope(&self) -> &Polytope {
        self.p
    }

    pub fn angles(&self) -> &[AngleValue] {
        &self.angles
    }

    /// Sum of `ω` over the lattice points of `tP`, in lexicographic order.
    pub fn eval(&self, t: i64) -> Measured {
        if t == 0 {
            return Measured::zero();
        }
        let (mut value, mut error, mut n) = (0.0, 0.0, 0u64);
        self.p.for_each_lattice_point(t, |_, face| {
            let a = &self.angles[face];
            value += a.value;
            error += a.abs_error;
            n += 1;
        });
        Measured::new(value, error + n as f64 * f64::EPSILON * value.abs())
    }

    /// `Σ_F ω(F) · L_{F°}(t)`.
    pub fn eval_by_faces(&self, t: i64) -> Measured {
        if t == 0 {
            return Measured::zero();
        }
        let counts: Vec<u64> = (0..self.angles.len())
            .into_par_iter()
            .map(|f| self.p.count_relative_interior(f, t))
            .collect();
        let (mut value, mut error) = (0.0, 0.0);
        for (a, &c) in self.angles.iter().zip(&counts) {
            value += a.value * c as f64;
            error += a.abs_error * c as f64;
        }
        Measured::new(value, error + counts.len() as f64 * 4.0 * f64::EPSILON * value.abs())
    }

    /// Values `A(t)` for several `t` evaluated in parallel.
    pub fn samples(&self, ts: &[i64]) -> Vec<Sample> {
        ts.par_iter().map(|&t| Sample::new(t, self.eval(t))).collect()
    }

    pub fn vertex_sum(&self) -> Measured {
        self.p
            .faces_of_dim(0)
            .map(|(i, _)| self.angles[i].to_measured())
            .sum()
    }

    /// `Σ_F (-1)^{dim F} ω(F)`, over all nonempty faces including `P`.
    pub fn brianchon_gram(&self) -> Measured {
        self.p
            .faces()
            .iter()
            .zip(&self.angles)
            .map(|(f, a)| a.to_measured().scale(if f.dim % 2 == 0 { 1 } else { -1 }))
            .sum()
    }
}

/// `A_P(t)` by direct summation over lattice points.
pub fn a_eval(p: &Polytope, t: i64, engine: &AngleEngine) -> Result<Measured> {
    check_t(t)?;
    Ok(SolidAngleSum::new(p, engine)?.eval(t))
}

/// `A_P(t)` through the face decomposition.
pub fn a_eval_by_faces(p: &Polytope, t: i64, engine: &AngleEngine) -> Result<Measured> {
    check_t(t)?;
    Ok(SolidAngleSum::new(p, engine)?.eval_by_faces(t))
}

fn check_t(t: i64) -> Result<()> {
    if t < 1 {
        return Err(Error::Validation(format!("dilation factor {t} must be positive")));
    }
    Ok(())
}

/// Fitted solid-angle polynomial of a lattice polytope.
#[derive(Clone, Debug, Serialize)]
pub struct SolidPolynomial {
    pub dim: usize,
    pub parity_enforced: bool,
    pub polynomial: Polynomial,
    pub residuals: Vec<Residual>,
    pub samples: Vec<Sample>,
}

impl SolidPolynomial {
    pub fn coefficient(&self, k: usize) -> Measured {
        self.polynomial.coefficient(k)
    }
}

/// Exponents allowed by `A(-t) = (-1)^d A(t)` and `A(0) = 0`.
pub fn parity_support(d: usize) -> Vec<usize> {
    (1..=d).filter(|k| k % 2 == d % 2).collect()
}

fn require_residuals(residuals: &[Residual]) -> Result<()> {
    if let Some(r) = residuals.iter().find(|r| !r.ok()) {
        return Err(Error::Accuracy(format!(
            "validation residual {:e} exceeds bound {:e} at t = {}; increase --mc-samples or use exact engines",
            r.residual, r.bound, r.t
        )));
    }
    Ok(())
}

/// Replaces coefficients that lie within their bound of a fraction with
/// denominator at most `max_den`, and keeps the result only if it still
/// reproduces every sample within the sample's bound.
/// Largest error bound a coefficient may carry and still be snapped.
pub const SNAP_MAX_ERROR: f64 = 1e-6;

pub fn snap_polynomial(p: &Polynomial, samples: &[Sample], max_den: u64) -> Polynomial {
    let snapped: Vec<Measured> = p
        .coefficients()
        .iter()
        .map(|c| match &c.exact {
            Some(_) => c.clone(),
            // sampled coefficients stay as measured
            None if c.error > SNAP_MAX_ERROR => c.clone(),
            None => snap_to_fraction(c.value, max_den, c.error + 1e-10)
                .map(Measured::exact)
                .unwrap_or_else(|| c.clone()),
        })
        .collect();
    let candidate = Polynomial::new(snapped);
    let consistent = samples.iter().all(|s| {
        let v = candidate.eval(s.t as f64);
        let slack: f64 = candidate
            .coefficients()
            .iter()
            .enumerate()
            .map(|(k, c)| c.error * (s.t as f64).abs().powi(k as i32))
            .sum();
        (v - s.value.value).abs() <= s.value.error + slack + IDENTITY_TOL * s.value.value.abs().max(1.0)
    });
    if consistent {
        candidate
    } else {
        p.clone()
    }
}

fn snap_denominator(d: usize) -> u64 {
    2 * (1..=d as u64).product::<u64>().max(1)
}

/// Parity-restricted fit from `t = 1..⌈d/2⌉` plus validation points.
pub fn fit_solid_polynomial(sum: &SolidAngleSum, parity: bool) -> Result<SolidPolynomial> {
    let p = sum.polytope();
    if !p.is_lattice() {
        return Err(Error::Precondition(
            "polynomial fit needs a lattice polytope; use the quasipolynomial fit".into(),
        ));
    }
    let d = p.dim();
    let support: Vec<usize> = if parity {
        parity_support(d)
    } else {
        (0..=d).collect()
    };
    let n = support.len() + crate::ehrhart::VALIDATION_POINTS;
    let ts: Vec<i64> = (1..=n as i64).collect();
    let samples = sum.samples(&ts);
    let fit = fit_polynomial(&samples, &support)?;
    require_residuals(&fit.residuals)?;
    let polynomial = snap_polynomial(&fit.polynomial, &samples, snap_denominator(d));
    Ok(SolidPolynomial {
        dim: d,
        parity_enforced: parity,
        polynomial,
        residuals: fit.residuals,
        samples,
    })
}

/// Solid-angle quasipolynomial with one full-degree fit per residue class.
#[derive(Clone, Debug, Serialize)]
pub struct SolidQuasiPolynomial {
    pub dim: usize,
    pub declared_period: usize,
    /// Constituents for every residue of the declared period.
    pub full: QuasiPolynomial,
    /// Reduced to the smallest period on which constituents agree.
    pub collapsed: QuasiPolynomial,
    /// Minimal period of each coefficient function `c_k(t)`.
    pub coefficient_periods: Vec<usize>,
    pub residuals: Vec<Residual>,
}

/// Coefficients agree within their bounds plus `IDENTITY_TOL`.
pub fn same_within_bounds(a: &Measured, b: &Measured) -> bool {
    a.agrees_with(b, IDENTITY_TOL)
}

fn same_polynomial(a: &Polynomial, b: &Polynomial) -> bool {
    let n = a.coefficients().len().max(b.coefficients().len());
    (0..n).all(|k| same_within_bounds(&a.coefficient(k), &b.coefficient(k)))
}

pub fn fit_solid_quasi(sum: &SolidAngleSum) -> Result<SolidQuasiPolynomial> {
    let p = sum.polytope();
    let period = check_period(p)?;
    let d = p.dim();
    let cap = (2 * (d + 1) * period) as i64;
    let support: Vec<usize> = (0..=d).collect();
    let mut residuals = Vec::new();
    let mut constituents = Vec::with_capacity(period);
    for r in 0..period {
        let ts = residue_points(r, period, d + 1, true);
        if ts.iter().any(|&t| t > cap) {
            return Err(Error::Size(format!("evaluation beyond t = {cap}")));
        }
        let samples = sum.samples(&ts);
        let fit = fit_polynomial(&samples, &support)?;
        require_residuals(&fit.residuals)?;
        residuals.extend(fit.residuals);
        constituents.push(snap_polynomial(&fit.polynomial, &samples, snap_denominator(d) * period as u64));
    }
    let full = QuasiPolynomial::new(constituents)?;
    let collapsed = full.collapse_by(same_polynomial);
    let coefficient_periods = (0..=d)
        .map(|k| {
            minimal_period(period, |a, b| {
                same_within_bounds(
                    &full.constituents()[a].coefficient(k),
                    &full.constituents()[b].coefficient(k),
                )
            })
        })
        .collect();
    Ok(SolidQuasiPolynomial {
        dim: d,
        declared_period: period,
        full,
        collapsed,
        coefficient_periods,
        residuals,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SolidFit {
    Polynomial(SolidPolynomial),
    Quasipolynomial(SolidQuasiPolynomial),
}

/// Polynomial fit for lattice polytopes, quasipolynomial fit otherwise.
pub fn fit_solid(p: &Polytope, engine: &AngleEngine) -> Result<SolidFit> {
    let sum = SolidAngleSum::new(p, engine)?;
    if p.is_lattice() {
        Ok(SolidFit::Polynomial(fit_solid_polynomial(&sum, true)?))
    } else {
        Ok(SolidFit::Quasipolynomial(fit_solid_quasi(&sum)?))
    }
}

/// Numerator of `Σ_t A(t) z^t` together with the checks it should pass.
#[derive(Clone, Debug, Serialize)]
pub struct NumeratorReport {
    pub numerator: NumeratorVector,
    pub a0_zero: bool,
    pub positive: bool,
    pub palindromic: bool,
    pub violations: Vec<String>,
}

impl NumeratorReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `a_0 = 0`, `a_j > 0` and `a_j = a_{d+1-j}` within bounds.
pub fn check_solid_numerator(numerator: NumeratorVector, palindrome_tol: f64) -> NumeratorReport {
    let e = &numerator.entries;
    let d = e.len() - 1;
    let mut violations = Vec::new();
    let a0_zero = e[0].value.abs() <= e[0].error + IDENTITY_TOL;
    if !a0_zero {
        violations.push(format!("a_0 = {} is not zero", e[0].value));
    }
    let mut positive = true;
    for (j, a) in e.iter().enumerate().skip(1) {
        if a.value <= a.error {
            positive = false;
            violations.push(if a.value > 0.0 {
                format!("a_{j} = {} ± {} is not certainly positive", a.value, a.error)
            } else {
                format!("a_{j} = {} is not positive", a.value)
            });
        }
    }
    let mut palindromic = true;
    for j in 1..=d {
        let (a, b) = (&e[j], &e[d + 1 - j]);
        if j < d + 1 - j && !a.agrees_with(b, palindrome_tol) {
            palindromic = false;
            violations.push(format!("a_{j} = {} differs from a_{} = {}", a.value, d + 1 - j, b.value));
        }
    }
    NumeratorReport {
        numerator,
        a0_zero,
        positive,
        palindromic,
        violations,
    }
}

/// `a_k = Σ_j (-1)^j C(d+1, j) A(k - j)` with `A(0) = 0`.
pub fn solid_numerator(sum: &SolidAngleSum) -> Result<NumeratorVector> {
    let p = sum.polytope();
    if !p.is_lattice() {
        return Err(Error::Precondition("numerator needs a lattice polytope".into()));
    }
    let ts: Vec<i64> = (0..=p.dim() as i64).collect();
    let values: Vec<Measured> = sum.samples(&ts).into_iter().map(|s| s.value).collect();
    Ok(binomial_transform(&values))
}

pub fn numerator(p: &Polytope, engine: &AngleEngine) -> Result<NumeratorReport> {
    let sum = SolidAngleSum::new(p, engine)?;
    Ok(check_solid_numerator(solid_numerator(&sum)?, 1e-8))
}

/// Unimodality of the numerator of a 3-dimensional lattice polytope with
/// `A(t) = vol·t³ + c·t`, whose numerator is `(0, vol+c, 4vol−2c, vol+c)`.
#[derive(Clone, Debug, Serialize)]
pub struct UnimodalityReport {
    pub volume: f64,
    pub linear: Measured,
    pub numerator: NumeratorVector,
    /// `c ≤ vol`, equivalently `a_1 ≤ a_2`.
    pub unimodal: bool,
    /// Whether the only lattice points of `P` are its vertices.
    pub only_vertex_points: bool,
    pub vertex_sum: Measured,
    /// For polytopes whose only lattice points are vertices `A(1)` is the
    /// vertex sum, and unimodality is `S ≤ 2·vol`.
    pub vertex_sum_threshold: Option<f64>,
}

pub fn unimodality_report(p: &Polytope, engine: &AngleEngine) -> Result<UnimodalityReport> {
    if p.dim() != 3 || !p.is_lattice() {
        return Err(Error::Precondition(
            "unimodality report needs a 3-dimensional lattice polytope".into(),
        ));
    }
    let sum = SolidAngleSum::new(p, engine)?;
    let fit = fit_solid_polynomial(&sum, true)?;
    let volume = to_f64(&p.volume());
    let linear = fit.coefficient(1);
    let numerator = solid_numerator(&sum)?;
    let only_vertex_points = p.count_lattice_points(1) as usize == p.vertices().len();
    Ok(UnimodalityReport {
        volume,
        unimodal: linear.value <= volume,
        only_vertex_points,
        vertex_sum: sum.vertex_sum(),
        vertex_sum_threshold: only_vertex_points.then_some(2.0 * volume),
        linear,
        numerator,
    })
}

pub fn brianchon_gram_residual(p: &Polytope, engine: &AngleEngine) -> Result<Measured> {
    Ok(SolidAngleSum::new(p, engine)?.brianchon_gram())
}

pub fn vertex_sum(p: &Polytope, engine: &AngleEngine) -> Result<Measured> {
    Ok(SolidAngleSum::new(p, engine)?.vertex_sum())
}

/// Smallest `q ≥ 1` such that the affine span of every `j`-face of `qP`
/// contains a lattice point.
pub fn j_index(p: &Polytope, j: usize) -> u64 {
    let limit = p.denominator_lcm().to_u64().unwrap_or(u64::MAX);
    p.faces_of_dim(j)
        .map(|(_, f)| {
            let rows: Vec<Vec<BigInt>> = f.facets.iter().map(|&i| p.facets()[i].normal.clone()).collect();
            (1..=limit)
                .find(|&q| {
                    let rhs: Vec<Rational> = f
                        .facets
                        .iter()
                        .map(|&i| &p.facets()[i].offset * int(q as i64))
                        .collect();
                    has_integer_solution(&rows, &rhs)
                })
                .unwrap_or(limit)
        })
        .fold(1u64, num_integer::lcm)
}

/// `A_P(t)` is a polynomial for `P = [a, b]` exactly when `a ∈ Z, 2b ∈ Z`,
/// or `2a ∈ Z, b ∈ Z`, or `b − a ∈ Z`.
pub fn predicted_collapse_1d(a: &Rational, b: &Rational) -> bool {
    let two = int(2);
    (a.is_integer() && (b * &two).is_integer())
        || ((a * &two).is_integer() && b.is_integer())
        || (b - a).is_integer()
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodReport {
    pub declared_period: usize,
    pub observed_period: usize,
    pub collapsed: bool,
    pub coefficient_periods: Vec<usize>,
    /// Coefficients that vanish on every residue class.
    pub zero_coefficients: Vec<usize>,
    /// `p_j` for `j = 0..=d`.
    pub j_indices: Vec<u64>,
    /// Whether the period of `c_j` divides `p_j`, for each `j`.
    pub divides_j_index: Vec<bool>,
    pub divisibility_ok: bool,
    pub predicted_collapse: Option<bool>,
    pub prediction_matches: Option<bool>,
    pub fit: SolidQuasiPolynomial,
}

impl PeriodReport {
    pub fn ok(&self) -> bool {
        self.divisibility_ok && self.prediction_matches.unwrap_or(true)
    }
}

/// Observed periods of the solid-angle quasipolynomial against the
/// `j`-index bounds, and in dimension 1 against the classification.
pub fn period_report(p: &Polytope, engine: &AngleEngine) -> Result<PeriodReport> {
    if p.dim() > 3 {
        return Err(Error::Size("period report is limited to dimension 3".into()));
    }
    if p.denominator_lcm() > BigInt::from(6) {
        return Err(Error::Size("period report is limited to denominators dividing lcm ≤ 6".into()));
    }
    let sum = SolidAngleSum::new(p, engine)?;
    let fit = fit_solid_quasi(&sum)?;
    let d = p.dim();
    let zero = Measured::zero();
    let zero_coefficients: Vec<usize> = (0..=d)
        .filter(|&k| {
            fit.full
                .constituents()
                .iter()
                .all(|c| same_within_bounds(&c.coefficient(k), &zero))
        })
        .collect();
    let j_indices: Vec<u64> = (0..=d).map(|j| j_index(p, j)).collect();
    let divides_j_index: Vec<bool> = (0..=d)
        .map(|j| j_indices[j].is_multiple_of(fit.coefficient_periods[j] as u64))
        .collect();
    let predicted_collapse = (d == 1).then(|| {
        let xs: Vec<&Rational> = p.vertices().iter().map(|v| &v[0]).collect();
        let (a, b) = if xs[0] < xs[1] { (xs[0], xs[1]) } else { (xs[1], xs[0]) };
        predicted_collapse_1d(a, b)
    });
    let collapsed = fit.collapsed.is_polynomial();
    Ok(PeriodReport {
        declared_period: fit.declared_period,
        observed_period: fit.collapsed.period(),
        collapsed,
        coefficient_periods: fit.coefficient_periods.clone(),
        zero_coefficients,
        divisibility_ok: divides_j_index.iter().all(|&b| b),
        divides_j_index,
        prediction_matches: predicted_collapse.map(|pred| pred == collapsed),
        predicted_collapse,
        j_indices,
        fit,
    })
}

/// Whether every coefficient of `fit` is exactly zero or matches `expected`
/// within bounds.
pub fn matches_coefficients(poly: &Polynomial, expected: &[f64], tol: f64) -> bool {
    let n = poly.coefficients().len().max(expected.len());
    (0..n).all(|k| {
        let c = poly.coefficient(k);
        let e = expected.get(k).copied().unwrap_or(0.0);
        (c.value - e).abs() <= c.error + tol
    })
}

/// Exact zero as a measured coefficient, for absent powers.
pub fn is_exact_zero(m: &Measured) -> bool {
    m.exact.as_ref().is_some_and(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Policy;
    use crate::rational::frac;
    use std::f64::consts::PI;

    fn poly(points: &[Vec<i64>]) -> Polytope {
        Polytope::from_integer_points(points).unwrap()
    }

    fn cube(d: usize) -> Polytope {
        poly(&(0..1i64 << d).map(|m| (0..d).map(|i| (m >> i) & 1).collect()).collect::<Vec<_>>())
    }

    fn reeve(h: i64) -> Polytope {
        poly(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, h]])
    }

    fn engine() -> AngleEngine {
        AngleEngine::default()
    }

    #[test]
    fn cube_and_square() {
        for d in 1..=3 {
            let c = cube(d);
            assert!((a_eval(&c, 1, &engine()).unwrap().value - 1.0).abs() < 1e-12);
            let SolidFit::Polynomial(f) = fit_solid(&c, &engine()).unwrap() else { panic!() };
            let mut expected = vec![0.0; d + 1];
            expected[d] = 1.0;
            assert!(matches_coefficients(&f.polynomial, &expected, 1e-9));
            assert!(f.polynomial.is_exact(), "{:?}", f.polynomial);
        }
        let sq = cube(2);
        let by_faces = a_eval_by_faces(&sq, 2, &engine()).unwrap();
        assert!((by_faces.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_and_polygons() {
        let tri = poly(&[vec![0, 0], vec![1, 0], vec![0, 1]]);
        assert!((a_eval_by_faces(&tri, 1, &engine()).unwrap().value - 0.5).abs() < 1e-12);
        assert!((vertex_sum(&tri, &engine()).unwrap().value - 0.5).abs() < 1e-12);
        let hex = poly(&[vec![0, 0], vec![2, 0], vec![3, 1], vec![2, 3], vec![0, 2], vec![-1, 1]]);
        let area = to_f64(&hex.volume());
        for t in 1..=3 {
            let a = a_eval(&hex, t, &engine()).unwrap();
            assert!((a.value - area * (t * t) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn reeve_linear_coefficient_is_negative() {
        for h in 1..=6 {
            let SolidFit::Polynomial(f) = fit_solid(&reeve(h), &engine()).unwrap() else { panic!() };
            assert!((f.coefficient(3).value - h as f64 / 6.0).abs() < 1e-9);
            assert!(f.coefficient(1).value < 0.0);
            let s = vertex_sum(&reeve(h), &engine()).unwrap().value;
            assert!((f.coefficient(1).value - (s - h as f64 / 6.0)).abs() < 1e-9);
        }
        let s1 = vertex_sum(&reeve(1), &engine()).unwrap().value;
        let s2 = vertex_sum(&reeve(2), &engine()).unwrap().value;
        assert!((s1 - 0.127).abs() < 1e-3 && (s2 - 0.171).abs() < 1e-3);
    }

    #[test]
    fn point_and_face_sums_agree() {
        for p in [reeve(2), cube(3), poly(&[vec![0, 0, 0], vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2], vec![1, 1, 1]])] {
            let s = SolidAngleSum::new(&p, &engine()).unwrap();
            for t in 1..=3 {
                assert!(s.eval(t).agrees_with(&s.eval_by_faces(t), 1e-9));
            }
        }
    }

    #[test]
    fn vertex_sums() {
        let tet = poly(&[vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        let s = vertex_sum(&tet, &engine()).unwrap().value;
        assert!((s - (3.0 * (1.0f64 / 3.0).acos() / PI - 1.0)).abs() < 1e-12);
        let std3 = poly(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!((vertex_sum(&std3, &engine()).unwrap().value - 0.206).abs() < 1e-3);
        let q = poly(&[vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 1], vec![1, 1, 1]]);
        assert!((vertex_sum(&q, &engine()).unwrap().value - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn brianchon_gram() {
        let tet = poly(&[vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        for p in [cube(2), cube(3), tet, reeve(1), reeve(5)] {
            assert!(brianchon_gram_residual(&p, &engine()).unwrap().value.abs() < 1e-9);
        }
    }

    #[test]
    fn numerators() {
        let r = numerator(&cube(2), &engine()).unwrap();
        assert!(r.ok());
        let v = r.numerator.values();
        assert!((v[1] - 1.0).abs() < 1e-12 && (v[2] - 1.0).abs() < 1e-12);
        let seg = cube(1);
        let v = numerator(&seg, &engine()).unwrap().numerator.values();
        assert!(v[0].abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15);
        // unimodular simplex: (0, S, 1 - 2S, S)
        let q = poly(&[vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 1], vec![1, 1, 1]]);
        let s = vertex_sum(&q, &engine()).unwrap().value;
        let v = numerator(&q, &engine()).unwrap().numerator.values();
        for (a, b) in v.iter().zip([0.0, s, 1.0 - 2.0 * s, s]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn unimodality() {
        let r = unimodality_report(&reeve(4), &engine()).unwrap();
        assert!(r.linear.value < 0.0 && r.unimodal);
        let wide = poly(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![-20, -20, 1]]);
        let r = unimodality_report(&wide, &engine()).unwrap();
        assert!(r.only_vertex_points);
        assert!(r.vertex_sum.value > 1.0 / 3.0);
        assert!(!r.unimodal);
        let e = &r.numerator.entries;
        assert!(e[2].value < e[1].value);
    }

    #[test]
    fn parity_free_fit_has_small_wrong_parity_terms() {
        let p = reeve(3);
        let s = SolidAngleSum::new(&p, &engine()).unwrap();
        let f = fit_solid_polynomial(&s, false).unwrap();
        for k in [0, 2] {
            assert!(f.coefficient(k).value.abs() < 1e-6);
        }
    }

    #[test]
    fn half_prisms_collapse() {
        let half_square = Polytope::new(vec![
            vec![int(0), int(0)],
            vec![frac(1, 2), int(0)],
            vec![int(0), int(1)],
            vec![frac(1, 2), int(1)],
        ])
        .unwrap();
        let r = period_report(&half_square, &engine()).unwrap();
        assert!(r.collapsed, "{r:?}");
        assert!(matches_coefficients(&r.fit.collapsed.constituents()[0], &[0.0, 0.0, 0.5], 1e-9));
        assert!(r.divisibility_ok);
    }

    #[test]
    fn one_dimensional_classification() {
        for (a, b, collapses) in [
            (frac(0, 1), frac(1, 2), true),
            (frac(1, 3), frac(4, 3), true),
            (frac(0, 1), frac(1, 3), false),
            (frac(1, 2), frac(3, 4), false),
        ] {
            assert_eq!(predicted_collapse_1d(&a, &b), collapses);
            let p = Polytope::new(vec![vec![a.clone()], vec![b.clone()]]).unwrap();
            let r = period_report(&p, &engine()).unwrap();
            assert_eq!(r.collapsed, collapses, "[{a}, {b}]: {r:?}");
            assert_eq!(r.prediction_matches, Some(true));
            assert!(r.divisibility_ok);
        }
    }

    #[test]
    fn odd_dimensional_constant_term_need_not_vanish() {
        let p = Polytope::new(vec![vec![int(0)], vec![frac(1, 3)]]).unwrap();
        let r = period_report(&p, &engine()).unwrap();
        let c0 = r.fit.full.constituents()[1].coefficient(0);
        assert!((c0.value - 1.0 / 6.0).abs() < 1e-9);
    }

    #[test]
    fn j_indices() {
        let p = Polytope::new(vec![
            vec![int(0), int(0)],
            vec![frac(1, 2), int(0)],
            vec![int(0), int(1)],
            vec![frac(1, 2), int(1)],
        ])
        .unwrap();
        assert_eq!((0..=2).map(|j| j_index(&p, j)).collect::<Vec<_>>(), vec![2, 2, 1]);
        assert_eq!(j_index(&reeve(3), 0), 1);
    }

    #[test]
    fn monte_carlo_policy_has_honest_bounds() {
        let mut e = AngleEngine::with_policy(Policy::MonteCarlo);
        e.mc_samples = 200_000;
        let p = reeve(2);
        let s = SolidAngleSum::new(&p, &e).unwrap();
        let exact = SolidAngleSum::new(&p, &engine()).unwrap();
        for t in 1..=2 {
            assert!(s.eval(t).agrees_with(&exact.eval(t), 0.0));
        }
    }
}
