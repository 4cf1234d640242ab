//! Lattice-point counting functions and their (quasi)polynomial fits.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measured::Measured;
use crate::polytope::Polytope;
use crate::rational::{binomial, fit_polynomial, int, Polynomial, PolynomialFit, Rational, Sample};

/// Extra evaluations beyond the unknowns, used only as residual checks.
pub const VALIDATION_POINTS: usize = 2;

/// Largest period accepted for quasipolynomial fits.
pub const MAX_PERIOD: usize = 60;

/// `#(tP ∩ Z^d)`.
pub fn count(p: &Polytope, t: i64) -> Result<u64> {
    check_t(t)?;
    Ok(p.count_lattice_points(t))
}

/// Lattice points in the relative interior of `t·F`.
pub fn count_relative_interior(p: &Polytope, face: usize, t: i64) -> Result<u64> {
    check_t(t)?;
    Ok(p.count_relative_interior(face, t))
}

fn check_t(t: i64) -> Result<()> {
    if t < 1 {
        return Err(Error::Validation(format!("dilation factor {t} must be positive")));
    }
    Ok(())
}

/// Function with `period` polynomial constituents; constituent `r` applies
/// to `t ≡ r (mod period)`.
#[derive(Clone, Debug, Serialize)]
pub struct QuasiPolynomial {
    period: usize,
    constituents: Vec<Polynomial>,
}

impl QuasiPolynomial {
    pub fn new(constituents: Vec<Polynomial>) -> Result<Self> {
        if constituents.is_empty() {
            return Err(Error::Validation("a quasipolynomial needs a constituent".into()));
        }
        Ok(Self {
            period: constituents.len(),
            constituents,
        })
    }

    pub fn polynomial(p: Polynomial) -> Self {
        Self {
            period: 1,
            constituents: vec![p],
        }
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn constituents(&self) -> &[Polynomial] {
        &self.constituents
    }

    pub fn constituent(&self, t: i64) -> &Polynomial {
        &self.constituents[t.rem_euclid(self.period as i64) as usize]
    }

    pub fn is_polynomial(&self) -> bool {
        self.period == 1
    }

    pub fn eval(&self, t: i64) -> f64 {
        self.constituent(t).eval(t as f64)
    }

    pub fn eval_exact(&self, t: i64) -> Option<Rational> {
        self.constituent(t).eval_exact(&int(t))
    }

    /// Smallest period under which constituents agree, given an equality
    /// test on polynomials.
    pub fn collapse_by(&self, same: impl Fn(&Polynomial, &Polynomial) -> bool) -> QuasiPolynomial {
        let q = minimal_period(self.period, |a, b| same(&self.constituents[a], &self.constituents[b]));
        QuasiPolynomial {
            period: q,
            constituents: self.constituents[..q].to_vec(),
        }
    }

    /// Collapse with exact equality of coefficients.
    pub fn collapse_exact(&self) -> QuasiPolynomial {
        self.collapse_by(|a, b| {
            a.exact_coefficients().is_some() && a.exact_coefficients() == b.exact_coefficients()
        })
    }
}

/// Smallest divisor `q` of `period` such that residues congruent mod `q`
/// are all `same`.
pub fn minimal_period(period: usize, same: impl Fn(usize, usize) -> bool) -> usize {
    (1..=period)
        .filter(|q| period.is_multiple_of(*q))
        .find(|&q| (0..period).all(|r| same(r, r % q)))
        .unwrap_or(period)
}

/// Exact counts for a list of dilation factors, with `L(0) = 1`.
fn counts(p: &Polytope, ts: &[i64]) -> Vec<Sample> {
    ts.par_iter()
        .map(|&t| {
            let v = if t == 0 { 1 } else { p.count_lattice_points(t) };
            Sample::new(t, Measured::exact(int(v as i64)))
        })
        .collect()
}

fn require_residuals(fit: PolynomialFit, what: &str) -> Result<Polynomial> {
    if let Some(r) = fit.residuals.iter().find(|r| !r.ok()) {
        return Err(Error::Consistency(format!(
            "{what}: residual {} at t = {}",
            r.residual, r.t
        )));
    }
    Ok(fit.polynomial)
}

/// Sample points for residue `r` of a period-`p` fit with `unknowns`
/// coefficients; `r = 0` is anchored at `t = 0` when `anchor` is set.
pub(crate) fn residue_points(r: usize, p: usize, unknowns: usize, anchor: bool) -> Vec<i64> {
    let n = unknowns + VALIDATION_POINTS;
    let start = if r == 0 && !anchor { p } else { r };
    (0..n).map(|i| (start + i * p) as i64).collect()
}

pub(crate) fn check_period(p: &Polytope) -> Result<usize> {
    let l = p.denominator_lcm();
    match l.to_usize() {
        Some(q) if q <= MAX_PERIOD => Ok(q),
        _ => Err(Error::Size(format!(
            "denominator lcm {l} exceeds the period limit {MAX_PERIOD}"
        ))),
    }
}

/// Ehrhart (quasi)polynomial: one exact fit per residue class of the
/// denominator lcm, reduced to the minimal period.
pub fn fit_ehrhart(p: &Polytope) -> Result<QuasiPolynomial> {
    let period = check_period(p)?;
    let d = p.dim();
    let cap = (2 * (d + 1) * period) as i64;
    let support: Vec<usize> = (0..=d).collect();
    let constituents = (0..period)
        .map(|r| {
            let ts = residue_points(r, period, d + 1, true);
            if ts.iter().any(|&t| t > cap) {
                return Err(Error::Size(format!("evaluation beyond t = {cap}")));
            }
            require_residuals(
                fit_polynomial(&counts(p, &ts), &support)?,
                "Ehrhart fit",
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuasiPolynomial::new(constituents)?.collapse_exact())
}

/// Ehrhart polynomial of a lattice polytope.
pub fn ehrhart_polynomial(p: &Polytope) -> Result<Polynomial> {
    if !p.is_lattice() {
        return Err(Error::Precondition("polytope has non-integer vertices".into()));
    }
    let q = fit_ehrhart(p)?;
    debug_assert!(q.is_polynomial());
    Ok(q.constituents()[0].clone())
}

#[derive(Clone, Debug, Serialize)]
pub struct ReciprocityRow {
    pub t: i64,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub fitted_at_minus_t: Rational,
    pub interior_count: u64,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReciprocityReport {
    pub dim: usize,
    pub rows: Vec<ReciprocityRow>,
    pub ok: bool,
}

/// Compares `L(-t)` from the fitted polynomial with `(-1)^d` times the
/// interior count of `tP`, for `t = 1..=3`.
pub fn reciprocity_check(p: &Polytope) -> Result<ReciprocityReport> {
    let poly = ehrhart_polynomial(p)?;
    let d = p.dim();
    let top = p.top_face();
    let rows: Vec<ReciprocityRow> = (1..=3)
        .map(|t| {
            let fitted = poly.eval_exact(&int(-t)).expect("exact fit");
            let interior = p.count_relative_interior(top, t);
            let signed = if d.is_multiple_of(2) { int(interior as i64) } else { -int(interior as i64) };
            ReciprocityRow {
                t,
                ok: fitted == signed,
                fitted_at_minus_t: fitted,
                interior_count: interior,
            }
        })
        .collect();
    Ok(ReciprocityReport {
        dim: d,
        ok: rows.iter().all(|r| r.ok),
        rows,
    })
}

/// Numerator `a_0 + … + a_d z^d` of `Σ_t f(t) z^t = (…)/(1-z)^{d+1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumeratorVector {
    pub entries: Vec<Measured>,
}

impl NumeratorVector {
    /// Exponent of `(1 - z)` in the denominator.
    pub fn denominator_exponent(&self) -> usize {
        self.entries.len()
    }

    pub fn dim(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|m| m.value).collect()
    }

    /// Integer entries, when every entry is an exact integer.
    pub fn integers(&self) -> Option<Vec<BigInt>> {
        self.entries
            .iter()
            .map(|m| m.exact.as_ref().filter(|r| r.is_integer()).map(|r| r.to_integer()))
            .collect()
    }

    /// Indices `j` with `a_j < 0` beyond the error bound (and `slack`).
    pub fn negative_entries(&self, slack: f64) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, m)| match &m.exact {
                Some(r) => r.is_negative(),
                None => m.value < -(m.error + slack),
            })
            .map(|(j, _)| j)
            .collect()
    }

    /// Entry-wise sum.
    pub fn add(&self, other: &NumeratorVector) -> Result<NumeratorVector> {
        if self.entries.len() != other.entries.len() {
            return Err(Error::Shape("numerators of different length".into()));
        }
        Ok(NumeratorVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }
}

/// `a_k = Σ_{j ≤ k} (-1)^j C(d+1, j) f(k - j)` from `f(0), …, f(d)`.
pub fn binomial_transform(values: &[Measured]) -> NumeratorVector {
    let d = values.len() - 1;
    let entries = (0..=d)
        .map(|k| {
            (0..=k)
                .map(|j| {
                    let c = binomial(d as u64 + 1, j as u64) as i64;
                    values[k - j].scale(if j % 2 == 0 { c } else { -c })
                })
                .sum()
        })
        .collect();
    NumeratorVector { entries }
}

/// h*-vector of a lattice polytope.
pub fn hstar(p: &Polytope) -> Result<NumeratorVector> {
    if !p.is_lattice() {
        return Err(Error::Precondition("polytope has non-integer vertices".into()));
    }
    let ts: Vec<i64> = (0..=p.dim() as i64).collect();
    let values: Vec<Measured> = counts(p, &ts).into_iter().map(|s| s.value).collect();
    Ok(binomial_transform(&values))
}

/// Reports the negative entries of an h*-vector as a theorem violation.
pub fn check_hstar(h: &NumeratorVector) -> Result<()> {
    let neg = h.negative_entries(0.0);
    if neg.is_empty() {
        Ok(())
    } else {
        Err(Error::Consistency(format!("negative h* entries at {neg:?}")))
    }
}

/// `(d! · vol)`, for comparison with `Σ h*_j`.
pub fn normalized_volume(p: &Polytope) -> Rational {
    let f: BigInt = (1..=p.dim() as u64).product::<u64>().max(1).into();
    p.volume() * Rational::from_integer(f)
}

/// Whether two exact polynomials are equal coefficient-wise.
pub fn same_exact(a: &Polynomial, b: &Polynomial) -> bool {
    match (a.exact_coefficients(), b.exact_coefficients()) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}

/// The coefficient of `t^k`, zero when absent.
pub fn exact_coefficient(p: &Polynomial, k: usize) -> Rational {
    p.coefficient(k).exact.unwrap_or_else(Rational::zero)
}

/// `Σ over faces of L_{F°}(t)`, which must equal `L(t)`.
pub fn face_partition_count(p: &Polytope, t: i64) -> u64 {
    (0..p.faces().len())
        .map(|f| p.count_relative_interior(f, t))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use num_traits::One;

    fn poly(points: &[Vec<i64>]) -> Polytope {
        Polytope::from_integer_points(points).unwrap()
    }

    fn reeve(h: i64) -> Polytope {
        poly(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, h]])
    }

    fn simplex(d: usize) -> Polytope {
        let mut pts = vec![vec![0; d]];
        for i in 0..d {
            let mut e = vec![0; d];
            e[i] = 1;
            pts.push(e);
        }
        poly(&pts)
    }

    fn cube(d: usize) -> Polytope {
        poly(
            &(0..1i64 << d)
                .map(|m| (0..d).map(|i| (m >> i) & 1).collect())
                .collect::<Vec<_>>(),
        )
    }

    fn exact(p: &Polynomial) -> Vec<Rational> {
        p.exact_coefficients().unwrap()
    }

    #[test]
    fn counts() {
        for h in [1, 2, 5, 12] {
            // direct enumeration oracle for t = 2
            assert_eq!(count(&reeve(h), 2).unwrap(), h as u64 + 9);
            assert_eq!(reeve(h).lattice_points(2).len() as u64, h as u64 + 9);
        }
        assert_eq!(count(&cube(3), 2).unwrap(), 27);
        for d in 1..=4usize {
            for t in 1..=4i64 {
                assert_eq!(
                    count(&simplex(d), t).unwrap(),
                    binomial(t as u64 + d as u64, d as u64)
                );
            }
        }
        assert!(count(&cube(2), 0).is_err());
    }

    #[test]
    fn relative_interior_counts() {
        let sq = cube(2);
        assert_eq!(count_relative_interior(&sq, sq.top_face(), 2).unwrap(), 1);
        let seg = cube(1);
        assert_eq!(count_relative_interior(&seg, seg.top_face(), 3).unwrap(), 2);
        let tri = simplex(2);
        // oracle: points (a, b) with a, b > 0 and a + b < 3
        let oracle = (1..3).flat_map(|a| (1..3).map(move |b| (a, b))).filter(|(a, b)| a + b < 3).count();
        assert_eq!(count_relative_interior(&tri, tri.top_face(), 3).unwrap(), oracle as u64);
    }

    #[test]
    fn reeve_ehrhart() {
        for h in [1, 12, 20] {
            let l = ehrhart_polynomial(&reeve(h)).unwrap();
            assert_eq!(exact(&l), vec![int(1), int(2) - frac(h, 6), int(1), frac(h, 6)]);
        }
    }

    #[test]
    fn cube_ehrhart() {
        for d in 1..=3 {
            let l = ehrhart_polynomial(&cube(d)).unwrap();
            let expected: Vec<Rational> = (0..=d as u64).map(|k| int(binomial(d as u64, k) as i64)).collect();
            assert_eq!(exact(&l), expected);
        }
    }

    #[test]
    fn half_segment_quasipolynomial() {
        let seg = Polytope::new(vec![vec![int(0)], vec![frac(1, 2)]]).unwrap();
        let q = fit_ehrhart(&seg).unwrap();
        assert_eq!(q.period(), 2);
        assert_eq!(exact(&q.constituents()[0]), vec![int(1), frac(1, 2)]);
        assert_eq!(exact(&q.constituents()[1]), vec![frac(1, 2), frac(1, 2)]);
        for t in 1..10 {
            assert_eq!(q.eval_exact(t).unwrap(), int(t / 2 + 1));
        }
    }

    #[test]
    fn shifted_segment_keeps_its_period() {
        // endpoints are lattice points only when 3 | t
        let seg = Polytope::new(vec![vec![frac(1, 3)], vec![frac(4, 3)]]).unwrap();
        let q = fit_ehrhart(&seg).unwrap();
        assert_eq!(q.period(), 3);
        assert_eq!(exact(&q.constituents()[0]), vec![int(1), int(1)]);
        assert_eq!(exact(&q.constituents()[1]), vec![int(0), int(1)]);
        assert_eq!(exact(&q.constituents()[2]), vec![int(0), int(1)]);
    }

    #[test]
    fn translated_lattice_segment_collapses() {
        let seg = Polytope::new(vec![vec![frac(1, 2)], vec![frac(5, 2)]]).unwrap();
        let q = fit_ehrhart(&seg).unwrap();
        assert_eq!(q.period(), 2);
        let seg = Polytope::new(vec![vec![int(0)], vec![frac(3, 1)]]).unwrap();
        assert_eq!(fit_ehrhart(&seg).unwrap().period(), 1);
    }

    #[test]
    fn reciprocity() {
        for p in [cube(2), reeve(3), simplex(2), simplex(3)] {
            let r = reciprocity_check(&p).unwrap();
            assert!(r.ok, "{r:?}");
        }
        let tri = simplex(2);
        let l = ehrhart_polynomial(&tri).unwrap();
        assert_eq!(l.eval_exact(&int(-2)).unwrap(), int(0));
        assert_eq!(ehrhart_polynomial(&reeve(7)).unwrap().eval_exact(&int(-1)).unwrap(), int(0));
    }

    #[test]
    fn hstar_examples() {
        for h in [1, 2, 12] {
            let v = hstar(&reeve(h)).unwrap();
            assert_eq!(
                v.integers().unwrap(),
                vec![1, 0, h - 1, 0].into_iter().map(BigInt::from).collect::<Vec<_>>()
            );
        }
        assert_eq!(
            hstar(&cube(2)).unwrap().integers().unwrap(),
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(0)]
        );
        for d in 1..=4 {
            let mut e = vec![BigInt::zero(); d + 1];
            e[0] = BigInt::one();
            assert_eq!(hstar(&simplex(d)).unwrap().integers().unwrap(), e);
        }
    }

    #[test]
    fn leading_and_second_coefficients() {
        let polys = [
            reeve(5),
            cube(3),
            poly(&[vec![0, 0, 0], vec![2, 0, 0], vec![0, 3, 0], vec![1, 1, 2], vec![2, 2, 1]]),
            poly(&[vec![0, 0], vec![3, 1], vec![1, 4], vec![-1, 2]]),
        ];
        for p in &polys {
            let l = ehrhart_polynomial(p).unwrap();
            let d = p.dim();
            assert_eq!(exact_coefficient(&l, d), p.volume());
            let facets: Rational = (0..p.facets().len()).map(|f| p.normalized_facet_volume(f)).sum();
            assert_eq!(exact_coefficient(&l, d - 1), facets / int(2));
        }
    }

    #[test]
    fn quasi_eval_and_rational_cube() {
        let p = Polytope::new(vec![
            vec![int(0), int(0)],
            vec![frac(1, 2), int(0)],
            vec![int(0), int(1)],
            vec![frac(1, 2), int(1)],
        ])
        .unwrap();
        let q = fit_ehrhart(&p).unwrap();
        assert_eq!(q.period(), 2);
        for t in 1..8 {
            assert_eq!(q.eval_exact(t).unwrap(), int(p.count_lattice_points(t) as i64));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn pts(d: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
            proptest::collection::vec(proptest::collection::vec(-2i64..=2, d), d + 1..d + 5)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(20))]

            #[test]
            fn reciprocity_and_volume(points in (2usize..=3).prop_flat_map(pts)) {
                let Ok(p) = Polytope::from_integer_points(&points) else { return Ok(()); };
                prop_assert!(reciprocity_check(&p).unwrap().ok);
                let l = ehrhart_polynomial(&p).unwrap();
                prop_assert_eq!(exact_coefficient(&l, p.dim()), p.volume());
                let h = hstar(&p).unwrap();
                prop_assert!(check_hstar(&h).is_ok());
                let sum: BigInt = h.integers().unwrap().into_iter().sum();
                prop_assert_eq!(Rational::from_integer(sum), normalized_volume(&p));
                prop_assert_eq!(face_partition_count(&p, 2), p.count_lattice_points(2));
            }
        }
    }
}
