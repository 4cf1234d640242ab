//! Exact rational scalars, dense matrices and polynomial interpolation.
//!
//! Everything combinatorial in the crate (facets, tightness, membership,
//! determinants) goes through this module in exact arithmetic. Floating
//! point only appears once angles are involved, and the interpolation
//! routines here keep the weights exact even when the sampled values are
//! floats, so that error bounds can be propagated through them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::measured::Measured;
use serde::Serialize;

/// Arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p/q"` or `"p"` (optionally signed, surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a nonzero rational vector to the unique primitive integer vector
/// pointing the same way.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let l = lcm_of_denominators(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Dense rectangular matrix of rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RMatrix) -> Result<RMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s = (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (RMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn null_space(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<RMatrix> {
        if self.rows != self.cols {
            return Err(Error::Shape("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Exact determinant by fraction-free Bareiss elimination. Rows are first
/// cleared of denominators so the elimination runs over the integers.
pub fn det(m: &RMatrix) -> Result<Rational> {
    if m.rows != m.cols {
        return Err(Error::Shape(format!(
            "determinant of {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row = m.row(i);
            let l = lcm_of_denominators(row);
            scale *= &l;
            row.iter().map(|x| (x * &l).to_integer()).collect()
        })
        .collect();
    Ok(Rational::new(bareiss(&mut a), scale))
}

fn bareiss(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Solves `m x = rhs` exactly.
pub fn solve(m: &RMatrix, rhs: &[Rational]) -> Result<Vec<Rational>> {
    if m.rows != m.cols {
        return Err(Error::Shape("solve needs a square matrix".into()));
    }
    if rhs.len() != m.rows {
        return Err(Error::Shape("right-hand side length mismatch".into()));
    }
    let n = m.rows;
    let mut aug = RMatrix::zeros(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n, rhs[i].clone());
    }
    let (r, pivots) = aug.rref();
    if pivots.len() < n || pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
        return Err(Error::Singular);
    }
    Ok((0..n).map(|i| r.get(i, n).clone()).collect())
}

/// Basis of the vectors orthogonal to every row, for `cols`-dimensional rows
/// (which may be an empty list).
pub fn null_space_of(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    if rows.is_empty() {
        return RMatrix::identity(cols).to_rows();
    }
    RMatrix::from_rows(rows.to_vec()).map_or_else(|_| Vec::new(), |m| m.null_space())
}

/// Rank of a set of vectors.
pub fn rank_of(vectors: &[Vec<Rational>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    RMatrix::from_rows(vectors.to_vec()).map_or(0, |m| m.rank())
}

/// Whether `a x = c` has an integer solution `x`, via column-style Hermite
/// reduction of the integer matrix `a`.
pub fn has_integer_solution(a: &[Vec<BigInt>], c: &[Rational]) -> bool {
    if c.iter().any(|x| !x.is_integer()) {
        return false;
    }
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; m];
    let mut col = 0;
    for r in 0..m {
        if col == n {
            break;
        }
        for j in col + 1..n {
            // gcd-combine columns `col` and `j` until h[r][j] vanishes
            while !h[r][j].is_zero() {
                let q = h[r][col].div_floor(&h[r][j]);
                for row in h.iter_mut() {
                    let v = &row[col] - &q * &row[j];
                    row[col] = v;
                }
                for row in h.iter_mut() {
                    row.swap(col, j);
                }
            }
        }
        if !h[r][col].is_zero() {
            pivot_of_row[r] = Some(col);
            col += 1;
        }
    }
    let mut y: Vec<BigInt> = vec![BigInt::zero(); n];
    for r in 0..m {
        let target = c[r].to_integer();
        match pivot_of_row[r] {
            Some(p) => {
                let partial: BigInt = (0..p).map(|j| &h[r][j] * &y[j]).sum();
                let (q, rem) = (target - partial).div_rem(&h[r][p]);
                if !rem.is_zero() {
                    return false;
                }
                y[p] = q;
            }
            None => {
                let partial: BigInt = (0..n).map(|j| &h[r][j] * &y[j]).sum();
                if partial != target {
                    return false;
                }
            }
        }
    }
    true
}

/// One polynomial coefficient: float value, absolute error bound, and the
/// exact rational when it is known.
pub type Coefficient = Measured;

/// Polynomial in one variable, coefficients indexed by degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Polynomial {
    coefficients: Vec<Coefficient>,
}

impl Polynomial {
    pub fn new(mut coefficients: Vec<Coefficient>) -> Self {
        while coefficients
            .last()
            .is_some_and(|c| c.value == 0.0 && c.error == 0.0)
        {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn from_exact(coefficients: Vec<Rational>) -> Self {
        Self::new(coefficients.into_iter().map(Measured::exact).collect())
    }

    pub fn coefficients(&self) -> &[Coefficient] {
        &self.coefficients
    }

    /// Coefficient of `t^k`; zero past the degree.
    pub fn coefficient(&self, k: usize) -> Coefficient {
        self.coefficients.get(k).cloned().unwrap_or_else(Measured::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn is_exact(&self) -> bool {
        self.coefficients.iter().all(|c| c.exact.is_some())
    }

    pub fn exact_coefficients(&self) -> Option<Vec<Rational>> {
        self.coefficients.iter().map(|c| c.exact.clone()).collect()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.value)
    }

    pub fn eval_exact(&self, t: &Rational) -> Option<Rational> {
        let cs = self.exact_coefficients()?;
        Some(cs.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c))
    }
}

/// A residual at a validation point not used to solve for the coefficients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub t: i64,
    pub residual: f64,
    pub bound: f64,
}

impl Residual {
    pub fn ok(&self) -> bool {
        self.residual.abs() <= self.bound
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PolynomialFit {
    pub polynomial: Polynomial,
    pub residuals: Vec<Residual>,
}

impl PolynomialFit {
    pub fn residuals_ok(&self) -> bool {
        self.residuals.iter().all(Residual::ok)
    }
}

/// A sampled value `f(t)` with its error bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub t: i64,
    pub value: Measured,
}

impl Sample {
    pub fn new(t: i64, value: Measured) -> Self {
        Self { t, value }
    }
}

fn power(t: i64, k: usize) -> Rational {
    Rational::from_integer(BigInt::from(t).pow(k as u32))
}

/// Interpolation weights: row `j` gives coefficient `support[j]` as a linear
/// combination of the values at `ts`.
fn interpolation_weights(ts: &[i64], support: &[usize]) -> Result<RMatrix> {
    let v = RMatrix::from_rows(
        ts.iter()
            .map(|&t| support.iter().map(|&k| power(t, k)).collect())
            .collect(),
    )?;
    v.inverse()
}

fn check_points(ts: &[i64], support: &[usize]) -> Result<()> {
    if ts.len() < support.len() {
        return Err(Error::Arity {
            points: ts.len(),
            unknowns: support.len(),
        });
    }
    let mut sorted = ts.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ts.len() {
        return Err(Error::Validation("sample points must be distinct".into()));
    }
    Ok(())
}

/// Fits a polynomial restricted to the exponents in `support`. The first
/// `support.len()` samples determine the coefficients; every further sample
/// yields a residual with a propagated bound. Exact sample values give exact
/// coefficients and exact residuals.
pub fn fit_polynomial(samples: &[Sample], support: &[usize]) -> Result<PolynomialFit> {
    let ts: Vec<i64> = samples.iter().map(|s| s.t).collect();
    check_points(&ts, support)?;
    let n = support.len();
    let w = interpolation_weights(&ts[..n], support)?;
    let all_exact = samples.iter().all(|s| s.value.exact.is_some());
    let max_deg = support.iter().copied().max().unwrap_or(0);

    let mut coefficients = vec![Measured::zero(); max_deg + 1];
    for (j, &k) in support.iter().enumerate() {
        coefficients[k] = combine(w.row(j), &samples[..n], all_exact);
    }

    let mut residuals = Vec::new();
    for extra in &samples[n..] {
        let row: Vec<Rational> = (0..n)
            .map(|i| {
                support
                    .iter()
                    .enumerate()
                    .map(|(j, &k)| power(extra.t, k) * w.get(j, i))
                    .sum()
            })
            .collect();
        let predicted = combine(&row, &samples[..n], all_exact);
        let diff = extra.value.clone() - predicted;
        let residual = match &diff.exact {
            Some(r) => to_f64(r),
            None => diff.value,
        };
        residuals.push(Residual {
            t: extra.t,
            residual,
            bound: diff.error,
        });
    }
    Ok(PolynomialFit {
        polynomial: Polynomial::new(coefficients),
        residuals,
    })
}

/// Convenience wrapper for exact data.
pub fn fit_polynomial_exact(points: &[(i64, Rational)], support: &[usize]) -> Result<PolynomialFit> {
    let samples: Vec<Sample> = points
        .iter()
        .map(|(t, v)| Sample::new(*t, Measured::exact(v.clone())))
        .collect();
    fit_polynomial(&samples, support)
}

/// Applies exact weights to sampled values, propagating error bounds and a
/// small allowance for floating-point accumulation.
fn combine(weights: &[Rational], samples: &[Sample], exact: bool) -> Measured {
    if exact {
        let r: Rational = weights
            .iter()
            .zip(samples)
            .map(|(w, s)| w * s.value.exact.as_ref().expect("exact sample"))
            .sum();
        return Measured::exact(r);
    }
    let mut value = 0.0;
    let mut error = 0.0;
    let mut magnitude = 0.0;
    for (w, s) in weights.iter().zip(samples) {
        let wf = to_f64(w);
        value += wf * s.value.value;
        error += wf.abs() * s.value.error;
        magnitude += (wf * s.value.value).abs();
    }
    Measured::new(value, error + 64.0 * f64::EPSILON * magnitude)
}

/// Largest `|x - p/q|` accepted when snapping a float to a small fraction.
pub fn snap_to_fraction(x: f64, max_denominator: u64, tol: f64) -> Option<Rational> {
    (1..=max_denominator).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() <= tol).then(|| Rational::new(BigInt::from(p as i64), q.into()))
    })
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RMatrix {
        RMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&RMatrix::identity(3)).unwrap(), int(1));
        assert_eq!(det(&m(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])).unwrap(), int(2));
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])).unwrap(), int(0));
        assert!(matches!(det(&m(&[&[1, 2, 3]])), Err(Error::Shape(_))));
    }

    #[test]
    fn det_with_fractions_and_pivoting() {
        let a = RMatrix::from_rows(vec![
            vec![int(0), frac(1, 2)],
            vec![frac(2, 3), int(5)],
        ])
        .unwrap();
        assert_eq!(det(&a).unwrap(), frac(-1, 3));
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            solve(&RMatrix::identity(2), &[int(3), int(5)]).unwrap(),
            vec![int(3), int(5)]
        );
        assert_eq!(
            solve(&m(&[&[2, 0], &[0, 4]]), &[int(1), int(1)]).unwrap(),
            vec![frac(1, 2), frac(1, 4)]
        );
        // basis vectors (1,0,0), (0,1,0), (1,1,2) as columns
        let basis = m(&[&[1, 0, 1], &[0, 1, 1], &[0, 0, 2]]);
        assert_eq!(
            solve(&basis, &[int(1), int(1), int(1)]).unwrap(),
            vec![frac(1, 2), frac(1, 2), frac(1, 2)]
        );
        assert!(matches!(
            solve(&m(&[&[1, 2], &[2, 4]]), &[int(1), int(1)]),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn fit_examples() {
        let cube = fit_polynomial_exact(&[(1, int(1)), (2, int(8)), (3, int(27))], &[3]).unwrap();
        assert_eq!(cube.polynomial.exact_coefficients().unwrap(), vec![int(0), int(0), int(0), int(1)]);
        assert!(cube.residuals.iter().all(|r| r.residual == 0.0));

        let sq = fit_polynomial_exact(&[(1, int(1)), (2, int(4))], &[2]).unwrap();
        assert_eq!(sq.polynomial.coefficient(2).exact, Some(int(1)));

        let reeve = fit_polynomial_exact(
            &[(1, int(4)), (2, int(21)), (3, int(64)), (4, int(145))],
            &[0, 1, 2, 3],
        )
        .unwrap();
        assert_eq!(
            reeve.polynomial.exact_coefficients().unwrap(),
            vec![int(1), int(0), int(1), int(2)]
        );
    }

    #[test]
    fn fit_arity_error() {
        assert!(matches!(
            fit_polynomial_exact(&[(1, int(1))], &[0, 1]),
            Err(Error::Arity { points: 1, unknowns: 2 })
        ));
    }

    #[test]
    fn float_fit_propagates_bounds() {
        let samples: Vec<Sample> = (1..=4)
            .map(|t| Sample::new(t, Measured::new((t * t) as f64 + 1e-7, 1e-6)))
            .collect();
        let fit = fit_polynomial(&samples, &[0, 2]).unwrap();
        assert!((fit.polynomial.coefficient(2).value - 1.0).abs() < 1e-6);
        assert!(fit.residuals_ok());
    }

    #[test]
    fn integer_solvability() {
        let a = vec![vec![BigInt::from(2), BigInt::from(0)]];
        assert!(has_integer_solution(&a, &[int(4)]));
        assert!(!has_integer_solution(&a, &[int(3)]));
        assert!(!has_integer_solution(&a, &[frac(1, 2)]));
        let b = vec![
            vec![BigInt::from(2), BigInt::from(3)],
            vec![BigInt::from(0), BigInt::from(0)],
        ];
        assert!(has_integer_solution(&b, &[int(1), int(0)]));
        assert!(!has_integer_solution(&b, &[int(1), int(1)]));
        let c = vec![vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)]];
        assert!(has_integer_solution(&c, &[int(-7)]));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational(" -3/6 ").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&frac(4, 2)), "2");
        assert_eq!(format_rational(&frac(-1, 3)), "-1/3");
    }

    #[test]
    fn null_space_and_rank() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1]]);
        let ns = a.null_space();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).unwrap().iter().all(Zero::is_zero));
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn snapping() {
        assert_eq!(snap_to_fraction(0.16666666666666, 12, 1e-9), Some(frac(1, 6)));
        assert_eq!(snap_to_fraction(0.127, 12, 1e-9), None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix(n: usize) -> impl Strategy<Value = RMatrix> {
            proptest::collection::vec((-6i64..=6, 1i64..=4), n * n).prop_map(move |v| {
                RMatrix::from_rows(
                    v.chunks(n)
                        .map(|r| r.iter().map(|&(p, q)| frac(p, q)).collect())
                        .collect(),
                )
                .unwrap()
            })
        }

        proptest! {
            #[test]
            fn det_is_multiplicative(
                (a, b) in (2usize..=3).prop_flat_map(|n| (small_matrix(n), small_matrix(n)))
            ) {
                let ab = a.mul(&b).unwrap();
                prop_assert_eq!(det(&ab).unwrap(), det(&a).unwrap() * det(&b).unwrap());
            }

            #[test]
            fn solve_reproduces_rhs(a in small_matrix(3), rhs in proptest::collection::vec(-9i64..=9, 3)) {
                let rhs: Vec<Rational> = rhs.into_iter().map(int).collect();
                match solve(&a, &rhs) {
                    Ok(x) => prop_assert_eq!(a.mul_vec(&x).unwrap(), rhs),
                    Err(Error::Singular) => prop_assert!(det(&a).unwrap().is_zero()),
                    Err(e) => return Err(TestCaseError::fail(e.to_string())),
                }
            }

            #[test]
            fn fit_recovers_exact_polynomial(cs in proptest::collection::vec((-9i64..=9, 1i64..=6), 4)) {
                let coeffs: Vec<Rational> = cs.iter().map(|&(p, q)| frac(p, q)).collect();
                let poly = Polynomial::from_exact(coeffs.clone());
                let points: Vec<(i64, Rational)> = (0..6)
                    .map(|t| (t, poly.eval_exact(&int(t)).unwrap()))
                    .collect();
                let fit = fit_polynomial_exact(&points, &[0, 1, 2, 3]).unwrap();
                prop_assert!(fit.residuals.iter().all(|r| r.residual == 0.0));
                for (k, c) in coeffs.iter().enumerate() {
                    prop_assert_eq!(fit.polynomial.coefficient(k).exact.unwrap(), c.clone());
                }
            }
        }
    }
}
