//! Translation-invariant nonnegative valuations, their sums `N_P(t)` over
//! dilates and the numerators of `Σ_t N_P(t) z^t`.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::angle::AngleEngine;
use crate::ehrhart::{binomial_transform, NumeratorVector};
use crate::error::{Error, Result};
use crate::measured::Measured;
use crate::polytope::Polytope;
use crate::rational::{det, int, solve, RMatrix, Rational};
use crate::solidpoly::{check_solid_numerator, SolidAngleSum, IDENTITY_TOL};

/// A valuation `ν(K, x)` evaluated at lattice points `x` of polytopes `K`.
pub trait Valuation: Sync {
    fn name(&self) -> &'static str;

    /// Integer-valued valuations produce exact numerators.
    fn is_integer_valued(&self) -> bool;

    /// `ν(K, x)`.
    fn at(&self, k: &Polytope, x: &[Rational]) -> Result<Measured>;

    /// Value on a single point `{p}` at the lattice point `x`.
    fn at_point(&self, p: &[Rational], x: &[Rational]) -> Measured;

    /// `N_P(0)`.
    fn at_zero(&self) -> Measured;

    /// `N_P(t) = Σ_x ν(tP, x)`.
    fn n_eval(&self, p: &Polytope, t: i64) -> Result<Measured> {
        if t < 1 {
            return Err(Error::Validation(format!("dilation factor {t} must be positive")));
        }
        let tp = p.dilate(t)?;
        tp.lattice_points(1)
            .par_iter()
            .map(|x| self.at(&tp, &to_rational(x)))
            .collect::<Result<Vec<_>>>()
            .map(|v| v.into_iter().sum())
    }

    /// Sum of `ν` over the lattice points of the height-`k` slice of `Π`.
    fn slice_sum(&self, pi: &HalfOpenParallelepiped, k: usize) -> Result<Measured> {
        match pi.slice(k)? {
            Slice::Point(p) => Ok(if pi.contains_lifted(&p, k) {
                self.at_point(&p, &p)
            } else {
                Measured::zero()
            }),
            Slice::Polytope(s) => s
                .lattice_points(1)
                .iter()
                .map(|x| self.at(&s, &to_rational(x)))
                .sum(),
        }
    }
}

fn to_rational(x: &[i64]) -> Vec<Rational> {
    x.iter().map(|&c| int(c)).collect()
}

/// `#(K ∩ {x} ∩ Z^d)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Indicator;

impl Valuation for Indicator {
    fn name(&self) -> &'static str {
        "indicator"
    }

    fn is_integer_valued(&self) -> bool {
        true
    }

    fn at(&self, k: &Polytope, x: &[Rational]) -> Result<Measured> {
        let hit = x.iter().all(Rational::is_integer) && k.contains(x);
        Ok(Measured::exact(int(hit as i64)))
    }

    fn at_point(&self, p: &[Rational], x: &[Rational]) -> Measured {
        Measured::exact(int((p == x && x.iter().all(Rational::is_integer)) as i64))
    }

    fn at_zero(&self) -> Measured {
        Measured::exact(int(1))
    }

    fn n_eval(&self, p: &Polytope, t: i64) -> Result<Measured> {
        Ok(Measured::exact(int(crate::ehrhart::count(p, t)? as i64)))
    }

    /// Half-open membership, counted directly.
    fn slice_sum(&self, pi: &HalfOpenParallelepiped, k: usize) -> Result<Measured> {
        Ok(Measured::exact(int(pi.count_at_height(k)? as i64)))
    }
}

/// The solid angle `ω_K(x)`. A point slice has angle 0.
#[derive(Clone, Debug, Default)]
pub struct Solid {
    pub engine: AngleEngine,
}

impl Solid {
    pub fn new(engine: AngleEngine) -> Self {
        Self { engine }
    }
}

impl Valuation for Solid {
    fn name(&self) -> &'static str {
        "solid"
    }

    fn is_integer_valued(&self) -> bool {
        false
    }

    fn at(&self, k: &Polytope, x: &[Rational]) -> Result<Measured> {
        Ok(self.engine.solid_angle(k, x)?.to_measured())
    }

    fn at_point(&self, _: &[Rational], _: &[Rational]) -> Measured {
        Measured::zero()
    }

    fn at_zero(&self) -> Measured {
        Measured::zero()
    }

    fn n_eval(&self, p: &Polytope, t: i64) -> Result<Measured> {
        crate::solidpoly::a_eval(p, t, &self.engine)
    }

    fn slice_sum(&self, pi: &HalfOpenParallelepiped, k: usize) -> Result<Measured> {
        match pi.slice(k)? {
            Slice::Point(_) => Ok(Measured::zero()),
            Slice::Polytope(s) => Ok(SolidAngleSum::new(&s, &self.engine)?.eval(1)),
        }
    }
}

/// Valuation selected by name on the command line or through the C API.
pub fn builtin(name: &str, engine: AngleEngine) -> Result<Box<dyn Valuation>> {
    match name {
        "indicator" => Ok(Box::new(Indicator)),
        "solid" => Ok(Box::new(Solid::new(engine))),
        other => Err(Error::Validation(format!(
            "unknown valuation {other:?}; expected solid or indicator"
        ))),
    }
}

/// Numerator of `G_P(z) = Σ_{t ≥ 0} N_P(t) z^t` with its checks.
#[derive(Clone, Debug, Serialize)]
pub struct ValuationNumerator {
    pub valuation: &'static str,
    pub numerator: NumeratorVector,
    pub nonnegative: bool,
    pub violations: Vec<String>,
}

impl ValuationNumerator {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn judge(v: &dyn Valuation, numerator: NumeratorVector) -> ValuationNumerator {
    let negative = numerator.negative_entries(IDENTITY_TOL);
    let mut violations: Vec<String> = negative
        .iter()
        .map(|j| format!("a_{j} = {} is negative", numerator.entries[*j].value))
        .collect();
    if v.name() == "solid" {
        let r = check_solid_numerator(numerator.clone(), 1e-8);
        violations.extend(r.violations);
        violations.sort();
        violations.dedup();
    }
    ValuationNumerator {
        valuation: v.name(),
        nonnegative: negative.is_empty(),
        numerator,
        violations,
    }
}

pub fn g_numerator(p: &Polytope, v: &dyn Valuation) -> Result<ValuationNumerator> {
    if !p.is_lattice() {
        return Err(Error::Precondition("numerator needs a lattice polytope".into()));
    }
    let values = std::iter::once(Ok(v.at_zero()))
        .chain((1..=p.dim() as i64).map(|t| v.n_eval(p, t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(judge(v, binomial_transform(&values)))
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub valuation: &'static str,
    pub inner: NumeratorVector,
    pub outer: NumeratorVector,
    pub holds: Vec<bool>,
    pub violations: Vec<String>,
}

impl MonotonicityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Componentwise `a_i ≤ b_i` for `P ⊆ Q`.
pub fn monotonicity_compare(p: &Polytope, q: &Polytope, v: &dyn Valuation) -> Result<MonotonicityReport> {
    if p.dim() != q.dim() {
        return Err(Error::Shape("polytopes live in different dimensions".into()));
    }
    if !q.contains_polytope(p) {
        return Err(Error::Precondition("the first polytope is not contained in the second".into()));
    }
    let a = g_numerator(p, v)?.numerator;
    let b = g_numerator(q, v)?.numerator;
    let holds: Vec<bool> = a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| x.value <= y.value + x.error + y.error + IDENTITY_TOL)
        .collect();
    let violations = holds
        .iter()
        .enumerate()
        .filter(|(_, h)| !**h)
        .map(|(i, _)| format!("a_{i} = {} exceeds b_{i} = {}", a.entries[i].value, b.entries[i].value))
        .collect();
    Ok(MonotonicityReport {
        valuation: v.name(),
        inner: a,
        outer: b,
        holds,
        violations,
    })
}

/// `cone(P) = {Σ λ_i (v_i, 1) : λ ≥ 0}`.
#[derive(Clone, Debug)]
pub struct ConeOver {
    base: Polytope,
    generators: Vec<Vec<Rational>>,
}

impl ConeOver {
    pub fn new(base: Polytope) -> Self {
        let generators = base
            .vertices()
            .iter()
            .map(|v| v.iter().cloned().chain([int(1)]).collect())
            .collect();
        Self { base, generators }
    }

    pub fn base(&self) -> &Polytope {
        &self.base
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    /// `x` at height `x_{d+1} = k` lies in the cone iff `x/k ∈ P`, or `x = 0`.
    pub fn contains(&self, x: &[Rational]) -> bool {
        let (last, rest) = x.split_last().expect("nonempty point");
        if last.is_zero() {
            return rest.iter().all(Zero::is_zero);
        }
        last.is_positive() && self.base.contains(&rest.iter().map(|c| c / last).collect::<Vec<_>>())
    }
}

/// One height slice of the closed parallelepiped.
#[derive(Clone, Debug)]
pub enum Slice {
    Point(Vec<Rational>),
    Polytope(Polytope),
}

/// `Π = {Σ λ_i (v_i, 1) : 0 ≤ λ_i < 1}` for a lattice simplex, with an
/// optional closed upper bound per coordinate.
#[derive(Clone, Debug)]
pub struct HalfOpenParallelepiped {
    vertices: Vec<Vec<Rational>>,
    /// Rows are the lifted generators.
    generators: RMatrix,
    closed: Vec<bool>,
}

impl HalfOpenParallelepiped {
    pub fn new(simplex: &Polytope) -> Result<Self> {
        let d = simplex.dim();
        if simplex.vertices().len() != d + 1 {
            return Err(Error::Shape(format!(
                "expected a simplex with {} vertices, got {}",
                d + 1,
                simplex.vertices().len()
            )));
        }
        if !simplex.is_lattice() {
            return Err(Error::Precondition("parallelepiped needs a lattice simplex".into()));
        }
        let cone = ConeOver::new(simplex.clone());
        Ok(Self {
            vertices: simplex.vertices().to_vec(),
            generators: RMatrix::from_rows(cone.generators().to_vec())?,
            closed: vec![false; d + 1],
        })
    }

    pub fn with_closed(mut self, closed: Vec<bool>) -> Result<Self> {
        if closed.len() != self.closed.len() {
            return Err(Error::Shape("one closure flag per generator".into()));
        }
        self.closed = closed;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// `|det|` of the lifted generator matrix.
    pub fn determinant(&self) -> BigInt {
        det(&self.generators).expect("square").abs().to_integer()
    }

    /// Coordinates `λ` of `(x, k)` in the generator basis.
    pub fn coordinates(&self, x: &[Rational], k: usize) -> Vec<Rational> {
        let rhs: Vec<Rational> = x.iter().cloned().chain([int(k as i64)]).collect();
        solve(&self.generators.transpose(), &rhs).expect("generators are independent")
    }

    pub fn contains_lifted(&self, x: &[Rational], k: usize) -> bool {
        self.coordinates(x, k).iter().zip(&self.closed).all(|(l, &closed)| {
            !l.is_negative() && (*l < Rational::one() || (closed && l.is_one()))
        })
    }

    /// Height-`k` slice of the closure: the image of the hypersimplex
    /// `{λ ∈ [0,1]^{d+1} : Σλ = k}`.
    pub fn slice(&self, k: usize) -> Result<Slice> {
        let n = self.vertices.len();
        if k > n {
            return Err(Error::Validation(format!("height {k} above the parallelepiped")));
        }
        let points: Vec<Vec<Rational>> = (0..n)
            .combinations(k)
            .map(|subset| {
                (0..self.dim())
                    .map(|c| subset.iter().map(|&i| self.vertices[i][c].clone()).sum())
                    .collect()
            })
            .collect();
        if k == 0 || k == n {
            let p = points.into_iter().next().unwrap_or_else(|| vec![int(0); self.dim()]);
            return Ok(Slice::Point(p));
        }
        Ok(Slice::Polytope(Polytope::new(points)?))
    }

    /// Lattice points of `Π` at height `k`.
    pub fn lattice_points_at(&self, k: usize) -> Result<Vec<Vec<i64>>> {
        Ok(match self.slice(k)? {
            Slice::Point(p) => {
                if p.iter().all(Rational::is_integer) && self.contains_lifted(&p, k) {
                    vec![p.iter().map(|c| i64::try_from(c.to_integer()).unwrap_or(0)).collect()]
                } else {
                    Vec::new()
                }
            }
            Slice::Polytope(s) => s
                .lattice_points(1)
                .into_iter()
                .filter(|x| self.contains_lifted(&to_rational(x), k))
                .collect(),
        })
    }

    pub fn count_at_height(&self, k: usize) -> Result<u64> {
        Ok(self.lattice_points_at(k)?.len() as u64)
    }

    /// Lattice points over all heights. Half-open, this is `|det|`.
    pub fn count(&self) -> Result<u64> {
        (0..=self.vertices.len()).map(|k| self.count_at_height(k)).sum()
    }
}

/// Numerator from the lattice points of `Π`, height by height.
pub fn parallelepiped_numerator(simplex: &Polytope, v: &dyn Valuation) -> Result<ValuationNumerator> {
    let pi = HalfOpenParallelepiped::new(simplex)?;
    let entries = (0..=pi.dim())
        .into_par_iter()
        .map(|k| v.slice_sum(&pi, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(judge(v, NumeratorVector { entries }))
}

/// `ν(K + y, x + y) = ν(K, x)` at every lattice point of `K` for each shift.
pub fn translation_check(v: &dyn Valuation, k: &Polytope, shifts: &[Vec<i64>]) -> Result<bool> {
    for y in shifts {
        let ys = to_rational(y);
        let moved = k.translate(&ys)?;
        for x in k.lattice_points(1) {
            let x = to_rational(&x);
            let xy: Vec<Rational> = x.iter().zip(&ys).map(|(a, b)| a + b).collect();
            if !v.at(k, &x)?.agrees_with(&v.at(&moved, &xy)?, IDENTITY_TOL) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
