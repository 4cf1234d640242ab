//! Hypergeometric series for the volume of a spherical simplex, given by
//! its inward facet normals.
//!
//! The series carries two unsettled conventions: how `B` is built from the
//! Gram matrix and whether the multi-index runs over nonnegative or strictly
//! positive entries. Both are parameters here, and the overall constant is
//! measured on the orthant rather than assumed.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    /// `B = K⁻¹ G⁻¹ K⁻¹`.
    AsPrinted,
    /// `B = K^{-1/2} G⁻¹ K^{-1/2}`, the Gram matrix of the unit generators.
    SquareRoot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexSet {
    NonNegative,
    StrictlyPositive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Convention {
    pub scaling: Scaling,
    pub index_set: IndexSet,
}

impl Default for Convention {
    fn default() -> Self {
        Self {
            scaling: Scaling::SquareRoot,
            index_set: IndexSet::NonNegative,
        }
    }
}

impl Convention {
    pub fn all() -> [Convention; 4] {
        [
            (Scaling::AsPrinted, IndexSet::NonNegative),
            (Scaling::AsPrinted, IndexSet::StrictlyPositive),
            (Scaling::SquareRoot, IndexSet::NonNegative),
            (Scaling::SquareRoot, IndexSet::StrictlyPositive),
        ]
        .map(|(scaling, index_set)| Convention { scaling, index_set })
    }
}

/// Series input derived from `d` linearly independent facet normals.
#[derive(Clone, Debug)]
pub struct AomotoInput {
    pub normals: Vec<Vec<f64>>,
    pub gram: DMatrix<f64>,
    pub minors: Vec<f64>,
    pub k_diag: Vec<f64>,
    pub b: DMatrix<f64>,
}

impl AomotoInput {
    pub fn from_normals(normals: &[Vec<f64>], scaling: Scaling) -> Result<Self> {
        let d = normals.len();
        if d == 0 || normals.iter().any(|n| n.len() != d) {
            return Err(Error::Shape(format!("need {d} normals in R^{d}")));
        }
        let normals: Vec<Vec<f64>> = normals
            .iter()
            .map(|n| {
                let len = n.iter().map(|x| x * x).sum::<f64>().sqrt();
                n.iter().map(|x| x / len).collect()
            })
            .collect();
        let gram = DMatrix::from_fn(d, d, |i, j| {
            normals[i].iter().zip(&normals[j]).map(|(a, b)| a * b).sum::<f64>()
        });
        let det_g = gram.determinant();
        if det_g.abs() < 1e-14 {
            return Err(Error::Degenerate);
        }
        let ginv = gram.clone().try_inverse().ok_or(Error::Degenerate)?;
        let minors: Vec<f64> = (0..d)
            .map(|k| {
                if d == 1 {
                    1.0
                } else {
                    gram.clone().remove_row(k).remove_column(k).determinant()
                }
            })
            .collect();
        let k_diag: Vec<f64> = minors.iter().map(|m| m / det_g).collect();
        let s: Vec<f64> = match scaling {
            Scaling::AsPrinted => k_diag.iter().map(|k| 1.0 / k).collect(),
            Scaling::SquareRoot => k_diag.iter().map(|k| 1.0 / k.sqrt()).collect(),
        };
        let b = DMatrix::from_fn(d, d, |i, j| s[i] * ginv[(i, j)] * s[j]);
        Ok(Self {
            normals,
            gram,
            minors,
            k_diag,
            b,
        })
    }

    pub fn dim(&self) -> usize {
        self.normals.len()
    }

    /// `cos θ_ij = -⟨n_i, n_j⟩` for `i < j`.
    pub fn dihedral_cosines(&self) -> Vec<((usize, usize), f64)> {
        let d = self.dim();
        (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .map(|(i, j)| ((i, j), -self.gram[(i, j)]))
            .collect()
    }

    /// `√det B / π^{d/2}`.
    pub fn constant(&self) -> f64 {
        self.b.determinant().sqrt() / PI.powf(self.dim() as f64 / 2.0)
    }
}

/// Result of summing the series by total order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesSum {
    /// `C · Σ`, before calibration.
    pub value: f64,
    pub abs_error: f64,
    pub orders: usize,
    pub terms: u64,
}

/// Cap on the number of multi-indices visited.
pub const TERM_BUDGET: u64 = 40_000_000;

struct Tables {
    ln_fact: Vec<f64>,
    ln_gamma_half: Vec<f64>,
}

impl Tables {
    fn new(max_order: usize) -> Self {
        let mut ln_fact = vec![0.0; max_order + 2];
        for m in 1..ln_fact.len() {
            ln_fact[m] = ln_fact[m - 1] + (m as f64).ln();
        }
        // ln Γ((s+1)/2) for s = 0, 1, 2, ...
        let len = 2 * max_order + 3;
        let mut ln_gamma_half = vec![0.0; len];
        ln_gamma_half[0] = 0.5 * PI.ln();
        for s in 2..len {
            let x = (s - 1) as f64 / 2.0;
            ln_gamma_half[s] = ln_gamma_half[s - 2] + x.ln();
        }
        Self {
            ln_fact,
            ln_gamma_half,
        }
    }
}

struct OrderWalk<'a> {
    pairs: &'a [(usize, usize)],
    ln_w: &'a [f64],
    negative: &'a [bool],
    min_part: usize,
    tables: &'a Tables,
    degrees: Vec<usize>,
    sum: f64,
    terms: u64,
}

impl OrderWalk<'_> {
    fn walk(&mut self, idx: usize, remaining: usize, ln_acc: f64, negative: bool) {
        if idx == self.pairs.len() {
            if remaining != 0 {
                return;
            }
            self.terms += 1;
            let ln_term = ln_acc
                + self
                    .degrees
                    .iter()
                    .map(|&s| self.tables.ln_gamma_half[s])
                    .sum::<f64>();
            let t = ln_term.exp();
            self.sum += if negative { -t } else { t };
            return;
        }
        let left = self.pairs.len() - idx - 1;
        let (lo, hi) = if left == 0 {
            (remaining, remaining)
        } else {
            (self.min_part, remaining.saturating_sub(left * self.min_part))
        };
        if lo < self.min_part || lo > hi {
            return;
        }
        let (i, j) = self.pairs[idx];
        for m in lo..=hi {
            if m > 0 && self.ln_w[idx] == f64::NEG_INFINITY {
                break;
            }
            let ln = if m == 0 {
                0.0
            } else {
                m as f64 * self.ln_w[idx] - self.tables.ln_fact[m]
            };
            self.degrees[i] += m;
            self.degrees[j] += m;
            self.walk(
                idx + 1,
                remaining - m,
                ln_acc + ln,
                negative ^ (self.negative[idx] && m % 2 == 1),
            );
            self.degrees[i] -= m;
            self.degrees[j] -= m;
        }
    }
}

/// Sums `C Σ_m Π(-2b_ij)^{m_ij}/m_ij! Π_k Γ((s_k+1)/2)` order by order.
/// Stops once two consecutive orders are below `tol`; reports divergence
/// when same-parity order magnitudes stop shrinking, when `max_order` is
/// passed, or when the term budget is exhausted.
pub fn series(
    input: &AomotoInput,
    index_set: IndexSet,
    tol: f64,
    max_order: usize,
) -> Result<SeriesSum> {
    let d = input.dim();
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
        .collect();
    let c = input.constant();
    let tables = Tables::new(max_order);
    if pairs.is_empty() {
        let value = c * tables.ln_gamma_half[0].exp();
        return Ok(SeriesSum {
            value,
            abs_error: 0.0,
            orders: 0,
            terms: 1,
        });
    }
    let w: Vec<f64> = pairs.iter().map(|&(i, j)| -2.0 * input.b[(i, j)]).collect();
    let ln_w: Vec<f64> = w.iter().map(|x| x.abs().ln()).collect();
    let negative: Vec<bool> = w.iter().map(|x| *x < 0.0).collect();
    let min_part = match index_set {
        IndexSet::NonNegative => 0,
        IndexSet::StrictlyPositive => 1,
    };
    let first = min_part * pairs.len();
    let mut total = 0.0;
    let mut terms = 0u64;
    let mut mags: Vec<f64> = Vec::new();
    let mut strikes = 0;
    for order in first..=max_order {
        let mut walk = OrderWalk {
            pairs: &pairs,
            ln_w: &ln_w,
            negative: &negative,
            min_part,
            tables: &tables,
            degrees: vec![0; d],
            sum: 0.0,
            terms: 0,
        };
        walk.walk(0, order, 0.0, false);
        terms += walk.terms;
        let contribution = c * walk.sum;
        total += contribution;
        mags.push(contribution.abs());
        let n = mags.len();
        if n >= 2 && mags[n - 1] < tol && mags[n - 2] < tol {
            return Ok(SeriesSum {
                value: total,
                abs_error: mags[n - 1] + mags[n - 2],
                orders: order,
                terms,
            });
        }
        if order >= 6 && n >= 3 {
            if mags[n - 1] >= mags[n - 3] {
                strikes += 1;
            } else {
                strikes = 0;
            }
            if strikes >= 3 {
                return Err(Error::Divergence {
                    order,
                    last: mags[n - 1],
                });
            }
        }
        if terms > TERM_BUDGET {
            return Err(Error::Divergence {
                order,
                last: mags[n - 1],
            });
        }
    }
    Err(Error::Divergence {
        order: max_order,
        last: mags.last().copied().unwrap_or(f64::NAN),
    })
}

/// Un-calibrated series value on the `d`-orthant.
pub fn orthant_raw(d: usize, convention: Convention, tol: f64, max_order: usize) -> Result<f64> {
    let normals: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let input = AomotoInput::from_normals(&normals, convention.scaling)?;
    Ok(series(&input, convention.index_set, tol, max_order)?.value)
}

/// Factor mapping the raw series onto the normalized angle, measured from
/// the orthant's known angle `2^{-d}`.
pub fn calibration_factor(
    d: usize,
    convention: Convention,
    tol: f64,
    max_order: usize,
) -> Result<f64> {
    let raw = orthant_raw(d, convention, tol, max_order)?;
    if raw.abs() < 1e-300 {
        return Err(Error::Consistency(format!(
            "{convention:?} gives 0 on the {d}-orthant; no constant factor can calibrate it"
        )));
    }
    Ok(0.5f64.powi(d as i32) / raw)
}

/// Calibrated normalized angle of the simplicial cone with these normals,
/// returned as `(value, abs_error)`.
pub fn calibrated_angle(
    normals: &[Vec<f64>],
    convention: Convention,
    tol: f64,
    max_order: usize,
) -> Result<(f64, f64)> {
    let input = AomotoInput::from_normals(normals, convention.scaling)?;
    let factor = calibration_factor(input.dim(), convention, tol, max_order)?;
    let s = series(&input, convention.index_set, tol, max_order)?;
    Ok((factor * s.value, factor.abs() * s.abs_error))
}

/// One line of the calibration table.
#[derive(Clone, Debug, Serialize)]
pub struct CalibrationRow {
    pub convention: Convention,
    pub dim: usize,
    pub orthant_raw: Option<f64>,
    pub expected: f64,
    /// `orthant_raw / 2^{-d}`.
    pub ratio: Option<f64>,
    pub factor: Option<f64>,
    /// Calibrated value minus an independent reference on a skewed probe
    /// cone; `None` when the series failed there.
    pub probe_error: Option<f64>,
    pub usable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationReport {
    pub rows: Vec<CalibrationRow>,
    pub chosen: Convention,
}

/// Probe cones with known angles: products of planar wedges, whose
/// normalized angles multiply. Returns `(normals, angle)` for `d = 3, 4`.
pub fn product_probes() -> Vec<(Vec<Vec<f64>>, f64)> {
    let wedge = |c: f64| {
        let s = (1.0 - c * c).sqrt();
        ([1.0, 0.0], [c, s], (PI - c.acos()) / (2.0 * PI))
    };
    let (a1, a2, w) = wedge(0.2);
    let three = vec![
        vec![a1[0], a1[1], 0.0],
        vec![a2[0], a2[1], 0.0],
        vec![0.0, 0.0, 1.0],
    ];
    let (b1, b2, v) = wedge(-0.3);
    let four = vec![
        vec![a1[0], a1[1], 0.0, 0.0],
        vec![a2[0], a2[1], 0.0, 0.0],
        vec![0.0, 0.0, b1[0], b1[1]],
        vec![0.0, 0.0, b2[0], b2[1]],
    ];
    vec![(three, w / 2.0), (four, w * v)]
}

/// Runs every convention on the orthant and on a probe cone whose angle
/// `reference` is known independently.
pub fn calibration_report(
    probes: &[(Vec<Vec<f64>>, f64)],
    tol: f64,
    max_order: usize,
) -> CalibrationReport {
    let mut rows = Vec::new();
    for (normals, reference) in probes {
        let d = normals.len();
        for convention in Convention::all() {
            let raw = orthant_raw(d, convention, tol, max_order).ok();
            let expected = 0.5f64.powi(d as i32);
            let factor = calibration_factor(d, convention, tol, max_order).ok();
            let probe_error = calibrated_angle(normals, convention, tol, max_order)
                .ok()
                .map(|(v, _)| v - reference);
            rows.push(CalibrationRow {
                convention,
                dim: d,
                orthant_raw: raw,
                expected,
                ratio: raw.map(|r| r / expected),
                factor,
                probe_error,
                usable: probe_error.is_some_and(|e| e.abs() < 1e-6),
            });
        }
    }
    CalibrationReport {
        rows,
        chosen: Convention::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn girard(g: [[f64; 3]; 3]) -> f64 {
        let cross = |a: [f64; 3], b: [f64; 3]| {
            [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        };
        let dotp = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let ang = |a, b, c| {
            let (x, y) = (cross(a, b), cross(a, c));
            (dotp(x, y) / (dotp(x, x) * dotp(y, y)).sqrt()).acos()
        };
        (ang(g[0], g[1], g[2]) + ang(g[1], g[0], g[2]) + ang(g[2], g[0], g[1]) - PI) / (4.0 * PI)
    }

    fn normals_of(g: [[f64; 3]; 3]) -> Vec<Vec<f64>> {
        let m = DMatrix::from_fn(3, 3, |i, j| g[j][i]);
        let inv = m.try_inverse().unwrap();
        (0..3).map(|i| (0..3).map(|j| inv[(i, j)]).collect()).collect()
    }

    #[test]
    fn gamma_table() {
        let t = Tables::new(5);
        // Γ(1/2)=√π, Γ(1)=1, Γ(3/2)=√π/2, Γ(2)=1, Γ(5/2)=3√π/4
        let expect = [PI.sqrt(), 1.0, PI.sqrt() / 2.0, 1.0, 0.75 * PI.sqrt()];
        for (s, e) in expect.iter().enumerate() {
            assert!((t.ln_gamma_half[s].exp() - e).abs() < 1e-12);
        }
    }

    #[test]
    fn orthant_ratio_is_two_to_the_d() {
        for d in 2..=4 {
            let raw = orthant_raw(d, Convention::default(), 1e-12, 40).unwrap();
            assert!((raw - 1.0).abs() < 1e-12, "d={d} raw={raw}");
        }
        let strict = Convention {
            scaling: Scaling::SquareRoot,
            index_set: IndexSet::StrictlyPositive,
        };
        assert!(calibration_factor(3, strict, 1e-12, 40).is_err());
    }

    #[test]
    fn square_root_scaling_matches_girard() {
        let g = [[1.0, 0.1, -0.05], [0.08, 1.0, 0.12], [-0.1, 0.07, 1.0]];
        let (v, err) = calibrated_angle(&normals_of(g), Convention::default(), 1e-13, 60).unwrap();
        assert!((v - girard(g)).abs() < 1e-9, "{v} vs {}", girard(g));
        assert!(err < 1e-10);
    }

    #[test]
    fn as_printed_scaling_misses_skewed_cones() {
        let g = [[1.0, 0.2, 0.0], [0.0, 1.0, 0.3], [0.25, 0.0, 1.0]];
        let printed = Convention {
            scaling: Scaling::AsPrinted,
            index_set: IndexSet::NonNegative,
        };
        match calibrated_angle(&normals_of(g), printed, 1e-12, 60) {
            Ok((v, _)) => assert!((v - girard(g)).abs() > 1e-4),
            Err(Error::Divergence { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn planar_case() {
        // two normals at angle φ bound a wedge of angle π - φ
        let phi: f64 = 1.1;
        let normals = vec![vec![1.0, 0.0], vec![phi.cos(), phi.sin()]];
        let (v, _) = calibrated_angle(&normals, Convention::default(), 1e-14, 80).unwrap();
        assert!((v - (PI - phi) / (2.0 * PI)).abs() < 1e-9);
    }

    #[test]
    fn strongly_obtuse_cone_diverges() {
        // generators nearly coplanar: |b| large
        let g = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [-0.99, -0.99, 0.05]];
        assert!(matches!(
            calibrated_angle(&normals_of(g), Convention::default(), 1e-10, 60),
            Err(Error::Divergence { .. })
        ));
    }

    #[test]
    fn dihedral_cosines_of_orthant() {
        let input = AomotoInput::from_normals(
            &[vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 3.0]],
            Scaling::AsPrinted,
        )
        .unwrap();
        assert!(input.dihedral_cosines().iter().all(|(_, c)| c.abs() < 1e-15));
        assert!((input.constant() - PI.powf(-1.5)).abs() < 1e-15);
    }
}
