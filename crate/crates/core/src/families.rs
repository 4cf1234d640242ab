//! Named polytopes: Reeve tetrahedra, permutation simplices, cubes, the
//! `Δ(h_1, …, h_{d-1})` simplices, half prisms and intervals.

use std::f64::consts::PI;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::angle::{AngleEngine, Policy};
use crate::error::{Error, Result};
use crate::polytope::{Polytope, MAX_DIM};
use crate::rational::{format_rational, frac, int, Rational};
use crate::solidpoly::vertex_sum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `conv{0, e_1, e_2, (1, 1, h)}`.
    Reeve { h: i64 },
    /// `conv{0, e_{π(1)}, e_{π(1)} + e_{π(2)}, …}`. The origin is included
    /// so that the `d!` simplices triangulate the unit cube.
    PermutationSimplex { perm: Vec<usize> },
    UnitCube { d: usize },
    /// `conv{0, e_1, …, e_{d-1}, (h_1, …, h_{d-1}, 1)}`.
    Delta { hs: Vec<i64> },
    /// `conv{0, (0,1,1), (1,0,1), (1,1,0)}`.
    RegularTetrahedron,
    StandardSimplex { d: usize },
    /// `[0, 1/2] × [0, 1]^{d-1}`.
    HalfPrism { d: usize },
    Interval { a: Rational, b: Rational },
    CrossPolytope { d: usize },
    /// `conv{(0,0,0), (0,0,1), (0,1,1), (1,1,1)}`.
    QSimplex,
}

fn check_dim(d: usize, min: usize) -> Result<()> {
    if d < min || d > MAX_DIM {
        return Err(Error::Validation(format!("dimension {d} outside {min}..={MAX_DIM}")));
    }
    Ok(())
}

fn unit(d: usize, i: usize) -> Vec<i64> {
    (0..d).map(|j| (i == j) as i64).collect()
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Reeve { .. } => "reeve",
            Family::PermutationSimplex { .. } => "permutation",
            Family::UnitCube { .. } => "cube",
            Family::Delta { .. } => "delta",
            Family::RegularTetrahedron => "regular-tetrahedron",
            Family::StandardSimplex { .. } => "standard-simplex",
            Family::HalfPrism { .. } => "half-prism",
            Family::Interval { .. } => "interval",
            Family::CrossPolytope { .. } => "cross-polytope",
            Family::QSimplex => "q-simplex",
        }
    }

    pub fn build(&self) -> Result<Polytope> {
        match self {
            Family::Reeve { h } => {
                if *h < 1 {
                    return Err(Error::Validation(format!("reeve needs h >= 1, got {h}")));
                }
                Polytope::from_integer_points(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, *h]])
            }
            Family::PermutationSimplex { perm } => {
                let d = perm.len();
                check_dim(d, 1)?;
                if !perm.iter().copied().sorted().eq(0..d) {
                    return Err(Error::Validation(format!("{perm:?} is not a permutation of 0..{d}")));
                }
                let mut points = vec![vec![0i64; d]];
                for &i in perm {
                    let mut next = points.last().expect("nonempty").clone();
                    next[i] = 1;
                    points.push(next);
                }
                Polytope::from_integer_points(&points)
            }
            Family::UnitCube { d } => {
                check_dim(*d, 1)?;
                let points: Vec<Vec<i64>> = (0..1i64 << d)
                    .map(|m| (0..*d).map(|i| (m >> i) & 1).collect())
                    .collect();
                Polytope::from_integer_points(&points)
            }
            Family::Delta { hs } => {
                let d = hs.len() + 1;
                if d <= 2 {
                    return Err(Error::Validation("delta needs d > 2, i.e. at least two heights".into()));
                }
                check_dim(d, 3)?;
                let mut points = vec![vec![0i64; d]];
                points.extend((0..d - 1).map(|i| unit(d, i)));
                points.push(hs.iter().copied().chain([1]).collect());
                Polytope::from_integer_points(&points)
            }
            Family::RegularTetrahedron => {
                Polytope::from_integer_points(&[vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]])
            }
            Family::StandardSimplex { d } => {
                check_dim(*d, 1)?;
                let mut points = vec![vec![0i64; *d]];
                points.extend((0..*d).map(|i| unit(*d, i)));
                Polytope::from_integer_points(&points)
            }
            Family::HalfPrism { d } => {
                check_dim(*d, 1)?;
                let points = (0..1usize << d)
                    .map(|m| {
                        (0..*d)
                            .map(|i| match ((m >> i) & 1, i) {
                                (0, _) => int(0),
                                (_, 0) => frac(1, 2),
                                _ => int(1),
                            })
                            .collect()
                    })
                    .collect();
                Polytope::new(points)
            }
            Family::Interval { a, b } => {
                if a >= b {
                    return Err(Error::Validation(format!(
                        "interval needs a < b, got [{}, {}]",
                        format_rational(a),
                        format_rational(b)
                    )));
                }
                Polytope::new(vec![vec![a.clone()], vec![b.clone()]])
            }
            Family::CrossPolytope { d } => {
                check_dim(*d, 1)?;
                let points: Vec<Vec<i64>> = (0..*d)
                    .flat_map(|i| [1, -1].map(|s| unit(*d, i).iter().map(|x| s * x).collect()))
                    .collect();
                Polytope::from_integer_points(&points)
            }
            Family::QSimplex => {
                Polytope::from_integer_points(&[vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 1], vec![1, 1, 1]])
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Reeve { h } => write!(f, "reeve(h={h})"),
            Family::PermutationSimplex { perm } => write!(f, "permutation({})", perm.iter().join(",")),
            Family::UnitCube { d } => write!(f, "cube(d={d})"),
            Family::Delta { hs } => write!(f, "delta({})", hs.iter().join(",")),
            Family::StandardSimplex { d } => write!(f, "standard-simplex(d={d})"),
            Family::HalfPrism { d } => write!(f, "half-prism(d={d})"),
            Family::Interval { a, b } => write!(f, "interval[{}, {}]", format_rational(a), format_rational(b)),
            Family::CrossPolytope { d } => write!(f, "cross-polytope(d={d})"),
            other => f.write_str(other.name()),
        }
    }
}

/// All `d!` permutation simplices.
pub fn permutation_simplices(d: usize) -> Result<Vec<Polytope>> {
    (0..d)
        .permutations(d)
        .map(|perm| Family::PermutationSimplex { perm }.build())
        .collect()
}

/// `Δ(h, h, 1, …, 1)` in dimension `d`.
pub fn delta_positive(d: usize, h: i64) -> Family {
    let mut hs = vec![1; d - 1];
    hs[0] = h;
    hs[1] = h;
    Family::Delta { hs }
}

/// `Δ(h, …, h)` in dimension `d`.
pub fn delta_uniform(d: usize, h: i64) -> Family {
    Family::Delta { hs: vec![h; d - 1] }
}

/// Closed-form vertex angles of `Δ(h, h)` at `0`, `e_1`, `e_2`, `(h, h, 1)`,
/// from Girard's formula. The last uses `cos θ = -h²/(h²+1)`.
pub fn delta_vertex_angles(h: f64) -> [f64; 4] {
    let h2 = h * h;
    let a = (h / (h2 + 1.0).sqrt()).acos();
    let q = 4.0 * h2 - 4.0 * h + 3.0;
    let b = ((1.0 - 2.0 * h) / q.sqrt()).acos();
    let c = ((2.0 * h2 - h + 1.0) / ((h2 + 1.0) * q).sqrt()).acos();
    let e = (-h2 / (h2 + 1.0)).acos();
    let side = (a + b + c - PI) / (4.0 * PI);
    [
        (2.0 * a + e - PI) / (4.0 * PI),
        side,
        side,
        (e + 2.0 * c - PI) / (4.0 * PI),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub h: i64,
    pub vertex_sum: f64,
    pub abs_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub dim: usize,
    pub variant: &'static str,
    pub limit: f64,
    pub rows: Vec<ScanRow>,
    /// `|S − limit|` never grows along the scan, within error bounds.
    pub monotone: bool,
}

/// Vertex sums of `Δ(h, h, 1, …, 1)` for `h > 0` (limit 0), or of
/// `Δ(h, …, h)` for `h < 0` (limit 1/2), in the order given.
pub fn asymptotic_vertex_sum_scan(d: usize, hs: &[i64], engine: &AngleEngine) -> Result<ScanReport> {
    if d == 4 && engine.policy != Policy::MonteCarlo {
        return Err(Error::Precondition("d = 4 scans run with the monte carlo policy".into()));
    }
    if d != 3 && d != 4 {
        return Err(Error::Validation(format!("scan needs d = 3 or 4, got {d}")));
    }
    let positive = hs.iter().all(|&h| h > 0);
    if !positive && !hs.iter().all(|&h| h < 0) {
        return Err(Error::Validation("scan heights must share one sign".into()));
    }
    let rows = hs
        .iter()
        .map(|&h| {
            let f = if positive { delta_positive(d, h) } else { delta_uniform(d, h) };
            let s = vertex_sum(&f.build()?, engine)?;
            Ok(ScanRow {
                h,
                vertex_sum: s.value,
                abs_error: s.error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let limit = if positive { 0.0 } else { 0.5 };
    let monotone = rows.windows(2).all(|w| {
        (w[1].vertex_sum - limit).abs() <= (w[0].vertex_sum - limit).abs() + w[0].abs_error + w[1].abs_error
    });
    Ok(ScanReport {
        dim: d,
        variant: if positive { "delta(h,h,1,...,1)" } else { "delta(h,...,h)" },
        limit,
        rows,
        monotone,
    })
}

/// Small lattice instances of the families, for the verification table.
pub fn catalogue() -> Vec<Family> {
    vec![
        Family::Reeve { h: 1 },
        Family::Reeve { h: 2 },
        Family::Reeve { h: 12 },
        Family::PermutationSimplex { perm: vec![0, 1, 2] },
        Family::PermutationSimplex { perm: vec![2, 0, 1] },
        Family::UnitCube { d: 2 },
        Family::UnitCube { d: 3 },
        delta_uniform(3, 2),
        delta_uniform(3, -3),
        Family::RegularTetrahedron,
        Family::StandardSimplex { d: 2 },
        Family::StandardSimplex { d: 3 },
        Family::CrossPolytope { d: 2 },
        Family::CrossPolytope { d: 3 },
        Family::QSimplex,
        Family::Interval { a: int(0), b: int(3) },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ehrhart::ehrhart_polynomial;

    #[test]
    fn reeve_vertices_and_volume() {
        let p = Family::Reeve { h: 12 }.build().unwrap();
        assert_eq!(p.vertices()[3], vec![int(1), int(1), int(12)]);
        for h in 1..=20 {
            let p = Family::Reeve { h }.build().unwrap();
            assert_eq!(p.volume(), frac(h, 6));
            assert_eq!(ehrhart_polynomial(&p).unwrap().exact_coefficients().unwrap()[3], frac(h, 6));
        }
        assert!(Family::Reeve { h: 0 }.build().is_err());
    }

    #[test]
    fn permutation_simplices_tile_the_cube() {
        let all = permutation_simplices(3).unwrap();
        assert_eq!(all.len(), 6);
        let total: Rational = all.iter().map(Polytope::volume).sum();
        assert_eq!(total, int(1));
        let q = Family::QSimplex.build().unwrap();
        assert!(all.iter().any(|p| {
            let mut a = p.vertices().to_vec();
            let mut b = q.vertices().to_vec();
            a.sort();
            b.sort();
            a == b
        }));
        assert!(Family::PermutationSimplex { perm: vec![0, 0, 1] }.build().is_err());
    }

    #[test]
    fn delta_and_prisms() {
        let p = delta_uniform(3, 5).build().unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.vertices()[3], vec![int(5), int(5), int(1)]);
        assert!(Family::Delta { hs: vec![1] }.build().is_err());
        let hp = Family::HalfPrism { d: 3 }.build().unwrap();
        assert_eq!(hp.volume(), frac(1, 2));
        assert_eq!(Family::CrossPolytope { d: 4 }.build().unwrap().vertices().len(), 8);
        assert!(Family::Interval { a: int(1), b: int(0) }.build().is_err());
    }

    #[test]
    fn closed_form_angles_match_engine() {
        let e = AngleEngine::default();
        for h in [1, 2, 3, 7, 100] {
            let p = delta_uniform(3, h).build().unwrap();
            let expected = delta_vertex_angles(h as f64);
            for (v, want) in expected.iter().enumerate() {
                let got = e.face_angle(&p, p.vertex_face(v)).unwrap().value;
                assert!((got - want).abs() < 1e-10, "h={h} v={v}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn scans() {
        let e = AngleEngine::default();
        let r = asymptotic_vertex_sum_scan(3, &(1..=50).collect::<Vec<_>>(), &e).unwrap();
        assert!(r.monotone);
        assert!(r.rows.windows(2).all(|w| w[1].vertex_sum < w[0].vertex_sum));
        let far = asymptotic_vertex_sum_scan(3, &[100], &e).unwrap();
        assert!(far.rows[0].vertex_sum < 0.02);
        let neg = asymptotic_vertex_sum_scan(3, &[-1, -10, -100], &e).unwrap();
        assert!(neg.monotone && neg.rows[2].vertex_sum > 0.45);
        assert!(asymptotic_vertex_sum_scan(4, &[1], &e).is_err());
    }

    #[test]
    fn catalogue_builds() {
        for f in catalogue() {
            f.build().unwrap_or_else(|e| panic!("{f}: {e}"));
        }
    }
}
