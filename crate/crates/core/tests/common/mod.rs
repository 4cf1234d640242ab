//! Random inputs and independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use solidangle::polytope::Polytope;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Determinant by cofactor expansion, exact in `i128`.
pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det_i128(&minor)
        })
        .sum()
}

/// Rows `(v_i, 1)`.
pub fn lifted(vertices: &[Vec<i64>]) -> Vec<Vec<i128>> {
    vertices
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).chain([1]).collect())
        .collect()
}

/// `x ∈ t·conv(vertices)` for a simplex, by signs of Cramer determinants.
pub fn simplex_contains(vertices: &[Vec<i64>], t: i64, x: &[i64]) -> bool {
    let rows: Vec<Vec<i128>> = lifted(vertices)
        .into_iter()
        .map(|r| {
            let (last, rest) = r.split_last().unwrap();
            rest.iter().map(|c| c * t as i128).chain([*last]).collect()
        })
        .collect();
    let d = det_i128(&rows);
    let point: Vec<i128> = x.iter().map(|&c| c as i128).chain([1]).collect();
    (0..rows.len()).all(|i| {
        let mut m = rows.clone();
        m[i] = point.clone();
        det_i128(&m) * d.signum() >= 0
    })
}

/// Lattice points of `t·conv(vertices)` for a simplex, by scanning the box.
pub fn brute_count_simplex(vertices: &[Vec<i64>], t: i64) -> u64 {
    let d = vertices[0].len();
    let lo: Vec<i64> = (0..d).map(|i| vertices.iter().map(|v| v[i]).min().unwrap() * t).collect();
    let hi: Vec<i64> = (0..d).map(|i| vertices.iter().map(|v| v[i]).max().unwrap() * t).collect();
    let mut count = 0;
    let mut x = lo.clone();
    loop {
        if simplex_contains(vertices, t, &x) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == d {
                return count;
            }
            x[i] += 1;
            if x[i] <= hi[i] {
                break;
            }
            x[i] = lo[i];
            i += 1;
        }
    }
}

pub fn random_lattice_simplex(r: &mut ChaCha8Rng, d: usize, range: i64) -> Vec<Vec<i64>> {
    loop {
        let vs: Vec<Vec<i64>> = (0..=d)
            .map(|_| (0..d).map(|_| r.gen_range(-range..=range)).collect())
            .collect();
        if det_i128(&lifted(&vs)) != 0 {
            return vs;
        }
    }
}

/// Hull of `n` random points, retried until full-dimensional.
pub fn random_lattice_polytope(r: &mut ChaCha8Rng, d: usize, n: usize, range: i64) -> Polytope {
    loop {
        let pts: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..d).map(|_| r.gen_range(-range..=range)).collect())
            .collect();
        if let Ok(p) = Polytope::from_integer_points(&pts) {
            return p;
        }
    }
}

/// Full-dimensional `P ⊆ Q` with `P` the hull of some lattice points of `Q`.
pub fn random_nested_pair(r: &mut ChaCha8Rng, d: usize) -> (Polytope, Polytope) {
    let q = random_lattice_polytope(r, d, d + 3, 2);
    let pts = q.lattice_points(1);
    loop {
        let k = r.gen_range(d + 1..=pts.len().min(d + 4));
        let chosen: Vec<Vec<i64>> = (0..k).map(|_| pts[r.gen_range(0..pts.len())].clone()).collect();
        if let Ok(p) = Polytope::from_integer_points(&chosen) {
            return (p, q);
        }
    }
}

pub fn to_f64(v: &[i64]) -> Vec<f64> {
    v.iter().map(|&x| x as f64).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Normalized angle of the cone over three vectors, by the
/// Van Oosterom–Strackee formula.
pub fn triangle_angle(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let cross = [
        b[1] * c[2] - b[2] * c[1],
        b[2] * c[0] - b[0] * c[2],
        b[0] * c[1] - b[1] * c[0],
    ];
    let triple = dot(a, &cross).abs();
    let (la, lb, lc) = (norm(a), norm(b), norm(c));
    let den = la * lb * lc + dot(a, b) * lc + dot(a, c) * lb + dot(b, c) * la;
    let mut omega = 2.0 * triple.atan2(den);
    if omega < 0.0 {
        omega += 4.0 * std::f64::consts::PI;
    }
    omega / (4.0 * std::f64::consts::PI)
}

/// Fraction of Gaussian directions `u` with `⟨n_i, u⟩ ≥ 0` for every `i`,
/// and `4σ` for it.
pub fn sampled_angle(normals: &[Vec<f64>], n: u64, seed: u64) -> (f64, f64) {
    let d = normals[0].len();
    let mut r = rng(seed);
    let mut u = vec![0.0; d];
    let mut hits = 0u64;
    for _ in 0..n {
        for x in u.iter_mut() {
            *x = r.sample(StandardNormal);
        }
        if normals.iter().all(|m| dot(m, &u) >= 0.0) {
            hits += 1;
        }
    }
    let p = hits as f64 / n as f64;
    (p, 4.0 * (p * (1.0 - p) / n as f64).sqrt().max(1.0 / n as f64))
}

/// `I + noise` with entries of size at most `eps`, as generator rows.
pub fn near_orthogonal(r: &mut ChaCha8Rng, d: usize, eps: f64) -> Vec<Vec<f64>> {
    (0..d)
        .map(|i| (0..d).map(|j| (i == j) as i64 as f64 + r.gen_range(-eps..=eps)).collect())
        .collect()
}

/// Inward normals of the simplicial cone over `gens`: rows of the inverse
/// of the matrix with columns `gens`, by Gauss–Jordan elimination.
pub fn normals_of(gens: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = gens.len();
    let mut a: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| gens[j][i]).chain((0..d).map(|j| (i == j) as i64 as f64)).collect())
        .collect();
    for c in 0..d {
        let p = (c..d).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(c, p);
        let piv = a[c][c];
        a[c].iter_mut().for_each(|x| *x /= piv);
        for r in 0..d {
            if r != c {
                let f = a[r][c];
                let row = a[c].clone();
                a[r].iter_mut().zip(&row).for_each(|(x, y)| *x -= f * y);
            }
        }
    }
    a.into_iter().map(|r| r[d..].to_vec()).collect()
}

/// `A_{[a,b]}(t)` counted directly: interior points weigh 1, endpoints 1/2.
pub fn interval_solid_sum(a: (i64, i64), b: (i64, i64), t: i64) -> f64 {
    // a = p/q as (p, q) with q > 0
    let lo = num_integer::Integer::div_ceil(&(a.0 * t), &a.1);
    let hi = num_integer::Integer::div_floor(&(b.0 * t), &b.1);
    let mut s = 0.0;
    for x in lo..=hi {
        let on_end = x * a.1 == a.0 * t || x * b.1 == b.0 * t;
        s += if on_end { 0.5 } else { 1.0 };
    }
    s
}
