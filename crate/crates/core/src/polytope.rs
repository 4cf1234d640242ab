//! Exact polytope geometry.
//!
//! A [`Polytope`] is built from a point list; facets are found by brute
//! force over vertex subsets and the face lattice by closing facet vertex
//! sets under intersection. Dilates `tP` are never materialized: lattice
//! scans multiply facet offsets by `t` instead.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{
    det, dot, int, lcm_of_denominators, null_space_of, primitive_integer, rank_of, sub, to_f64,
    RMatrix, Rational,
};

/// Largest ambient dimension accepted for hull computations.
pub const MAX_DIM: usize = 4;

const MAX_MASK_BITS: usize = 64;

/// `⟨normal, x⟩ ≥ offset`, with `normal` a primitive integer vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<BigInt>,
    pub offset: Rational,
}

impl Halfspace {
    pub fn normal_rational(&self) -> Vec<Rational> {
        self.normal.iter().cloned().map(Rational::from_integer).collect()
    }

    /// `⟨normal, x⟩ - offset`.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        let s: Rational = self
            .normal
            .iter()
            .zip(x)
            .map(|(n, xi)| xi * n)
            .sum();
        s - &self.offset
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn is_tight(&self, x: &[Rational]) -> bool {
        self.slack(x).is_zero()
    }
}

/// A nonempty face: its dimension, vertex indices and the indices of the
/// facets containing it. The polytope itself is the face with no facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub facets: Vec<usize>,
    vertex_mask: u64,
    facet_mask: u64,
}

impl Face {
    pub fn vertex_mask(&self) -> u64 {
        self.vertex_mask
    }

    pub fn facet_mask(&self) -> u64 {
        self.facet_mask
    }

    pub fn contains_face(&self, other: &Face) -> bool {
        other.vertex_mask & self.vertex_mask == other.vertex_mask
    }
}

/// Integer form of a facet for lattice scans: `den·⟨normal, x⟩ ≥ t·num`.
#[derive(Clone, Debug)]
struct ScanRow {
    normal: Vec<i128>,
    num: i128,
    den: i128,
}

impl ScanRow {
    fn value(&self, x: &[i64]) -> i128 {
        self.den * self.normal.iter().zip(x).map(|(n, &v)| n * v as i128).sum::<i128>()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rel {
    Ge,
    Gt,
    Eq,
}

/// Full-dimensional convex polytope with rational vertices.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<Rational>>,
    facets: Vec<Halfspace>,
    faces: Vec<Face>,
    face_by_facets: HashMap<u64, usize>,
    scan: Vec<ScanRow>,
}

impl Polytope {
    /// Builds the convex hull of `points`. Non-vertices and duplicates are
    /// dropped; the remaining vertices keep their input order.
    pub fn new(points: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Validation("empty point list".into()))?;
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::Shape("points of mixed dimension".into()));
        }
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Size(format!(
                "ambient dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        let mut seen = HashSet::new();
        let points: Vec<Vec<Rational>> = points
            .into_iter()
            .filter(|p| seen.insert(p.clone()))
            .collect();
        let facets = hull_facets(&points)?;
        let vertices: Vec<Vec<Rational>> = points
            .into_iter()
            .filter(|p| {
                let tight: Vec<Vec<Rational>> = facets
                    .iter()
                    .filter(|h| h.is_tight(p))
                    .map(Halfspace::normal_rational)
                    .collect();
                rank_of(&tight) == dim
            })
            .collect();
        if vertices.len() > MAX_MASK_BITS || facets.len() > MAX_MASK_BITS {
            return Err(Error::Size(format!(
                "{} vertices / {} facets exceed the {MAX_MASK_BITS}-element limit",
                vertices.len(),
                facets.len()
            )));
        }
        let scan = facets
            .iter()
            .map(|h| {
                let conv = |b: &BigInt| {
                    b.to_i128()
                        .ok_or_else(|| Error::Size("facet coefficient overflows i128".into()))
                };
                Ok(ScanRow {
                    normal: h.normal.iter().map(conv).collect::<Result<_>>()?,
                    num: conv(h.offset.numer())?,
                    den: conv(h.offset.denom())?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut p = Self {
            dim,
            vertices,
            facets,
            faces: Vec::new(),
            face_by_facets: HashMap::new(),
            scan,
        };
        p.faces = p.compute_faces();
        p.face_by_facets = p
            .faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.facet_mask, i))
            .collect();
        Ok(p)
    }

    pub fn from_integer_points(points: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            points
                .iter()
                .map(|p| p.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &Face {
        &self.faces[i]
    }

    /// Index of the face that is the whole polytope.
    pub fn top_face(&self) -> usize {
        self.face_by_facets[&0]
    }

    pub fn vertex_face(&self, v: usize) -> usize {
        self.faces
            .iter()
            .position(|f| f.dim == 0 && f.vertices == [v])
            .expect("every vertex is a face")
    }

    pub fn faces_of_dim(&self, k: usize) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(move |(_, f)| f.dim == k)
    }

    /// Number of faces of each dimension `0..=d`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dim).map(|k| self.faces_of_dim(k).count()).collect()
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().flatten().all(|x| x.is_integer())
    }

    /// Least common multiple of all vertex coordinate denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        lcm_of_denominators(self.vertices.iter().flatten())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.facets.iter().all(|h| h.contains(x))
    }

    pub fn contains_polytope(&self, inner: &Polytope) -> bool {
        inner.dim == self.dim && inner.vertices.iter().all(|v| self.contains(v))
    }

    /// The face whose relative interior contains `x`, if `x ∈ P`.
    pub fn carrier_face(&self, x: &[Rational]) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        let mask = self
            .facets
            .iter()
            .enumerate()
            .filter(|(_, h)| h.is_tight(x))
            .fold(0u64, |m, (i, _)| m | (1 << i));
        self.face_by_facets.get(&mask).copied()
    }

    /// Carrier face of the lattice point `x` in `tP`; `None` outside.
    pub fn carrier_face_in_dilate(&self, t: i64, x: &[i64]) -> Option<usize> {
        let mut mask = 0u64;
        for (i, row) in self.scan.iter().enumerate() {
            let lhs = row.value(x);
            let rhs = t as i128 * row.num;
            if lhs < rhs {
                return None;
            }
            if lhs == rhs {
                mask |= 1 << i;
            }
        }
        self.face_by_facets.get(&mask).copied()
    }

    pub fn translate(&self, shift: &[Rational]) -> Result<Polytope> {
        Polytope::new(
            self.vertices
                .iter()
                .map(|v| v.iter().zip(shift).map(|(a, b)| a + b).collect())
                .collect(),
        )
    }

    /// The dilate `kP` with materialized vertices.
    pub fn dilate(&self, k: i64) -> Result<Polytope> {
        let k = int(k);
        Polytope::new(
            self.vertices
                .iter()
                .map(|v| v.iter().map(|a| a * &k).collect())
                .collect(),
        )
    }

    fn lifted(&self) -> Vec<Vec<Rational>> {
        self.vertices
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.push(Rational::one());
                w
            })
            .collect()
    }

    fn facet_vertex_masks(&self) -> Vec<u64> {
        self.facets
            .iter()
            .map(|h| {
                self.vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| h.is_tight(v))
                    .fold(0u64, |m, (i, _)| m | (1 << i))
            })
            .collect()
    }

    fn compute_faces(&self) -> Vec<Face> {
        let n = self.vertices.len();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let facet_masks = self.facet_vertex_masks();
        let mut masks: BTreeSet<u64> = facet_masks.iter().copied().collect();
        masks.insert(all);
        let mut frontier: Vec<u64> = facet_masks.clone();
        while let Some(f) = frontier.pop() {
            for &g in &facet_masks {
                let h = f & g;
                if h != 0 && masks.insert(h) {
                    frontier.push(h);
                }
            }
        }
        let lifted = self.lifted();
        let mut faces: Vec<Face> = masks
            .into_iter()
            .map(|vm| {
                let vertices = bits(vm);
                let facets: Vec<usize> = facet_masks
                    .iter()
                    .enumerate()
                    .filter(|(_, &fm)| fm & vm == vm)
                    .map(|(i, _)| i)
                    .collect();
                let rows: Vec<Vec<Rational>> =
                    vertices.iter().map(|&i| lifted[i].clone()).collect();
                Face {
                    dim: rank_of(&rows) - 1,
                    facet_mask: facets.iter().fold(0, |m, &i| m | (1 << i)),
                    vertices,
                    facets,
                    vertex_mask: vm,
                }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
        faces
    }

    /// Pulling triangulation of the whole polytope into simplices spanned by
    /// its vertices (vertex index lists).
    pub fn triangulate(&self) -> Vec<Vec<usize>> {
        self.triangulate_face(self.top_face())
    }

    /// Pulling triangulation of one face.
    pub fn triangulate_face(&self, face: usize) -> Vec<Vec<usize>> {
        let lifted = self.lifted();
        let masks = self.facet_vertex_masks();
        let inc = Incidence::new(&lifted, &masks);
        let f = &self.faces[face];
        inc.pull(f.vertex_mask, f.dim + 1)
    }

    /// Euclidean volume.
    pub fn volume(&self) -> Rational {
        let d = self.dim;
        let fact: BigInt = (1..=d as u64).product::<u64>().into();
        self.triangulate()
            .iter()
            .map(|s| {
                let rows: Vec<Vec<Rational>> = s[1..]
                    .iter()
                    .map(|&i| sub(&self.vertices[i], &self.vertices[s[0]]))
                    .collect();
                det(&RMatrix::from_rows(rows).expect("square")).expect("square").abs()
            })
            .sum::<Rational>()
            / Rational::from_integer(fact)
    }

    /// Volume of a facet relative to the lattice `normal^⊥ ∩ Z^d`.
    pub fn normalized_facet_volume(&self, facet: usize) -> Rational {
        let d = self.dim;
        let face = self
            .faces
            .iter()
            .position(|f| f.dim + 1 == d && f.facets == [facet])
            .expect("facet face present");
        let n = self.facets[facet].normal_rational();
        let n2 = dot(&n, &n);
        let fact: BigInt = (1..d as u64).product::<u64>().max(1).into();
        self.triangulate_face(face)
            .iter()
            .map(|s| {
                let mut rows: Vec<Vec<Rational>> = s[1..]
                    .iter()
                    .map(|&i| sub(&self.vertices[i], &self.vertices[s[0]]))
                    .collect();
                rows.push(n.clone());
                det(&RMatrix::from_rows(rows).expect("square")).expect("square").abs()
            })
            .sum::<Rational>()
            / (n2 * Rational::from_integer(fact))
    }

    fn bounding_box(&self, t: i64, vertices: &[usize]) -> (Vec<i64>, Vec<i64>) {
        let tr = int(t);
        (0..self.dim)
            .map(|c| {
                let vals = vertices.iter().map(|&i| &self.vertices[i][c] * &tr);
                let (lo, hi) = vals.minmax().into_option().expect("nonempty face");
                (
                    lo.ceil().to_integer().to_i64().unwrap_or(i64::MIN),
                    hi.floor().to_integer().to_i64().unwrap_or(i64::MAX),
                )
            })
            .unzip()
    }

    /// Visits every lattice point of `tP` in lexicographic order together
    /// with its carrier face.
    pub fn for_each_lattice_point(&self, t: i64, mut visit: impl FnMut(&[i64], usize)) {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let (lo, hi) = self.bounding_box(t, &all);
        let cons: Vec<(usize, Rel)> = (0..self.scan.len()).map(|i| (i, Rel::Ge)).collect();
        self.scan_box(t, &lo, &hi, &cons, &mut |x| {
            let face = self
                .carrier_face_in_dilate(t, x)
                .expect("scanned point lies in tP");
            visit(x, face);
        });
    }

    /// Lattice points of `tP`, lexicographically sorted.
    pub fn lattice_points(&self, t: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        self.for_each_lattice_point(t, |x, _| out.push(x.to_vec()));
        out
    }

    /// `#(tP ∩ Z^d)`.
    pub fn count_lattice_points(&self, t: i64) -> u64 {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let (lo, hi) = self.bounding_box(t, &all);
        let cons: Vec<(usize, Rel)> = (0..self.scan.len()).map(|i| (i, Rel::Ge)).collect();
        let mut count = 0u64;
        self.scan_intervals(t, &lo, &hi, &cons, &mut |a, b| count += (b - a + 1) as u64);
        count
    }

    /// Lattice points of `t·relint(F)`: tight on the facets of `F` and strict
    /// on every other facet.
    pub fn count_relative_interior(&self, face: usize, t: i64) -> u64 {
        let f = &self.faces[face];
        let (lo, hi) = self.bounding_box(t, &f.vertices);
        let cons: Vec<(usize, Rel)> = (0..self.scan.len())
            .map(|i| {
                if f.facet_mask & (1 << i) != 0 {
                    (i, Rel::Eq)
                } else {
                    (i, Rel::Gt)
                }
            })
            .collect();
        let mut count = 0u64;
        self.scan_intervals(t, &lo, &hi, &cons, &mut |a, b| count += (b - a + 1) as u64);
        count
    }

    fn scan_box(
        &self,
        t: i64,
        lo: &[i64],
        hi: &[i64],
        cons: &[(usize, Rel)],
        visit: &mut dyn FnMut(&[i64]),
    ) {
        #[allow(clippy::too_many_arguments)]
        fn rec(
            p: &Polytope,
            t: i64,
            depth: usize,
            x: &mut Vec<i64>,
            lo: &[i64],
            hi: &[i64],
            cons: &[(usize, Rel)],
            visit: &mut dyn FnMut(&[i64]),
        ) {
            if depth + 1 == p.dim {
                if let Some((a, b)) = p.last_interval(t, x, lo, hi, cons) {
                    for v in a..=b {
                        x[depth] = v;
                        visit(x);
                    }
                }
                return;
            }
            for v in lo[depth]..=hi[depth] {
                x[depth] = v;
                rec(p, t, depth + 1, x, lo, hi, cons, visit);
            }
        }
        if lo.iter().zip(hi).any(|(a, b)| a > b) {
            return;
        }
        let mut x = lo.to_vec();
        rec(self, t, 0, &mut x, lo, hi, cons, visit);
    }

    fn scan_intervals(
        &self,
        t: i64,
        lo: &[i64],
        hi: &[i64],
        cons: &[(usize, Rel)],
        emit: &mut dyn FnMut(i64, i64),
    ) {
        #[allow(clippy::too_many_arguments)]
        fn rec(
            p: &Polytope,
            t: i64,
            depth: usize,
            x: &mut Vec<i64>,
            lo: &[i64],
            hi: &[i64],
            cons: &[(usize, Rel)],
            emit: &mut dyn FnMut(i64, i64),
        ) {
            if depth + 1 == p.dim {
                if let Some((a, b)) = p.last_interval(t, x, lo, hi, cons) {
                    emit(a, b);
                }
                return;
            }
            for v in lo[depth]..=hi[depth] {
                x[depth] = v;
                rec(p, t, depth + 1, x, lo, hi, cons, emit);
            }
        }
        if lo.iter().zip(hi).any(|(a, b)| a > b) {
            return;
        }
        let mut x = lo.to_vec();
        rec(self, t, 0, &mut x, lo, hi, cons, emit);
    }

    /// Feasible range of the last coordinate given the prefix `x[..d-1]`.
    fn last_interval(
        &self,
        t: i64,
        x: &[i64],
        lo: &[i64],
        hi: &[i64],
        cons: &[(usize, Rel)],
    ) -> Option<(i64, i64)> {
        let last = self.dim - 1;
        let mut a = lo[last] as i128;
        let mut b = hi[last] as i128;
        for &(i, rel) in cons {
            let row = &self.scan[i];
            let partial: i128 = row.normal[..last]
                .iter()
                .zip(&x[..last])
                .map(|(n, &v)| n * v as i128)
                .sum();
            // need den·(partial + n·y) rel t·num
            let r = t as i128 * row.num - row.den * partial;
            let k = row.den * row.normal[last];
            if k == 0 {
                let ok = match rel {
                    Rel::Ge => r <= 0,
                    Rel::Gt => r < 0,
                    Rel::Eq => r == 0,
                };
                if !ok {
                    return None;
                }
                continue;
            }
            match rel {
                Rel::Eq => {
                    if r % k != 0 {
                        return None;
                    }
                    let y = r / k;
                    a = a.max(y);
                    b = b.min(y);
                }
                Rel::Ge | Rel::Gt => {
                    let r = if rel == Rel::Gt { r + 1 } else { r };
                    if k > 0 {
                        a = a.max(-Integer::div_floor(&-r, &k));
                    } else {
                        b = b.min(Integer::div_floor(&r, &k));
                    }
                }
            }
            if a > b {
                return None;
            }
        }
        (a <= b).then_some((a as i64, b as i64))
    }

    /// Pointed tangent cone of a face: the feasible directions at a point of
    /// its relative interior, quotiented by the face's direction space.
    pub fn face_cone(&self, face: usize) -> PointedCone {
        let f = &self.faces[face];
        let d = self.dim;
        let normals: Vec<Vec<Rational>> = f
            .facets
            .iter()
            .map(|&i| self.facets[i].normal_rational())
            .collect();
        let span = if normals.is_empty() {
            Vec::new()
        } else {
            let (r, piv) = RMatrix::from_rows(normals.clone()).expect("rect").rref();
            (0..piv.len()).map(|i| r.row(i).to_vec()).collect::<Vec<_>>()
        };
        let k = span.len();
        debug_assert_eq!(k, d - f.dim);
        if k == 0 {
            return PointedCone {
                ambient: d,
                dim: 0,
                span,
                generators: Vec::new(),
                halfspaces: Vec::new(),
                incidence: Vec::new(),
                lineality_dim: 0,
            };
        }
        let projector = Projector::new(&span);
        let anchor = &self.vertices[f.vertices[0]];
        let uppers: Vec<&Face> = self
            .faces
            .iter()
            .filter(|g| g.dim == f.dim + 1 && g.contains_face(f))
            .collect();
        let generators: Vec<Vec<Rational>> = uppers
            .iter()
            .map(|g| {
                let v = (g.vertex_mask & !f.vertex_mask).trailing_zeros() as usize;
                projector.project(&sub(&self.vertices[v], anchor))
            })
            .collect();
        let halfspaces: Vec<Halfspace> = f
            .facets
            .iter()
            .map(|&i| Halfspace {
                normal: self.facets[i].normal.clone(),
                offset: Rational::zero(),
            })
            .collect();
        let incidence: Vec<u64> = f
            .facets
            .iter()
            .map(|&i| {
                uppers
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| g.facet_mask & (1 << i) != 0)
                    .fold(0u64, |m, (j, _)| m | (1 << j))
            })
            .collect();
        PointedCone {
            ambient: d,
            dim: k,
            span,
            generators,
            halfspaces,
            incidence,
            lineality_dim: 0,
        }
    }
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1 << i) != 0).collect()
}

/// Orthogonal projection onto the row span of a basis, in exact arithmetic.
struct Projector {
    basis: Vec<Vec<Rational>>,
    gram_inv: RMatrix,
}

impl Projector {
    fn new(basis: &[Vec<Rational>]) -> Self {
        let gram = RMatrix::from_rows(
            basis
                .iter()
                .map(|a| basis.iter().map(|b| dot(a, b)).collect())
                .collect(),
        )
        .expect("square");
        Self {
            basis: basis.to_vec(),
            gram_inv: gram.inverse().expect("independent basis"),
        }
    }

    fn project(&self, v: &[Rational]) -> Vec<Rational> {
        let rhs: Vec<Rational> = self.basis.iter().map(|b| dot(b, v)).collect();
        let c = self.gram_inv.mul_vec(&rhs).expect("shape");
        let mut out = vec![Rational::zero(); v.len()];
        for (ci, b) in c.iter().zip(&self.basis) {
            for (o, bj) in out.iter_mut().zip(b) {
                *o += ci * bj;
            }
        }
        out
    }
}

/// Exact facets of the convex hull of full-dimensional `points`, by testing
/// the hyperplane through every affinely independent `d`-subset. Sorted.
pub fn hull_facets(points: &[Vec<Rational>]) -> Result<Vec<Halfspace>> {
    let d = points.first().map_or(0, Vec::len);
    if d == 0 || d > MAX_DIM {
        return Err(Error::Size(format!("ambient dimension {d} outside 1..={MAX_DIM}")));
    }
    let diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    let affine_rank = rank_of(&diffs);
    if affine_rank != d {
        return Err(Error::Dimension {
            found: affine_rank,
            expected: d,
        });
    }
    let mut found: BTreeSet<Halfspace> = BTreeSet::new();
    for subset in (0..points.len()).combinations(d) {
        let base = &points[subset[0]];
        if found
            .iter()
            .any(|h| subset.iter().all(|&i| h.is_tight(&points[i])))
        {
            continue;
        }
        let rows: Vec<Vec<Rational>> = subset[1..].iter().map(|&i| sub(&points[i], base)).collect();
        let ns = null_space_of(&rows, d);
        if ns.len() != 1 {
            continue;
        }
        let normal = primitive_integer(&ns[0]);
        let nr: Vec<Rational> = normal.iter().cloned().map(Rational::from_integer).collect();
        let offset = dot(&nr, base);
        let (mut below, mut above) = (false, false);
        for p in points {
            let s = dot(&nr, p) - &offset;
            below |= s.is_negative();
            above |= s.is_positive();
        }
        match (below, above) {
            (false, _) => found.insert(Halfspace { normal, offset }),
            (true, false) => found.insert(Halfspace {
                normal: normal.iter().map(|x| -x).collect(),
                offset: -offset,
            }),
            (true, true) => false,
        };
    }
    Ok(found.into_iter().collect())
}

/// All nonempty faces of `p`, including `p` itself.
pub fn face_lattice(p: &Polytope) -> &[Face] {
    p.faces()
}

/// Integer points of `tP`, sorted lexicographically.
pub fn lattice_points(p: &Polytope, t: i64) -> Result<Vec<Vec<i64>>> {
    if t < 1 {
        return Err(Error::Validation(format!("dilation factor {t} must be positive")));
    }
    Ok(p.lattice_points(t))
}

/// Carrier face of `x` and the pointed tangent cone there.
pub fn tangent_cone(p: &Polytope, x: &[Rational]) -> Result<(usize, PointedCone)> {
    let face = p.carrier_face(x).ok_or(Error::NotContained)?;
    Ok((face, p.face_cone(face)))
}

/// Polyhedral cone with apex at the origin, described both by generators
/// and by inward halfspaces within its linear span.
#[derive(Clone, Debug)]
pub struct PointedCone {
    ambient: usize,
    dim: usize,
    span: Vec<Vec<Rational>>,
    generators: Vec<Vec<Rational>>,
    halfspaces: Vec<Halfspace>,
    incidence: Vec<u64>,
    lineality_dim: usize,
}

/// Orthonormal float coordinates for a cone inside its span.
#[derive(Clone, Debug)]
pub struct ConeFrame {
    pub dim: usize,
    pub generators: Vec<Vec<f64>>,
    pub normals: Vec<Vec<f64>>,
}

impl PointedCone {
    /// Cone generated by `generators`. Facets are found within the linear
    /// span; for pointed cones non-extreme and repeated generators are
    /// dropped.
    pub fn from_generators(generators: Vec<Vec<Rational>>) -> Result<Self> {
        let ambient = generators.first().map_or(0, Vec::len);
        if generators.iter().any(|g| g.len() != ambient) {
            return Err(Error::Shape("generators of mixed dimension".into()));
        }
        let gens: Vec<Vec<Rational>> = generators
            .into_iter()
            .filter(|g| g.iter().any(|x| !x.is_zero()))
            .collect();
        if gens.is_empty() {
            return Err(Error::Degenerate);
        }
        let (r, piv) = RMatrix::from_rows(gens.clone())?.rref();
        let span: Vec<Vec<Rational>> = (0..piv.len()).map(|i| r.row(i).to_vec()).collect();
        let k = span.len();

        let mut normals: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        for subset in (0..gens.len()).combinations(k - 1) {
            let m: Vec<Vec<Rational>> = subset
                .iter()
                .map(|&s| span.iter().map(|w| dot(w, &gens[s])).collect())
                .collect();
            let ns = null_space_of(&m, k);
            if ns.len() != 1 {
                continue;
            }
            let mut n = vec![Rational::zero(); ambient];
            for (c, w) in ns[0].iter().zip(&span) {
                for (o, wj) in n.iter_mut().zip(w) {
                    *o += c * wj;
                }
            }
            let (mut neg, mut pos) = (false, false);
            for g in &gens {
                let s = dot(&n, g);
                neg |= s.is_negative();
                pos |= s.is_positive();
            }
            let n = match (neg, pos) {
                (false, _) => n,
                (true, false) => n.into_iter().map(|x| -x).collect(),
                (true, true) => continue,
            };
            normals.insert(primitive_integer(&n));
        }
        let halfspaces: Vec<Halfspace> = normals
            .into_iter()
            .map(|normal| Halfspace {
                normal,
                offset: Rational::zero(),
            })
            .collect();
        let normal_rows: Vec<Vec<Rational>> =
            halfspaces.iter().map(Halfspace::normal_rational).collect();
        let lineality_dim = k - rank_of(&normal_rows);

        let generators = if lineality_dim == 0 {
            let mut kept: Vec<Vec<Rational>> = Vec::new();
            for g in gens {
                let on: Vec<Vec<Rational>> = normal_rows
                    .iter()
                    .filter(|n| dot(n, &g).is_zero())
                    .cloned()
                    .collect();
                if rank_of(&on) + 1 != k {
                    continue;
                }
                let dir = direction_key(&g);
                if kept.iter().all(|h| direction_key(h) != dir) {
                    kept.push(g);
                }
            }
            kept
        } else {
            gens
        };
        let incidence = normal_rows
            .iter()
            .map(|n| {
                generators
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| dot(n, g).is_zero())
                    .fold(0u64, |m, (i, _)| m | (1 << i))
            })
            .collect();
        Ok(Self {
            ambient,
            dim: k,
            span,
            generators,
            halfspaces,
            incidence,
            lineality_dim,
        })
    }

    pub fn from_integer_generators(gens: &[Vec<i64>]) -> Result<Self> {
        Self::from_generators(
            gens.iter()
                .map(|g| g.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the linear span.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality_dim
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality_dim == 0
    }

    pub fn is_simplicial(&self) -> bool {
        self.is_pointed() && self.generators.len() == self.dim
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut rows = self.span.clone();
        rows.push(v.to_vec());
        rank_of(&rows) == self.dim
            && self
                .halfspaces
                .iter()
                .all(|h| !dot(&h.normal_rational(), v).is_negative())
    }

    /// Quotient by the lineality space, as a pointed cone in the orthogonal
    /// complement. Pointed cones are returned unchanged.
    pub fn pointed_quotient(&self) -> Result<PointedCone> {
        if self.is_pointed() {
            return Ok(self.clone());
        }
        let normals: Vec<Vec<Rational>> =
            self.halfspaces.iter().map(Halfspace::normal_rational).collect();
        if normals.is_empty() {
            return Ok(PointedCone {
                ambient: self.ambient,
                dim: 0,
                span: Vec::new(),
                generators: Vec::new(),
                halfspaces: Vec::new(),
                incidence: Vec::new(),
                lineality_dim: 0,
            });
        }
        let (r, piv) = RMatrix::from_rows(normals)?.rref();
        let basis: Vec<Vec<Rational>> = (0..piv.len()).map(|i| r.row(i).to_vec()).collect();
        let proj = Projector::new(&basis);
        PointedCone::from_generators(self.generators.iter().map(|g| proj.project(g)).collect())
    }

    /// Orthonormal coordinates of generators and normals within the span.
    pub fn frame(&self) -> ConeFrame {
        let mut ortho: Vec<Vec<Rational>> = Vec::with_capacity(self.dim);
        for b in &self.span {
            let mut v = b.clone();
            for w in &ortho {
                let c = dot(&v, w) / dot(w, w);
                for (vi, wi) in v.iter_mut().zip(w) {
                    *vi -= &c * wi;
                }
            }
            ortho.push(v);
        }
        let norms: Vec<f64> = ortho.iter().map(|w| to_f64(&dot(w, w)).sqrt()).collect();
        let coords = |v: &[Rational]| -> Vec<f64> {
            ortho
                .iter()
                .zip(&norms)
                .map(|(w, n)| to_f64(&dot(v, w)) / n)
                .collect()
        };
        ConeFrame {
            dim: self.dim,
            generators: self.generators.iter().map(|g| coords(g)).collect(),
            normals: self
                .halfspaces
                .iter()
                .map(|h| coords(&h.normal_rational()))
                .collect(),
        }
    }

    /// Fan triangulation by pulling, as generator index lists.
    pub fn triangulation(&self) -> Result<Vec<Vec<usize>>> {
        if !self.is_pointed() {
            return Err(Error::Lineality(self.lineality_dim));
        }
        if self.dim == 0 {
            return Ok(vec![Vec::new()]);
        }
        let all = (1u64 << self.generators.len()) - 1;
        Ok(Incidence::new(&self.generators, &self.incidence).pull(all, self.dim))
    }

    pub fn subcone(&self, indices: &[usize]) -> Result<PointedCone> {
        PointedCone::from_generators(indices.iter().map(|&i| self.generators[i].clone()).collect())
    }
}

fn direction_key(v: &[Rational]) -> Vec<Rational> {
    let lead = v.iter().find(|x| !x.is_zero()).expect("nonzero").abs();
    v.iter().map(|x| x / &lead).collect()
}

/// Fan of simplicial cones covering `c`, each spanned by generators of `c`.
pub fn triangulate_cone(c: &PointedCone) -> Result<Vec<PointedCone>> {
    c.triangulation()?
        .iter()
        .map(|s| {
            if c.dim == 0 {
                Ok(c.clone())
            } else {
                c.subcone(s)
            }
        })
        .collect()
}

/// Ray/facet incidence of a cone, enough to run a pulling triangulation.
struct Incidence<'a> {
    vectors: &'a [Vec<Rational>],
    facets: &'a [u64],
    ranks: RefCell<HashMap<u64, usize>>,
}

impl<'a> Incidence<'a> {
    fn new(vectors: &'a [Vec<Rational>], facets: &'a [u64]) -> Self {
        Self {
            vectors,
            facets,
            ranks: RefCell::new(HashMap::new()),
        }
    }

    fn rank(&self, mask: u64) -> usize {
        if let Some(&r) = self.ranks.borrow().get(&mask) {
            return r;
        }
        let rows: Vec<Vec<Rational>> = bits(mask).iter().map(|&i| self.vectors[i].clone()).collect();
        let r = rank_of(&rows);
        self.ranks.borrow_mut().insert(mask, r);
        r
    }

    /// Triangulates the face with ray set `mask` (of rank `dim`) by coning
    /// its lowest ray over the triangulated facets not containing it.
    fn pull(&self, mask: u64, dim: usize) -> Vec<Vec<usize>> {
        if mask.count_ones() as usize == dim {
            return vec![bits(mask)];
        }
        let apex = mask.trailing_zeros();
        let sub_faces: BTreeSet<u64> = self
            .facets
            .iter()
            .map(|&f| f & mask)
            .filter(|&g| g != mask && g & (1 << apex) == 0 && g != 0 && self.rank(g) + 1 == dim)
            .collect();
        let mut out = Vec::new();
        for g in sub_faces {
            for mut s in self.pull(g, dim - 1) {
                s.push(apex as usize);
                s.sort_unstable();
                out.push(s);
            }
        }
        out
    }
}
