//! Finite-dimensional real normed spaces: ℓp, centrally symmetric polygons
//! and Gram inner products.
//!
//! Besides evaluating norms and dual norms, each space can describe the set of
//! support functionals at a unit vector. At smooth points that set is a single
//! covector; at corners of polyhedral balls it is the convex hull of finitely
//! many extreme covectors, which is what every downstream interval test needs.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::random::{gaussian_vector, seeded_rng};

/// Exponent of an ℓp norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(1.0) => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    fn is_polyhedral(self) -> bool {
        matches!(self, Exponent::Infinity) || self == Exponent::Finite(1.0)
    }
}

/// A covector `f` acting by `f(x) = Σ f_i x_i`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct DualFunctional(pub Vec<f64>);

impl DualFunctional {
    pub fn new(covector: Vec<f64>) -> Self {
        DualFunctional(covector)
    }

    pub fn covector(&self) -> &[f64] {
        &self.0
    }

    pub fn apply(&self, x: &[f64]) -> f64 {
        linalg::dot(&self.0, x)
    }

    pub fn negated(&self) -> DualFunctional {
        DualFunctional(linalg::neg(&self.0))
    }
}

/// The support functionals at a unit vector.
#[derive(Debug, Clone, PartialEq)]
pub enum SupportSet {
    /// Smooth point.
    Unique(DualFunctional),
    /// Corner of a planar ball: every functional on the segment between the
    /// two covectors supports the point.
    Segment(DualFunctional, DualFunctional),
    /// Convex hull of several extreme covectors (ℓ1 and ℓ∞ in dimension > 2).
    Face(Vec<DualFunctional>),
}

impl SupportSet {
    pub fn extremes(&self) -> Vec<&DualFunctional> {
        match self {
            SupportSet::Unique(f) => vec![f],
            SupportSet::Segment(a, b) => vec![a, b],
            SupportSet::Face(fs) => fs.iter().collect(),
        }
    }

    pub fn is_unique(&self) -> bool {
        matches!(self, SupportSet::Unique(_))
    }

    /// Segment midpoint (centroid of the extremes for a face).
    pub fn canonical(&self) -> DualFunctional {
        match self {
            SupportSet::Unique(f) => f.clone(),
            SupportSet::Segment(a, b) => DualFunctional(linalg::lerp(&a.0, &b.0, 0.5)),
            SupportSet::Face(fs) => {
                let mut c = vec![0.0; fs[0].0.len()];
                for f in fs {
                    for (ci, fi) in c.iter_mut().zip(&f.0) {
                        *ci += fi;
                    }
                }
                DualFunctional(linalg::scale(&c, 1.0 / fs.len() as f64))
            }
        }
    }

    /// `(min f(y), max f(y))` over the set.
    pub fn range(&self, y: &[f64]) -> (f64, f64) {
        self.extremes()
            .iter()
            .map(|f| f.apply(y))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpaceProperties {
    pub strictly_convex: bool,
    pub smooth: bool,
}

/// Unit ball given by a centrally symmetric convex polygon.
///
/// Vertices are stored counterclockwise starting from the smallest polar
/// angle in `[0, 2π)`. Edge `i` joins vertex `i` to vertex `i + 1`; its
/// functional takes the value 1 on both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
    edge_functionals: Vec<[f64; 2]>,
}

fn polar_angle(v: [f64; 2]) -> f64 {
    let a = libm::atan2(v[1], v[0]);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

impl Polygon {
    /// Canonicalizes the vertex list: completes central symmetry, sorts by
    /// angle, merges duplicates and drops vertices lying inside a straight
    /// edge. Fails for non-convex input or a ball without interior.
    pub fn new(raw: &[[f64; 2]]) -> Result<Self> {
        if raw.iter().any(|v| !v[0].is_finite() || !v[1].is_finite()) {
            return Err(Error::InvalidSpace("polygon vertex is not finite".into()));
        }
        let scale = raw.iter().fold(0.0f64, |m, v| m.max(v[0].abs()).max(v[1].abs()));
        if scale == 0.0 {
            return Err(Error::InvalidSpace("polygon needs nonzero vertices".into()));
        }
        let eps = 1e-9 * scale;
        if raw.iter().any(|v| v[0].abs() <= eps && v[1].abs() <= eps) {
            return Err(Error::InvalidSpace("the origin cannot be a vertex".into()));
        }

        let mut pts: Vec<[f64; 2]> = raw.to_vec();
        for v in raw {
            let opposite = [-v[0], -v[1]];
            if !pts.iter().any(|w| (w[0] - opposite[0]).abs() <= eps && (w[1] - opposite[1]).abs() <= eps) {
                pts.push(opposite);
            }
        }
        pts.sort_by(|a, b| polar_angle(*a).total_cmp(&polar_angle(*b)));

        let mut merged: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
        for v in pts {
            match merged.last() {
                Some(w) if (w[0] - v[0]).abs() <= eps && (w[1] - v[1]).abs() <= eps => {}
                Some(w) if cross(*w, v).abs() <= eps * eps && w[0] * v[0] + w[1] * v[1] > 0.0 => {
                    return Err(Error::InvalidSpace(format!(
                        "vertices ({}, {}) and ({}, {}) lie on the same ray",
                        w[0], w[1], v[0], v[1]
                    )));
                }
                _ => merged.push(v),
            }
        }
        if merged.len() >= 2 {
            let (first, last) = (merged[0], merged[merged.len() - 1]);
            if (first[0] - last[0]).abs() <= eps && (first[1] - last[1]).abs() <= eps {
                merged.pop();
            }
        }

        // drop vertices interior to a straight edge, reject reflex corners
        loop {
            let n = merged.len();
            if n < 4 {
                return Err(Error::InvalidSpace("polygon must span the plane (at least two antipodal pairs)".into()));
            }
            let mut removed = false;
            for i in 0..n {
                let prev = merged[(i + n - 1) % n];
                let cur = merged[i];
                let next = merged[(i + 1) % n];
                let turn = cross([cur[0] - prev[0], cur[1] - prev[1]], [next[0] - cur[0], next[1] - cur[1]]);
                if turn < -eps * scale {
                    return Err(Error::InvalidSpace(format!("polygon is not convex at vertex ({}, {})", cur[0], cur[1])));
                }
                if turn.abs() <= eps * scale {
                    merged.remove(i);
                    removed = true;
                    break;
                }
            }
            if !removed {
                break;
            }
        }

        let n = merged.len();
        let mut edge_functionals = Vec::with_capacity(n);
        for i in 0..n {
            let a = merged[i];
            let b = merged[(i + 1) % n];
            let normal = [b[1] - a[1], a[0] - b[0]];
            let offset = normal[0] * a[0] + normal[1] * a[1];
            if offset <= 0.0 {
                return Err(Error::InvalidSpace("origin is not strictly inside the polygon".into()));
            }
            edge_functionals.push([normal[0] / offset, normal[1] / offset]);
        }
        Ok(Polygon { vertices: merged, edge_functionals })
    }

    pub fn regular_hexagon() -> Self {
        let h = libm::sqrt(3.0) / 2.0;
        Polygon::new(&[[1.0, 0.0], [0.5, h], [-0.5, h]]).expect("regular hexagon is valid")
    }

    /// Unit ball of ℓ∞².
    pub fn square() -> Self {
        Polygon::new(&[[1.0, 1.0], [-1.0, 1.0]]).expect("square is valid")
    }

    /// Unit ball of ℓ1².
    pub fn diamond() -> Self {
        Polygon::new(&[[1.0, 0.0], [0.0, 1.0]]).expect("diamond is valid")
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn edge_functionals(&self) -> &[[f64; 2]] {
        &self.edge_functionals
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Index of the boundary edge crossed by the ray from the origin through
    /// `x`: the edge whose functional is largest at `x`.
    pub fn crossing_edge(&self, x: [f64; 2]) -> usize {
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (i, f) in self.edge_functionals.iter().enumerate() {
            let v = f[0] * x[0] + f[1] * x[1];
            if v > best_val {
                best_val = v;
                best = i;
            }
        }
        best
    }

    /// Minkowski gauge of the polygon.
    pub fn gauge(&self, x: [f64; 2]) -> f64 {
        let f = self.edge_functionals[self.crossing_edge(x)];
        (f[0] * x[0] + f[1] * x[1]).max(0.0)
    }

    fn support_set(&self, u: [f64; 2], tol: f64) -> SupportSet {
        let n = self.len();
        let values: Vec<f64> = self.edge_functionals.iter().map(|f| f[0] * u[0] + f[1] * u[1]).collect();
        let top = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let active: Vec<usize> = (0..n).filter(|&i| values[i] >= top - tol).collect();
        let functional = |i: usize| DualFunctional(self.edge_functionals[i].to_vec());
        match active.as_slice() {
            [i] => SupportSet::Unique(functional(*i)),
            [0, j] if *j == n - 1 => SupportSet::Segment(functional(n - 1), functional(0)),
            [i, j] if *j == i + 1 => SupportSet::Segment(functional(*i), functional(*j)),
            _ => {
                // only reachable with a tolerance comparable to the edge lengths
                let best = self.crossing_edge(u);
                SupportSet::Unique(functional(best))
            }
        }
    }
}

/// Gram matrix of an inner product, with its Cholesky factor `G = L Lᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gram {
    matrix: Matrix,
    lower: Matrix,
}

impl Gram {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let n = matrix.rows();
        if n == 0 || matrix.cols() != n {
            return Err(Error::InvalidSpace("gram matrix must be square and nonempty".into()));
        }
        let scale = matrix.max_abs();
        for i in 0..n {
            for j in 0..i {
                if (matrix.get(i, j) - matrix.get(j, i)).abs() > 1e-12 * scale.max(1.0) {
                    return Err(Error::InvalidSpace("gram matrix is not symmetric".into()));
                }
            }
        }
        let chol = nalgebra::Cholesky::new(matrix.to_nalgebra())
            .ok_or_else(|| Error::InvalidSpace("gram matrix is not positive definite".into()))?;
        let lower = Matrix::from_nalgebra(&chol.l());
        if (0..n).any(|i| lower.get(i, i) <= 1e-14 * libm::sqrt(scale)) {
            return Err(Error::InvalidSpace("gram matrix is numerically singular".into()));
        }
        Ok(Gram { matrix, lower })
    }

    pub fn identity(n: usize) -> Self {
        Gram::new(Matrix::identity(n)).expect("identity is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Lower Cholesky factor `L` with `G = L Lᵀ`.
    pub fn cholesky_lower(&self) -> &Matrix {
        &self.lower
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        linalg::dot(x, &self.matrix.apply(y))
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        linalg::euclidean_norm(&self.lower.apply_transpose(x))
    }

    /// Solves `L z = f` by forward substitution.
    pub fn solve_lower(&self, f: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut z = vec![0.0; n];
        for i in 0..n {
            let mut s = f[i];
            for (j, zj) in z.iter().enumerate().take(i) {
                s -= self.lower.get(i, j) * zj;
            }
            z[i] = s / self.lower.get(i, i);
        }
        z
    }

    /// Solves `Lᵀ x = z` by back substitution.
    pub fn solve_upper(&self, z: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = z[i];
            for (j, xj) in x.iter().enumerate().skip(i + 1) {
                s -= self.lower.get(j, i) * xj;
            }
            x[i] = s / self.lower.get(i, i);
        }
        x
    }

    /// `G⁻¹ f`
    pub fn solve(&self, f: &[f64]) -> Vec<f64> {
        self.solve_upper(&self.solve_lower(f))
    }

    pub fn dual_norm(&self, f: &[f64]) -> f64 {
        linalg::euclidean_norm(&self.solve_lower(f))
    }
}

/// A finite-dimensional real normed space.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpace {
    Lp { dim: usize, p: Exponent },
    Polygon(Polygon),
    InnerProduct(Gram),
}

impl NormSpace {
    pub fn lp(dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpace("dimension must be positive".into()));
        }
        if p == f64::INFINITY {
            return Ok(NormSpace::Lp { dim, p: Exponent::Infinity });
        }
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::InvalidSpace(format!("exponent p = {p} must satisfy p >= 1")));
        }
        Ok(NormSpace::Lp { dim, p: Exponent::Finite(p) })
    }

    pub fn sup(dim: usize) -> Result<Self> {
        NormSpace::lp(dim, f64::INFINITY)
    }

    pub fn polygon(vertices: &[[f64; 2]]) -> Result<Self> {
        Ok(NormSpace::Polygon(Polygon::new(vertices)?))
    }

    pub fn regular_hexagon() -> Self {
        NormSpace::Polygon(Polygon::regular_hexagon())
    }

    pub fn inner_product(gram: Matrix) -> Result<Self> {
        Ok(NormSpace::InnerProduct(Gram::new(gram)?))
    }

    pub fn euclidean(dim: usize) -> Self {
        NormSpace::InnerProduct(Gram::identity(dim))
    }

    pub fn dim(&self) -> usize {
        match self {
            NormSpace::Lp { dim, .. } => *dim,
            NormSpace::Polygon(_) => 2,
            NormSpace::InnerProduct(g) => g.dim(),
        }
    }

    pub fn gram(&self) -> Option<&Gram> {
        match self {
            NormSpace::InnerProduct(g) => Some(g),
            _ => None,
        }
    }

    pub fn is_inner_product(&self) -> bool {
        matches!(self, NormSpace::InnerProduct(_))
    }

    /// The unit ball as a polygon, when it is one (polygons, ℓ1², ℓ∞²).
    pub fn as_polygon(&self) -> Option<Polygon> {
        match self {
            NormSpace::Polygon(p) => Some(p.clone()),
            NormSpace::Lp { dim: 2, p: Exponent::Infinity } => Some(Polygon::square()),
            NormSpace::Lp { dim: 2, p: Exponent::Finite(p) } if *p == 1.0 => Some(Polygon::diamond()),
            _ => None,
        }
    }

    pub fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(())
    }

    /// Norm of `x`; the caller guarantees the dimension.
    pub fn norm(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        match self {
            NormSpace::Lp { p, .. } => lp_norm(x, *p),
            NormSpace::Polygon(poly) => poly.gauge([x[0], x[1]]),
            NormSpace::InnerProduct(g) => g.norm(x),
        }
    }

    /// Dual norm of the covector `f`; the caller guarantees the dimension.
    pub fn dual_norm(&self, f: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), self.dim());
        match self {
            NormSpace::Lp { p, .. } => lp_norm(f, p.conjugate()),
            NormSpace::Polygon(poly) => {
                poly.vertices.iter().map(|v| f[0] * v[0] + f[1] * v[1]).fold(0.0, f64::max)
            }
            NormSpace::InnerProduct(g) => g.dual_norm(f),
        }
    }

    /// `x / ‖x‖`.
    pub fn normalize(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let n = self.norm(x);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(linalg::scale(x, 1.0 / n))
    }

    /// Verifies `‖x‖ = 1 ± tol`.
    pub fn check_unit(&self, x: &[f64], tol: f64) -> Result<()> {
        self.check_dim(x)?;
        if linalg::is_zero(x) {
            return Err(Error::ZeroVector);
        }
        let n = self.norm(x);
        if (n - 1.0).abs() > tol {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(())
    }

    /// Support functionals at a unit vector `x`.
    pub fn support_set(&self, x: &[f64], tol: f64) -> Result<SupportSet> {
        self.check_unit(x, tol)?;
        // exact unit vector so the analytic formulas land on the dual sphere
        let u = self.normalize(x)?;
        Ok(match self {
            NormSpace::Lp { p: Exponent::Finite(p), .. } if *p > 1.0 => {
                let f = u.iter().map(|c| libm::copysign(libm::pow(c.abs(), p - 1.0), *c)).collect();
                SupportSet::Unique(DualFunctional(f))
            }
            NormSpace::Lp { .. } if self.as_polygon().is_some() => {
                self.as_polygon().expect("planar polyhedral ball").support_set([u[0], u[1]], tol)
            }
            NormSpace::Lp { p: Exponent::Infinity, dim } => {
                let top = linalg::max_abs(&u);
                let active: Vec<usize> = (0..*dim).filter(|&i| u[i].abs() >= top - tol).collect();
                let fs: Vec<DualFunctional> = active
                    .iter()
                    .map(|&i| {
                        let mut e = vec![0.0; *dim];
                        e[i] = u[i].signum();
                        DualFunctional(e)
                    })
                    .collect();
                collect_face(fs)
            }
            NormSpace::Lp { dim, .. } => {
                // ℓ1 in dimension > 2: free signs on the vanishing coordinates
                let free: Vec<usize> = (0..*dim).filter(|&i| u[i].abs() <= tol).collect();
                if free.len() > 16 {
                    return Err(Error::Unsupported("more than 16 vanishing coordinates in an l1 support set".into()));
                }
                let fs: Vec<DualFunctional> = (0..(1u32 << free.len()))
                    .map(|mask| {
                        let mut f: Vec<f64> = u.iter().map(|c| if c.abs() > tol { c.signum() } else { 0.0 }).collect();
                        for (bit, &i) in free.iter().enumerate() {
                            f[i] = if mask & (1 << bit) != 0 { 1.0 } else { -1.0 };
                        }
                        DualFunctional(f)
                    })
                    .collect();
                collect_face(fs)
            }
            NormSpace::Polygon(poly) => poly.support_set([u[0], u[1]], tol),
            NormSpace::InnerProduct(g) => SupportSet::Unique(DualFunctional(g.matrix().apply(&u))),
        })
    }

    pub fn properties(&self) -> SpaceProperties {
        let round = match self {
            NormSpace::Lp { dim, p } => *dim == 1 || !p.is_polyhedral(),
            NormSpace::Polygon(_) => false,
            NormSpace::InnerProduct(_) => true,
        };
        SpaceProperties { strictly_convex: round, smooth: round }
    }

    /// Unit vector along a standard Gaussian direction.
    pub fn random_unit_vector_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        loop {
            let g = gaussian_vector(rng, self.dim());
            let n = self.norm(&g);
            if n > 1e-300 && n.is_finite() {
                return linalg::scale(&g, 1.0 / n);
            }
        }
    }
}

fn collect_face(mut fs: Vec<DualFunctional>) -> SupportSet {
    match fs.len() {
        1 => SupportSet::Unique(fs.pop().expect("one element")),
        2 => {
            let b = fs.pop().expect("two elements");
            let a = fs.pop().expect("two elements");
            SupportSet::Segment(a, b)
        }
        _ => SupportSet::Face(fs),
    }
}

fn lp_norm(x: &[f64], p: Exponent) -> f64 {
    let m = linalg::max_abs(x);
    match p {
        Exponent::Infinity => m,
        _ if m == 0.0 => 0.0,
        Exponent::Finite(1.0) => x.iter().map(|c| c.abs()).sum(),
        Exponent::Finite(2.0) => linalg::euclidean_norm(x),
        Exponent::Finite(p) => {
            let s: f64 = x.iter().map(|c| libm::pow(c.abs() / m, p)).sum();
            m * libm::pow(s, 1.0 / p)
        }
    }
}

/// `‖x‖`, checking the dimension.
pub fn norm_eval(space: &NormSpace, x: &[f64]) -> Result<f64> {
    space.check_dim(x)?;
    Ok(space.norm(x))
}

/// `‖f‖*`, checking the dimension.
pub fn dual_norm_eval(space: &NormSpace, f: &[f64]) -> Result<f64> {
    space.check_dim(f)?;
    Ok(space.dual_norm(f))
}

pub fn support_functionals(space: &NormSpace, x: &[f64], tol: f64) -> Result<SupportSet> {
    space.support_set(x, tol)
}

pub fn space_properties(space: &NormSpace) -> SpaceProperties {
    space.properties()
}

/// Deterministic random unit vector for `seed`.
pub fn random_unit_vector(space: &NormSpace, seed: u64) -> Vec<f64> {
    space.random_unit_vector_with(&mut seeded_rng(seed))
}
