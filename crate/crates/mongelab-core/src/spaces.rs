//! Norms, distances, constant-speed geodesics, geodesic cones and norm
//! gradients on R^n, plus explicit finite metric spaces.
//!
//! The canonical geodesic between two points of a normed space is the affine
//! segment, which is always length minimising; non-uniquely-geodesic norms
//! (l1, linf) expose branching only through derivative values, never through
//! curve enumeration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Which norm a [`NormSpec`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormKind {
    Euclidean,
    /// lp with p > 1 (strictly convex, C1 away from 0).
    Lp(f64),
    L1,
    Linf,
}

/// A norm together with the ambient dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    kind: NormKind,
    dim: usize,
}

impl NormSpec {
    pub fn new(kind: NormKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if let NormKind::Lp(p) = kind {
            if !p.is_finite() || p <= 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "lp norm requires finite p > 1, got {p}"
                )));
            }
        }
        Ok(Self { kind, dim })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::new(NormKind::Euclidean, dim).expect("dim > 0")
    }

    pub fn lp(p: f64, dim: usize) -> Result<Self> {
        Self::new(NormKind::Lp(p), dim)
    }

    pub fn l1(dim: usize) -> Self {
        Self::new(NormKind::L1, dim).expect("dim > 0")
    }

    pub fn linf(dim: usize) -> Self {
        Self::new(NormKind::Linf, dim).expect("dim > 0")
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Strict convexity of the unit ball (fails exactly for l1 and linf).
    pub fn is_strictly_convex(&self) -> bool {
        matches!(self.kind, NormKind::Euclidean | NormKind::Lp(_))
    }

    /// C1 away from the origin (fails exactly for l1 and linf).
    pub fn is_smooth(&self) -> bool {
        matches!(self.kind, NormKind::Euclidean | NormKind::Lp(_))
    }

    pub fn norm(&self, v: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), self.dim);
        match self.kind {
            NormKind::Euclidean => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormKind::Lp(p) => v.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p),
            NormKind::L1 => v.iter().map(|x| x.abs()).sum(),
            NormKind::Linf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.norm(&diff)
    }

    /// Analytic gradient of the norm at `v != 0`.
    ///
    /// Component i is sign(v_i) |v_i|^{p-1} / ||v||^{p-1}; satisfies the
    /// dual-norm-one identity and the Euler identity grad(v) . v = ||v||.
    pub fn gradient(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(v)?;
        let n = self.norm(v);
        if n == 0.0 {
            return Err(Error::NonDifferentiable {
                context: "gradient at the origin (kink)".into(),
            });
        }
        match self.kind {
            NormKind::Euclidean => Ok(v.iter().map(|x| x / n).collect()),
            NormKind::Lp(p) => Ok(v
                .iter()
                .map(|x| x.signum() * x.abs().powf(p - 1.0) / n.powf(p - 1.0))
                .collect()),
            NormKind::L1 | NormKind::Linf => Err(Error::NonDifferentiable {
                context: format!("{:?} norm is non-differentiable on a dense set of directions", self.kind),
            }),
        }
    }

    /// One valid subgradient element at `v != 0`; fallback for l1/linf where
    /// [`NormSpec::gradient`] refuses.
    pub fn subgradient_sample(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(v)?;
        if self.norm(v) == 0.0 {
            return Err(Error::NonDifferentiable {
                context: "subgradient at the origin is the whole dual ball".into(),
            });
        }
        match self.kind {
            NormKind::Euclidean | NormKind::Lp(_) => self.gradient(v),
            NormKind::L1 => Ok(v.iter().map(|x| x.signum()).collect()),
            NormKind::Linf => {
                // sign at the first coordinate attaining the max
                let mut best = 0;
                for (i, x) in v.iter().enumerate() {
                    if x.abs() > v[best].abs() {
                        best = i;
                    }
                }
                let mut g = vec![0.0; v.len()];
                g[best] = v[best].signum();
                Ok(g)
            }
        }
    }

    /// Dual norm: ||w||_* = sup { w.v : ||v|| = 1 }.
    pub fn dual_norm(&self, w: &[f64]) -> f64 {
        debug_assert_eq!(w.len(), self.dim);
        match self.kind {
            NormKind::Euclidean => NormSpec::euclidean(self.dim).norm(w),
            NormKind::Lp(p) => {
                let q = p / (p - 1.0);
                w.iter().map(|x| x.abs().powf(q)).sum::<f64>().powf(1.0 / q)
            }
            NormKind::L1 => w.iter().fold(0.0, |m, x| m.max(x.abs())),
            NormKind::Linf => w.iter().map(|x| x.abs()).sum(),
        }
    }

    /// A unit vector (in this norm) maximising the pairing with `w`; realises
    /// the dual norm: maximiser(w) . w = ||w||_*.
    pub fn dual_maximizer(&self, w: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(w)?;
        let d = self.dual_norm(w);
        if d == 0.0 {
            return Err(Error::InvalidParameter("dual maximizer of the zero covector".into()));
        }
        let v: Vec<f64> = match self.kind {
            NormKind::Euclidean => w.to_vec(),
            NormKind::Lp(p) => {
                let q = p / (p - 1.0);
                w.iter().map(|x| x.signum() * x.abs().powf(q - 1.0)).collect()
            }
            NormKind::L1 => {
                let mut best = 0;
                for (i, x) in w.iter().enumerate() {
                    if x.abs() > w[best].abs() {
                        best = i;
                    }
                }
                let mut v = vec![0.0; w.len()];
                v[best] = w[best].signum();
                v
            }
            NormKind::Linf => w.iter().map(|x| x.signum()).collect(),
        };
        let n = self.norm(&v);
        Ok(v.iter().map(|x| x / n).collect())
    }

    fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }
}

/// An explicit finite metric space given by labels and a distance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteMetric {
    labels: Vec<String>,
    /// Row-major n x n distances.
    matrix: Vec<f64>,
}

impl FiniteMetric {
    /// Validates symmetry, nonnegativity, zero diagonal and the triangle
    /// inequality over all triples.
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidParameter("finite metric needs at least one point".into()));
        }
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidParameter(format!("distance matrix must be {n}x{n}")));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &matrix {
            flat.extend_from_slice(row);
        }
        for i in 0..n {
            if flat[i * n + i] != 0.0 {
                return Err(Error::InvalidParameter(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let d = flat[i * n + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "invalid distance {d} at ({i},{j})"
                    )));
                }
                if (d - flat[j * n + i]).abs() > 0.0 {
                    return Err(Error::InvalidParameter(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if flat[i * n + j] > flat[i * n + k] + flat[k * n + j] + tol::TRIANGLE {
                        return Err(Error::InvalidParameter(format!(
                            "triangle inequality fails on ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(Self { labels, matrix: flat })
    }

    /// Parses the text format: first line n, then n whitespace-separated rows.
    /// Points are labelled by their row index.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let n: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty finite-metric file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad point count: {e}")))?;
        let mut matrix = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let t = tokens
                    .next()
                    .ok_or_else(|| Error::Parse(format!("matrix truncated at ({i},{j})")))?;
                row.push(
                    t.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad entry at ({i},{j}): {e}")))?,
                );
            }
            matrix.push(row);
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing data after the distance matrix".into()));
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::new(labels, matrix)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn distance_by_index(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.labels.len() + j]
    }
}

/// A point of a metric space: coordinates in a normed space, or a label of a
/// finite space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Point {
    Coords(Vec<f64>),
    Label(String),
}

impl Point {
    pub fn coords(v: impl Into<Vec<f64>>) -> Self {
        Point::Coords(v.into())
    }

    pub fn as_coords(&self) -> Result<&[f64]> {
        match self {
            Point::Coords(v) => Ok(v),
            Point::Label(l) => Err(Error::InvalidParameter(format!(
                "expected coordinates, got label {l:?}"
            ))),
        }
    }
}

/// Either R^n under a chosen norm, or an explicit finite metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MetricSpace {
    Normed(NormSpec),
    Finite(FiniteMetric),
}

impl MetricSpace {
    pub fn normed(spec: NormSpec) -> Self {
        MetricSpace::Normed(spec)
    }

    pub fn norm_spec(&self) -> Option<&NormSpec> {
        match self {
            MetricSpace::Normed(n) => Some(n),
            MetricSpace::Finite(_) => None,
        }
    }

    pub fn require_norm(&self, op: &'static str) -> Result<&NormSpec> {
        self.norm_spec().ok_or(Error::NormedSpaceRequired(op))
    }

    pub fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        match (self, a, b) {
            (MetricSpace::Normed(n), Point::Coords(x), Point::Coords(y)) => {
                if x.len() != n.dim() {
                    return Err(Error::DimensionMismatch { expected: n.dim(), got: x.len() });
                }
                if y.len() != n.dim() {
                    return Err(Error::DimensionMismatch { expected: n.dim(), got: y.len() });
                }
                Ok(n.distance(x, y))
            }
            (MetricSpace::Finite(f), Point::Label(a), Point::Label(b)) => {
                let i = f.label_index(a)?;
                let j = f.label_index(b)?;
                Ok(f.distance_by_index(i, j))
            }
            (MetricSpace::Normed(_), _, _) => Err(Error::InvalidParameter(
                "normed spaces take coordinate points".into(),
            )),
            (MetricSpace::Finite(_), _, _) => Err(Error::InvalidParameter(
                "finite spaces take labelled points".into(),
            )),
        }
    }

    /// Canonical constant-speed geodesic (affine segment). Finite spaces have
    /// no interpolation and return an error; a = b yields the constant curve.
    pub fn geodesic(&self, a: &[f64], b: &[f64]) -> Result<Geodesic> {
        let n = self.require_norm("geodesic")?;
        if a.len() != n.dim() || b.len() != n.dim() {
            return Err(Error::DimensionMismatch {
                expected: n.dim(),
                got: if a.len() != n.dim() { a.len() } else { b.len() },
            });
        }
        Ok(Geodesic {
            norm: *n,
            start: a.to_vec(),
            end: b.to_vec(),
        })
    }

    pub fn directional_metric_derivative(
        &self,
        x: &[f64],
        y: &[f64],
        z: &[f64],
        schedule: &[f64],
    ) -> Result<DerivativeEstimate> {
        let n = self.require_norm("directional_metric_derivative")?;
        directional_metric_derivative(n, x, y, z, schedule)
    }
}

/// Affine constant-speed curve on [0,1] in a normed space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    norm: NormSpec,
    start: Vec<f64>,
    end: Vec<f64>,
}

impl Geodesic {
    pub fn eval(&self, t: f64) -> Vec<f64> {
        self.start
            .iter()
            .zip(&self.end)
            .map(|(a, b)| a + t * (b - a))
            .collect()
    }

    pub fn start(&self) -> &[f64] {
        &self.start
    }

    pub fn end(&self) -> &[f64] {
        &self.end
    }

    pub fn norm_spec(&self) -> &NormSpec {
        &self.norm
    }

    /// d(start, end) in the carried norm.
    pub fn length(&self) -> f64 {
        self.norm.distance(&self.start, &self.end)
    }
}

/// Geodesic cone of size k: the union over t in [0,1] of the closed balls of
/// radius t*k centred at the curve point at t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicCone {
    pub geodesic: Geodesic,
    pub size: f64,
}

impl GeodesicCone {
    pub fn new(geodesic: Geodesic, size: f64) -> Result<Self> {
        if !(size > 0.0) {
            return Err(Error::InvalidParameter(format!("cone size must be positive, got {size}")));
        }
        Ok(Self { geodesic, size })
    }

    /// min over t in [0,1] of d(p, curve(t)) - t*k. Nonpositive clearance
    /// means p lies in the cone.
    ///
    /// t -> d(p, curve(t)) is convex for affine curves in a normed space, so
    /// the minimum is located by ternary search refined to absolute
    /// t-resolution [`tol::CONE_T_RESOLUTION`].
    pub fn clearance(&self, p: &[f64]) -> f64 {
        let f = |t: f64| {
            let g = self.geodesic.eval(t);
            self.geodesic.norm_spec().distance(p, &g) - t * self.size
        };
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        while hi - lo > tol::CONE_T_RESOLUTION {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if f(m1) <= f(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let mid = 0.5 * (lo + hi);
        f(lo).min(f(hi)).min(f(mid)).min(f(0.0)).min(f(1.0))
    }

    /// Membership with closed-ball slices: true iff the clearance is <= tol.
    pub fn contains(&self, p: &[f64], tolerance: f64) -> bool {
        self.clearance(p) <= tolerance
    }
}

/// Difference-quotient table for a liminf-type directional derivative, plus a
/// single working estimate. The true limit is only finitely probed and is
/// never claimed; the estimate is the smallest-t quotient, refined by
/// Richardson extrapolation when the quotients are monotone, and clamped at
/// the triangle-inequality bound -d(x,y).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeEstimate {
    /// (t, quotient) pairs, decreasing in t.
    pub quotients: Vec<(f64, f64)>,
    pub estimate: f64,
}

/// One-sided difference quotients of t -> d(curve(t), z) along the canonical
/// geodesic from x to y, at each t of `schedule`.
pub fn directional_metric_derivative(
    norm: &NormSpec,
    x: &[f64],
    y: &[f64],
    z: &[f64],
    schedule: &[f64],
) -> Result<DerivativeEstimate> {
    for v in [x, y, z] {
        if v.len() != norm.dim() {
            return Err(Error::DimensionMismatch { expected: norm.dim(), got: v.len() });
        }
    }
    let d_xy = norm.distance(x, y);
    if d_xy == 0.0 {
        return Err(Error::InvalidParameter("derivative undefined for x = y".into()));
    }
    if schedule.is_empty() || schedule.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidParameter("schedule must be nonempty with t > 0".into()));
    }
    let mut ts: Vec<f64> = schedule.to_vec();
    ts.sort_by(|a, b| b.partial_cmp(a).expect("finite t"));
    ts.dedup();

    let d_xz = norm.distance(x, z);
    let quotients: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| {
            let gt: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + t * (b - a)).collect();
            (t, (norm.distance(&gt, z) - d_xz) / t)
        })
        .collect();

    let k = quotients.len();
    let mut estimate = quotients[k - 1].1;
    if k >= 2 {
        let diffs: Vec<f64> = quotients.windows(2).map(|w| w[1].1 - w[0].1).collect();
        let monotone = diffs.iter().all(|&d| d >= 0.0) || diffs.iter().all(|&d| d <= 0.0);
        if monotone {
            // linear extrapolation to t = 0 from the two smallest t
            let (t1, q1) = quotients[k - 1];
            let (t2, q2) = quotients[k - 2];
            estimate = (t2 * q1 - t1 * q2) / (t2 - t1);
        }
    }
    // the limit can never undershoot the triangle bound
    if estimate < -d_xy {
        estimate = -d_xy;
    }
    Ok(DerivativeEstimate { quotients, estimate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn norms_under_test() -> Vec<NormSpec> {
        vec![
            NormSpec::euclidean(2),
            NormSpec::lp(3.0, 2).unwrap(),
            NormSpec::lp(1.5, 2).unwrap(),
            NormSpec::l1(2),
            NormSpec::linf(2),
        ]
    }

    #[test]
    fn distance_examples() {
        let e = MetricSpace::Normed(NormSpec::euclidean(2));
        let a = Point::coords(vec![0.0, 0.0]);
        let b = Point::coords(vec![3.0, 4.0]);
        assert_eq!(e.distance(&a, &b).unwrap(), 5.0);

        let li = MetricSpace::Normed(NormSpec::linf(2));
        assert_eq!(li.distance(&a, &b).unwrap(), 4.0);

        let lp3 = MetricSpace::Normed(NormSpec::lp(3.0, 2).unwrap());
        let u = Point::coords(vec![1.0, 0.0]);
        let v = Point::coords(vec![0.0, 1.0]);
        let d = lp3.distance(&u, &v).unwrap();
        assert!((d - 2.0_f64.powf(1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn distance_errors() {
        let e = MetricSpace::Normed(NormSpec::euclidean(2));
        let a = Point::coords(vec![0.0, 0.0]);
        let c = Point::coords(vec![1.0]);
        assert!(matches!(
            e.distance(&a, &c),
            Err(Error::DimensionMismatch { .. })
        ));

        let f = FiniteMetric::new(
            vec!["a".into(), "b".into()],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        )
        .unwrap();
        let fs = MetricSpace::Finite(f);
        assert!(matches!(
            fs.distance(&Point::Label("a".into()), &Point::Label("zz".into())),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn lp_requires_p_above_one() {
        assert!(NormSpec::lp(1.0, 2).is_err());
        assert!(NormSpec::lp(0.5, 2).is_err());
        assert!(NormSpec::lp(f64::INFINITY, 2).is_err());
        assert!(!NormSpec::l1(2).is_strictly_convex());
        assert!(!NormSpec::linf(2).is_smooth());
    }

    #[test]
    fn triangle_inequality_random_triples() {
        for norm in norms_under_test() {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..10_000 {
                let p: Vec<Vec<f64>> = (0..3)
                    .map(|_| (0..2).map(|_| rng.gen_range(-5.0..5.0)).collect())
                    .collect();
                let dab = norm.distance(&p[0], &p[1]);
                let dbc = norm.distance(&p[1], &p[2]);
                let dac = norm.distance(&p[0], &p[2]);
                assert!(dac <= dab + dbc + tol::TRIANGLE, "{:?}", norm.kind());
                assert!((dab - norm.distance(&p[1], &p[0])).abs() == 0.0);
            }
        }
    }

    #[test]
    fn geodesic_examples() {
        let space = MetricSpace::Normed(NormSpec::euclidean(2));
        let g = space.geodesic(&[0.0, 0.0], &[2.0, 0.0]).unwrap();
        assert_eq!(g.eval(0.5), vec![1.0, 0.0]);
        assert_eq!(g.eval(0.0), vec![0.0, 0.0]);
        let d = NormSpec::euclidean(2).distance(&g.eval(0.25), &g.eval(0.75));
        assert!((d - 0.5 * g.length()).abs() < 1e-12);

        // a = b gives the constant curve
        let c = space.geodesic(&[1.0, 1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(c.eval(0.3), vec![1.0, 1.0]);

        let f = FiniteMetric::new(vec!["a".into()], vec![vec![0.0]]).unwrap();
        assert!(matches!(
            MetricSpace::Finite(f).geodesic(&[0.0], &[1.0]),
            Err(Error::NormedSpaceRequired(_))
        ));
    }

    #[test]
    fn geodesic_constant_speed_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for norm in norms_under_test() {
            let space = MetricSpace::Normed(norm);
            for _ in 0..20 {
                let a: Vec<f64> = (0..2).map(|_| rng.gen_range(-3.0..3.0)).collect();
                let b: Vec<f64> = (0..2).map(|_| rng.gen_range(-3.0..3.0)).collect();
                let g = space.geodesic(&a, &b).unwrap();
                let len = g.length();
                for _ in 0..10 {
                    let s: f64 = rng.gen_range(0.0..1.0);
                    let t: f64 = rng.gen_range(0.0..1.0);
                    let d = norm.distance(&g.eval(s), &g.eval(t));
                    assert!((d - (s - t).abs() * len).abs() < tol::GEODESIC_SPEED);
                }
            }
        }
    }

    /// Independent grid-search oracle for cone membership.
    fn cone_grid_oracle(cone: &GeodesicCone, p: &[f64]) -> bool {
        let n = cone.geodesic.norm_spec();
        (0..=20_000).any(|i| {
            let t = i as f64 / 20_000.0;
            n.distance(p, &cone.geodesic.eval(t)) - t * cone.size <= 0.0
        })
    }

    #[test]
    fn cone_membership_examples() {
        let space = MetricSpace::Normed(NormSpec::euclidean(2));
        let g = space.geodesic(&[0.0, 0.0], &[1.0, 0.0]).unwrap();
        let cone = GeodesicCone::new(g, 0.5).unwrap();

        // apex: t = 0 gives 0 <= 0
        assert!(cone.contains(&[0.0, 0.0], 0.0));
        // derived via the grid oracle: t = 0.5 gives 0.2 <= 0.25
        assert!(cone_grid_oracle(&cone, &[0.5, 0.2]));
        assert!(cone.contains(&[0.5, 0.2], 0.0));
        // derived: sqrt(t^2 + 0.01) > 0.5 t for all t
        assert!(!cone_grid_oracle(&cone, &[0.0, 0.1]));
        assert!(!cone.contains(&[0.0, 0.1], 0.0));

        let g2 = space.geodesic(&[0.0, 0.0], &[1.0, 0.0]).unwrap();
        assert!(GeodesicCone::new(g2, 0.0).is_err());
    }

    #[test]
    fn cone_contains_its_geodesic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for norm in norms_under_test() {
            let space = MetricSpace::Normed(norm);
            for &k in &[1e-3, 0.3, 2.0] {
                let a: Vec<f64> = (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let b: Vec<f64> = (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let g = space.geodesic(&a, &b).unwrap();
                let cone = GeodesicCone::new(g.clone(), k).unwrap();
                for i in 0..=100 {
                    let t = i as f64 / 100.0;
                    assert!(cone.contains(&g.eval(t), tol::POINT_EQ));
                }
            }
        }
    }

    #[test]
    fn gradient_examples() {
        let e = NormSpec::euclidean(2);
        assert_eq!(e.gradient(&[3.0, 4.0]).unwrap(), vec![0.6, 0.8]);
        assert!(matches!(
            e.gradient(&[0.0, 0.0]),
            Err(Error::NonDifferentiable { .. })
        ));

        let lp4 = NormSpec::lp(4.0, 2).unwrap();
        let g = lp4.gradient(&[1.0, 1.0]).unwrap();
        let expect = 2.0_f64.powf(-0.75);
        assert!((g[0] - expect).abs() < 1e-12 && (g[1] - expect).abs() < 1e-12);

        assert!(NormSpec::l1(2).gradient(&[1.0, 2.0]).is_err());
        assert!(NormSpec::linf(2).gradient(&[1.0, 2.0]).is_err());
        // the fallback still hands out a subgradient element
        let sg = NormSpec::linf(2).subgradient_sample(&[1.0, -2.0]).unwrap();
        assert_eq!(sg, vec![0.0, -1.0]);
    }

    #[test]
    fn gradient_identities_and_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for norm in [
            NormSpec::euclidean(2),
            NormSpec::lp(4.0, 2).unwrap(),
            NormSpec::lp(1.5, 3).unwrap(),
            NormSpec::euclidean(3),
        ] {
            for _ in 0..100 {
                let v: Vec<f64> = (0..norm.dim())
                    .map(|_| {
                        let x: f64 = rng.gen_range(-2.0..2.0);
                        if x.abs() < 0.05 { 0.2 } else { x }
                    })
                    .collect();
                let g = norm.gradient(&v).unwrap();
                // dual-norm-one identity
                assert!((norm.dual_norm(&g) - 1.0).abs() < tol::GRADIENT_IDENTITY);
                // Euler identity for 1-homogeneous functions
                let pairing: f64 = g.iter().zip(&v).map(|(a, b)| a * b).sum();
                assert!((pairing - norm.norm(&v)).abs() < tol::GRADIENT_IDENTITY);
                // finite differences, h = 1e-6, agreement to 1e-5
                let h = 1e-6;
                for i in 0..v.len() {
                    let mut vp = v.clone();
                    let mut vm = v.clone();
                    vp[i] += h;
                    vm[i] -= h;
                    let fd = (norm.norm(&vp) - norm.norm(&vm)) / (2.0 * h);
                    assert!((fd - g[i]).abs() < 1e-5, "{:?} comp {i}", norm.kind());
                }
            }
        }
    }

    #[test]
    fn derivative_examples() {
        let space = MetricSpace::Normed(NormSpec::euclidean(2));
        let sched = [1e-3, 1e-4, 1e-5];
        // right angle: limit 0
        let d = space
            .directional_metric_derivative(&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &sched)
            .unwrap();
        assert!(d.estimate.abs() < 1e-4);
        // collinear toward z: -d(x,y)
        let d = space
            .directional_metric_derivative(&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0], &sched)
            .unwrap();
        assert!((d.estimate + 1.0).abs() < 1e-9);
        // directly away from z: +d(x,y)
        let d = space
            .directional_metric_derivative(&[0.0, 0.0], &[1.0, 0.0], &[-1.0, 0.0], &sched)
            .unwrap();
        assert!((d.estimate - 1.0).abs() < 1e-9);

        assert!(space
            .directional_metric_derivative(&[0.0, 0.0], &[0.0, 0.0], &[1.0, 1.0], &sched)
            .is_err());
    }

    #[test]
    fn derivative_triangle_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for norm in norms_under_test() {
            let space = MetricSpace::Normed(norm);
            for _ in 0..200 {
                let mut pts: Vec<Vec<f64>> = Vec::new();
                while pts.len() < 3 {
                    let p: Vec<f64> = (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect();
                    if pts.iter().all(|q| norm.distance(q, &p) > 1e-3) {
                        pts.push(p);
                    }
                }
                let d = space
                    .directional_metric_derivative(&pts[0], &pts[1], &pts[2], &[1e-2, 1e-3, 1e-4])
                    .unwrap();
                let bound = -norm.distance(&pts[0], &pts[1]) - tol::DERIVATIVE_TRIANGLE;
                assert!(d.estimate >= bound);
                for (_, q) in d.quotients {
                    assert!(q >= bound);
                }
            }
        }
    }

    #[test]
    fn finite_metric_from_text() {
        let f = FiniteMetric::from_text("3\n0 1 2\n1 0 1\n2 1 0\n").unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.distance_by_index(0, 2), 2.0);
        // triangle violation rejected
        assert!(FiniteMetric::from_text("3\n0 1 9\n1 0 1\n9 1 0\n").is_err());
        // asymmetry rejected
        assert!(FiniteMetric::from_text("2\n0 1\n2 0\n").is_err());
    }
}
