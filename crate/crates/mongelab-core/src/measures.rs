//! Discrete and sampled (absolutely continuous) measures, with ball masses,
//! doubling ratios and geodesic-cone mass ratios.
//!
//! Ball membership is strict (open balls); cone slices are closed. All
//! estimators are pure functions of (inputs, seed): identical seeds produce
//! bit-identical reports. Per-radius and per-direction work derives its seed
//! deterministically from the base seed and a task index.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{Geodesic, GeodesicCone, NormSpec};
use crate::tol;

const Z95: f64 = 1.959963984540054;
const MAX_REJECTION_TRIES: u32 = 200_000;

/// Deterministic per-task seed derivation (splitmix64 over a salted base).
pub fn derived_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Default geometric radius schedule r0 * 2^-i, i = 0..=6.
pub fn default_radii(r0: f64) -> Vec<f64> {
    (0..=6).map(|i| r0 * 0.5_f64.powi(i)).collect()
}

/// 95% confidence half-width for a binomial proportion: normal approximation
/// with a Wilson-interval guard when either count is below 30.
pub fn proportion_ci(successes: u64, trials: u64) -> (f64, f64) {
    assert!(trials > 0);
    let n = trials as f64;
    let p = successes as f64 / n;
    if successes.min(trials - successes) >= 30 {
        (p, Z95 * (p * (1.0 - p) / n).sqrt())
    } else {
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let hw = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        let lo = (center - hw).max(0.0);
        let hi = (center + hw).min(1.0);
        (p, (p - lo).max(hi - p))
    }
}

/// Atoms with positive weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Duplicate points (bitwise-equal coordinates) are merged on load.
    pub fn new(atoms: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidParameter("measure needs at least one atom".into()));
        }
        let dim = atoms[0].0.len();
        let mut points: Vec<Vec<f64>> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        for (p, w) in atoms {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidParameter(format!("atom weight must be positive, got {w}")));
            }
            match points.iter().position(|q| q == &p) {
                Some(i) => weights[i] += w,
                None => {
                    points.push(p);
                    weights.push(w);
                }
            }
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol::WEIGHT_SUM {
            return Err(Error::InvalidParameter(format!(
                "weights sum to {total}, expected 1 within {}",
                tol::WEIGHT_SUM
            )));
        }
        Ok(Self { points, weights })
    }

    /// Builds from raw masses, normalising to total mass one.
    pub fn normalized(atoms: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        if !(total > 0.0) {
            return Err(Error::ZeroMass("cannot normalise a zero-mass atom list".into()));
        }
        Self::new(atoms.into_iter().map(|(p, w)| (p, w / total)).collect())
    }

    pub fn uniform(points: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::InvalidParameter("measure needs at least one atom".into()));
        }
        let w = 1.0 / n as f64;
        Self::new(points.into_iter().map(|p| (p, w)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Parses CSV rows `x1,...,xn,weight`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut atoms = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
                })
                .collect::<Result<_>>()?;
            if fields.len() < 2 {
                return Err(Error::Parse(format!("line {}: need coordinates and a weight", lineno + 1)));
            }
            let w = *fields.last().unwrap();
            atoms.push((fields[..fields.len() - 1].to_vec(), w));
        }
        Self::new(atoms)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (p, w) in self.points.iter().zip(&self.weights) {
            for c in p {
                out.push_str(&format!("{c},"));
            }
            out.push_str(&format!("{w}\n"));
        }
        out
    }

    /// Exact mass of the open ball.
    fn ball_mass_exact(&self, norm: &NormSpec, center: &[f64], r: f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .filter(|(p, _)| norm.distance(p, center) < r)
            .map(|(_, w)| w)
            .sum()
    }
}

/// A seedable sampler representing an absolutely continuous reference
/// measure, with enough analytic structure to sample conditionally on balls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SampledDensity {
    /// Normalised Lebesgue measure on an axis-aligned box.
    UniformBox { lo: Vec<f64>, hi: Vec<f64> },
    /// Isotropic Gaussian truncated to a box.
    TruncatedGaussian { center: Vec<f64>, sigma: f64, lo: Vec<f64>, hi: Vec<f64> },
    /// Two-level density on a box, split along one axis.
    PiecewiseConstantBox {
        lo: Vec<f64>,
        hi: Vec<f64>,
        axis: usize,
        split: f64,
        low_weight: f64,
        high_weight: f64,
    },
    /// Uniform measure on a straight segment (1-D support embedded in R^n).
    UniformSegment { a: Vec<f64>, b: Vec<f64> },
}

impl SampledDensity {
    pub fn validate(&self) -> Result<()> {
        match self {
            SampledDensity::UniformBox { lo, hi } => check_box(lo, hi),
            SampledDensity::TruncatedGaussian { center, sigma, lo, hi } => {
                check_box(lo, hi)?;
                if center.len() != lo.len() {
                    return Err(Error::DimensionMismatch { expected: lo.len(), got: center.len() });
                }
                if !(*sigma > 0.0) {
                    return Err(Error::InvalidParameter("sigma must be positive".into()));
                }
                Ok(())
            }
            SampledDensity::PiecewiseConstantBox { lo, hi, axis, split, low_weight, high_weight } => {
                check_box(lo, hi)?;
                if *axis >= lo.len() {
                    return Err(Error::InvalidParameter("split axis out of range".into()));
                }
                if !(*split > lo[*axis] && *split < hi[*axis]) {
                    return Err(Error::InvalidParameter("split must lie inside the box".into()));
                }
                if !(*low_weight > 0.0 && *high_weight > 0.0) {
                    return Err(Error::InvalidParameter("density levels must be positive".into()));
                }
                Ok(())
            }
            SampledDensity::UniformSegment { a, b } => {
                if a.len() != b.len() {
                    return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
                }
                if a == b {
                    return Err(Error::InvalidParameter("segment endpoints coincide".into()));
                }
                Ok(())
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SampledDensity::UniformBox { lo, .. } => lo.len(),
            SampledDensity::TruncatedGaussian { lo, .. } => lo.len(),
            SampledDensity::PiecewiseConstantBox { lo, .. } => lo.len(),
            SampledDensity::UniformSegment { a, .. } => a.len(),
        }
    }

    /// Unnormalised density relative to Lebesgue on the support (used only
    /// for rejection ratios, so the normalising constant is irrelevant).
    fn density(&self, p: &[f64]) -> f64 {
        match self {
            SampledDensity::UniformBox { .. } => 1.0,
            SampledDensity::TruncatedGaussian { center, sigma, .. } => {
                let d2: f64 = p.iter().zip(center).map(|(x, c)| (x - c) * (x - c)).sum();
                (-d2 / (2.0 * sigma * sigma)).exp()
            }
            SampledDensity::PiecewiseConstantBox { axis, split, low_weight, high_weight, .. } => {
                if p[*axis] < *split {
                    *low_weight
                } else {
                    *high_weight
                }
            }
            SampledDensity::UniformSegment { .. } => 1.0,
        }
    }

    /// Upper bound of the density over an axis-aligned region.
    fn density_sup(&self, lo: &[f64], hi: &[f64]) -> f64 {
        match self {
            SampledDensity::UniformBox { .. } | SampledDensity::UniformSegment { .. } => 1.0,
            SampledDensity::TruncatedGaussian { center, .. } => {
                let clamped: Vec<f64> =
                    center.iter().zip(lo.iter().zip(hi)).map(|(c, (l, h))| c.max(*l).min(*h)).collect();
                self.density(&clamped)
            }
            SampledDensity::PiecewiseConstantBox { axis, split, low_weight, high_weight, .. } => {
                let mut sup: f64 = 0.0;
                if lo[*axis] < *split {
                    sup = sup.max(*low_weight);
                }
                if hi[*axis] >= *split {
                    sup = sup.max(*high_weight);
                }
                if sup == 0.0 {
                    sup = low_weight.max(*high_weight);
                }
                sup
            }
        }
    }

    fn support_box(&self) -> Option<(&[f64], &[f64])> {
        match self {
            SampledDensity::UniformBox { lo, hi }
            | SampledDensity::TruncatedGaussian { lo, hi, .. }
            | SampledDensity::PiecewiseConstantBox { lo, hi, .. } => Some((lo, hi)),
            SampledDensity::UniformSegment { .. } => None,
        }
    }

    /// One unconditional draw.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        match self {
            SampledDensity::UniformSegment { a, b } => {
                let t: f64 = rng.gen_range(0.0..1.0);
                Ok(a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect())
            }
            _ => {
                let (lo, hi) = self.support_box().expect("box-supported");
                let sup = self.density_sup(lo, hi);
                for _ in 0..MAX_REJECTION_TRIES {
                    let p: Vec<f64> =
                        lo.iter().zip(hi).map(|(l, h)| rng.gen_range(*l..*h)).collect();
                    if rng.gen_range(0.0..1.0) * sup <= self.density(&p) {
                        return Ok(p);
                    }
                }
                Err(Error::Numerical("rejection sampling failed to accept".into()))
            }
        }
    }

    /// One draw conditioned on the open ball B_r(center) in the given norm.
    ///
    /// Returns `ZeroMass` when the ball provably misses the support.
    pub fn sample_in_ball(
        &self,
        norm: &NormSpec,
        center: &[f64],
        r: f64,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<f64>> {
        match self {
            SampledDensity::UniformSegment { a, b } => {
                if !matches!(norm.kind(), crate::spaces::NormKind::Euclidean) {
                    return Err(Error::InvalidParameter(
                        "segment samplers support conditional balls in the Euclidean norm only".into(),
                    ));
                }
                let (t0, t1) = segment_ball_interval(a, b, center, r)
                    .ok_or_else(|| Error::ZeroMass(format!("ball of radius {r} misses the segment")))?;
                let t = rng.gen_range(t0..t1);
                Ok(a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect())
            }
            _ => {
                let (lo, hi) = self.support_box().expect("box-supported");
                // any lp ball of radius r sits inside the coordinate box of half-width r
                let clo: Vec<f64> = lo.iter().zip(center).map(|(l, c)| l.max(c - r)).collect();
                let chi: Vec<f64> = hi.iter().zip(center).map(|(h, c)| h.min(c + r)).collect();
                if clo.iter().zip(&chi).any(|(l, h)| l >= h) {
                    return Err(Error::ZeroMass(format!("ball of radius {r} misses the support box")));
                }
                let sup = self.density_sup(&clo, &chi);
                for _ in 0..MAX_REJECTION_TRIES {
                    let p: Vec<f64> =
                        clo.iter().zip(&chi).map(|(l, h)| rng.gen_range(*l..*h)).collect();
                    if norm.distance(&p, center) < r
                        && rng.gen_range(0.0..1.0) * sup <= self.density(&p)
                    {
                        return Ok(p);
                    }
                }
                Err(Error::ZeroMass(format!(
                    "no samples accepted in the ball of radius {r} (support overlap too thin)"
                )))
            }
        }
    }
}

fn check_box(lo: &[f64], hi: &[f64]) -> Result<()> {
    if lo.len() != hi.len() || lo.is_empty() {
        return Err(Error::InvalidParameter("box bounds must have equal positive dimension".into()));
    }
    if lo.iter().zip(hi).any(|(l, h)| !(l < h)) {
        return Err(Error::InvalidParameter("box must have positive side lengths".into()));
    }
    Ok(())
}

/// Parameter interval {t in [0,1] : |a + t(b-a) - c|_2 < r}, if nonempty.
fn segment_ball_interval(a: &[f64], b: &[f64], c: &[f64], r: f64) -> Option<(f64, f64)> {
    let u: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let w: Vec<f64> = a.iter().zip(c).map(|(x, y)| x - y).collect();
    let uu: f64 = u.iter().map(|x| x * x).sum();
    let uw: f64 = u.iter().zip(&w).map(|(x, y)| x * y).sum();
    let ww: f64 = w.iter().map(|x| x * x).sum();
    // |w + t u|^2 < r^2
    let disc = uw * uw - uu * (ww - r * r);
    if disc <= 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let t0 = ((-uw - sq) / uu).max(0.0);
    let t1 = ((-uw + sq) / uu).min(1.0);
    if t0 < t1 {
        Some((t0, t1))
    } else {
        None
    }
}

/// A measure usable by the estimators: finitely many atoms, or a sampler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Measure {
    Discrete(DiscreteMeasure),
    Sampled(SampledDensity),
}

impl Measure {
    pub fn dim(&self) -> usize {
        match self {
            Measure::Discrete(m) => m.dim(),
            Measure::Sampled(s) => s.dim(),
        }
    }
}

/// A mass estimate with a 95% half-width (zero for exact computations).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassEstimate {
    pub value: f64,
    pub half_width: f64,
}

/// Mass of the open ball B_r(center): exact for discrete measures,
/// Monte-Carlo frequency with a confidence interval for sampled ones.
pub fn ball_mass(
    measure: &Measure,
    norm: &NormSpec,
    center: &[f64],
    r: f64,
    budget: u64,
    seed: u64,
) -> Result<MassEstimate> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("ball radius must be positive, got {r}")));
    }
    match measure {
        Measure::Discrete(m) => Ok(MassEstimate {
            value: m.ball_mass_exact(norm, center, r),
            half_width: 0.0,
        }),
        Measure::Sampled(s) => {
            if budget == 0 {
                return Err(Error::InvalidParameter("budget must be at least 1".into()));
            }
            s.validate()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut hits = 0u64;
            for _ in 0..budget {
                let p = s.sample(&mut rng)?;
                if norm.distance(&p, center) < r {
                    hits += 1;
                }
            }
            let (value, half_width) = proportion_ci(hits, budget);
            Ok(MassEstimate { value, half_width })
        }
    }
}

/// Doubling-ratio scan m(B_2r)/m(B_r) across a radius schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublingReport {
    pub radii: Vec<f64>,
    pub ratios: Vec<f64>,
    pub half_widths: Vec<f64>,
    /// Empirical doubling constant: the maximum ratio over the scan.
    pub max_ratio: f64,
}

pub fn doubling_ratio_scan(
    measure: &Measure,
    norm: &NormSpec,
    center: &[f64],
    radii: &[f64],
    budget: u64,
    seed: u64,
) -> Result<DoublingReport> {
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::InvalidParameter("radii must be positive".into()));
    }
    let mut ratios = Vec::with_capacity(radii.len());
    let mut half_widths = Vec::with_capacity(radii.len());
    for (i, &r) in radii.iter().enumerate() {
        match measure {
            Measure::Discrete(m) => {
                let inner = m.ball_mass_exact(norm, center, r);
                if inner <= 0.0 {
                    return Err(Error::ZeroMass(format!("inner ball of radius {r} has zero mass")));
                }
                let outer = m.ball_mass_exact(norm, center, 2.0 * r);
                ratios.push(outer / inner);
                half_widths.push(0.0);
            }
            Measure::Sampled(s) => {
                if budget == 0 {
                    return Err(Error::InvalidParameter("budget must be at least 1".into()));
                }
                s.validate()?;
                // sample the outer ball conditionally; the inner-ball fraction q
                // gives the ratio as 1/q
                let mut rng = ChaCha8Rng::seed_from_u64(derived_seed(seed, i as u64));
                let mut inner_hits = 0u64;
                for _ in 0..budget {
                    let p = s.sample_in_ball(norm, center, 2.0 * r, &mut rng)?;
                    if norm.distance(&p, center) < r {
                        inner_hits += 1;
                    }
                }
                if inner_hits == 0 {
                    return Err(Error::ZeroMass(format!(
                        "no samples landed in the inner ball of radius {r}"
                    )));
                }
                let (q, hw) = proportion_ci(inner_hits, budget);
                let lo = 1.0 / (q + hw).min(1.0);
                let hi = 1.0 / (q - hw).max(1e-300);
                ratios.push(1.0 / q);
                half_widths.push(0.5 * (hi - lo));
            }
        }
    }
    let max_ratio = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(DoublingReport { radii: radii.to_vec(), ratios, half_widths, max_ratio })
}

/// Three-valued verdict for liminf-type ratio estimates: an asymptotic
/// statement can only be supported or falsified at the probed scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Positive,
    Inconclusive,
    Zero,
}

/// Ratio estimates across a shrinking radius schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    /// Decreasing radii.
    pub radii: Vec<f64>,
    pub estimates: Vec<f64>,
    pub half_widths: Vec<f64>,
    /// Minimum estimate over the tail half of the schedule.
    pub liminf_proxy: f64,
    pub verdict: Verdict,
    pub flags: Vec<String>,
}

/// Shared verdict logic for ratio reports: positive only if every tail entry
/// is bounded away from zero by its half-width.
pub(crate) fn assemble_ratio_verdict(
    estimates: &[f64],
    half_widths: &[f64],
    flagged: bool,
) -> (f64, Verdict) {
    let tail_start = estimates.len() / 2;
    let tail = &estimates[tail_start..];
    let tail_hw = &half_widths[tail_start..];
    let liminf_proxy = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let verdict = if flagged {
        Verdict::Inconclusive
    } else if tail.iter().all(|&e| e == 0.0) {
        Verdict::Zero
    } else if tail.iter().zip(tail_hw).all(|(&e, &h)| e - h > 0.0) {
        Verdict::Positive
    } else {
        Verdict::Inconclusive
    };
    (liminf_proxy, verdict)
}

fn check_decreasing(radii: &[f64]) -> Result<()> {
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::InvalidParameter("radius schedule must be positive".into()));
    }
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("radius schedule must be strictly decreasing".into()));
    }
    Ok(())
}

/// Per-radius estimate of mu(C_{gamma,k} cap B_r(x)) / mu(B_r(x)).
///
/// The geodesic must start at `x`. A radius with zero denominator mass is
/// flagged and forces an inconclusive verdict rather than an error.
pub fn cone_mass_ratio(
    measure: &Measure,
    x: &[f64],
    geodesic: &Geodesic,
    k: f64,
    radii: &[f64],
    budget: u64,
    seed: u64,
) -> Result<RatioReport> {
    check_decreasing(radii)?;
    let norm = *geodesic.norm_spec();
    if norm.distance(geodesic.start(), x) > tol::POINT_EQ {
        return Err(Error::InvalidParameter("geodesic must start at the base point".into()));
    }
    let cone = GeodesicCone::new(geodesic.clone(), k)?;

    let mut estimates = Vec::with_capacity(radii.len());
    let mut half_widths = Vec::with_capacity(radii.len());
    let mut flags = Vec::new();
    for (i, &r) in radii.iter().enumerate() {
        match measure {
            Measure::Discrete(m) => {
                let mut den = 0.0;
                let mut num = 0.0;
                for (p, w) in m.points().iter().zip(m.weights()) {
                    if norm.distance(p, x) < r {
                        den += w;
                        if cone.contains(p, 0.0) {
                            num += w;
                        }
                    }
                }
                if den <= 0.0 {
                    flags.push(format!("zero-mass ball at r={r}"));
                    estimates.push(0.0);
                    half_widths.push(0.0);
                } else {
                    estimates.push(num / den);
                    half_widths.push(0.0);
                }
            }
            Measure::Sampled(s) => {
                if budget == 0 {
                    return Err(Error::InvalidParameter("budget must be at least 1".into()));
                }
                s.validate()?;
                let mut rng = ChaCha8Rng::seed_from_u64(derived_seed(seed, i as u64));
                let mut hits = 0u64;
                let mut failed = false;
                for _ in 0..budget {
                    match s.sample_in_ball(&norm, x, r, &mut rng) {
                        Ok(p) => {
                            if cone.contains(&p, 0.0) {
                                hits += 1;
                            }
                        }
                        Err(Error::ZeroMass(msg)) => {
                            flags.push(format!("zero-mass ball at r={r}: {msg}"));
                            failed = true;
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
                if failed {
                    estimates.push(0.0);
                    half_widths.push(0.0);
                } else {
                    let (e, hw) = proportion_ci(hits, budget);
                    estimates.push(e);
                    half_widths.push(hw);
                }
            }
        }
    }
    let (liminf_proxy, verdict) = assemble_ratio_verdict(&estimates, &half_widths, !flags.is_empty());
    Ok(RatioReport {
        radii: radii.to_vec(),
        estimates,
        half_widths,
        liminf_proxy,
        verdict,
        flags,
    })
}

/// Multi-direction cone-mass probe: positive only when every direction is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterProbe {
    pub verdict: Verdict,
    pub per_direction: Vec<RatioReport>,
    pub worst_direction: usize,
    pub worst_tail_ratio: f64,
}

pub fn densely_scattered_probe(
    measure: &Measure,
    x: &[f64],
    directions: &[Geodesic],
    k: f64,
    radii: &[f64],
    budget: u64,
    seed: u64,
) -> Result<ScatterProbe> {
    if directions.is_empty() {
        return Err(Error::InvalidParameter("direction list must be nonempty".into()));
    }
    let mut per_direction = Vec::with_capacity(directions.len());
    for (d, geo) in directions.iter().enumerate() {
        per_direction.push(cone_mass_ratio(
            measure,
            x,
            geo,
            k,
            radii,
            budget,
            derived_seed(seed, 1_000_000 + d as u64),
        )?);
    }
    let mut worst = 0;
    for (i, rep) in per_direction.iter().enumerate() {
        if rep.liminf_proxy < per_direction[worst].liminf_proxy {
            worst = i;
        }
    }
    let verdict = if per_direction.iter().all(|r| r.verdict == Verdict::Positive) {
        Verdict::Positive
    } else if per_direction.iter().any(|r| r.verdict == Verdict::Zero) {
        Verdict::Zero
    } else {
        Verdict::Inconclusive
    };
    Ok(ScatterProbe {
        verdict,
        worst_direction: worst,
        worst_tail_ratio: per_direction[worst].liminf_proxy,
        per_direction,
    })
}
