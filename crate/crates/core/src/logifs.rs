//! Logarithmic-coordinate iterated function systems: affine branch
//! contractions, chaos-game sampling of the invariant measure, similarity and
//! box-counting dimension estimators, and geometric limit-set sampling.

use crate::dynamics::{iterate_orbit, NestedScene, OrbitOptions, StepMode};
use crate::error::{Error, Result};
use crate::geom::Point;

/// The affine branch system u -> ratio * u + (1 - ratio) * p_i with fixed
/// points p_i = log alpha_i. The paper's contraction ratio is 1/2; other
/// ratios exist solely to calibrate the box-counting estimator on genuinely
/// fractal one-dimensional sets and are flagged as such.
#[derive(Debug, Clone)]
pub struct LogIfs {
    /// Branch fixed points (log alpha_i for the paper-mode system).
    pub fixed_points: Vec<f64>,
    pub ratio: f64,
}

impl LogIfs {
    /// Build from branch coefficients alpha_i > 0 and a contraction ratio.
    pub fn from_alphas(alphas: &[f64], ratio: f64) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidShape("at least one branch is required".into()));
        }
        if alphas.iter().any(|&a| !(a > 0.0)) {
            return Err(Error::InvalidShape("branch coefficients must be positive".into()));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidShape(format!("ratio {ratio} must lie in (0,1)")));
        }
        Ok(LogIfs { fixed_points: alphas.iter().map(|a| a.ln()).collect(), ratio })
    }

    pub fn from_fixed_points(points: Vec<f64>, ratio: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidShape("at least one branch is required".into()));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidShape(format!("ratio {ratio} must lie in (0,1)")));
        }
        Ok(LogIfs { fixed_points: points, ratio })
    }

    pub fn branch_count(&self) -> usize {
        self.fixed_points.len()
    }

    /// True when the contraction ratio differs from the paper's 1/2.
    pub fn non_paper_ratio(&self) -> bool {
        (self.ratio - 0.5).abs() > 1e-15
    }

    /// Apply branch i.
    pub fn apply(&self, i: usize, u: f64) -> f64 {
        self.ratio * u + (1.0 - self.ratio) * self.fixed_points[i]
    }

    /// Attractor hull [min fixed point, max fixed point].
    pub fn hull(&self) -> (f64, f64) {
        let lo = self.fixed_points.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.fixed_points.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

/// SplitMix64: the documented deterministic generator for chaos-game
/// sampling. One 64-bit state, one mixing round per draw.
#[derive(Debug, Clone, Copy)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform branch index.
    pub fn next_branch(&mut self, m: usize) -> usize {
        // Rejection-free for small m; bias is < 2^-53.
        (self.next_f64() * m as f64) as usize % m
    }
}

/// A sampled attractor (1D in the u coordinate, or 2D for limit sets).
#[derive(Debug, Clone)]
pub struct AttractorSample {
    pub points: Vec<f64>,
    pub seed: u64,
    pub burn_in: usize,
}

/// Random iteration of the branch system with uniform branch selection.
/// Deterministic per seed; the first `burn_in` iterates are discarded.
pub fn chaos_game(ifs: &LogIfs, n_points: usize, seed: u64, burn_in: usize) -> Result<AttractorSample> {
    if n_points < 1000 {
        return Err(Error::InsufficientData(format!(
            "chaos game wants n_points >= 1000, got {n_points}"
        )));
    }
    if burn_in < 32 {
        return Err(Error::InsufficientData(format!(
            "chaos game wants burn_in >= 32, got {burn_in}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let (lo, hi) = ifs.hull();
    let mut u = 0.5 * (lo + hi);
    let mut points = Vec::with_capacity(n_points);
    for k in 0..burn_in + n_points {
        let i = rng.next_branch(ifs.branch_count());
        u = ifs.apply(i, u);
        if k >= burn_in {
            points.push(u);
        }
    }
    Ok(AttractorSample { points, seed, burn_in })
}

/// Similarity dimension of an m-branch half-ratio system: log2 m.
pub fn similarity_dimension(m: usize) -> f64 {
    (m as f64).ln() / 2.0f64.ln()
}

#[derive(Debug, Clone)]
pub struct DimensionEstimate {
    pub similarity: f64,
    pub box_dim: f64,
    pub stderr: f64,
    /// (log 1/delta, log N(delta)) regression points.
    pub scales: Vec<(f64, f64)>,
    /// Degenerate sample (all points in one bin at every scale).
    pub degenerate: bool,
}

/// Default dyadic octave window for a given sample size: start at octave 5
/// (the coarse octaves carry a strong lattice bias) and stop while bins stay
/// well populated.
pub fn default_octaves(n_points: usize) -> (u32, u32) {
    let top = (n_points.max(2) as f64).log2().floor() as u32;
    (5, top.saturating_sub(5).clamp(9, 12))
}

/// Box-counting estimate: least-squares slope of log N(delta) against
/// log(1/delta) over dyadic bin widths, bins anchored at the sample minimum.
pub fn box_counting_dimension(
    points: &[f64],
    octave_lo: u32,
    octave_hi: u32,
    similarity: f64,
) -> Result<DimensionEstimate> {
    if points.len() < 10_000 {
        return Err(Error::InsufficientData(format!(
            "box counting wants >= 1e4 points, got {}",
            points.len()
        )));
    }
    if octave_hi < octave_lo + 3 {
        return Err(Error::InsufficientData("need >= 4 octaves of scales".into()));
    }
    let lo = points.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = points.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let extent = hi - lo;
    if extent <= 0.0 {
        return Ok(DimensionEstimate {
            similarity,
            box_dim: 0.0,
            stderr: 0.0,
            scales: vec![],
            degenerate: true,
        });
    }
    let mut pts = Vec::new();
    let mut sorted: Vec<f64> = points.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for oct in octave_lo..=octave_hi {
        let delta = extent / (1u64 << oct) as f64;
        let mut count = 0u64;
        let mut last_bin = u64::MAX;
        for &p in &sorted {
            let bin = (((p - lo) / delta) as u64).min((1u64 << oct) - 1);
            if bin != last_bin {
                count += 1;
                last_bin = bin;
            }
        }
        pts.push(((1.0 / delta).ln(), (count as f64).ln()));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    let stderr = if n > 2.0 { (ss_res / (n - 2.0) * n / denom).sqrt() } else { 0.0 };
    Ok(DimensionEstimate { similarity, box_dim: slope, stderr, scales: pts, degenerate: false })
}

/// One accumulated limit point of a trajectory ensemble.
#[derive(Debug, Clone)]
pub struct LimitSample {
    pub points: Vec<Point>,
    /// Ensemble members whose orbits failed, with reasons.
    pub failures: Vec<(usize, String)>,
}

/// Sample the geometric limit set: final geometric-mode points of an
/// ensemble of orbits, plus the declared anchors reached in log mode.
pub fn limit_set_sample(
    scene: &NestedScene,
    starts: &[f64],
    steps: usize,
    opts: &OrbitOptions,
) -> Result<LimitSample> {
    if starts.len() < 64 {
        return Err(Error::InsufficientData(format!(
            "limit set sampling wants >= 64 starts, got {}",
            starts.len()
        )));
    }
    let mut points = Vec::new();
    let mut failures = Vec::new();
    for (i, &t0) in starts.iter().enumerate() {
        let run = OrbitOptions { steps, ..opts.clone() };
        match iterate_orbit(scene, t0, &run) {
            Ok(orbit) => {
                if let Some(reason) = orbit.truncated {
                    failures.push((i, reason));
                    continue;
                }
                // Last geometric step, or the anchor of the log-tracked branch.
                let last = orbit.steps.iter().rev().find(|s| s.mode == StepMode::Geometric);
                match orbit.steps.last() {
                    Some(step) if step.mode == StepMode::LogTracked => {
                        let level = step.k.min(scene.level_count() - 1);
                        let branch = step.branch.unwrap_or(0);
                        let lvl = &scene.levels[level.min(scene.level_count() - 1)];
                        let anchors = if lvl.anchors.is_empty() {
                            &scene.levels[scene.level_count() - 2].anchors
                        } else {
                            &lvl.anchors
                        };
                        points.push(anchors[branch.min(anchors.len() - 1)].point);
                    }
                    _ => {
                        if let Some(p) = last.and_then(|s| s.point) {
                            points.push(p);
                        }
                    }
                }
            }
            Err(e) => failures.push((i, e.to_string())),
        }
    }
    Ok(LimitSample { points, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_branch_collapses_to_fixed_point() {
        let ifs = LogIfs::from_fixed_points(vec![1.0], 0.5).unwrap();
        let s = chaos_game(&ifs, 1000, 7, 64).unwrap();
        assert!(s.points.iter().all(|&u| (u - 1.0).abs() < 1e-9));
    }

    #[test]
    fn two_branch_half_ratio_fills_interval() {
        let ifs = LogIfs::from_fixed_points(vec![0.0, 1.0], 0.5).unwrap();
        let s = chaos_game(&ifs, 100_000, 42, 64).unwrap();
        let lo = s.points.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = s.points.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(lo < 0.01, "min {lo}");
        assert!(hi > 0.99, "max {hi}");
        // All inside the hull.
        assert!(s.points.iter().all(|&u| (-1e-12..=1.0 + 1e-12).contains(&u)));
    }

    #[test]
    fn chaos_game_is_deterministic_per_seed() {
        let ifs = LogIfs::from_fixed_points(vec![0.0, 1.0], 0.5).unwrap();
        let a = chaos_game(&ifs, 5000, 123, 64).unwrap();
        let b = chaos_game(&ifs, 5000, 123, 64).unwrap();
        assert_eq!(a.points, b.points, "bit-identical per seed");
        let c = chaos_game(&ifs, 5000, 124, 64).unwrap();
        assert_ne!(a.points, c.points);
    }

    #[test]
    fn hutchinson_self_consistency() {
        let ifs = LogIfs::from_fixed_points(vec![0.0, 1.0, 0.3], 0.5).unwrap();
        let s = chaos_game(&ifs, 20_000, 9, 64).unwrap();
        let (lo, hi) = ifs.hull();
        let mut rng = SplitMix64::new(77);
        for &u in s.points.iter().take(4096) {
            let v = ifs.apply(rng.next_branch(3), u);
            assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
        }
    }

    #[test]
    fn similarity_dimension_values() {
        assert_eq!(similarity_dimension(1), 0.0);
        assert!((similarity_dimension(2) - 1.0).abs() < 1e-15);
        assert!((similarity_dimension(3) - 1.5849625).abs() < 1e-7);
    }

    #[test]
    fn box_counting_calibration() {
        // Middle-thirds Cantor set via ratio 1/3, fixed points {0, 1}.
        let cantor = LogIfs::from_fixed_points(vec![0.0, 1.0], 1.0 / 3.0).unwrap();
        assert!(cantor.non_paper_ratio());
        let s = chaos_game(&cantor, 200_000, 2024, 64).unwrap();
        let (lo, hi) = default_octaves(s.points.len());
        let est = box_counting_dimension(&s.points, lo, hi, similarity_dimension(2)).unwrap();
        let want = 2.0f64.ln() / 3.0f64.ln();
        assert!((est.box_dim - want).abs() < 0.02, "cantor dim {}", est.box_dim);

        // Interval-filling system: dimension 1.
        let interval = LogIfs::from_fixed_points(vec![0.0, 1.0], 0.5).unwrap();
        let s = chaos_game(&interval, 200_000, 2024, 64).unwrap();
        let est = box_counting_dimension(&s.points, lo, hi, 1.0).unwrap();
        assert!((est.box_dim - 1.0).abs() < 0.05, "interval dim {}", est.box_dim);

        // Degenerate single-point sample.
        let one = vec![0.7; 20_000];
        let est = box_counting_dimension(&one, lo, hi, 0.0).unwrap();
        assert!(est.degenerate);
        assert_eq!(est.box_dim, 0.0);
    }

    #[test]
    fn paper_mode_estimates_respect_dimension_bound() {
        // ratio 1/2 systems never exceed min(1, log2 m) + 0.05.
        for (m, fps) in [(2usize, vec![0.0, 1.0]), (3, vec![0.0, 0.5, 1.0])] {
            let ifs = LogIfs::from_fixed_points(fps, 0.5).unwrap();
            let s = chaos_game(&ifs, 150_000, 5, 64).unwrap();
            let (lo, hi) = default_octaves(s.points.len());
            let est = box_counting_dimension(&s.points, lo, hi, similarity_dimension(m)).unwrap();
            let bound = 1.0f64.min(similarity_dimension(m)) + 0.05;
            assert!(est.box_dim <= bound, "m={m}: {} > {bound}", est.box_dim);
        }
    }

    #[test]
    fn uniform_measure_moments_for_two_branch_half_ratio() {
        // The invariant measure of the (0,1) half-ratio pair is uniform on
        // [0,1]: mean 1/2, variance 1/12.
        let ifs = LogIfs::from_fixed_points(vec![0.0, 1.0], 0.5).unwrap();
        let s = chaos_game(&ifs, 400_000, 31, 128).unwrap();
        let n = s.points.len() as f64;
        let mean: f64 = s.points.iter().sum::<f64>() / n;
        let var: f64 = s.points.iter().map(|u| (u - mean) * (u - mean)).sum::<f64>() / n;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
        assert!((var - 1.0 / 12.0).abs() < 0.005, "var {var}");
    }

    #[test]
    fn input_validation() {
        assert!(LogIfs::from_alphas(&[], 0.5).is_err());
        assert!(LogIfs::from_alphas(&[-1.0], 0.5).is_err());
        assert!(LogIfs::from_alphas(&[1.0], 1.5).is_err());
        let ifs = LogIfs::from_alphas(&[2.0], 0.5).unwrap();
        assert!(chaos_game(&ifs, 10, 1, 64).is_err());
        assert!(chaos_game(&ifs, 2000, 1, 2).is_err());
    }
}
