//! Single-beam and multi-armed-beam phase patterns, randomized beam
//! hashings, and the boxcar-filter analysis layer.
//!
//! A multi-armed beam splits the n phase shifters into r contiguous
//! segments of length P = n/r and points each segment at a different
//! direction; with B = n/r² bins the arms' main lobes (r grid directions
//! each) tile the whole grid, so B magnitude measurements observe every
//! direction at full per-arm gain P/√n.
//!
//! Two constructions are provided. `build_hash_theory` is the analyzed
//! one: arithmetic arm directions s^r_b = R·b + r·P composed with a full
//! (σ, a, b) permutation. `build_hash` is the practical one used by the
//! recovery pipeline: arm directions are drawn as a random partition of
//! the r-wide direction blocks, each arm gets a random phase offset, and
//! the whole pattern is modulated by a continuous fractional shift. The
//! arithmetic layout is degenerate at non-prime n (for power-of-two n
//! every permuted alias of a direction lands on the same P-spaced set,
//! so all bins respond identically to the alias and top-k recovery
//! collapses); the random partition restores the independence between
//! hashings that the prime-n theory gets from σ.

use crate::permute::{apply_to_pattern, sample_permutation, Permutation};
use crate::spectrum::FourierContext;
use crate::{C64, Error, Result};
use rand::Rng;
use std::f64::consts::PI;

/// One unit-modulus weight vector (one beam, one measurement row).
#[derive(Debug, Clone)]
pub struct PhasePattern {
    pub n: usize,
    pub weights: Vec<C64>,
}

impl PhasePattern {
    /// Largest deviation of any entry's modulus from 1.
    pub fn max_modulus_error(&self) -> f64 {
        self.weights
            .iter()
            .map(|w| (w.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Options for `build_hash`; both default to on (full randomization).
#[derive(Debug, Clone, Copy)]
pub struct HashOptions {
    /// Draw a random per-arm phase offset t (otherwise t = 0).
    pub randomize_phases: bool,
    /// Randomize the block-to-bin assignment and the fractional shift
    /// (otherwise blocks are assigned in order and the shift is 0).
    pub randomize_perm: bool,
}

impl Default for HashOptions {
    fn default() -> Self {
        Self { randomize_phases: true, randomize_perm: true }
    }
}

/// One randomized hashing: B multi-armed patterns whose arms partition
/// the direction grid.
#[derive(Debug, Clone)]
pub struct HashFunction {
    pub n: usize,
    /// Arms per beam (R).
    pub r: usize,
    /// Number of bins (B).
    pub b_count: usize,
    /// Segment length / arm gain P = n/r (⌊n/r⌋ in theory mode).
    pub p: usize,
    /// Nominal arm directions, b_count × r; arm (b, j) covers the r grid
    /// directions starting at arm_dirs[b][j].
    pub arm_dirs: Vec<Vec<usize>>,
    /// Per-arm phase integers t ∈ [0, n), b_count × r.
    pub t_phases: Vec<Vec<usize>>,
    /// Direction-domain permutation (identity in practical mode).
    pub perm: Permutation,
    /// Continuous modulation shift in grid units (practical mode only).
    pub shift: f64,
    /// Pre-permutation patterns (practical mode: identical to `patterns`).
    pub base_patterns: Vec<PhasePattern>,
    /// Patterns as driven into the phase shifters (composed with P').
    pub patterns: Vec<PhasePattern>,
    /// Peak arm amplitude κ = P/√n.
    pub kappa: f64,
    /// Identifies the hash a MeasurementSet was taken with.
    pub id: u64,
}

impl HashFunction {
    /// Grid directions nominally covered by bin b (union of its arms'
    /// r-wide main-lobe windows).
    pub fn nominal_coverage(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.r * self.r);
        for &s in &self.arm_dirs[b] {
            for j in 0..self.r {
                out.push((s + j) % self.n);
            }
        }
        out
    }
}

/// Pattern pointing the whole array at grid direction s: w_m = ω^{−sm}
/// (row s of the forward Fourier matrix rescaled to unit modulus).
pub fn single_beam(ctx: &FourierContext, s: usize) -> Result<PhasePattern> {
    let n = ctx.n();
    if s >= n {
        return Err(Error::InvalidParameter(format!("beam direction {s} out of range for n = {n}")));
    }
    Ok(fourier_row_segmented(n, &[(0, n, s, 0)]))
}

/// Builds a pattern from segments (lo, hi, direction s, phase t):
/// w_m = ω^{−(s·m + t)} for m in [lo, hi).
fn fourier_row_segmented(n: usize, segs: &[(usize, usize, usize, usize)]) -> PhasePattern {
    let mut weights = vec![C64::new(0.0, 0.0); n];
    for &(lo, hi, s, t) in segs {
        for (m, w) in weights.iter_mut().enumerate().take(hi).skip(lo) {
            let ph = -2.0 * PI * ((s * m + t) % n) as f64 / n as f64;
            *w = C64::from_polar(1.0, ph);
        }
    }
    PhasePattern { n, weights }
}

fn arithmetic_segments(n: usize, r: usize, b: usize, t_row: &[usize]) -> Vec<(usize, usize, usize, usize)> {
    let p = n / r;
    (0..r)
        .map(|j| {
            let lo = j * p;
            let hi = if j + 1 == r { n } else { (j + 1) * p }; // last arm absorbs any remainder
            (lo, hi, (r * b + j * p) % n, t_row[j])
        })
        .collect()
}

/// The analyzed multi-armed pattern for bin b: segment j of the array
/// points at s^j_b = R·b + j·P with phase offset t_j, right-composed
/// with the generalized permutation matrix P'.
pub fn multi_arm_pattern(
    ctx: &FourierContext,
    r: usize,
    b: usize,
    t_row: &[usize],
    perm: &Permutation,
) -> Result<PhasePattern> {
    let n = ctx.n();
    if r == 0 || r * r > n {
        return Err(Error::InfeasibleGeometry(format!("r = {r} arms infeasible at n = {n}")));
    }
    if b >= n / (r * r) {
        return Err(Error::InvalidParameter(format!("bin {b} out of range (B = {})", n / (r * r))));
    }
    if t_row.len() != r {
        return Err(Error::DimensionMismatch(format!("t row has {} entries, expected r = {r}", t_row.len())));
    }
    let base = fourier_row_segmented(n, &arithmetic_segments(n, r, b, t_row));
    apply_to_pattern(&base, perm)
}

/// Coverage I(b, ρ, i) = |a^b · F'_{ρ(i)}|² of direction i by a bin's
/// pre-permutation pattern under permutation ρ.
pub fn coverage(ctx: &FourierContext, pattern: &PhasePattern, perm: &Permutation, i: usize) -> f64 {
    assert_eq!(pattern.n, ctx.n());
    assert!(i < ctx.n());
    ctx.response(&pattern.weights, 1)[perm.rho(i)].norm_sqr()
}

/// Largest r with r² ≤ n/b_count and r | n allows an exact partition.
pub fn feasible_r(n: usize, b_count: usize) -> Result<usize> {
    if b_count == 0 || b_count > n {
        return Err(Error::InfeasibleGeometry(format!("b_count = {b_count} infeasible at n = {n}")));
    }
    let mut best = None;
    let mut r = 1;
    while r * r * b_count <= n {
        if n % r == 0 {
            best = Some(r);
        }
        r += 1;
    }
    best.ok_or_else(|| Error::InfeasibleGeometry(format!("no r with r² ≤ {n}/{b_count} divides n")))
}

/// Practical randomized hashing: a random partition of the r-wide
/// direction blocks into bins, random per-arm phases and a continuous
/// fractional shift. b_count is recomputed as n/r² from the feasible r
/// (it can only grow).
pub fn build_hash<R: Rng>(
    ctx: &FourierContext,
    b_count: usize,
    rng: &mut R,
    options: HashOptions,
) -> Result<HashFunction> {
    let n = ctx.n();
    let r = feasible_r(n, b_count)?;
    let b_count = n / (r * r);
    let p = n / r;
    let n_blocks = n / r;

    let mut blocks: Vec<usize> = (0..n_blocks).collect();
    let shift = if options.randomize_perm {
        // Fisher-Yates
        for i in (1..n_blocks).rev() {
            blocks.swap(i, rng.gen_range(0..=i));
        }
        rng.gen_range(0.0..n as f64)
    } else {
        0.0
    };

    let mut arm_dirs = Vec::with_capacity(b_count);
    let mut t_phases = Vec::with_capacity(b_count);
    let mut patterns = Vec::with_capacity(b_count);
    for b in 0..b_count {
        let dirs: Vec<usize> = (0..r).map(|j| blocks[b * r + j] * r).collect();
        let t_row: Vec<usize> = (0..r)
            .map(|_| if options.randomize_phases { rng.gen_range(0..n) } else { 0 })
            .collect();
        let segs: Vec<_> = (0..r).map(|j| (j * p, (j + 1) * p, dirs[j], t_row[j])).collect();
        let mut pat = fourier_row_segmented(n, &segs);
        if shift != 0.0 {
            for (m, w) in pat.weights.iter_mut().enumerate() {
                *w *= C64::from_polar(1.0, 2.0 * PI * shift * m as f64 / n as f64);
            }
        }
        arm_dirs.push(dirs);
        t_phases.push(t_row);
        patterns.push(pat);
    }
    Ok(HashFunction {
        n,
        r,
        b_count,
        p,
        arm_dirs,
        t_phases,
        perm: Permutation::identity(n),
        shift,
        base_patterns: patterns.clone(),
        patterns,
        kappa: p as f64 / (n as f64).sqrt(),
        id: rng.gen(),
    })
}

/// Analyzed hashing with r arms: arithmetic arm directions s^j_b =
/// R·b + j·P and a full (σ, a, b) permutation. At prime n segments use
/// ⌊n/r⌋ with the remainder absorbed into the last arm.
pub fn build_hash_theory<R: Rng>(ctx: &FourierContext, r: usize, rng: &mut R) -> Result<HashFunction> {
    let n = ctx.n();
    if r == 0 || n / (r * r) == 0 {
        return Err(Error::InfeasibleGeometry(format!("r = {r} arms infeasible at n = {n}")));
    }
    let b_count = n / (r * r);
    let p = n / r;
    let perm = sample_permutation(n, rng, true);

    let mut arm_dirs = Vec::with_capacity(b_count);
    let mut t_phases = Vec::with_capacity(b_count);
    let mut base_patterns = Vec::with_capacity(b_count);
    let mut patterns = Vec::with_capacity(b_count);
    for b in 0..b_count {
        let t_row: Vec<usize> = (0..r).map(|_| rng.gen_range(0..n)).collect();
        let base = fourier_row_segmented(n, &arithmetic_segments(n, r, b, &t_row));
        let composed = apply_to_pattern(&base, &perm)?;
        arm_dirs.push((0..r).map(|j| (r * b + j * p) % n).collect());
        t_phases.push(t_row);
        base_patterns.push(base);
        patterns.push(composed);
    }
    Ok(HashFunction {
        n,
        r,
        b_count,
        p,
        arm_dirs,
        t_phases,
        perm,
        shift: 0.0,
        base_patterns,
        patterns,
        kappa: p as f64 / (n as f64).sqrt(),
        id: rng.gen(),
    })
}

/// Boxcar window of width P and its direction-domain spectrum Ĥ (the
/// Dirichlet kernel bounding each arm's main lobe and leakage).
#[derive(Debug, Clone)]
pub struct BoxcarFilter {
    pub n: usize,
    pub p: usize,
    /// Number of nonzero taps M (P−1 for even P, P for odd P: |i| < P/2).
    pub m: usize,
    /// Antenna-domain taps, length n, wraparound indexing, value √n/M.
    pub taps: Vec<C64>,
    /// Ĥ = forward transform of the taps; Ĥ_0 = 1.
    pub spectrum: Vec<C64>,
}

impl BoxcarFilter {
    /// Closed-form Ĥ_j = sin(πMj/n) / (M sin(πj/n)), Ĥ_0 = 1.
    pub fn closed_form(&self, j: usize) -> f64 {
        if j == 0 {
            return 1.0;
        }
        let n = self.n as f64;
        let m = self.m as f64;
        let x = PI * j as f64 / n;
        (m * x).sin() / (m * x.sin())
    }
}

pub fn boxcar(ctx: &FourierContext, p: usize) -> Result<BoxcarFilter> {
    let n = ctx.n();
    if p < 3 || p > n / 2 {
        return Err(Error::InvalidParameter(format!("boxcar width p = {p} outside [3, n/2] at n = {n}")));
    }
    // strict |i| < P/2: symmetric support with an odd tap count, matching
    // the (P−1)-point Dirichlet closed form at even P
    let half = (p - 1) / 2;
    let m = 2 * half + 1;
    let amp = (n as f64).sqrt() / m as f64;
    let mut taps = vec![C64::new(0.0, 0.0); n];
    for d in 0..=half {
        taps[d] = C64::new(amp, 0.0);
        if d > 0 {
            taps[n - d] = C64::new(amp, 0.0);
        }
    }
    let spectrum = ctx.forward(&taps);
    Ok(BoxcarFilter { n, p, m, taps, spectrum })
}
