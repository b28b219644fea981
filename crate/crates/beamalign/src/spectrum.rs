//! Direction-domain signal model: unitary DFT context, steering vectors,
//! sparse direction spectra and simulated channel instances.
//!
//! A direction is identified with a spatial frequency bin. Grid index p
//! corresponds to the steering column F'_p with entries ω^{pm}/√n; a
//! physical angle θ maps to the (generally fractional) index
//! n·cos(θ)/2 mod n for a half-wavelength-spaced linear array.

use crate::{C64, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

/// Shared FFT plans plus the unitary scaling for a fixed array size n.
pub struct FourierContext {
    n: usize,
    plans: Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>,
}

impl FourierContext {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("array size n = {n} must be >= 2")));
        }
        Ok(Self { n, plans: Mutex::new(HashMap::new()) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn plan(&self, len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
        let mut plans = self.plans.lock().unwrap();
        plans
            .entry((len, inverse))
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                if inverse {
                    planner.plan_fft_inverse(len)
                } else {
                    planner.plan_fft_forward(len)
                }
            })
            .clone()
    }

    /// Unitary forward transform: y_j = Σ_m x_m ω^{−jm} / √n.
    pub fn forward(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.n, "forward: length mismatch");
        let mut buf = x.to_vec();
        self.plan(self.n, false).process(&mut buf);
        let s = 1.0 / (self.n as f64).sqrt();
        for v in &mut buf {
            *v *= s;
        }
        buf
    }

    /// Unitary inverse transform: y_j = Σ_m x_m ω^{jm} / √n.
    pub fn inverse(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.n, "inverse: length mismatch");
        let mut buf = x.to_vec();
        self.plan(self.n, true).process(&mut buf);
        let s = 1.0 / (self.n as f64).sqrt();
        for v in &mut buf {
            *v *= s;
        }
        buf
    }

    /// Beam response of a weight vector on a grid refined by `factor`:
    /// out[j] = Σ_m w_m ω^{(j/factor)·m} / √n for j in 0..n·factor.
    ///
    /// factor = 1 reduces to `inverse`.
    pub fn response(&self, w: &[C64], factor: usize) -> Vec<C64> {
        assert_eq!(w.len(), self.n, "response: length mismatch");
        assert!(factor >= 1);
        let len = self.n * factor;
        let mut buf = vec![C64::new(0.0, 0.0); len];
        buf[..self.n].copy_from_slice(w);
        self.plan(len, true).process(&mut buf);
        let s = 1.0 / (self.n as f64).sqrt();
        for v in &mut buf {
            *v *= s;
        }
        buf
    }

    /// Column p of the inverse Fourier matrix F' (a unit-norm steering vector).
    pub fn steering_column(&self, p: usize) -> Vec<C64> {
        assert!(p < self.n, "steering_column: index out of range");
        self.steering_frac(p as f64)
    }

    /// Steering vector at a fractional grid index f (off-grid direction).
    pub fn steering_frac(&self, f: f64) -> Vec<C64> {
        let n = self.n as f64;
        let s = 1.0 / n.sqrt();
        (0..self.n)
            .map(|m| C64::from_polar(s, 2.0 * PI * f * m as f64 / n))
            .collect()
    }

    /// Steering vector for a physical angle in degrees (half-wavelength array).
    pub fn off_grid_steering(&self, angle_deg: f64) -> Vec<C64> {
        self.steering_frac(angle_to_frac_index(self.n, angle_deg))
    }
}

/// Fractional direction-grid index for an angle of arrival in degrees.
pub fn angle_to_frac_index(n: usize, angle_deg: f64) -> f64 {
    let f = (n as f64) * (angle_deg * PI / 180.0).cos() / 2.0;
    f.rem_euclid(n as f64)
}

/// Angle of arrival (degrees, in [0°, 180°]) for a fractional grid index.
pub fn frac_index_to_angle(n: usize, f: f64) -> f64 {
    let half = n as f64 / 2.0;
    let mut c = f.rem_euclid(n as f64);
    if c > half {
        c -= n as f64;
    }
    (c / half).clamp(-1.0, 1.0).acos() * 180.0 / PI
}

/// A K-sparse complex spectrum over the n direction bins.
#[derive(Debug, Clone)]
pub struct DirectionSpectrum {
    pub n: usize,
    pub entries: Vec<(usize, C64)>,
}

impl DirectionSpectrum {
    pub fn new(n: usize, entries: Vec<(usize, C64)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(i, _) in &entries {
            if i >= n {
                return Err(Error::InvalidChannel(format!("direction index {i} out of range for n = {n}")));
            }
            if !seen.insert(i) {
                return Err(Error::InvalidChannel(format!("duplicate direction index {i}")));
            }
        }
        Ok(Self { n, entries })
    }

    pub fn dense(&self) -> Vec<C64> {
        let mut x = vec![C64::new(0.0, 0.0); self.n];
        for &(i, g) in &self.entries {
            x[i] = g;
        }
        x
    }

    pub fn energy(&self) -> f64 {
        self.entries.iter().map(|&(_, g)| g.norm_sqr()).sum()
    }
}

/// One physical path at a continuous angle.
#[derive(Debug, Clone, Copy)]
pub struct PathSpec {
    pub angle_deg: f64,
    pub gain: C64,
}

/// One side (arrival or departure) of a channel: on-grid sparse spectrum
/// or a list of continuous-angle paths.
#[derive(Debug, Clone)]
pub enum ChannelSide {
    Grid(DirectionSpectrum),
    Continuous(Vec<PathSpec>),
}

impl ChannelSide {
    pub fn num_paths(&self) -> usize {
        match self {
            ChannelSide::Grid(s) => s.entries.len(),
            ChannelSide::Continuous(p) => p.len(),
        }
    }

    /// Fractional grid indices and gains of the paths.
    pub fn paths(&self, n: usize) -> Vec<(f64, C64)> {
        match self {
            ChannelSide::Grid(s) => s.entries.iter().map(|&(i, g)| (i as f64, g)).collect(),
            ChannelSide::Continuous(p) => p
                .iter()
                .map(|p| (angle_to_frac_index(n, p.angle_deg), p.gain))
                .collect(),
        }
    }

    /// Antenna-domain response h = F'x (resp. the off-grid superposition).
    pub fn response(&self, ctx: &FourierContext) -> Vec<C64> {
        let n = ctx.n();
        let mut h = vec![C64::new(0.0, 0.0); n];
        for (f, g) in self.paths(n) {
            let steer = ctx.steering_frac(f);
            for (hm, sm) in h.iter_mut().zip(steer) {
                *hm += g * sm;
            }
        }
        h
    }
}

/// A simulated channel: sparse arrival spectrum, optional departure
/// spectrum for two-sided alignment, noise level and seeded randomness.
///
/// Per-frame randomness (CFO phase and noise) is derived from the frame
/// counter and two independent seeds, so a re-run with the same seed is
/// bit-identical and the CFO stream can be re-seeded without touching the
/// noise stream.
pub struct ChannelInstance {
    pub n: usize,
    pub rx: ChannelSide,
    pub tx: Option<ChannelSide>,
    pub snr_db: f64,
    pub seed: u64,
    rx_response: Vec<C64>,
    tx_response: Option<Vec<C64>>,
    cfo_seed: u64,
    noise_seed: u64,
    frames: AtomicU64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

impl ChannelInstance {
    pub fn rx_response(&self) -> &[C64] {
        &self.rx_response
    }

    pub fn tx_response(&self) -> Option<&[C64]> {
        self.tx_response.as_deref()
    }

    pub fn is_two_sided(&self) -> bool {
        self.tx.is_some()
    }

    /// Mean single-beam received power: ‖h_rx‖² (× ‖h_tx‖² when two-sided).
    pub fn reference_power(&self) -> f64 {
        let prx: f64 = self.rx_response.iter().map(|v| v.norm_sqr()).sum();
        match &self.tx_response {
            Some(t) => prx * t.iter().map(|v| v.norm_sqr()).sum::<f64>(),
            None => prx,
        }
    }

    /// One-sided reference power ‖h_rx‖², used by single-sided frames.
    pub fn reference_power_one_sided(&self) -> f64 {
        self.rx_response.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Complex noise variance implied by snr_db relative to `ref_power`.
    pub fn noise_variance(&self, ref_power: f64) -> f64 {
        if self.snr_db.is_finite() {
            ref_power / 10f64.powf(self.snr_db / 10.0)
        } else {
            0.0
        }
    }

    /// Claims the next frame index.
    pub fn next_frame(&self) -> u64 {
        self.frames.fetch_add(1, Ordering::Relaxed)
    }

    pub fn frames_used(&self) -> u64 {
        self.frames.load(Ordering::Relaxed)
    }

    /// CFO phase factor e^{jφ} for a frame, φ uniform in [0, 2π).
    pub fn frame_phase(&self, frame: u64) -> C64 {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(self.cfo_seed ^ splitmix64(frame)));
        C64::from_polar(1.0, rng.gen::<f64>() * 2.0 * PI)
    }

    /// Complex Gaussian noise sample for a frame at the given variance.
    pub fn frame_noise(&self, frame: u64, variance: f64) -> C64 {
        if variance == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(self.noise_seed ^ splitmix64(frame)));
        let s = (variance / 2.0).sqrt();
        // Box-Muller from two uniforms.
        let u1: f64 = rng.gen::<f64>().max(1e-300);
        let u2: f64 = rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        C64::new(s * r * (2.0 * PI * u2).cos(), s * r * (2.0 * PI * u2).sin())
    }

    /// Same channel with a different CFO stream (the noise stream is kept).
    pub fn with_cfo_seed(mut self, cfo_seed: u64) -> Self {
        self.cfo_seed = cfo_seed;
        self
    }
}

/// Builds a channel instance; validates sparsity and pairing invariants.
pub fn make_channel(
    ctx: &FourierContext,
    rx: ChannelSide,
    tx: Option<ChannelSide>,
    snr_db: f64,
    seed: u64,
) -> Result<ChannelInstance> {
    let n = ctx.n();
    let check = |side: &ChannelSide| -> Result<()> {
        if side.num_paths() > n / 4 {
            return Err(Error::InvalidChannel(format!(
                "{} paths exceed the sparse regime (n/4 = {})",
                side.num_paths(),
                n / 4
            )));
        }
        Ok(())
    };
    check(&rx)?;
    if let Some(t) = &tx {
        check(t)?;
        if t.num_paths() != rx.num_paths() {
            return Err(Error::InvalidChannel(format!(
                "two-sided channel must pair paths: rx has {}, tx has {}",
                rx.num_paths(),
                t.num_paths()
            )));
        }
    }
    let rx_response = rx.response(ctx);
    let tx_response = tx.as_ref().map(|t| t.response(ctx));
    Ok(ChannelInstance {
        n,
        rx,
        tx,
        snr_db,
        seed,
        rx_response,
        tx_response,
        cfo_seed: splitmix64(seed ^ 0xc0f0_c0f0_c0f0_c0f0),
        noise_seed: splitmix64(seed ^ 0x0153_0153_0153_0153),
        frames: AtomicU64::new(0),
    })
}
