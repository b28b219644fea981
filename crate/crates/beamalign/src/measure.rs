//! The hardware measurement primitive: one frame per phase-pattern
//! setting, magnitude only.
//!
//! Each frame the carrier-frequency offset rotates the entire
//! downconverted sample — signal and front-end noise together — by a
//! fresh random phase φ, so the reported magnitude |e^{jφ}(a·F'x + w)|
//! is exactly φ-invariant and nothing downstream can exploit phase
//! coherence across frames. Noise is complex AWGN injected before the
//! magnitude, calibrated against the channel's mean single-beam power.

use crate::beams::HashFunction;
use crate::spectrum::ChannelInstance;
use crate::{C64, Error, Result};

/// Magnitudes from one hashing (length B) or one two-sided scan (B×B,
/// row-major: rows index the rx hash bins, columns the tx bins).
#[derive(Debug, Clone)]
pub struct MeasurementSet {
    pub values: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
    pub frames_used: u64,
    pub hash_id: u64,
}

impl MeasurementSet {
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.values[i * self.cols..(i + 1) * self.cols].iter().sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.values[i * self.cols + j]).sum())
            .collect()
    }
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn one_frame(channel: &ChannelInstance, signal: C64, variance: f64) -> f64 {
    let frame = channel.next_frame();
    let w = channel.frame_noise(frame, variance);
    // y = |φ(s + w)| with |φ| = 1: the rotation cancels analytically,
    // and skipping the multiply keeps outputs bit-exact across CFO seeds
    (signal + w).norm()
}

/// One frame: y = |e^{jφ}(a · F'x + w)|.
pub fn measure_one(pattern: &[C64], channel: &ChannelInstance) -> Result<f64> {
    if pattern.len() != channel.n {
        return Err(Error::DimensionMismatch(format!(
            "pattern length {} vs array size {}",
            pattern.len(),
            channel.n
        )));
    }
    let variance = channel.noise_variance(channel.reference_power_one_sided());
    Ok(one_frame(channel, dot(pattern, channel.rx_response()), variance))
}

/// One frame per bin: y_b = |a^b P' F' x| with fresh CFO and noise each.
pub fn measure_hash(hash: &HashFunction, channel: &ChannelInstance) -> Result<MeasurementSet> {
    if hash.n != channel.n {
        return Err(Error::DimensionMismatch(format!(
            "hash has n = {}, channel has n = {}",
            hash.n, channel.n
        )));
    }
    let variance = channel.noise_variance(channel.reference_power_one_sided());
    let values: Vec<f64> = hash
        .patterns
        .iter()
        .map(|p| one_frame(channel, dot(&p.weights, channel.rx_response()), variance))
        .collect();
    Ok(MeasurementSet {
        rows: hash.b_count,
        cols: 1,
        frames_used: values.len() as u64,
        hash_id: hash.id,
        values,
    })
}

/// B×B frames: Y_ij = |(a^rx_i · F'x^rx)(a^tx_j · F'x^tx)| up to fresh
/// CFO and noise per frame — a rank-1 magnitude structure whose row and
/// column sums factor into per-side measurements.
pub fn measure_two_sided(
    hash_rx: &HashFunction,
    hash_tx: &HashFunction,
    channel: &ChannelInstance,
) -> Result<MeasurementSet> {
    if hash_rx.b_count != hash_tx.b_count {
        return Err(Error::DimensionMismatch(format!(
            "rx hash has B = {}, tx hash has B = {}",
            hash_rx.b_count, hash_tx.b_count
        )));
    }
    let tx_response = channel
        .tx_response()
        .ok_or_else(|| Error::InvalidChannel("two-sided measurement on a one-sided channel".into()))?;
    if hash_rx.n != channel.n || hash_tx.n != channel.n {
        return Err(Error::DimensionMismatch("hash/channel size mismatch".into()));
    }
    let variance = channel.noise_variance(channel.reference_power());
    let z_rx: Vec<C64> = hash_rx.patterns.iter().map(|p| dot(&p.weights, channel.rx_response())).collect();
    let z_tx: Vec<C64> = hash_tx.patterns.iter().map(|p| dot(&p.weights, tx_response)).collect();
    let b = hash_rx.b_count;
    let mut values = Vec::with_capacity(b * b);
    for zr in &z_rx {
        for zt in &z_tx {
            values.push(one_frame(channel, zr * zt, variance));
        }
    }
    Ok(MeasurementSet {
        values,
        rows: b,
        cols: b,
        frames_used: (b * b) as u64,
        hash_id: hash_rx.id ^ hash_tx.id.rotate_left(32),
    })
}
