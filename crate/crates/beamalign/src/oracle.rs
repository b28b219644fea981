//! Brute-force reference implementations used only by tests: noiseless
//! dense direction-power maps, computed with direct DFT sums that share
//! no code with the FFT-based fast paths.

use crate::spectrum::ChannelInstance;
use crate::C64;
use std::f64::consts::PI;

/// Noiseless received power per direction (one-sided) or per direction
/// pair (two-sided, row-major rx × tx).
#[derive(Debug, Clone)]
pub struct DensePowerMap {
    pub n: usize,
    pub two_sided: bool,
    /// Length n, or n² row-major when two-sided.
    pub power: Vec<f64>,
}

impl DensePowerMap {
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = 0;
        for i in 1..self.power.len() {
            if self.power[i] > self.power[best] {
                best = i;
            }
        }
        if self.two_sided {
            (best / self.n, best % self.n)
        } else {
            (best, 0)
        }
    }
}

/// |Σ_p g_p Σ_m e^{2πi(f_p − s)m/n}/√n·(1/√n)·√n| — the response of an
/// exact beam at integer direction s to the channel paths, evaluated by
/// direct summation (no FFT).
pub fn slow_beam_power(n: usize, paths: &[(f64, C64)], s: usize) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for &(f, g) in paths {
        let mut arm = C64::new(0.0, 0.0);
        for m in 0..n {
            arm += C64::from_polar(1.0, 2.0 * PI * (f - s as f64) * m as f64 / n as f64);
        }
        acc += g * arm / (n as f64).sqrt();
    }
    acc.norm_sqr()
}

/// Evaluates the noiseless single-beam power for every direction (every
/// pair when the channel is two-sided).
pub fn dense_power_map(channel: &ChannelInstance) -> DensePowerMap {
    let n = channel.n;
    let rx_paths = channel.rx.paths(n);
    let rx: Vec<f64> = (0..n).map(|s| slow_beam_power(n, &rx_paths, s)).collect();
    match &channel.tx {
        None => DensePowerMap { n, two_sided: false, power: rx },
        Some(tx_side) => {
            let tx_paths = tx_side.paths(n);
            let tx: Vec<f64> = (0..n).map(|s| slow_beam_power(n, &tx_paths, s)).collect();
            let mut power = Vec::with_capacity(n * n);
            for &pr in &rx {
                for &pt in &tx {
                    power.push(pr * pt);
                }
            }
            DensePowerMap { n, two_sided: true, power }
        }
    }
}

/// Ground-truth recovery: the k strongest directions of the dense map
/// (rx side for two-sided channels), ties broken by lowest index.
pub fn oracle_recover(channel: &ChannelInstance, k: usize) -> Vec<usize> {
    let map = dense_power_map(channel);
    let row: Vec<f64> = if map.two_sided {
        (0..map.n).map(|i| map.power[i * map.n..(i + 1) * map.n].iter().cloned().fold(0.0, f64::max)).collect()
    } else {
        map.power
    };
    let mut idx: Vec<usize> = (0..row.len()).collect();
    idx.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}
