//! Pseudo-random generalized permutations of the direction domain.
//!
//! A permutation is parameterized by (σ, a, b) with σ invertible mod n.
//! In the direction domain it moves bin i to ρ(i) = σ⁻¹·i + a mod n; on
//! the hardware side it is realized purely by rearranging and modulating
//! the phase-shifter weights (the generalized permutation matrix P'), so
//! the array never needs to know x. The load-bearing property, verified
//! exactly by tests, is |a P' F' x| = |a F' P x| for every pattern a.

use crate::beams::PhasePattern;
use crate::spectrum::DirectionSpectrum;
use crate::{C64, Error, Result};
use rand::Rng;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Permutation {
    pub n: usize,
    pub sigma: usize,
    pub sigma_inv: usize,
    pub a: usize,
    pub b: usize,
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mod_inverse(sigma: usize, n: usize) -> Option<usize> {
    // extended Euclid on (sigma, n)
    let (mut t, mut new_t): (i64, i64) = (0, 1);
    let (mut r, mut new_r): (i64, i64) = (n as i64, sigma as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(n as i64) as usize)
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { n, sigma: 1, sigma_inv: 1, a: 0, b: 0 }
    }

    pub fn new(n: usize, sigma: usize, a: usize, b: usize) -> Result<Self> {
        if n < 2 || sigma == 0 || sigma >= n || a >= n || b >= n {
            return Err(Error::InvalidParameter(format!(
                "permutation parameters out of range: n={n} sigma={sigma} a={a} b={b}"
            )));
        }
        let sigma_inv = mod_inverse(sigma, n)
            .ok_or_else(|| Error::InvalidParameter(format!("sigma = {sigma} not invertible mod {n}")))?;
        Ok(Self { n, sigma, sigma_inv, a, b })
    }

    /// ρ(i) = σ⁻¹·i + a mod n.
    pub fn rho(&self, i: usize) -> usize {
        (self.sigma_inv * (i % self.n) + self.a) % self.n
    }

    /// ρ⁻¹(i) = σ·(i − a) mod n.
    pub fn rho_inverse(&self, i: usize) -> usize {
        let n = self.n as i64;
        ((self.sigma as i64 * ((i % self.n) as i64 - self.a as i64)).rem_euclid(n)) as usize
    }

    pub fn is_identity(&self) -> bool {
        self.sigma == 1 && self.a == 0 && self.b == 0
    }
}

/// Samples (σ, a, b) with σ uniform over residues coprime to n; b is
/// forced to 0 outside theory mode, matching the practical system.
pub fn sample_permutation<R: Rng>(n: usize, rng: &mut R, theory_mode: bool) -> Permutation {
    assert!(n >= 2);
    let sigma = loop {
        let s = rng.gen_range(1..n);
        if gcd(s, n) == 1 {
            break s;
        }
    };
    let a = rng.gen_range(0..n);
    let b = if theory_mode { rng.gen_range(0..n) } else { 0 };
    Permutation::new(n, sigma, a, b).expect("sampled sigma is invertible")
}

/// Right-composes a pattern with the generalized permutation matrix P':
/// out_i = pattern_{σ(i−b) mod n} · ω^{(aσ mod n)·i}.
pub fn apply_to_pattern(pattern: &PhasePattern, perm: &Permutation) -> Result<PhasePattern> {
    if pattern.n != perm.n {
        return Err(Error::DimensionMismatch(format!(
            "pattern has n = {}, permutation has n = {}",
            pattern.n, perm.n
        )));
    }
    let n = perm.n;
    let mod_freq = (perm.a * perm.sigma) % n;
    let weights = (0..n)
        .map(|i| {
            let src = (perm.sigma as i64 * (i as i64 - perm.b as i64)).rem_euclid(n as i64) as usize;
            let phase = 2.0 * PI * (mod_freq * i % n) as f64 / n as f64;
            pattern.weights[src] * C64::from_polar(1.0, phase)
        })
        .collect();
    Ok(PhasePattern { n, weights })
}

/// Oracle-side companion of `apply_to_pattern`: moves entry i to ρ(i)
/// with phase ω^{τ(i)}, τ(i) = b·(i + σa).
pub fn permute_spectrum(perm: &Permutation, x: &DirectionSpectrum) -> DirectionSpectrum {
    assert_eq!(perm.n, x.n);
    let n = perm.n;
    let entries = x
        .entries
        .iter()
        .map(|&(i, g)| {
            let tau = (perm.b * ((i + perm.sigma * perm.a) % n)) % n;
            let phase = C64::from_polar(1.0, 2.0 * PI * tau as f64 / n as f64);
            (perm.rho(i), g * phase)
        })
        .collect();
    DirectionSpectrum { n, entries }
}
