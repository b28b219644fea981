//! Frame budgets per scheme across array sizes: k²·log₂ n for the
//! agile scheme versus n² for exhaustive search and 4n + γ² for the
//! standard 802.11ad three-phase procedure.

use beamalign::mac_latency::{scheme_frame_budget, Scheme};

fn main() {
    let (k, gamma) = (4usize, 4usize);
    println!("{:<6} {:>10} {:>12} {:>10} {:>8}", "size", "agile", "exhaustive", "11ad", "ratio");
    for n in [8usize, 16, 64, 128, 256, 1024] {
        let a = scheme_frame_budget(Scheme::Agile, n, k, gamma);
        let e = scheme_frame_budget(Scheme::Exhaustive, n, k, gamma);
        let s = scheme_frame_budget(Scheme::Standard11ad, n, k, gamma);
        println!("{n:<6} {a:>10} {e:>12} {s:>10} {:>8}", e / a);
    }
}
