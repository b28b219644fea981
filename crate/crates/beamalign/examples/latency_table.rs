//! Prints the A-BFT alignment-delay model across array sizes and client
//! counts for the agile scheme and standard 802.11ad training.

use beamalign::mac_latency::{scheme_delay_ms, MacTimingConfig, Scheme};

fn main() {
    let mac = MacTimingConfig::default();
    println!("{:<6} {:>10} {:>10} {:>10} {:>10}  (ms)", "size", "11ad 1cl", "agile 1cl", "11ad 4cl", "agile 4cl");
    for n in [8usize, 16, 64, 128, 256] {
        println!(
            "{:<6} {:>10.2} {:>10.2} {:>10.2} {:>10.2}",
            n,
            scheme_delay_ms(Scheme::Standard11ad, n, 1, &mac),
            scheme_delay_ms(Scheme::Agile, n, 1, &mac),
            scheme_delay_ms(Scheme::Standard11ad, n, 4, &mac),
            scheme_delay_ms(Scheme::Agile, n, 4, &mac),
        );
    }
}
