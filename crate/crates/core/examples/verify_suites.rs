//! Runs each verification suite at a small size and prints its tallies.
//!
//!     LOOSEMAT_WORKERS=2 cargo run --release --example verify_suites

use loosemat::verify::{run_suite, Suite, SuiteConfig};

fn main() {
    let configs = [
        SuiteConfig::new(Suite::ThmBinary, 2, 3).exhaustive(),
        SuiteConfig::new(Suite::ThmTernaryBound, 3, 5).samples(100),
        SuiteConfig::new(Suite::ThmTwoLoose, 3, 7).samples(100),
        SuiteConfig::new(Suite::ThmPaving, 2, 3).ranks(3, 4).exhaustive(),
        SuiteConfig::new(Suite::PropFree, 3, 2).ranks(2, 4),
    ];
    for cfg in configs {
        let o = run_suite(&cfg).unwrap();
        println!(
            "{} GF({}) ranks {}..{}: {} examined, {} violations, {} ms",
            cfg.suite, cfg.q, cfg.min_rank, cfg.max_rank, o.examined, o.violation_count, o.elapsed_ms
        );
        for (k, v) in o.tallies.iter().take(8) {
            println!("  {k} {v}");
        }
        for c in &o.controls {
            println!("  control {}: {}", c.name, if c.ok { "ok" } else { "FAILED" });
        }
    }
}
