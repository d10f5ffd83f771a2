//! One PASS/FAIL line per acceptance criterion. `ACCEPTANCE_ONLY=3,5`
//! restricts the run; `ACCEPTANCE_SEED` and `ACCEPTANCE_WORKERS` override
//! the defaults.

use oasp_core::selftest::{Suite, SuiteConfig, NAMES};

fn env_num(name: &str) -> Option<u64> {
    std::env::var(name).ok().and_then(|v| v.trim().parse().ok())
}

fn main() {
    let mut cfg = SuiteConfig::default();
    if let Some(seed) = env_num("ACCEPTANCE_SEED") {
        cfg.seed = seed;
    }
    cfg.workers = env_num("ACCEPTANCE_WORKERS")
        .map(|w| w as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let only: Vec<usize> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect())
        .unwrap_or_else(|| (1..=NAMES.len()).collect());
    let suite = Suite::new(cfg);
    let mut failed = 0;
    for id in only {
        let c = suite.run(id);
        println!("{c}");
        if !c.passed {
            failed += 1;
        }
    }
    println!("acceptance: {failed} failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
