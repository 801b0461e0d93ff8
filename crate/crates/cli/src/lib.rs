//! Verification runner behind the `verify` binary.

pub mod config;
pub mod report;
pub mod suites;

use config::RunConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use report::{Report, SuiteReport};
use sha2::{Digest, Sha256};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

/// Per-suite stream: the first 8 bytes of SHA-256(seed ‖ name).
pub fn seed_for(seed: u64, suite: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(suite.as_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}

pub fn run_one(cfg: &RunConfig, f: theta_core::FieldParams, name: &str) -> SuiteReport {
    let start = Instant::now();
    let mut ctx = suites::Ctx {
        cfg,
        f,
        rng: ChaCha8Rng::seed_from_u64(seed_for(cfg.seed, name)),
    };
    let (params, checks) = suites::run_suite(name, &mut ctx);
    SuiteReport {
        suite: name.to_string(),
        params,
        checks,
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

/// Runs every configured suite on up to `jobs` threads; results keep the requested order.
pub fn run(cfg: &RunConfig) -> Result<Report, config::ConfigError> {
    let f = cfg.field()?;
    let n = cfg.suites.len();
    let slots: Vec<Mutex<Option<SuiteReport>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..cfg.jobs.clamp(1, n.max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= n {
                    break;
                }
                let r = run_one(cfg, f, &cfg.suites[i]);
                *slots[i].lock().expect("slot") = Some(r);
            });
        }
    });
    let suites = slots
        .into_iter()
        .map(|m| m.into_inner().expect("slot").expect("suite ran"))
        .collect();
    let echo = serde_json::to_value(cfg).unwrap_or_default();
    Ok(Report::new(echo, suites))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_differ_by_suite_and_seed() {
        assert_ne!(seed_for(0, "cosets"), seed_for(0, "lattice"));
        assert_ne!(seed_for(0, "cosets"), seed_for(1, "cosets"));
        assert_eq!(seed_for(7, "theta-match"), seed_for(7, "theta-match"));
    }
}
