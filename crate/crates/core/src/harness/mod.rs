//! Random instance generation, mutation oracles, round-trip pipelines,
//! mutation fuzzing and instance files, shared by the command line and the
//! acceptance suite.

pub mod fixtures;
pub mod gen;
pub mod instance;
pub mod mutate;
pub mod oracle;
pub mod pipeline;

use crate::report::Report;

/// Merges a per-trial report, tagging each location with the trial index.
pub fn merge_trial(into: &mut Report, trial: u64, mut r: Report) {
    for e in &mut r.entries {
        e.location = format!("trial {trial}: {}", e.location);
    }
    into.merge(r);
}

/// Runs `f` on every trial index, concurrently, and returns the results in
/// index order.
pub fn run_trials<T: Send>(trials: u64, f: impl Fn(u64) -> T + Sync) -> Vec<T> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(trials.max(1) as usize);
    let mut slots: Vec<Option<T>> = (0..trials).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunks: Vec<_> = slots.chunks_mut(trials.div_ceil(workers as u64).max(1) as usize).enumerate().collect();
        let size = trials.div_ceil(workers as u64).max(1);
        for (c, chunk) in chunks {
            let f = &f;
            scope.spawn(move || {
                for (k, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(f(c as u64 * size + k as u64));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.expect("every trial ran")).collect()
}
