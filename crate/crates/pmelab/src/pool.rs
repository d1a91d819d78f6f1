//! A minimal scoped worker pool for dispatching independent
//! experiments.  Results come back in task order no matter how the
//! scheduler interleaves the workers, so anything downstream of the
//! pool (report files, summaries) stays deterministic.

use crate::error::{Error, Result};
use std::collections::VecDeque;
use std::sync::Mutex;

fn count_from(var: Option<&str>) -> Result<usize> {
    match var {
        None => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
        Some(v) => v.trim().parse::<usize>().ok().filter(|&n| n >= 1).ok_or_else(|| {
            Error::Config(format!("PMELAB_THREADS: expected a positive integer, got '{v}'"))
        }),
    }
}

/// Worker cap: `PMELAB_THREADS` when set, available parallelism otherwise.
pub fn worker_count() -> Result<usize> {
    count_from(std::env::var("PMELAB_THREADS").ok().as_deref())
}

/// Run every task on up to `workers` scoped threads and collect the
/// results in task order.
pub fn run_tasks<T, F>(tasks: Vec<F>, workers: usize) -> Vec<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    let n = tasks.len();
    let queue: Mutex<VecDeque<(usize, F)>> = Mutex::new(tasks.into_iter().enumerate().collect());
    let slots: Vec<Mutex<Option<T>>> = (0..n).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers.max(1).min(n) {
            scope.spawn(|| loop {
                let job = queue.lock().unwrap().pop_front();
                let Some((i, f)) = job else { break };
                *slots[i].lock().unwrap() = Some(f());
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().unwrap().expect("queue drained only after running each task"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_parsing() {
        assert!(count_from(None).unwrap() >= 1);
        assert_eq!(count_from(Some("3")).unwrap(), 3);
        assert_eq!(count_from(Some(" 8 ")).unwrap(), 8);
        for bad in ["0", "-2", "many", ""] {
            let err = count_from(Some(bad)).unwrap_err().to_string();
            assert!(err.contains("PMELAB_THREADS"), "{err}");
        }
    }

    #[test]
    fn results_keep_task_order() {
        let tasks: Vec<_> = (0..32)
            .map(|i| {
                move || {
                    // Stagger so later tasks often finish first.
                    std::thread::sleep(std::time::Duration::from_micros(((32 - i) % 7) * 50));
                    i * i
                }
            })
            .collect();
        let got = run_tasks(tasks, 4);
        assert_eq!(got, (0..32).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn empty_and_single_worker_cases() {
        let none: Vec<fn() -> i32> = Vec::new();
        assert!(run_tasks(none, 4).is_empty());
        let got = run_tasks(vec![|| 1, || 2], 1);
        assert_eq!(got, vec![1, 2]);
    }
}
