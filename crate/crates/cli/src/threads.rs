//! Worker-count control and an order-preserving parallel map.
//!
//! `QUBONET_THREADS` caps the worker count; 0 or unset means auto. Results
//! are reassembled in input order, so output never depends on scheduling.

use std::env;
use std::thread;

pub const THREADS_ENV: &str = "QUBONET_THREADS";

pub fn worker_count() -> usize {
    let auto = thread::available_parallelism().map(usize::from).unwrap_or(1);
    match env::var(THREADS_ENV) {
        Ok(value) => match value.trim().parse::<usize>() {
            Ok(0) | Err(_) => auto,
            Ok(n) => n,
        },
        Err(_) => auto,
    }
}

/// Applies `f` to every item across [`worker_count`] threads. Items are
/// dealt round-robin and the output order matches the input order.
pub fn parallel_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    let workers = worker_count().min(items.len()).max(1);
    if workers == 1 {
        return items.into_iter().map(f).collect();
    }
    let mut queues: Vec<Vec<(usize, T)>> = (0..workers).map(|_| Vec::new()).collect();
    let total = items.len();
    for (index, item) in items.into_iter().enumerate() {
        queues[index % workers].push((index, item));
    }

    let f = &f;
    let mut slots: Vec<Option<R>> = (0..total).map(|_| None).collect();
    thread::scope(|scope| {
        let handles: Vec<_> = queues
            .into_iter()
            .map(|queue| {
                scope.spawn(move || {
                    queue.into_iter().map(|(index, item)| (index, f(item))).collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            for (index, value) in handle.join().expect("worker panicked") {
                slots[index] = Some(value);
            }
        }
    });
    slots.into_iter().map(|slot| slot.expect("every slot filled")).collect()
}
