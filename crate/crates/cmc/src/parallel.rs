//! Scoped data parallelism capped by `CMC_THREADS`.

use std::thread;

/// Worker count: the machine's parallelism, capped by `CMC_THREADS` when it
/// holds a positive integer.
pub fn threads() -> usize {
    let avail = thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    match std::env::var("CMC_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
    {
        Some(n) if n > 0 => n.min(avail),
        _ => avail,
    }
}

/// `items.iter().map(f)` split into contiguous chunks; output order matches
/// input order.
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let n = threads().min(items.len());
    if n <= 1 {
        return items.iter().map(f).collect();
    }
    let f = &f;
    let chunk = items.len().div_ceil(n);
    thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().map(f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker thread panicked"))
            .collect()
    })
}
