//! Tiny deterministic worker pool for independent trials.
//!
//! `HATLAB_THREADS` caps parallelism; results are collected by trial index,
//! so reports do not depend on scheduling.

pub fn thread_cap() -> usize {
    match std::env::var("HATLAB_THREADS") {
        Ok(v) => v.parse::<usize>().ok().filter(|&n| n >= 1).unwrap_or(1),
        Err(_) => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    }
}

/// Maps `f` over `0..n` with at most `thread_cap()` workers, preserving
/// index order in the output.
pub fn run_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = thread_cap().min(n.max(1));
    if threads <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let mut out: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<&mut Option<T>>> =
        out.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let value = f(i);
                **slots[i].lock().unwrap() = Some(value);
            });
        }
    });
    out.into_iter().map(|v| v.expect("worker filled every slot")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let squares = run_indexed(100, |i| i * i);
        for (i, v) in squares.iter().enumerate() {
            assert_eq!(*v, i * i);
        }
    }
}
