//! Order-preserving parallel map with per-worker state.

use std::thread;

/// Maps `f` over `items` on up to `threads` scoped workers. Each worker gets
/// a contiguous shard and its own state from `init` (typically a fresh
/// [`MemoTable`](crate::MemoTable)). Results come back in input order.
pub fn par_map<T, R, S, I, F>(items: &[T], threads: usize, init: I, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    I: Fn() -> S + Sync,
    F: Fn(&mut S, &T) -> R + Sync,
{
    let threads = threads.max(1).min(items.len().max(1));
    if threads == 1 {
        let mut state = init();
        return items.iter().map(|item| f(&mut state, item)).collect();
    }
    let shard = items.len().div_ceil(threads);
    thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(shard)
            .map(|chunk| {
                let (init, f) = (&init, &f);
                scope.spawn(move || {
                    let mut state = init();
                    chunk
                        .iter()
                        .map(|item| f(&mut state, item))
                        .collect::<Vec<R>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}
