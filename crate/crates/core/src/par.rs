//! Data-parallel map helpers. With the `parallel` feature (default) the
//! ordered map runs on rayon; without it, the same code path degrades to a
//! sequential loop. Output order always matches input order, so callers get
//! deterministic results either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, in parallel when the `parallel` feature is
/// enabled. The output preserves input order.
#[cfg(feature = "parallel")]
pub fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Always-sequential sibling of [`map_ordered`]; exists so benchmarks can
/// compare the two execution strategies in a single build.
pub fn map_ordered_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let items: Vec<u64> = (0..1000).collect();
        let doubled = map_ordered(&items, |x| x * 2);
        let doubled_seq = map_ordered_seq(&items, |x| x * 2);
        assert_eq!(doubled, doubled_seq);
        assert_eq!(doubled[500], 1000);
    }
}
