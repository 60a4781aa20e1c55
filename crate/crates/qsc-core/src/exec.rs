//! Execution-mode plumbing for the data-parallel sweeps.
//!
//! Every hot loop in this crate (pairwise intersection counts, weight
//! enumeration, involution scans, orbit-equation sweeps) is written as a
//! map over index ranges followed by a sequential merge, so results are
//! identical regardless of thread count. With the `parallel` feature the
//! ranges run on rayon; without it, or with [`Execution::Sequential`],
//! they run in order on the calling thread.

use std::ops::Range;

/// How a sweep should run. `Parallel` falls back to sequential when the
/// crate is built without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Split `0..n` into ranges of at most `chunk` items.
pub(crate) fn chunk_ranges(n: usize, chunk: usize) -> Vec<Range<usize>> {
    assert!(chunk > 0);
    let mut out = Vec::with_capacity(n.div_ceil(chunk));
    let mut start = 0;
    while start < n {
        let end = (start + chunk).min(n);
        out.push(start..end);
        start = end;
    }
    out
}

/// Map `f` over the ranges, preserving range order in the output.
#[cfg(feature = "parallel")]
pub(crate) fn map_ranges<R: Send>(
    mode: Execution,
    ranges: Vec<Range<usize>>,
    f: impl Fn(Range<usize>) -> R + Sync + Send,
) -> Vec<R> {
    use rayon::prelude::*;
    match mode {
        Execution::Sequential => ranges.into_iter().map(f).collect(),
        Execution::Parallel => ranges.into_par_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_ranges<R>(
    _mode: Execution,
    ranges: Vec<Range<usize>>,
    f: impl Fn(Range<usize>) -> R,
) -> Vec<R> {
    ranges.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_cover_exactly() {
        let rs = chunk_ranges(10, 3);
        assert_eq!(rs, vec![0..3, 3..6, 6..9, 9..10]);
        assert!(chunk_ranges(0, 4).is_empty());
    }

    #[test]
    fn map_preserves_order() {
        let rs = chunk_ranges(100, 7);
        let out = map_ranges(Execution::Parallel, rs.clone(), |r| r.start);
        let expected: Vec<usize> = rs.iter().map(|r| r.start).collect();
        assert_eq!(out, expected);
    }
}
