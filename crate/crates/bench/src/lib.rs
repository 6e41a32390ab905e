//! Shared fixtures for the criterion benches.

use salie_core::{HSumRequest, IndexData, Sign};

/// Requests at modulus `c` for a handful of indices with assorted discriminants.
pub fn requests(c: u64) -> Vec<HSumRequest> {
    [(1, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 2), (5, 7, 3)]
        .into_iter()
        .map(|(m, n, r)| {
            let ix = IndexData::new(m, n, r).expect("negative discriminant");
            HSumRequest::new(ix, c, Sign::Plus).expect("valid request")
        })
        .collect()
}
