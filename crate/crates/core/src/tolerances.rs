//! Pinned numerical tolerances of the verification suites.

/// Closed form vs. brute force for H-sums, on top of the combined err.
pub const CLOSED_FORM_SLACK: f64 = 1e-9;
/// Gauss and Salié closed forms vs. brute force, on top of err.
pub const GAUSS_SLACK: f64 = 1e-9;
/// h_fast vs. h_brute on randomized sweeps.
pub const FAST_SLACK: f64 = 1e-6;
/// Allowed |geometric side| beyond the rigorous tail on zero-dimensional spaces.
pub const ZERO_DIM_TOLERANCE: f64 = 1e-3;
pub const ZERO_DIM_C_MAX: u64 = 100_000;
/// Relative floor for coefficient-ratio agreement.
pub const RATIO_BASE_TOLERANCE: f64 = 1e-2;
pub const RATIO_C_MAX: u64 = 5_000;
pub const RATIO_MIN_PAIRS: usize = 4;
/// Series vs. recurrence on the crossover region [ν/2, 2ν].
pub const BESSEL_BRANCH_AGREEMENT: f64 = 1e-10;
