//! Numeric tolerance ladder.

/// Invariant checks on constructed objects (Hermiticity, trace, positivity, unitarity).
pub const CONSTRUCTION: f64 = 1e-10;

/// Checks on quantities derived from valid objects.
pub const DERIVED: f64 = 1e-9;

/// Acceptance slack for optimized values.
pub const OPTIMIZATION: f64 = 1e-3;

/// Eigenvalues below this are treated as zero before taking logarithms,
/// and decide support membership in relative entropy.
pub const CLAMP: f64 = 1e-12;
