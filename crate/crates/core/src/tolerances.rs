use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by the engine, the expression continuation
/// and the witness runs. Every trace and report records the block it used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `max |p(r)| / (1 + max |cᵢ|)` accepted from the root finder.
    pub root_residual: f64,
    /// Endpoint-to-start matching of tracked roots.
    pub matching: f64,
    /// Closure of paths and of continued expression values.
    pub closure: f64,
    /// Minimum separation between distinct moving points.
    pub collision: f64,
    /// Guard for divisors and radicands (relative to `1 + max |cᵢ|`).
    pub zero_guard: f64,
    /// Smallest `|discriminant|` accepted at the start of a trace.
    pub discriminant_floor: f64,
    /// Bisection levels allowed per grid segment.
    pub max_bisections: u32,
    /// Sweep cap for the simultaneous root iteration.
    pub max_sweeps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root_residual: 1e-12,
            matching: 1e-9,
            closure: 1e-9,
            collision: 1e-6,
            zero_guard: 1e-12,
            discriminant_floor: 1e-12,
            max_bisections: 20,
            max_sweeps: 500,
        }
    }
}
