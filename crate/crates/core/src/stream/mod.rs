//! White-box robust k-sparse recovery over a turnstile stream.
//!
//! A [`StreamState`] runs the relaxed syndrome decoder for candidates and
//! keeps a homomorphic sketch `Σ_i x_i·ĉt_i` over the point-circuit
//! evaluations of a public digest. A candidate is reported only when its own
//! hash reproduces the sketch exactly.

mod gen;
mod params;
mod report;
mod state;
mod trace;

pub use gen::{accumulate, random_stream};
pub use params::StreamParams;
pub use report::{ground_truth, Report, ReportParseError};
pub use state::{Mode, ReportStats, RevealedState, StreamState, UpdatePath, STATE_MAGIC};
pub use trace::{format_trace, parse_trace, parse_trace_for, TraceError, TraceRecord};
