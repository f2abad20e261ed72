//! Benchmark-only crate; see `benches/core.rs`.  The library target is
//! intentionally empty — it exists so the bench target has a package to
//! live in without adding weight to `foq-core` itself.
