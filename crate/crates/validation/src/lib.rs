//! Holds the `acceptance` test target; see `tests/acceptance.rs`.
//!
//! Kept in its own package so that it runs after every other test binary in
//! the workspace.
