//! Intentionally empty: this crate exists to host the `acceptance`
//! integration-test target (see `tests/acceptance.rs`).
