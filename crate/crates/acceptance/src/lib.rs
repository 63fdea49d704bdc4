//! Acceptance criteria for `tactinet`; see `tests/acceptance.rs`.
