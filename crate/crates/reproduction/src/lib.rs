//! Holds the `acceptance` test target. Kept as its own package so a failing
//! criterion does not stop the other crates' tests from running.
