//! Holds the `acceptance` test target only. It is a separate package so that
//! it runs after every other test binary in the workspace.
