//! Holds the `acceptance` test target of `framekin`.
