//! Holds only the `acceptance` test target; the suites live in `sigma2::verify`.
