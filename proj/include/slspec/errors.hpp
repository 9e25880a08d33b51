#pragma once

#include <stdexcept>
#include <string>

namespace slspec {

/// No root of the defining equation exists in the admissible range
/// (e.g. turning point requested at a >= a1).
struct NoRootError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Action F(a) too small to divide by (a too close to a1).
struct DegenerateActionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fixed-point refinement failed to contract within the iteration cap.
struct NonConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Eigenvalue scan found fewer roots than the node counts imply.
struct MissedRootError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordering index requested inside the degenerate collar |a - a2| < C/lambda.
struct AmbiguousOrderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive step size fell below representable resolution.
struct StepUnderflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace slspec
