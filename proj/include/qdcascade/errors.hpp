#pragma once

#include <stdexcept>
#include <string>

namespace qdc {

// Reconstruction input is not Hermitian within tolerance.
struct NotHermitian : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The fixed 36-projector design matrix lost rank; cannot happen with the
// shipped basis set and indicates memory corruption or a build problem.
struct SingularDesign : std::logic_error {
    using std::logic_error::logic_error;
};

// Requested contour level is never crossed by the map.
struct EmptyContour : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Convergence guard tripped: halving the time step moved the result by more
// than the declared tolerance.
struct GridTooCoarse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input data file (bad projection table, negative rate, ...).
struct InputDataError : std::runtime_error {
    InputDataError(const std::string& msg, int row = -1)
        : std::runtime_error(row >= 0 ? msg + " (row " + std::to_string(row) + ")" : msg),
          row_number(row) {}
    int row_number;
};

}  // namespace qdc
