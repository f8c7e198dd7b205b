#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lasernoise {

// Base class for every domain error thrown by the library. code() is a
// stable machine-readable identifier (snake_case, used verbatim in the CLI's
// JSON error reports); what() carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    [[nodiscard]] const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// A constructor or configuration argument is out of its admissible range.
class InvalidParameter : public Error {
public:
    explicit InvalidParameter(const std::string& message) : Error("invalid_parameter", message) {}
};

// The device cannot sustain lasing (transparency photon number <= 1/2);
// threshold and noise-threshold quantities are undefined for it.
class NonLasingDevice : public Error {
public:
    explicit NonLasingDevice(const std::string& message) : Error("non_lasing_device", message) {}
};

// A count or rate argument that must be nonnegative was negative (or NaN).
class NegativeInput : public Error {
public:
    explicit NegativeInput(const std::string& message) : Error("negative_input", message) {}
};

// The requested operating point lies below the transparency photon number,
// where the linearized fluctuation model has no real coupling rate.
class BelowTransparency : public Error {
public:
    explicit BelowTransparency(const std::string& message) : Error("below_transparency", message) {}
};

// The drift matrix is not positive-stable, so no stationary covariance
// exists. The message reports the offending eigenvalues.
class UnstableLinearization : public Error {
public:
    explicit UnstableLinearization(const std::string& message) : Error("unstable_linearization", message) {}
};

// A bracketing scan found no sign change. The message reports the range.
class NoRootFound : public Error {
public:
    explicit NoRootFound(const std::string& message) : Error("no_root_found", message) {}
};

// The integrator step exceeds the stability bound of the linearization.
class StepTooLarge : public Error {
public:
    explicit StepTooLarge(const std::string& message) : Error("step_too_large", message) {}
};

// The estimated (or actual) event count of a jump simulation exceeds its cap.
class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(const std::string& message) : Error("budget_exceeded", message) {}
};

// A statistics window contains no samples (or no weight).
class EmptyWindow : public Error {
public:
    explicit EmptyWindow(const std::string& message) : Error("empty_window", message) {}
};

// File or JSON input could not be read or parsed.
class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("io_error", message) {}
};

}  // namespace lasernoise
