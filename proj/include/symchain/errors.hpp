#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace symchain {

// Base of everything thrown by the library. `code` is a stable,
// machine-checkable identifier ("RowSumNonzero", "FormsDisagree", ...);
// `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Malformed or inadmissible input: bad matrices, bad windows, bad labels.
// The CLI maps these to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A mathematical identity that should hold by construction failed at
// runtime (e.g. the two Theorem-4 forms disagree). The CLI maps these to
// exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace symchain
