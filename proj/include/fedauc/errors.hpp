#pragma once

#include <stdexcept>
#include <string>

namespace fedauc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// metrics
struct DegenerateLabels : Error {
    explicit DegenerateLabels(const std::string& what = "need at least one positive and one negative label")
        : Error(what) {}
};
struct InvalidGrid : Error {
    using Error::Error;
};
struct NonMonotone : Error {
    using Error::Error;
};

// he backend
struct UnsupportedParams : Error {
    using Error::Error;
};
struct SlotOverflow : Error {
    using Error::Error;
};
struct DepthExhausted : Error {
    using Error::Error;
};
struct ParamMismatch : Error {
    using Error::Error;
};
struct KeyMismatch : Error {
    using Error::Error;
};

// protocols / orchestration
struct InvalidConfig : Error {
    using Error::Error;
};
struct TooFewParties : Error {
    using Error::Error;
};
struct VerificationFailed : Error {
    double auc;
    double auc_prime;
    VerificationFailed(double a, double a2, const std::string& what)
        : Error(what), auc(a), auc_prime(a2) {}
};

// io
struct ParseError : Error {
    long line_number;
    ParseError(long line, const std::string& what) : Error(what), line_number(line) {}
};
struct EmptyInput : Error {
    using Error::Error;
};

}  // namespace fedauc
