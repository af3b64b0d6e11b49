#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace response {

/// Base class of every error raised by the solver libraries.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad schema, violated invariant, mismatched shapes.
/// `path` names the offending field when the error comes from a document.
class InputError : public Error {
public:
    explicit InputError(const std::string& what, std::string path = {})
        : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// A Fourier mode whose multiplier vanishes (or is numerically singular).
class ResonanceError : public Error {
public:
    ResonanceError(const std::string& what, std::vector<int> k, int j = 0)
        : Error(what), k_(std::move(k)), j_(j) {}

    const std::vector<int>& k() const noexcept { return k_; }
    int j() const noexcept { return j_; }

private:
    std::vector<int> k_;
    int j_;
};

/// Weighted norm or exponential weight outside the double range.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Non-finite value produced by a nonlinearity or a transform.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A certified inequality failed; indicates a bug or an injected fault.
class CertificationError : public Error {
public:
    using Error::Error;
};

}  // namespace response
