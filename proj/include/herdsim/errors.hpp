#pragma once

#include <stdexcept>
#include <string>

namespace herdsim {

/// Argument outside the admissible domain of a model formula.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid user configuration. `path()` names the offending field, e.g. "model.eps_cc".
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string path, const std::string& what)
        : std::invalid_argument(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Integration produced a non-finite coefficient or state.
class NumericFailure : public std::runtime_error {
public:
    NumericFailure(const std::string& what, double time)
        : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Jump process reached a state with no outgoing transitions.
class AbsorbingState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input too small or degenerate for an estimator.
class InsufficientData : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace herdsim
