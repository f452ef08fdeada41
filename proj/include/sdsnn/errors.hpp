#pragma once

#include <stdexcept>
#include <string>

namespace sdsnn {

// Violated precondition or shape contract on a library call.
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

// Malformed external input (IDX files, frame containers, configs, checkpoints).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a training epoch cannot continue (non-finite loss/gradients,
// fully dead target layer). The driver keeps the last checkpoint and exits.
class TrainingAbort : public std::runtime_error {
public:
    explicit TrainingAbort(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ContractError(msg);
}

} // namespace sdsnn
