#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgwb {

/// Error categories map one-to-one onto CLI exit codes (2, 3, 4, 5).
enum class ErrorKind { Schema, Axiom, Contract, Resource };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), kind_(kind), code_(std::move(code)) {}

    Error(ErrorKind kind, std::string code, const std::string& detail, std::vector<std::complex<double>> witness)
        : Error(kind, std::move(code), detail) {
        witness_ = std::move(witness);
    }

    ErrorKind kind() const { return kind_; }
    const std::string& code() const { return code_; }
    /// Counterexample attached by some checks (e.g. a vector where a form goes negative).
    const std::vector<std::complex<double>>& witness() const { return witness_; }

private:
    ErrorKind kind_;
    std::string code_;
    std::vector<std::complex<double>> witness_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& code, const std::string& detail) {
    throw Error(kind, code, detail);
}

inline int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Schema: return 2;
        case ErrorKind::Axiom: return 3;
        case ErrorKind::Contract: return 4;
        case ErrorKind::Resource: return 5;
    }
    return 1;
}

}  // namespace qgwb
