#pragma once

#include "gcusp/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gcusp {

struct CheckResult {
    std::string name;
    std::string anchor;  // the identity being checked, in words
    int samples = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    bool informational = false;  // reported, never fails the run
    std::string note;
};

struct VerificationReport {
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;  // sorted by name

    bool passed() const;
    Json to_json() const;
};

struct VerifyOptions {
    std::uint64_t seed = 20240611;
    int samples = 40;
    std::vector<int> dims{3, 4, 5};
    double tol = 1e-8;
    // Replaces the closed form for varpi by its negative; the weights-equation
    // check must catch it.
    bool inject_varpi_sign_error = false;
};

VerificationReport run_verification(const VerifyOptions& options);

}  // namespace gcusp
