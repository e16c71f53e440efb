#pragma once

// Identity-verification registry backing `verify all` and `modular verify`:
// one record per identity, with the residual actually measured, the pinned
// tolerance, and a stable identifier.

#include <cstdint>
#include <string>
#include <vector>

#include "shiftconv/config.hpp"

namespace shiftconv {

struct identity_record {
    std::string module;
    std::string identity_id;
    std::string paper_anchor;  // human-readable description of the identity
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

enum class verify_level { quick, full };

struct verify_options {
    verify_level level = verify_level::quick;
    int workers = 1;
    std::uint64_t memory_budget = 2'000'000'000;
};

std::vector<identity_record> verify_arith(const verify_options& opt);
std::vector<identity_record> verify_special(const verify_options& opt);
std::vector<identity_record> verify_modular(const verify_options& opt);
std::vector<identity_record> verify_series(const verify_options& opt);
std::vector<identity_record> verify_sums(const verify_options& opt);

// Every identity from the module invariant lists, in a fixed order.
std::vector<identity_record> verify_everything(const verify_options& opt);

// JSON report: array of records plus a summary object.
std::string verification_report_json(const std::vector<identity_record>& records);

}  // namespace shiftconv
