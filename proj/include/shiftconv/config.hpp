#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace shiftconv {

enum class output_format { csv, json };

// Batch-run configuration. Resolution order: built-in defaults, then the
// config file, then environment overrides (SHIFTCONV_MEMORY_BUDGET,
// SHIFTCONV_WORKERS), then command-line flags.
struct run_config {
    std::uint64_t memory_budget = 2'000'000'000;  // bytes
    int workers = 0;                              // 0 = hardware concurrency
    output_format format = output_format::csv;
    double quad_target = 1e-10;
    // Default X grid for the sums pipeline.
    double x_lo = 1e5;
    double x_hi = 1e7;
    int per_decade = 16;

    int resolved_workers() const;
    void validate() const;  // throws contract_error on nonsense values
};

// Flat key = value lines; '#' starts a comment. Unknown keys are rejected.
run_config load_config_file(const std::string& path, run_config base = {});

// Applies SHIFTCONV_MEMORY_BUDGET / SHIFTCONV_WORKERS when set.
run_config apply_env_overrides(run_config cfg);

// %.17g formatting used for every floating-point value we print.
std::string format_g17(double v);

}  // namespace shiftconv
