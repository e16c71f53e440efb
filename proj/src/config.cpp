#include "shiftconv/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "shiftconv/errors.hpp"
#include "shiftconv/parallel.hpp"

namespace shiftconv {

int run_config::resolved_workers() const { return workers > 0 ? workers : default_workers(); }

void run_config::validate() const {
    if (memory_budget == 0) throw contract_error("config: memory_budget must be positive");
    if (workers < 0) throw contract_error("config: workers must be >= 0 (0 = auto)");
    if (!(quad_target > 0.0)) throw contract_error("config: quad_target must be positive");
    if (!(x_lo > 0.0 && x_hi > x_lo)) throw contract_error("config: need 0 < x_lo < x_hi");
    if (per_decade < 1) throw contract_error("config: per_decade must be >= 1");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

run_config load_config_file(const std::string& path, run_config base) {
    std::ifstream in(path);
    if (!in) throw contract_error("config: cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw contract_error("config: line " + std::to_string(lineno) + " is not key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "memory_budget") {
            base.memory_budget = std::stoull(val);
        } else if (key == "workers") {
            base.workers = std::stoi(val);
        } else if (key == "output_format") {
            if (val == "csv") base.format = output_format::csv;
            else if (val == "json") base.format = output_format::json;
            else throw contract_error("config: output_format must be csv or json");
        } else if (key == "quad_target") {
            base.quad_target = std::stod(val);
        } else if (key == "x_lo") {
            base.x_lo = std::stod(val);
        } else if (key == "x_hi") {
            base.x_hi = std::stod(val);
        } else if (key == "per_decade") {
            base.per_decade = std::stoi(val);
        } else {
            throw contract_error("config: unknown key '" + key + "'");
        }
    }
    return base;
}

run_config apply_env_overrides(run_config cfg) {
    if (const char* v = std::getenv("SHIFTCONV_MEMORY_BUDGET")) cfg.memory_budget = std::stoull(v);
    if (const char* v = std::getenv("SHIFTCONV_WORKERS")) cfg.workers = std::stoi(v);
    return cfg;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace shiftconv
