#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "shiftconv/cli.hpp"

using shiftconv::run_cli;

namespace {

// Captures stdout produced by a CLI invocation.
struct capture {
    std::string text;
    int code = 0;
};

capture run_captured(const std::vector<std::string>& args) {
    std::FILE* tmp = std::tmpfile();
    REQUIRE(tmp != nullptr);
    std::fflush(stdout);
    const int saved = dup(fileno(stdout));
    dup2(fileno(tmp), fileno(stdout));
    capture cap;
    cap.code = run_cli(args);
    std::fflush(stdout);
    dup2(saved, fileno(stdout));
    close(saved);
    std::fseek(tmp, 0, SEEK_SET);
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), tmp)) > 0) cap.text.append(buf, n);
    std::fclose(tmp);
    return cap;
}

}  // namespace

TEST_CASE("sieve subcommand emits the r2 table") {
    const capture cap = run_captured({"sieve", "--kind", "r2", "--max", "10"});
    CHECK(cap.code == 0);
    std::istringstream is(cap.text);
    std::string line;
    std::getline(is, line);
    CHECK(line == "n,value");
    std::getline(is, line);
    CHECK(line == "0,1");
    std::getline(is, line);
    CHECK(line == "1,4");
    int data_rows = 2;
    while (std::getline(is, line))
        if (!line.empty()) ++data_rows;
    CHECK(data_rows == 11);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli({"sieve", "--kind", "r2"}) == 2);              // missing --max
    CHECK(run_cli({"sieve", "--unknown-flag", "1"}) == 2);       // unknown flag
    CHECK(run_cli({"sieve", "--kind", "bogus", "--max", "5"}) == 2);
    CHECK(run_cli({}) == 2);                                     // no subcommand
}

TEST_CASE("sums run then fit round trip") {
    const std::string csv_path = "/tmp/shiftconv_test_sums.csv";
    CHECK(run_cli({"sums", "run", "--shift", "1", "--x-lo", "1000", "--x-hi", "100000",
                   "--per-decade", "8", "--out", csv_path}) == 0);
    std::ifstream in(csv_path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "X,re,im");
    in.close();

    const capture fit = run_captured({"sums", "fit", "--in", csv_path, "--model", "loglinear"});
    CHECK(fit.code == 0);
    CHECK(fit.text.find("fit_report_v1") != std::string::npos);
    std::remove(csv_path.c_str());
}

TEST_CASE("sums fit rejects a CSV without the X column") {
    const std::string bad_path = "/tmp/shiftconv_bad.csv";
    {
        std::ofstream out(bad_path);
        out << "t,re,im\n1,2,0\n2,3,0\n";
    }
    CHECK(run_cli({"sums", "fit", "--in", bad_path, "--model", "loglinear"}) == 2);
    std::remove(bad_path.c_str());
}

TEST_CASE("series compare emits the declared CSV schema") {
    const capture cap = run_captured({"series", "compare", "--n", "20000"});
    CHECK(cap.code == 0);
    std::istringstream is(cap.text);
    std::string header;
    std::getline(is, header);
    CHECK(header == "re_s,im_s,re_w,im_w,closed_re,closed_im,trunc_re,trunc_im,tail_bound,pass");
    int rows = 0, passes = 0;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        ++rows;
        if (line.size() >= 2 && line.substr(line.size() - 2) == ",1") ++passes;
    }
    CHECK(rows == 12);
    CHECK(passes == rows);  // certificates hold even at modest N
}

TEST_CASE("special eval prints value and error estimate") {
    const capture cap =
        run_captured({"special", "eval", "--fn", "zeta", "--re", "2", "--im", "0"});
    CHECK(cap.code == 0);
    CHECK(cap.text.find("value_re = 1.64493406684822") != std::string::npos);
    CHECK(cap.text.find("abs_error_estimate") != std::string::npos);
    CHECK(run_cli({"special", "eval", "--fn", "nope"}) == 2);
}

TEST_CASE("verify quick suites pass and report JSON") {
    const std::string out_path = "/tmp/shiftconv_verify.json";
    CHECK(run_cli({"verify", "arith", "--level", "quick", "--out", out_path}) == 0);
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    CHECK(text.find("\"identities\"") != std::string::npos);
    CHECK(text.find("\"summary\"") != std::string::npos);
    CHECK(text.find("\"all_pass\": true") != std::string::npos);
    CHECK(text.find("paper_anchor") != std::string::npos);
    std::remove(out_path.c_str());
}

TEST_CASE("modular verify quick passes") {
    const capture cap = run_captured({"modular", "verify", "--level", "quick"});
    CHECK(cap.code == 0);
    CHECK(cap.text.find("modular.decomposition_residual") != std::string::npos);
}

TEST_CASE("config file plumbs through and bad config is a usage error") {
    const std::string cfg_path = "/tmp/shiftconv_test.cfg";
    {
        std::ofstream out(cfg_path);
        out << "# comment line\nworkers = 1\nmemory_budget = 100000000\n";
    }
    CHECK(run_cli({"--config", cfg_path, "sieve", "--kind", "d", "--max", "10"}) == 0);
    {
        std::ofstream out(cfg_path);
        out << "unknown_key = 3\n";
    }
    CHECK(run_cli({"--config", cfg_path, "sieve", "--kind", "d", "--max", "10"}) == 2);
    std::remove(cfg_path.c_str());
}

TEST_CASE("deterministic output across repeated runs") {
    const capture a = run_captured({"sieve", "--kind", "sigma", "--max", "50", "--nu-re", "-0.4"});
    const capture b = run_captured({"sieve", "--kind", "sigma", "--max", "50", "--nu-re", "-0.4"});
    CHECK(a.code == 0);
    CHECK(a.text == b.text);
}
