#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "symchain/time_grid.hpp"

namespace symchain::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success, 2 invalid input, 3 a numerical invariant failed.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct RunSpec {
    std::string command;
    std::optional<std::filesystem::path> input;
    std::filesystem::path output_dir = ".";

    double t_max = 5.0;
    int steps = 500;

    double tol = 1e-10;         // uniformization / comparison tolerance
    double quad_tol = 1e-10;    // closed-form time integrals
    double series_tol = 1e-12;  // closed-form series truncation

    long long paths = 100000;
    std::uint64_t seed = 20240614;

    std::optional<double> lambda;
    std::optional<double> mu;
    std::optional<double> alpha;
    std::optional<double> eta;
    std::optional<int> k;
    std::optional<int> n;
    std::optional<int> window;  // half-width M, meaning [-M, M]

    bool json_errors = false;

    TimeGrid grid() const { return TimeGrid(t_max, steps); }
};

// Dispatches one command, writing artifacts plus a manifest.json into
// output_dir. Exceptions are mapped onto the exit-code taxonomy.
int run(const RunSpec& spec);

// Deterministic trace comparison: {max_abs_diff, argmax_t, pass}.
nlohmann::json compare_report(const DensityTrace& a, const DensityTrace& b, double tol);

// Full command-line entry point (parses argv into a RunSpec).
int main_entry(int argc, char** argv);

}  // namespace symchain::cli
