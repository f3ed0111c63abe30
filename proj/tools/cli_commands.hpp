#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holonorm/norms.hpp"

namespace holonorm::cli {

struct ScanFlags {
    std::uint64_t seed = 0x5eed;
    std::uint64_t exhaustive_limit = 10'000'000;
    std::uint64_t random_pairs = 1'000'000;
    unsigned threads = 0;

    ScanOptions options() const;
};

/// Where the grid function comes from: an expression on a box, or a CSV file.
struct GridFlags {
    std::string expr;
    std::string csv;
    std::vector<double> box;  // lo,hi for every axis, or one pair for all
    std::optional<double> T;
    std::size_t res = 64;
    std::optional<std::size_t> tres;
};

struct SpecFlags {
    std::string variant = "2.3.1";
    double l1 = 0.0;
    double l = 0.0;
    double l2 = 1.5;
    double p = 2.0;
    std::size_t N = 1;
};

struct NormFlags {
    GridFlags grid;
    ScanFlags scan;
    std::size_t dim = 1;
    std::string kind = "sup";
    double l = 0.5;
    double p = 2.0;
    double alpha = 0.5;
    double exponent = 0.5;
    std::vector<int> beta;
    int lt = 0;
    std::optional<int> k;
    std::optional<int> kt;
    std::string form = "joint";
    std::string out;
};

struct CheckFlags {
    SpecFlags spec;
    GridFlags grid;
    ScanFlags scan;
    std::string high = "full";
    std::optional<double> omega;
    std::vector<std::size_t> sweep;
    std::string out;
};

struct SearchFlags {
    SpecFlags spec;
    ScanFlags scan;
    std::string family = "trig";
    std::size_t terms = 3;
    std::uint64_t budget = 200;
    std::uint64_t seed = 1;
    std::vector<double> box;
    std::size_t res = 128;
    std::optional<std::size_t> tres;
    std::uint64_t refine_steps = 0;
    double step_scale = 0.1;
    std::string high = "full";
    std::string out;
    std::string history;
};

void add_norm_options(CLI::App& app, NormFlags& f);
void add_check_options(CLI::App& app, CheckFlags& f);
void add_search_options(CLI::App& app, SearchFlags& f);

/// Each returns the process exit code: 0 success, 1 violation flagged.
/// Input problems throw InputError.
int run_norm(const NormFlags& f);
int run_check(const CheckFlags& f);
int run_search(const SearchFlags& f);

}  // namespace holonorm::cli
