#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holonorm/grid.hpp"
#include "holonorm/interp.hpp"

namespace holonorm {

enum class FamilyKind {
    Trig,   // sum a_j sin(w_j . x + phi_j) exp(-mu_j t)
    Bump,   // sum a_j prod_i max(0, 1 - ((x_i - c_ji)/w_ji)^2)^4 exp(-mu_j t)
    Rough,  // sum a_j |x - c_j|^gamma_j exp(-mu_j t)
};

std::string to_string(FamilyKind kind);
FamilyKind parse_family(std::string_view text);

struct ParamBounds {
    double lo = 0.0;
    double hi = 1.0;
};

/**
 * A parametrized function family. Centres and widths are fractions of the
 * box edge; frequencies are angular. An unset `gamma` range defaults to
 * [frac(l2), frac(l2) + 1].
 */
struct Family {
    FamilyKind kind = FamilyKind::Trig;
    std::size_t terms = 3;
    ParamBounds amplitude{-1.0, 1.0};
    ParamBounds frequency{1.0, 16.0};
    ParamBounds phase{0.0, 6.283185307179586};
    ParamBounds decay{0.0, 4.0};
    ParamBounds center{0.0, 1.0};
    ParamBounds width{0.05, 0.5};
    std::optional<ParamBounds> gamma;

    void validate() const;
};

struct ParamInfo {
    std::string name;
    ParamBounds bounds;
};

/// Named coordinates of a member's parameter vector.
std::vector<ParamInfo> param_layout(const Family& family, const InterpSpec& spec);

/// Expression text of the member with parameters `params` on `domain`; an
/// empty domain means the unit box of the InterpSpec's geometry.
std::string member_expression(const Family& family, const InterpSpec& spec, const Domain& domain,
                              const std::vector<double>& params);

struct SearchOptions {
    Domain domain;  // defaults to the unit box of the InterpSpec's geometry
    std::size_t resolution = 128;
    std::size_t time_resolution = 0;  // 0: same as resolution
    bool include_constant_probe = false;
    double amplitude_tolerance = 1e-8;
    int max_resamples = 16;
    CheckOptions check;
};

struct SearchResult {
    InterpSpec spec;
    Family family;
    SearchOptions options;
    std::uint64_t seed = 0;
    std::uint64_t evaluations = 0;
    std::uint64_t violations = 0;

    double best_ratio = 0.0;
    std::string best_expression;
    std::vector<double> best_params;  // empty when the constant probe wins

    // best family member: the starting point for refinement
    double member_ratio = 0.0;
    std::string member_expression;
    std::vector<double> member_params;

    std::optional<double> constant_probe_ratio;
    std::vector<double> history;  // running best after each evaluation
};

/// The grid the search evaluates on.
GridFunction sample_expression(const std::string& text, const InterpSpec& spec, const SearchOptions& options);

/// Ratio of `check` on a member; nullopt on violation or a degenerate member.
std::optional<double> evaluate_expression(const std::string& text, const InterpSpec& spec,
                                          const SearchOptions& options);

SearchResult random_search(const InterpSpec& spec, const Family& family, std::uint64_t budget, std::uint64_t seed,
                           const SearchOptions& options = {});

/// Coordinate-wise hill climbing from the best family member; only improvements are accepted.
SearchResult refine_search(const SearchResult& start, std::uint64_t steps, double step_scale, std::uint64_t seed);

}  // namespace holonorm
