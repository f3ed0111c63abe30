#include "cli_commands.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "holonorm/csv_grid.hpp"
#include "holonorm/error.hpp"
#include "holonorm/expr.hpp"
#include "holonorm/interp.hpp"
#include "holonorm/report_json.hpp"
#include "holonorm/search.hpp"

#include <unistd.h>

namespace holonorm::cli {

using nlohmann::json;

ScanOptions ScanFlags::options() const {
    ScanOptions o;
    o.seed = seed;
    o.exhaustive_limit = exhaustive_limit;
    o.random_pairs = random_pairs;
    o.threads = threads;
    return o;
}

namespace {

// ---- options ---------------------------------------------------------------

void add_scan(CLI::App& app, ScanFlags& s, const std::string& seed_flag = "--seed") {
    app.add_option(seed_flag, s.seed, "Seed for sampled pair scans")->capture_default_str();
    app.add_option("--exhaustive-limit", s.exhaustive_limit, "Largest pair count scanned exhaustively")
        ->capture_default_str();
    app.add_option("--random-pairs", s.random_pairs, "Random pairs drawn when sampling")->capture_default_str();
    app.add_option("--threads", s.threads, "Worker threads (0: automatic)")->capture_default_str();
}

void add_grid(CLI::App& app, GridFlags& g) {
    auto* e = app.add_option("--expr", g.expr, "Function of x1..xN and t");
    auto* c = app.add_option("--csv", g.csv, "Grid function CSV file (header x1,...,xN[,t],u)");
    e->excludes(c);
    app.add_option("--box", g.box, "Spatial box: lo,hi for all axes or per axis")->delimiter(',');
    app.add_option("--T", g.T, "Time horizon; 0 for a purely spatial grid");
    app.add_option("--res", g.res, "Spatial steps per axis")->capture_default_str();
    app.add_option("--tres", g.tres, "Time steps (default: --res)");
}

void add_spec(CLI::App& app, SpecFlags& s) {
    app.add_option("--variant", s.variant, "2.1, 2.2, 2.3.1, 2.3.3, 2.10, 2.10.1 or 2.11")->capture_default_str();
    app.add_option("--l1", s.l1, "Lower index")->capture_default_str();
    app.add_option("--l", s.l, "Intermediate index (2.1, 2.2)")->capture_default_str();
    app.add_option("--l2", s.l2, "Upper index, noninteger")->capture_default_str();
    app.add_option("--p", s.p, "Lebesgue exponent")->capture_default_str();
    app.add_option("--N,--dim", s.N, "Spatial dimension")->capture_default_str();
}

// ---- helpers ---------------------------------------------------------------

std::string number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Writes through a temporary file in the same directory, then renames it into place.
void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw InputError("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw InputError("cannot move output into place at " + path + ": " + ec.message());
    }
}

json envelope(const std::string& command, json config, std::uint64_t seed, json result) {
    return json{{"tool", {{"name", "holonorm"}, {"version", HOLONORM_VERSION}}},
                {"command", command},
                {"config", std::move(config)},
                {"seed", seed},
                {"timestamp", timestamp()},
                {"result", std::move(result)}};
}

/// "out/report.json" -> "out/report" + suffix
std::string sibling(const std::string& path, const std::string& suffix) {
    std::filesystem::path p(path.empty() || path == "-" ? "check" : path);
    const std::filesystem::path stem = p.parent_path() / p.stem();
    return stem.string() + suffix;
}

Domain make_domain(const std::vector<double>& box, std::size_t dim, double T) {
    Domain d = Domain::unit_box(dim, T);
    if (box.empty()) return d;
    if (box.size() == 2) {
        for (std::size_t a = 0; a < dim; ++a) {
            d.lower[a] = box[0];
            d.upper[a] = box[1];
        }
    } else if (box.size() == 2 * dim) {
        for (std::size_t a = 0; a < dim; ++a) {
            d.lower[a] = box[2 * a];
            d.upper[a] = box[2 * a + 1];
        }
    } else {
        throw InputError("--box needs 2 or " + std::to_string(2 * dim) + " numbers, got " + std::to_string(box.size()));
    }
    d.validate();
    return d;
}

GridFunction load_grid(const GridFlags& g, std::size_t dim, double default_T, std::size_t res) {
    if (!g.csv.empty()) {
        GridFunction u = read_grid_csv_file(g.csv);
        if (u.dim() != dim)
            throw InputError("CSV grid has dimension " + std::to_string(u.dim()) + " but " + std::to_string(dim) +
                             " was requested");
        return u;
    }
    if (g.expr.empty()) throw InputError("give either --expr or --csv");
    const double T = g.T.value_or(default_T);
    const Domain domain = make_domain(g.box, dim, T);
    const std::size_t tres = domain.is_parabolic() ? g.tres.value_or(res) : 0;
    const expr::Expr e = expr::Expr::parse(g.expr, dim);
    return make_grid_function(domain, Resolution::uniform(dim, res, tres),
                              [&](std::span<const double> x, double t) { return e(x, t); });
}

json grid_config(const GridFlags& g, std::size_t res) {
    json j;
    if (!g.csv.empty()) {
        j["csv"] = g.csv;
        return j;
    }
    j["expr"] = g.expr;
    j["box"] = g.box;
    j["T"] = g.T ? json(*g.T) : json(nullptr);
    j["res"] = res;
    j["tres"] = g.tres ? json(*g.tres) : json(nullptr);
    return j;
}

json scan_config(const ScanFlags& s) {
    return json{{"seed", s.seed},
                {"exhaustive_limit", s.exhaustive_limit},
                {"random_pairs", s.random_pairs},
                {"threads", s.threads}};
}

json spec_config(const SpecFlags& s) {
    return json{{"variant", s.variant}, {"l1", s.l1}, {"l", s.l}, {"l2", s.l2}, {"p", s.p}, {"N", s.N}};
}

InterpSpec to_spec(const SpecFlags& s) {
    InterpSpec spec;
    spec.variant = parse_variant(s.variant);
    spec.l1 = s.l1;
    spec.l = s.l;
    spec.l2 = s.l2;
    spec.p = s.p;
    spec.N = s.N;
    spec.validate();
    return spec;
}

HighNorm parse_high(const std::string& s) {
    if (s == "full") return HighNorm::Full;
    if (s == "seminorm") return HighNorm::Seminorm;
    throw InputError("--high-norm must be full or seminorm, got '" + s + "'");
}

MultiIndex beta_of(const std::vector<int>& beta, std::size_t dim) {
    if (beta.empty()) return MultiIndex{std::vector<int>(dim, 0)};
    if (beta.size() != dim)
        throw InputError("--beta needs " + std::to_string(dim) + " entries, got " + std::to_string(beta.size()));
    for (int b : beta)
        if (b < 0) throw InputError("--beta entries must be nonnegative");
    return MultiIndex{beta};
}

}  // namespace

// ---- norm ------------------------------------------------------------------

void add_norm_options(CLI::App& app, NormFlags& f) {
    add_grid(app, f.grid);
    add_scan(app, f.scan);
    app.add_option("--dim", f.dim, "Spatial dimension")->capture_default_str();
    app.add_option("--kind", f.kind,
                   "sup, lp, sup_t_lp, holder, holder_norm, holder_space, holder_time, parabolic, elliptic or diffq")
        ->capture_default_str();
    app.add_option("--l", f.l, "Hoelder index")->capture_default_str();
    app.add_option("--p", f.p, "Lebesgue exponent")->capture_default_str();
    app.add_option("--alpha", f.alpha, "Spatial Hoelder exponent (holder_space)")->capture_default_str();
    app.add_option("--exponent", f.exponent, "Temporal Hoelder exponent (holder_time)")->capture_default_str();
    app.add_option("--beta", f.beta, "Spatial derivative multi-index, comma separated")->delimiter(',');
    app.add_option("--lt", f.lt, "Time derivative order")->capture_default_str();
    app.add_option("--k", f.k, "Difference order (diffq; default floor(l)+1)");
    app.add_option("--kt", f.kt, "Temporal difference order (diffq split; default floor(l/2)+1)");
    app.add_option("--form", f.form, "joint or split (diffq)")->capture_default_str();
    app.add_option("--out", f.out, "Report path (default: standard output)");
}

int run_norm(const NormFlags& f) {
    const GridFunction u = load_grid(f.grid, f.dim, 0.0, f.grid.res);
    const ScanOptions scan = f.scan.options();
    NormReport rep;
    const std::string& k = f.kind;
    if (k == "sup") {
        rep = sup_norm(u);
    } else if (k == "lp") {
        rep = lp_norm(u, f.p);
    } else if (k == "sup_t_lp") {
        rep = sup_t_lp_norm(u, f.p);
    } else if (k == "holder") {
        rep = holder_seminorm(u, HoelderIndex::noninteger(f.l), scan);
    } else if (k == "holder_norm") {
        rep = holder_norm(u, HoelderIndex::of(f.l), scan);
    } else if (k == "parabolic") {
        rep = parabolic_norm(u, HoelderIndex::noninteger(f.l), scan);
    } else if (k == "elliptic") {
        rep = elliptic_norm(u, HoelderIndex::noninteger(f.l), scan);
    } else if (k == "holder_space") {
        rep = holder_seminorm_space(u, f.alpha, beta_of(f.beta, u.dim()), f.lt, scan);
    } else if (k == "holder_time") {
        rep = holder_seminorm_time(u, f.exponent, beta_of(f.beta, u.dim()), f.lt, scan);
    } else if (k == "diffq") {
        const HoelderIndex l = HoelderIndex::noninteger(f.l);
        DiffSeminormSpec spec = DiffSeminormSpec::defaults(l);
        if (f.k) spec.k = *f.k;
        if (f.kt) spec.l_t = *f.kt;
        DiffForm form;
        if (f.form == "joint") {
            form = DiffForm::Joint;
        } else if (f.form == "split") {
            form = DiffForm::Split;
        } else {
            throw InputError("--form must be joint or split, got '" + f.form + "'");
        }
        rep = diff_quotient_seminorm(u, l, spec, form, scan);
    } else {
        throw InputError("unknown --kind '" + k + "'");
    }

    json config = grid_config(f.grid, f.grid.res);
    config["dim"] = f.dim;
    config["kind"] = f.kind;
    config["l"] = f.l;
    config["p"] = f.p;
    config["alpha"] = f.alpha;
    config["exponent"] = f.exponent;
    config["beta"] = f.beta;
    config["lt"] = f.lt;
    config["k"] = f.k ? json(*f.k) : json(nullptr);
    config["kt"] = f.kt ? json(*f.kt) : json(nullptr);
    config["form"] = f.form;
    config["scan"] = scan_config(f.scan);
    json result = to_json(rep);
    result["resolution"] = to_json(u.resolution());
    result["domain"] = to_json(u.domain());
    write_output(f.out, envelope("norm", std::move(config), f.scan.seed, std::move(result)).dump(2) + "\n");
    return 0;
}

// ---- check -----------------------------------------------------------------

void add_check_options(CLI::App& app, CheckFlags& f) {
    add_spec(app, f.spec);
    add_grid(app, f.grid);
    add_scan(app, f.scan);
    app.add_option("--high-norm", f.high, "full or seminorm")->capture_default_str();
    app.add_option("--omega", f.omega, "Replace the variant's exponent");
    app.add_option("--sweep", f.sweep, "Resolutions to run, comma separated")->delimiter(',');
    app.add_option("--out", f.out, "Report path; with --sweep, the prefix for per-resolution reports");
}

int run_check(const CheckFlags& f) {
    const InterpSpec spec = to_spec(f.spec);
    CheckOptions opts;
    opts.high = parse_high(f.high);
    opts.exponent_override = f.omega;
    opts.scan = f.scan.options();
    const double default_T = is_parabolic(spec.variant) ? 1.0 : 0.0;
    if (!f.sweep.empty() && !f.grid.csv.empty()) throw InputError("--sweep needs --expr, not --csv");

    auto config_for = [&](std::size_t res) {
        json c = spec_config(f.spec);
        c["grid"] = grid_config(f.grid, res);
        c["high_norm"] = f.high;
        c["omega"] = f.omega ? json(*f.omega) : json(nullptr);
        c["sweep"] = f.sweep;
        c["scan"] = scan_config(f.scan);
        return c;
    };

    bool violation = false;
    if (f.sweep.empty()) {
        const CheckReport rep = check(spec, load_grid(f.grid, spec.N, default_T, f.grid.res), opts);
        violation = rep.status == CheckStatus::Violation;
        write_output(f.out, envelope("check", config_for(f.grid.res), f.scan.seed, to_json(rep)).dump(2) + "\n");
    } else {
        std::ostringstream csv;
        csv << "resolution,ratio\n";
        for (std::size_t res : f.sweep) {
            const CheckReport rep = check(spec, load_grid(f.grid, spec.N, default_T, res), opts);
            violation = violation || rep.status == CheckStatus::Violation;
            const std::string path = sibling(f.out, "_r" + std::to_string(res) + ".json");
            write_output(path, envelope("check", config_for(res), f.scan.seed, to_json(rep)).dump(2) + "\n");
            csv << res << "," << (rep.ratio ? number(*rep.ratio) : "") << "\n";
        }
        write_output(sibling(f.out, "_sweep.csv"), csv.str());
        std::cout << csv.str();
    }
    if (violation) std::cerr << "holonorm: inequality violation flagged\n";
    return violation ? 1 : 0;
}

// ---- search ----------------------------------------------------------------

void add_search_options(CLI::App& app, SearchFlags& f) {
    add_spec(app, f.spec);
    add_scan(app, f.scan, "--scan-seed");
    app.add_option("--seed", f.seed, "Search seed")->capture_default_str();
    app.add_option("--family", f.family, "trig, bump or rough")->capture_default_str();
    app.add_option("--terms", f.terms, "Terms per family member")->capture_default_str();
    app.add_option("--budget", f.budget, "Random members to evaluate")->capture_default_str();
    app.add_option("--box", f.box, "Spatial box: lo,hi for all axes or per axis")->delimiter(',');
    app.add_option("--res", f.res, "Spatial steps per axis")->capture_default_str();
    app.add_option("--tres", f.tres, "Time steps (default: --res)");
    app.add_option("--refine-steps", f.refine_steps, "Hill-climbing steps after the random phase")
        ->capture_default_str();
    app.add_option("--step-scale", f.step_scale, "Perturbation size relative to each parameter range")
        ->capture_default_str();
    app.add_option("--high-norm", f.high, "full or seminorm")->capture_default_str();
    app.add_option("--out", f.out, "Result path (default: standard output)");
    app.add_option("--history", f.history, "History CSV path (default: next to --out)");
}

int run_search(const SearchFlags& f) {
    const InterpSpec spec = to_spec(f.spec);
    Family family;
    family.kind = parse_family(f.family);
    family.terms = f.terms;

    SearchOptions opts;
    opts.domain = make_domain(f.box, spec.N, is_parabolic(spec.variant) ? 1.0 : 0.0);
    opts.resolution = f.res;
    opts.time_resolution = f.tres.value_or(0);
    opts.include_constant_probe = true;
    opts.check.high = parse_high(f.high);
    opts.check.scan = f.scan.options();

    SearchResult r = random_search(spec, family, f.budget, f.seed, opts);
    if (f.refine_steps > 0) r = refine_search(r, f.refine_steps, f.step_scale, f.seed);

    json config = spec_config(f.spec);
    config["family"] = f.family;
    config["terms"] = f.terms;
    config["budget"] = f.budget;
    config["box"] = f.box;
    config["res"] = f.res;
    config["tres"] = f.tres ? json(*f.tres) : json(nullptr);
    config["refine_steps"] = f.refine_steps;
    config["step_scale"] = f.step_scale;
    config["high_norm"] = f.high;
    config["scan"] = scan_config(f.scan);

    std::ostringstream hist;
    hist << "iteration,best_ratio\n";
    for (std::size_t i = 0; i < r.history.size(); ++i) hist << i << "," << number(r.history[i]) << "\n";
    const std::string history_path =
        !f.history.empty() ? f.history : (f.out.empty() || f.out == "-" ? "" : sibling(f.out, "_history.csv"));

    json result = to_json(r);
    result["history_csv"] = history_path.empty() ? json(nullptr) : json(history_path);
    write_output(f.out, envelope("search", std::move(config), f.seed, std::move(result)).dump(2) + "\n");
    if (!history_path.empty()) write_output(history_path, hist.str());
    if (r.violations > 0) std::cerr << "holonorm: inequality violation flagged on " << r.violations << " members\n";
    return r.violations > 0 ? 1 : 0;
}

}  // namespace holonorm::cli
