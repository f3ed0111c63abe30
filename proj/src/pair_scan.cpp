#include "pair_scan.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include "holonorm/error.hpp"
#include "holonorm/parallel.hpp"

namespace holonorm::detail {

namespace {

constexpr std::uint64_t kSampleBlock = 4096;

struct Best {
    bool found = false;
    double value = 0.0;
    double numerator = 0.0;
    double denominator = 1.0;
    std::uint64_t id = 0;
    std::size_t base = 0;
    Offset offset{};

    // Larger value wins; ties go to the earlier (id, base) so the result does
    // not depend on how tasks were spread over workers.
    bool beats(const Best& other) const {
        if (!found) return false;
        if (!other.found) return true;
        if (value != other.value) return value > other.value;
        if (id != other.id) return id < other.id;
        return base < other.base;
    }
};

struct Geometry {
    std::size_t axes = 0;
    std::array<std::int64_t, kMaxAxes> extent{};
    std::array<std::int64_t, kMaxAxes> stride{};
    std::array<std::int64_t, kMaxAxes> max_offset{};
    int order = 1;
};

Geometry geometry_of(const ScanSpec& spec) {
    Geometry g;
    const GridFunction& u = *spec.grid;
    g.axes = u.axes();
    g.order = spec.stencil->span();
    for (std::size_t a = 0; a < g.axes; ++a) {
        g.extent[a] = static_cast<std::int64_t>(u.extent(a));
        g.stride[a] = u.stride(a);
        g.max_offset[a] = spec.active[a] ? (g.extent[a] - 1) / g.order : 0;
    }
    return g;
}

bool canonical(const Offset& d, std::size_t axes) {
    for (std::size_t a = axes; a-- > 0;) {
        if (d[a] != 0) return d[a] > 0;
    }
    return false;  // zero offset
}

bool is_zero(const Offset& d, std::size_t axes) {
    for (std::size_t a = 0; a < axes; ++a)
        if (d[a] != 0) return false;
    return true;
}

struct NodeBox {
    std::array<std::int64_t, kMaxAxes> lo{};
    std::array<std::int64_t, kMaxAxes> hi{};
    std::int64_t step = 0;
    std::uint64_t count = 1;
};

NodeBox box_for(const Geometry& g, const Offset& d) {
    NodeBox b;
    for (std::size_t a = 0; a < g.axes; ++a) {
        const std::int64_t reach = g.order * d[a];
        b.lo[a] = std::max<std::int64_t>(0, -reach);
        b.hi[a] = g.extent[a] - 1 - std::max<std::int64_t>(0, reach);
        b.step += d[a] * g.stride[a];
        b.count *= static_cast<std::uint64_t>(std::max<std::int64_t>(0, b.hi[a] - b.lo[a] + 1));
    }
    return b;
}

/// Visits every base node of the box for offset d, updating `best`.
void scan_offset(const ScanSpec& spec, const Geometry& g, const Offset& d, std::uint64_t id, Best& best) {
    const NodeBox box = box_for(g, d);
    if (box.count == 0) return;
    const double den = spec.denominator(d);
    const double* field = spec.field.data();
    const Stencil& stencil = *spec.stencil;

    std::array<std::int64_t, kMaxAxes> idx = box.lo;
    for (;;) {
        std::int64_t row = 0;
        for (std::size_t a = 1; a < g.axes; ++a) row += idx[a] * g.stride[a];
        for (std::int64_t i0 = box.lo[0]; i0 <= box.hi[0]; ++i0) {
            const std::int64_t base = row + i0;
            const double num = std::abs(stencil.apply(field + base, box.step));
            const double q = num / den;
            if (!best.found || q > best.value) {
                best.found = true;
                best.value = q;
                best.numerator = num;
                best.denominator = den;
                best.id = id;
                best.base = static_cast<std::size_t>(base);
                best.offset = d;
            }
        }
        std::size_t a = 1;
        for (; a < g.axes; ++a) {
            if (++idx[a] <= box.hi[a]) break;
            idx[a] = box.lo[a];
        }
        if (a >= g.axes) break;
    }
}

Best reduce(const std::vector<Best>& per_worker) {
    Best out;
    for (const Best& b : per_worker)
        if (b.beats(out)) out = b;
    return out;
}

ScanResult finish(const Best& best, std::uint64_t pairs, Sampling sampling) {
    ScanResult r;
    r.found = best.found;
    r.value = best.value;
    r.numerator = best.numerator;
    r.denominator = best.denominator;
    r.base = best.base;
    r.offset = best.offset;
    r.pairs = pairs;
    r.sampling = sampling;
    return r;
}

ScanResult scan_exhaustive(const ScanSpec& spec, const Geometry& g, unsigned threads) {
    std::array<std::int64_t, kMaxAxes> radix{};
    std::uint64_t ids = 1;
    for (std::size_t a = 0; a < g.axes; ++a) {
        radix[a] = 2 * g.max_offset[a] + 1;
        ids *= static_cast<std::uint64_t>(radix[a]);
    }
    const std::uint64_t chunk = 256;
    const std::uint64_t tasks = (ids + chunk - 1) / chunk;
    std::vector<Best> best(std::max(1u, threads));
    std::vector<std::uint64_t> pairs(best.size(), 0);

    parallel_for(tasks, threads, [&](std::size_t task, unsigned worker) {
        const std::uint64_t begin = task * chunk;
        const std::uint64_t end = std::min(ids, begin + chunk);
        for (std::uint64_t id = begin; id < end; ++id) {
            Offset d{};
            std::uint64_t rest = id;
            for (std::size_t a = 0; a < g.axes; ++a) {
                d[a] = static_cast<std::int64_t>(rest % static_cast<std::uint64_t>(radix[a])) - g.max_offset[a];
                rest /= static_cast<std::uint64_t>(radix[a]);
            }
            if (is_zero(d, g.axes)) continue;
            if (spec.half_space && !canonical(d, g.axes)) continue;
            pairs[worker] += box_for(g, d).count;
            scan_offset(spec, g, d, id, best[worker]);
        }
    });

    std::uint64_t total = 0;
    for (auto p : pairs) total += p;
    return finish(reduce(best), total, Sampling{true, 0, 0});
}

ScanResult scan_sampled(const ScanSpec& spec, const Geometry& g, const ScanOptions& opts, unsigned threads) {
    // every nearest-neighbour offset, scanned over all bases
    std::vector<Offset> neighbours;
    for (std::size_t a = 0; a < g.axes; ++a) {
        if (g.max_offset[a] < 1) continue;
        Offset d{};
        d[a] = 1;
        neighbours.push_back(d);
        if (!spec.half_space) {
            d[a] = -1;
            neighbours.push_back(d);
        }
    }
    std::vector<Best> best(std::max(1u, threads));
    std::vector<std::uint64_t> pairs(best.size(), 0);
    parallel_for(neighbours.size(), threads, [&](std::size_t i, unsigned worker) {
        pairs[worker] += box_for(g, neighbours[i]).count;
        scan_offset(spec, g, neighbours[i], i, best[worker]);
    });

    // seeded random pairs, cycling through separation bands [2^b, 2^(b+1))
    std::int64_t widest = 0;
    for (std::size_t a = 0; a < g.axes; ++a) widest = std::max(widest, g.max_offset[a]);
    const int bands = widest >= 1 ? std::bit_width(static_cast<std::uint64_t>(widest)) : 0;
    const std::uint64_t draws = bands > 0 ? opts.random_pairs : 0;
    const std::uint64_t blocks = (draws + kSampleBlock - 1) / kSampleBlock;
    const std::uint64_t id0 = neighbours.size();
    const double* field = spec.field.data();

    parallel_for(blocks, threads, [&](std::size_t block, unsigned worker) {
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                          static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
        std::mt19937_64 rng(seq);
        const std::uint64_t begin = block * kSampleBlock;
        const std::uint64_t end = std::min(draws, begin + kSampleBlock);
        std::vector<std::size_t> leads;
        for (std::uint64_t s = begin; s < end; ++s) {
            const int band = static_cast<int>(s % static_cast<std::uint64_t>(bands));
            const std::int64_t lo_mag = std::int64_t{1} << band;
            const std::int64_t hi_mag = (std::int64_t{1} << (band + 1)) - 1;
            leads.clear();
            for (std::size_t a = 0; a < g.axes; ++a)
                if (g.max_offset[a] >= lo_mag) leads.push_back(a);
            const std::size_t lead =
                leads[std::uniform_int_distribution<std::size_t>(0, leads.size() - 1)(rng)];
            Offset d{};
            for (std::size_t a = 0; a < g.axes; ++a) {
                if (a == lead) {
                    const std::int64_t mag =
                        std::uniform_int_distribution<std::int64_t>(lo_mag, std::min(hi_mag, g.max_offset[a]))(rng);
                    d[a] = std::uniform_int_distribution<int>(0, 1)(rng) ? mag : -mag;
                } else if (g.max_offset[a] > 0) {
                    const std::int64_t r = std::min(hi_mag, g.max_offset[a]);
                    d[a] = std::uniform_int_distribution<std::int64_t>(-r, r)(rng);
                }
            }
            if (spec.half_space && !canonical(d, g.axes))
                for (std::size_t a = 0; a < g.axes; ++a) d[a] = -d[a];
            const NodeBox box = box_for(g, d);
            std::int64_t base = 0;
            for (std::size_t a = 0; a < g.axes; ++a)
                base += std::uniform_int_distribution<std::int64_t>(box.lo[a], box.hi[a])(rng) * g.stride[a];

            const double num = std::abs(spec.stencil->apply(field + base, box.step));
            const double den = spec.denominator(d);
            Best cand{true, num / den, num, den, id0 + s, static_cast<std::size_t>(base), d};
            if (cand.beats(best[worker])) best[worker] = cand;
            ++pairs[worker];
        }
    });

    std::uint64_t total = 0;
    for (auto p : pairs) total += p;
    return finish(reduce(best), total, Sampling{false, opts.seed, draws});
}

}  // namespace

long double admissible_pairs(const ScanSpec& spec) {
    const Geometry g = geometry_of(spec);
    long double all = 1.0L;
    long double zero = 1.0L;
    for (std::size_t a = 0; a < g.axes; ++a) {
        long double s = 0.0L;
        for (std::int64_t d = -g.max_offset[a]; d <= g.max_offset[a]; ++d)
            s += static_cast<long double>(g.extent[a] - g.order * std::abs(d));
        all *= s;
        zero *= static_cast<long double>(g.extent[a]);
    }
    const long double pairs = all - zero;
    return spec.half_space ? pairs / 2.0L : pairs;
}

ScanResult scan_sup(const ScanSpec& spec, const ScanOptions& opts) {
    const Geometry g = geometry_of(spec);
    bool any = false;
    for (std::size_t a = 0; a < g.axes; ++a) any = any || g.max_offset[a] > 0;
    if (!any) return ScanResult{};
    const unsigned threads = resolve_threads(opts.threads);
    if (admissible_pairs(spec) <= static_cast<long double>(opts.exhaustive_limit))
        return scan_exhaustive(spec, g, threads);
    return scan_sampled(spec, g, opts, threads);
}

LatticeShift to_shift(const GridFunction& grid, const Offset& d) {
    LatticeShift s;
    s.space.assign(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(grid.dim()));
    s.time = d[grid.dim()];
    return s;
}

}  // namespace holonorm::detail
