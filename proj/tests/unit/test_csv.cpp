#include <doctest.h>

#include <cmath>
#include <sstream>

#include "holonorm/csv_grid.hpp"
#include "holonorm/error.hpp"

using namespace holonorm;

namespace {

std::string error_of(const std::string& text) {
    std::istringstream in(text);
    try {
        read_grid_csv(in);
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("CSV round trip") {
    const GridFunction u = make_grid_function(Domain{{-1.0, 0.0}, {1.0, 0.5}, 2.0}, Resolution{{4, 2}, 3},
                                              [](std::span<const double> x, double t) {
                                                  return std::sin(x[0]) * x[1] + t / 3.0;
                                              });
    std::ostringstream out;
    write_grid_csv(out, u);
    std::istringstream in(out.str());
    const GridFunction v = read_grid_csv(in);
    CHECK(v.resolution().spatial_steps == u.resolution().spatial_steps);
    CHECK(v.resolution().time_steps == 3);
    CHECK(v.domain().lower == u.domain().lower);
    CHECK(v.domain().T == 2.0);
    CHECK(std::equal(v.values().begin(), v.values().end(), u.values().begin()));
}

TEST_CASE("CSV elliptic, shuffled rows") {
    std::istringstream in("x1,u\n0.5,2\n0,1\n1,3\n");
    const GridFunction u = read_grid_csv(in);
    CHECK_FALSE(u.is_parabolic());
    CHECK(u.size() == 3);
    CHECK(u.values()[0] == 1.0);
    CHECK(u.values()[2] == 3.0);
}

TEST_CASE("CSV errors name the line") {
    CHECK(error_of("x1,u\n0,1\n0.5,abc\n1,2\n").find("line 3") != std::string::npos);
    CHECK(error_of("x1,u\n0,1\n0.5\n1,2\n").find("line 3") != std::string::npos);
    CHECK(error_of("x1,u\n0,1\n0.4,2\n1,2\n").find("line") != std::string::npos);  // irregular spacing
    CHECK(error_of("x1,u\n0,1\n0,2\n1,2\n").find("line") != std::string::npos);    // duplicate node
    CHECK_FALSE(error_of("x1,t,u\n0,0,1\n1,0,1\n0,1,1\n").empty());                // missing node
    CHECK_FALSE(error_of("y,u\n0,1\n").empty());                                   // bad header
    CHECK_FALSE(error_of("").empty());
    CHECK_FALSE(error_of("x1,u\n0,1\n1,nan\n").empty());
}
