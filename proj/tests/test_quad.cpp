#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ddc/quad.hpp"

using ddc::quad_gk;
using ddc::quad_gk_segmented;

TEST_CASE("polynomials and exponentials are exact") {
    CHECK(quad_gk([](double x) { return x * x; }, 0.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(quad_gk([](double x) { return std::exp(-x); }, 0.0, 40.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(quad_gk([](double x) { return std::sin(x); }, 0.0, M_PI) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("empty and reversed-degenerate intervals") {
    CHECK(quad_gk([](double x) { return x; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("kinked integrands need the segmented entry point") {
    const auto f = [](double x) { return std::abs(x - 0.5); };
    const double v = quad_gk_segmented(f, 0.0, 1.0, {0.5}, 1e-12, 1e-12);
    CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
    // breakpoints outside the range are ignored
    const double w = quad_gk_segmented(f, 0.0, 0.25, {0.5, -3.0, 9.0}, 1e-12, 1e-12);
    CHECK(w == doctest::Approx(0.25 * 0.375).epsilon(1e-12));
}

TEST_CASE("rapidly decaying tail") {
    const double v = quad_gk([](double x) { return std::exp(-2.5 * x) * x; }, 0.0, 30.0, 1e-12, 1e-12);
    CHECK(v == doctest::Approx(1.0 / 6.25).epsilon(1e-11));
}
