#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "oracle.hpp"
#include "polypair/measures.hpp"

using namespace polypair;

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);
} // namespace

TEST_CASE("measure factories validate their parameters", "[measures]") {
    CHECK_THROWS_AS(Measure::uniform_disk({0.0, 0.0}, 0.0), ArgumentError);
    CHECK_THROWS_AS(Measure::uniform_disk({0.0, 0.0}, -1.0), ArgumentError);
    const double nan = std::nan("");
    CHECK_THROWS_AS(Measure::uniform_disk({nan, 0.0}, 1.0), ArgumentError);
    CHECK_THROWS_AS(Measure::empirical({}), ArgumentError);
    CHECK_THROWS_AS(Measure::empirical({{0.0, 0.0}, {nan, 1.0}}), ArgumentError);
}

TEST_CASE("kind names and density availability", "[measures]") {
    CHECK(Measure::uniform_disk({0, 0}, 1.0).kind_name() == "uniform-disk");
    CHECK(Measure::two_disks().kind_name() == "two-disks");
    CHECK(Measure::complex_gaussian().kind_name() == "gaussian");
    CHECK(Measure::unit_circle().kind_name() == "unit-circle");
    CHECK(Measure::uniform_disk({0, 0}, 1.0).has_density());
    CHECK_FALSE(Measure::unit_circle().has_density());
    CHECK_FALSE(Measure::empirical({{0, 0}, {1, 0}}).has_density());
}

TEST_CASE("stieltjes closed forms at hand-checked points", "[measures]") {
    const auto disk = Measure::uniform_disk({0.0, 0.0}, 1.0);
    CHECK(stieltjes(disk, {0.5, 0.0}) == Complex{0.5, 0.0});      // conj(z) inside
    CHECK(stieltjes(disk, {0.3, 0.4}) == Complex{0.3, -0.4});     // conjugate
    CHECK(stieltjes(disk, {2.0, 0.0}) == Complex{0.5, 0.0});      // 1/z outside
    CHECK(stieltjes(disk, {0.0, 0.0}) == Complex{0.0, 0.0});      // center zero

    const auto td = Measure::two_disks();
    CHECK(std::abs(stieltjes(td, {kSqrt3, 0.0})) < 1e-12);
    CHECK(std::abs(stieltjes(td, {-kSqrt3, 0.0})) < 1e-12);
    CHECK(std::abs(stieltjes(td, {0.0, 0.0})) < 1e-12);

    const auto gauss = Measure::complex_gaussian();
    CHECK(stieltjes(gauss, {0.0, 0.0}) == Complex{0.0, 0.0});
    CHECK(std::abs(stieltjes(gauss, {1.0, 0.0}) - Complex{1.0 - std::exp(-1.0), 0.0}) < 1e-15);

    const auto circle = Measure::unit_circle();
    CHECK(stieltjes(circle, {0.3, 0.2}) == Complex{0.0, 0.0});
    CHECK(stieltjes(circle, {2.0, 0.0}) == Complex{0.5, 0.0});
    CHECK_THROWS_AS(stieltjes(circle, {1.0, 0.0}), DomainError);

    const auto emp = Measure::empirical({{0.0, 0.0}, {1.0, 0.0}});
    CHECK(std::abs(stieltjes(emp, {2.0, 0.0}) - Complex{0.75, 0.0}) < 1e-15);
    CHECK_THROWS_AS(stieltjes(emp, {1.0, 0.0}), DomainError);
}

TEST_CASE("disk boundary convention: both branches agree on |z - c| = R", "[measures]") {
    const auto disk = Measure::uniform_disk({0.0, 0.0}, 1.0);
    for (double th : {0.3, 1.1, 2.9, 4.2}) {
        const Complex z{std::cos(th), std::sin(th)};
        const Complex inside = std::conj(z);
        const Complex outside = 1.0 / z;
        CHECK(std::abs(inside - outside) < 1e-15);
        CHECK(std::abs(stieltjes(disk, z) - inside) < 1e-15);
    }
}

TEST_CASE("stieltjes matches 2-D quadrature on fixed grids", "[measures]") {
    const auto disk = Measure::uniform_disk({0.0, 0.0}, 1.0);
    const double g1[5] = {-1.5, -0.55, 0.15, 0.62, 1.4};
    for (double re : g1)
        for (double im : g1) {
            const Complex z{re, im};
            CHECK(std::abs(stieltjes(disk, z) - oracle::stieltjes_disk_quad({0, 0}, 1.0, z)) <
                  1e-5);
        }

    const auto td = Measure::two_disks();
    const double g2r[5] = {-3.3, -2.1, 0.0, 1.9, 3.1};
    const double g2i[5] = {-1.6, -0.7, 0.05, 0.8, 1.5};
    for (double re : g2r)
        for (double im : g2i) {
            const Complex z{re, im};
            CHECK(std::abs(stieltjes(td, z) - oracle::stieltjes_two_disks_quad(z)) < 1e-5);
        }

    const auto gauss = Measure::complex_gaussian();
    const double g3[5] = {-2.0, -0.8, 0.0, 0.9, 1.7};
    for (double re : g3)
        for (double im : g3) {
            const Complex z{re, im};
            CHECK(std::abs(stieltjes(gauss, z) - oracle::stieltjes_gaussian_quad(z)) < 1e-5);
        }

    const auto circle = Measure::unit_circle();
    for (double re : {-1.7, -0.4, 0.3, 2.0})
        for (double im : {-0.9, 0.1, 1.3}) {
            const Complex z{re, im};
            if (std::abs(std::abs(z) - 1.0) < 0.05) continue;
            CHECK(std::abs(stieltjes(circle, z) - oracle::stieltjes_unit_circle_quad(z)) < 1e-5);
        }
}

TEST_CASE("off-center disk transform", "[measures]") {
    const Complex c{0.7, -0.4};
    const auto disk = Measure::uniform_disk(c, 2.5);
    for (Complex z : {Complex{1.0, 0.5}, Complex{-3.0, 2.0}, Complex{4.1, -0.4}}) {
        CHECK(std::abs(stieltjes(disk, z) - oracle::stieltjes_disk_quad(c, 2.5, z)) < 1e-5);
    }
}

TEST_CASE("density values and singular kinds", "[measures]") {
    const auto disk = Measure::uniform_disk({0.0, 0.0}, 1.0);
    CHECK(density(disk, {0.3, 0.0}) == 1.0 / kPi);
    CHECK(density(disk, {2.0, 0.0}) == 0.0);

    const auto td = Measure::two_disks();
    CHECK(density(td, {2.0, 0.0}) == 1.0 / (2.0 * kPi));
    CHECK(density(td, {0.0, 0.0}) == 0.0); // the gap between the disks

    const auto gauss = Measure::complex_gaussian();
    CHECK(density(gauss, {0.0, 0.0}) == 1.0 / kPi);
    CHECK(std::abs(density(gauss, {1.0, 0.0}) - std::exp(-1.0) / kPi) < 1e-16);

    CHECK_THROWS_AS(density(Measure::unit_circle(), {0.5, 0.0}), UnsupportedError);
    CHECK_THROWS_AS(density(Measure::empirical({{0, 0}, {1, 0}}), {0.5, 0.0}), UnsupportedError);
}

TEST_CASE("gaussian density integrates to one", "[measures]") {
    const auto gauss = Measure::complex_gaussian();
    std::vector<double> gx, gw;
    oracle::gauss_legendre(200, gx, gw);
    double mass = 0.0;
    for (std::size_t j = 0; j < gx.size(); ++j) {
        const double r = 0.5 * 12.0 * (gx[j] + 1.0);
        mass += 0.5 * 12.0 * gw[j] * density(gauss, {r, 0.0}) * 2.0 * kPi * r;
    }
    CHECK(std::abs(mass - 1.0) < 1e-12);
}

TEST_CASE("in_support across kinds", "[measures]") {
    CHECK(in_support(Measure::uniform_disk({0, 0}, 1.0), {0.5, 0.0}));
    CHECK_FALSE(in_support(Measure::uniform_disk({0, 0}, 1.0), {1.5, 0.0}));
    CHECK(in_support(Measure::two_disks(), {2.0, 0.5}));
    CHECK_FALSE(in_support(Measure::two_disks(), {0.0, 0.0}));
    CHECK(in_support(Measure::complex_gaussian(), {100.0, 0.0}));
    CHECK(in_support(Measure::unit_circle(), {1.0, 0.0}));
    CHECK_FALSE(in_support(Measure::unit_circle(), {2.0, 0.0}));
    CHECK(in_support(Measure::empirical({{0, 0}, {1, 0}}), {1.0, 0.0}));
    CHECK_FALSE(in_support(Measure::empirical({{0, 0}, {1, 0}}), {0.5, 0.0}));
}

TEST_CASE("sampling is deterministic per (measure, n, seed) with prefix stability",
          "[measures]") {
    const auto disk = Measure::uniform_disk({0.0, 0.0}, 1.0);
    const auto a = sample_points(disk, 100, 42);
    const auto b = sample_points(disk, 100, 42);
    REQUIRE(a.size() == 100);
    CHECK(a == b);

    const auto c = sample_points(disk, 40, 42);
    CHECK(std::equal(c.begin(), c.end(), a.begin()));

    const auto d = sample_points(disk, 100, 43);
    CHECK(a != d);

    CHECK_THROWS_AS(sample_points(disk, 1, 42), ArgumentError);
}

TEST_CASE("uniform disk sample mean concentrates near the center", "[measures]") {
    const auto disk = Measure::uniform_disk({0.0, 0.0}, 1.0);
    const auto pts = sample_points(disk, 10000, 7);
    Complex mean{0.0, 0.0};
    for (const Complex p : pts) mean += p;
    mean /= 10000.0;
    CHECK(std::abs(mean) < 0.05);
}

TEST_CASE("unit circle samples lie on the circle", "[measures]") {
    const auto pts = sample_points(Measure::unit_circle(), 1000, 3);
    for (const Complex p : pts) CHECK(std::abs(std::abs(p) - 1.0) < 1e-15);
}

TEST_CASE("gaussian samples have unit second moment", "[measures]") {
    const auto pts = sample_points(Measure::complex_gaussian(), 100000, 11);
    double m2 = 0.0;
    for (const Complex p : pts) m2 += abs2(p);
    m2 /= static_cast<double>(pts.size());
    CHECK(std::abs(m2 - 1.0) < 0.013); // |X|^2 ~ Exp(1): four sigma at n = 1e5
}

TEST_CASE("empirical sampling draws from the atom list", "[measures]") {
    const auto emp = Measure::empirical({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}});
    const auto pts = sample_points(emp, 500, 5);
    for (const Complex p : pts)
        CHECK((p == Complex{0, 0} || p == Complex{1, 0} || p == Complex{2, 0}));
}

TEST_CASE("zero sets match the known transform zeros", "[measures]") {
    const auto zs_td = zero_set(Measure::two_disks());
    REQUIRE(zs_td.zeros.size() == 3);
    CHECK(zs_td.complete);
    CHECK(std::abs(zs_td.zeros[0] - Complex{-kSqrt3, 0.0}) < 1e-15);
    CHECK(std::abs(zs_td.zeros[1] - Complex{0.0, 0.0}) < 1e-15);
    CHECK(std::abs(zs_td.zeros[2] - Complex{kSqrt3, 0.0}) < 1e-15);

    const Complex c{0.3, -0.8};
    const auto zs_disk = zero_set(Measure::uniform_disk(c, 2.0));
    REQUIRE(zs_disk.zeros.size() == 1);
    CHECK(zs_disk.zeros[0] == c);
    CHECK(zs_disk.complete);

    CHECK(zero_set(Measure::complex_gaussian()).zeros == std::vector<Complex>{{0.0, 0.0}});
    CHECK(zero_set(Measure::unit_circle()).zeros == std::vector<Complex>{{0.0, 0.0}});

    const auto zs_emp = zero_set(Measure::empirical({{0, 0}, {1, 0}}));
    CHECK(zs_emp.zeros.empty());
    CHECK_FALSE(zs_emp.complete);

    // every listed zero is an actual zero of the transform
    for (const auto& mu : {Measure::two_disks(), Measure::uniform_disk(c, 2.0),
                           Measure::complex_gaussian(), Measure::unit_circle()}) {
        for (const Complex z : zero_set(mu).zeros) CHECK(std::abs(stieltjes(mu, z)) < 1e-12);
    }
}

TEST_CASE("radial cdf kind reproduces the uniform disk", "[measures]") {
    const auto ref = Measure::uniform_disk({0.0, 0.0}, 1.0);
    const auto radial = Measure::radial_cdf(
        [](double r) { return std::min(r * r, 1.0); },
        [](double r) { return r <= 1.0 ? 1.0 / kPi : 0.0; }, {0.0, 0.0});
    REQUIRE(radial.has_density());
    for (Complex z : {Complex{0.5, 0.0}, Complex{0.2, -0.3}, Complex{2.0, 1.0}}) {
        CHECK(std::abs(stieltjes(radial, z) - stieltjes(ref, z)) < 1e-15);
        CHECK(density(radial, z) == density(ref, z));
    }
    CHECK(stieltjes(radial, {0.0, 0.0}) == Complex{0.0, 0.0});
}

TEST_CASE("radial consistency: |z| |m(z)| equals the cdf mass", "[measures]") {
    auto cdf = [](double r) { return 1.0 - std::exp(-r * r); };
    const auto radial = Measure::radial_cdf(cdf, nullptr, {0.0, 0.0});
    CHECK_FALSE(radial.has_density());
    for (double r : {0.3, 0.9, 1.7, 4.0}) {
        const Complex z{r * std::cos(0.7), r * std::sin(0.7)};
        CHECK(std::abs(std::abs(z) * std::abs(stieltjes(radial, z)) - cdf(r)) < 1e-15);
    }
}

TEST_CASE("two-disk transform obeys the local lower bound near its zeros", "[measures]") {
    // Near z0 = sqrt(3) the transform vanishes linearly; the derived local
    // bound |m(z)| >= (sqrt(3)-1)/4 * |z - z0| holds on a neighborhood.
    const auto td = Measure::two_disks();
    const double slope = (kSqrt3 - 1.0) / 4.0;
    for (double dr : {-0.2, -0.05, 0.04, 0.18})
        for (double di : {-0.15, 0.0, 0.12}) {
            const Complex dz{dr, di};
            if (std::abs(dz) < 1e-9) continue;
            CHECK(std::abs(stieltjes(td, Complex{kSqrt3, 0.0} + dz)) >=
                  slope * std::abs(dz) - 1e-12);
            CHECK(std::abs(stieltjes(td, Complex{-kSqrt3, 0.0} + dz)) >=
                  slope * std::abs(dz) - 1e-12);
        }
}
