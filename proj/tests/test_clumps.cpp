#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "polypair/clumps.hpp"
#include "polypair/critical.hpp"
#include "polypair/measures.hpp"
#include "polypair/polynomial.hpp"

using namespace polypair;

namespace {

const Measure& disk() {
    static const Measure mu = Measure::uniform_disk({0, 0}, 1.0);
    return mu;
}

} // namespace

TEST_CASE("clump radius formula and floor", "[clumps]") {
    CHECK_THROWS_AS(clump_radius(disk(), {0.5, 0.0}, 7), ArgumentError);

    // at the disk center the transform vanishes, so the floor takes over:
    // (ln n)^3 / (n * (ln n)^4 / sqrt(n)) = 1 / (sqrt(n) ln n)
    for (std::size_t n : {8ul, 100ul, 100000ul}) {
        const double nd = static_cast<double>(n);
        CHECK(clump_radius(disk(), {0.0, 0.0}, n) ==
              Catch::Approx(1.0 / (std::sqrt(nd) * std::log(nd))).epsilon(1e-12));
    }

    // frozen midpoint value (floor branch at this modest n)
    CHECK(clump_radius(disk(), {0.5, 0.0}, 1000) ==
          Catch::Approx(4.577866e-3).margin(1e-9));

    // at n = 10^12 the floor (ln n)^4 / sqrt(n) ~ 0.58 drops below
    // |m_mu(0.9)| = 0.9 and the transform branch takes over
    const double nd = 1e12;
    const double logn = std::log(nd);
    const double expected = std::pow(logn, 3.0) / (nd * 0.9);
    const double got = clump_radius(disk(), {0.9, 0.0}, 1000000000000ul);
    CHECK(got == Catch::Approx(expected).epsilon(1e-12));
    CHECK(got < std::pow(logn, 3.0) / (nd * std::pow(logn, 4.0) / std::sqrt(nd)));
}

TEST_CASE("far-separated roots form singleton clumps", "[clumps]") {
    std::vector<Complex> pts;
    for (int k = 0; k < 8; ++k) pts.push_back({10.0 * k, 0.0});
    const auto rs = make_root_set(pts);
    const auto cps = solve(rs);
    const auto cs = build(rs, cps, disk());

    REQUIRE(cs.components.size() == 8);
    for (const auto& cl : cs.components) {
        CHECK(cl.root_indices.size() == 1);
        CHECK(cl.cp_indices.empty()); // every cp sits deep inside a gap
        CHECK_FALSE(cl.is_pair_eligible);
        CHECK_FALSE(cl.count_flagged);
    }
    CHECK(cs.unassigned_cps.size() == 7);

    const auto rep = count_report(cs);
    CHECK(rep.eligible_clumps == 0);
    CHECK(rep.matched_fraction == 0.0);
    CHECK(rep.deficit_clumps.size() == 8);
    CHECK(rep.unexplained_mismatches == 0);
}

TEST_CASE("multiplicity pile clump accounting", "[clumps]") {
    std::vector<Complex> pts(10, Complex{0.0, 0.0});
    pts.push_back({1.0, 0.0});
    const auto rs = make_root_set(pts);
    const auto cps = solve(rs);

    ClumpOptions opts;
    opts.pair_threshold = 0.5;
    const auto cs = build(rs, cps, disk(), opts);

    REQUIRE(cs.components.size() == 2);
    const auto& pile = cs.components[0];
    const auto& lone = cs.components[1];

    CHECK(pile.root_indices.size() == 10);
    CHECK(pile.cp_indices.size() == 9); // the forced points at the atom
    CHECK_FALSE(pile.is_pair_eligible);  // transform vanishes at the atom

    CHECK(lone.root_indices == std::vector<std::size_t>{10});
    CHECK(lone.cp_indices == std::vector<std::size_t>{9});
    CHECK(lone.is_pair_eligible); // |m_mu(1)| = 1 > 0.5
    // the ball at X = 1 is wide enough to catch the paired cp at 10/11
    CHECK(lone.radii[0] > 1.0 / 11.0);

    CHECK(cs.unassigned_cps.empty());
    CHECK(cs.pair_threshold == 0.5);

    const auto rep = count_report(cs);
    CHECK(rep.eligible_clumps == 1);
    CHECK(rep.eligible_matched == 1);
    CHECK(rep.matched_fraction == 1.0);
    CHECK(rep.deficit_clumps == std::vector<std::size_t>{0});
    CHECK(rep.unexplained_mismatches == 0);
}

TEST_CASE("clump sets partition the roots and assign cps at most once", "[clumps]") {
    const auto rs = make_root_set(sample_points(disk(), 500, 42));
    const auto cps = solve(rs);
    const auto cs = build(rs, cps, disk());

    std::vector<std::size_t> all_roots;
    std::vector<std::size_t> all_cps = cs.unassigned_cps;
    for (const auto& cl : cs.components) {
        CHECK(std::is_sorted(cl.root_indices.begin(), cl.root_indices.end()));
        CHECK(std::is_sorted(cl.cp_indices.begin(), cl.cp_indices.end()));
        REQUIRE(cl.radii.size() == cl.root_indices.size());
        all_roots.insert(all_roots.end(), cl.root_indices.begin(), cl.root_indices.end());
        all_cps.insert(all_cps.end(), cl.cp_indices.begin(), cl.cp_indices.end());
    }
    std::sort(all_roots.begin(), all_roots.end());
    std::vector<std::size_t> iota_n(500);
    std::iota(iota_n.begin(), iota_n.end(), std::size_t{0});
    CHECK(all_roots == iota_n);

    std::sort(all_cps.begin(), all_cps.end());
    std::vector<std::size_t> iota_m(499);
    std::iota(iota_m.begin(), iota_m.end(), std::size_t{0});
    CHECK(all_cps == iota_m);

    // connected-union chain bound on the reported diameter
    for (const auto& cl : cs.components) {
        const double sum_r = std::accumulate(cl.radii.begin(), cl.radii.end(), 0.0);
        CHECK(cl.diameter <= 2.0 * sum_r + 1e-12);
    }
}

TEST_CASE("partition is invariant under root relabeling", "[clumps]") {
    auto pts = sample_points(disk(), 300, 7);
    const auto rs = make_root_set(pts);
    const auto cps = solve(rs);
    const auto base = build(rs, cps, disk());

    std::mt19937_64 gen(99);
    std::shuffle(pts.begin(), pts.end(), gen);
    const auto shuffled = build(make_root_set(pts), cps, disk());

    auto signature = [](const ClumpSet& cs) {
        std::vector<std::vector<std::pair<double, double>>> sig;
        for (const auto& cl : cs.components) {
            std::vector<std::pair<double, double>> comp;
            for (const std::size_t i : cl.root_indices)
                comp.emplace_back(cs.root_points[i].real(), cs.root_points[i].imag());
            std::sort(comp.begin(), comp.end());
            sig.push_back(std::move(comp));
        }
        std::sort(sig.begin(), sig.end());
        return sig;
    };
    CHECK(signature(base) == signature(shuffled));

    // per-component cp counts travel with the root sets
    std::vector<std::size_t> counts_a, counts_b;
    for (const auto& cl : base.components) counts_a.push_back(cl.cp_indices.size());
    for (const auto& cl : shuffled.components) counts_b.push_back(cl.cp_indices.size());
    std::sort(counts_a.begin(), counts_a.end());
    std::sort(counts_b.begin(), counts_b.end());
    CHECK(counts_a == counts_b);
}

TEST_CASE("doubling every radius never splits clumps", "[clumps]") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto rs = make_root_set(sample_points(disk(), 300, seed));
        const auto cps = solve(rs);
        ClumpOptions doubled;
        doubled.radius_scale = 2.0;
        CHECK(build(rs, cps, disk(), doubled).components.size() <=
              build(rs, cps, disk()).components.size());
    }
}

TEST_CASE("count report on synthetic clump sets", "[clumps]") {
    auto make_singleton = [](std::size_t i, std::size_t cp, bool eligible) {
        Clump cl;
        cl.root_indices = {i};
        cl.cp_indices = {cp};
        cl.radii = {0.1};
        cl.is_pair_eligible = eligible;
        return cl;
    };

    SECTION("all matched and eligible") {
        ClumpSet cs;
        cs.n = 100;
        cs.root_points = {{0.0, 0.0}, {1.0, 0.0}};
        cs.cp_points = {{0.05, 0.0}, {1.05, 0.0}};
        cs.abs_m = {2.0, 1.0};
        cs.components = {make_singleton(0, 0, true), make_singleton(1, 1, true)};
        const auto rep = count_report(cs);
        CHECK(rep.matched_fraction == 1.0);
        CHECK(rep.eligible_clumps == 2);
        CHECK(rep.deficit_clumps.empty());
        CHECK(rep.unexplained_mismatches == 0);
        // normalized distance of the first root: 0.05 * 100 * 2 / (ln 100)^4
        const double expected = 0.05 * 100.0 * 2.0 / std::pow(std::log(100.0), 4.0);
        CHECK(rep.max_normalized_pair_dist == Catch::Approx(expected));
    }

    SECTION("eligible clump with no cps counts as a mismatch") {
        ClumpSet cs;
        cs.n = 100;
        cs.root_points = {{0.0, 0.0}};
        cs.cp_points = {};
        cs.abs_m = {2.0};
        Clump cl;
        cl.root_indices = {0};
        cl.radii = {0.1};
        cl.is_pair_eligible = true;
        cs.components = {cl};
        const auto rep = count_report(cs);
        CHECK(rep.matched_fraction == 0.0);
        CHECK(rep.deficit_clumps == std::vector<std::size_t>{0});
        CHECK(rep.unexplained_mismatches == 1); // unflagged and eligible

        cs.components[0].count_flagged = true;
        const auto flagged = count_report(cs);
        CHECK(flagged.unexplained_mismatches == 0);
        CHECK(flagged.per_clump[0].flagged);
    }

    SECTION("no eligible clumps yields a zero fraction, not a division") {
        ClumpSet cs;
        cs.n = 100;
        cs.root_points = {{0.0, 0.0}};
        cs.cp_points = {{0.0, 0.0}};
        cs.abs_m = {0.0};
        cs.components = {make_singleton(0, 0, false)};
        const auto rep = count_report(cs);
        CHECK(rep.eligible_clumps == 0);
        CHECK(rep.matched_fraction == 0.0);
        CHECK(rep.unexplained_mismatches == 0);
    }
}

TEST_CASE("every eligible mismatch on sampled instances is boundary-flagged",
          "[clumps]") {
    ClumpOptions opts;
    opts.pair_threshold = 0.5;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto rs = make_root_set(sample_points(disk(), 500, seed));
        const auto cps = solve(rs);
        const auto cs = build(rs, cps, disk(), opts);
        const auto rep = count_report(cs);
        CHECK(rep.unexplained_mismatches == 0);
        CHECK(rep.eligible_clumps > 0);
        CHECK(rep.matched_fraction >= 0.9);

        std::size_t eligible_mismatched = 0, eligible_flagged = 0;
        for (const auto& cc : rep.per_clump) {
            if (!cc.is_pair_eligible || cc.matched) continue;
            ++eligible_mismatched;
            if (cc.flagged) ++eligible_flagged;
        }
        CHECK(eligible_mismatched == eligible_flagged);
    }
}

TEST_CASE("clump build validation", "[clumps]") {
    const auto rs = make_root_set(sample_points(disk(), 16, 1));
    const auto cps = solve(rs);
    ClumpOptions bad;
    bad.radius_scale = 0.0;
    CHECK_THROWS_AS(build(rs, cps, disk(), bad), ArgumentError);

    const auto tiny = make_root_set(sample_points(disk(), 4, 1));
    CHECK_THROWS_AS(build(tiny, solve(tiny), disk()), ArgumentError);
}
