#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "rgpcm/selection.hpp"
#include "rgpcm/simulate.hpp"
#include "test_util.hpp"

using namespace rgpcm;

TEST_CASE("bic: direct evaluation and penalty ordering") {
    CHECK(bic(0.0, 1, 1) == 0.0);
    CHECK(bic(-100.0, 10, 200) == doctest::Approx(200.0 + 10.0 * std::log(200.0)));
    // equal loglik: fewer parameters wins under the lowest-BIC rule
    CHECK(bic(-50.0, 3, 100) < bic(-50.0, 5, 100));
    // strictly increasing in m
    for (int m = 1; m < 20; ++m) CHECK(bic(-10.0, m, 50) < bic(-10.0, m + 1, 50));
    CHECK_THROWS_AS(bic(0.0, 0, 10), std::invalid_argument);
}

TEST_CASE("ari: identical, permuted and the crossing example") {
    const Partition p1 = Partition::from_labels({0, 0, 1, 1, 2});
    CHECK(ari(p1, p1) == doctest::Approx(1.0));

    const Partition permuted = Partition::from_labels({2, 2, 0, 0, 1});
    CHECK(ari(p1, permuted) == doctest::Approx(1.0));

    // (0,0,1,1) vs (0,1,0,1): pair counting over the 6 pairs gives -0.5
    const Partition a = Partition::from_labels({0, 0, 1, 1});
    const Partition b = Partition::from_labels({0, 1, 0, 1});
    CHECK(ari(a, b) == doctest::Approx(-0.5));
    CHECK(testutil::ari_pair_oracle({0, 0, 1, 1}, {0, 1, 0, 1}) == doctest::Approx(-0.5));

    CHECK_THROWS_AS(ari(a, p1), std::invalid_argument);
}

TEST_CASE("ari: symmetric, permutation invariant, matches the pair oracle") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 10);
        std::vector<int> u(n), v(n);
        for (int i = 0; i < n; ++i) {
            u[i] = static_cast<int>(rng() % 3);
            v[i] = static_cast<int>(rng() % 4);
        }
        const Partition pu = Partition::from_labels(u);
        const Partition pv = Partition::from_labels(v);
        const double a = ari(pu, pv);
        CHECK(a == doctest::Approx(ari(pv, pu)));
        CHECK(a == doctest::Approx(testutil::ari_pair_oracle(u, v)).epsilon(1e-12));

        // relabel u by a fixed permutation
        std::vector<int> w(n);
        for (int i = 0; i < n; ++i) w[i] = (u[i] + 1) % 3;
        CHECK(ari(Partition::from_labels(w), pv) == doctest::Approx(a).epsilon(1e-12));
    }
}

TEST_CASE("ari: exhaustive agreement with the pair oracle up to n = 6") {
    for (int n = 2; n <= 6; ++n) {
        const auto parts = testutil::all_partitions(n);
        for (const auto& u : parts)
            for (const auto& v : parts) {
                const double got = ari(Partition::from_labels(u), Partition::from_labels(v));
                const double want = testutil::ari_pair_oracle(u, v);
                CHECK(got == doctest::Approx(want).epsilon(1e-12));
            }
    }
    CHECK(testutil::all_partitions(6).size() == 203);  // Bell(6)
}

TEST_CASE("classification_table: diagonal and single-column cases") {
    const Partition truth = Partition::from_labels({0, 0, 0, 1, 1});
    const auto perfect = classification_table(truth, truth);
    CHECK(perfect[0][0] == 3);
    CHECK(perfect[1][1] == 2);
    CHECK(perfect[0][1] == 0);

    const Partition all_one = Partition::from_labels({0, 0, 0, 0, 0});
    const auto col = classification_table(truth, all_one);
    CHECK(col[0][0] == 3);
    CHECK(col[1][0] == 2);
}

TEST_CASE("sweep: single cell grid selects that cell") {
    const SimData sim = generate(builtin_spec("sim2"), 3);
    InitSpec init;
    init.seed = 3;
    EmConfig cfg;
    const Bounds ab = static_bounds_from_data(sim.x);
    cfg.constraint = ConstraintSpec::fixed(ab.lower, ab.upper);
    const SweepResult r =
        sweep(sim.x, {CovarianceStructure{StructureTag::EE}}, 2, 2, init, cfg);
    REQUIRE(r.best.has_value());
    CHECK(r.cells.size() == 1);
    CHECK(r.best_cell()->structure.tag == StructureTag::EE);
    CHECK(r.best_cell()->G == 2);
}

TEST_CASE("sweep: best cell attains the minimal BIC among healthy cells") {
    const SimData sim = generate(builtin_spec("sim2"), 5);
    InitSpec init;
    init.seed = 5;
    EmConfig cfg;
    const Bounds ab = static_bounds_from_data(sim.x);
    cfg.constraint = ConstraintSpec::fixed(ab.lower, ab.upper);
    std::vector<CovarianceStructure> structures;
    for (StructureTag t : kAllStructures) structures.push_back(CovarianceStructure{t});
    const SweepResult r = sweep(sim.x, structures, 1, 3, init, cfg);
    REQUIRE(r.best.has_value());
    const double best_bic = r.best_cell()->report->bic;
    for (const auto& c : r.cells)
        if (c.report && !c.report->degenerate && c.report->converged)
            CHECK(best_bic <= c.report->bic + 1e-12);
}

TEST_CASE("sweep: empty grid is rejected, all-failed grid yields no best") {
    InitSpec init;
    EmConfig cfg;
    Matrix tiny(3, 1);
    tiny(0, 0) = 0.0;
    tiny(1, 0) = 1.0;
    tiny(2, 0) = 2.0;
    CHECK_THROWS_AS(sweep(tiny, {}, 1, 2, init, cfg), std::invalid_argument);

    // n <= G for every cell: every fit throws, so no model is selected
    const SweepResult r =
        sweep(tiny, {CovarianceStructure{StructureTag::OneI}}, 3, 4, init, cfg);
    CHECK_FALSE(r.best.has_value());
    for (const auto& c : r.cells) CHECK_FALSE(c.error.empty());
}
