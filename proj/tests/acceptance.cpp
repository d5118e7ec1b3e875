// Acceptance suite: end-to-end checks of the estimation pipeline against
// independent oracles, the built-in simulation studies and (when the CSVs
// are present) the two real data sets. Each case prints one [PASS]/[FAIL]
// line; see the README for how to run it.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "rgpcm/dataset.hpp"
#include "rgpcm/experiment.hpp"
#include "rgpcm/simulate.hpp"
#include "test_util.hpp"

using namespace rgpcm;
namespace fs = std::filesystem;

#ifndef RGPCM_SOURCE_DIR
#define RGPCM_SOURCE_DIR "."
#endif

namespace {

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
}

void report_skip(int criterion, const std::string& detail) {
    std::printf("[SKIP] criterion %2d: %s\n", criterion, detail.c_str());
    std::fflush(stdout);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<CovarianceStructure> all_structures() {
    std::vector<CovarianceStructure> s;
    for (StructureTag t : kAllStructures) s.push_back(CovarianceStructure{t});
    return s;
}

Matrix standardize_matrix(const Matrix& x) {
    Dataset d;
    d.values = x;
    for (int j = 0; j < x.cols(); ++j) d.columns.push_back("x" + std::to_string(j));
    return standardize(d).values;
}

}  // namespace

TEST_CASE("criterion 1: unconstrained VV and EE M-steps match the classical MLEs") {
    Stopwatch clock;
    std::mt19937_64 rng(1001);
    int failures = 0;
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const int p = 2 + static_cast<int>(rng() % 3);
        const int G = 1 + static_cast<int>(rng() % 3);
        const int n = 300;
        const Matrix data = testutil::blob_data(n, p, G, rng);
        const Responsibilities init = Responsibilities::hard(testutil::cyclic_labels(n, G), G);
        const MomentStats stats = m_step_weights_means(data, init);

        const CovUpdate vv = m_step_covariance(CovarianceStructure{StructureTag::VV},
                                               stats.scatters, stats.counts, stats.weights,
                                               nullptr, Bounds{}, 1);
        for (int g = 0; g < G; ++g) {
            const double err = testutil::frobenius_diff(assemble_sigma(vv.factors, g),
                                                        stats.scatters[g]);
            worst = std::max(worst, err);
            if (err > 1e-8) ++failures;
        }

        const CovUpdate ee = m_step_covariance(CovarianceStructure{StructureTag::EE},
                                               stats.scatters, stats.counts, stats.weights,
                                               nullptr, Bounds{}, 1);
        SymMatrix pooled(p);
        for (int g = 0; g < G; ++g)
            for (int a = 0; a < p; ++a)
                for (int b = a; b < p; ++b) pooled.add(a, b, stats.weights[g] * stats.scatters[g](a, b));
        for (int g = 0; g < G; ++g) {
            const double err = testutil::frobenius_diff(assemble_sigma(ee.factors, g), pooled);
            worst = std::max(worst, err);
            if (err > 1e-8) ++failures;
        }
    }
    const double secs = clock.seconds();
    const bool pass = failures == 0 && secs < 5.0;
    report(1, pass,
           "VV M-step = S_g, EE M-step = pooled eigendecomposition (worst error " +
               format_g17(worst) + ", " + std::to_string(secs) + " s)");
    CHECK(pass);
}

namespace {

// Shared driver for criteria 2 and 3: random constrained EM runs with the
// factor trace recorded.
struct MonotonicityOutcome {
    long runs = 0;
    long monotonicity_violations = 0;
    long constraint_violations = 0;
};

MonotonicityOutcome run_monotonicity_suite(int runs_per_tag) {
    std::mt19937_64 rng(2002);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    MonotonicityOutcome out;
    for (StructureTag t : kAllStructures) {
        for (int rep = 0; rep < runs_per_tag; ++rep) {
            const int p = 2 + static_cast<int>(rng() % 2);
            const int G = 2 + static_cast<int>(rng() % 2);
            const int n = 80;
            const Matrix data = testutil::blob_data(n, p, G, rng, 4.0 + 6.0 * unif(rng));
            const Responsibilities init = random_init(n, G, rng(), InitKind::RandomPartition);

            EmConfig cfg;
            cfg.max_iter = 40;
            cfg.record_factors = true;
            const int kind = static_cast<int>(rng() % 3);
            if (kind == 0) {
                const double a = unif(rng) * 0.4;
                cfg.constraint = ConstraintSpec::fixed(a, a + 1.0 + 20.0 * unif(rng));
            } else if (kind == 1) {
                const Regime reg =
                    std::array{Regime::Range, Regime::Lower, Regime::Upper}[rng() % 3];
                cfg.constraint = ConstraintSpec::dynamic(reg, 5 + static_cast<int>(rng() % 20),
                                                         0.5 + unif(rng));
            } else {
                cfg.constraint = ConstraintSpec::none();
            }

            const FitReport rep_out = fit(data, CovarianceStructure{t}, G, init, cfg);
            ++out.runs;
            for (std::size_t i = 1; i < rep_out.loglik_trace.size(); ++i)
                if (rep_out.loglik_trace[i] < rep_out.loglik_trace[i - 1] - 1e-8)
                    ++out.monotonicity_violations;
            for (std::size_t it = 0; it < rep_out.factor_trace.size(); ++it) {
                const Bounds ab = regime_bounds(cfg.constraint, static_cast<int>(it) + 1);
                for (int g = 0; g < G; ++g)
                    for (double v :
                         eig_sym(assemble_sigma(rep_out.factor_trace[it], g)).values)
                        if (v < ab.lower - 1e-9 || v > ab.upper + 1e-9)
                            ++out.constraint_violations;
            }
        }
    }
    return out;
}

const MonotonicityOutcome& monotonicity_suite() {
    static const MonotonicityOutcome out = run_monotonicity_suite(100);
    return out;
}

}  // namespace

TEST_CASE("criterion 2: monotone log-likelihood over 100 random runs per structure") {
    Stopwatch clock;
    const MonotonicityOutcome& out = monotonicity_suite();
    const double secs = clock.seconds();
    const bool pass = out.monotonicity_violations == 0 && secs < 120.0;
    report(2, pass,
           std::to_string(out.runs) + " runs, " + std::to_string(out.monotonicity_violations) +
               " monotonicity violations (" + std::to_string(secs) + " s)");
    CHECK(pass);
}

TEST_CASE("criterion 3: every eigenvalue inside the active bounds after every M-step") {
    const MonotonicityOutcome& out = monotonicity_suite();
    const bool pass = out.constraint_violations == 0;
    report(3, pass,
           std::to_string(out.constraint_violations) + " bound violations across " +
               std::to_string(out.runs) + " runs");
    CHECK(pass);
}

TEST_CASE("criterion 4: shared-orientation update matches brute-force rotation search") {
    Stopwatch clock;
    std::mt19937_64 rng(4004);
    std::uniform_real_distribution<double> unif(0.5, 2.5);
    int failures = 0;
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<SymMatrix> s{testutil::random_spd(2, rng, 0.7),
                                 testutil::random_spd(2, rng, 0.7)};
        const std::vector<double> counts{unif(rng), unif(rng)};
        std::vector<std::vector<double>> b(2);
        for (int g = 0; g < 2; ++g) {
            double hi = unif(rng), lo = unif(rng);
            if (lo > hi) std::swap(lo, hi);
            b[g] = {hi, lo};
        }
        const FlurryResult r = update_D_common(s, counts, b);
        const double grid = testutil::flury_grid_oracle(s, counts, b, 1e-4);
        const double err = std::abs(r.objective_trace.back() - grid);
        worst = std::max(worst, err);
        if (err > 1e-6) ++failures;
    }
    const double secs = clock.seconds();
    const bool pass = failures == 0 && secs < 30.0;
    report(4, pass,
           "50 instances, worst objective gap " + format_g17(worst) + " (" +
               std::to_string(secs) + " s)");
    CHECK(pass);
}

TEST_CASE("criterion 5: ARI agrees with the pair-counting oracle") {
    Stopwatch clock;
    long mismatches = 0;
    long pairs = 0;
    for (int n = 1; n <= 8; ++n) {
        const auto parts = testutil::all_partitions(n);
        for (const auto& u : parts) {
            const Partition pu = Partition::from_labels(u);
            for (const auto& v : parts) {
                const double got = ari(pu, Partition::from_labels(v));
                const double want = testutil::ari_pair_oracle(u, v);
                ++pairs;
                if (std::abs(got - want) > 1e-12) ++mismatches;
            }
        }
    }

    std::mt19937_64 rng(5005);
    long self_failures = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 30);
        std::vector<int> u(n);
        for (int i = 0; i < n; ++i) u[i] = static_cast<int>(rng() % 4);
        const Partition pu = Partition::from_labels(u);
        if (std::abs(ari(pu, pu) - 1.0) > 1e-12) ++self_failures;
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = (u[i] + 2) % 4;
        if (std::abs(ari(pu, Partition::from_labels(perm)) - 1.0) > 1e-12) ++self_failures;
    }
    const double secs = clock.seconds();
    const bool pass = mismatches == 0 && self_failures == 0 && secs < 30.0;
    report(5, pass,
           std::to_string(pairs) + " exhaustive pairs, " + std::to_string(mismatches) +
               " mismatches, " + std::to_string(self_failures) + " identity failures (" +
               std::to_string(secs) + " s)");
    CHECK(pass);
}

namespace {

struct StudyOutcome {
    int hits = 0;
    int seeds = 0;
    std::string note;
};

StudyOutcome run_simulation_study(const std::string& sim_name, StructureTag want_tag, int want_g,
                                  double min_ari, bool ari_on_clean_only, int seeds) {
    StudyOutcome out;
    out.seeds = seeds;
    for (int seed = 0; seed < seeds; ++seed) {
        const SimData sim = generate(builtin_spec(sim_name), static_cast<std::uint64_t>(seed));
        // raw data: the studies pin the generating structure, which a
        // per-column rescale would not preserve for varying orientations
        const Matrix& x = sim.x;
        const Bounds ab = static_bounds_from_data(x);
        EmConfig cfg;
        cfg.constraint = ConstraintSpec::fixed(ab.lower, ab.upper);
        InitSpec init;
        init.seed = static_cast<std::uint64_t>(seed);
        const SweepResult res = sweep(x, all_structures(), 1, 6, init, cfg);
        const SweepCell* best = res.best_cell();
        if (!best) continue;
        if (best->structure.tag != want_tag || best->G != want_g) continue;

        double a;
        if (ari_on_clean_only) {
            std::vector<int> truth, pred;
            for (int i = 0; i < x.rows(); ++i) {
                if (sim.is_noise[i]) continue;
                truth.push_back(sim.labels[i]);
                pred.push_back(best->report->map_labels[i]);
            }
            a = ari(Partition::from_labels(truth), Partition::from_labels(pred));
        } else {
            a = ari(Partition::from_labels(sim.labels),
                    Partition::from_labels(best->report->map_labels));
        }
        if (a >= min_ari) ++out.hits;
    }
    return out;
}

}  // namespace

TEST_CASE("criterion 6: simulation study 2 selects (EE, 2) with perfect classification") {
    Stopwatch clock;
    const StudyOutcome out =
        run_simulation_study("sim2", StructureTag::EE, 2, 1.0 - 1e-12, false, 20);
    const double secs = clock.seconds();
    const bool pass = out.hits >= 18 && secs < 180.0;
    report(6, pass,
           std::to_string(out.hits) + "/20 seeds selected (EE, G=2) with ARI = 1 (" +
               std::to_string(secs) + " s)");
    CHECK(pass);
}

TEST_CASE("criterion 7: noisy study 2 still selects (EE, 2), noise absorbed") {
    Stopwatch clock;
    const StudyOutcome out =
        run_simulation_study("sim2-noise", StructureTag::EE, 2, 1.0 - 1e-12, true, 20);
    const double secs = clock.seconds();
    const bool pass = out.hits >= 15 && secs < 180.0;
    report(7, pass,
           std::to_string(out.hits) +
               "/20 seeds selected (EE, G=2) with the clean rows classified perfectly (" +
               std::to_string(secs) + " s)");
    CHECK(pass);
}

TEST_CASE("criterion 8: heavy-tailed study 1 selects (EV, 2) with ARI >= 0.95") {
    Stopwatch clock;
    const StudyOutcome out = run_simulation_study("sim1", StructureTag::EV, 2, 0.95, false, 20);
    const double secs = clock.seconds();
    const bool pass = out.hits >= 15 && secs < 300.0;
    report(8, pass,
           std::to_string(out.hits) + "/20 seeds selected (EV, G=2) with ARI >= 0.95 (" +
               std::to_string(secs) + " s)");
    CHECK(pass);
}

TEST_CASE("criterion 9: range constraints do not degenerate more often than none (VV)") {
    Stopwatch clock;
    const SimData sim = generate(builtin_spec("sim1"), 0);
    const Matrix x = standardize_matrix(sim.x);

    ConvergenceConfig cfg;
    cfg.structures = {CovarianceStructure{StructureTag::VV}};
    cfg.g_min = 2;
    cfg.g_max = 4;
    cfg.regimes = {Regime::None, Regime::Range};
    cfg.starts = 50;
    cfg.seed = 0;
    cfg.schedule_len = 25;
    cfg.beta = 1.0;
    const ConvergenceReport rep = run_convergence_experiment(x, cfg);

    double degen_none = 0.0, degen_range = 0.0;
    for (const auto& c : rep.cells) {
        if (c.regime == Regime::None) degen_none += c.degeneracy_share;
        if (c.regime == Regime::Range) degen_range += c.degeneracy_share;
    }
    degen_none /= 3.0;
    degen_range /= 3.0;
    const double secs = clock.seconds();
    const bool pass = degen_range <= degen_none + 1e-12 && secs < 600.0;
    report(9, pass,
           "mean degeneracy share over G=2..4: range " + format_g17(degen_range) + " vs none " +
               format_g17(degen_none) + " (" + std::to_string(secs) + " s)");
    CHECK(pass);
}

TEST_CASE("criterion 10: schedule endpoints are exact") {
    const Bounds b0 = schedule_bounds(0.0, 1.0);
    const Bounds b1 = schedule_bounds(1.0, 1.0);
    const bool pass = b0.lower == 1.0 && b0.upper == 1.0 && b1.lower == 0.0 &&
                      std::isinf(b1.upper) && b1.upper > 0;
    report(10, pass, "schedule_bounds(0,1) = (1,1) and schedule_bounds(1,1) = (0,inf)");
    CHECK(pass);
}

namespace {

struct RealDataOutcome {
    bool ran = false;
    bool pass = false;
    std::string note;
};

RealDataOutcome run_real_data(const std::string& csv, double lo, double hi, StructureTag want_tag,
                              int want_g, double min_ari, int g_max) {
    RealDataOutcome out;
    if (!fs::exists(csv)) {
        out.note = csv + " not present (see data/recipes)";
        return out;
    }
    out.ran = true;
    Dataset d = load_csv(csv, std::string("class"));
    d = standardize(d);
    EmConfig cfg;
    cfg.constraint = ConstraintSpec::fixed(lo, hi);
    InitSpec init;
    init.seed = 0;
    const SweepResult res = sweep(d.values, all_structures(), 1, g_max, init, cfg);
    const SweepCell* best = res.best_cell();
    if (!best) {
        out.note = "no model selected";
        return out;
    }
    const Partition pred = Partition::from_labels(best->report->map_labels);
    const double a = ari(*d.truth, pred);
    out.pass = best->structure.tag == want_tag && best->G == want_g && a >= min_ari;
    out.note = "best (" + best->structure.name() + ", G=" + std::to_string(best->G) +
               "), ARI " + format_g17(a);

    // When the wine fit reaches the reference solution, its classification
    // table shows the known (58,1 / 1,70 / 48) row pattern up to column order.
    if (out.pass && want_tag == StructureTag::VE && a >= 0.96) {
        auto table = classification_table(*d.truth, pred);
        for (auto& row : table) std::sort(row.begin(), row.end(), std::greater<>());
        const std::vector<std::vector<long>> want{{58, 1, 0}, {70, 1, 0}, {48, 0, 0}};
        if (table == want)
            out.note += ", classification rows (58,1 / 1,70 / 48)";
        else
            out.note += ", unexpected classification pattern";
        out.pass = out.pass && table == want;
    }
    return out;
}

}  // namespace

TEST_CASE("criterion 11: real-data selection (conditional on provided CSVs)") {
    Stopwatch clock;
    const std::string base = std::string(RGPCM_SOURCE_DIR) + "/data/real";
    const RealDataOutcome wine = run_real_data(base + "/wine.csv", 0.1033, 4.7057,
                                               StructureTag::VE, 3, 0.90, 6);
    const RealDataOutcome crabs = run_real_data(base + "/crabs.csv", 0.0017, 4.7888,
                                                StructureTag::EV, 4, 0.70, 6);
    const double secs = clock.seconds();
    if (!wine.ran && !crabs.ran) {
        report_skip(11, "wine: " + wine.note + "; crabs: " + crabs.note);
        return;
    }
    bool pass = true;
    std::string note;
    if (wine.ran) {
        pass = pass && wine.pass;
        note += "wine expected (VE, G=3) ARI >= 0.90, got " + wine.note;
    } else {
        note += "wine skipped (" + wine.note + ")";
    }
    note += "; ";
    if (crabs.ran) {
        pass = pass && crabs.pass;
        note += "crabs expected (EV, G=4) ARI >= 0.70, got " + crabs.note;
    } else {
        note += "crabs skipped (" + crabs.note + ")";
    }
    pass = pass && secs < 1200.0;
    report(11, pass, note + " (" + std::to_string(secs) + " s)");
    CHECK(pass);
}

TEST_CASE("criterion 12: identical config and seed give byte-identical reports") {
    const SimData sim = generate(builtin_spec("sim2"), 3);
    Dataset data;
    data.values = standardize_matrix(sim.x);
    data.columns = {"x1", "x2", "x3"};
    data.truth = Partition::from_labels(sim.labels);
    data.truth_names = {"comp1", "comp2"};

    auto run_once = [&](const std::string& dir) {
        EmConfig em;
        const Bounds ab = static_bounds_from_data(data.values);
        em.constraint = ConstraintSpec::fixed(ab.lower, ab.upper);
        InitSpec init;
        init.seed = 3;
        const SweepResult res = sweep(data.values, all_structures(), 1, 3, init, em);
        ReportBundle bundle;
        bundle.sweep = &res;
        bundle.data = &data;
        bundle.meta = decision_metadata(em.degeneracy);
        fs::remove_all(dir);
        emit_reports(bundle, dir);
    };

    const std::string dir1 = (fs::temp_directory_path() / "rgpcm_acc_det1").string();
    const std::string dir2 = (fs::temp_directory_path() / "rgpcm_acc_det2").string();
    run_once(dir1);
    run_once(dir2);

    bool pass = true;
    int files = 0;
    for (const auto& entry : fs::directory_iterator(dir1)) {
        ++files;
        const fs::path other = fs::path(dir2) / entry.path().filename();
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) pass = false;
    }
    pass = pass && files > 0;
    report(12, pass, std::to_string(files) + " report files compared byte-for-byte");
    CHECK(pass);
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}
