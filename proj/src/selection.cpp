#include "rgpcm/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace rgpcm {

Partition Partition::from_labels(std::vector<int> labels) {
    Partition p;
    int g = 0;
    for (int lab : labels) {
        if (lab < 0) throw std::invalid_argument("Partition: negative label");
        g = std::max(g, lab + 1);
    }
    p.labels = std::move(labels);
    p.G = g;
    return p;
}

double bic(double loglik, int m, int n) {
    if (n < 1 || m < 1) throw std::invalid_argument("bic: m, n must be >= 1");
    return -2.0 * loglik + m * std::log(static_cast<double>(n));
}

namespace {
double choose2(double x) { return x * (x - 1.0) / 2.0; }
}  // namespace

double ari(const Partition& p1, const Partition& p2) {
    const int n = p1.n();
    if (p2.n() != n) throw std::invalid_argument("ari: partition length mismatch");

    const auto table = classification_table(p1, p2);
    const std::size_t r = table.size();
    const std::size_t c = r ? table[0].size() : 0;

    double sum_ij = 0.0;
    std::vector<double> a(r, 0.0), b(c, 0.0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            sum_ij += choose2(static_cast<double>(table[i][j]));
            a[i] += table[i][j];
            b[j] += table[i][j];
        }
    double sum_a = 0.0, sum_b = 0.0;
    for (double x : a) sum_a += choose2(x);
    for (double x : b) sum_b += choose2(x);

    const double total = choose2(static_cast<double>(n));
    const double expected = total > 0.0 ? sum_a * sum_b / total : 0.0;
    const double maximum = 0.5 * (sum_a + sum_b);

    const double num = sum_ij - expected;
    const double den = maximum - expected;
    if (den == 0.0) return 1.0;  // both partitions trivial
    return num / den;
}

std::vector<std::vector<long>> classification_table(const Partition& truth,
                                                    const Partition& pred) {
    if (truth.n() != pred.n())
        throw std::invalid_argument("classification_table: partition length mismatch");
    std::vector<std::vector<long>> t(truth.G, std::vector<long>(pred.G, 0));
    for (int i = 0; i < truth.n(); ++i) ++t[truth.labels[i]][pred.labels[i]];
    return t;
}

const SweepCell* SweepResult::cell(StructureTag tag, int G) const {
    for (const auto& c : cells)
        if (c.structure.tag == tag && c.G == G) return &c;
    return nullptr;
}

SweepResult sweep(const Matrix& data, const std::vector<CovarianceStructure>& structures,
                  int g_min, int g_max, const InitSpec& init, const EmConfig& config) {
    if (structures.empty() || g_min < 1 || g_max < g_min)
        throw std::invalid_argument("sweep: empty model grid");

    SweepResult out;
    for (int G = g_min; G <= g_max; ++G)
        for (const auto& s : structures) out.cells.push_back(SweepCell{s, G, {}, {}});

    // One shared initialization per G: structures compete from the same start.
    std::vector<Responsibilities> inits;
    std::vector<std::string> init_errors(g_max - g_min + 1);
    inits.resize(g_max - g_min + 1);
    for (int G = g_min; G <= g_max; ++G) {
        try {
            inits[G - g_min] = make_init(data, G, init);
        } catch (const std::exception& ex) {
            init_errors[G - g_min] = ex.what();
        }
    }

    detail::parallel_for(out.cells.size(), [&](std::size_t i) {
        SweepCell& cell = out.cells[i];
        const std::string& init_err = init_errors[cell.G - g_min];
        if (!init_err.empty()) {
            cell.error = init_err;
            return;
        }
        try {
            cell.report = fit(data, cell.structure, cell.G, inits[cell.G - g_min], config);
        } catch (const std::exception& ex) {
            cell.error = ex.what();
        }
    });

    for (std::size_t i = 0; i < out.cells.size(); ++i) {
        const auto& c = out.cells[i];
        if (!c.report || c.report->degenerate || !c.report->converged) continue;
        if (!out.best || c.report->bic < out.cells[*out.best].report->bic) out.best = i;
    }
    return out;
}

}  // namespace rgpcm
