#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rgpcm/em.hpp"
#include "rgpcm/init.hpp"

namespace rgpcm {

// Hard cluster assignment; labels in [0, G).
struct Partition {
    std::vector<int> labels;
    int G = 0;

    static Partition from_labels(std::vector<int> labels);
    int n() const { return static_cast<int>(labels.size()); }
};

// -2*loglik + m*log(n); lower is better everywhere in this library.
double bic(double loglik, int m, int n);

// Hubert-Arabie adjusted Rand index from the contingency table. Defined as 1
// when both numerator and denominator vanish (two trivial partitions).
double ari(const Partition& p1, const Partition& p2);

// Contingency counts, rows = truth, columns = predicted.
std::vector<std::vector<long>> classification_table(const Partition& truth,
                                                    const Partition& pred);

struct SweepCell {
    CovarianceStructure structure;
    int G = 0;
    std::optional<FitReport> report;  // empty when the fit threw
    std::string error;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    // Index of the minimal-BIC cell among converged, non-degenerate fits;
    // empty when every cell failed.
    std::optional<std::size_t> best;

    const SweepCell* best_cell() const { return best ? &cells[*best] : nullptr; }
    const SweepCell* cell(StructureTag tag, int G) const;
};

// Fits every (structure, G) combination independently (cells run on a worker
// pool, capped by the RGPCM_THREADS environment variable) and selects the
// minimal-BIC converged non-degenerate fit. Each cell derives its
// initialization from `init` with the same seed, so cells share starting
// partitions per G.
SweepResult sweep(const Matrix& data, const std::vector<CovarianceStructure>& structures,
                  int g_min, int g_max, const InitSpec& init, const EmConfig& config);

}  // namespace rgpcm
