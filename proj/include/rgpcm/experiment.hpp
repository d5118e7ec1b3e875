#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rgpcm/dataset.hpp"
#include "rgpcm/selection.hpp"

namespace rgpcm {

// Configuration for the four-regime random-start convergence experiment: for
// every (structure, G, start) all requested regimes run from the same
// starting responsibilities.
struct ConvergenceConfig {
    std::vector<CovarianceStructure> structures;
    int g_min = 2;
    int g_max = 6;
    std::vector<Regime> regimes{Regime::None, Regime::Lower, Regime::Upper, Regime::Range};
    int starts = 50;
    std::uint64_t seed = 0;
    InitKind start_kind = InitKind::RandomPartition;
    int schedule_len = 25;
    double beta = 1.0;
    EmConfig em;             // constraint field is filled per regime
    double tie_tol = 1e-6;   // logliks this close share the "highest" credit

    void validate() const;
};

struct ConvergenceCell {
    CovarianceStructure structure;
    int G = 0;
    Regime regime{};
    // Fraction of starts where this regime attained the highest converged
    // log-likelihood across regimes (ties within tie_tol all count, so a row
    // can sum past 1); degenerate runs are excluded from the comparison.
    double top_share = 0.0;
    double degeneracy_share = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceCell> cells;
    int starts = 0;
};

ConvergenceReport run_convergence_experiment(const Matrix& data, const ConvergenceConfig& cfg);

// ---------------------------------------------------------------------------
// Report files. All numeric output uses 17 significant digits so identical
// runs produce byte-identical files.

// BIC grid, rows G ascending, one column per structure; NA for cells that
// degenerated or failed to converge.
void write_bic_table(const std::string& path, const SweepResult& result);

// Per-iteration log-likelihood and smallest/largest covariance eigenvalue,
// one file per fitted cell, named trace_<TAG>_<G>.csv.
void write_traces(const std::string& dir, const SweepResult& result);

void write_convergence_table(const std::string& path, const ConvergenceReport& report);

void write_classification_table(const std::string& path,
                                const std::vector<std::vector<long>>& table,
                                const std::vector<std::string>& truth_names);

void write_run_meta(const std::string& path, const nlohmann::ordered_json& meta);

// The resolved-behaviour notes every report carries (canonical eigenvalue
// alignment, regime semantics, tie handling, degeneracy policy).
nlohmann::ordered_json decision_metadata(const DegeneracyConfig& degeneracy);

struct ReportBundle {
    const SweepResult* sweep = nullptr;
    const ConvergenceReport* convergence = nullptr;
    const Dataset* data = nullptr;  // provides truth labels for the classification table
    nlohmann::ordered_json meta;
};

// Writes whichever of bic_table.csv, trace files, classification_table.csv,
// convergence_table.csv and run_meta.json apply to the bundle.
void emit_reports(const ReportBundle& bundle, const std::string& dir);

}  // namespace rgpcm
