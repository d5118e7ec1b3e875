#include "rgpcm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "parallel.hpp"

namespace rgpcm {

namespace {

// Appendix-style column order for report tables.
constexpr StructureTag kTableOrder[] = {StructureTag::EI, StructureTag::VI, StructureTag::EE,
                                        StructureTag::EV, StructureTag::VV, StructureTag::VE,
                                        StructureTag::GI, StructureTag::OneI};

std::vector<CovarianceStructure> ordered_structures(
    const std::vector<CovarianceStructure>& requested) {
    std::vector<CovarianceStructure> out;
    for (StructureTag t : kTableOrder)
        for (const auto& s : requested)
            if (s.tag == t) {
                out.push_back(s);
                break;
            }
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

void ConvergenceConfig::validate() const {
    if (structures.empty()) throw std::invalid_argument("ConvergenceConfig: no structures");
    if (g_min < 1 || g_max < g_min) throw std::invalid_argument("ConvergenceConfig: bad G range");
    if (regimes.empty()) throw std::invalid_argument("ConvergenceConfig: no regimes");
    if (starts < 1) throw std::invalid_argument("ConvergenceConfig: starts must be >= 1");
    if (schedule_len < 2) throw std::invalid_argument("ConvergenceConfig: schedule length < 2");
    if (!(beta > 0.0)) throw std::invalid_argument("ConvergenceConfig: beta must be positive");
    if (start_kind != InitKind::RandomPartition && start_kind != InitKind::RandomResponsibilities)
        throw std::invalid_argument("ConvergenceConfig: start kind must be random");
}

ConvergenceReport run_convergence_experiment(const Matrix& data, const ConvergenceConfig& cfg) {
    cfg.validate();
    const int n = data.rows();
    const int n_g = cfg.g_max - cfg.g_min + 1;
    const std::size_t n_struct = cfg.structures.size();
    const std::size_t n_regime = cfg.regimes.size();
    const std::size_t jobs = n_struct * n_g * static_cast<std::size_t>(cfg.starts);

    struct RunOutcome {
        double loglik = -std::numeric_limits<double>::infinity();
        bool degenerate = true;  // failed runs count as degenerate
    };
    // job-major, regime-minor
    std::vector<std::vector<RunOutcome>> outcomes(jobs, std::vector<RunOutcome>(n_regime));

    detail::parallel_for(jobs, [&](std::size_t job) {
        const int start = static_cast<int>(job % cfg.starts);
        const std::size_t rest = job / cfg.starts;
        const int G = cfg.g_min + static_cast<int>(rest % n_g);
        const CovarianceStructure structure = cfg.structures[rest / n_g];

        Responsibilities init;
        try {
            init = random_init(n, G, cfg.seed + static_cast<std::uint64_t>(start),
                               cfg.start_kind);
        } catch (const std::exception&) {
            return;  // leave all regimes marked degenerate/failed
        }

        for (std::size_t r = 0; r < n_regime; ++r) {
            EmConfig em = cfg.em;
            em.constraint = cfg.regimes[r] == Regime::None
                                ? ConstraintSpec::none()
                                : ConstraintSpec::dynamic(cfg.regimes[r], cfg.schedule_len,
                                                          cfg.beta);
            try {
                const FitReport rep = fit(data, structure, G, init, em);
                outcomes[job][r] = RunOutcome{rep.loglik, rep.degenerate};
            } catch (const std::exception&) {
                // keep the failed marker
            }
        }
    });

    ConvergenceReport report;
    report.starts = cfg.starts;
    for (std::size_t s = 0; s < n_struct; ++s) {
        for (int gi = 0; gi < n_g; ++gi) {
            std::vector<int> top(n_regime, 0), degen(n_regime, 0);
            for (int start = 0; start < cfg.starts; ++start) {
                const std::size_t job =
                    (s * n_g + gi) * static_cast<std::size_t>(cfg.starts) + start;
                double best = -std::numeric_limits<double>::infinity();
                for (std::size_t r = 0; r < n_regime; ++r)
                    if (!outcomes[job][r].degenerate)
                        best = std::max(best, outcomes[job][r].loglik);
                for (std::size_t r = 0; r < n_regime; ++r) {
                    if (outcomes[job][r].degenerate) {
                        ++degen[r];
                    } else if (outcomes[job][r].loglik >= best - cfg.tie_tol) {
                        ++top[r];
                    }
                }
            }
            for (std::size_t r = 0; r < n_regime; ++r) {
                ConvergenceCell cell;
                cell.structure = cfg.structures[s];
                cell.G = cfg.g_min + gi;
                cell.regime = cfg.regimes[r];
                cell.top_share = static_cast<double>(top[r]) / cfg.starts;
                cell.degeneracy_share = static_cast<double>(degen[r]) / cfg.starts;
                report.cells.push_back(cell);
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Report files

void write_bic_table(const std::string& path, const SweepResult& result) {
    std::vector<CovarianceStructure> structures;
    std::vector<int> gs;
    for (const auto& c : result.cells) {
        if (std::none_of(structures.begin(), structures.end(),
                         [&](const auto& s) { return s.tag == c.structure.tag; }))
            structures.push_back(c.structure);
        if (std::find(gs.begin(), gs.end(), c.G) == gs.end()) gs.push_back(c.G);
    }
    structures = ordered_structures(structures);
    std::sort(gs.begin(), gs.end());

    auto out = open_out(path);
    out << "G";
    for (const auto& s : structures) out << ',' << s.name();
    out << '\n';
    for (int G : gs) {
        out << G;
        for (const auto& s : structures) {
            const SweepCell* cell = result.cell(s.tag, G);
            out << ',';
            if (cell && cell->report && !cell->report->degenerate && cell->report->converged)
                out << format_g17(cell->report->bic);
            else
                out << "NA";
        }
        out << '\n';
    }
}

void write_traces(const std::string& dir, const SweepResult& result) {
    for (const auto& c : result.cells) {
        if (!c.report) continue;
        const std::string path =
            dir + "/trace_" + c.structure.name() + "_" + std::to_string(c.G) + ".csv";
        auto out = open_out(path);
        out << "iter,loglik,min_eig,max_eig\n";
        for (std::size_t t = 0; t < c.report->loglik_trace.size(); ++t)
            out << (t + 1) << ',' << format_g17(c.report->loglik_trace[t]) << ','
                << format_g17(c.report->min_eig_trace[t]) << ','
                << format_g17(c.report->max_eig_trace[t]) << '\n';
    }
}

void write_convergence_table(const std::string& path, const ConvergenceReport& report) {
    std::vector<Regime> regimes;
    for (const auto& c : report.cells)
        if (std::find(regimes.begin(), regimes.end(), c.regime) == regimes.end())
            regimes.push_back(c.regime);

    auto out = open_out(path);
    out << "model,G";
    for (Regime r : regimes) out << ",top_" << regime_name(r);
    for (Regime r : regimes) out << ",degen_" << regime_name(r);
    out << '\n';

    // Cells arrive regime-minor; group rows by (structure, G).
    for (std::size_t i = 0; i < report.cells.size(); i += regimes.size()) {
        const auto& first = report.cells[i];
        out << first.structure.name() << ',' << first.G;
        for (std::size_t r = 0; r < regimes.size(); ++r)
            out << ',' << format_g17(report.cells[i + r].top_share);
        for (std::size_t r = 0; r < regimes.size(); ++r)
            out << ',' << format_g17(report.cells[i + r].degeneracy_share);
        out << '\n';
    }
}

void write_classification_table(const std::string& path,
                                const std::vector<std::vector<long>>& table,
                                const std::vector<std::string>& truth_names) {
    auto out = open_out(path);
    const std::size_t cols = table.empty() ? 0 : table[0].size();
    out << "truth";
    for (std::size_t j = 0; j < cols; ++j) out << ",pred_" << (j + 1);
    out << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << (i < truth_names.size() ? truth_names[i] : std::to_string(i + 1));
        for (std::size_t j = 0; j < cols; ++j) out << ',' << table[i][j];
        out << '\n';
    }
}

void write_run_meta(const std::string& path, const nlohmann::ordered_json& meta) {
    auto out = open_out(path);
    out << meta.dump(2) << '\n';
}

nlohmann::ordered_json decision_metadata(const DegeneracyConfig& degeneracy) {
    nlohmann::ordered_json j;
    j["ev_alignment"] =
        "columns of each per-group orientation are ordered by descending eigenvalue of its own "
        "scatter before the shared eigenvalue average";
    j["regime_semantics"] =
        "lower keeps (a_t, inf), upper keeps (0, b_t), range keeps (a_t, b_t), none runs plain "
        "EM; the final schedule pair persists after the schedule ends";
    j["map_ties"] = "lowest component index wins";
    j["spherical_update"] = "scalar = mean of the diagonal vector, then clamped";
    j["degeneracy_thresholds"] = {
        {"min_count", std::string("p + ") + format_g17(degeneracy.count_margin)},
        {"min_candidate_eigenvalue", degeneracy.min_candidate_eigenvalue},
        {"max_loglik_jump", degeneracy.max_loglik_jump}};
    j["convergence_tie_tolerance"] = 1e-6;
    j["degenerate_runs_excluded_from_highest_loglik"] = true;
    return j;
}

void emit_reports(const ReportBundle& bundle, const std::string& dir) {
    std::filesystem::create_directories(dir);
    if (bundle.sweep) {
        write_bic_table(dir + "/bic_table.csv", *bundle.sweep);
        write_traces(dir, *bundle.sweep);
        if (bundle.data && bundle.data->truth && bundle.sweep->best_cell()) {
            const auto& best = *bundle.sweep->best_cell();
            const Partition pred = Partition::from_labels(best.report->map_labels);
            write_classification_table(dir + "/classification_table.csv",
                                       classification_table(*bundle.data->truth, pred),
                                       bundle.data->truth_names);
        }
    }
    if (bundle.convergence)
        write_convergence_table(dir + "/convergence_table.csv", *bundle.convergence);
    write_run_meta(dir + "/run_meta.json", bundle.meta);
}

}  // namespace rgpcm
