// rgpcm: model-based clustering with eigenvalue-constrained mixture models.
//
// Subcommands:
//   fit       sweep covariance structures and component counts over a data
//             set, select the lowest-BIC model, emit report files
//   sim       generate one of the built-in simulation study data sets
//   converge  the four-regime random-start convergence experiment
//
// The worker pool for sweeps and experiments is capped by the RGPCM_THREADS
// environment variable.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rgpcm/dataset.hpp"
#include "rgpcm/experiment.hpp"
#include "rgpcm/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace rgpcm;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, sep)) out.push_back(tok);
    return out;
}

std::vector<CovarianceStructure> parse_models(const std::string& arg) {
    std::vector<CovarianceStructure> out;
    if (arg == "all") {
        for (StructureTag t : kAllStructures) out.push_back(CovarianceStructure{t});
        return out;
    }
    for (const std::string& name : split(arg, ',')) out.push_back(CovarianceStructure::parse(name));
    if (out.empty()) throw CLI::ValidationError("--models", "no models given");
    return out;
}

std::pair<int, int> parse_range(const std::string& arg) {
    const auto parts = split(arg, ':');
    try {
        if (parts.size() == 1) {
            const int g = std::stoi(parts[0]);
            return {g, g};
        }
        if (parts.size() == 2) return {std::stoi(parts[0]), std::stoi(parts[1])};
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("--g", "expected G or MIN:MAX");
}

struct BoundsChoice {
    std::string mode = "none";  // none | data | manual
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
};

BoundsChoice parse_bounds(const std::string& arg) {
    BoundsChoice b;
    if (arg == "none" || arg == "data") {
        b.mode = arg;
        return b;
    }
    const auto parts = split(arg, ',');
    if (parts.size() == 2) {
        try {
            b.mode = "manual";
            b.lower = std::stod(parts[0]);
            b.upper = std::stod(parts[1]);
            return b;
        } catch (const std::exception&) {
        }
    }
    throw CLI::ValidationError("--bounds", "expected data, none, or A,B");
}

struct DataArgs {
    std::string data_path;
    std::string label_col;
    std::string sim_name;
    std::uint64_t sim_seed = 0;
    bool raw = false;
};

void add_data_options(CLI::App* cmd, DataArgs& args) {
    auto* data = cmd->add_option("--data", args.data_path, "CSV file with a header row");
    auto* sim = cmd->add_option("--sim-data", args.sim_name,
                                "built-in simulation (sim1, sim2, sim2-noise)");
    cmd->add_option("--label-col", args.label_col, "name of the truth label column");
    cmd->add_option("--sim-seed", args.sim_seed, "seed for --sim-data generation");
    cmd->add_flag("--raw", args.raw, "skip per-column standardization");
    data->excludes(sim);
    sim->excludes(data);
}

Dataset load_data(const DataArgs& args, ordered_json& meta) {
    Dataset d;
    if (!args.sim_name.empty()) {
        const SimData sim = generate(builtin_spec(args.sim_name), args.sim_seed);
        d.values = sim.x;
        for (int j = 0; j < d.values.cols(); ++j) d.columns.push_back("x" + std::to_string(j + 1));
        d.truth = Partition::from_labels(sim.labels);
        for (int g = 0; g < d.truth->G; ++g) d.truth_names.push_back("comp" + std::to_string(g + 1));
        meta["data"] = {{"sim", args.sim_name}, {"sim_seed", args.sim_seed}};
    } else if (!args.data_path.empty()) {
        d = load_csv(args.data_path,
                     args.label_col.empty() ? std::nullopt
                                            : std::optional<std::string>(args.label_col));
        meta["data"] = {{"file", args.data_path}, {"label_column", args.label_col}};
    } else {
        throw CLI::ValidationError("--data", "either --data or --sim-data is required");
    }
    if (!args.raw) d = standardize(d);
    meta["standardized"] = !args.raw;
    meta["n"] = d.n();
    meta["p"] = d.p();
    return d;
}

ordered_json em_meta(const EmConfig& em) {
    ordered_json j;
    j["max_iter"] = em.max_iter;
    j["tol"] = em.tol;
    j["inner_m"] = em.inner_m;
    return j;
}

int run_fit(const DataArgs& data_args, const std::string& models_arg, const std::string& g_arg,
            const std::string& bounds_arg, const std::string& regime_arg, int schedule_len,
            double beta, const std::string& init_arg, std::uint64_t seed, int restarts,
            int starts, EmConfig em, const std::string& out_dir) {
    ordered_json meta;
    meta["command"] = "fit";
    Dataset data = load_data(data_args, meta);

    const auto structures = parse_models(models_arg);
    const auto [g_min, g_max] = parse_range(g_arg);
    const BoundsChoice bounds = parse_bounds(bounds_arg);

    if (bounds.mode == "data") {
        const Bounds b = static_bounds_from_data(data.values);
        em.constraint = ConstraintSpec::fixed(b.lower, b.upper);
    } else if (bounds.mode == "manual") {
        em.constraint = ConstraintSpec::fixed(bounds.lower, bounds.upper);
    } else {
        em.constraint = ConstraintSpec::none();
    }
    if (!regime_arg.empty()) em.constraint.regime = parse_regime(regime_arg);
    if (schedule_len > 0) {
        if (bounds.mode != "none")
            throw CLI::ValidationError(
                "--schedule-len", "dynamic initialization replaces static bounds; drop --bounds");
        em.constraint.schedule = ConstraintSchedule{schedule_len, beta};
        if (em.constraint.regime == Regime::None) em.constraint.regime = Regime::Range;
    }
    em.constraint.validate();
    em.seed = seed;

    meta["models"] = models_arg;
    meta["g_min"] = g_min;
    meta["g_max"] = g_max;
    meta["bounds"] = {{"mode", bounds.mode},
                      {"lower", em.constraint.lower},
                      {"upper", std::isinf(em.constraint.upper)
                                    ? ordered_json("inf")
                                    : ordered_json(em.constraint.upper)}};
    meta["regime"] = regime_name(em.constraint.regime);
    if (em.constraint.schedule)
        meta["schedule"] = {{"length", em.constraint.schedule->length},
                            {"beta", em.constraint.schedule->beta}};
    meta["em"] = em_meta(em);
    meta["init"] = {{"kind", init_arg}, {"seed", seed}, {"restarts", restarts},
                    {"starts", starts}};
    meta["decisions"] = decision_metadata(em.degeneracy);

    InitSpec init;
    init.kind = parse_init_kind(init_arg);
    init.kmeans_restarts = restarts;

    // Multi-start: keep the best fit per cell by converged log-likelihood.
    SweepResult merged;
    for (int s = 0; s < starts; ++s) {
        init.seed = seed + static_cast<std::uint64_t>(s);
        SweepResult one = sweep(data.values, structures, g_min, g_max, init, em);
        if (s == 0) {
            merged = std::move(one);
            continue;
        }
        for (std::size_t i = 0; i < merged.cells.size(); ++i) {
            SweepCell& have = merged.cells[i];
            SweepCell& got = one.cells[i];
            const bool have_ok =
                have.report && !have.report->degenerate && have.report->converged;
            const bool got_ok = got.report && !got.report->degenerate && got.report->converged;
            if ((got_ok && !have_ok) ||
                (got_ok && have_ok && got.report->loglik > have.report->loglik))
                have = std::move(got);
        }
    }
    merged.best.reset();
    for (std::size_t i = 0; i < merged.cells.size(); ++i) {
        const auto& c = merged.cells[i];
        if (!c.report || c.report->degenerate || !c.report->converged) continue;
        if (!merged.best || c.report->bic < merged.cells[*merged.best].report->bic)
            merged.best = i;
    }

    ordered_json cells = ordered_json::array();
    for (const auto& c : merged.cells) {
        ordered_json j;
        j["structure"] = c.structure.name();
        j["G"] = c.G;
        if (c.report) {
            j["bic"] = c.report->bic;
            j["loglik"] = c.report->loglik;
            j["converged"] = c.report->converged;
            j["degenerate"] = c.report->degenerate;
            j["iterations"] = c.report->iterations;
        } else {
            j["error"] = c.error;
        }
        cells.push_back(j);
    }
    meta["cells"] = cells;

    if (const SweepCell* best = merged.best_cell()) {
        ordered_json j;
        j["structure"] = best->structure.name();
        j["G"] = best->G;
        j["bic"] = best->report->bic;
        j["loglik"] = best->report->loglik;
        if (data.truth)
            j["ari"] = ari(*data.truth, Partition::from_labels(best->report->map_labels));
        meta["result"] = j;
        std::cout << "best model: " << best->structure.name() << " with G=" << best->G
                  << " (BIC " << best->report->bic << ")\n";
    } else {
        meta["result"] = nullptr;
        std::cout << "no model selected: every cell degenerated or failed to converge\n";
    }

    ReportBundle bundle;
    bundle.sweep = &merged;
    bundle.data = &data;
    bundle.meta = std::move(meta);
    emit_reports(bundle, out_dir);
    std::cout << "reports written to " << out_dir << "\n";
    return 0;
}

ordered_json spec_to_json(const SimSpec& spec) {
    ordered_json j;
    j["name"] = spec.name;
    j["structure"] = spec.structure.name();
    j["p"] = spec.p;
    j["n_per_component"] = spec.n_per_component;
    j["means"] = spec.means;
    j["eigenvalues"] = spec.eigvals;
    ordered_json orients = ordered_json::array();
    for (const Matrix& m : spec.orients) {
        ordered_json rows = ordered_json::array();
        for (int i = 0; i < m.rows(); ++i) {
            ordered_json row = ordered_json::array();
            for (int jj = 0; jj < m.cols(); ++jj) row.push_back(m(i, jj));
            rows.push_back(row);
        }
        orients.push_back(rows);
    }
    j["orientations"] = orients;
    j["family"] = spec.family == SampleFamily::Gaussian ? "gaussian" : "student-t";
    if (spec.family == SampleFamily::StudentT) j["df"] = spec.df;
    j["noise_fraction"] = spec.noise_fraction;
    return j;
}

int run_sim(const std::string& name, std::uint64_t seed, const std::string& out_dir,
            bool dump_spec) {
    const SimSpec spec = builtin_spec(name);
    if (dump_spec) {
        std::cout << spec_to_json(spec).dump(2) << "\n";
        return 0;
    }
    const SimData sim = generate(spec, seed);
    fs::create_directories(out_dir);

    std::vector<std::string> columns;
    for (int j = 0; j < sim.x.cols(); ++j) columns.push_back("x" + std::to_string(j + 1));
    const std::string csv = out_dir + "/" + name + ".csv";
    write_csv(csv, sim.x, columns, &sim.labels, "class");

    ordered_json meta;
    meta["command"] = "sim";
    meta["seed"] = seed;
    meta["spec"] = spec_to_json(spec);
    meta["rows"] = sim.x.rows();
    write_run_meta(out_dir + "/run_meta.json", meta);
    std::cout << "wrote " << csv << "\n";
    return 0;
}

int run_converge(const DataArgs& data_args, const std::string& models_arg,
                 const std::string& g_arg, const std::string& regimes_arg, int starts,
                 int schedule_len, double beta, const std::string& start_kind,
                 std::uint64_t seed, EmConfig em, const std::string& out_dir) {
    ordered_json meta;
    meta["command"] = "converge";
    Dataset data = load_data(data_args, meta);

    ConvergenceConfig cfg;
    cfg.structures = parse_models(models_arg);
    std::tie(cfg.g_min, cfg.g_max) = parse_range(g_arg);
    cfg.regimes.clear();
    for (const std::string& r : split(regimes_arg, ',')) cfg.regimes.push_back(parse_regime(r));
    cfg.starts = starts;
    cfg.seed = seed;
    cfg.start_kind = parse_init_kind(start_kind);
    cfg.schedule_len = schedule_len;
    cfg.beta = beta;
    cfg.em = em;

    meta["models"] = models_arg;
    meta["g_min"] = cfg.g_min;
    meta["g_max"] = cfg.g_max;
    meta["regimes"] = regimes_arg;
    meta["starts"] = starts;
    meta["seed"] = seed;
    meta["start_kind"] = start_kind;
    meta["schedule"] = {{"length", schedule_len}, {"beta", beta}};
    meta["em"] = em_meta(em);
    meta["tie_tolerance"] = cfg.tie_tol;
    meta["decisions"] = decision_metadata(em.degeneracy);

    const ConvergenceReport report = run_convergence_experiment(data.values, cfg);

    ReportBundle bundle;
    bundle.convergence = &report;
    bundle.meta = std::move(meta);
    emit_reports(bundle, out_dir);
    std::cout << "convergence table written to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rgpcm: eigenvalue-constrained Gaussian mixture clustering"};
    app.require_subcommand(1);

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "model sweep with BIC selection");
    DataArgs fit_data;
    add_data_options(fit_cmd, fit_data);
    std::string models = "all", g_range = "1:6", bounds = "none", regime, init_kind = "kmeans";
    int schedule_len = 0, restarts = 10, starts = 1;
    double beta = 1.0;
    std::uint64_t seed = 0;
    EmConfig em;
    std::string out_dir = "rgpcm_out";
    fit_cmd->add_option("--models", models, "comma-separated structure tags or 'all'");
    fit_cmd->add_option("--g", g_range, "component count or MIN:MAX range");
    fit_cmd->add_option("--bounds,--static-bounds", bounds,
                        "eigenvalue bounds: data, none, or A,B");
    fit_cmd->add_option("--regime", regime, "constraint regime: none,lower,upper,range");
    fit_cmd->add_option("--schedule-len", schedule_len, "dynamic-initialization schedule length");
    fit_cmd->add_option("--beta", beta, "schedule scale (valid for standardized data)");
    fit_cmd->add_option("--init", init_kind, "kmeans, random-partition or random-resp");
    fit_cmd->add_option("--seed", seed, "base RNG seed");
    fit_cmd->add_option("--restarts", restarts, "k-means restarts");
    fit_cmd->add_option("--starts", starts, "independent starts per cell (seeds seed..seed+N-1)");
    fit_cmd->add_option("--max-iter", em.max_iter, "EM iteration cap");
    fit_cmd->add_option("--tol", em.tol, "relative log-likelihood tolerance");
    fit_cmd->add_option("--inner-m", em.inner_m, "B/D alternations per M-step");
    fit_cmd->add_option("--out", out_dir, "output directory");

    // sim
    auto* sim_cmd = app.add_subcommand("sim", "generate a built-in simulation data set");
    std::string sim_name = "sim2";
    std::uint64_t sim_seed = 0;
    std::string sim_out = "rgpcm_out";
    bool dump_spec = false;
    sim_cmd->add_option("--name", sim_name, "sim1, sim2 or sim2-noise")->required();
    sim_cmd->add_option("--seed", sim_seed, "RNG seed");
    sim_cmd->add_option("--out", sim_out, "output directory");
    sim_cmd->add_flag("--dump-spec", dump_spec, "print the generator spec as JSON and exit");

    // converge
    auto* conv_cmd = app.add_subcommand("converge", "four-regime random-start experiment");
    DataArgs conv_data;
    add_data_options(conv_cmd, conv_data);
    std::string conv_models = "all", conv_g = "2:6", regimes = "none,lower,upper,range";
    std::string start_kind = "random-partition";
    int conv_starts = 50, conv_sched = 25;
    double conv_beta = 1.0;
    std::uint64_t conv_seed = 0;
    EmConfig conv_em;
    std::string conv_out = "rgpcm_out";
    conv_cmd->add_option("--models", conv_models, "comma-separated structure tags or 'all'");
    conv_cmd->add_option("--g", conv_g, "component count range MIN:MAX");
    conv_cmd->add_option("--regimes", regimes, "comma-separated regimes to compare");
    conv_cmd->add_option("--starts", conv_starts, "random starting points per cell");
    conv_cmd->add_option("--schedule-len", conv_sched, "schedule length");
    conv_cmd->add_option("--beta", conv_beta, "schedule scale");
    conv_cmd->add_option("--start-kind", start_kind, "random-partition or random-resp");
    conv_cmd->add_option("--seed", conv_seed, "base RNG seed");
    conv_cmd->add_option("--max-iter", conv_em.max_iter, "EM iteration cap");
    conv_cmd->add_option("--tol", conv_em.tol, "relative log-likelihood tolerance");
    conv_cmd->add_option("--out", conv_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit_cmd->parsed())
            return run_fit(fit_data, models, g_range, bounds, regime, schedule_len, beta,
                           init_kind, seed, restarts, starts, em, out_dir);
        if (sim_cmd->parsed()) return run_sim(sim_name, sim_seed, sim_out, dump_spec);
        if (conv_cmd->parsed())
            return run_converge(conv_data, conv_models, conv_g, regimes, conv_starts, conv_sched,
                                conv_beta, start_kind, conv_seed, conv_em, conv_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
