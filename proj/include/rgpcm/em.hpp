#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rgpcm/constraints.hpp"
#include "rgpcm/model_family.hpp"

namespace rgpcm {

// Posterior membership probabilities, one row per observation. Rows sum to 1
// (enforced on construction); counts[g] is the effective group size n_g.
class Responsibilities {
public:
    Responsibilities() = default;

    // Validates rows within `tol` of 1, then renormalizes exactly.
    static Responsibilities from_matrix(Matrix r, double tol = 1e-12);
    // Hard 0/1 assignment from labels in [0, G).
    static Responsibilities hard(const std::vector<int>& labels, int G);

    int n() const { return r_.rows(); }
    int groups() const { return r_.cols(); }
    double operator()(int i, int g) const { return r_(i, g); }
    const Matrix& matrix() const { return r_; }
    const std::vector<double>& counts() const { return counts_; }

private:
    Matrix r_;
    std::vector<double> counts_;
};

// Degeneracy thresholds; the defaults assume standardized data.
struct DegeneracyConfig {
    // Flag when any n_g < p + count_margin.
    double count_margin = 1.0;
    // Flag when any pre-clamp candidate eigenvalue drops below this.
    double min_candidate_eigenvalue = 1e-10;
    // Flag when the log-likelihood jumps by more than this in one iteration.
    double max_loglik_jump = 1e6;
};

struct EmConfig {
    int max_iter = 1000;
    double tol = 1e-8;  // relative log-likelihood change
    int inner_m = 1;    // B <-> D alternations per M-step
    ConstraintSpec constraint;
    DegeneracyConfig degeneracy;
    std::uint64_t seed = 0;  // recorded in reports; fit itself is deterministic
    bool record_factors = false;

    void validate() const;
};

struct MixtureModel {
    int G = 0;
    int p = 0;
    std::vector<double> weights;             // pi_g, strictly positive, sum 1
    std::vector<std::vector<double>> means;  // mu_g
    CovarianceFactors factors;

    const CovarianceStructure& structure() const { return factors.structure(); }
    SymMatrix sigma(int g) const { return assemble_sigma(factors, g); }
};

struct FitReport {
    MixtureModel model;
    std::vector<double> loglik_trace;   // observed-data log-likelihood per iteration
    std::vector<double> min_eig_trace;  // smallest covariance eigenvalue after each M-step
    std::vector<double> max_eig_trace;
    double loglik = -std::numeric_limits<double>::infinity();
    double bic = std::numeric_limits<double>::quiet_NaN();
    std::vector<int> map_labels;
    bool converged = false;
    bool degenerate = false;
    std::string degeneracy_reason;  // "", "count", "candidate" or "jump"
    bool flury_budget_hit = false;
    int iterations = 0;
    std::vector<CovarianceFactors> factor_trace;  // filled when record_factors
};

// ---------------------------------------------------------------------------
// Densities and the E-step

// Log of the multivariate Gaussian density, via Cholesky of sigma.
double log_density_gauss(std::span<const double> x, std::span<const double> mean,
                         const SymMatrix& sigma);

struct EStepResult {
    Responsibilities resp;
    double loglik = 0.0;
};

// Log-space responsibilities (log-sum-exp per row) plus the observed-data
// log-likelihood.
EStepResult e_step(const Matrix& data, const MixtureModel& model);

// ---------------------------------------------------------------------------
// M-step pieces

struct MomentStats {
    std::vector<double> weights;             // pi_g = n_g / n
    std::vector<std::vector<double>> means;  // mu_g
    std::vector<SymMatrix> scatters;         // S_g
    std::vector<double> counts;              // n_g
};

// Weights, weighted means and per-group scatter matrices
// S_g = (1/n_g) sum_i z_ig (x_i - mu_g)(x_i - mu_g)'.
MomentStats m_step_weights_means(const Matrix& data, const Responsibilities& r);

// min(b, max(v_k, a)) per entry, with a hard floor keeping values positive so
// log-determinants stay finite even at a = 0.
std::vector<double> clamp_eigs(std::span<const double> v, double a, double b);

struct BUpdate {
    std::vector<std::vector<double>> values;  // clamped; size G (varying) or 1 (common)
    double min_candidate = std::numeric_limits<double>::infinity();  // smallest pre-clamp entry
};

// Per-group eigenvalue update: B_g = clamp(diag(D_g' S_g D_g)).
BUpdate update_B_varying(const std::vector<SymMatrix>& scatters,
                         const std::vector<const OrthMatrix*>& orients, Bounds bounds);

// Common eigenvalue update: B = clamp(diag(sum_g pi_g D_g' S_g D_g)).
BUpdate update_B_common(const std::vector<SymMatrix>& scatters,
                        const std::vector<const OrthMatrix*>& orients,
                        std::span<const double> weights, Bounds bounds);

// Unconstrained orientation update: eigenvectors of S_g, columns in
// descending-eigenvalue order.
std::vector<OrthMatrix> update_D_varying(const std::vector<SymMatrix>& scatters);

struct FlurryResult {
    OrthMatrix d;
    std::vector<double> objective_trace;  // objective after each sweep
    bool converged = true;                // false when the sweep budget ran out
    int sweeps = 0;
};

// Shared orientation via the pairwise-rotation (F-) algorithm: minimizes
// sum_g n_g sum_k (d_k' S_g d_k) / b_gk over orthonormal D, sweeping column
// pairs until the objective change drops below 1e-10 (scaled) or the sweep
// budget is hit. `eigvals` has one vector per group (pass the shared vector G
// times for a common-B structure). With a single group this reduces to
// update_D_varying.
FlurryResult update_D_common(const std::vector<SymMatrix>& scatters,
                             std::span<const double> counts,
                             const std::vector<std::vector<double>>& eigvals,
                             const OrthMatrix* warm_start = nullptr, int max_sweeps = 100);

// Objective the F-algorithm minimizes, exposed for tests.
double flury_objective(const Matrix& d, const std::vector<SymMatrix>& scatters,
                       std::span<const double> counts,
                       const std::vector<std::vector<double>>& eigvals);

struct CovUpdate {
    CovarianceFactors factors;
    double min_candidate = std::numeric_limits<double>::infinity();
    bool flury_budget_hit = false;
};

// Structure-dispatched covariance M-step: alternates the D and B conditional
// updates `inner_m` times (warm-started from `previous` when available); all
// output eigenvalues lie in [bounds.lower, bounds.upper].
CovUpdate m_step_covariance(CovarianceStructure structure, const std::vector<SymMatrix>& scatters,
                            std::span<const double> counts, std::span<const double> weights,
                            const CovarianceFactors* previous, Bounds bounds, int inner_m);

// True iff any n_g < p + margin, any pre-clamp candidate eigenvalue fell
// below the configured threshold, or the log-likelihood jumped by more than
// the configured amount in one iteration. The count and candidate checks
// describe covariance collapse, which an active lower eigenvalue bound
// repairs by clamping; they therefore apply only when `active_lower` is
// effectively vacuous. The jump check always applies.
bool detect_degeneracy(std::span<const double> counts, int p, double min_candidate,
                       double loglik_jump, const DegeneracyConfig& cfg,
                       double active_lower = 0.0);

// ---------------------------------------------------------------------------
// Full constrained EM

// Constrained alternating-conditional-maximization EM from an initial
// responsibility matrix: runs the dynamic schedule phase (when configured)
// followed by fixed-constraint iterations until the relative log-likelihood
// change drops below tol or max_iter is reached. Degeneracy yields a report
// with degenerate=true carrying the last pre-collapse parameters.
FitReport fit(const Matrix& data, CovarianceStructure structure, int G,
              const Responsibilities& init, const EmConfig& config);

}  // namespace rgpcm
