#include "rgpcm/em.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rgpcm {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kEigFloor = 1e-300;  // keeps log-determinants finite at a = 0
}  // namespace

Responsibilities Responsibilities::from_matrix(Matrix r, double tol) {
    if (r.rows() < 1 || r.cols() < 1)
        throw std::invalid_argument("Responsibilities: empty matrix");
    Responsibilities out;
    out.counts_.assign(r.cols(), 0.0);
    for (int i = 0; i < r.rows(); ++i) {
        double sum = 0.0;
        for (int g = 0; g < r.cols(); ++g) {
            const double v = r(i, g);
            if (!(v >= 0.0) || v > 1.0 + tol)
                throw std::invalid_argument("Responsibilities: entry outside [0,1] at row " +
                                            std::to_string(i));
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol)
            throw std::invalid_argument("Responsibilities: row " + std::to_string(i) +
                                        " sums to " + std::to_string(sum));
        for (int g = 0; g < r.cols(); ++g) {
            r(i, g) /= sum;
            out.counts_[g] += r(i, g);
        }
    }
    out.r_ = std::move(r);
    return out;
}

Responsibilities Responsibilities::hard(const std::vector<int>& labels, int G) {
    if (G < 1) throw std::invalid_argument("Responsibilities: G must be >= 1");
    Matrix r(static_cast<int>(labels.size()), G);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= G)
            throw std::invalid_argument("Responsibilities: label out of range at row " +
                                        std::to_string(i));
        r(static_cast<int>(i), labels[i]) = 1.0;
    }
    return from_matrix(std::move(r));
}

void EmConfig::validate() const {
    if (max_iter < 1) throw std::invalid_argument("EmConfig: max_iter must be >= 1");
    if (inner_m < 1) throw std::invalid_argument("EmConfig: inner_m must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("EmConfig: tol must be positive");
    constraint.validate();
}

// ---------------------------------------------------------------------------
// Densities and E-step

double log_density_gauss(std::span<const double> x, std::span<const double> mean,
                         const SymMatrix& sigma) {
    const int p = sigma.dim();
    if (static_cast<int>(x.size()) != p || static_cast<int>(mean.size()) != p)
        throw std::invalid_argument("log_density_gauss: dimension mismatch");
    const Matrix l = cholesky(sigma);
    double logdet = 0.0;
    for (int i = 0; i < p; ++i) logdet += std::log(l(i, i));
    logdet *= 2.0;

    std::vector<double> diff(p);
    for (int i = 0; i < p; ++i) diff[i] = x[i] - mean[i];
    const std::vector<double> y = solve_lower(l, diff);
    double quad = 0.0;
    for (double v : y) quad += v * v;

    return -0.5 * (p * std::log(2.0 * kPi) + logdet + quad);
}

EStepResult e_step(const Matrix& data, const MixtureModel& model) {
    const int n = data.rows();
    const int p = data.cols();
    const int G = model.G;
    if (p != model.p) throw std::invalid_argument("e_step: data dimension mismatch");

    std::vector<Matrix> chol(G);
    std::vector<double> base(G);  // log pi_g - 0.5 (p log 2pi + logdet_g)
    for (int g = 0; g < G; ++g) {
        chol[g] = cholesky(model.sigma(g));
        double logdet = 0.0;
        for (int i = 0; i < p; ++i) logdet += std::log(chol[g](i, i));
        base[g] = std::log(model.weights[g]) - 0.5 * (p * std::log(2.0 * kPi) + 2.0 * logdet);
    }

    Matrix r(n, G);
    double loglik = 0.0;
    std::vector<double> logrow(G), diff(p);
    for (int i = 0; i < n; ++i) {
        for (int g = 0; g < G; ++g) {
            for (int j = 0; j < p; ++j) diff[j] = data(i, j) - model.means[g][j];
            const std::vector<double> y = solve_lower(chol[g], diff);
            double quad = 0.0;
            for (double v : y) quad += v * v;
            logrow[g] = base[g] - 0.5 * quad;
        }
        const double m = *std::max_element(logrow.begin(), logrow.end());
        double sum = 0.0;
        for (int g = 0; g < G; ++g) sum += std::exp(logrow[g] - m);
        const double lse = m + std::log(sum);
        loglik += lse;
        double rowsum = 0.0;
        for (int g = 0; g < G; ++g) {
            r(i, g) = std::exp(logrow[g] - lse);
            rowsum += r(i, g);
        }
        for (int g = 0; g < G; ++g) r(i, g) /= rowsum;
    }

    EStepResult out;
    out.resp = Responsibilities::from_matrix(std::move(r));
    out.loglik = loglik;
    return out;
}

// ---------------------------------------------------------------------------
// M-step pieces

MomentStats m_step_weights_means(const Matrix& data, const Responsibilities& r) {
    const int n = data.rows();
    const int p = data.cols();
    const int G = r.groups();
    if (r.n() != n) throw std::invalid_argument("m_step_weights_means: size mismatch");

    MomentStats out;
    out.counts = r.counts();
    out.weights.resize(G);
    out.means.assign(G, std::vector<double>(p, 0.0));
    out.scatters.assign(G, SymMatrix(p));

    for (int g = 0; g < G; ++g) out.weights[g] = out.counts[g] / n;

    for (int i = 0; i < n; ++i)
        for (int g = 0; g < G; ++g) {
            const double w = r(i, g);
            if (w == 0.0) continue;
            for (int j = 0; j < p; ++j) out.means[g][j] += w * data(i, j);
        }
    for (int g = 0; g < G; ++g) {
        const double inv = out.counts[g] > 0.0 ? 1.0 / out.counts[g] : 0.0;
        for (int j = 0; j < p; ++j) out.means[g][j] *= inv;
    }

    std::vector<double> diff(p);
    for (int i = 0; i < n; ++i) {
        for (int g = 0; g < G; ++g) {
            const double w = r(i, g);
            if (w == 0.0) continue;
            for (int j = 0; j < p; ++j) diff[j] = data(i, j) - out.means[g][j];
            for (int a = 0; a < p; ++a)
                for (int b = a; b < p; ++b) out.scatters[g].add(a, b, w * diff[a] * diff[b]);
        }
    }
    for (int g = 0; g < G; ++g) {
        const double inv = out.counts[g] > 0.0 ? 1.0 / out.counts[g] : 0.0;
        SymMatrix scaled(p);
        for (int a = 0; a < p; ++a)
            for (int b = a; b < p; ++b) scaled.set(a, b, out.scatters[g](a, b) * inv);
        out.scatters[g] = scaled;
    }
    return out;
}

std::vector<double> clamp_eigs(std::span<const double> v, double a, double b) {
    if (!(a >= 0.0) || a > b)
        throw std::invalid_argument("clamp_eigs: need 0 <= a <= b");
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        double x = std::min(b, std::max(v[k], a));
        if (x < kEigFloor) x = kEigFloor;
        out[k] = x;
    }
    return out;
}

namespace {

std::vector<double> diag_under(const SymMatrix& s, const OrthMatrix* q) {
    return q ? quad_diag(*q, s) : s.diagonal_vector();
}

double vec_min(std::span<const double> v) {
    double m = v[0];
    for (double x : v) m = std::min(m, x);
    return m;
}

double vec_mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

BUpdate update_B_varying(const std::vector<SymMatrix>& scatters,
                         const std::vector<const OrthMatrix*>& orients, Bounds bounds) {
    if (scatters.size() != orients.size())
        throw std::invalid_argument("update_B_varying: size mismatch");
    BUpdate out;
    for (std::size_t g = 0; g < scatters.size(); ++g) {
        const std::vector<double> v = diag_under(scatters[g], orients[g]);
        out.min_candidate = std::min(out.min_candidate, vec_min(v));
        out.values.push_back(clamp_eigs(v, bounds.lower, bounds.upper));
    }
    return out;
}

BUpdate update_B_common(const std::vector<SymMatrix>& scatters,
                        const std::vector<const OrthMatrix*>& orients,
                        std::span<const double> weights, Bounds bounds) {
    const std::size_t G = scatters.size();
    if (orients.size() != G || weights.size() != G)
        throw std::invalid_argument("update_B_common: size mismatch");
    const int p = scatters[0].dim();
    std::vector<double> v(p, 0.0);
    for (std::size_t g = 0; g < G; ++g) {
        const std::vector<double> dg = diag_under(scatters[g], orients[g]);
        for (int k = 0; k < p; ++k) v[k] += weights[g] * dg[k];
    }
    BUpdate out;
    out.min_candidate = vec_min(v);
    out.values.push_back(clamp_eigs(v, bounds.lower, bounds.upper));
    return out;
}

std::vector<OrthMatrix> update_D_varying(const std::vector<SymMatrix>& scatters) {
    std::vector<OrthMatrix> out;
    out.reserve(scatters.size());
    for (const SymMatrix& s : scatters) out.push_back(eig_sym(s).vectors);
    return out;
}

namespace {
// Keeps the 1/b weights finite; only engages for collapsed inputs.
constexpr double kFlurryEigFloor = 1e-12;
}  // namespace

double flury_objective(const Matrix& d, const std::vector<SymMatrix>& scatters,
                       std::span<const double> counts,
                       const std::vector<std::vector<double>>& eigvals) {
    const int p = d.rows();
    double obj = 0.0;
    for (std::size_t g = 0; g < scatters.size(); ++g) {
        for (int k = 0; k < p; ++k) {
            double q = 0.0;
            for (int i = 0; i < p; ++i) {
                double v = 0.0;
                for (int j = 0; j < p; ++j) v += scatters[g](i, j) * d(j, k);
                q += d(i, k) * v;
            }
            obj += counts[g] * q / std::max(eigvals[g][k], kFlurryEigFloor);
        }
    }
    return obj;
}

namespace {

// Modified Gram-Schmidt; used only to undo accumulated roundoff in a
// warm-start basis.
void reorthonormalize(Matrix& q) {
    const int p = q.rows();
    for (int k = 0; k < p; ++k) {
        for (int j = 0; j < k; ++j) {
            double dot = 0.0;
            for (int i = 0; i < p; ++i) dot += q(i, j) * q(i, k);
            for (int i = 0; i < p; ++i) q(i, k) -= dot * q(i, j);
        }
        double norm = 0.0;
        for (int i = 0; i < p; ++i) norm += q(i, k) * q(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) throw std::runtime_error("reorthonormalize: rank-deficient basis");
        for (int i = 0; i < p; ++i) q(i, k) /= norm;
    }
}

void normalize_sign(Matrix& d) {
    for (int k = 0; k < d.cols(); ++k) {
        int arg = 0;
        double best = 0.0;
        for (int i = 0; i < d.rows(); ++i)
            if (std::abs(d(i, k)) > best) {
                best = std::abs(d(i, k));
                arg = i;
            }
        if (d(arg, k) < 0.0)
            for (int i = 0; i < d.rows(); ++i) d(i, k) = -d(i, k);
    }
}

}  // namespace

FlurryResult update_D_common(const std::vector<SymMatrix>& scatters,
                             std::span<const double> counts,
                             const std::vector<std::vector<double>>& eigvals,
                             const OrthMatrix* warm_start, int max_sweeps) {
    const std::size_t G = scatters.size();
    if (G == 0) throw std::invalid_argument("update_D_common: no scatter matrices");
    if (counts.size() != G || eigvals.size() != G)
        throw std::invalid_argument("update_D_common: size mismatch");
    const int p = scatters[0].dim();

    if (G == 1) {
        FlurryResult r{eig_sym(scatters[0]).vectors, {}, true, 0};
        r.objective_trace.push_back(
            flury_objective(r.d.matrix(), scatters, counts, eigvals));
        return r;
    }

    Matrix d;
    if (warm_start) {
        if (warm_start->dim() != p)
            throw std::invalid_argument("update_D_common: warm start dim mismatch");
        d = warm_start->matrix();
        if (OrthMatrix::orthonormality_defect(d) > 1e-12) reorthonormalize(d);
    } else {
        SymMatrix pooled(p);
        for (std::size_t g = 0; g < G; ++g)
            for (int a = 0; a < p; ++a)
                for (int b = a; b < p; ++b) pooled.add(a, b, counts[g] * scatters[g](a, b));
        d = eig_sym(pooled).vectors.matrix();
    }

    FlurryResult res;
    double obj = flury_objective(d, scatters, counts, eigvals);
    res.objective_trace.push_back(obj);

    std::vector<double> sk(p), sl(p);
    res.converged = false;
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        for (int k = 0; k < p - 1; ++k) {
            for (int l = k + 1; l < p; ++l) {
                // 2x2 weighted problem for this column pair:
                // M = sum_g n_g (1/b_gk - 1/b_gl) * [d_k d_l]' S_g [d_k d_l]
                double m00 = 0.0, m01 = 0.0, m11 = 0.0;
                for (std::size_t g = 0; g < G; ++g) {
                    const double w =
                        counts[g] * (1.0 / std::max(eigvals[g][k], kFlurryEigFloor) -
                                     1.0 / std::max(eigvals[g][l], kFlurryEigFloor));
                    if (w == 0.0) continue;
                    const SymMatrix& s = scatters[g];
                    for (int i = 0; i < p; ++i) {
                        double vk = 0.0, vl = 0.0;
                        for (int j = 0; j < p; ++j) {
                            vk += s(i, j) * d(j, k);
                            vl += s(i, j) * d(j, l);
                        }
                        sk[i] = vk;
                        sl[i] = vl;
                    }
                    double tkk = 0.0, tkl = 0.0, tll = 0.0;
                    for (int i = 0; i < p; ++i) {
                        tkk += d(i, k) * sk[i];
                        tkl += d(i, k) * sl[i];
                        tll += d(i, l) * sl[i];
                    }
                    m00 += w * tkk;
                    m01 += w * tkl;
                    m11 += w * tll;
                }

                // Column k takes the eigenvector of M with the smallest
                // eigenvalue; column l its orthogonal complement.
                double q0, q1;
                const double scale = std::abs(m00) + std::abs(m11) + std::abs(m01);
                if (scale == 0.0 || std::abs(m01) <= 1e-15 * scale) {
                    if (m00 <= m11) continue;  // already minimal
                    q0 = 0.0;
                    q1 = 1.0;
                } else {
                    const double tau = (m11 - m00) / (2.0 * m01);
                    const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                     (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;
                    // Candidate columns (c,-s) and (s,c) with Rayleigh
                    // quotients m00 - t*m01 and m11 + t*m01.
                    if (m00 - t * m01 <= m11 + t * m01) {
                        q0 = c;
                        q1 = -s;
                    } else {
                        q0 = s;
                        q1 = c;
                    }
                }
                const double r0 = -q1, r1 = q0;
                for (int i = 0; i < p; ++i) {
                    const double dk = d(i, k);
                    const double dl = d(i, l);
                    d(i, k) = q0 * dk + q1 * dl;
                    d(i, l) = r0 * dk + r1 * dl;
                }
            }
        }
        res.sweeps = sweep;
        const double next = flury_objective(d, scatters, counts, eigvals);
        res.objective_trace.push_back(next);
        const double drop = obj - next;
        obj = next;
        if (std::abs(drop) < 1e-10 * std::max(1.0, std::abs(obj))) {
            res.converged = true;
            break;
        }
    }

    normalize_sign(d);
    res.d = OrthMatrix::from_matrix(std::move(d));
    return res;
}

namespace {

std::vector<const OrthMatrix*> as_pointers(const std::vector<OrthMatrix>& v) {
    std::vector<const OrthMatrix*> out;
    out.reserve(v.size());
    for (const auto& q : v) out.push_back(&q);
    return out;
}

}  // namespace

CovUpdate m_step_covariance(CovarianceStructure structure, const std::vector<SymMatrix>& scatters,
                            std::span<const double> counts, std::span<const double> weights,
                            const CovarianceFactors* previous, Bounds bounds, int inner_m) {
    const int G = static_cast<int>(scatters.size());
    if (G < 1) throw std::invalid_argument("m_step_covariance: no groups");
    const int p = scatters[0].dim();
    if (inner_m < 1) throw std::invalid_argument("m_step_covariance: inner_m must be >= 1");
    if (previous && previous->structure().tag != structure.tag)
        throw std::invalid_argument("m_step_covariance: previous factors from another structure");

    auto clamp1 = [&](double v) { return clamp_eigs(std::span(&v, 1), bounds.lower, bounds.upper)[0]; };

    CovUpdate out;
    switch (structure.orient_kind()) {
        case OrientKind::Spherical: {
            std::vector<std::vector<double>> eig;
            if (structure.shape_shared()) {  // 1I
                std::vector<double> v(p, 0.0);
                for (int g = 0; g < G; ++g) {
                    const std::vector<double> dg = scatters[g].diagonal_vector();
                    for (int k = 0; k < p; ++k) v[k] += weights[g] * dg[k];
                }
                const double cand = vec_mean(v);
                out.min_candidate = cand;
                eig.push_back({clamp1(cand)});
            } else {  // GI
                for (int g = 0; g < G; ++g) {
                    const double cand = vec_mean(scatters[g].diagonal_vector());
                    out.min_candidate = std::min(out.min_candidate, cand);
                    eig.push_back({clamp1(cand)});
                }
            }
            out.factors = CovarianceFactors(structure, G, p, std::move(eig), {});
            return out;
        }
        case OrientKind::AxisAligned: {
            const std::vector<const OrthMatrix*> ident(G, nullptr);
            BUpdate b = structure.shape_shared()
                            ? update_B_common(scatters, ident, weights, bounds)   // EI
                            : update_B_varying(scatters, ident, bounds);          // VI
            out.min_candidate = b.min_candidate;
            out.factors = CovarianceFactors(structure, G, p, std::move(b.values), {});
            return out;
        }
        case OrientKind::Varying: {
            // The orientation update does not depend on B, so the alternation
            // settles after one cycle: D_g from the eigenvectors of S_g, then
            // the clamped eigenvalue update.
            std::vector<OrthMatrix> d = update_D_varying(scatters);
            BUpdate b = structure.shape_shared()
                            ? update_B_common(scatters, as_pointers(d), weights, bounds)  // EV
                            : update_B_varying(scatters, as_pointers(d), bounds);         // VV
            out.min_candidate = b.min_candidate;
            out.factors = CovarianceFactors(structure, G, p, std::move(b.values), std::move(d));
            return out;
        }
        case OrientKind::Shared: {
            // EE / VE: shared D via the F-algorithm, eigenvalues given D.
            OrthMatrix d;
            std::vector<std::vector<double>> b_for_groups(G);
            if (previous) {
                d = *previous->orientation(0);
                for (int g = 0; g < G; ++g) b_for_groups[g] = previous->eigenvalues(g);
            } else {
                SymMatrix pooled(p);
                for (int g = 0; g < G; ++g)
                    for (int a = 0; a < p; ++a)
                        for (int bb = a; bb < p; ++bb)
                            pooled.add(a, bb, weights[g] * scatters[g](a, bb));
                d = eig_sym(pooled).vectors;
                if (structure.shape_shared()) {
                    const std::vector<double> shared =
                        clamp_eigs(quad_diag(d, pooled), bounds.lower, bounds.upper);
                    for (int g = 0; g < G; ++g) b_for_groups[g] = shared;
                } else {
                    for (int g = 0; g < G; ++g)
                        b_for_groups[g] =
                            clamp_eigs(quad_diag(d, scatters[g]), bounds.lower, bounds.upper);
                }
            }

            std::vector<std::vector<double>> eig;
            for (int cycle = 0; cycle < inner_m; ++cycle) {
                FlurryResult fr = update_D_common(scatters, counts, b_for_groups, &d);
                if (!fr.converged) out.flury_budget_hit = true;
                d = fr.d;

                const std::vector<const OrthMatrix*> shared_d(G, &d);
                BUpdate b = structure.shape_shared()
                                ? update_B_common(scatters, shared_d, weights, bounds)   // EE
                                : update_B_varying(scatters, shared_d, bounds);          // VE
                out.min_candidate = std::min(out.min_candidate, b.min_candidate);
                eig = b.values;
                for (int g = 0; g < G; ++g)
                    b_for_groups[g] = structure.shape_shared() ? eig[0] : eig[g];
            }
            out.factors = CovarianceFactors(structure, G, p, std::move(eig), {std::move(d)});
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

const char* degeneracy_reason_of(std::span<const double> counts, int p, double min_candidate,
                                 double loglik_jump, const DegeneracyConfig& cfg,
                                 double active_lower) {
    if (loglik_jump > cfg.max_loglik_jump) return "jump";
    if (active_lower >= cfg.min_candidate_eigenvalue) return nullptr;  // clamp repairs collapse
    for (double c : counts)
        if (c < p + cfg.count_margin) return "count";
    if (min_candidate < cfg.min_candidate_eigenvalue) return "candidate";
    return nullptr;
}

}  // namespace

bool detect_degeneracy(std::span<const double> counts, int p, double min_candidate,
                       double loglik_jump, const DegeneracyConfig& cfg,
                       double active_lower) {
    return degeneracy_reason_of(counts, p, min_candidate, loglik_jump, cfg, active_lower) !=
           nullptr;
}

// ---------------------------------------------------------------------------
// Full constrained EM

FitReport fit(const Matrix& data, CovarianceStructure structure, int G,
              const Responsibilities& init, const EmConfig& config) {
    config.validate();
    const int n = data.rows();
    const int p = data.cols();
    if (n <= G) throw std::invalid_argument("fit: requires n > G");
    if (init.n() != n) throw std::invalid_argument("fit: init has wrong number of rows");
    if (init.groups() != G) throw std::invalid_argument("fit: init has wrong number of groups");

    const int sched_len = (config.constraint.schedule && config.constraint.regime != Regime::None)
                              ? config.constraint.schedule->length
                              : 0;

    FitReport rep;
    Responsibilities r = init;
    std::optional<MixtureModel> model;  // last accepted (pre-collapse) state
    double prev_ll = 0.0;
    bool have_prev_ll = false;

    for (int t = 1; t <= config.max_iter; ++t) {
        const Bounds ab = regime_bounds(config.constraint, t);
        MomentStats stats = m_step_weights_means(data, r);
        CovUpdate cov =
            m_step_covariance(structure, stats.scatters, stats.counts, stats.weights,
                              model ? &model->factors : nullptr, ab, config.inner_m);
        rep.flury_budget_hit = rep.flury_budget_hit || cov.flury_budget_hit;

        MixtureModel next{G, p, std::move(stats.weights), std::move(stats.means),
                          std::move(cov.factors)};

        if (const char* reason = degeneracy_reason_of(stats.counts, p, cov.min_candidate, 0.0,
                                                      config.degeneracy, ab.lower)) {
            rep.degenerate = true;
            rep.degeneracy_reason = reason;
            if (!model) model = std::move(next);  // nothing earlier to fall back to
            break;
        }

        EStepResult e = e_step(data, next);

        if (have_prev_ll && e.loglik - prev_ll > config.degeneracy.max_loglik_jump) {
            // Unbounded-likelihood blow-up: keep the previous iteration's
            // model and responsibilities.
            rep.degenerate = true;
            rep.degeneracy_reason = "jump";
            break;
        }

        model = std::move(next);
        rep.iterations = t;
        rep.loglik_trace.push_back(e.loglik);
        rep.min_eig_trace.push_back(model->factors.min_eigenvalue());
        rep.max_eig_trace.push_back(model->factors.max_eigenvalue());
        if (config.record_factors) rep.factor_trace.push_back(model->factors);
        r = std::move(e.resp);

        if (have_prev_ll && t > sched_len &&
            std::abs(e.loglik - prev_ll) < config.tol * std::abs(e.loglik)) {
            rep.converged = true;
            break;
        }
        prev_ll = e.loglik;
        have_prev_ll = true;
    }

    rep.model = std::move(*model);
    if (!rep.loglik_trace.empty()) {
        rep.loglik = rep.loglik_trace.back();
        rep.bic = -2.0 * rep.loglik + total_free_params(structure, G, p) * std::log(n);
    }
    rep.map_labels.resize(n);
    for (int i = 0; i < n; ++i) {
        int arg = 0;
        for (int g = 1; g < r.groups(); ++g)
            if (r(i, g) > r(i, arg)) arg = g;  // ties keep the lowest index
        rep.map_labels[i] = arg;
    }
    return rep;
}

}  // namespace rgpcm
