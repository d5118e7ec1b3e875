#include "rgpcm/init.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace rgpcm {

std::string init_kind_name(InitKind k) {
    switch (k) {
        case InitKind::KMeans: return "kmeans";
        case InitKind::RandomPartition: return "random-partition";
        case InitKind::RandomResponsibilities: return "random-resp";
        case InitKind::Given: return "given";
    }
    throw std::logic_error("unreachable");
}

InitKind parse_init_kind(const std::string& s) {
    for (InitKind k : {InitKind::KMeans, InitKind::RandomPartition,
                       InitKind::RandomResponsibilities, InitKind::Given})
        if (init_kind_name(k) == s) return k;
    throw std::invalid_argument("unknown init kind '" + s +
                                "' (expected kmeans,random-partition,random-resp,given)");
}

namespace {

double sq_dist(const Matrix& data, int i, std::span<const double> center) {
    double d = 0.0;
    for (int j = 0; j < data.cols(); ++j) {
        const double v = data(i, j) - center[j];
        d += v * v;
    }
    return d;
}

int count_distinct_rows(const Matrix& data) {
    std::vector<int> idx(data.rows());
    std::iota(idx.begin(), idx.end(), 0);
    auto row_less = [&](int a, int b) {
        for (int j = 0; j < data.cols(); ++j) {
            if (data(a, j) < data(b, j)) return true;
            if (data(a, j) > data(b, j)) return false;
        }
        return false;
    };
    std::sort(idx.begin(), idx.end(), row_less);
    int distinct = data.rows() > 0 ? 1 : 0;
    for (std::size_t k = 1; k < idx.size(); ++k)
        if (row_less(idx[k - 1], idx[k])) ++distinct;
    return distinct;
}

struct LloydResult {
    std::vector<int> labels;
    double wcss = std::numeric_limits<double>::infinity();
};

LloydResult lloyd_once(const Matrix& data, int G, std::mt19937_64& rng) {
    const int n = data.rows();
    const int p = data.cols();

    // Initial centers: G distinct data points.
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<std::vector<double>> centers;
    for (int g = 0; g < G && !pool.empty();) {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        const int cand = pool[pick(rng)];
        std::erase(pool, cand);
        std::vector<double> c(data.row(cand).begin(), data.row(cand).end());
        if (std::none_of(centers.begin(), centers.end(),
                         [&](const auto& existing) { return existing == c; })) {
            centers.push_back(std::move(c));
            ++g;
        }
    }
    if (static_cast<int>(centers.size()) < G)
        throw std::invalid_argument("kmeans_init: fewer distinct points than G");

    LloydResult res;
    res.labels.assign(n, -1);
    constexpr int kMaxIter = 200;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(data, i, centers[0]);
            for (int g = 1; g < G; ++g) {
                const double d = sq_dist(data, i, centers[g]);
                if (d < best_d) {
                    best_d = d;
                    best = g;
                }
            }
            if (res.labels[i] != best) {
                res.labels[i] = best;
                changed = true;
            }
        }

        std::vector<int> sizes(G, 0);
        for (int lab : res.labels) ++sizes[lab];
        for (int g = 0; g < G; ++g) {
            if (sizes[g] > 0) continue;
            // Re-seed from the point farthest from its assigned center.
            int far = 0;
            double far_d = -1.0;
            for (int i = 0; i < n; ++i) {
                if (sizes[res.labels[i]] <= 1) continue;
                const double d = sq_dist(data, i, centers[res.labels[i]]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            --sizes[res.labels[far]];
            res.labels[far] = g;
            sizes[g] = 1;
            changed = true;
        }

        for (int g = 0; g < G; ++g) std::fill(centers[g].begin(), centers[g].end(), 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j) centers[res.labels[i]][j] += data(i, j);
        for (int g = 0; g < G; ++g)
            for (int j = 0; j < p; ++j) centers[g][j] /= sizes[g];

        if (!changed) break;
    }

    res.wcss = 0.0;
    for (int i = 0; i < n; ++i) res.wcss += sq_dist(data, i, centers[res.labels[i]]);
    return res;
}

}  // namespace

Responsibilities kmeans_init(const Matrix& data, int G, std::uint64_t seed, int restarts) {
    const int n = data.rows();
    if (G < 1) throw std::invalid_argument("kmeans_init: G must be >= 1");
    if (n < G) throw std::invalid_argument("kmeans_init: requires n >= G");
    if (restarts < 1) throw std::invalid_argument("kmeans_init: restarts must be >= 1");
    if (count_distinct_rows(data) < G)
        throw std::invalid_argument("kmeans_init: fewer distinct points than G");

    if (G == 1) return Responsibilities::hard(std::vector<int>(n, 0), 1);

    std::mt19937_64 rng(seed);
    LloydResult best;
    for (int r = 0; r < restarts; ++r) {
        LloydResult cur = lloyd_once(data, G, rng);
        if (cur.wcss < best.wcss) best = std::move(cur);
    }
    return Responsibilities::hard(best.labels, G);
}

Responsibilities random_init(int n, int G, std::uint64_t seed, InitKind kind) {
    if (G < 1 || n < G) throw std::invalid_argument("random_init: requires n >= G >= 1");
    std::mt19937_64 rng(seed);

    if (kind == InitKind::RandomPartition) {
        std::uniform_int_distribution<int> pick(0, G - 1);
        std::vector<int> labels(n);
        while (true) {
            std::vector<int> sizes(G, 0);
            for (int i = 0; i < n; ++i) {
                labels[i] = pick(rng);
                ++sizes[labels[i]];
            }
            if (std::all_of(sizes.begin(), sizes.end(), [](int s) { return s > 0; })) break;
        }
        return Responsibilities::hard(labels, G);
    }
    if (kind == InitKind::RandomResponsibilities) {
        // Flat Dirichlet rows: normalized unit exponentials.
        std::exponential_distribution<double> ex(1.0);
        Matrix r(n, G);
        for (int i = 0; i < n; ++i) {
            double sum = 0.0;
            for (int g = 0; g < G; ++g) {
                r(i, g) = ex(rng);
                sum += r(i, g);
            }
            for (int g = 0; g < G; ++g) r(i, g) /= sum;
        }
        return Responsibilities::from_matrix(std::move(r));
    }
    throw std::invalid_argument("random_init: kind must be random-partition or random-resp");
}

Responsibilities make_init(const Matrix& data, int G, const InitSpec& spec) {
    switch (spec.kind) {
        case InitKind::KMeans:
            return kmeans_init(data, G, spec.seed, spec.kmeans_restarts);
        case InitKind::RandomPartition:
        case InitKind::RandomResponsibilities:
            return random_init(data.rows(), G, spec.seed, spec.kind);
        case InitKind::Given:
            throw std::invalid_argument("make_init: 'given' initializations are supplied directly");
    }
    throw std::logic_error("unreachable");
}

}  // namespace rgpcm
