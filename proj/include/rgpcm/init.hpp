#pragma once

#include <cstdint>
#include <string>

#include "rgpcm/em.hpp"
#include "rgpcm/linalg.hpp"

namespace rgpcm {

enum class InitKind { KMeans, RandomPartition, RandomResponsibilities, Given };

std::string init_kind_name(InitKind k);
InitKind parse_init_kind(const std::string& s);

struct InitSpec {
    InitKind kind = InitKind::KMeans;
    std::uint64_t seed = 0;
    int kmeans_restarts = 10;
};

// Lloyd's algorithm with `restarts` random-point initializations, keeping the
// partition with the lowest within-cluster sum of squares. Empty clusters are
// re-seeded from the point farthest from its center. Errors when the data
// holds fewer than G distinct points.
Responsibilities kmeans_init(const Matrix& data, int G, std::uint64_t seed, int restarts = 10);

// RandomPartition: one uniform label per point, resampled until no group is
// empty. RandomResponsibilities: rows drawn from a flat Dirichlet.
Responsibilities random_init(int n, int G, std::uint64_t seed, InitKind kind);

// Dispatch on spec.kind (Given is the caller's job).
Responsibilities make_init(const Matrix& data, int G, const InitSpec& spec);

}  // namespace rgpcm
