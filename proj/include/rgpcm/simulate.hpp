#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rgpcm/model_family.hpp"

namespace rgpcm {

enum class SampleFamily { Gaussian, StudentT };

// Generator description for one mixture data set. Orientation matrices are
// explicit so a spec pins the model exactly; only the sampling varies with
// the seed.
struct SimSpec {
    std::string name;
    CovarianceStructure structure{StructureTag::VV};
    int p = 0;
    std::vector<int> n_per_component;
    std::vector<std::vector<double>> means;
    std::vector<std::vector<double>> eigvals;  // one vector (shared B) or one per component
    std::vector<Matrix> orients;               // 0 (identity), 1 (shared D) or G matrices
    SampleFamily family = SampleFamily::Gaussian;
    double df = 0.0;                // StudentT only; must exceed 2 for finite covariance
    double noise_fraction = 0.0;    // uniform background noise, in [0, 1)

    int components() const { return static_cast<int>(n_per_component.size()); }
    void validate() const;
    SymMatrix sigma(int g) const;
};

struct SimData {
    Matrix x;
    std::vector<int> labels;     // generating component; noise rows get label G
    std::vector<bool> is_noise;
};

// x = mean + L z, z standard normal, L = cholesky(sigma).
Matrix sample_mvn(std::span<const double> mean, const SymMatrix& sigma, int n,
                  std::uint64_t seed);

// x = mean + L z / sqrt(w / df), w ~ chi-square(df).
Matrix sample_mvt(std::span<const double> mean, const SymMatrix& scale, double df, int n,
                  std::uint64_t seed);

struct NoiseResult {
    Matrix x;                    // original rows followed by the noise rows
    std::vector<bool> is_noise;
};

// Appends round(fraction * n) points drawn uniformly from the axis-aligned
// bounding box of the input data.
NoiseResult add_uniform_noise(const Matrix& data, double fraction, std::uint64_t seed);

// Orthonormalized standard-Gaussian matrix, column signs normalized.
OrthMatrix random_orthogonal(int p, std::uint64_t seed);

SimData generate(const SimSpec& spec, std::uint64_t seed);

// Built-in study specs: "sim1" (4-d two-component heavy-tailed EV mixture),
// "sim2" (3-d two-component Gaussian EE mixture) and "sim2-noise" (sim2 plus
// 5% uniform background noise).
SimSpec builtin_spec(const std::string& name);
std::vector<std::string> builtin_spec_names();

}  // namespace rgpcm
