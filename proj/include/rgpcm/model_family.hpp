#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rgpcm/linalg.hpp"

namespace rgpcm {

// The eight rGPCM covariance structures. Names follow the family
// nomenclature exactly: "1I","GI","EI","VI","EE","EV","VV","VE".
enum class StructureTag { OneI, GI, EI, VI, EE, EV, VV, VE };

inline constexpr StructureTag kAllStructures[] = {
    StructureTag::OneI, StructureTag::GI, StructureTag::EI, StructureTag::VI,
    StructureTag::EE,   StructureTag::EV, StructureTag::VV, StructureTag::VE};

enum class OrientKind { Spherical, AxisAligned, Shared, Varying };

struct CovarianceStructure {
    StructureTag tag;

    bool shape_shared() const;   // is B common across groups
    OrientKind orient_kind() const;
    bool spherical() const { return orient_kind() == OrientKind::Spherical; }

    std::string name() const;
    static CovarianceStructure parse(const std::string& s);
};

// Eigenvalue/orientation factors for all G components under one structure.
// Spherical tags store one scalar per applicable group but expose a p-vector
// view; axis-aligned and spherical tags carry no orientation matrices
// (identity is implied).
class CovarianceFactors {
public:
    CovarianceFactors() = default;
    CovarianceFactors(CovarianceStructure structure, int G, int p,
                      std::vector<std::vector<double>> eigvals,
                      std::vector<OrthMatrix> orients);

    const CovarianceStructure& structure() const { return structure_; }
    int groups() const { return G_; }
    int dim() const { return p_; }

    // Expanded p-vector of eigenvalues for group g (spherical scalars are
    // broadcast).
    std::vector<double> eigenvalues(int g) const;

    // Stored (possibly scalar) eigenvalue vector(s); size 1 when shared.
    const std::vector<std::vector<double>>& stored_eigenvalues() const { return eig_; }

    // nullptr means identity orientation.
    const OrthMatrix* orientation(int g) const;
    const std::vector<OrthMatrix>& stored_orientations() const { return orient_; }

    double min_eigenvalue() const;
    double max_eigenvalue() const;

private:
    CovarianceStructure structure_{StructureTag::VV};
    int G_ = 0;
    int p_ = 0;
    std::vector<std::vector<double>> eig_;  // size 1 (shared) or G (varying)
    std::vector<OrthMatrix> orient_;        // size 0 (identity), 1 (shared) or G
};

// Component covariance Sigma_g = D_g diag(B_g) D_g', with identity
// orientation for spherical and axis-aligned tags.
SymMatrix assemble_sigma(const CovarianceFactors& f, int g);

// Free covariance parameters for one structure (the covariance column of the
// family's nomenclature table).
int count_free_params(CovarianceStructure structure, int G, int p);

// Total free parameters m = (G-1) + G*p + covariance part; this is the m of
// the BIC.
int total_free_params(CovarianceStructure structure, int G, int p);

}  // namespace rgpcm
