#include "rgpcm/model_family.hpp"

#include <algorithm>
#include <stdexcept>

namespace rgpcm {

bool CovarianceStructure::shape_shared() const {
    switch (tag) {
        case StructureTag::OneI:
        case StructureTag::EI:
        case StructureTag::EE:
        case StructureTag::EV:
            return true;
        case StructureTag::GI:
        case StructureTag::VI:
        case StructureTag::VV:
        case StructureTag::VE:
            return false;
    }
    throw std::logic_error("unreachable");
}

OrientKind CovarianceStructure::orient_kind() const {
    switch (tag) {
        case StructureTag::OneI:
        case StructureTag::GI:
            return OrientKind::Spherical;
        case StructureTag::EI:
        case StructureTag::VI:
            return OrientKind::AxisAligned;
        case StructureTag::EE:
        case StructureTag::VE:
            return OrientKind::Shared;
        case StructureTag::EV:
        case StructureTag::VV:
            return OrientKind::Varying;
    }
    throw std::logic_error("unreachable");
}

std::string CovarianceStructure::name() const {
    switch (tag) {
        case StructureTag::OneI: return "1I";
        case StructureTag::GI: return "GI";
        case StructureTag::EI: return "EI";
        case StructureTag::VI: return "VI";
        case StructureTag::EE: return "EE";
        case StructureTag::EV: return "EV";
        case StructureTag::VV: return "VV";
        case StructureTag::VE: return "VE";
    }
    throw std::logic_error("unreachable");
}

CovarianceStructure CovarianceStructure::parse(const std::string& s) {
    for (StructureTag t : kAllStructures) {
        CovarianceStructure c{t};
        if (c.name() == s) return c;
    }
    throw std::invalid_argument("unknown covariance structure '" + s +
                                "' (expected one of 1I,GI,EI,VI,EE,EV,VV,VE)");
}

CovarianceFactors::CovarianceFactors(CovarianceStructure structure, int G, int p,
                                     std::vector<std::vector<double>> eigvals,
                                     std::vector<OrthMatrix> orients)
    : structure_(structure), G_(G), p_(p), eig_(std::move(eigvals)), orient_(std::move(orients)) {
    if (G < 1 || p < 1) throw std::invalid_argument("CovarianceFactors: G, p must be >= 1");

    const std::size_t want_eig = structure.shape_shared() ? 1 : static_cast<std::size_t>(G);
    if (eig_.size() != want_eig)
        throw std::invalid_argument("CovarianceFactors: expected " + std::to_string(want_eig) +
                                    " eigenvalue vectors");
    const std::size_t want_len = structure.spherical() ? 1 : static_cast<std::size_t>(p);
    for (const auto& v : eig_) {
        if (v.size() != want_len)
            throw std::invalid_argument("CovarianceFactors: eigenvalue vector length mismatch");
        for (double x : v)
            if (!(x > 0.0))
                throw std::invalid_argument("CovarianceFactors: eigenvalues must be positive");
    }

    std::size_t want_orient = 0;
    switch (structure.orient_kind()) {
        case OrientKind::Spherical:
        case OrientKind::AxisAligned: want_orient = 0; break;
        case OrientKind::Shared: want_orient = 1; break;
        case OrientKind::Varying: want_orient = static_cast<std::size_t>(G); break;
    }
    if (orient_.size() != want_orient)
        throw std::invalid_argument("CovarianceFactors: expected " + std::to_string(want_orient) +
                                    " orientation matrices");
    for (const auto& q : orient_)
        if (q.dim() != p) throw std::invalid_argument("CovarianceFactors: orientation dim mismatch");
}

std::vector<double> CovarianceFactors::eigenvalues(int g) const {
    if (g < 0 || g >= G_) throw std::out_of_range("CovarianceFactors::eigenvalues: bad group");
    const auto& stored = eig_[structure_.shape_shared() ? 0 : g];
    if (structure_.spherical()) return std::vector<double>(p_, stored[0]);
    return stored;
}

const OrthMatrix* CovarianceFactors::orientation(int g) const {
    if (g < 0 || g >= G_) throw std::out_of_range("CovarianceFactors::orientation: bad group");
    if (orient_.empty()) return nullptr;
    return orient_.size() == 1 ? &orient_[0] : &orient_[g];
}

double CovarianceFactors::min_eigenvalue() const {
    double m = eig_[0][0];
    for (const auto& v : eig_)
        for (double x : v) m = std::min(m, x);
    return m;
}

double CovarianceFactors::max_eigenvalue() const {
    double m = eig_[0][0];
    for (const auto& v : eig_)
        for (double x : v) m = std::max(m, x);
    return m;
}

SymMatrix assemble_sigma(const CovarianceFactors& f, int g) {
    const int p = f.dim();
    const std::vector<double> b = f.eigenvalues(g);
    const OrthMatrix* d = f.orientation(g);
    if (d == nullptr) return SymMatrix::diagonal(b);

    SymMatrix s(p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            double v = 0.0;
            for (int k = 0; k < p; ++k) v += (*d)(i, k) * b[k] * (*d)(j, k);
            s.set(i, j, v);
        }
    }
    return s;
}

int count_free_params(CovarianceStructure structure, int G, int p) {
    if (G < 1 || p < 1) throw std::invalid_argument("count_free_params: G, p must be >= 1");
    const int full = p * (p + 1) / 2;
    switch (structure.tag) {
        case StructureTag::OneI: return 1;
        case StructureTag::GI: return G;
        case StructureTag::EI: return p;
        case StructureTag::VI: return p * G;
        case StructureTag::EE: return full;
        case StructureTag::EV: return G * full - (G - 1) * p;
        case StructureTag::VV: return G * full;
        case StructureTag::VE: return full + (G - 1) * p;
    }
    throw std::logic_error("unreachable");
}

int total_free_params(CovarianceStructure structure, int G, int p) {
    return (G - 1) + G * p + count_free_params(structure, G, p);
}

}  // namespace rgpcm
