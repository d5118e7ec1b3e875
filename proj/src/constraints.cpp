#include "rgpcm/constraints.hpp"

#include <cmath>
#include <stdexcept>

namespace rgpcm {

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::None: return "none";
        case Regime::Lower: return "lower";
        case Regime::Upper: return "upper";
        case Regime::Range: return "range";
    }
    throw std::logic_error("unreachable");
}

Regime parse_regime(const std::string& s) {
    for (Regime r : kAllRegimes)
        if (regime_name(r) == s) return r;
    throw std::invalid_argument("unknown regime '" + s + "' (expected none,lower,upper,range)");
}

void ConstraintSpec::validate() const {
    if (!(lower >= 0.0)) throw std::invalid_argument("ConstraintSpec: lower bound must be >= 0");
    if (lower > upper) throw std::invalid_argument("ConstraintSpec: lower bound exceeds upper");
    if (schedule) {
        if (schedule->length < 2)
            throw std::invalid_argument("ConstraintSpec: schedule length must be >= 2");
        if (!(schedule->beta > 0.0))
            throw std::invalid_argument("ConstraintSpec: beta must be positive");
    }
}

ConstraintSpec ConstraintSpec::none() { return ConstraintSpec{}; }

ConstraintSpec ConstraintSpec::fixed(double a, double b) {
    ConstraintSpec s;
    s.regime = Regime::Range;
    s.lower = a;
    s.upper = b;
    s.validate();
    return s;
}

ConstraintSpec ConstraintSpec::dynamic(Regime regime, int length, double beta) {
    ConstraintSpec s;
    s.regime = regime;
    s.schedule = ConstraintSchedule{length, beta};
    s.validate();
    return s;
}

Bounds schedule_bounds(double v, double beta) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("schedule_bounds: v must be in [0,1]");
    if (!(beta > 0.0)) throw std::invalid_argument("schedule_bounds: beta must be positive");
    Bounds b;
    b.lower = beta * (1.0 - v);
    b.upper = v == 1.0 ? std::numeric_limits<double>::infinity()
                       : beta * (1.0 - std::log1p(-v));
    return b;
}

Bounds regime_bounds(const ConstraintSpec& spec, int t) {
    if (t < 1) throw std::invalid_argument("regime_bounds: t must be >= 1");
    spec.validate();
    if (spec.regime == Regime::None) return Bounds{};

    Bounds pair{spec.lower, spec.upper};
    if (spec.schedule) {
        const int k = spec.schedule->length;
        const int step = std::min(t, k);
        const double v = static_cast<double>(step - 1) / static_cast<double>(k - 1);
        pair = schedule_bounds(v, spec.schedule->beta);
    }

    switch (spec.regime) {
        case Regime::Range: return pair;
        case Regime::Lower: return Bounds{pair.lower, std::numeric_limits<double>::infinity()};
        case Regime::Upper: return Bounds{0.0, pair.upper};
        case Regime::None: break;
    }
    return Bounds{};
}

Bounds static_bounds_from_data(const Matrix& data) {
    const int n = data.rows();
    const int p = data.cols();
    if (n <= p) throw std::invalid_argument("static_bounds_from_data: requires n > p");

    std::vector<double> mean(p, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) mean[j] += data(i, j);
    for (int j = 0; j < p; ++j) mean[j] /= n;

    SymMatrix cov(p);
    for (int a = 0; a < p; ++a) {
        for (int b = a; b < p; ++b) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += (data(i, a) - mean[a]) * (data(i, b) - mean[b]);
            cov.set(a, b, s / (n - 1));
        }
    }

    const EigenPairs e = eig_sym(cov);
    const double lo = e.values.back();
    const double hi = e.values.front();
    if (!(lo > 1e-12 * std::max(hi, 1.0)))
        throw std::runtime_error(
            "static_bounds_from_data: sample covariance is singular; standardize the data or "
            "drop collinear columns");
    return Bounds{lo, hi};
}

}  // namespace rgpcm
