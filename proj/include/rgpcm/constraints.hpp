#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "rgpcm/linalg.hpp"

namespace rgpcm {

// Which eigenvalue bounds are active: none at all, lower only, upper only,
// or both (range).
enum class Regime { None, Lower, Upper, Range };

std::string regime_name(Regime r);
Regime parse_regime(const std::string& s);

inline constexpr Regime kAllRegimes[] = {Regime::None, Regime::Lower, Regime::Upper,
                                         Regime::Range};

// Relaxation schedule for dynamic initialization: during the first `length`
// EM iterations the bounds follow (a_i, b_i) = beta * (1 - v_i, 1 - log(1 - v_i))
// over an equidistant v-sequence from 0 to 1, so (a_1, b_1) = (beta, beta)
// and (a_k, b_k) = (0, inf).
struct ConstraintSchedule {
    int length = 25;
    double beta = 1.0;
};

struct Bounds {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
};

struct ConstraintSpec {
    Regime regime = Regime::None;
    // Static bounds; used when no schedule is configured.
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    std::optional<ConstraintSchedule> schedule;

    void validate() const;

    static ConstraintSpec none();
    static ConstraintSpec fixed(double a, double b);
    static ConstraintSpec dynamic(Regime regime, int length, double beta);
};

// The Eq.-style schedule map: (a, b) = beta * (1 - v, 1 - log(1 - v)),
// with b exactly +inf at v = 1. Requires v in [0, 1], beta > 0.
Bounds schedule_bounds(double v, double beta);

// Effective bounds at EM iteration t (1-based). After the schedule is
// exhausted the final pair persists. The regime masks which member of the
// pair is active; None always yields (0, inf).
Bounds regime_bounds(const ConstraintSpec& spec, int t);

// Smallest and largest eigenvalue of the sample covariance (n-1 denominator)
// of the full data set. Errors when the sample covariance is singular.
Bounds static_bounds_from_data(const Matrix& data);

}  // namespace rgpcm
