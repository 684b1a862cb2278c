#pragma once

#include <cstddef>
#include <vector>

#include "scorebounds/confidence.hpp"
#include "scorebounds/lp.hpp"
#include "scorebounds/types.hpp"

namespace scorebounds {

/// Screening outcome for one support point. Skipped means the confidence
/// band for g_0(x_j) straddles zero and the point contributes no
/// constraint.
enum class GroupSign { Positive, Negative, Skipped };

/// Positive iff g_hat - s > 0, Negative iff g_hat + s < 0, Skipped
/// otherwise (including exact ties at 0 when s = 0).
std::vector<GroupSign> screen(const std::vector<double>& g_hat,
                              const HalfWidths& hw);

/// Direction and box for the projection LPs. The normalization is encoded
/// by pinning a coordinate with lo == hi.
struct BoundsSpec {
  std::vector<double> r;
  std::vector<double> lo;
  std::vector<double> hi;
  double epsilon = 0.0;
};

/// Default box [-10, 10]^q with coordinate `pin` fixed at `pin_value`.
BoundsSpec default_spec(std::size_t q, std::size_t pin, double pin_value,
                        double half_width = 10.0);

/// One inequality per screened support point:
/// Positive -> x_j'b >= eps, Negative -> x_j'b <= -eps.
std::vector<LPRow> build_constraints(const GroupedData& grouped,
                                     const std::vector<GroupSign>& signs,
                                     double epsilon);

/// Interval-covariate variant over (beta, delta) with delta >= 0 assumed.
/// Positive -> beta'x_j + delta'v_hi_j >= eps (best case over the
/// unobserved covariate), Negative -> beta'x_j + delta'v_lo_j <= -eps.
std::vector<LPRow> build_constraints_interval(
    const GroupedData& grouped, const std::vector<GroupSign>& signs,
    double epsilon);

struct BoundInterval {
  bool feasible = false;
  double lo = 0.0;
  double hi = 0.0;
  /// The endpoint sits on the box rather than on a sign constraint, so it
  /// reflects the search region, not the data.
  bool lo_box_binding = false;
  bool hi_box_binding = false;
  std::vector<double> argmin;
  std::vector<double> argmax;
};

/// min and max of r'b over the constrained box.
BoundInterval bound_interval(const std::vector<LPRow>& rows,
                             const BoundsSpec& spec);

}  // namespace scorebounds
