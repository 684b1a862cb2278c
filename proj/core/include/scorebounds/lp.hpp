#pragma once

#include <cstddef>
#include <vector>

namespace scorebounds {

enum class RowSense { Ge, Le, Eq };

struct LPRow {
  std::vector<double> a;
  RowSense sense = RowSense::Ge;
  double rhs = 0.0;
};

/// minimize c'x subject to the rows and the per-variable box [lo, hi].
/// Lower bounds must be finite; hi may be +infinity. lo == hi pins the
/// variable.
struct LinearProgram {
  std::vector<double> c;
  std::vector<LPRow> rows;
  std::vector<double> lo;
  std::vector<double> hi;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  double value = 0.0;
  std::vector<double> x;
};

/// Two-phase primal simplex on the bounded-variable standard form.
LPResult solve_lp(const LinearProgram& lp);

}  // namespace scorebounds
