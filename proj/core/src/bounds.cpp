#include "scorebounds/bounds.hpp"

#include <cmath>

namespace scorebounds {

std::vector<GroupSign> screen(const std::vector<double>& g_hat,
                              const HalfWidths& hw) {
  if (g_hat.size() != hw.s.size()) {
    throw validation_error("screen: estimate and half-width sizes differ");
  }
  std::vector<GroupSign> signs(g_hat.size(), GroupSign::Skipped);
  for (std::size_t j = 0; j < g_hat.size(); ++j) {
    if (!(hw.s[j] >= 0.0)) {
      throw validation_error("screen: negative half-width");
    }
    if (g_hat[j] - hw.s[j] > 0.0) {
      signs[j] = GroupSign::Positive;
    } else if (g_hat[j] + hw.s[j] < 0.0) {
      signs[j] = GroupSign::Negative;
    }
  }
  return signs;
}

BoundsSpec default_spec(std::size_t q, std::size_t pin, double pin_value,
                        double half_width) {
  if (pin >= q) throw validation_error("pinned coordinate out of range");
  BoundsSpec spec;
  spec.r.assign(q, 0.0);
  spec.lo.assign(q, -half_width);
  spec.hi.assign(q, half_width);
  spec.lo[pin] = pin_value;
  spec.hi[pin] = pin_value;
  return spec;
}

std::vector<LPRow> build_constraints(const GroupedData& grouped,
                                     const std::vector<GroupSign>& signs,
                                     double epsilon) {
  if (signs.size() != grouped.J()) {
    throw validation_error("sign vector does not match group count");
  }
  std::vector<LPRow> rows;
  for (std::size_t j = 0; j < signs.size(); ++j) {
    if (signs[j] == GroupSign::Skipped) continue;
    LPRow row;
    row.a = grouped.groups[j].x;
    if (signs[j] == GroupSign::Positive) {
      row.sense = RowSense::Ge;
      row.rhs = epsilon;
    } else {
      row.sense = RowSense::Le;
      row.rhs = -epsilon;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<LPRow> build_constraints_interval(
    const GroupedData& grouped, const std::vector<GroupSign>& signs,
    double epsilon) {
  if (signs.size() != grouped.J()) {
    throw validation_error("sign vector does not match group count");
  }
  const std::size_t q = grouped.q;
  const std::size_t qv = grouped.q_v;
  std::vector<LPRow> rows;
  for (std::size_t j = 0; j < signs.size(); ++j) {
    if (signs[j] == GroupSign::Skipped) continue;
    const GroupSummary& g = grouped.groups[j];
    LPRow row;
    row.a.assign(q + qv, 0.0);
    for (std::size_t k = 0; k < q; ++k) row.a[k] = g.x[k];
    if (signs[j] == GroupSign::Positive) {
      for (std::size_t k = 0; k < qv; ++k) row.a[q + k] = g.v_hi[k];
      row.sense = RowSense::Ge;
      row.rhs = epsilon;
    } else {
      for (std::size_t k = 0; k < qv; ++k) row.a[q + k] = g.v_lo[k];
      row.sense = RowSense::Le;
      row.rhs = -epsilon;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

bool on_box(const BoundsSpec& spec, const std::vector<double>& x) {
  const double tol = 1e-7;
  for (std::size_t k = 0; k < spec.r.size(); ++k) {
    if (spec.r[k] == 0.0 || spec.lo[k] == spec.hi[k]) continue;
    if (x[k] <= spec.lo[k] + tol || x[k] >= spec.hi[k] - tol) return true;
  }
  return false;
}

}  // namespace

BoundInterval bound_interval(const std::vector<LPRow>& rows,
                             const BoundsSpec& spec) {
  const std::size_t q = spec.r.size();
  if (spec.lo.size() != q || spec.hi.size() != q) {
    throw validation_error("bound_interval: box dimension mismatch");
  }
  LinearProgram lp;
  lp.rows = rows;
  lp.lo = spec.lo;
  lp.hi = spec.hi;

  lp.c = spec.r;
  const LPResult lo_res = solve_lp(lp);
  BoundInterval out;
  if (lo_res.status == LPStatus::Infeasible) return out;
  if (lo_res.status != LPStatus::Optimal) {
    throw internal_error("projection LP unbounded over a finite box");
  }

  for (std::size_t k = 0; k < q; ++k) lp.c[k] = -spec.r[k];
  const LPResult hi_res = solve_lp(lp);
  if (hi_res.status != LPStatus::Optimal) {
    throw internal_error("max-side LP did not solve on a feasible region");
  }

  out.feasible = true;
  out.lo = lo_res.value;
  out.hi = -hi_res.value;
  out.argmin = lo_res.x;
  out.argmax = hi_res.x;
  out.lo_box_binding = on_box(spec, lo_res.x);
  out.hi_box_binding = on_box(spec, hi_res.x);
  return out;
}

}  // namespace scorebounds
