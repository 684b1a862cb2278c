#include "scorebounds/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scorebounds/types.hpp"

namespace scorebounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-9;
constexpr double kPivotTol = 1e-11;

// Full-tableau simplex over columns shifted to z in [0, U]. Nonbasic
// variables sit at 0; a variable at its upper bound is represented by the
// substitution z' = U - z ("flipped"), so every nonbasic value is 0 and the
// textbook pivot applies unchanged.
struct Tableau {
  std::size_t m = 0;        // rows
  std::size_t ncols = 0;    // structural + slack columns (no artificials)
  std::vector<std::vector<double>> T;
  std::vector<double> rhs;
  std::vector<double> d;    // reduced costs of the current phase
  std::vector<double> upper;
  std::vector<int> basis;   // column index per row; >= ncols means artificial
  std::vector<char> flipped;
  std::vector<char> in_basis;
  std::size_t pivots = 0;
  std::size_t bland_after = 0;

  void pivot(std::size_t r, std::size_t jc) {
    const double piv = T[r][jc];
    const double inv = 1.0 / piv;
    for (double& v : T[r]) v *= inv;
    rhs[r] *= inv;
    T[r][jc] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r) continue;
      const double f = T[i][jc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < ncols; ++j) T[i][j] -= f * T[r][j];
      T[i][jc] = 0.0;
      rhs[i] -= f * rhs[r];
    }
    const double f = d[jc];
    if (f != 0.0) {
      for (std::size_t j = 0; j < ncols; ++j) d[j] -= f * T[r][j];
      d[jc] = 0.0;
    }
    if (basis[r] >= 0 && static_cast<std::size_t>(basis[r]) < ncols) {
      in_basis[basis[r]] = 0;
    }
    basis[r] = static_cast<int>(jc);
    in_basis[jc] = 1;
    ++pivots;
  }

  void flip_column(std::size_t j) {
    const double u = upper[j];
    for (std::size_t i = 0; i < m; ++i) {
      rhs[i] -= T[i][j] * u;
      T[i][j] = -T[i][j];
    }
    d[j] = -d[j];
    flipped[j] = !flipped[j];
  }

  // Returns false when the chosen column proves the phase unbounded.
  bool step(std::size_t jc) {
    const bool bland = pivots > bland_after;
    double t_min = upper[jc];
    int leave_row = -1;        // -1 with finite t_min means a bound flip
    bool leave_at_upper = false;
    double best_piv = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = T[i][jc];
      double t;
      bool at_upper;
      if (a > kPivotTol) {
        t = std::max(rhs[i], 0.0) / a;
        at_upper = false;
      } else if (a < -kPivotTol) {
        const int bi = basis[i];
        const double ub =
            (bi >= 0 && static_cast<std::size_t>(bi) < ncols) ? upper[bi]
                                                              : kInf;
        if (ub == kInf) continue;
        t = (ub - rhs[i]) / (-a);
        at_upper = true;
      } else {
        continue;
      }
      bool better;
      if (t < t_min - kFeasTol) {
        better = true;
      } else if (t <= t_min + kFeasTol) {
        if (bland) {
          better = leave_row < 0 || basis[i] < basis[leave_row];
        } else {
          better = leave_row < 0 || std::fabs(a) > best_piv;
        }
      } else {
        better = false;
      }
      if (better) {
        t_min = std::min(t_min, t);
        leave_row = static_cast<int>(i);
        leave_at_upper = at_upper;
        best_piv = std::fabs(a);
      }
    }
    if (leave_row < 0) {
      if (t_min == kInf) return false;  // unbounded direction
      flip_column(jc);                  // entering variable hits its own bound
      ++pivots;
      return true;
    }
    const std::size_t r = static_cast<std::size_t>(leave_row);
    const int old = basis[r];
    pivot(r, jc);
    if (leave_at_upper && old >= 0 && static_cast<std::size_t>(old) < ncols) {
      flip_column(static_cast<std::size_t>(old));
    }
    return true;
  }

  // Dantzig rule, Bland after the pivot budget. Returns -1 at optimality.
  int choose_entering() const {
    const bool bland = pivots > bland_after;
    int best = -1;
    double best_d = -kFeasTol;
    for (std::size_t j = 0; j < ncols; ++j) {
      if (in_basis[j]) continue;
      if (d[j] < best_d) {
        best = static_cast<int>(j);
        best_d = d[j];
        if (bland) break;
      }
    }
    return best;
  }

  // Returns false on an unbounded phase.
  bool run() {
    const std::size_t cap = 20000 + 400 * (m + ncols);
    while (true) {
      if (pivots > cap) {
        throw internal_error("simplex iteration limit exceeded");
      }
      const int jc = choose_entering();
      if (jc < 0) return true;
      if (!step(static_cast<std::size_t>(jc))) return false;
    }
  }
};

}  // namespace

LPResult solve_lp(const LinearProgram& lp) {
  const std::size_t q = lp.c.size();
  if (lp.lo.size() != q || lp.hi.size() != q) {
    throw validation_error("LP box dimension mismatch");
  }
  for (std::size_t k = 0; k < q; ++k) {
    if (!std::isfinite(lp.lo[k])) {
      throw validation_error("LP lower bounds must be finite");
    }
    if (std::isnan(lp.hi[k]) || lp.hi[k] < lp.lo[k]) {
      return LPResult{LPStatus::Infeasible, 0.0, {}};
    }
  }
  for (const auto& row : lp.rows) {
    if (row.a.size() != q) {
      throw validation_error("LP row dimension mismatch");
    }
  }

  // Pinned variables are substituted into the right-hand sides; the rest
  // are shifted so the working variables live in [0, U].
  std::vector<int> col_of(q, -1);
  std::vector<std::size_t> var_of;
  for (std::size_t k = 0; k < q; ++k) {
    if (lp.hi[k] > lp.lo[k]) {
      col_of[k] = static_cast<int>(var_of.size());
      var_of.push_back(k);
    }
  }
  const std::size_t nf = var_of.size();
  const std::size_t m = lp.rows.size();

  std::size_t nslack = 0;
  for (const auto& row : lp.rows) {
    if (row.sense != RowSense::Eq) ++nslack;
  }
  const std::size_t ncols = nf + nslack;

  Tableau tab;
  tab.m = m;
  tab.ncols = ncols;
  tab.T.assign(m, std::vector<double>(ncols, 0.0));
  tab.rhs.assign(m, 0.0);
  tab.d.assign(ncols, 0.0);
  tab.upper.assign(ncols, kInf);
  tab.basis.assign(m, -1);
  tab.flipped.assign(ncols, 0);
  tab.in_basis.assign(ncols, 0);
  tab.bland_after = 10 * (ncols + m);
  for (std::size_t j = 0; j < nf; ++j) {
    tab.upper[j] = lp.hi[var_of[j]] - lp.lo[var_of[j]];
  }

  std::size_t slack = nf;
  for (std::size_t i = 0; i < m; ++i) {
    const LPRow& row = lp.rows[i];
    double r = row.rhs;
    for (std::size_t k = 0; k < q; ++k) r -= row.a[k] * lp.lo[k];
    for (std::size_t j = 0; j < nf; ++j) tab.T[i][j] = row.a[var_of[j]];
    if (row.sense == RowSense::Ge) {
      tab.T[i][slack++] = -1.0;
    } else if (row.sense == RowSense::Le) {
      tab.T[i][slack++] = 1.0;
    }
    if (r < 0.0) {
      r = -r;
      for (double& v : tab.T[i]) v = -v;
    }
    tab.rhs[i] = r;
    tab.basis[i] = static_cast<int>(ncols + i);  // artificial
  }

  // Phase 1: drive the artificial basis out. With basis = artificials and
  // unit phase-1 costs, the reduced cost of column j is -sum_i T[i][j].
  for (std::size_t j = 0; j < ncols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += tab.T[i][j];
    tab.d[j] = -s;
  }
  if (!tab.run()) {
    throw internal_error("phase-1 objective unbounded");
  }
  double p1 = 0.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    scale = std::max(scale, std::fabs(tab.rhs[i]));
    if (tab.basis[i] >= static_cast<int>(ncols)) p1 += tab.rhs[i];
  }
  if (p1 > kFeasTol * scale * static_cast<double>(std::max<std::size_t>(m, 1)) +
               kFeasTol) {
    return LPResult{LPStatus::Infeasible, 0.0, {}};
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis[i] < static_cast<int>(ncols)) continue;
    // Basic artificial at zero: pivot it out on any usable column. A fully
    // zero row is redundant and the artificial can stay parked at zero.
    for (std::size_t j = 0; j < ncols; ++j) {
      if (!tab.in_basis[j] && std::fabs(tab.T[i][j]) > 1e-7) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2 reduced costs from scratch; flipped columns carry negated cost.
  std::vector<double> cost(ncols, 0.0);
  for (std::size_t j = 0; j < nf; ++j) {
    cost[j] = tab.flipped[j] ? -lp.c[var_of[j]] : lp.c[var_of[j]];
  }
  for (std::size_t j = 0; j < ncols; ++j) {
    double dj = cost[j];
    for (std::size_t i = 0; i < m; ++i) {
      const int bi = tab.basis[i];
      if (bi >= 0 && static_cast<std::size_t>(bi) < ncols) {
        dj -= cost[bi] * tab.T[i][j];
      }
    }
    tab.d[j] = tab.in_basis[j] ? 0.0 : dj;
  }
  tab.pivots = 0;
  if (!tab.run()) {
    return LPResult{LPStatus::Unbounded, 0.0, {}};
  }

  LPResult res;
  res.status = LPStatus::Optimal;
  res.x.assign(q, 0.0);
  std::vector<double> z(nf, 0.0);
  for (std::size_t j = 0; j < nf; ++j) {
    if (tab.flipped[j]) z[j] = tab.upper[j];
  }
  for (std::size_t i = 0; i < m; ++i) {
    const int bi = tab.basis[i];
    if (bi >= 0 && static_cast<std::size_t>(bi) < static_cast<int>(nf)) {
      const double v = std::max(tab.rhs[i], 0.0);
      z[bi] = tab.flipped[bi] ? tab.upper[bi] - v : v;
    }
  }
  for (std::size_t k = 0; k < q; ++k) {
    res.x[k] = lp.lo[k];
  }
  for (std::size_t j = 0; j < nf; ++j) {
    const std::size_t k = var_of[j];
    res.x[k] = std::clamp(lp.lo[k] + z[j], lp.lo[k], lp.hi[k]);
  }
  double value = 0.0;
  for (std::size_t k = 0; k < q; ++k) value += lp.c[k] * res.x[k];
  res.value = value;
  return res;
}

}  // namespace scorebounds
