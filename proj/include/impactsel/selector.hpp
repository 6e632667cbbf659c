#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "impactsel/cholesky.hpp"
#include "impactsel/errors.hpp"
#include "impactsel/grid.hpp"
#include "impactsel/matrix.hpp"
#include "impactsel/moments.hpp"

namespace impactsel {

/*
 * Criterion: for a point set T with covariance submatrix Sigma_T and
 * cross-covariance vector c_T,
 *
 *   Q(T) = c_T' Sigma_T^{-1} c_T = ||w||^2,   w = L^{-1} c_T,
 *
 * where L is the Cholesky factor of Sigma_T. Adding a candidate t with
 * cross-covariance vector v = Sigma_{T,t} and variance s2 changes Q by
 *
 *   (w'u - c_t)^2 / (s2 - u'u),   u = L^{-1} v,
 *
 * the squared semi-partial covariance of Y with X(t) given X(T) over the
 * residual variance of X(t) given X(T). A denominator at or below denom_tol
 * means X(t) is numerically redundant given the selected points, and the
 * increment would be 0/0: such candidates are skipped.
 */

struct SelectionConstraints {
  std::optional<double> delta;      // min time separation; default: grid.step
  std::size_t max_p = 10;
  std::optional<double> denom_tol;  // default: 1e-10 * max variance on the grid

  double resolved_delta(const Grid& grid) const {
    double d = delta.value_or(grid.step);
    if (!std::isfinite(d) || d < 0.0) throw DataError("delta must be nonnegative");
    return d;
  }

  template <MomentSource M>
  double resolved_denom_tol(const M& est) const {
    if (denom_tol) {
      if (!std::isfinite(*denom_tol) || *denom_tol <= 0.0)
        throw DataError("denom_tol must be positive");
      return *denom_tol;
    }
    double max_var = 0.0;
    for (std::size_t i = 0; i < est.grid_size(); ++i)
      max_var = std::max(max_var, est.covariance(i, i));
    // Zero variance everywhere still gets a positive floor so every candidate
    // is flagged redundant instead of erroring out.
    return std::max(1e-10 * max_var, std::numeric_limits<double>::min());
  }

  void validate() const {
    if (max_p == 0) throw DataError("max_p must be at least 1");
  }
};

// Grown one accepted point at a time. Keeps the Cholesky factor of the
// selected covariance submatrix, w = L^{-1} c, and one cached covariance row
// per selected point so a candidate probe costs O(p^2).
class SelectorState {
 public:
  SelectorState() = default;

  template <MomentSource M>
  static SelectorState init(const M& est) {
    SelectorState st;
    const std::size_t m = est.grid_size();
    st.diag_.resize(m);
    st.cvec_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      st.diag_[i] = est.covariance(i, i);
      st.cvec_[i] = est.cross_covariance(i);
    }
    return st;
  }

  std::size_t count() const { return selected_.size(); }
  std::size_t grid_size() const { return diag_.size(); }
  const std::vector<std::size_t>& selected() const { return selected_; }
  const LowerCholesky& factor() const { return chol_; }

  double q_value() const { return dot(w_, w_); }

  struct Probe {
    double increment = 0.0;
    double schur = 0.0;
    bool redundant = false;
    std::vector<double> u;
  };

  Probe probe(std::size_t candidate, double denom_tol) const {
    Probe pr;
    std::vector<double> v(count());
    for (std::size_t k = 0; k < count(); ++k) v[k] = cov_rows_[k][candidate];
    auto row = chol_.probe_row(v, diag_[candidate]);
    pr.u = std::move(row.u);
    pr.schur = row.schur;
    if (!(pr.schur > denom_tol)) {
      pr.redundant = true;
      return pr;
    }
    double num = dot(pr.u, w_) - cvec_[candidate];
    pr.increment = num * num / pr.schur;
    return pr;
  }

  template <MomentSource M>
  void accept(const M& est, std::size_t candidate, Probe&& pr) {
    double num = cvec_[candidate] - dot(pr.u, w_);
    LowerCholesky::RowProbe row{std::move(pr.u), pr.schur};
    chol_.append_row(std::move(row));
    w_.push_back(num / chol_.at(count(), count()));
    const std::size_t m = grid_size();
    std::vector<double> cov_row(m);
    for (std::size_t t = 0; t < m; ++t) cov_row[t] = est.covariance(candidate, t);
    cov_rows_.push_back(std::move(cov_row));
    selected_.push_back(candidate);
  }

  // beta = Sigma_T^{-1} c_T for the current selection, via L' beta = w.
  std::vector<double> coefficients() const { return chol_.backward_solve(w_); }

 private:
  LowerCholesky chol_;
  std::vector<double> w_;
  std::vector<std::vector<double>> cov_rows_;
  std::vector<std::size_t> selected_;
  std::vector<double> diag_;
  std::vector<double> cvec_;
};

// Q(T) from a dense covariance matrix and cross-covariance vector.
inline double q0(const Matrix& sigma, std::span<const double> c) {
  if (sigma.rows() != sigma.cols() || sigma.rows() != c.size())
    throw DataError("q0 needs a square matrix matching the vector length");
  LowerCholesky chol = LowerCholesky::factor(sigma);
  std::vector<double> w = chol.forward_solve(c);
  return dot(w, w);
}

template <MomentSource M>
double q0(const M& est, std::span<const std::size_t> indices) {
  auto [sigma, c] = submatrix(est, indices);
  return q0(sigma, c);
}

// Recursive criterion increment for one candidate given the current state.
// The state must have been built from (and grown with) the same `est`.
template <MomentSource M>
double q0_increment(const SelectorState& state, const M& est, std::size_t candidate,
                    double denom_tol) {
  if (candidate >= est.grid_size()) throw DataError("candidate index out of range");
  for (std::size_t s : state.selected())
    if (s == candidate)
      throw NumericalError("candidate " + std::to_string(candidate) +
                           " already selected: redundant");
  auto pr = state.probe(candidate, denom_tol);
  if (pr.redundant)
    throw NumericalError("candidate " + std::to_string(candidate) +
                         " redundant: residual variance " + std::to_string(pr.schur) +
                         " at or below tolerance");
  return pr.increment;
}

// Same increment through the semi-partial route, computed from observation-
// level residuals rather than the grown factorization:
//   cov(Y - proj Y, X(t))^2 / var(X(t) - proj X(t))
// with projections on the selected columns solved from a fresh dense
// factorization. Sample moments only; used to cross-check q0_increment.
inline double q0_increment_semipartial(const SelectorState& state, const MomentEstimates& est,
                                       std::size_t candidate, double denom_tol) {
  if (candidate >= est.grid_size()) throw DataError("candidate index out of range");
  const std::size_t n = est.sample_size();
  const double dn = static_cast<double>(n);
  std::span<const double> xc = est.centered_column(candidate);
  std::span<const double> yc = est.centered_responses();

  const std::size_t p = state.count();
  std::vector<double> ry(yc.begin(), yc.end());
  std::vector<double> rx(xc.begin(), xc.end());
  if (p > 0) {
    auto [sigma, csel] = submatrix(est, state.selected());
    LowerCholesky chol = LowerCholesky::factor(sigma);
    std::vector<double> b = chol.backward_solve(chol.forward_solve(csel));
    std::vector<double> v(p);
    for (std::size_t k = 0; k < p; ++k) v[k] = est.covariance(state.selected()[k], candidate);
    std::vector<double> a = chol.backward_solve(chol.forward_solve(v));
    for (std::size_t k = 0; k < p; ++k) {
      std::span<const double> col = est.centered_column(state.selected()[k]);
      for (std::size_t i = 0; i < n; ++i) {
        ry[i] -= b[k] * col[i];
        rx[i] -= a[k] * col[i];
      }
    }
  }

  double ry_mean = 0.0, rx_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ry_mean += ry[i];
    rx_mean += rx[i];
  }
  ry_mean /= dn;
  rx_mean /= dn;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (ry[i] - ry_mean) * xc[i];
    den += (rx[i] - rx_mean) * (rx[i] - rx_mean);
  }
  num /= dn;
  den /= dn;
  if (!(den > denom_tol))
    throw NumericalError("candidate " + std::to_string(candidate) +
                         " redundant: degenerate residual variance");
  return num * num / den;
}

// Indices whose time is at least delta away from every selected time, with
// already-selected indices always excluded. Ascending order.
inline std::vector<std::size_t> admissible_candidates(const Grid& grid,
                                                      std::span<const std::size_t> selected,
                                                      double delta) {
  if (!std::isfinite(delta) || delta < 0.0) throw DataError("delta must be nonnegative");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    bool ok = true;
    for (std::size_t s : selected) {
      if (s >= grid.size()) throw DataError("selected index out of range");
      if (i == s || std::abs(grid.times[i] - grid.times[s]) < delta) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(i);
  }
  return out;
}

struct SelectionPath {
  std::vector<std::size_t> selected;                  // acceptance order
  std::vector<double> qmax_after;                     // Q after each acceptance
  std::vector<std::vector<double>> coeffs_at_each_step;
  SelectorState state;
};

// Greedy forward selection: each step accepts the admissible candidate with
// the largest criterion increment, ties going to the smallest grid index.
// Stops at max_p, or earlier when every admissible candidate is redundant.
template <MomentSource M>
SelectionPath greedy_select(const M& est, const Grid& grid, const SelectionConstraints& cons) {
  cons.validate();
  if (est.grid_size() != grid.size()) throw DataError("moments do not match grid");
  const double delta = cons.resolved_delta(grid);
  const double tol = cons.resolved_denom_tol(est);

  SelectionPath path;
  path.state = SelectorState::init(est);
  while (path.state.count() < cons.max_p) {
    std::vector<std::size_t> cands = admissible_candidates(grid, path.state.selected(), delta);
    std::optional<std::size_t> best;
    SelectorState::Probe best_probe;
    for (std::size_t c : cands) {
      auto pr = path.state.probe(c, tol);
      if (pr.redundant) continue;
      if (!best || pr.increment > best_probe.increment) {
        best = c;
        best_probe = std::move(pr);
      }
    }
    if (!best) break;
    path.state.accept(est, *best, std::move(best_probe));
    path.selected.push_back(*best);
    path.qmax_after.push_back(path.state.q_value());
    path.coeffs_at_each_step.push_back(path.state.coefficients());
  }
  return path;
}

namespace detail {

inline double binomial(std::size_t m, std::size_t p) {
  double r = 1.0;
  for (std::size_t k = 1; k <= p; ++k) r *= static_cast<double>(m - p + k) / static_cast<double>(k);
  return r;
}

}  // namespace detail

struct ExhaustiveResult {
  std::vector<std::size_t> indices;
  double q = 0.0;
};

// Exact argmax of Q over all delta-admissible subsets of size p. Subsets are
// enumerated in lexicographic index order and ties keep the first maximizer,
// so an all-zero cross-covariance returns the first admissible subset with
// Q = 0. Guarded by an enumeration cap on C(m, p).
template <MomentSource M>
ExhaustiveResult exhaustive_select(const M& est, const Grid& grid, std::size_t p,
                                   const SelectionConstraints& cons,
                                   double enumeration_cap = 2e6) {
  if (p == 0) throw DataError("subset size must be at least 1");
  if (est.grid_size() != grid.size()) throw DataError("moments do not match grid");
  const std::size_t m = grid.size();
  if (p > m) throw DataError("subset size exceeds grid size");
  if (detail::binomial(m, p) > enumeration_cap)
    throw DataError("enumeration cap exceeded: C(" + std::to_string(m) + "," +
                    std::to_string(p) + ") too large");
  const double delta = cons.resolved_delta(grid);

  ExhaustiveResult best;
  best.q = -1.0;
  std::vector<std::size_t> cur;
  auto recurse = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == p) {
      try {
        double q = q0(est, cur);
        if (q > best.q) {
          best.q = q;
          best.indices = cur;
        }
      } catch (const NumericalError&) {
        // singular subset: not admissible
      }
      return;
    }
    for (std::size_t i = start; i < m; ++i) {
      if (!cur.empty() && grid.times[i] - grid.times[cur.back()] < delta) continue;
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  recurse(recurse, 0);
  if (best.q < 0.0) throw DataError("no admissible subset of size " + std::to_string(p));
  return best;
}

}  // namespace impactsel
