#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "impactsel/errors.hpp"
#include "impactsel/matrix.hpp"

namespace impactsel {

/*
 * Lower-triangular Cholesky factor L of a symmetric positive definite matrix,
 * stored packed by rows (row k holds k+1 entries). The factor can be grown
 * one row at a time: appending a new variable with cross-covariance vector v
 * and variance d costs one forward solve,
 *
 *   u = L^{-1} v,   schur = d - u'u,   new row = [u', sqrt(schur)],
 *
 * so quadratic forms x' Sigma^{-1} x are maintained incrementally without
 * ever forming an inverse.
 */
class LowerCholesky {
 public:
  LowerCholesky() = default;

  std::size_t size() const { return n_; }

  double at(std::size_t i, std::size_t j) const { return l_[i * (i + 1) / 2 + j]; }

  // Factor a dense symmetric matrix. Throws NumericalError naming the first
  // non-positive leading minor (1-based) when the matrix is not PD.
  static LowerCholesky factor(const Matrix& sigma) {
    LowerCholesky chol;
    const std::size_t p = sigma.rows();
    for (std::size_t k = 0; k < p; ++k) {
      std::vector<double> v(k);
      for (std::size_t j = 0; j < k; ++j) v[j] = sigma(k, j);
      RowProbe probe = chol.probe_row(v, sigma(k, k));
      if (probe.schur <= 0.0 || !std::isfinite(probe.schur))
        throw NumericalError("matrix not positive definite at leading minor " +
                             std::to_string(k + 1));
      chol.append_row(std::move(probe));
    }
    return chol;
  }

  // x with L x = b.
  std::vector<double> forward_solve(std::span<const double> b) const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      double s = b[i];
      const double* row = l_.data() + i * (i + 1) / 2;
      for (std::size_t j = 0; j < i; ++j) s -= row[j] * x[j];
      x[i] = s / row[i];
    }
    return x;
  }

  // x with L' x = b.
  std::vector<double> backward_solve(std::span<const double> b) const {
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t ii = n_; ii-- > 0;) {
      x[ii] /= at(ii, ii);
      for (std::size_t j = 0; j < ii; ++j) x[j] -= at(ii, j) * x[ii];
    }
    return x;
  }

  struct RowProbe {
    std::vector<double> u;  // L^{-1} v
    double schur = 0.0;     // d - u'u
  };

  // Solve for the prospective new row without mutating the factor.
  RowProbe probe_row(std::span<const double> v, double d) const {
    RowProbe probe;
    probe.u = forward_solve(v);
    probe.schur = d - dot(probe.u, probe.u);
    return probe;
  }

  // Caller must have checked probe.schur > 0.
  void append_row(RowProbe&& probe) {
    l_.insert(l_.end(), probe.u.begin(), probe.u.end());
    l_.push_back(std::sqrt(probe.schur));
    ++n_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> l_;
};

}  // namespace impactsel
