#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "riscov/errors.hpp"
#include "riscov/matrix.hpp"
#include "riscov/rng.hpp"

namespace riscov {

struct QbResult {
  CMat q;            // m x tau, orthonormal columns
  CMat b;            // tau x n, b = q^H a
  std::size_t tau = 0;
  bool saturated = false;    // tol unreachable at full numerical rank
  bool rank_capped = false;  // stopped by the caller-imposed rank budget
  double rel_residual = 0.0;
};

/// Randomized blocked QB range finder. Grows the random test matrix one
/// block at a time, orthonormalizes each sketch against the accumulated
/// basis, and stops once the relative Frobenius residual reaches tol or
/// appending a block stops reducing the residual beyond tol (a termination
/// test keyed on zero entries appearing in the factors is numerically
/// fragile; the residual form is robust to roundoff). power_iters
/// applies that many A A^H passes to each sketch block, sharpening the
/// captured subspace at unchanged asymptotic cost.
inline QbResult randomized_qb(const CMat& a, std::size_t block, double tol,
                              RngStream& rng,
                              std::size_t max_rank = std::numeric_limits<std::size_t>::max(),
                              int power_iters = 0) {
  using cd = std::complex<double>;
  if (block < 1) throw InvalidInput("randomized_qb: block must be >= 1");
  if (!(tol > 0.0)) throw InvalidInput("randomized_qb: tol must be positive");
  if (!a.all_finite()) throw InvalidInput("randomized_qb: non-finite input");

  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const double norm_a = a.frobenius_norm();

  QbResult out;
  if (norm_a == 0.0) {
    out.q = CMat(m, 0);
    out.b = CMat(0, n);
    return out;
  }

  const std::size_t limit = std::min({m, n, max_rank});
  std::vector<std::vector<cd>> qcols;   // each length m
  std::vector<std::vector<cd>> brows;   // each length n
  qcols.reserve(limit);
  brows.reserve(limit);

  const double drop_tol = 1e-12 * norm_a;
  double res2 = norm_a * norm_a;
  double prev_res = norm_a;
  bool range_exhausted = false;

  auto apply_a = [&](const std::vector<cd>& x) {
    std::vector<cd> y(m, cd{});
    for (std::size_t i = 0; i < m; ++i) {
      const cd* arow = a.row(i);
      cd s{};
      for (std::size_t j = 0; j < n; ++j) s += arow[j] * x[j];
      y[i] = s;
    }
    return y;
  };
  auto apply_ah = [&](const std::vector<cd>& y) {
    std::vector<cd> x(n, cd{});
    for (std::size_t i = 0; i < m; ++i) {
      const cd yi = y[i];
      if (yi == cd{}) continue;
      const cd* arow = a.row(i);
      for (std::size_t j = 0; j < n; ++j) x[j] += std::conj(arow[j]) * yi;
    }
    return x;
  };

  while (qcols.size() < limit) {
    const std::size_t b_eff = std::min(block, limit - qcols.size());
    std::size_t kept = 0;
    // Sketch the block, optionally sharpened by A A^H passes.
    std::vector<std::vector<cd>> ys(b_eff);
    for (std::size_t bi = 0; bi < b_eff; ++bi) {
      std::vector<cd> omega(n);
      for (auto& w : omega)
        w = cd{rng.gaussian(), rng.gaussian()} * (1.0 / std::numbers::sqrt2);
      ys[bi] = apply_a(omega);
    }
    for (int pi = 0; pi < power_iters; ++pi) {
      // Normalize between passes to avoid magnitude collapse.
      for (auto& y : ys) {
        double yn2 = 0.0;
        for (const cd& v : y) yn2 += std::norm(v);
        if (yn2 > 0.0) {
          const double inv = 1.0 / std::sqrt(yn2);
          for (cd& v : y) v *= inv;
        }
        y = apply_a(apply_ah(y));
      }
    }
    for (std::size_t bi = 0; bi < b_eff; ++bi) {
      std::vector<cd> y = std::move(ys[bi]);
      // Two-pass orthogonalization against the accumulated basis.
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& qc : qcols) {
          cd dot{};
          for (std::size_t i = 0; i < m; ++i) dot += std::conj(qc[i]) * y[i];
          for (std::size_t i = 0; i < m; ++i) y[i] -= dot * qc[i];
        }
      }
      double yn2 = 0.0;
      for (const cd& v : y) yn2 += std::norm(v);
      const double yn = std::sqrt(yn2);
      if (yn <= drop_tol) continue;  // direction already captured
      const double inv = 1.0 / yn;
      for (cd& v : y) v *= inv;
      // New B row = q^H A.
      std::vector<cd> brow(n, cd{});
      for (std::size_t i = 0; i < m; ++i) {
        const cd qi = std::conj(y[i]);
        if (qi == cd{}) continue;
        const cd* arow = a.row(i);
        for (std::size_t j = 0; j < n; ++j) brow[j] += qi * arow[j];
      }
      double rn2 = 0.0;
      for (const cd& v : brow) rn2 += std::norm(v);
      res2 = std::max(0.0, res2 - rn2);
      qcols.push_back(std::move(y));
      brows.push_back(std::move(brow));
      ++kept;
    }
    const double res = std::sqrt(res2);
    if (res <= tol * norm_a) break;
    if (kept == 0) {
      range_exhausted = true;
      break;
    }
    if (prev_res - res <= tol * norm_a) break;  // block no longer helps
    prev_res = res;
  }

  out.tau = qcols.size();
  out.rel_residual = std::sqrt(res2) / norm_a;
  if (out.rel_residual > tol) {
    if (out.tau >= std::min(m, n) || range_exhausted)
      out.saturated = true;
    else if (out.tau >= max_rank)
      out.rank_capped = true;
    else
      out.saturated = true;  // stagnated below full rank
  }
  out.q = CMat(m, out.tau);
  for (std::size_t j = 0; j < out.tau; ++j)
    for (std::size_t i = 0; i < m; ++i) out.q(i, j) = qcols[j][i];
  out.b = CMat(out.tau, n);
  for (std::size_t i = 0; i < out.tau; ++i)
    for (std::size_t j = 0; j < n; ++j) out.b(i, j) = brows[i][j];
  return out;
}

}  // namespace riscov
