#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "riscov/errors.hpp"
#include "riscov/matrix.hpp"
#include "riscov/svd.hpp"

namespace riscov {

/// c = vectors * diag(values) * vectors^H with real eigenvalues descending.
struct EigResult {
  CMat vectors;                // n x n, orthonormal columns
  std::vector<double> values;  // descending
};

/// Hermitian eigendecomposition: Householder tridiagonalization followed by
/// implicit-shift QL iteration on the real tridiagonal form. Rejects inputs
/// that are not Hermitian within 1e-9 (relative).
inline EigResult eig_hermitian(const CMat& c) {
  using detail::cd;
  const std::size_t n = c.rows();
  if (n == 0 || c.cols() != n) throw InvalidInput("eig_hermitian: matrix must be square");
  if (!c.all_finite()) throw InvalidInput("eig_hermitian: non-finite input");

  double scale = 0.0, asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      scale = std::max(scale, std::abs(c(i, j)));
      asym = std::max(asym, std::abs(c(i, j) - std::conj(c(j, i))));
    }
  if (asym > 1e-9 * std::max(1.0, scale))
    throw InvalidInput("eig_hermitian: matrix is not Hermitian within tolerance");

  CMat w = c;
  CMat q = CMat::identity(n);

  // Tridiagonalize by two-sided Householder similarity transforms.
  for (std::size_t k = 0; k + 2 < n; ++k) {
    std::vector<cd> col(n - k - 1);
    for (std::size_t i = k + 1; i < n; ++i) col[i - k - 1] = w(i, k);
    auto [v, beta] = detail::householder(col);
    if (v.empty()) continue;
    // w <- P w P with P = I - 2 v v^H acting on indices k+1..n-1.
    for (std::size_t j = 0; j < n; ++j) {  // left
      cd dot{0.0, 0.0};
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i - k - 1]) * w(i, j);
      dot *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) w(i, j) -= dot * v[i - k - 1];
    }
    for (std::size_t i = 0; i < n; ++i) {  // right
      cd dot{0.0, 0.0};
      for (std::size_t j = k + 1; j < n; ++j) dot += w(i, j) * v[j - k - 1];
      dot *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) w(i, j) -= dot * std::conj(v[j - k - 1]);
    }
    for (std::size_t i = 0; i < n; ++i) {  // accumulate q <- q P
      cd dot{0.0, 0.0};
      for (std::size_t j = k + 1; j < n; ++j) dot += q(i, j) * v[j - k - 1];
      dot *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) q(i, j) -= dot * std::conj(v[j - k - 1]);
    }
  }

  // Real tridiagonal extraction: absorb subdiagonal phases into q columns.
  // e[i] = T(i, i-1); e[0] unused, e[n] is scratch for the QL sweeps.
  std::vector<double> d(n), e(n + 1, 0.0);
  cd carry{1.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    d[k] = w(k, k).real();
    if (k + 1 < n) {
      e[k + 1] = std::abs(w(k + 1, k));
      carry = detail::phase_of(w(k + 1, k)) * carry;
      for (std::size_t i = 0; i < n; ++i) q(i, k + 1) *= carry;
    }
  }

  // Implicit-shift QL on the real symmetric tridiagonal.
  const std::size_t sweep_cap = 100 * n;
  std::size_t sweeps = 0;
  for (std::size_t l = 0; l < n; ++l) {
    for (;;) {
      std::size_t mIdx = l;
      for (; mIdx + 1 < n; ++mIdx) {
        const double dd = std::fabs(d[mIdx]) + std::fabs(d[mIdx + 1]);
        if (std::fabs(e[mIdx + 1]) + dd == dd) break;
      }
      if (mIdx == l) break;
      if (++sweeps > sweep_cap)
        throw NumericFailure("eig_hermitian: QL iteration cap reached");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l + 1]);
      double r = std::hypot(g, 1.0);
      g = d[mIdx] - d[l] + e[l + 1] / (g + detail::sign_like(r, g));
      double s = 1.0, cc = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = mIdx; i-- > l;) {
        double f = s * e[i + 1];
        const double b = cc * e[i + 1];
        r = std::hypot(f, g);
        e[i + 2] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[mIdx + 1] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        cc = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * cc * b;
        p = s * r;
        d[i + 1] = g + p;
        g = cc * r - b;
        for (std::size_t row = 0; row < n; ++row) {
          const cd y = q(row, i);
          const cd z = q(row, i + 1);
          q(row, i + 1) = s * y + cc * z;
          q(row, i) = cc * y - s * z;
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l + 1] = g;
      e[mIdx + 1] = 0.0;
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] > d[j]; });
  EigResult out;
  out.vectors = CMat(n, n);
  out.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = q(i, order[j]);
  }
  return out;
}

}  // namespace riscov
