#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "riscov/errors.hpp"
#include "riscov/matrix.hpp"

namespace riscov {

/// a = left_vectors * diag(singular_values) * right_vectors^H, with the
/// singular values sorted descending and both vector blocks orthonormal.
struct SvdResult {
  CMat left_vectors;                   // m x r
  std::vector<double> singular_values; // r, descending
  CMat right_vectors;                  // n x r (columns are right vectors)
};

namespace detail {

using cd = std::complex<double>;

inline cd phase_of(const cd& z) {
  const double a = std::abs(z);
  return a > 0.0 ? z / a : cd{1.0, 0.0};
}

inline double sign_like(double a, double b) { return b >= 0.0 ? std::fabs(a) : -std::fabs(a); }

// Householder vector for x -> beta * e1. Returns {v, beta}; v is already
// normalized so the reflector is I - 2 v v^H.
inline std::pair<std::vector<cd>, cd> householder(const std::vector<cd>& x) {
  double norm2 = 0.0;
  for (const cd& v : x) norm2 += std::norm(v);
  const double norm = std::sqrt(norm2);
  if (norm == 0.0) return {{}, cd{0.0, 0.0}};
  const cd beta = -phase_of(x[0]) * norm;
  std::vector<cd> v = x;
  v[0] -= beta;
  double vn2 = 0.0;
  for (const cd& w : v) vn2 += std::norm(w);
  if (vn2 == 0.0) return {{}, beta};
  const double inv = 1.0 / std::sqrt(vn2);
  for (cd& w : v) w *= inv;
  return {v, beta};
}

// Plane rotation of two columns of a complex matrix by a real rotation.
inline void rotate_cols(CMat& m, std::size_t ca, std::size_t cb, double c, double s) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const cd y = m(r, ca);
    const cd z = m(r, cb);
    m(r, ca) = y * c + z * s;
    m(r, cb) = z * c - y * s;
  }
}

}  // namespace detail

/// Complex SVD by Householder bidiagonalization followed by implicit-shift
/// QR on the real bidiagonal form. Designed for the dense, modest-sized
/// matrices this project produces (up to a few hundred rows/columns).
inline SvdResult svd(const CMat& a) {
  using detail::cd;
  if (a.rows() == 0 || a.cols() == 0) throw InvalidInput("svd: empty matrix");
  if (!a.all_finite()) throw InvalidInput("svd: non-finite input");

  if (a.rows() < a.cols()) {
    SvdResult t = svd(a.adjoint());
    return {std::move(t.right_vectors), std::move(t.singular_values),
            std::move(t.left_vectors)};
  }

  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  CMat w = a;

  // Bidiagonalize: left reflectors per column, right reflectors per row.
  std::vector<std::vector<cd>> lv(n), rv(n);
  std::vector<cd> diag_c(n), super_c(n, cd{0.0, 0.0});  // super_c[i] = B(i-1, i)

  for (std::size_t k = 0; k < n; ++k) {
    std::vector<cd> col(m - k);
    for (std::size_t i = k; i < m; ++i) col[i - k] = w(i, k);
    auto [v, beta] = detail::householder(col);
    lv[k] = v;
    diag_c[k] = v.empty() ? (col.empty() ? cd{0, 0} : col[0]) : beta;
    if (!v.empty()) {
      for (std::size_t j = k + 1; j < n; ++j) {
        cd dot{0.0, 0.0};
        for (std::size_t i = k; i < m; ++i) dot += std::conj(v[i - k]) * w(i, j);
        dot *= 2.0;
        for (std::size_t i = k; i < m; ++i) w(i, j) -= dot * v[i - k];
      }
    }
    if (k + 2 < n) {
      std::vector<cd> rowh(n - k - 1);
      for (std::size_t j = k + 1; j < n; ++j) rowh[j - k - 1] = std::conj(w(k, j));
      auto [pv, pbeta] = detail::householder(rowh);
      rv[k] = pv;
      super_c[k + 1] = pv.empty() ? (rowh.empty() ? cd{0, 0} : std::conj(rowh[0]))
                                  : std::conj(pbeta);
      if (!pv.empty()) {
        for (std::size_t i = k + 1; i < m; ++i) {
          cd dot{0.0, 0.0};
          for (std::size_t j = k + 1; j < n; ++j) dot += w(i, j) * pv[j - k - 1];
          dot *= 2.0;
          for (std::size_t j = k + 1; j < n; ++j)
            w(i, j) -= dot * std::conj(pv[j - k - 1]);
        }
      }
    } else if (k + 2 == n) {
      super_c[k + 1] = w(k, k + 1);
    }
  }

  // Back-accumulate U (thin, m x n) and V (n x n).
  CMat u(m, n);
  for (std::size_t i = 0; i < n; ++i) u(i, i) = cd{1.0, 0.0};
  for (std::size_t k = n; k-- > 0;) {
    const auto& v = lv[k];
    if (v.empty()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      cd dot{0.0, 0.0};
      for (std::size_t i = k; i < m; ++i) dot += std::conj(v[i - k]) * u(i, j);
      dot *= 2.0;
      for (std::size_t i = k; i < m; ++i) u(i, j) -= dot * v[i - k];
    }
  }
  CMat vmat = CMat::identity(n);
  if (n >= 3) {
    for (std::size_t k = n - 2; k-- > 0;) {
      const auto& pv = rv[k];
      if (pv.empty()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        cd dot{0.0, 0.0};
        for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(pv[i - k - 1]) * vmat(i, j);
        dot *= 2.0;
        for (std::size_t i = k + 1; i < n; ++i) vmat(i, j) -= dot * pv[i - k - 1];
      }
    }
  }

  // Phase-normalize the bidiagonal to real entries, folding phases into U/V.
  std::vector<double> d(n, 0.0), e(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const cd ph = detail::phase_of(diag_c[k]);
    d[k] = std::abs(diag_c[k]);
    for (std::size_t i = 0; i < m; ++i) u(i, k) *= ph;
    if (k + 1 < n) {
      cd ek = super_c[k + 1] * std::conj(ph);
      const cd ps = std::conj(detail::phase_of(ek));
      e[k + 1] = std::abs(ek);
      for (std::size_t i = 0; i < n; ++i) vmat(i, k + 1) *= ps;
      diag_c[k + 1] *= ps;
    }
  }

  // Implicit-shift QR on the real bidiagonal (d = diag, e[i] = B(i-1, i)).
  double anorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) anorm = std::max(anorm, std::fabs(d[i]) + std::fabs(e[i]));
  const int max_iter = 100;

  for (std::size_t kk = n; kk-- > 0;) {
    const auto k = static_cast<std::ptrdiff_t>(kk);
    for (int its = 1;; ++its) {
      bool flag = true;
      std::ptrdiff_t l = k;
      std::ptrdiff_t nm = 0;
      for (; l >= 0; --l) {
        nm = l - 1;
        if (std::fabs(e[l]) + anorm == anorm) {
          flag = false;
          break;
        }
        if (std::fabs(d[nm]) + anorm == anorm) break;
      }
      if (flag) {
        // d[l-1] is negligible: cancel e[l] with row rotations folded into U.
        double c = 0.0, s = 1.0;
        for (std::ptrdiff_t i = l; i <= k; ++i) {
          const double f = s * e[i];
          e[i] = c * e[i];
          if (std::fabs(f) + anorm == anorm) break;
          const double g = d[i];
          const double h = std::hypot(f, g);
          d[i] = h;
          const double inv = 1.0 / h;
          c = g * inv;
          s = -f * inv;
          detail::rotate_cols(u, static_cast<std::size_t>(nm), static_cast<std::size_t>(i), c, s);
        }
      }
      const double z = d[k];
      if (l == k) {
        if (z < 0.0) {
          d[k] = -z;
          for (std::size_t i = 0; i < n; ++i) vmat(i, kk) = -vmat(i, kk);
        }
        break;
      }
      if (its == max_iter)
        throw NumericFailure("svd: QR iteration cap reached");
      double x = d[l];
      nm = k - 1;
      double y = d[nm];
      double g = e[nm];
      double h = e[k];
      double f = ((y - z) * (y + z) + (g - h) * (g + h)) / (2.0 * h * y);
      g = std::hypot(f, 1.0);
      f = ((x - z) * (x + z) + h * ((y / (f + detail::sign_like(g, f))) - h)) / x;
      double c = 1.0, s = 1.0;
      for (std::ptrdiff_t j = l; j <= nm; ++j) {
        const std::ptrdiff_t i = j + 1;
        g = e[i];
        y = d[i];
        h = s * g;
        g = c * g;
        double zz = std::hypot(f, h);
        e[j] = zz;
        c = f / zz;
        s = h / zz;
        f = x * c + g * s;
        g = g * c - x * s;
        h = y * s;
        y *= c;
        detail::rotate_cols(vmat, static_cast<std::size_t>(j), static_cast<std::size_t>(i), c, s);
        zz = std::hypot(f, h);
        d[j] = zz;
        if (zz != 0.0) {
          const double inv = 1.0 / zz;
          c = f * inv;
          s = h * inv;
        }
        f = c * g + s * y;
        x = c * y - s * g;
        detail::rotate_cols(u, static_cast<std::size_t>(j), static_cast<std::size_t>(i), c, s);
      }
      e[l] = 0.0;
      e[k] = f;
      d[k] = x;
    }
  }

  // Sort descending.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] > d[j]; });
  SvdResult out;
  out.left_vectors = CMat(m, n);
  out.right_vectors = CMat(n, n);
  out.singular_values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.singular_values[j] = d[order[j]];
    for (std::size_t i = 0; i < m; ++i) out.left_vectors(i, j) = u(i, order[j]);
    for (std::size_t i = 0; i < n; ++i) out.right_vectors(i, j) = vmat(i, order[j]);
  }
  return out;
}

}  // namespace riscov
