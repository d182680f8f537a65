#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "riscov/eig.hpp"
#include "riscov/errors.hpp"
#include "riscov/matrix.hpp"
#include "riscov/qb.hpp"
#include "riscov/rng.hpp"
#include "riscov/svd.hpp"

namespace riscov {

enum class PhaseScheme { Optimal, Suboptimal, Quantized, Random, Era };

/// Per-surface reflection phases. Reflection coefficients are exp(j theta),
/// unit modulus by construction.
struct PhasePlan {
  std::vector<std::vector<double>> thetas;  // per RIS, radians in [0, 2pi)
  PhaseScheme scheme = PhaseScheme::Optimal;
  int quantization_bits = 0;
  bool degenerate = false;    // all-zero cascade, phases defaulted to zero
  bool svd_fallback = false;  // QB saturated, exact SVD used instead

  std::complex<double> reflection(std::size_t n, std::size_t l) const {
    const double t = thetas[n][l];
    return {std::cos(t), std::sin(t)};
  }
};

/// Composite reflective channel of the selected surfaces.
struct E2eChannel {
  CMat matrix;  // N_u x N_b
  std::vector<std::size_t> contributing_ris;
};

namespace detail {

inline double wrap_phase(double t) {
  const double two_pi = 2.0 * std::numbers::pi;
  t = std::fmod(t, two_pi);
  if (t < 0.0) t += two_pi;
  return t;
}

}  // namespace detail

/// Column-wise Khatri-Rao cascade of one surface: column l is
/// kron(h_row_l, g_row_l), so ||E w||^2 is the power of the e2e matrix
/// under the reflection vector w. h is L x N_b, g is L x N_u.
inline CMat khatri_rao_cascade(const CMat& h, const CMat& g) {
  if (h.rows() != g.rows()) throw InvalidInput("khatri_rao_cascade: element count mismatch");
  const std::size_t L = h.rows();
  const std::size_t nb = h.cols();
  const std::size_t nu = g.cols();
  CMat e(nb * nu, L);
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t u = 0; u < nu; ++u)
        e(b * nu + u, l) = h(l, b) * g(l, u);
  return e;
}

/// Stacked cascade over several surfaces (block-diagonal phase layout makes
/// the joint problem identical to one surface with concatenated elements).
inline CMat khatri_rao_cascade_multi(const std::vector<CMat>& h_list,
                                     const std::vector<CMat>& g_list) {
  if (h_list.empty() || h_list.size() != g_list.size())
    throw InvalidInput("khatri_rao_cascade_multi: bad selection");
  const std::size_t nb = h_list[0].cols();
  const std::size_t nu = g_list[0].cols();
  std::size_t total = 0;
  for (const auto& h : h_list) total += h.rows();
  CMat e(nb * nu, total);
  std::size_t off = 0;
  for (std::size_t k = 0; k < h_list.size(); ++k) {
    if (h_list[k].cols() != nb || g_list[k].cols() != nu ||
        h_list[k].rows() != g_list[k].rows())
      throw InvalidInput("khatri_rao_cascade_multi: inconsistent dimensions");
    const CMat ek = khatri_rao_cascade(h_list[k], g_list[k]);
    for (std::size_t i = 0; i < ek.rows(); ++i)
      for (std::size_t j = 0; j < ek.cols(); ++j) e(i, off + j) = ek(i, j);
    off += ek.cols();
  }
  return e;
}

/// Composite channel sum_n sum_l g_{n,l} e^{j theta_nl} h_{n,l}^T, plus the
/// direct matrix when supplied.
inline E2eChannel e2e_channel(const std::vector<CMat>& h_list,
                              const std::vector<CMat>& g_list, const PhasePlan& plan,
                              const CMat* h_d = nullptr) {
  if (h_list.size() != g_list.size() || plan.thetas.size() < h_list.size())
    throw InvalidInput("e2e_channel: plan does not cover the selection");
  if (h_list.empty()) throw InvalidInput("e2e_channel: empty selection");
  const std::size_t nb = h_list[0].cols();
  const std::size_t nu = g_list[0].cols();
  E2eChannel out;
  out.matrix = CMat(nu, nb);
  for (std::size_t n = 0; n < h_list.size(); ++n) {
    const CMat& h = h_list[n];
    const CMat& g = g_list[n];
    if (h.cols() != nb || g.cols() != nu || h.rows() != g.rows() ||
        plan.thetas[n].size() != h.rows())
      throw InvalidInput("e2e_channel: dimension mismatch");
    for (std::size_t l = 0; l < h.rows(); ++l) {
      const std::complex<double> w = plan.reflection(n, l);
      for (std::size_t u = 0; u < nu; ++u) {
        const std::complex<double> gu = g(l, u) * w;
        for (std::size_t b = 0; b < nb; ++b) out.matrix(u, b) += gu * h(l, b);
      }
    }
    out.contributing_ris.push_back(n);
  }
  if (h_d != nullptr) {
    if (h_d->rows() != nu || h_d->cols() != nb)
      throw InvalidInput("e2e_channel: direct matrix shape mismatch");
    out.matrix = out.matrix + *h_d;
  }
  return out;
}

/// ||sum_n sum_l ...||_F^2 for a plan on the given channels; the quantity
/// the phase-shift designs maximize.
inline double phase_objective(const std::vector<CMat>& h_list,
                              const std::vector<CMat>& g_list, const PhasePlan& plan) {
  const E2eChannel e = e2e_channel(h_list, g_list, plan);
  const double f = e.matrix.frobenius_norm();
  return f * f;
}

namespace detail {

inline PhasePlan plan_from_vector(const std::vector<std::complex<double>>& v1,
                                  const std::vector<std::size_t>& lengths,
                                  PhaseScheme scheme) {
  PhasePlan plan;
  plan.scheme = scheme;
  std::size_t off = 0;
  for (std::size_t len : lengths) {
    std::vector<double> t(len);
    for (std::size_t l = 0; l < len; ++l) t[l] = wrap_phase(std::arg(v1[off + l]));
    plan.thetas.push_back(std::move(t));
    off += len;
  }
  return plan;
}

inline std::vector<std::size_t> element_counts(const std::vector<CMat>& h_list) {
  std::vector<std::size_t> lens;
  lens.reserve(h_list.size());
  for (const auto& h : h_list) lens.push_back(h.rows());
  return lens;
}

inline PhasePlan zero_plan(const std::vector<std::size_t>& lengths, PhaseScheme scheme) {
  PhasePlan plan;
  plan.scheme = scheme;
  plan.degenerate = true;
  for (std::size_t len : lengths) plan.thetas.emplace_back(len, 0.0);
  return plan;
}

}  // namespace detail

/// Joint phase design over the selected surfaces: SVD of the stacked
/// Khatri-Rao cascade, first right singular vector projected onto the
/// unit-modulus set by keeping element phases.
inline PhasePlan optimal_phases_multi(const std::vector<CMat>& h_list,
                                      const std::vector<CMat>& g_list) {
  const CMat e = khatri_rao_cascade_multi(h_list, g_list);
  const auto lens = detail::element_counts(h_list);
  if (e.frobenius_norm() == 0.0) return detail::zero_plan(lens, PhaseScheme::Optimal);
  const SvdResult s = svd(e);
  std::vector<std::complex<double>> v1(e.cols());
  for (std::size_t l = 0; l < e.cols(); ++l) v1[l] = s.right_vectors(l, 0);
  return detail::plan_from_vector(v1, lens, PhaseScheme::Optimal);
}

inline PhasePlan optimal_phases(const CMat& h, const CMat& g) {
  return optimal_phases_multi({h}, {g});
}

struct SuboptimalOptions {
  std::size_t block = 16;
  double tol = 1e-3;
  std::size_t max_rank = std::numeric_limits<std::size_t>::max();
  int power_iters = 0;  // A A^H passes per sketch block
};

/// Randomized low-rank route to the same projection: QB sketch of the
/// cascade, eigendecomposition of B B^H, right singular vectors recovered
/// as Sigma^{-1/2} U^H B. Saturation without meeting tol falls back to the
/// exact SVD; a caller-imposed rank budget is honored as-is.
inline PhasePlan suboptimal_phases(const std::vector<CMat>& h_list,
                                   const std::vector<CMat>& g_list,
                                   const SuboptimalOptions& opt, RngStream& rng) {
  const CMat e = khatri_rao_cascade_multi(h_list, g_list);
  const auto lens = detail::element_counts(h_list);
  if (e.frobenius_norm() == 0.0) return detail::zero_plan(lens, PhaseScheme::Suboptimal);

  const QbResult qb = randomized_qb(e, opt.block, opt.tol, rng, opt.max_rank, opt.power_iters);
  if (qb.saturated || qb.tau == 0) {
    PhasePlan plan = optimal_phases_multi(h_list, g_list);
    plan.scheme = PhaseScheme::Suboptimal;
    plan.svd_fallback = true;
    return plan;
  }
  const EigResult eg = eig_hermitian(qb.b * qb.b.adjoint());
  if (!(eg.values[0] > 0.0)) return detail::zero_plan(lens, PhaseScheme::Suboptimal);
  // First row of V^H = Sigma^{-1/2} U^H B; v1 is its conjugate.
  const double inv_s1 = 1.0 / std::sqrt(eg.values[0]);
  std::vector<std::complex<double>> v1(e.cols());
  for (std::size_t l = 0; l < e.cols(); ++l) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t t = 0; t < qb.tau; ++t)
      acc += std::conj(eg.vectors(t, 0)) * qb.b(t, l);
    v1[l] = std::conj(acc * inv_s1);
  }
  PhasePlan plan = detail::plan_from_vector(v1, lens, PhaseScheme::Suboptimal);
  return plan;
}

/// Snap every phase to the 2^bits-point grid on [0, 2pi).
inline PhasePlan quantize_phases(const PhasePlan& plan, int bits) {
  if (bits < 1) throw InvalidInput("quantize_phases: bits must be >= 1");
  const double q = static_cast<double>(1 << bits);
  const double step = 2.0 * std::numbers::pi / q;
  PhasePlan out = plan;
  out.scheme = PhaseScheme::Quantized;
  out.quantization_bits = bits;
  for (auto& per_ris : out.thetas)
    for (double& t : per_ris)
      t = detail::wrap_phase(step * std::round(t / step));
  return out;
}

inline PhasePlan random_phases(const std::vector<std::size_t>& elements_per_ris,
                               RngStream& rng) {
  PhasePlan plan;
  plan.scheme = PhaseScheme::Random;
  for (std::size_t len : elements_per_ris) {
    std::vector<double> t(len);
    for (double& v : t) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
    plan.thetas.push_back(std::move(t));
  }
  return plan;
}

/// Maximum-ratio transmission beamformer over the effective channel
/// (reflective plus direct), Frobenius-normalized.
inline CMat mrt_beamformer(const E2eChannel& e2e) {
  const double norm = e2e.matrix.frobenius_norm();
  if (norm == 0.0) throw InvalidInput("mrt_beamformer: zero effective channel");
  CMat w = e2e.matrix;
  w *= std::complex<double>{1.0 / norm, 0.0};
  return w;
}

}  // namespace riscov
