#pragma once

// Adaptive Gauss-Legendre quadrature of (1/2 pi i) * contour integrals.
//
// Integrands are supplied in batched form: the callback receives the nodes xi_q
// of one panel together with complex weights w_q (Gauss weight times the
// parametrisation Jacobian) and returns sum_q w_q f(xi_q). This lets two-form
// integrands run through the vectorised kernels while scalar and matrix
// integrands use the thin wrappers at the bottom.

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "bgerbe/circle.hpp"
#include "bgerbe/error.hpp"

namespace bgerbe {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// Cached, thread-safe. Nodes from Newton iteration on P_n.
const GaussLegendreRule& gauss_legendre(int n);

struct QuadOptions {
  int initial_nodes = 64;
  int max_nodes = 1024;
  double tol = 1e-13;   // on |Q_2N - Q_N| relative to max(1, |Q_2N|)
  int max_depth = 24;   // panel bisections once max_nodes stops converging
};

namespace detail {

inline double magnitude(cplx v) { return std::abs(v); }
inline double magnitude(const Mat& m) { return m.norm(); }
inline bool all_finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
inline bool all_finite(const Mat& m) { return m.allFinite(); }

template <class T, class Batch>
T panel_rule(const Segment& seg, double s0, double s1, int n, Batch& batch,
             std::vector<cplx>& xs, std::vector<cplx>& ws) {
  const auto& rule = gauss_legendre(n);
  xs.resize(static_cast<std::size_t>(n));
  ws.resize(static_cast<std::size_t>(n));
  const double half = 0.5 * (s1 - s0);
  for (int q = 0; q < n; ++q) {
    const double s = s0 + half * (rule.nodes[static_cast<std::size_t>(q)] + 1.0);
    xs[static_cast<std::size_t>(q)] = seg.point(s);
    ws[static_cast<std::size_t>(q)] = half * rule.weights[static_cast<std::size_t>(q)] * seg.derivative(s);
  }
  T value = batch(std::span<const cplx>(xs), std::span<const cplx>(ws));
  if (!all_finite(value)) fail(ErrorKind::Evaluation, "non-finite integrand on the contour");
  return value;
}

template <class T, class Batch>
T panel_adaptive(const Segment& seg, double s0, double s1, int depth, Batch& batch,
                 const QuadOptions& opt, std::vector<cplx>& xs, std::vector<cplx>& ws) {
  int n = opt.initial_nodes;
  T coarse = panel_rule<T>(seg, s0, s1, n, batch, xs, ws);
  while (n < opt.max_nodes) {
    n *= 2;
    T fine = panel_rule<T>(seg, s0, s1, n, batch, xs, ws);
    const double scale = std::max(1.0, magnitude(fine));
    if (magnitude(T(fine - coarse)) <= opt.tol * scale) return fine;
    coarse = std::move(fine);
  }
  if (depth >= opt.max_depth) fail(ErrorKind::Evaluation, "contour quadrature failed to converge");
  const double mid = 0.5 * (s0 + s1);
  T left = panel_adaptive<T>(seg, s0, mid, depth + 1, batch, opt, xs, ws);
  T right = panel_adaptive<T>(seg, mid, s1, depth + 1, batch, opt, xs, ws);
  return T(left + right);
}

}  // namespace detail

// (1/2 pi i) * integral over c, with `zero` giving the accumulator shape.
template <class T, class Batch>
T contour_integral(const Contour& c, Batch&& batch, T zero, const QuadOptions& opt = {}) {
  std::vector<cplx> xs;
  std::vector<cplx> ws;
  T total = std::move(zero);
  for (const auto& seg : c.segments) {
    total += detail::panel_adaptive<T>(seg, 0.0, 1.0, 0, batch, opt, xs, ws);
  }
  return T(total / cplx(0.0, 2.0 * std::numbers::pi));
}

cplx quad_integrate(const Contour& c, const std::function<cplx(cplx)>& f, const QuadOptions& opt = {});

Mat quad_integrate_matrix(const Contour& c, int rows, int cols, const std::function<Mat(cplx)>& f,
                          const QuadOptions& opt = {});

}  // namespace bgerbe
