#include "bgerbe/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace bgerbe {

namespace {

GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess for the i-th largest root.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) fail(ErrorKind::Domain, "Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(build_rule(n));
  return *slot;
}

cplx quad_integrate(const Contour& c, const std::function<cplx(cplx)>& f, const QuadOptions& opt) {
  auto batch = [&](std::span<const cplx> xs, std::span<const cplx> ws) {
    cplx sum = 0.0;
    for (std::size_t q = 0; q < xs.size(); ++q) sum += ws[q] * f(xs[q]);
    return sum;
  };
  return contour_integral<cplx>(c, batch, cplx(0.0), opt);
}

Mat quad_integrate_matrix(const Contour& c, int rows, int cols, const std::function<Mat(cplx)>& f,
                          const QuadOptions& opt) {
  auto batch = [&](std::span<const cplx> xs, std::span<const cplx> ws) {
    Mat sum = Mat::Zero(rows, cols);
    for (std::size_t q = 0; q < xs.size(); ++q) sum += ws[q] * f(xs[q]);
    return sum;
  };
  return contour_integral<Mat>(c, batch, Mat::Zero(rows, cols), opt);
}

}  // namespace bgerbe
