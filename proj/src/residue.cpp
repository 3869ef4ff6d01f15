#include "bgerbe/residue.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "bgerbe/error.hpp"

namespace bgerbe {

namespace {

// Residues at close poles cancel terms of size |gap|^{-order}; the arithmetic
// runs in extended precision so the sum keeps double accuracy down to gaps of 1e-3.
using wide = long double;
using wcplx = std::complex<wide>;

// Truncated power series in t = xi - lambda_p, up to t^2.
using Jet = std::array<wcplx, 3>;

Jet multiply(const Jet& a, const Jet& b) {
  return {a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[0] * b[2] + a[1] * b[1] + a[2] * b[0]};
}

// (d + t)^{-m}
Jet inverse_power_jet(wcplx d, int m) {
  const wcplx inv = wide(1) / d;
  wcplx base = 1;
  for (int k = 0; k < m; ++k) base *= inv;
  const wide mm = m;
  return {base, -mm * base * inv, wide(0.5) * mm * (mm + 1) * base * inv * inv};
}

// log_cut evaluated in extended precision (log_cut itself validates the branch).
wcplx wide_log(const CutPoint& z, cplx xi) {
  const cplx reference = log_cut(z, xi);
  const wcplx x(xi.real(), xi.imag());
  const wide two_pi = 2 * std::numbers::pi_v<wide>;
  wide theta = std::arg(x);
  // Bring the angle to the branch chosen by log_cut.
  theta += two_pi * std::round((wide(reference.imag()) - theta) / two_pi);
  return {std::log(std::abs(x)), theta};
}

wcplx wide_residue(std::span<const Pole> poles, std::size_t which, const std::optional<CutPoint>& log_branch,
                   cplx coeff) {
  if (which >= poles.size()) fail(ErrorKind::Domain, "pole index out of range");
  for (const auto& p : poles) {
    if (p.order < 0 || p.order > 3) fail(ErrorKind::UnsupportedOrder, "pole order above three");
  }
  const Pole& target = poles[which];
  if (target.order == 0) return 0;
  const wcplx at(target.location.real(), target.location.imag());
  Jet jet{wcplx(coeff.real(), coeff.imag()), 0, 0};
  for (std::size_t q = 0; q < poles.size(); ++q) {
    if (q == which || poles[q].order == 0) continue;
    const wcplx d = at - wcplx(poles[q].location.real(), poles[q].location.imag());
    if (std::abs(d) == 0) fail(ErrorKind::Domain, "coincident poles must be merged");
    jet = multiply(jet, inverse_power_jet(d, poles[q].order));
  }
  if (log_branch) {
    jet = multiply(jet, Jet{wide_log(*log_branch, target.location), wide(1) / at, wide(-0.5) / (at * at)});
  }
  return jet[static_cast<std::size_t>(target.order - 1)];
}

cplx narrow(wcplx v) { return {static_cast<double>(v.real()), static_cast<double>(v.imag())}; }

}  // namespace

cplx residue_at(std::span<const Pole> poles, std::size_t which,
                const std::optional<CutPoint>& log_branch, cplx coeff) {
  return narrow(wide_residue(poles, which, log_branch, coeff));
}

cplx residue_sum(std::span<const Pole> poles, const std::optional<CutPoint>& log_branch,
                 cplx coeff) {
  wcplx total = 0;
  for (std::size_t k = 0; k < poles.size(); ++k) total += wide_residue(poles, k, log_branch, coeff);
  return narrow(total);
}

}  // namespace bgerbe
