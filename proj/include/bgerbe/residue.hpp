#pragma once

// Closed-form residues of rational integrands prod_q (xi - lambda_q)^{-m_q},
// optionally multiplied by log_z(xi), for pole orders up to three.

#include <optional>
#include <span>

#include "bgerbe/circle.hpp"

namespace bgerbe {

struct Pole {
  cplx location;
  int order;
};

// Residue of coeff * prod_q (xi - lambda_q)^{-m_q} [* log_z(xi)] at poles[which].
// Throws UnsupportedOrder for orders above three and Domain for coincident poles.
cplx residue_at(std::span<const Pole> poles, std::size_t which,
                const std::optional<CutPoint>& log_branch = std::nullopt, cplx coeff = 1.0);

// Sum of residues at every listed pole: the (1/2 pi i) contour integral over
// any contour enclosing all of them and, with a log factor, avoiding the cut ray.
cplx residue_sum(std::span<const Pole> poles,
                 const std::optional<CutPoint>& log_branch = std::nullopt, cplx coeff = 1.0);

}  // namespace bgerbe
