#pragma once

#include <vector>

#include "pdisc/polymap.hpp"
#include "pdisc/types.hpp"

namespace pdisc {

// All roots of a scalar polynomial via the companion-matrix eigenvalues,
// lightly Newton-polished, sorted lexicographically.
std::vector<cplx> companion_roots(const std::vector<cplx>& coeffs);

// Divides out a single linear factor (z - root).
std::vector<cplx> deflate_root(const std::vector<cplx>& coeffs, cplx root);

}  // namespace pdisc
