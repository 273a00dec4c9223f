#pragma once

#include <functional>
#include <vector>

namespace cntqd::numerics {

// Minimizes f on [lo, hi] to an abscissa tolerance xtol.  Assumes a single
// minimum in the bracket.
double golden_section_min(const std::function<double(double)>& f, double lo,
                          double hi, double xtol);

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
};

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, double step, double ftol,
                             std::size_t max_iter);

}  // namespace cntqd::numerics
