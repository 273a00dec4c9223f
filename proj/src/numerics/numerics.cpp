#include "cntqd/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace cntqd::numerics {

double golden_section_min(const std::function<double(double)>& f, double lo,
                          double hi, double xtol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double step, double ftol, std::size_t max_iter) {
  const std::size_t n = x0.size();
  NelderMeadResult res;

  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
  for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);
  res.evaluations = n + 1;

  std::vector<std::size_t> order(n + 1);
  for (std::size_t it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order[0], worst = order[n], second = order[n - 1];
    if (std::abs(vals[worst] - vals[best]) <
        ftol * (std::abs(vals[best]) + ftol))
      break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto along = [&](double coef) {
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k)
        p[k] = centroid[k] + coef * (pts[worst][k] - centroid[k]);
      return p;
    };

    std::vector<double> refl = along(-1.0);
    const double frefl = f(refl);
    ++res.evaluations;
    if (frefl < vals[order[0]]) {
      std::vector<double> expa = along(-2.0);
      const double fexp = f(expa);
      ++res.evaluations;
      if (fexp < frefl) {
        pts[worst] = std::move(expa);
        vals[worst] = fexp;
      } else {
        pts[worst] = std::move(refl);
        vals[worst] = frefl;
      }
    } else if (frefl < vals[second]) {
      pts[worst] = std::move(refl);
      vals[worst] = frefl;
    } else {
      std::vector<double> contr = along(frefl < vals[worst] ? -0.5 : 0.5);
      const double fcon = f(contr);
      ++res.evaluations;
      if (fcon < std::min(frefl, vals[worst])) {
        pts[worst] = std::move(contr);
        vals[worst] = fcon;
      } else {
        // shrink toward the best vertex
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < n; ++k)
            pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
          vals[i] = f(pts[i]);
          ++res.evaluations;
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (vals[i] < vals[best]) best = i;
  res.x = pts[best];
  res.value = vals[best];
  return res;
}

}  // namespace cntqd::numerics
