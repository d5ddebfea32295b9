#include "cohprobe/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "cohprobe/error.hpp"

namespace cohprobe::optimize {

double golden_section_max(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(a < b)) throw Error(ErrorKind::InvalidArgument, "golden section needs a < b");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

GridMaximum grid_argmax(const std::vector<double>& xs, const std::vector<double>& values,
                        double tie_tol) {
  if (xs.empty() || xs.size() != values.size()) {
    throw Error(ErrorKind::InvalidArgument, "grid_argmax needs matching, non-empty samples");
  }
  double peak = values[0];
  for (double v : values) peak = std::max(peak, v);
  const double scale = tie_tol * std::max(1.0, std::abs(peak));

  GridMaximum best;
  std::size_t matches = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(values[i] - peak) <= scale) {
      if (matches == 0) best.index = i;
      ++matches;
    }
  }
  best.x = xs[best.index];
  best.value = values[best.index];
  best.tie = matches > 1;
  best.at_boundary = best.index == 0 || best.index + 1 == xs.size();
  return best;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(lo <= hi)) {
    throw Error(ErrorKind::InvalidArgument, "uniform grid needs lo <= hi and step > 0");
  }
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = lo + static_cast<double>(i) * step;
  return xs;
}

}  // namespace cohprobe::optimize
