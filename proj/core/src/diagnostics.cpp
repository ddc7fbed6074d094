#include "bridgelab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bridgelab {

std::string_view to_string(Boundedness b) {
  return b == Boundedness::growing ? "growing" : "plausibly-bounded";
}

double last_to_first_ratio(std::span<const double> seq) {
  if (seq.empty()) return 1.0;
  const double first = std::abs(seq.front());
  const double last = std::abs(seq.back());
  if (first == 0.0) return last == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return last / first;
}

bool strictly_increasing_top_half(std::span<const double> seq) {
  if (seq.size() < 2) return false;
  for (std::size_t i = seq.size() / 2; i + 1 < seq.size(); ++i) {
    if (!(seq[i + 1] > seq[i])) return false;
  }
  return true;
}

Boundedness classify_boundedness(std::span<const double> seq, double floor) {
  if (!seq.empty() && std::all_of(seq.begin(), seq.end(), [floor](double v) { return std::abs(v) <= floor; })) {
    return Boundedness::plausibly_bounded;
  }
  if (last_to_first_ratio(seq) > 2.0 && strictly_increasing_top_half(seq)) {
    return Boundedness::growing;
  }
  return Boundedness::plausibly_bounded;
}

std::optional<LineFit> fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) return std::nullopt;
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = m;
  for (std::size_t i = 0; i < m; ++i) {
    fit.max_abs_residual =
        std::max(fit.max_abs_residual, std::abs(y[i] - fit.intercept - fit.slope * x[i]));
  }
  return fit;
}

}  // namespace bridgelab
