#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace bridgelab {

// Finite-n surrogate for "sup_n a_n < infinity". A sequence is called
// growing when its last/first ratio exceeds 2 and it is strictly increasing
// over the top half of the grid; otherwise it is plausibly bounded. This is a
// diagnostic only: boundedness of a sequence is undecidable from a prefix.
enum class Boundedness { plausibly_bounded, growing };

std::string_view to_string(Boundedness b);

// last/first with 0/0 := 1 and x/0 := inf for x > 0.
double last_to_first_ratio(std::span<const double> seq);

bool strictly_increasing_top_half(std::span<const double> seq);

// Sequences whose entries all lie within `floor` of 0 count as bounded.
Boundedness classify_boundedness(std::span<const double> seq, double floor = 0.0);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_abs_residual = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares y = intercept + slope * x. Needs at least two
// distinct x values.
std::optional<LineFit> fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace bridgelab
