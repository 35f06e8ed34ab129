#ifndef AFFECT_CORE_SPLINE_HPP
#define AFFECT_CORE_SPLINE_HPP

#include <span>
#include <vector>

namespace affect {

// Natural cubic spline through (xs, ys), xs strictly increasing. Evaluates at
// integer positions 0..n_eval-1; positions outside [xs.front(), xs.back()]
// extrapolate with the end cubics.
std::vector<double> natural_cubic_spline(std::span<const double> xs,
                                         std::span<const double> ys,
                                         std::size_t n_eval);

} // namespace affect

#endif
