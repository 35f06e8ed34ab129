#ifndef AFFECT_CORE_FGN_HPP
#define AFFECT_CORE_FGN_HPP

#include <cstdint>
#include <vector>

namespace affect {

// Unit-variance fractional Gaussian noise by circulant embedding of the fGn
// autocovariance (Davies-Harte). hurst in (0, 1).
std::vector<double> generate_fgn(std::size_t n, double hurst, std::uint64_t seed);

} // namespace affect

#endif
