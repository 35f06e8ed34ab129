#include "core/spline.hpp"

#include <cassert>
#include <cstddef>

namespace affect {

std::vector<double> natural_cubic_spline(std::span<const double> xs,
                                         std::span<const double> ys,
                                         std::size_t n_eval) {
    const std::size_t k = xs.size();
    assert(k == ys.size() && k >= 1);
    std::vector<double> out(n_eval, 0.0);

    if (k == 1) {
        for (auto& v : out) v = ys[0];
        return out;
    }
    if (k == 2) {
        const double slope = (ys[1] - ys[0]) / (xs[1] - xs[0]);
        for (std::size_t t = 0; t < n_eval; ++t)
            out[t] = ys[0] + slope * (static_cast<double>(t) - xs[0]);
        return out;
    }

    // Second derivatives: natural boundary (M_0 = M_{k-1} = 0), Thomas solve.
    std::vector<double> m(k, 0.0);
    {
        const std::size_t inner = k - 2;
        std::vector<double> diag(inner), upper(inner), rhs(inner);
        for (std::size_t i = 0; i < inner; ++i) {
            const double h0 = xs[i + 1] - xs[i];
            const double h1 = xs[i + 2] - xs[i + 1];
            diag[i] = 2.0 * (h0 + h1);
            upper[i] = h1;
            rhs[i] = 6.0 * ((ys[i + 2] - ys[i + 1]) / h1 - (ys[i + 1] - ys[i]) / h0);
        }
        for (std::size_t i = 1; i < inner; ++i) {
            const double lower = xs[i + 1] - xs[i]; // h_i, sub-diagonal entry
            const double w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m[k - 2] = rhs[inner - 1] / diag[inner - 1];
        for (std::size_t i = inner - 1; i-- > 0;)
            m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
    }

    std::size_t seg = 0;
    for (std::size_t t = 0; t < n_eval; ++t) {
        const double x = static_cast<double>(t);
        while (seg + 2 < k && x > xs[seg + 1]) ++seg;
        const double h = xs[seg + 1] - xs[seg];
        const double dx = x - xs[seg];
        const double b = (ys[seg + 1] - ys[seg]) / h - h * (2.0 * m[seg] + m[seg + 1]) / 6.0;
        const double c = m[seg] / 2.0;
        const double d = (m[seg + 1] - m[seg]) / (6.0 * h);
        out[t] = ys[seg] + dx * (b + dx * (c + dx * d));
    }
    return out;
}

} // namespace affect
