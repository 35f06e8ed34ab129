#include "core/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <unordered_map>

namespace affect {

namespace {

// FFTW's planner is not thread-safe; plan creation/destruction is serialized.
// Executing a cached plan on its own buffers is safe per thread.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct CachedPlan {
    fftw_plan plan = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    int n = 0;

    CachedPlan() = default;
    CachedPlan(const CachedPlan&) = delete;
    CachedPlan& operator=(const CachedPlan&) = delete;
    CachedPlan(CachedPlan&& other) noexcept { *this = std::move(other); }
    CachedPlan& operator=(CachedPlan&& other) noexcept {
        std::swap(plan, other.plan);
        std::swap(in, other.in);
        std::swap(out, other.out);
        std::swap(n, other.n);
        return *this;
    }
    ~CachedPlan() {
        if (plan) {
            std::lock_guard<std::mutex> lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
        if (in) fftw_free(in);
        if (out) fftw_free(out);
    }
};

CachedPlan make_plan(int n, int sign) {
    CachedPlan p;
    p.n = n;
    p.in = fftw_alloc_complex(static_cast<std::size_t>(n));
    p.out = fftw_alloc_complex(static_cast<std::size_t>(n));
    std::lock_guard<std::mutex> lock(planner_mutex());
    p.plan = fftw_plan_dft_1d(n, p.in, p.out, sign, FFTW_ESTIMATE);
    return p;
}

CachedPlan& plan_for(int n, int sign) {
    thread_local std::unordered_map<long, CachedPlan> cache;
    const long key = static_cast<long>(n) * 2 + (sign == FFTW_BACKWARD ? 1 : 0);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, make_plan(n, sign)).first;
    return it->second;
}

} // namespace

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> x,
                                      bool inverse) {
    const int n = static_cast<int>(x.size());
    std::vector<std::complex<double>> result(x.size());
    if (n == 0) return result;
    if (n == 1) {
        result[0] = x[0];
        return result;
    }
    CachedPlan& p = plan_for(n, inverse ? FFTW_BACKWARD : FFTW_FORWARD);
    std::memcpy(p.in, x.data(), sizeof(fftw_complex) * x.size());
    fftw_execute(p.plan);
    std::memcpy(result.data(), p.out, sizeof(fftw_complex) * x.size());
    return result;
}

std::vector<std::complex<double>> fft_real(std::span<const double> x) {
    std::vector<std::complex<double>> cx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) cx[i] = {x[i], 0.0};
    return fft(cx);
}

std::vector<double> power_spectrum(std::span<const double> x) {
    const auto spec = fft_real(x);
    const std::size_t half = x.size() / 2;
    std::vector<double> power(half + 1);
    for (std::size_t k = 0; k <= half && k < spec.size(); ++k)
        power[k] = std::norm(spec[k]);
    return power;
}

} // namespace affect
