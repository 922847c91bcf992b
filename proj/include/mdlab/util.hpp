#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace mdlab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Complex = std::complex<double>;

// e(x) = exp(2*pi*i*x)
inline Complex e_of(double x) { return Complex(std::cos(kTwoPi * x), std::sin(kTwoPi * x)); }

// Canonical reduction into [0, 1): single branch x - floor(x).
inline double frac(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;  // guards x = -tiny rounding to 1.0
    return f;
}

// Nearest-integer distance ||x||, in [0, 1/2].
inline double nearest_dist(double x) {
    double f = frac(x);
    return f <= 0.5 ? f : 1.0 - f;
}

// ||a - b|| for a, b already in [0, 1); exactly symmetric in its arguments.
inline double torus_dist01(double a, double b) {
    double d = std::fabs(a - b);
    return d <= 0.5 ? d : 1.0 - d;
}

// frac(q * t) for integer q and t in [0, 1), with the integer part removed
// exactly: t is the dyadic rational M * 2^{-s}, and q*M mod 2^s is computed
// in 128-bit arithmetic.  Plain double evaluation of q*t would keep only
// 53 - log2(q) fractional bits, which is fatal for modes like q ~ 2^31.
inline double frac_qt(std::int64_t q, double t) {
    if (t == 0.0 || q == 0) return 0.0;
    if (q < 0) {
        double f = frac_qt(-q, t);
        return f == 0.0 ? 0.0 : 1.0 - f;
    }
    int e;
    double mant = std::frexp(t, &e);  // t = mant * 2^e, mant in [0.5, 1), e <= 0
    auto M = static_cast<std::uint64_t>(std::ldexp(mant, 53));  // exact 53-bit integer
    int s = 53 - e;                                             // t = M * 2^{-s}
    unsigned __int128 prod = static_cast<unsigned __int128>(static_cast<std::uint64_t>(q)) * M;
    if (s >= 117) return q * t;  // no integer part can arise: prod < 2^117 <= 2^s
    unsigned __int128 rem = prod & ((static_cast<unsigned __int128>(1) << s) - 1);
    return std::ldexp(static_cast<double>(rem), -s);
}

// Compensated accumulation; deterministic for a fixed visit order.
class KahanSum {
  public:
    void add(double v) {
        double y = v - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// FNV-1a, used for config hashes embedded in CSV headers.
inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Deterministic chunked map-reduce: the chunk grid is fixed (independent of
// the worker count) and partials are merged in chunk order, so results do
// not depend on how many threads run.
inline void parallel_chunks(std::size_t n, unsigned threads,
                            const std::function<void(std::size_t chunk, std::size_t begin,
                                                     std::size_t end)>& body) {
    constexpr std::size_t kChunks = 64;
    if (n == 0) return;
    std::size_t nchunks = std::min<std::size_t>(kChunks, n);
    auto chunk_range = [&](std::size_t c) {
        std::size_t b = n * c / nchunks;
        std::size_t e = n * (c + 1) / nchunks;
        return std::pair<std::size_t, std::size_t>(b, e);
    };
    if (threads <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c) {
            auto [b, e] = chunk_range(c);
            body(c, b, e);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                std::size_t c = next.fetch_add(1);
                if (c >= nchunks) break;
                auto [b, e] = chunk_range(c);
                body(c, b, e);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace mdlab
