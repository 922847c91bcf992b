#pragma once

// Sieve-based Mobius function table (2 bits per integer) and
// Mobius-weighted exponential-sum kernels.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <vector>

#include "mdlab/errors.hpp"
#include "mdlab/util.hpp"

namespace mdlab {

// mu(1..N) packed two bits per value: 00 = 0, 01 = +1, 11 = -1.
class MobiusTable {
  public:
    static constexpr std::uint64_t kDefaultBudget = 100'000'000;

    std::uint64_t limit() const { return limit_; }

    int mu(std::uint64_t n) const {
        if (n < 1 || n > limit_) throw domain_error("mu: n outside table range");
        std::uint64_t i = n - 1;
        unsigned code = (packed_[i >> 2] >> (2 * (i & 3))) & 3u;
        return code == 0 ? 0 : (code == 1 ? 1 : -1);
    }

    static MobiusTable sieve(std::uint64_t n, std::uint64_t budget = kDefaultBudget);

    void save(const std::string& path) const;
    static MobiusTable load(const std::string& path);

    const std::vector<std::uint8_t>& packed() const { return packed_; }

  private:
    void set(std::uint64_t n, int v) {
        std::uint64_t i = n - 1;
        unsigned code = v == 0 ? 0u : (v == 1 ? 1u : 3u);
        std::uint8_t& b = packed_[i >> 2];
        unsigned shift = 2 * (i & 3);
        b = static_cast<std::uint8_t>((b & ~(3u << shift)) | (code << shift));
    }

    std::uint64_t limit_ = 0;
    std::vector<std::uint8_t> packed_;
};

namespace detail {

inline std::vector<std::uint32_t> primes_up_to(std::uint32_t n) {
    std::vector<bool> comp(n + 1, false);
    std::vector<std::uint32_t> primes;
    for (std::uint32_t i = 2; i <= n; ++i) {
        if (!comp[i]) {
            primes.push_back(i);
            for (std::uint64_t j = std::uint64_t(i) * i; j <= n; j += i) comp[j] = true;
        }
    }
    return primes;
}

}  // namespace detail

// Segmented sieve of mu over [1, n]; deterministic, fixed segment grid.
inline MobiusTable MobiusTable::sieve(std::uint64_t n, std::uint64_t budget) {
    if (n < 1) throw domain_error("sieve: N must be >= 1");
    if (n > budget)
        throw resource_error("sieve: N exceeds the memory budget; raise it or sieve in parts");
    MobiusTable t;
    t.limit_ = n;
    t.packed_.assign((n + 3) / 4, 0);

    std::uint32_t root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(n))) + 1;
    auto primes = detail::primes_up_to(root);

    constexpr std::uint64_t kSeg = 1u << 20;
    std::vector<std::int8_t> sign(kSeg);
    std::vector<std::uint64_t> rem(kSeg);
    std::vector<std::uint8_t> zero(kSeg);

    for (std::uint64_t lo = 1; lo <= n; lo += kSeg) {
        std::uint64_t hi = std::min(n + 1, lo + kSeg);  // [lo, hi)
        std::uint64_t len = hi - lo;
        std::fill(sign.begin(), sign.begin() + len, 1);
        std::fill(zero.begin(), zero.begin() + len, 0);
        for (std::uint64_t i = 0; i < len; ++i) rem[i] = lo + i;

        for (std::uint32_t p : primes) {
            std::uint64_t p2 = std::uint64_t(p) * p;
            if (std::uint64_t(p) >= hi) break;
            std::uint64_t start = ((lo + p - 1) / p) * p;
            for (std::uint64_t m = start; m < hi; m += p) {
                std::uint64_t i = m - lo;
                sign[i] = static_cast<std::int8_t>(-sign[i]);
                rem[i] /= p;
            }
            if (p2 < hi) {
                std::uint64_t start2 = ((lo + p2 - 1) / p2) * p2;
                for (std::uint64_t m = start2; m < hi; m += p2) zero[m - lo] = 1;
            }
        }
        for (std::uint64_t i = 0; i < len; ++i) {
            std::uint64_t m = lo + i;
            int v;
            if (zero[i]) {
                v = 0;
            } else {
                // one prime factor > sqrt(n) may remain in rem
                v = (rem[i] > 1) ? -sign[i] : sign[i];
            }
            if (m == 1) v = 1;
            t.set(m, v);
        }
    }
    return t;
}

inline constexpr char kMutblMagic[8] = {'M', 'U', 'T', 'B', 'L', '\0', '\0', '\1'};

inline void MobiusTable::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw resource_error("save: cannot open " + path);
    out.write(kMutblMagic, 8);
    std::uint64_t lim = limit_;
    char le[8];
    for (int i = 0; i < 8; ++i) le[i] = static_cast<char>((lim >> (8 * i)) & 0xff);
    out.write(le, 8);
    out.write(reinterpret_cast<const char*>(packed_.data()),
              static_cast<std::streamsize>(packed_.size()));
    if (!out) throw resource_error("save: write failed for " + path);
}

inline MobiusTable MobiusTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw resource_error("load: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMutblMagic, 8) != 0)
        throw config_error("load: " + path + " is not a MUTBL file");
    char le[8];
    in.read(le, 8);
    std::uint64_t lim = 0;
    for (int i = 0; i < 8; ++i) lim |= std::uint64_t(static_cast<unsigned char>(le[i])) << (8 * i);
    MobiusTable t;
    t.limit_ = lim;
    t.packed_.assign((lim + 3) / 4, 0);
    in.read(reinterpret_cast<char*>(t.packed_.data()),
            static_cast<std::streamsize>(t.packed_.size()));
    if (!in) throw config_error("load: truncated MUTBL file " + path);
    return t;
}

struct WeightedExpSum {
    Complex value{0.0, 0.0};
    std::uint64_t nonzero_terms = 0;  // count of n with mu(n) != 0
};

// sum over n <= N (n == a mod q when residue given) of mu(n) e(phases(n)).
// `phases` is any callable uint64 -> double.
template <typename Phases>
WeightedExpSum weighted_exp_sum(const MobiusTable& table, Phases&& phases, std::uint64_t n,
                                std::optional<std::pair<std::uint64_t, std::uint64_t>> residue =
                                    std::nullopt) {
    if (n > table.limit()) throw domain_error("weighted_exp_sum: N exceeds the sieve limit");
    std::uint64_t start = 1, step = 1;
    if (residue) {
        auto [a, q] = *residue;
        if (q == 0) throw domain_error("weighted_exp_sum: residue modulus must be positive");
        step = q;
        start = (a == 0) ? q : a;  // smallest positive n == a (mod q)
    }
    KahanSum re, im;
    std::uint64_t nz = 0;
    for (std::uint64_t k = start; k <= n; k += step) {
        int m = table.mu(k);
        if (m == 0) continue;
        ++nz;
        Complex t = e_of(phases(k));
        re.add(m * t.real());
        im.add(m * t.imag());
    }
    return {Complex(re.value(), im.value()), nz};
}

}  // namespace mdlab
