#pragma once

#include <cstdint>
#include <vector>

#include <transval/sigma.hpp>

// Shared helpers for the test suites: a deterministic RNG, random generators
// for the core value types, and small independent oracles.
namespace test_support {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        state_ ^= state_ << 13;
        state_ ^= state_ >> 7;
        state_ ^= state_ << 17;
        return state_;
    }
    unsigned below(unsigned n) { return static_cast<unsigned>(next() % n); }
    long int_in(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
    bool flip() { return next() & 1; }

private:
    std::uint64_t state_;
};

inline transval::SigmaPoly random_sigma_poly(Rng& rng, unsigned max_deg, long coeff_bound, bool nonzero) {
    for (;;) {
        std::vector<transval::Int> c(rng.below(max_deg + 1) + 1);
        for (auto& x : c) x = transval::Int(rng.int_in(-coeff_bound, coeff_bound));
        transval::SigmaPoly p(std::move(c));
        if (!nonzero || !p.is_zero()) return p;
    }
}

inline transval::SigmaRational random_sigma_rational(Rng& rng) {
    transval::SigmaPoly num = random_sigma_poly(rng, 3, 6, false);
    transval::SigmaPoly den = random_sigma_poly(rng, 2, 4, true);
    return transval::SigmaRational(num, den);
}

inline transval::SigmaExponent random_exponent(Rng& rng, unsigned max_index, long entry_bound) {
    transval::SigmaExponent out;
    for (unsigned i = 0; i <= max_index; ++i) {
        if (rng.flip()) continue;
        long e = rng.int_in(0, entry_bound);
        out = out + transval::SigmaExponent::term(i, transval::Rat(e));
    }
    return out;
}

// Rows of Pascal's triangle mod p: the brute-force expansion of (1+x)^n.
class PascalModP {
public:
    PascalModP(unsigned p, unsigned long rows) : p_(p) {
        table_.reserve(rows + 1);
        table_.push_back({1});
        for (unsigned long n = 1; n <= rows; ++n) {
            const auto& prev = table_.back();
            std::vector<unsigned> row(n + 1, 0);
            row[0] = row[n] = 1;
            for (unsigned long k = 1; k < n; ++k) row[k] = (prev[k - 1] + prev[k]) % p_;
            table_.push_back(std::move(row));
        }
    }

    unsigned at(unsigned long n, unsigned long k) const {
        if (n >= table_.size() || k > n) return 0;
        return table_[n][k];
    }

private:
    unsigned p_;
    std::vector<std::vector<unsigned>> table_;
};

} // namespace test_support
