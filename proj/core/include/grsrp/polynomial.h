#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace grsrp {

// Unknowns of the gyro-aided system, in the order used by every monomial
// ordering in this library: a1 > a2 > a3 > t1 > t2 > t3.
inline constexpr int kNumUnknowns = 6;
inline constexpr std::array<const char *, kNumUnknowns> kUnknownNames = {"a1", "a2", "a3", "t1", "t2", "t3"};

using Monomial = std::array<std::uint8_t, kNumUnknowns>;

int degree(const Monomial &m);
Monomial multiply(const Monomial &a, const Monomial &b);
bool divides(const Monomial &d, const Monomial &m);
Monomial unit_monomial(int var);
std::string to_string(const Monomial &m);

// Graded reverse lexicographic comparison: true when a > b.
bool grevlex_greater(const Monomial &a, const Monomial &b);

struct GrevlexGreater {
    bool operator()(const Monomial &a, const Monomial &b) const { return grevlex_greater(a, b); }
};

// All monomials of total degree <= max_degree, sorted grevlex-descending.
std::vector<Monomial> monomials_up_to(int max_degree);

// Sparse multivariate polynomial over a coefficient ring S, terms kept in
// grevlex-descending order. Zero coefficients are never stored.
template <class S> class Polynomial {
  public:
    using Terms = std::map<Monomial, S, GrevlexGreater>;

    Polynomial() = default;

    void add_term(const Monomial &m, const S &c) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!(c == S(0))) {
                terms_.emplace(m, c);
            }
            return;
        }
        it->second = it->second + c;
        if (it->second == S(0)) {
            terms_.erase(it);
        }
    }

    const Terms &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    int total_degree() const {
        int d = 0;
        for (const auto &[m, c] : terms_) {
            d = std::max(d, degree(m));
        }
        return d;
    }

    S coefficient(const Monomial &m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? S(0) : it->second;
    }

    Polynomial multiplied_by(const Monomial &m) const {
        Polynomial out;
        for (const auto &[mono, c] : terms_) {
            out.terms_.emplace(multiply(mono, m), c);
        }
        return out;
    }

    // Evaluates at a point whose scalar type T can absorb S (double or
    // std::complex<double> for double coefficients).
    template <class T> T evaluate(std::span<const T> x) const {
        T sum = T(0);
        for (const auto &[mono, c] : terms_) {
            T term = T(c);
            for (int v = 0; v < kNumUnknowns; ++v) {
                for (int e = 0; e < mono[v]; ++e) {
                    term *= x[v];
                }
            }
            sum += term;
        }
        return sum;
    }

  private:
    Terms terms_;
};

} // namespace grsrp
