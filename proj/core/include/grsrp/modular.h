#pragma once

#include <cstdint>
#include <ostream>

namespace grsrp {

// Element of the prime field Z_p, p = 2^31 - 1. Used to probe the structure
// of the polynomial system without floating-point round-off.
class ModP {
  public:
    static constexpr std::uint64_t kPrime = 2147483647ULL;

    constexpr ModP() = default;
    constexpr ModP(std::int64_t v) : v_(reduce(v)) {}

    constexpr std::uint64_t value() const { return v_; }
    constexpr bool is_zero() const { return v_ == 0; }

    constexpr ModP operator+(ModP o) const { return from_raw((v_ + o.v_) % kPrime); }
    constexpr ModP operator-(ModP o) const { return from_raw((v_ + kPrime - o.v_) % kPrime); }
    constexpr ModP operator*(ModP o) const { return from_raw((v_ * o.v_) % kPrime); }
    constexpr ModP operator-() const { return from_raw((kPrime - v_) % kPrime); }
    ModP operator/(ModP o) const { return *this * o.inverse(); }
    ModP &operator+=(ModP o) { return *this = *this + o; }
    ModP &operator-=(ModP o) { return *this = *this - o; }
    ModP &operator*=(ModP o) { return *this = *this * o; }
    constexpr bool operator==(const ModP &) const = default;

    // Fermat inverse; the inverse of zero is reported as zero.
    ModP inverse() const {
        std::uint64_t result = 1, base = v_, e = kPrime - 2;
        while (e > 0) {
            if (e & 1U) {
                result = result * base % kPrime;
            }
            base = base * base % kPrime;
            e >>= 1U;
        }
        return from_raw(result);
    }

  private:
    static constexpr std::uint64_t reduce(std::int64_t v) {
        const std::int64_t p = static_cast<std::int64_t>(kPrime);
        const std::int64_t r = v % p;
        return static_cast<std::uint64_t>(r < 0 ? r + p : r);
    }
    static constexpr ModP from_raw(std::uint64_t v) {
        ModP m;
        m.v_ = v;
        return m;
    }

    std::uint64_t v_ = 0;
};

inline std::ostream &operator<<(std::ostream &os, ModP m) { return os << m.value(); }

} // namespace grsrp
