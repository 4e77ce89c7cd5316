#include "grsrp/polynomial.h"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace grsrp {

int degree(const Monomial &m) { return std::accumulate(m.begin(), m.end(), 0); }

Monomial multiply(const Monomial &a, const Monomial &b) {
    Monomial out{};
    for (int v = 0; v < kNumUnknowns; ++v) {
        out[v] = static_cast<std::uint8_t>(a[v] + b[v]);
    }
    return out;
}

bool divides(const Monomial &d, const Monomial &m) {
    for (int v = 0; v < kNumUnknowns; ++v) {
        if (d[v] > m[v]) {
            return false;
        }
    }
    return true;
}

Monomial unit_monomial(int var) {
    Monomial m{};
    m[var] = 1;
    return m;
}

std::string to_string(const Monomial &m) {
    std::ostringstream os;
    bool first = true;
    for (int v = 0; v < kNumUnknowns; ++v) {
        if (m[v] == 0) {
            continue;
        }
        if (!first) {
            os << '*';
        }
        os << kUnknownNames[v];
        if (m[v] > 1) {
            os << '^' << int(m[v]);
        }
        first = false;
    }
    return first ? "1" : os.str();
}

bool grevlex_greater(const Monomial &a, const Monomial &b) {
    const int da = degree(a), db = degree(b);
    if (da != db) {
        return da > db;
    }
    // Ties: the monomial with the smaller exponent in the last differing
    // variable is larger.
    for (int v = kNumUnknowns - 1; v >= 0; --v) {
        if (a[v] != b[v]) {
            return a[v] < b[v];
        }
    }
    return false;
}

std::vector<Monomial> monomials_up_to(int max_degree) {
    std::vector<Monomial> out;
    Monomial m{};
    // Odometer over exponent vectors with bounded total degree.
    while (true) {
        out.push_back(m);
        int v = kNumUnknowns - 1;
        while (v >= 0) {
            ++m[v];
            if (degree(m) <= max_degree) {
                break;
            }
            m[v] = 0;
            --v;
        }
        if (v < 0) {
            break;
        }
    }
    std::sort(out.begin(), out.end(), GrevlexGreater{});
    return out;
}

} // namespace grsrp
