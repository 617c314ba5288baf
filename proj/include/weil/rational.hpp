#ifndef WEIL_RATIONAL_HPP
#define WEIL_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "error.hpp"

namespace weil {

// Exact scalar used everywhere correctness matters: algebra structure
// constants, morphism matrices, polynomial lifts, limit solving.  Floating
// point only enters when an expression contains a transcendental primitive.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& q) { return static_cast<double>(q); }

inline std::string to_string(const Rat& q) { return q.str(); }

// Parse "p", "-p", "p/q" or a decimal literal like "0.3" (kept exact: 3/10).
// Used by the CLI for --point values and by tests; expression literals go
// through the expression parser instead.
inline Rat parse_rational(const std::string& text) {
    std::size_t i = 0;
    const auto eof = [&] { return i >= text.size(); };
    bool negative = false;
    if (!eof() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    auto digits = [&](BigInt& out, std::size_t& count) {
        count = 0;
        while (!eof() && text[i] >= '0' && text[i] <= '9') {
            out = out * 10 + (text[i] - '0');
            ++i;
            ++count;
        }
    };
    BigInt whole = 0;
    std::size_t nwhole = 0;
    digits(whole, nwhole);
    Rat value(whole);
    if (!eof() && text[i] == '.') {
        ++i;
        BigInt frac = 0;
        std::size_t nfrac = 0;
        digits(frac, nfrac);
        if (nwhole == 0 && nfrac == 0)
            fail(errc::syntax_error, "malformed number '" + text + "'", i);
        BigInt scale = 1;
        for (std::size_t k = 0; k < nfrac; ++k) scale *= 10;
        value += Rat(frac, scale);
    } else if (!eof() && text[i] == '/') {
        ++i;
        BigInt denom = 0;
        std::size_t ndenom = 0;
        digits(denom, ndenom);
        if (nwhole == 0 || ndenom == 0)
            fail(errc::syntax_error, "malformed rational '" + text + "'", i);
        if (denom == 0)
            fail(errc::domain_error, "zero denominator in '" + text + "'");
        value = Rat(whole, denom);
    } else if (nwhole == 0) {
        fail(errc::syntax_error, "malformed number '" + text + "'", i);
    }
    if (!eof())
        fail(errc::syntax_error, "trailing characters in number '" + text + "'", i);
    return negative ? Rat(-value) : value;
}

// Relative-absolute comparison used by every float-mode check:
// |a-b| <= tol * max(1, |a|, |b|).
inline bool approx_equal(double a, double b, double tol = 1e-9) {
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= tol * scale;
}

} // namespace weil

#endif
