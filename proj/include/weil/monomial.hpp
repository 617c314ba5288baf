#ifndef WEIL_MONOMIAL_HPP
#define WEIL_MONOMIAL_HPP

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace weil {

// Exponent vector of a monomial in x0, x1, ....  Trailing zero exponents are
// trimmed, so a monomial has one representation regardless of how many
// variables the surrounding polynomial happens to use.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<unsigned> exps) : exps_(std::move(exps)) { trim(); }

    static Monomial one() { return Monomial{}; }

    static Monomial var(std::size_t i, unsigned power = 1) {
        if (power == 0) return Monomial{};
        std::vector<unsigned> e(i + 1, 0);
        e[i] = power;
        return Monomial(std::move(e));
    }

    unsigned exponent(std::size_t i) const { return i < exps_.size() ? exps_[i] : 0; }

    // 1 + index of the last variable with a nonzero exponent (0 for the unit).
    std::size_t width() const { return exps_.size(); }

    unsigned degree() const {
        unsigned d = 0;
        for (unsigned e : exps_) d += e;
        return d;
    }

    bool is_one() const { return exps_.empty(); }

    Monomial operator*(const Monomial& o) const {
        std::vector<unsigned> e(std::max(exps_.size(), o.exps_.size()), 0u);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = exponent(i) + o.exponent(i);
        return Monomial(std::move(e));
    }

    bool divides(const Monomial& o) const {
        for (std::size_t i = 0; i < exps_.size(); ++i)
            if (exps_[i] > o.exponent(i)) return false;
        return true;
    }

    // Quotient; caller guarantees o.divides(*this).
    Monomial operator/(const Monomial& o) const {
        std::vector<unsigned> e(exps_.size(), 0u);
        for (std::size_t i = 0; i < exps_.size(); ++i) e[i] = exps_[i] - o.exponent(i);
        return Monomial(std::move(e));
    }

    friend Monomial lcm(const Monomial& a, const Monomial& b) {
        std::vector<unsigned> e(std::max(a.exps_.size(), b.exps_.size()), 0u);
        for (std::size_t i = 0; i < e.size(); ++i)
            e[i] = std::max(a.exponent(i), b.exponent(i));
        return Monomial(std::move(e));
    }

    bool operator==(const Monomial& o) const { return exps_ == o.exps_; }
    bool operator!=(const Monomial& o) const { return exps_ != o.exps_; }

    // Degree-lexicographic order, ascending.  Ties within a degree are broken
    // so that lower-indexed generators come first:
    //   1 < x0 < x1 < x0^2 < x0*x1 < x1^2 < ...
    // This is the order every basis listing and coordinate vector uses.
    bool operator<(const Monomial& o) const {
        const unsigned da = degree(), db = o.degree();
        if (da != db) return da < db;
        const std::size_t w = std::max(exps_.size(), o.exps_.size());
        for (std::size_t i = w; i-- > 0;) {
            const unsigned ea = exponent(i), eb = o.exponent(i);
            if (ea != eb) return ea < eb;
        }
        return false;
    }
    bool operator>(const Monomial& o) const { return o < *this; }
    bool operator<=(const Monomial& o) const { return !(o < *this); }
    bool operator>=(const Monomial& o) const { return !(*this < o); }

    std::string str(const std::vector<std::string>& names) const {
        if (is_one()) return "1";
        std::string out;
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            if (exps_[i] == 0) continue;
            if (!out.empty()) out += "*";
            out += i < names.size() ? names[i] : "x" + std::to_string(i);
            if (exps_[i] > 1) out += "^" + std::to_string(exps_[i]);
        }
        return out;
    }

private:
    void trim() {
        while (!exps_.empty() && exps_.back() == 0) exps_.pop_back();
    }

    std::vector<unsigned> exps_;
};

// All monomials in `nvars` variables of exact total degree `degree`,
// ascending.  Used for nilpotency-index scans and exhaustive test oracles.
inline std::vector<Monomial> monomials_of_degree(std::size_t nvars, unsigned degree) {
    std::vector<Monomial> out;
    std::vector<unsigned> current(nvars, 0u);
    auto rec = [&](auto&& self, std::size_t i, unsigned remaining) -> void {
        if (i + 1 == nvars) {
            current[i] = remaining;
            out.push_back(Monomial(current));
            return;
        }
        for (unsigned e = 0; e <= remaining; ++e) {
            current[i] = e;
            self(self, i + 1, remaining - e);
        }
    };
    if (nvars == 0) {
        if (degree == 0) out.push_back(Monomial::one());
        return out;
    }
    rec(rec, 0, degree);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace weil

#endif
