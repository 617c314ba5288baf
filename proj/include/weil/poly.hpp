#ifndef WEIL_POLY_HPP
#define WEIL_POLY_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "monomial.hpp"
#include "rational.hpp"

namespace weil {

// Sparse multivariate polynomial over the exact rationals.  Terms are kept in
// the global monomial order, so leading() is the largest term and iteration
// is deterministic.
class Poly {
public:
    using Terms = std::map<Monomial, Rat>;

    Poly() = default;

    static Poly zero() { return Poly{}; }

    static Poly constant(Rat c) {
        Poly p;
        if (c != 0) p.terms_.emplace(Monomial::one(), std::move(c));
        return p;
    }

    static Poly var(std::size_t i, unsigned power = 1) {
        Poly p;
        p.terms_.emplace(Monomial::var(i, power), Rat(1));
        return p;
    }

    static Poly term(Monomial m, Rat c) {
        Poly p;
        if (c != 0) p.terms_.emplace(std::move(m), std::move(c));
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }

    // Total degree; -1 for the zero polynomial.
    int degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.degree()));
        return d;
    }

    // 1 + largest variable index used anywhere.
    std::size_t width() const {
        std::size_t w = 0;
        for (const auto& [m, c] : terms_) w = std::max(w, m.width());
        return w;
    }

    Rat coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    Rat constant_term() const { return coefficient(Monomial::one()); }

    // Largest term; caller guarantees the polynomial is nonzero.
    const std::pair<const Monomial, Rat>& leading() const { return *terms_.rbegin(); }

    const Terms& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    Poly& operator+=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Poly operator+(const Poly& o) const { Poly r = *this; r += o; return r; }
    Poly operator-(const Poly& o) const { Poly r = *this; r -= o; return r; }

    Poly operator-() const {
        Poly r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    Poly operator*(const Poly& o) const {
        Poly r;
        for (const auto& [ma, ca] : terms_)
            for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }

    Poly operator*(const Rat& c) const {
        Poly r;
        if (c == 0) return r;
        for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
        return r;
    }
    friend Poly operator*(const Rat& c, const Poly& p) { return p * c; }
    Poly& operator*=(const Rat& c) { *this = *this * c; return *this; }

    // Multiply by a single term; the workhorse of polynomial reduction.
    Poly mul_term(const Monomial& m, const Rat& c) const {
        Poly r;
        if (c == 0) return r;
        for (const auto& [mm, cc] : terms_) r.terms_.emplace(mm * m, cc * c);
        return r;
    }

    Poly pow(unsigned e) const {
        Poly r = constant(Rat(1));
        Poly base = *this;
        while (e > 0) {
            if (e & 1u) r *= base;
            base = e > 1 ? base * base : base;
            e >>= 1u;
        }
        return r;
    }

    bool operator==(const Poly& o) const { return terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return terms_ != o.terms_; }

    // Substitute images[i] for variable i.  Variables beyond the image list
    // are a caller error and get a zero image.
    Poly substitute(const std::vector<Poly>& images) const {
        Poly out;
        for (const auto& [m, c] : terms_) {
            Poly t = constant(c);
            for (std::size_t i = 0; i < m.width(); ++i)
                for (unsigned e = 0; e < m.exponent(i); ++e)
                    t *= i < images.size() ? images[i] : zero();
            out += t;
        }
        return out;
    }

    // Human-readable form with caller-supplied variable names, ascending.
    std::string str(const std::vector<std::string>& names) const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            const bool first = out.empty();
            Rat a = c;
            if (a < 0) {
                out += first ? "-" : " - ";
                a = -a;
            } else if (!first) {
                out += " + ";
            }
            if (m.is_one()) {
                out += to_string(a);
            } else {
                if (a != 1) out += to_string(a) + "*";
                out += m.str(names);
            }
        }
        return out;
    }

private:
    void add_term(const Monomial& m, const Rat& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Terms terms_;
};

} // namespace weil

#endif
