#ifndef WEIL_GROEBNER_HPP
#define WEIL_GROEBNER_HPP

#include <cstddef>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace weil {

// Fully reduce p modulo G: while any term of p is divisible by some leading
// monomial in G, cancel the largest such term.  With G a Groebner basis this
// is the canonical normal form.
inline Poly normal_form(Poly p, const std::vector<Poly>& basis) {
    bool reduced = true;
    while (reduced && !p.is_zero()) {
        reduced = false;
        // Walk terms from the largest down so each pass does maximal work.
        const auto& terms = p.terms();
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
            const Monomial m = it->first;
            const Rat c = it->second;
            for (const Poly& g : basis) {
                if (g.is_zero()) continue;
                const auto& [lm, lc] = g.leading();
                if (!lm.divides(m)) continue;
                p -= g.mul_term(m / lm, c / lc);
                reduced = true;
                break;
            }
            if (reduced) break;
        }
    }
    return p;
}

inline Poly s_polynomial(const Poly& f, const Poly& g) {
    const auto& [lmf, lcf] = f.leading();
    const auto& [lmg, lcg] = g.leading();
    const Monomial l = lcm(lmf, lmg);
    return f.mul_term(l / lmf, Rat(1) / lcf) - g.mul_term(l / lmg, Rat(1) / lcg);
}

// Buchberger completion followed by minimalization and interreduction.
// Returns the reduced Groebner basis (monic, sorted by leading monomial),
// which is unique for the ideal and the fixed monomial order.
inline std::vector<Poly> groebner_basis(const std::vector<Poly>& generators) {
    std::vector<Poly> g;
    for (const Poly& p : generators)
        if (!p.is_zero()) g.push_back(p);
    if (g.empty()) return g;

    std::deque<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j) pairs.emplace_back(i, j);

    while (!pairs.empty()) {
        const auto [i, j] = pairs.front();
        pairs.pop_front();
        const Monomial& lmi = g[i].leading().first;
        const Monomial& lmj = g[j].leading().first;
        // Coprime leading monomials always reduce to zero; skip them.
        if (lcm(lmi, lmj) == lmi * lmj) continue;
        Poly r = normal_form(s_polynomial(g[i], g[j]), g);
        if (r.is_zero()) continue;
        for (std::size_t k = 0; k < g.size(); ++k) pairs.emplace_back(k, g.size());
        g.push_back(std::move(r));
    }

    // Minimalize: drop any element whose leading monomial is divisible by the
    // leading monomial of another kept element.
    std::vector<Poly> minimal;
    for (std::size_t i = 0; i < g.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
            if (i == j) continue;
            const Monomial& lmj = g[j].leading().first;
            const Monomial& lmi = g[i].leading().first;
            if (lmj.divides(lmi) && !(lmi == lmj && i < j)) redundant = true;
        }
        if (!redundant) minimal.push_back(g[i]);
    }

    // Interreduce and normalize to monic.
    std::vector<Poly> reduced;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<Poly> others;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        Poly r = normal_form(minimal[i], others);
        if (r.is_zero()) continue;
        reduced.push_back(r * (Rat(1) / r.leading().second));
    }

    std::sort(reduced.begin(), reduced.end(), [](const Poly& a, const Poly& b) {
        return a.leading().first < b.leading().first;
    });
    return reduced;
}

// The ideal is the whole ring iff the reduced basis contains a constant.
inline bool contains_unit(const std::vector<Poly>& basis) {
    for (const Poly& g : basis)
        if (!g.is_zero() && g.leading().first.is_one()) return true;
    return false;
}

// A quotient by a proper ideal is finite-dimensional over the scalars iff
// every variable has some pure power among the leading monomials.  Returns
// the minimal pure-power exponent per variable, or nullopt.
inline std::optional<std::vector<unsigned>> pure_power_bounds(
    const std::vector<Poly>& basis, std::size_t nvars) {
    std::vector<unsigned> bound(nvars, 0u);
    for (const Poly& g : basis) {
        if (g.is_zero()) continue;
        const Monomial& lm = g.leading().first;
        std::size_t which = nvars;
        bool pure = true;
        for (std::size_t i = 0; i < lm.width() && pure; ++i) {
            if (lm.exponent(i) == 0) continue;
            if (which != nvars) pure = false;
            which = i;
        }
        if (!pure || which == nvars) continue;
        const unsigned e = lm.exponent(which);
        if (bound[which] == 0 || e < bound[which]) bound[which] = e;
    }
    for (std::size_t i = 0; i < nvars; ++i)
        if (bound[i] == 0) return std::nullopt;
    return bound;
}

// Monomials outside the leading-term ideal, ascending in the global order.
// These index the quotient's coordinate basis.
inline std::vector<Monomial> standard_monomials(const std::vector<Poly>& basis,
                                                std::size_t nvars,
                                                const std::vector<unsigned>& bounds) {
    std::vector<Monomial> out;
    std::vector<unsigned> exps(nvars, 0u);
    auto divisible_by_some_lm = [&](const Monomial& m) {
        for (const Poly& g : basis)
            if (!g.is_zero() && g.leading().first.divides(m)) return true;
        return false;
    };
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == nvars) {
            Monomial m{std::vector<unsigned>(exps)};
            if (!divisible_by_some_lm(m)) out.push_back(std::move(m));
            return;
        }
        for (unsigned e = 0; e < bounds[i]; ++e) {
            exps[i] = e;
            self(self, i + 1);
        }
    };
    if (nvars == 0) {
        out.push_back(Monomial::one());
        return out;
    }
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace weil

#endif
