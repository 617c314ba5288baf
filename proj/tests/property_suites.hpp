// Randomized property suites shared by the unit tests and the acceptance
// runner.  Each suite is a pure function of (seed, cases): it returns the
// number of failures together with a fingerprint hashed over every outcome,
// so reproducibility can be checked by comparing fingerprints across runs.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "weil/laws.hpp"

namespace weil_properties {

struct PropertyResult {
    std::string name;
    unsigned cases = 0;
    unsigned failures = 0;
    std::uint64_t fingerprint = 1469598103934665603ULL;  // FNV-1a offset basis
    std::string first_failure;

    void absorb(const std::string& outcome) {
        for (unsigned char c : outcome) {
            fingerprint ^= c;
            fingerprint *= 1099511628211ULL;
        }
    }
    void record_failure(const std::string& witness) {
        if (failures == 0) first_failure = witness;
        ++failures;
    }
};

namespace detail {

inline weil::Expr random_expr(std::mt19937_64& gen, unsigned depth,
                              std::size_t arity) {
    using weil::Expr;
    using weil::Rat;
    auto pick = [&](int lo, int hi) {
        std::uniform_int_distribution<int> d(lo, hi);
        return d(gen);
    };
    if (depth == 0 || pick(0, 3) == 0) {
        if (arity > 0 && pick(0, 2) > 0)
            return Expr::var(static_cast<std::size_t>(pick(0, int(arity) - 1)));
        const int num = pick(-9, 9);
        const int den = pick(1, 9);
        return Expr::lit(Rat(num, den));
    }
    switch (pick(0, 4)) {
        case 0: {
            std::vector<Expr> ops;
            const int n = pick(2, 3);
            for (int i = 0; i < n; ++i)
                ops.push_back(random_expr(gen, depth - 1, arity));
            return Expr::sum(std::move(ops));
        }
        case 1: {
            std::vector<Expr> ops;
            const int n = pick(2, 3);
            for (int i = 0; i < n; ++i)
                ops.push_back(random_expr(gen, depth - 1, arity));
            return Expr::product(std::move(ops));
        }
        case 2:
            return Expr::quotient(random_expr(gen, depth - 1, arity),
                                  random_expr(gen, depth - 1, arity));
        case 3:
            return Expr::power(random_expr(gen, depth - 1, arity),
                               static_cast<unsigned>(pick(0, 4)));
        default: {
            const weil::Primitive prims[] = {weil::Primitive::sin, weil::Primitive::cos,
                                             weil::Primitive::exp, weil::Primitive::log,
                                             weil::Primitive::sqrt};
            return Expr::call(prims[pick(0, 4)], random_expr(gen, depth - 1, arity));
        }
    }
}

inline std::string poly_str(const weil::Poly& p, std::size_t n_vars) {
    std::vector<std::string> names;
    names.reserve(n_vars);
    for (std::size_t i = 0; i < n_vars; ++i) names.push_back("x" + std::to_string(i));
    return p.str(names);
}

inline weil::Poly random_poly(std::mt19937_64& gen, std::size_t n_vars,
                              unsigned max_degree, unsigned max_terms) {
    auto pick = [&](int lo, int hi) {
        std::uniform_int_distribution<int> d(lo, hi);
        return d(gen);
    };
    weil::Poly p;
    const int n_terms = pick(1, int(max_terms));
    for (int t = 0; t < n_terms; ++t) {
        std::vector<unsigned> exps(n_vars, 0);
        const int total = pick(0, int(max_degree));
        for (int u = 0; u < total && n_vars > 0; ++u)
            ++exps[static_cast<std::size_t>(pick(0, int(n_vars) - 1))];
        int c = 0;
        while (c == 0) c = pick(-5, 5);
        p += weil::Poly::term(weil::Monomial(exps), weil::Rat(c));
    }
    return p;
}

} // namespace detail

// Printing a parsed expression and re-parsing the result is a fixed point,
// and the reprinted tree evaluates identically to the original.
inline PropertyResult parser_round_trip(std::uint64_t seed, unsigned cases) {
    PropertyResult res{"parser-round-trip"};
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    const std::size_t arity = 3;
    for (unsigned i = 0; i < cases; ++i) {
        ++res.cases;
        const weil::Expr e = detail::random_expr(gen, 3, arity);
        const std::string printed = e.str();
        weil::Expr reparsed = e;
        try {
            reparsed = weil::parse_expr(printed, arity);
        } catch (const weil::Error& err) {
            res.record_failure("'" + printed + "' failed to re-parse: " + err.what());
            continue;
        }
        const std::string reprinted = reparsed.str();
        if (reprinted != printed) {
            res.record_failure("'" + printed + "' reprinted as '" + reprinted + "'");
            continue;
        }
        res.absorb(printed);
        const std::vector<double> at = {coord(gen), coord(gen), coord(gen)};
        try {
            const double a = weil::eval_real(e, at);
            const double b = weil::eval_real(reparsed, at);
            if (!(a == b) && !(std::isnan(a) && std::isnan(b)))
                res.record_failure("'" + printed + "' evaluates differently after "
                                   "a round trip");
        } catch (const weil::Error&) {
            // Domain errors (log/sqrt/division) must at least agree in kind.
            bool other_threw = false;
            try {
                weil::eval_real(reparsed, at);
            } catch (const weil::Error&) {
                other_threw = true;
            }
            if (!other_threw)
                res.record_failure("'" + printed + "' throws only on one side");
        }
    }
    return res;
}

// Reduction to normal form is idempotent and compatible with products:
// nf(nf(p)) = nf(p) and nf(p*q) = nf(nf(p)*nf(q)) in every preset algebra.
inline PropertyResult normal_form_idempotence(std::uint64_t seed, unsigned cases) {
    PropertyResult res{"normal-form-idempotence"};
    std::mt19937_64 gen(seed);
    const auto& family = weil::preset_family();
    for (unsigned i = 0; i < cases; ++i) {
        ++res.cases;
        const auto& preset = family[i % family.size()];
        const std::size_t n = preset.w->n_gens();
        const weil::Poly p = detail::random_poly(gen, n, 4, 4);
        const weil::Poly q = detail::random_poly(gen, n, 4, 4);
        const weil::Poly np = preset.w->reduce(p);
        const weil::Poly nq = preset.w->reduce(q);
        if (preset.w->reduce(np) != np)
            res.record_failure(preset.name + ": reduce not idempotent on " + detail::poly_str(p, n));
        const weil::Poly direct = preset.w->reduce(p * q);
        if (direct != preset.w->reduce(np * nq))
            res.record_failure(preset.name + ": reduce not multiplicative on " +
                               detail::poly_str(p, n) + " and " + detail::poly_str(q, n));
        // Element arithmetic is the same computation on packed coordinates.
        const auto ep = weil::element(preset.w, p);
        const auto eq = weil::element(preset.w, q);
        if ((ep * eq) != weil::element(preset.w, direct))
            res.record_failure(preset.name + ": element product disagrees with "
                               "polynomial reduction");
        res.absorb(preset.name);
        res.absorb(detail::poly_str(direct, n));
    }
    return res;
}

// Every catalog morphism is multiplicative and linear: phi(a*b) = phi(a)*phi(b),
// phi(a+b) = phi(a)+phi(b), and the matrix action agrees with evaluating
// generator images.
inline PropertyResult morphism_multiplicativity(std::uint64_t seed, unsigned cases) {
    PropertyResult res{"morphism-multiplicativity"};
    weil::Rng rng(seed);
    const auto& catalog = weil::preset_morphisms();
    for (unsigned i = 0; i < cases; ++i) {
        ++res.cases;
        const auto& pm = catalog[i % catalog.size()];
        const auto a = rng.element_of(pm.phi.source());
        const auto b = rng.element_of(pm.phi.source());
        const auto lhs = pm.phi.apply(a * b);
        const auto rhs = pm.phi.apply(a) * pm.phi.apply(b);
        if (lhs != rhs)
            res.record_failure(pm.name + ": not multiplicative at a=" + a.str() +
                               " b=" + b.str());
        if (pm.phi.apply(a + b) != pm.phi.apply(a) + pm.phi.apply(b))
            res.record_failure(pm.name + ": not additive at a=" + a.str() +
                               " b=" + b.str());
        if (pm.phi.apply_multiplicative(a * b) != lhs)
            res.record_failure(pm.name + ": matrix and generator-image routes "
                               "disagree at " + (a * b).str());
        res.absorb(pm.name);
        res.absorb(lhs.str());
    }
    return res;
}

} // namespace weil_properties
