#ifndef WEIL_SESSION_HPP
#define WEIL_SESSION_HPP

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "io.hpp"

namespace weil {

namespace detail {

inline bool parse_uint(const std::string& s, std::size_t& out) {
    if (s.empty()) return false;
    out = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        out = out * 10 + static_cast<std::size_t>(c - '0');
    }
    return true;
}

} // namespace detail

// Build an algebra from a preset spec:
//   R            the scalar field
//   dual         R[x0]/(x0^2)
//   jet<k>       R[x0]/(x0^(k+1)),             k >= 1
//   Dn<n>        R[x0..x_(n-1)] / (all degree-2 monomials), n >= 1
//   W<k>,<n>     R[x0..x_(n-1)] / (all degree-(k+1) monomials)
// Returns nullptr when the name does not match the grammar.
inline AlgebraPtr algebra_from_preset(const std::string& spec) {
    if (spec == "R") return WeilAlgebra::create(0, {});
    if (spec == "dual") return WeilAlgebra::create(1, {"x0^2"});
    auto monomial_cut = [](std::size_t n, unsigned degree) {
        std::vector<std::string> rels;
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
        for (const auto& alpha : detail::multi_indices_below(n, degree + 1)) {
            unsigned total = 0;
            for (unsigned a : alpha) total += a;
            if (total == degree)
                rels.push_back(Monomial(std::vector<unsigned>(alpha)).str(names));
        }
        return WeilAlgebra::create(n, rels);
    };
    std::size_t k = 0, n = 0;
    if (spec.rfind("jet", 0) == 0 && detail::parse_uint(spec.substr(3), k) && k >= 1)
        return WeilAlgebra::create(1, {"x0^" + std::to_string(k + 1)});
    if (spec.rfind("Dn", 0) == 0 && detail::parse_uint(spec.substr(2), n) && n >= 1)
        return monomial_cut(n, 2);
    if (spec.rfind("W", 0) == 0) {
        const auto comma = spec.find(',');
        if (comma != std::string::npos &&
            detail::parse_uint(spec.substr(1, comma - 1), k) &&
            detail::parse_uint(spec.substr(comma + 1), n) && k >= 1 && n >= 1)
            return monomial_cut(n, k + 1);
    }
    return nullptr;
}

// Named algebra and morphism registries.  Preset names resolve through the
// grammar above and cannot be shadowed; `A*B` specs tensor their factors.
class Session {
public:
    void register_algebra(const std::string& name, AlgebraPtr w) {
        if (name.empty()) fail(errc::duplicate_name, "algebra name must be nonempty");
        if (name.find('*') != std::string::npos)
            fail(errc::duplicate_name, "algebra name may not contain '*'");
        if (algebra_from_preset(name))
            fail(errc::duplicate_name, "'" + name + "' is a preset and cannot be redefined");
        for (const auto& [n, _] : algebras_)
            if (n == name)
                fail(errc::duplicate_name, "algebra '" + name + "' is already defined");
        algebras_.emplace_back(name, std::move(w));
    }

    void register_morphism(const std::string& name, WeilMorphism phi) {
        for (const auto& [n, _] : morphisms_)
            if (n == name)
                fail(errc::duplicate_name, "morphism '" + name + "' is already defined");
        morphisms_.emplace_back(name, std::move(phi));
    }

    // Resolve a spec: registry name, preset, or '*'-tensor of specs.
    AlgebraPtr algebra(const std::string& spec) const {
        if (spec.find('*') != std::string::npos) {
            AlgebraPtr acc;
            std::size_t start = 0;
            while (start <= spec.size()) {
                const auto stop = spec.find('*', start);
                const std::string part =
                    spec.substr(start, stop == std::string::npos ? stop : stop - start);
                if (part.empty())
                    fail(errc::syntax_error, "empty factor in tensor spec '" + spec + "'");
                const AlgebraPtr f = algebra(part);
                acc = acc ? tensor(acc, f) : f;
                if (stop == std::string::npos) break;
                start = stop + 1;
            }
            return acc;
        }
        for (const auto& [n, w] : algebras_)
            if (n == spec) return w;
        if (AlgebraPtr w = algebra_from_preset(spec)) return w;
        fail(errc::unknown_identifier, "unknown algebra '" + spec + "'");
    }

    const WeilMorphism& morphism(const std::string& name) const {
        for (const auto& [n, phi] : morphisms_)
            if (n == name) return phi;
        fail(errc::unknown_identifier, "unknown morphism '" + name + "'");
    }

    const std::vector<std::pair<std::string, AlgebraPtr>>& algebras() const {
        return algebras_;
    }
    const std::vector<std::pair<std::string, WeilMorphism>>& morphisms() const {
        return morphisms_;
    }

    Json to_json() const {
        SessionDocument doc;
        for (const auto& [n, w] : algebras_) doc.algebras.push_back({n, w});
        for (const auto& [n, phi] : morphisms_) {
            SessionDocument::NamedMorphism m;
            m.name = n;
            m.source = describe(phi.source());
            m.target = describe(phi.target());
            for (const auto& img : phi.gen_images()) m.images.push_back(img.str());
            doc.morphisms.push_back(std::move(m));
        }
        return session_to_json(doc);
    }

    static Session from_json(const Json& j) {
        const SessionDocument doc = session_from_json(j);
        Session s;
        for (const auto& a : doc.algebras) s.register_algebra(a.name, a.w);
        for (const auto& m : doc.morphisms)
            s.register_morphism(
                m.name, WeilMorphism::from_strings(s.algebra(m.source), s.algebra(m.target),
                                                   m.images));
        return s;
    }

    // A printable spec for an algebra: its registry/preset name when the
    // presentation is recognizable, else the presentation itself.
    std::string describe(const AlgebraPtr& w) const {
        for (const auto& [n, a] : algebras_)
            if (same_algebra(a, w)) return n;
        for (const char* name : {"R", "dual", "jet2", "jet3", "Dn2", "Dn3"})
            if (same_algebra(algebra_from_preset(name), w)) return name;
        std::string out = "presentation(" + std::to_string(w->n_gens()) + "; ";
        bool first = true;
        for (const auto& r : w->relation_strings()) {
            if (!first) out += ", ";
            out += r;
            first = false;
        }
        return out + ")";
    }

private:
    std::vector<std::pair<std::string, AlgebraPtr>> algebras_;
    std::vector<std::pair<std::string, WeilMorphism>> morphisms_;
};

} // namespace weil

#endif
