#ifndef WEIL_LAWS_HPP
#define WEIL_LAWS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lift.hpp"

namespace weil {

// Result of one mechanically checked identity.  `statement` is the
// mathematical identity being verified; reports are serialized with this
// field under the key "paper_ref".
struct LawReport {
    std::string law;
    std::string statement;
    bool pass = true;
    std::uint64_t seed = 0;
    unsigned trials = 0;
    std::vector<std::string> probes;
    std::string counterexample;

    void record_failure(const std::string& witness) {
        if (pass) counterexample = witness;
        pass = false;
    }
    void note_probe(const std::string& name) {
        for (const auto& p : probes)
            if (p == name) return;
        probes.push_back(name);
    }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic source of small rational data for law checking.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    int int_in(int lo, int hi) {
        std::uniform_int_distribution<int> d(lo, hi);
        return d(gen_);
    }

    // Small integer coordinate in [-5, 5].
    Rat coord() { return Rat(int_in(-5, 5)); }

    Rat nonzero_coord() {
        int v = 0;
        while (v == 0) v = int_in(-5, 5);
        return Rat(v);
    }

    Element<Rat> element_of(const AlgebraPtr& w) {
        std::vector<Rat> c;
        c.reserve(w->dim());
        for (std::size_t t = 0; t < w->dim(); ++t) c.push_back(coord());
        return Element<Rat>(w, std::move(c));
    }

    WeilPoint<Rat> point_of(const AlgebraPtr& w, std::size_t arity) {
        std::vector<Element<Rat>> comps;
        comps.reserve(arity);
        for (std::size_t i = 0; i < arity; ++i) comps.push_back(element_of(w));
        return WeilPoint<Rat>(w, std::move(comps));
    }

    // Random polynomial map with integer coefficients in [-5,5], at most
    // `max_terms` terms per component, total degree at most 3.
    SmoothMap poly_map(std::size_t arity, std::size_t coarity, unsigned max_terms = 3) {
        std::vector<Expr> comps;
        comps.reserve(coarity);
        for (std::size_t j = 0; j < coarity; ++j) {
            Poly p;
            const unsigned nterms = 1 + static_cast<unsigned>(int_in(0, int(max_terms) - 1));
            for (unsigned t = 0; t < nterms; ++t) {
                const unsigned total = static_cast<unsigned>(int_in(0, 3));
                std::vector<unsigned> exps(arity, 0);
                for (unsigned u = 0; u < total && arity > 0; ++u)
                    ++exps[static_cast<std::size_t>(int_in(0, int(arity) - 1))];
                p += Poly::term(Monomial(exps), nonzero_coord());
            }
            comps.push_back(expr_from_poly(p));
        }
        return SmoothMap(arity, std::move(comps));
    }

private:
    std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// Preset algebras and the morphism catalog among them.

struct PresetAlgebra {
    std::string name;
    AlgebraPtr w;
};

inline const std::vector<PresetAlgebra>& preset_family() {
    static const std::vector<PresetAlgebra> family = [] {
        std::vector<PresetAlgebra> f;
        f.push_back({"R", preset_R()});
        f.push_back({"dual", preset_dual()});
        f.push_back({"jet2", preset_jet(2)});
        f.push_back({"jet3", preset_jet(3)});
        f.push_back({"Dn2", preset_Dn(2)});
        f.push_back({"dual*dual", tensor(preset_dual(), preset_dual())});
        return f;
    }();
    return family;
}

inline const PresetAlgebra& preset_named(const std::string& name) {
    for (const auto& p : preset_family())
        if (p.name == name) return p;
    fail(errc::unknown_identifier, "no preset algebra named '" + name + "'");
}

struct PresetMorphism {
    std::string name;
    WeilMorphism phi;
};

inline const std::vector<PresetMorphism>& preset_morphisms() {
    static const std::vector<PresetMorphism> catalog = [] {
        const auto& R = preset_named("R").w;
        const auto& dual = preset_named("dual").w;
        const auto& jet2 = preset_named("jet2").w;
        const auto& jet3 = preset_named("jet3").w;
        const auto& dn2 = preset_named("Dn2").w;
        const auto& tt = preset_named("dual*dual").w;

        std::vector<PresetMorphism> c;
        auto add = [&](const std::string& name, WeilMorphism phi) {
            c.push_back({name, std::move(phi)});
        };
        for (const auto& p : preset_family())
            add("id-" + p.name, WeilMorphism::identity(p.w));
        for (const auto& p : preset_family()) {
            if (p.w->is_scalar_field()) continue;
            add("aug-" + p.name, WeilMorphism::augmentation(p.w, R));
            add("unit-" + p.name, WeilMorphism::unit_inclusion(R, p.w));
        }
        add("trunc-jet3-jet2", WeilMorphism::from_strings(jet3, jet2, {"x0"}));
        add("trunc-jet3-dual", WeilMorphism::from_strings(jet3, dual, {"x0"}));
        add("trunc-jet2-dual", WeilMorphism::from_strings(jet2, dual, {"x0"}));
        add("trunc-jet2-Dn2", WeilMorphism::from_strings(jet2, dn2, {"x0"}));
        add("scale-dual", WeilMorphism::from_strings(dual, dual, {"2*x0"}));
        add("square-dual-jet2", WeilMorphism::from_strings(dual, jet2, {"x0^2"}));
        add("square-dual-jet3", WeilMorphism::from_strings(dual, jet3, {"x0^2"}));
        add("cube-dual-jet3", WeilMorphism::from_strings(dual, jet3, {"x0^3"}));
        add("corner-dual-TT", WeilMorphism::from_strings(dual, tt, {"x0*x1"}));
        add("incl-left-dual-TT", tensor_include_left(tt));
        add("incl-right-dual-TT", tensor_include_right(tt));
        add("diag-jet2-TT", WeilMorphism::from_strings(jet2, tt, {"x0 + x1"}));
        add("swap-TT", WeilMorphism::from_strings(tt, tt, {"x1", "x0"}));
        add("merge-TT-dual", WeilMorphism::from_strings(tt, dual, {"x0", "x0"}));
        add("quot-TT-Dn2", WeilMorphism::from_strings(tt, dn2, {"x0", "x1"}));
        add("proj0-Dn2-dual", WeilMorphism::from_strings(dn2, dual, {"x0", "0"}));
        add("proj1-Dn2-dual", WeilMorphism::from_strings(dn2, dual, {"0", "x0"}));
        add("axis0-dual-Dn2", WeilMorphism::from_strings(dual, dn2, {"x0"}));
        add("axis1-dual-Dn2", WeilMorphism::from_strings(dual, dn2, {"x1"}));
        add("diag-dual-Dn2", WeilMorphism::from_strings(dual, dn2, {"x0 + x1"}));
        add("swap-Dn2", WeilMorphism::from_strings(dn2, dn2, {"x1", "x0"}));
        add("squares-Dn2-jet2",
            WeilMorphism::from_strings(dn2, jet2, {"x0^2", "2*x0^2"}));
        return c;
    }();
    return catalog;
}

inline std::string preset_algebra_name(const AlgebraPtr& w) {
    for (const auto& p : preset_family())
        if (same_algebra(p.w, w)) return p.name;
    return "custom(dim " + std::to_string(w->dim()) + ")";
}

// ---------------------------------------------------------------------------
// Individual law checks.  Each is deterministic given its seed.

inline LawReport check_composition_law(const AlgebraPtr& w1, const AlgebraPtr& w2,
                                       const SmoothMap& f, unsigned trials,
                                       std::uint64_t seed,
                                       const std::string& context = "") {
    LawReport rep{"composition", "T^{W2} o T^{W1} = T^{W1 (x) W2}"};
    rep.seed = seed;
    rep.note_probe(preset_algebra_name(w1));
    rep.note_probe(preset_algebra_name(w2));
    Rng rng(seed);

    const AlgebraPtr t = tensor(w1, w2);
    const LiftedMap once = lift_map(f, t);
    // The left-hand side lifts the coordinate expression of T^{W1} f, which
    // is produced by plain algebra arithmetic, not by the Taylor sum.
    const LiftedMap again = lift_map(symbolic_lift(f, w1), w2);

    for (unsigned i = 0; i < trials; ++i) {
        const WeilPoint<Rat> p = rng.point_of(t, f.arity());
        const WeilPoint<Rat> lhs = again(flatten_tensor_point(p));
        const WeilPoint<Rat> rhs = flatten_tensor_point(once(p));
        ++rep.trials;
        if (lhs != rhs)
            rep.record_failure(context + "point=" + p.str() + " lhs=" + lhs.str() +
                               " rhs=" + rhs.str());
    }
    return rep;
}

inline LawReport check_alpha_functoriality(const WeilMorphism& phi,
                                           const WeilMorphism& psi, std::size_t n,
                                           unsigned trials, std::uint64_t seed,
                                           const std::string& context = "") {
    LawReport rep{"alpha-functoriality",
                  "alpha_psi o alpha_phi = alpha_{psi o phi}; alpha_id = id"};
    rep.seed = seed;
    rep.note_probe(preset_algebra_name(phi.source()));
    rep.note_probe(preset_algebra_name(phi.target()));
    rep.note_probe(preset_algebra_name(psi.target()));
    Rng rng(seed);

    const WeilMorphism composite = WeilMorphism::compose(psi, phi);
    const WeilMorphism ident = WeilMorphism::identity(phi.source());
    for (unsigned i = 0; i < trials; ++i) {
        const WeilPoint<Rat> p = rng.point_of(phi.source(), n);
        ++rep.trials;
        const WeilPoint<Rat> lhs = alpha_on_chart(psi, alpha_on_chart(phi, p));
        const WeilPoint<Rat> rhs = alpha_on_chart(composite, p);
        if (lhs != rhs)
            rep.record_failure(context + "point=" + p.str() + " lhs=" + lhs.str() +
                               " rhs=" + rhs.str());
        if (alpha_on_chart(ident, p) != p)
            rep.record_failure(context + "alpha_id moved point=" + p.str());
    }
    return rep;
}

inline LawReport check_monoidal_coherence(const WeilMorphism& phi, const AlgebraPtr& w,
                                          const SmoothMap& f, unsigned trials,
                                          std::uint64_t seed,
                                          const std::string& context = "") {
    LawReport rep{"coherence",
                  "T^W(alpha_phi) = alpha_{phi (x) id_W}; "
                  "alpha_phi at T^W = alpha_{id_W (x) phi}"};
    rep.seed = seed;
    rep.note_probe(preset_algebra_name(phi.source()));
    rep.note_probe(preset_algebra_name(phi.target()));
    rep.note_probe(preset_algebra_name(w));
    Rng rng(seed);

    const AlgebraPtr w1 = phi.source();
    const AlgebraPtr w2 = phi.target();
    const WeilMorphism id_w = WeilMorphism::identity(w);

    // First diagram: probes of shape W1 (x) W.
    const AlgebraPtr s1 = tensor(w1, w);
    const AlgebraPtr s2 = tensor(w2, w);
    const WeilMorphism phi_id = tensor_morphism(phi, id_w, s1, s2);
    // Second diagram: probes of shape W (x) W1.
    const AlgebraPtr p1 = tensor(w, w1);
    const AlgebraPtr p2 = tensor(w, w2);
    const WeilMorphism id_phi = tensor_morphism(id_w, phi, p1, p2);

    auto check_first = [&](const WeilPoint<Rat>& x) {
        const std::size_t n = x.arity();
        const LiftedMap lifted_alpha = lift_map(alpha_as_map(phi, n), w);
        const WeilPoint<Rat> lhs = alpha_on_chart(phi_id, x);
        const WeilPoint<Rat> rhs =
            unflatten_tensor_point(lifted_alpha(flatten_tensor_point(x)), s2, n);
        if (lhs != rhs)
            rep.record_failure(context + "diagram1 point=" + x.str() + " lhs=" +
                               lhs.str() + " rhs=" + rhs.str());
    };
    auto check_second = [&](const WeilPoint<Rat>& y) {
        const std::size_t n = y.arity();
        const WeilPoint<Rat> lhs = alpha_on_chart(id_phi, y);
        const WeilPoint<Rat> rhs =
            unflatten_tensor_point(alpha_on_chart(phi, flatten_tensor_point(y)), p2, n);
        if (lhs != rhs)
            rep.record_failure(context + "diagram2 point=" + y.str() + " lhs=" +
                               lhs.str() + " rhs=" + rhs.str());
    };

    const LiftedMap f_on_s1 = lift_map(f, s1);
    const LiftedMap f_on_p1 = lift_map(f, p1);
    for (unsigned i = 0; i < trials; ++i) {
        const WeilPoint<Rat> x = rng.point_of(s1, f.arity());
        const WeilPoint<Rat> y = rng.point_of(p1, f.arity());
        ++rep.trials;
        check_first(x);
        check_first(f_on_s1(x));
        check_second(y);
        check_second(f_on_p1(y));
    }
    return rep;
}

inline LawReport check_alpha_on_R(const WeilMorphism& phi, unsigned trials,
                                  std::uint64_t seed,
                                  const std::string& context = "") {
    LawReport rep{"alpha-on-R", "alpha_phi(R) = phi"};
    rep.seed = seed;
    rep.note_probe(preset_algebra_name(phi.source()));
    rep.note_probe(preset_algebra_name(phi.target()));
    Rng rng(seed);
    for (unsigned i = 0; i < trials; ++i) {
        const Element<Rat> x = rng.element_of(phi.source());
        ++rep.trials;
        const WeilPoint<Rat> p(phi.source(), {x});
        const Element<Rat> via_chart = alpha_on_chart(phi, p).component(0);
        const Element<Rat> via_matrix = phi.apply(x);
        const Element<Rat> via_products = phi.apply_multiplicative(x);
        if (via_chart != via_matrix || via_matrix != via_products)
            rep.record_failure(context + "x=" + x.str() + " chart=" + via_chart.str() +
                               " matrix=" + via_matrix.str() + " products=" +
                               via_products.str());
    }
    return rep;
}

inline LawReport check_naturality(const WeilMorphism& phi, const SmoothMap& f,
                                  unsigned trials, std::uint64_t seed,
                                  const std::string& context = "") {
    LawReport rep{"naturality", "alpha_phi o T^{W1} f = T^{W2} f o alpha_phi"};
    rep.seed = seed;
    rep.note_probe(preset_algebra_name(phi.source()));
    rep.note_probe(preset_algebra_name(phi.target()));
    Rng rng(seed);
    const LiftedMap f1 = lift_map(f, phi.source());
    const LiftedMap f2 = lift_map(f, phi.target());
    for (unsigned i = 0; i < trials; ++i) {
        const WeilPoint<Rat> p = rng.point_of(phi.source(), f.arity());
        ++rep.trials;
        const WeilPoint<Rat> lhs = alpha_on_chart(phi, f1(p));
        const WeilPoint<Rat> rhs = f2(alpha_on_chart(phi, p));
        if (lhs != rhs)
            rep.record_failure(context + "point=" + p.str() + " lhs=" + lhs.str() +
                               " rhs=" + rhs.str());
    }
    return rep;
}

inline LawReport check_functoriality(const AlgebraPtr& w, const SmoothMap& f,
                                     const SmoothMap& g, unsigned trials,
                                     std::uint64_t seed,
                                     const std::string& context = "") {
    LawReport rep{"functoriality", "T^W(g o f) = T^W g o T^W f; T^W id = id"};
    rep.seed = seed;
    rep.note_probe(preset_algebra_name(w));
    Rng rng(seed);
    const LiftedMap lf = lift_map(f, w);
    const LiftedMap lg = lift_map(g, w);
    const LiftedMap lgf = lift_map(SmoothMap::compose(g, f), w);
    std::vector<Expr> id_comps;
    for (std::size_t i = 0; i < f.arity(); ++i) id_comps.push_back(Expr::var(i));
    const LiftedMap lid = lift_map(SmoothMap(f.arity(), std::move(id_comps)), w);
    for (unsigned i = 0; i < trials; ++i) {
        const WeilPoint<Rat> p = rng.point_of(w, f.arity());
        ++rep.trials;
        if (lgf(p) != lg(lf(p)))
            rep.record_failure(context + "point=" + p.str() + " lhs=" + lgf(p).str() +
                               " rhs=" + lg(lf(p)).str());
        if (lid(p) != p)
            rep.record_failure(context + "T^W id moved point=" + p.str());
    }
    return rep;
}

inline LawReport check_product_preservation(const AlgebraPtr& w, const SmoothMap& f,
                                            const SmoothMap& g, unsigned trials,
                                            std::uint64_t seed,
                                            const std::string& context = "") {
    LawReport rep{"product-preservation", "T^W(f, g) = (T^W f, T^W g)"};
    rep.seed = seed;
    rep.note_probe(preset_algebra_name(w));
    Rng rng(seed);
    const SmoothMap paired = SmoothMap::pair(f, g);
    const LiftedMap lp = lift_map(paired, w);
    const LiftedMap lf = lift_map(f, w);
    const LiftedMap lg = lift_map(g, w);
    for (unsigned i = 0; i < trials; ++i) {
        const WeilPoint<Rat> p = rng.point_of(w, f.arity());
        ++rep.trials;
        const WeilPoint<Rat> both = lp(p);
        const WeilPoint<Rat> left = lf(p);
        const WeilPoint<Rat> right = lg(p);
        bool ok = both.arity() == left.arity() + right.arity();
        for (std::size_t j = 0; ok && j < left.arity(); ++j)
            ok = both.component(j) == left.component(j);
        for (std::size_t j = 0; ok && j < right.arity(); ++j)
            ok = both.component(left.arity() + j) == right.component(j);
        if (!ok)
            rep.record_failure(context + "point=" + p.str() + " paired=" + both.str() +
                               " parts=" + left.str() + "," + right.str());
    }
    return rep;
}

inline LawReport check_identity_functor(const AlgebraPtr& w, const SmoothMap& f,
                                        unsigned trials, std::uint64_t seed,
                                        const std::string& context = "") {
    LawReport rep{"identity-functor", "T^R = Id and T^W(R) = W"};
    rep.seed = seed;
    rep.note_probe("R");
    rep.note_probe(preset_algebra_name(w));
    Rng rng(seed);
    const AlgebraPtr R = preset_named("R").w;
    const LiftedMap fR = lift_map(f, R);
    std::vector<Expr> id_comp{Expr::var(0)};
    const LiftedMap idW = lift_map(SmoothMap(1, std::move(id_comp)), w);

    // Carrier of T^W(R): one chart coordinate per basis element of W.
    if (point_to_coords(rng.point_of(w, 1)).size() != w->dim())
        rep.record_failure(context + "carrier of T^W(R) has the wrong dimension");

    for (unsigned i = 0; i < trials; ++i) {
        ++rep.trials;
        const WeilPoint<Rat> a = rng.point_of(R, f.arity());
        const WeilPoint<Rat> fa = fR(a);
        for (std::size_t j = 0; j < f.coarity(); ++j) {
            const Rat direct = eval(f.components()[j], a.base());
            if (fa.component(j).augmentation() != direct ||
                !fa.component(j).nilpotent_part().is_zero())
                rep.record_failure(context + "T^R disagrees with evaluation at " +
                                   a.str());
        }
        const WeilPoint<Rat> p = rng.point_of(w, 1);
        if (idW(p) != p)
            rep.record_failure(context + "T^W(id_R) moved point=" + p.str());
    }
    return rep;
}

inline LawReport check_tensor_dimension(const AlgebraPtr& w1, const AlgebraPtr& w2,
                                        const std::string& context = "") {
    LawReport rep{"tensor-dimension",
                  "dim(W1 (x) W2) = dim(W1)*dim(W2); the basis pairing is a bijection"};
    rep.note_probe(preset_algebra_name(w1));
    rep.note_probe(preset_algebra_name(w2));
    const AlgebraPtr t = tensor(w1, w2);
    ++rep.trials;
    if (t->dim() != w1->dim() * w2->dim())
        rep.record_failure(context + "dim " + std::to_string(t->dim()) + " != " +
                           std::to_string(w1->dim() * w2->dim()));
    if (t->nilpotency_index() > w1->nilpotency_index() + w2->nilpotency_index() - 1)
        rep.record_failure(context + "nilpotency index exceeds the factor bound");
    std::vector<bool> seen(t->dim(), false);
    for (std::size_t a = 0; a < w1->dim(); ++a)
        for (std::size_t b = 0; b < w2->dim(); ++b) {
            const std::size_t tix = t->tensor_pair(a, b);
            if (tix >= t->dim() || seen[tix]) {
                rep.record_failure(context + "tensor pairing is not a bijection");
                continue;
            }
            seen[tix] = true;
            if (t->tensor_split(tix) != std::make_pair(a, b))
                rep.record_failure(context + "tensor split does not invert pairing");
        }
    return rep;
}

// Sentinel law: the documented construction guards must actually fire.
inline LawReport check_construction_guards(const std::string& context = "") {
    LawReport rep{"construction-guards",
                  "invalid presentations and morphisms are rejected with the "
                  "documented error codes"};
    auto expect = [&](errc want, const std::string& what, auto&& fn) {
        ++rep.trials;
        try {
            fn();
            rep.record_failure(context + what + ": construction was accepted");
        } catch (const Error& e) {
            if (e.code() != want)
                rep.record_failure(context + what + ": raised '" + e.what() +
                                   "' instead of the expected code");
        }
    };
    expect(errc::not_local, "idempotent generator x0^2 - x0",
           [] { WeilAlgebra::create(1, {"x0^2 - x0"}); });
    expect(errc::not_local, "unipotent generator x0^2 - 1",
           [] { WeilAlgebra::create(1, {"x0^2 - 1"}); });
    expect(errc::empty_relations_with_generators, "generators without relations",
           [] { WeilAlgebra::create(2, {}); });
    expect(errc::not_finite_dimensional, "missing pure power bound",
           [] { WeilAlgebra::create(2, {"x0^2"}); });
    expect(errc::not_local_morphism, "morphism image with unit part", [] {
        WeilMorphism::from_strings(preset_named("dual").w, preset_named("jet2").w,
                                   {"1 + x0"});
    });
    expect(errc::relation_not_killed, "dual generator sent to a non-nilsquare", [] {
        WeilMorphism::from_strings(preset_named("dual").w, preset_named("jet2").w,
                                   {"x0"});
    });
    return rep;
}

// ---------------------------------------------------------------------------
// Probed functors: the restriction of W' |-> T^{W'} M to a finite probe set.

class ProbedFunctor {
public:
    struct Value {
        std::string probe_name;
        AlgebraPtr probe;
        std::size_t carrier_arity;           // chart coordinates, packed slotwise
        std::optional<OpenBox> base_box;     // constrains the base slots i*dim(probe)
    };

    ProbedFunctor(std::size_t chart_arity, std::optional<OpenBox> box,
                  std::vector<PresetAlgebra> probes)
        : n_(chart_arity), box_(std::move(box)), probes_(std::move(probes)) {}

    std::size_t chart_arity() const { return n_; }
    const std::optional<OpenBox>& box() const { return box_; }
    const std::vector<PresetAlgebra>& probes() const { return probes_; }

    Value value(const AlgebraPtr& probe) const {
        for (const auto& p : probes_)
            if (same_algebra(p.w, probe))
                return Value{p.name, p.w, n_ * p.w->dim(), box_};
        fail(errc::probe_set_not_closed,
             "probe " + preset_algebra_name(probe) + " is not in the probe set");
    }

    // The induced linear map T^{rho} on packed carrier coordinates.
    Mat arrow(const WeilMorphism& rho) const {
        value(rho.source());
        value(rho.target());
        return block_diag(rho.matrix(), n_);
    }

private:
    std::size_t n_;
    std::optional<OpenBox> box_;
    std::vector<PresetAlgebra> probes_;
};

// Probe-level verification of the two embedding identities: evaluating the
// probed functor of M against W-tensored probes reproduces the probed functor
// of T^W M, and lifting the chart map alpha_phi(M) by any probe reproduces
// alpha_{phi (x) id} under the canonical identifications.
inline LawReport check_embedding_theorems(std::size_t chart_arity,
                                          const std::optional<OpenBox>& box,
                                          const AlgebraPtr& w, const WeilMorphism& phi,
                                          const std::vector<PresetAlgebra>& probes,
                                          std::uint64_t seed,
                                          const std::string& context = "") {
    LawReport rep{"embedding",
                  "i(T^W M) = i(M) o (W (x) -) and i(alpha_phi(M)) = alpha_phi at i(M)"};
    rep.seed = seed;
    rep.note_probe(preset_algebra_name(w));
    for (const auto& p : probes) rep.note_probe(p.name);
    Rng rng(seed);
    const std::size_t n = chart_arity;

    const ProbedFunctor iM(n, box, probes);
    const ProbedFunctor iTWM(n * w->dim(), std::nullopt, probes);

    // The probed functor evaluates to the chart itself on the scalar probe.
    for (const auto& p : probes)
        if (p.w->is_scalar_field()) {
            const auto v = iM.value(p.w);
            if (v.carrier_arity != n || v.base_box != box)
                rep.record_failure(context + "value at the scalar probe is not M");
        }

    // Closure requirement for the second identity.
    bool closed = false, closed_tgt = false;
    for (const auto& p : probes) {
        closed = closed || same_algebra(p.w, phi.source());
        closed_tgt = closed_tgt || same_algebra(p.w, phi.target());
    }
    if (!closed || !closed_tgt)
        fail(errc::probe_set_not_closed,
             "probe set must contain the source and target of the morphism");

    // First identity, carrier part: dimensions agree probe by probe.
    for (const auto& p : probes) {
        ++rep.trials;
        const AlgebraPtr tw = tensor(w, p.w);
        if (n * tw->dim() != iTWM.value(p.w).carrier_arity)
            rep.record_failure(context + "carrier mismatch at probe " + p.name);
    }

    // First identity, arrow part: for every catalog morphism rho between
    // probes, the arrow of i(M) at id_W (x) rho matches the arrow of i(T^W M)
    // at rho after flattening.
    for (const auto& pm : preset_morphisms()) {
        bool src_in = false, tgt_in = false;
        for (const auto& p : probes) {
            src_in = src_in || same_algebra(p.w, pm.phi.source());
            tgt_in = tgt_in || same_algebra(p.w, pm.phi.target());
        }
        if (!src_in || !tgt_in) continue;
        ++rep.trials;
        const AlgebraPtr t1 = tensor(w, pm.phi.source());
        const AlgebraPtr t2 = tensor(w, pm.phi.target());
        const WeilMorphism id_rho =
            tensor_morphism(WeilMorphism::identity(w), pm.phi, t1, t2);
        const Mat lhs = block_diag(id_rho.matrix(), n);
        const Mat rhs = iTWM.arrow(pm.phi);
        const Mat f1 = flatten_matrix(t1, n);
        const Mat f2 = flatten_matrix(t2, n);
        if (rhs * f1 != f2 * lhs)
            rep.record_failure(context + "arrow mismatch at " + pm.name);
    }

    // Box charts: membership of random points agrees under flattening.
    if (box) {
        const AlgebraPtr tw = tensor(w, preset_named("dual").w);
        for (unsigned i = 0; i < 8; ++i) {
            ++rep.trials;
            const WeilPoint<Rat> p = rng.point_of(tw, n);
            const bool direct = box->contains(p.base());
            const WeilPoint<Rat> flat = flatten_tensor_point(p);
            std::vector<Rat> flat_base;
            for (std::size_t j = 0; j < n; ++j)
                flat_base.push_back(flat.component(j * w->dim()).augmentation());
            if (direct != box->contains(flat_base))
                rep.record_failure(context + "box membership differs after flattening");
        }
    }

    // Second identity: T^{W'}(alpha_phi(M)) equals alpha_{phi (x) id_W'}(M).
    const std::size_t d1 = phi.source()->dim();
    for (const auto& p : probes) {
        ++rep.trials;
        const AlgebraPtr s1 = tensor(phi.source(), p.w);
        const AlgebraPtr s2 = tensor(phi.target(), p.w);
        const LiftedMap lifted = lift_map(alpha_as_map(phi, n), p.w);
        const std::size_t cols = n * d1 * p.w->dim();
        Mat lhs(n * phi.target()->dim() * p.w->dim(), cols);
        for (std::size_t c = 0; c < cols; ++c) {
            std::vector<Rat> e(cols, Rat(0));
            e[c] = 1;
            const auto img = point_to_coords(lifted(point_from_coords(p.w, n * d1, e)));
            for (std::size_t r = 0; r < img.size(); ++r) lhs.at(r, c) = img[r];
        }
        const WeilMorphism phi_id =
            tensor_morphism(phi, WeilMorphism::identity(p.w), s1, s2);
        const Mat rhs = block_diag(phi_id.matrix(), n);
        const Mat f1 = flatten_matrix(s1, n);
        const Mat f2 = flatten_matrix(s2, n);
        if (lhs * f1 != f2 * rhs)
            rep.record_failure(context + "alpha embedding mismatch at probe " + p.name);
    }

    // Arrows respect composition on probes (functor invariant).
    {
        const ProbedFunctor& pf = iM;
        for (const auto& a : preset_morphisms())
            for (const auto& b : preset_morphisms()) {
                if (!same_algebra(a.phi.target(), b.phi.source())) continue;
                bool all_in = true;
                for (const AlgebraPtr& x :
                     {a.phi.source(), a.phi.target(), b.phi.target()}) {
                    bool in = false;
                    for (const auto& p : probes) in = in || same_algebra(p.w, x);
                    all_in = all_in && in;
                }
                if (!all_in) continue;
                ++rep.trials;
                if (pf.arrow(WeilMorphism::compose(b.phi, a.phi)) !=
                    pf.arrow(b.phi) * pf.arrow(a.phi))
                    rep.record_failure(context + "arrows fail to respect composition (" +
                                       b.name + " o " + a.name + ")");
            }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// The aggregated suite.

// Defaults satisfy the suite contract: aggregated per law, at least 50
// random points and at least 20 random maps over the preset family.
struct SuiteOptions {
    std::uint64_t seed = 424243;
    unsigned trials = 10;  // random points per configuration
    unsigned maps = 4;     // random maps per configuration
};

namespace detail {
inline void merge_report(std::vector<LawReport>& out, const LawReport& r) {
    for (auto& existing : out) {
        if (existing.law != r.law) continue;
        existing.trials += r.trials;
        for (const auto& p : r.probes) existing.note_probe(p);
        if (!r.pass && existing.pass) {
            existing.pass = false;
            existing.counterexample = r.counterexample;
            existing.seed = r.seed;
        }
        return;
    }
    out.push_back(r);
}
} // namespace detail

inline std::vector<LawReport> run_law_suite(const std::string& which,
                                            const SuiteOptions& opt = {}) {
    std::vector<LawReport> out;
    const auto& family = preset_family();
    const auto& catalog = preset_morphisms();
    // `which` is a single law id, the "alpha" umbrella (everything about the
    // natural transformations alpha), or "all".
    auto wants = [&](const std::string& law) {
        if (which == "all" || which == law) return true;
        if (which == "alpha")
            return law == "alpha-functoriality" || law == "alpha-on-R" ||
                   law == "naturality" || law == "coherence";
        return false;
    };
    std::uint64_t counter = 0;
    auto next_seed = [&] { return splitmix64(opt.seed ^ ++counter); };

    if (wants("composition")) {
        for (const auto& a : family)
            for (const auto& b : family) {
                for (unsigned m = 0; m < opt.maps; ++m) {
                    const std::uint64_t s = next_seed();
                    Rng gen(splitmix64(s));
                    const std::size_t arity = 1 + gen.int_in(0, 1);
                    const std::size_t coarity = 1 + gen.int_in(0, 1);
                    const SmoothMap f = gen.poly_map(arity, coarity);
                    detail::merge_report(
                        out, check_composition_law(a.w, b.w, f, opt.trials, s,
                                                   "W1=" + a.name + " W2=" + b.name +
                                                       " "));
                }
            }
    }
    if (wants("alpha-functoriality")) {
        for (const auto& a : catalog)
            for (const auto& b : catalog) {
                if (!same_algebra(a.phi.target(), b.phi.source())) continue;
                const std::uint64_t s = next_seed();
                detail::merge_report(
                    out, check_alpha_functoriality(a.phi, b.phi, 2, opt.trials, s,
                                                   "phi=" + a.name + " psi=" + b.name +
                                                       " "));
            }
        // A zero-arity chart is a single point; the law is vacuous there.
        detail::merge_report(
            out, check_alpha_functoriality(catalog[1].phi, catalog[1].phi, 0, 1,
                                           next_seed(), "n=0 "));
    }
    if (wants("coherence")) {
        for (const auto& a : catalog)
            for (const auto& p : family) {
                const std::uint64_t s = next_seed();
                Rng gen(splitmix64(s));
                const SmoothMap f = gen.poly_map(1 + gen.int_in(0, 1), 1);
                detail::merge_report(
                    out, check_monoidal_coherence(a.phi, p.w, f, opt.trials, s,
                                                  "phi=" + a.name + " W=" + p.name +
                                                      " "));
            }
    }
    if (wants("alpha-on-R")) {
        for (const auto& a : catalog) {
            const std::uint64_t s = next_seed();
            detail::merge_report(out,
                                 check_alpha_on_R(a.phi, opt.trials, s,
                                                  "phi=" + a.name + " "));
        }
    }
    if (wants("naturality")) {
        for (const auto& a : catalog)
            for (unsigned m = 0; m < opt.maps; ++m) {
                const std::uint64_t s = next_seed();
                Rng gen(splitmix64(s));
                const SmoothMap f = gen.poly_map(1 + gen.int_in(0, 1), 1 + gen.int_in(0, 1));
                detail::merge_report(out,
                                     check_naturality(a.phi, f, opt.trials, s,
                                                      "phi=" + a.name + " "));
            }
    }
    if (wants("functoriality")) {
        for (const auto& p : family)
            for (unsigned m = 0; m < opt.maps; ++m) {
                const std::uint64_t s = next_seed();
                Rng gen(splitmix64(s));
                const std::size_t n = 1 + gen.int_in(0, 1);
                const std::size_t mid = 1 + gen.int_in(0, 1);
                const std::size_t l = 1 + gen.int_in(0, 1);
                const SmoothMap f = gen.poly_map(n, mid);
                const SmoothMap g = gen.poly_map(mid, l);
                detail::merge_report(out, check_functoriality(p.w, f, g, opt.trials, s,
                                                              "W=" + p.name + " "));
            }
    }
    if (wants("product-preservation")) {
        for (const auto& p : family)
            for (unsigned m = 0; m < opt.maps; ++m) {
                const std::uint64_t s = next_seed();
                Rng gen(splitmix64(s));
                const std::size_t n = 1 + gen.int_in(0, 1);
                const SmoothMap f = gen.poly_map(n, 1 + gen.int_in(0, 1));
                const SmoothMap g = gen.poly_map(n, 1 + gen.int_in(0, 1));
                detail::merge_report(
                    out, check_product_preservation(p.w, f, g, opt.trials, s,
                                                    "W=" + p.name + " "));
            }
    }
    if (wants("identity-functor")) {
        for (const auto& p : family)
            for (unsigned m = 0; m < opt.maps; ++m) {
                const std::uint64_t s = next_seed();
                Rng gen(splitmix64(s));
                const SmoothMap f = gen.poly_map(1 + gen.int_in(0, 1), 1 + gen.int_in(0, 1));
                detail::merge_report(out, check_identity_functor(p.w, f, opt.trials, s,
                                                                 "W=" + p.name + " "));
            }
    }
    if (wants("tensor-dimension")) {
        for (const auto& a : family)
            for (const auto& b : family)
                detail::merge_report(out, check_tensor_dimension(a.w, b.w,
                                                                 "W1=" + a.name +
                                                                     " W2=" + b.name +
                                                                     " "));
    }
    if (wants("embedding")) {
        const std::vector<std::string> sample = {
            "id-dual",        "trunc-jet2-dual", "aug-dual",
            "diag-jet2-TT",   "corner-dual-TT",  "unit-jet3",
            "quot-TT-Dn2",    "swap-TT"};
        for (const auto& p : family) {
            for (const auto& name : sample) {
                const WeilMorphism* phi = nullptr;
                for (const auto& c : catalog)
                    if (c.name == name) phi = &c.phi;
                if (!phi) continue;
                const std::uint64_t s = next_seed();
                detail::merge_report(
                    out, check_embedding_theorems(1, std::nullopt, p.w, *phi, family, s,
                                                  "W=" + p.name + " phi=" + name + " "));
            }
            // One higher-arity chart and one box chart per W.
            detail::merge_report(
                out, check_embedding_theorems(2, std::nullopt, p.w,
                                              catalog.front().phi, family, next_seed(),
                                              "W=" + p.name + " n=2 "));
            detail::merge_report(
                out, check_embedding_theorems(
                         1, OpenBox{{{Rat(0), Rat(1)}}}, p.w, catalog.front().phi,
                         family, next_seed(), "W=" + p.name + " box "));
        }
    }
    if (wants("construction-guards"))
        detail::merge_report(out, check_construction_guards());
    return out;
}

} // namespace weil

#endif
