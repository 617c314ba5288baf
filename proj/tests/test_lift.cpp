#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "weil/fault_injection.hpp"
#include "weil/lift.hpp"

namespace {

using namespace weil;

AlgebraPtr dual_numbers() { return WeilAlgebra::create(1, {"x0^2"}); }
AlgebraPtr jet(unsigned k) {
    return WeilAlgebra::create(1, {"x0^" + std::to_string(k + 1)});
}

Element<Rat> rat_element(const AlgebraPtr& w, std::vector<Rat> coords) {
    return Element<Rat>(w, std::move(coords));
}

TEST(LiftedMaps, CubeOnDualNumbersIsFirstDerivative) {
    const auto d = dual_numbers();
    const LiftedMap f = lift_map(SmoothMap::from_strings({"x0^3"}, 1), d);
    // f(2 + nu) = 8 + 12 nu; the fixture scales the tangent by 3.
    const WeilPoint<Rat> p(d, {rat_element(d, {Rat(2), Rat(3)})});
    const WeilPoint<Rat> q = f(p);
    EXPECT_EQ(q.component(0).coords(), (std::vector<Rat>{Rat(8), Rat(36)}));
}

TEST(LiftedMaps, JetCoordinatesOfACube) {
    // x^3 on R[x]/(x^4) around a=2: value 8, then 12, 12, 6 after the
    // factorial normalization of extract_jet.
    const auto j3 = jet(3);
    const LiftedMap f = lift_map(SmoothMap::from_strings({"x0^3"}, 1), j3);
    const WeilPoint<Rat> p(
        j3, {rat_element(j3, {Rat(2), Rat(1), Rat(0), Rat(0)})});
    const Element<Rat> y = f(p).component(0);
    EXPECT_EQ(y.coords(), (std::vector<Rat>{Rat(8), Rat(12), Rat(6), Rat(1)}));
    EXPECT_EQ(extract_jet(y), (std::vector<Rat>{Rat(8), Rat(12), Rat(12), Rat(6)}));
}

TEST(LiftedMaps, ScalarAlgebraIsTheIdentityFunctor) {
    const auto r = WeilAlgebra::create(0, {});
    const LiftedMap f = lift_map(SmoothMap::from_strings({"x0^2 + x1", "x0*x1"}, 2), r);
    const WeilPoint<Rat> p = WeilPoint<Rat>::from_base(r, {Rat(3), Rat(5)});
    const WeilPoint<Rat> q = f(p);
    EXPECT_EQ(q.base(), (std::vector<Rat>{Rat(14), Rat(15)}));
}

TEST(LiftedMaps, MixedPartialOnTensorOfDuals) {
    // On D (x) D, x^2 lifted from a = 1 with both tangents 1 exposes the
    // second derivative in the mixed coordinate: coefficient 2.
    const auto d = dual_numbers();
    const auto t = tensor(d, d);
    const LiftedMap f = lift_map(SmoothMap::from_strings({"x0^2"}, 1), t);
    // 1 + nu1 + nu2, written in the tensor basis {1, x0, x1, x0 x1}.
    const WeilPoint<Rat> p(t, {rat_element(t, {Rat(1), Rat(1), Rat(1), Rat(0)})});
    const Element<Rat> y = f(p).component(0);
    // (1 + n1 + n2)^2 = 1 + 2 n1 + 2 n2 + 2 n1 n2.
    EXPECT_EQ(y.coords(), (std::vector<Rat>{Rat(1), Rat(2), Rat(2), Rat(2)}));
}

TEST(LiftedMaps, SmoothPrimitivesThroughTensorOfDuals) {
    const auto d = dual_numbers();
    const auto t = tensor(d, d);
    const LiftedMap f = lift_map(SmoothMap::from_strings({"sin(x0)*exp(x1)"}, 2), t);
    const Element<double> x(t, {0.3, 1.0, 0.0, 0.0});
    const Element<double> y(t, {-0.2, 0.0, 1.0, 0.0});
    const Element<double> out = f(WeilPoint<double>(t, {x, y})).component(0);
    // Mixed coordinate carries d^2/dx dy = cos(x) exp(y).
    EXPECT_NEAR(out.coords()[3], std::cos(0.3) * std::exp(-0.2), 1e-12);
    EXPECT_NEAR(out.coords()[0], std::sin(0.3) * std::exp(-0.2), 1e-12);
    EXPECT_NEAR(out.coords()[1], std::cos(0.3) * std::exp(-0.2), 1e-12);
    EXPECT_NEAR(out.coords()[2], std::sin(0.3) * std::exp(-0.2), 1e-12);
}

TEST(LiftedMaps, TaylorAgreesWithDirectEvaluation) {
    // Two independent evaluation paths: the Taylor lift and direct
    // element-arithmetic substitution must coincide on polynomial maps.
    const auto w = WeilAlgebra::create(2, {"x0^3", "x1^2"});
    const SmoothMap f =
        SmoothMap::from_strings({"x0^2*x1 - 3*x1 + 1", "x0^4 + x0*x1"}, 2);
    const LiftedMap lf = lift_map(f, w);
    const WeilPoint<Rat> p(
        w, {rat_element(w, {Rat(2), Rat(1), Rat(-1), Rat(1, 2), Rat(0), Rat(3)}),
            rat_element(w, {Rat(-1), Rat(0), Rat(2), Rat(1), Rat(7), Rat(0)})});
    EXPECT_EQ(lf(p), eval_direct(f, p));
}

TEST(LiftedMaps, DirectEvaluationHandlesPrimitivesByTaylorAtAugmentation) {
    const auto j2 = jet(2);
    const SmoothMap f = SmoothMap::from_strings({"exp(x0)"}, 1);
    const Element<double> x(j2, {0.5, 1.0, 0.25});
    const WeilPoint<double> p(j2, {x});
    EXPECT_TRUE(approx_equal(lift_map(f, j2)(p), eval_direct(f, p), 1e-12));
}

TEST(LiftedMaps, ModeMismatchGuards) {
    const auto d = dual_numbers();
    const LiftedMap f = lift_map(SmoothMap::from_strings({"sin(x0)"}, 1), d);
    const WeilPoint<Rat> p(d, {rat_element(d, {Rat(0), Rat(1)})});
    try {
        f(p);
        FAIL() << "expected mode_mismatch";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::mode_mismatch);
    }
    // Exact mode works as soon as the map is polynomial.
    const LiftedMap g = lift_map(SmoothMap::from_strings({"x0^2"}, 1), d);
    EXPECT_NO_THROW(g(p));
}

TEST(LiftedMaps, DomainBoxesAreEnforcedOnTheBasePoint) {
    const auto d = dual_numbers();
    const OpenBox box{{{Rat(0), Rat(1)}}};
    const LiftedMap f =
        lift_map(SmoothMap::from_strings({"x0^2"}, 1, box), d);
    const WeilPoint<Rat> inside(d, {rat_element(d, {Rat(1, 2), Rat(4)})});
    EXPECT_NO_THROW(f(inside));
    const WeilPoint<Rat> outside(d, {rat_element(d, {Rat(2), Rat(0)})});
    try {
        f(outside);
        FAIL() << "expected domain_error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::domain_error);
    }
}

TEST(TaylorPrimitives, ClosedFormJets) {
    const auto d = dual_numbers();
    const Element<double> nu(d, {0.0, 1.0});
    // exp around 0: 1 + nu.
    const Element<double> e = taylor_primitive(Primitive::exp, 0.0, nu);
    EXPECT_NEAR(e.coords()[0], 1.0, 1e-15);
    EXPECT_NEAR(e.coords()[1], 1.0, 1e-15);

    const auto j3 = jet(3);
    const Element<double> nu3(j3, {0.0, 1.0, 0.0, 0.0});
    // sin around 0 to third order: nu - nu^3/6.
    const Element<double> s = taylor_primitive(Primitive::sin, 0.0, nu3);
    EXPECT_NEAR(s.coords()[0], 0.0, 1e-15);
    EXPECT_NEAR(s.coords()[1], 1.0, 1e-15);
    EXPECT_NEAR(s.coords()[2], 0.0, 1e-15);
    EXPECT_NEAR(s.coords()[3], -1.0 / 6.0, 1e-15);

    // log needs a positive base point; sqrt jets need a nonzero one.
    EXPECT_THROW(taylor_primitive(Primitive::log, 0.0, nu), Error);
    EXPECT_THROW(taylor_primitive(Primitive::sqrt, 0.0, nu), Error);
    // A unit-bearing argument is not a perturbation.
    const Element<double> not_nilpotent(d, {1.0, 1.0});
    EXPECT_THROW(taylor_primitive(Primitive::exp, 0.0, not_nilpotent), Error);
}

TEST(AlphaOnChart, MorphismsActComponentwise) {
    const auto j2 = jet(2);
    const auto d = dual_numbers();
    const WeilMorphism tr = WeilMorphism::from_strings(j2, d, {"x0"});
    const WeilPoint<Rat> p(
        j2, {rat_element(j2, {Rat(4), Rat(5), Rat(6)}),
             rat_element(j2, {Rat(0), Rat(1), Rat(2)})});
    const WeilPoint<Rat> q = alpha_on_chart(tr, p);
    ASSERT_TRUE(same_algebra(q.algebra(), d));
    EXPECT_EQ(q.component(0).coords(), (std::vector<Rat>{Rat(4), Rat(5)}));
    EXPECT_EQ(q.component(1).coords(), (std::vector<Rat>{Rat(0), Rat(1)}));

    const WeilMorphism aug = WeilMorphism::augmentation(j2, WeilAlgebra::create(0, {}));
    const WeilPoint<Rat> r = alpha_on_chart(aug, p);
    EXPECT_EQ(r.base(), p.base());

    // Algebra mismatch between morphism source and point.
    EXPECT_THROW(alpha_on_chart(WeilMorphism::identity(d), p), Error);
}

TEST(SymbolicLifts, SquareOverDualNumbers) {
    const auto d = dual_numbers();
    const SmoothMap lifted = symbolic_lift(SmoothMap::from_strings({"x0^2"}, 1), d);
    ASSERT_EQ(lifted.arity(), 2u);
    ASSERT_EQ(lifted.coarity(), 2u);
    EXPECT_EQ(lifted.components()[0].str(), "x0^2");
    EXPECT_EQ(lifted.components()[1].str(), "2*x0*x1");
    // Non-polynomial and box-restricted maps are rejected.
    EXPECT_THROW(symbolic_lift(SmoothMap::from_strings({"sin(x0)"}, 1), d), Error);
    const OpenBox box{{{Rat(0), Rat(1)}}};
    EXPECT_THROW(symbolic_lift(SmoothMap::from_strings({"x0"}, 1, box), d), Error);
}

TEST(SymbolicLifts, AgreeWithTheTaylorLiftOnPackedCoordinates) {
    const auto w = WeilAlgebra::create(1, {"x0^3"});
    const SmoothMap f = SmoothMap::from_strings({"x0^2*x1", "x1 - x0"}, 2);
    const SmoothMap sym = symbolic_lift(f, w);
    const LiftedMap lf = lift_map(f, w);
    const WeilPoint<Rat> p(
        w, {rat_element(w, {Rat(2), Rat(-1), Rat(3)}),
            rat_element(w, {Rat(1), Rat(1, 2), Rat(0)})});
    const std::vector<Rat> packed = point_to_coords(p);
    std::vector<Rat> symbolic_out;
    for (const Expr& c : sym.components()) symbolic_out.push_back(eval_real(c, packed));
    EXPECT_EQ(symbolic_out, point_to_coords(lf(p)));
}

TEST(TensorPoints, FlattenUnflattenRoundTrip) {
    const auto d = dual_numbers();
    const auto j2 = jet(2);
    const auto t = tensor(d, j2);
    const WeilPoint<Rat> p(
        t, {Element<Rat>(t, {Rat(1), Rat(2), Rat(3), Rat(4), Rat(5), Rat(6)}),
            Element<Rat>(t, {Rat(0), Rat(1), Rat(0), Rat(2), Rat(0), Rat(3)})});
    const WeilPoint<Rat> flat = flatten_tensor_point(p);
    ASSERT_TRUE(same_algebra(flat.algebra(), j2));
    EXPECT_EQ(flat.arity(), p.arity() * d->dim());
    EXPECT_EQ(unflatten_tensor_point(flat, t, p.arity()), p);
}

TEST(TensorPoints, LiftingTwiceMatchesTheTensorLift) {
    // Lift f over W1 (x) W2 directly, or lift over W2 and then lift the
    // flattened map over W1; the two paths agree through flattening.
    const auto d = dual_numbers();
    const auto t = tensor(d, d);
    const SmoothMap f = SmoothMap::from_strings({"x0^3 + x0*x1", "x1^2"}, 2);
    const LiftedMap direct = lift_map(f, t);
    const SmoothMap stage1 = symbolic_lift(f, d);
    const LiftedMap staged = lift_map(stage1, d);
    const WeilPoint<Rat> p(
        t, {Element<Rat>(t, {Rat(1), Rat(2), Rat(0), Rat(1)}),
            Element<Rat>(t, {Rat(-1), Rat(0), Rat(3), Rat(2)})});
    EXPECT_EQ(flatten_tensor_point(direct(p)), staged(flatten_tensor_point(p)));
}

TEST(FaultInjection, DroppedFactorialBreaksSecondOrderCoefficients) {
    const auto j2 = jet(2);
    const LiftedMap f = lift_map(SmoothMap::from_strings({"x0^3"}, 1), j2);
    const WeilPoint<Rat> p(j2, {rat_element(j2, {Rat(2), Rat(1), Rat(0)})});
    EXPECT_EQ(f(p).component(0).coords(),
              (std::vector<Rat>{Rat(8), Rat(12), Rat(6)}));
    ASSERT_TRUE(faults::set_by_name("drop-taylor-factorial", true));
    EXPECT_EQ(f(p).component(0).coords(),
              (std::vector<Rat>{Rat(8), Rat(12), Rat(12)}));
    faults::set_by_name("drop-taylor-factorial", false);
    EXPECT_EQ(f(p).component(0).coords(),
              (std::vector<Rat>{Rat(8), Rat(12), Rat(6)}));
}

TEST(Extraction, GradientAndHessian) {
    const auto d = dual_numbers();
    const auto t = tensor(d, d);
    const LiftedMap f = lift_map(SmoothMap::from_strings({"x0^3*x1"}, 2), t);
    // Seed generator i into component i to expose first derivatives.
    const WeilPoint<Rat> p(
        t, {Element<Rat>(t, {Rat(2), Rat(1), Rat(0), Rat(0)}),
            Element<Rat>(t, {Rat(5), Rat(0), Rat(1), Rat(0)})});
    const Element<Rat> y = f(p).component(0);
    EXPECT_EQ(extract_gradient(y), (std::vector<Rat>{Rat(60), Rat(8)}));
    const auto h = extract_hessian(y);
    // On D (x) D the diagonal monomials die, so only the mixed entry
    // survives: d^2/dx0 dx1 (x0^3 x1) = 3 x0^2 = 12.
    ASSERT_EQ(h.size(), 2u);
    EXPECT_EQ(h[0][1], Rat(12));
    EXPECT_EQ(h[1][0], Rat(12));
    EXPECT_EQ(h[0][0], Rat(0));
    EXPECT_EQ(h[1][1], Rat(0));

    // Full Hessian over jet2 (x) jet2, where squares survive.
    const auto j2 = jet(2);
    const auto tj = tensor(j2, j2);
    const LiftedMap g = lift_map(SmoothMap::from_strings({"x0^3*x1"}, 2), tj);
    std::vector<Rat> c0(tj->dim(), Rat(0)), c1(tj->dim(), Rat(0));
    c0[0] = Rat(2);
    c1[0] = Rat(5);
    // Generators of the tensor algebra sit right after the unit in the basis
    // only for the first; locate both through reduction of x0 and x1.
    const Element<Rat> gen0 = element(tj, Poly::var(0));
    const Element<Rat> gen1 = element(tj, Poly::var(1));
    const WeilPoint<Rat> q(
        tj, {Element<Rat>(tj, c0) + gen0, Element<Rat>(tj, c1) + gen1});
    const auto hess = extract_hessian(g(q).component(0));
    EXPECT_EQ(hess[0][0], Rat(60));  // 6 x0 x1 = 60
    EXPECT_EQ(hess[0][1], Rat(12));  // 3 x0^2 = 12
    EXPECT_EQ(hess[1][0], Rat(12));
    EXPECT_EQ(hess[1][1], Rat(0));
}

TEST(Extraction, JetRequiresOneGenerator) {
    const auto d = dual_numbers();
    const auto t = tensor(d, d);
    const Element<Rat> e = Element<Rat>::unit(t);
    EXPECT_THROW(extract_jet(e), Error);
}

} // namespace
