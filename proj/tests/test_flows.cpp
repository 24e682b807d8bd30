#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "carleman/majorant.hpp"

using namespace carleman;

namespace {

Series<Rat> field(std::initializer_list<std::tuple<int, int, Rat>> terms, int order) {
    Series<Rat> v(2, 1, order, true);
    for (auto& [a, b, c] : terms) v.set_coeff(MultiIndex({a, b}), 0, c);
    return v;
}

}  // namespace

TEST_CASE("linear field: phi = x e^t, majorant identical") {
    auto v = field({{0, 1, Rat(1)}}, 10);
    auto data = flow_majorant_check(v, constant_weight(10), constant_weight(10), 10);
    for (int n = 1; n + 1 <= 10; ++n)
        CHECK(data.phi.coeff(MultiIndex({n, 1}), 0) == Rat(1) / Rat(factorial(n)));
    CHECK(data.report.holds);
    CHECK(data.report.equality_everywhere);
}

TEST_CASE("v = x^2: phi = x / (1 - t x), exact geometric coefficients") {
    auto v = field({{0, 2, Rat(1)}}, 10);
    auto data = flow_majorant_check(v, constant_weight(10), constant_weight(10), 10);
    for (int n = 0; 2 * n + 1 <= 10; ++n)
        CHECK(data.phi.coeff(MultiIndex({n, n + 1}), 0) == 1);
    // nothing else is nonzero
    for (const auto& [k, c] : data.phi.coeffs()) CHECK(k[1] == k[0] + 1);
    CHECK(data.report.holds);
    CHECK(data.report.equality_everywhere);
}

TEST_CASE("v = -x^2: phi = x / (1 + t x), majorant agrees in absolute value") {
    auto v = field({{0, 2, Rat(-1)}}, 10);
    auto data = flow_majorant_check(v, constant_weight(10), constant_weight(10), 10);
    for (int n = 0; 2 * n + 1 <= 10; ++n) {
        Rat expect = n % 2 ? Rat(-1) : Rat(1);
        CHECK(data.phi.coeff(MultiIndex({n, n + 1}), 0) == expect);
    }
    CHECK(data.report.holds);
    // |phi| meets the comparison series exactly: the equality edge case
    CHECK(data.report.equality_everywhere);
}

TEST_CASE("v = t x^2: phi = x / (1 - t^2 x / 2)") {
    auto v = field({{1, 2, Rat(1)}}, 10);
    auto data = flow_majorant_check(v, constant_weight(10), constant_weight(10), 10);
    for (int n = 0; 3 * n + 1 <= 10; ++n)
        CHECK(data.phi.coeff(MultiIndex({2 * n, n + 1}), 0) == Rat(1) / pow_rat(Rat(2), n));
    CHECK(data.report.holds);
    CHECK(data.report.equality_everywhere);
}

TEST_CASE("v = x - x^2 (sign-mixed logistic field): majorant dominates coefficientwise") {
    auto v = field({{0, 1, Rat(1)}, {0, 2, Rat(-1)}}, 10);
    auto data = flow_majorant_check(v, constant_weight(10), constant_weight(10), 10);
    CHECK(data.report.holds);
    // the comparison series solves g' = g + g^2
    auto vp = field({{0, 1, Rat(1)}, {0, 2, Rat(1)}}, 10);
    auto plus = flow_series(vp, 10);
    CHECK(data.comparison == plus);
    // here the flow's signs factor as (-1)^{b-1}: |phi_{(a,b)}| equals the
    // comparison coefficient, the equality edge case
    CHECK(data.report.equality_everywhere);
    CHECK(data.phi.coeff(MultiIndex({1, 2}), 0) == -plus.coeff(MultiIndex({1, 2}), 0));
}

TEST_CASE("flow with a constant term in the field and gevrey weights") {
    auto v = field({{0, 0, Rat(1, 2)}, {0, 1, Rat(1)}, {1, 2, Rat(-1, 3)}}, 8);
    auto g2 = gevrey_weight_exact(8, 2);
    auto data = flow_majorant_check(v, g2, g2, 8);
    CHECK(data.report.holds);
}

TEST_CASE("time-space product weight shapes the majorant") {
    auto v = field({{2, 1, Rat(6)}}, 8);  // t^2 x
    auto mt = gevrey_weight_exact(8, 2);  // time weight n!
    auto mx = constant_weight(8);
    auto mv = majorant_time_space(v, mt, mx, true);
    CHECK(mv.coeff(MultiIndex({2, 1}), 0) == Rat(6) / mt.m(2));
}

TEST_CASE("flow rejects higher-dimensional fields") {
    Series<Rat> v3(3, 1, 6, true);
    v3.set_coeff(MultiIndex({0, 0, 1}), 0, Rat(1));
    CHECK_THROWS_AS(flow_series(v3, 6), Error);
}
