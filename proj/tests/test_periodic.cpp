#include "reference.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace ptime;

namespace {

StaticGraph graph(long alpha, long beta) { return StaticGraph::from_matrices(ref::running_example(alpha, beta)); }

ShiftedMatrices permute(const ShiftedMatrices& m, const std::vector<std::size_t>& sigma) {
    ShiftedMatrices out{TropicalMatrix(m.n(), m.n()), TropicalMatrix(m.n(), m.n()), TropicalMatrix(m.n(), m.n())};
    for (int s = -1; s <= 1; ++s) {
        for (std::size_t i = 0; i < m.n(); ++i) {
            for (std::size_t j = 0; j < m.n(); ++j) {
                out.by_shift(s)(sigma[i], sigma[j]) = m.by_shift(s)(i, j);
            }
        }
    }
    return out;
}

ShiftedMatrices scale(const ShiftedMatrices& m, const Rational& c) {
    ShiftedMatrices out = m;
    for (int s = -1; s <= 1; ++s) {
        for (std::size_t i = 0; i < m.n(); ++i) {
            for (std::size_t j = 0; j < m.n(); ++j) {
                const auto& x = m.by_shift(s)(i, j);
                if (x.is_finite()) {
                    out.by_shift(s)(i, j) = ExtendedRational(Rational(x.value() * c));
                }
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("slice specs and node indexing") {
    auto sym = SliceSpec::symmetric(2, 2);
    CHECK(sym.layer_count() == 5);
    CHECK(sym.node_count() == 10);
    NodeIndexMap map(sym);
    CHECK(map.flat(1, -2) == 1);
    CHECK(map.flat(2, -2) == 2);
    CHECK(map.flat(1, 0) == 5);
    CHECK(map.flat(2, 2) == 10);
    CHECK(map.label(4) == "(2,-1)");
    for (std::size_t v = 1; v <= 10; ++v) {
        auto [i, k] = map.node(v);
        CHECK(map.flat(i, k) == v);
    }
    CHECK_THROWS_AS(map.flat(1, 3), std::out_of_range);
    CHECK_THROWS_AS(map.node(11), std::out_of_range);
    NodeIndexMap nat(SliceSpec::natural(3, 4));
    CHECK(nat.flat(1, 1) == 1);
    CHECK(nat.flat(3, 4) == 12);
    CHECK_THROWS_AS(SliceSpec::natural(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(SliceSpec::symmetric(2, -1), std::invalid_argument);
}

TEST_CASE("radius-2 slice of the running example") {
    for (auto [alpha, beta] : {std::pair{-1L, 1L}, std::pair{-5L, 4L}, std::pair{-1L, 2L}}) {
        CHECK(build_slice(graph(alpha, beta), SliceSpec::symmetric(2, 2)) == ref::golden_slice(alpha, beta));
    }
}

TEST_CASE("natural slices are block tridiagonal") {
    auto g = ref::rng(41);
    for (int t = 0; t < 20; ++t) {
        std::size_t n = 1 + uniform_index(g, 3);
        auto m = random_matrices(g(), n, 0.5, -4, 4);
        auto a = build_slice(StaticGraph::from_matrices(m), SliceSpec::natural(n, 4));
        for (std::size_t b = 0; b < 4; ++b) {
            for (std::size_t c = 0; c < 4; ++c) {
                long d = static_cast<long>(b) - static_cast<long>(c);
                auto block = a.block(b * n, c * n, n, n);
                if (d >= -1 && d <= 1) {
                    CHECK(block == m.by_shift(static_cast<int>(d)));
                } else {
                    CHECK(block == TropicalMatrix(n, n));
                }
            }
        }
    }
}

TEST_CASE("radius-2 slice stars match the reference matrices") {
    auto star_of = [](long alpha, long beta) {
        return kleene_star(build_slice(graph(alpha, beta), SliceSpec::symmetric(2, 2)));
    };
    auto s54 = star_of(-5, 4);
    CHECK_FALSE(s54.has_positive_circuit());
    CHECK(s54.star == ref::golden_star_m5_4());
    auto s11 = star_of(-1, 1);
    CHECK_FALSE(s11.has_positive_circuit());
    CHECK(s11.star == ref::golden_star_m1_1());
    auto s12 = star_of(-1, 2);
    CHECK(s12.has_positive_circuit());
    CHECK(s12.star.contains_pos_inf());
}

TEST_CASE("pseudo-circuit tables of the running example") {
    auto table = [](long alpha, long beta) {
        auto a = analyze_infinite_weight(ref::running_example(alpha, beta));
        REQUIRE(a.table);
        return *a.table;
    };
    auto t11 = table(-1, 1);
    CHECK(t11.at(1, 1) == ExtendedRational(1));
    CHECK(t11.at(1, 2) == ExtendedRational(2));
    CHECK(t11.at(1, -1) == ExtendedRational(-1));
    CHECK(t11.at(1, -2) == ExtendedRational(-2));
    CHECK(t11.at(2, 1) == ExtendedRational(2));
    CHECK(t11.at(2, 2) == ExtendedRational(4));
    CHECK(t11.at(2, -1) == ExtendedRational(-3));
    CHECK(t11.at(2, -2) == ExtendedRational(-6));
    auto t54 = table(-5, 4);
    CHECK(t54.at(1, 1) == ExtendedRational(4));
    CHECK(t54.at(1, 2) == ExtendedRational(8));
    CHECK(t54.at(1, -1) == ExtendedRational(-5));
    CHECK(t54.at(1, -2) == ExtendedRational(-10));
    CHECK(t54.at(2, 1) == ExtendedRational(2));
    CHECK(t54.at(2, 2) == ExtendedRational(4));
    CHECK(t54.at(2, -1) == ExtendedRational(-3));
    CHECK(t54.at(2, -2) == ExtendedRational(-6));
    CHECK_THROWS_AS(t54.at(1, 0), std::out_of_range);
    CHECK_THROWS_AS(t54.at(3, 1), std::out_of_range);
    CHECK_FALSE(analyze_infinite_weight(ref::running_example(-1, 2)).table);
}

TEST_CASE("verdicts of the running example") {
    auto v12 = detect_infinite_weight(ref::running_example(-1, 2));
    REQUIRE(std::holds_alternative<PositiveCircuit>(v12));
    const auto& pc = std::get<PositiveCircuit>(v12);
    CHECK(path_shift(pc.circuit) == 0);
    CHECK(pc.weight == path_weight(pc.circuit));
    CHECK(sgn(pc.weight) > 0);
    CHECK(pc.circuit.source() == pc.circuit.target());

    auto v54 = detect_infinite_weight(ref::running_example(-5, 4));
    REQUIRE(std::holds_alternative<PumpablePair>(v54));
    const auto& pp = std::get<PumpablePair>(v54);
    CHECK(pp.i1 == 1);
    CHECK(pp.s1 == 1);
    CHECK(pp.w1 == 4);
    CHECK(pp.i2 == 2);
    CHECK(pp.s2 == -1);
    CHECK(pp.w2 == -3);
    CHECK(pp.value() == 1);

    CHECK(std::holds_alternative<NoInfinitePath>(detect_infinite_weight(ref::running_example(-1, 1))));
    CHECK(verdict_class(v12) == "positive_circuit");
    CHECK(verdict_class(v54) == "pumpable_pair");
    CHECK(verdict_class(NoInfinitePath{}) == "consistent");
}

TEST_CASE("exhaustive scan starts with the reported pair") {
    auto a = analyze_infinite_weight(ref::running_example(-5, 4), true);
    REQUIRE(a.all_pairs.size() > 1);
    const auto& first = std::get<PumpablePair>(a.verdict);
    CHECK(a.all_pairs.front().i1 == first.i1);
    CHECK(a.all_pairs.front().s2 == first.s2);
    for (const auto& p : a.all_pairs) {
        CHECK(sgn(p.value()) > 0);
        CHECK(a.reach(p.i2, p.i1));
    }
    CHECK(analyze_infinite_weight(ref::running_example(-5, 4)).all_pairs.size() == 1);
}

TEST_CASE("empty and arcless graphs have no infinite-weight path") {
    ShiftedMatrices empty{TropicalMatrix(0, 0), TropicalMatrix(0, 0), TropicalMatrix(0, 0)};
    CHECK(std::holds_alternative<NoInfinitePath>(detect_infinite_weight(empty)));
    ShiftedMatrices arcless{TropicalMatrix(3, 3), TropicalMatrix(3, 3), TropicalMatrix(3, 3)};
    CHECK(std::holds_alternative<NoInfinitePath>(detect_infinite_weight(arcless)));
}

TEST_CASE("pumping the pair certificate") {
    auto g = graph(-5, 4);
    auto pair = std::get<PumpablePair>(detect_infinite_weight(ref::running_example(-5, 4)));
    auto cert = pump_certificate(g, pair, 3);
    CHECK(path_weight(cert.q1) == 4);
    CHECK(path_shift(cert.q1) == 1);
    CHECK(path_weight(cert.q2) == -3);
    CHECK(path_shift(cert.q2) == -1);
    REQUIRE(cert.steps.size() == 3);
    const Rational connector = path_weight(cert.connector);
    for (std::size_t h = 1; h <= 3; ++h) {
        const auto& step = cert.steps[h - 1];
        CHECK(step.weight == Rational(static_cast<long>(h)) + connector);
        CHECK(step.lshift + cert.base_shift >= 1);
    }
    PumpablePair wrong = pair;
    wrong.w1 = 5;
    CHECK_THROWS_AS(pump_certificate(g, wrong, 1), std::invalid_argument);
    PumpablePair flat = pair;
    flat.w2 = -4;
    CHECK_THROWS_AS(pump_certificate(g, flat, 1), std::invalid_argument);
}

TEST_CASE("pumped weights grow on random pair certificates") {
    auto g = ref::rng(77);
    int seen = 0;
    for (int t = 0; t < 2000 && seen < 40; ++t) {
        std::size_t n = 2 + uniform_index(g, 2);
        auto net = normalize_marking(random_feedforward_instance(g(), n, 0.9, 10, 1));
        auto m = characteristic_to_m(to_characteristic(net));
        auto v = detect_infinite_weight(m);
        if (!std::holds_alternative<PumpablePair>(v)) {
            continue;
        }
        ++seen;
        const auto& pair = std::get<PumpablePair>(v);
        auto cert = pump_certificate(StaticGraph::from_matrices(m), pair, 3);
        for (std::size_t h = 1; h < cert.steps.size(); ++h) {
            CHECK(cert.steps[h].weight - cert.steps[h - 1].weight == pair.value());
        }
    }
    CHECK(seen >= 10);
}

TEST_CASE("table dominates the elementary circuit catalog") {
    auto g = ref::rng(55);
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 1 + uniform_index(g, 3);
        auto m = random_matrices(g(), n, 0.5, -6, 2);
        auto a = analyze_infinite_weight(m);
        if (!a.table) {
            continue;
        }
        auto catalog = enumerate_pseudo_circuits(a.graph, n);
        for (const auto& [key, entries] : catalog.groups) {
            if (key.second == 0) {
                continue;
            }
            ++checked;
            CHECK(ExtendedRational(*catalog.max_weight(key.first, key.second)) <= a.table->at(key.first, key.second));
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("catalog of the running example") {
    auto catalog = enumerate_pseudo_circuits(graph(-5, 4), 2);
    CHECK(catalog.max_weight(1, 1) == Rational(4));
    CHECK(catalog.max_weight(2, -1) == Rational(-3));
    CHECK(catalog.max_weight(1, -1) == Rational(-5));
    CHECK(catalog.max_weight(2, 1) == Rational(2));
    CHECK_FALSE(catalog.max_weight(1, 2));
    CHECK(enumerate_pseudo_circuits(StaticGraph(3, {}), 3).empty());
}

TEST_CASE("verdicts are invariant under relabelling") {
    auto g = ref::rng(63);
    for (int t = 0; t < 100; ++t) {
        std::size_t n = 1 + uniform_index(g, 3);
        auto m = random_matrices(g(), n, 0.5, -6, 3);
        std::vector<std::size_t> sigma(n);
        std::iota(sigma.begin(), sigma.end(), 0);
        for (std::size_t i = n; i > 1; --i) {
            std::swap(sigma[i - 1], sigma[uniform_index(g, i)]);
        }
        auto a = analyze_infinite_weight(m);
        auto b = analyze_infinite_weight(permute(m, sigma));
        CHECK(verdict_class(a.verdict) == verdict_class(b.verdict));
        if (a.table) {
            for (std::size_t i = 1; i <= n; ++i) {
                for (long s = -static_cast<long>(n); s <= static_cast<long>(n); ++s) {
                    if (s != 0) {
                        CHECK(a.table->at(i, s) == b.table->at(sigma[i - 1] + 1, s));
                    }
                }
            }
        }
    }
}

TEST_CASE("verdicts are invariant under positive scaling") {
    auto g = ref::rng(91);
    for (int t = 0; t < 100; ++t) {
        std::size_t n = 1 + uniform_index(g, 3);
        auto m = random_matrices(g(), n, 0.5, -6, 3);
        Rational c = ratio(static_cast<long>(1 + uniform_index(g, 9)), static_cast<long>(1 + uniform_index(g, 4)));
        auto a = detect_infinite_weight(m);
        auto b = detect_infinite_weight(scale(m, c));
        REQUIRE(verdict_class(a) == verdict_class(b));
        if (const auto* pa = std::get_if<PumpablePair>(&a)) {
            const auto& pb = std::get<PumpablePair>(b);
            CHECK(pa->i1 == pb.i1);
            CHECK(pa->s1 == pb.s1);
            CHECK(pa->i2 == pb.i2);
            CHECK(pa->s2 == pb.s2);
            CHECK(pb.value() == pa->value() * c);
        }
    }
}

// For h < k at depth D: M_{h,k} = M_{h,h} (x) M'_{1,k-h}, where M' is the star of
// the depth D - h + 1 slice (the prefix, shifted down by h - 1, lives there).
TEST_CASE("block identity of natural-slice stars") {
    auto g = ref::rng(101);
    int checked = 0;
    for (int t = 0; t < 60; ++t) {
        std::size_t n = 1 + uniform_index(g, 3);
        auto m = random_matrices(g(), n, 0.6, -5, 2);
        auto sg = StaticGraph::from_matrices(m);
        for (std::size_t k = 2; k <= 4; ++k) {
            const long depth = static_cast<long>(k + n + 2);
            auto big = kleene_star(build_slice(sg, SliceSpec::natural(n, depth)));
            if (big.has_positive_circuit()) {
                break;
            }
            for (std::size_t h = 1; h < k; ++h) {
                auto small = kleene_star(build_slice(sg, SliceSpec::natural(n, depth - static_cast<long>(h) + 1)));
                auto lhs = big.star.block((h - 1) * n, (k - 1) * n, n, n);
                auto mhh = big.star.block((h - 1) * n, (h - 1) * n, n, n);
                auto m1 = small.star.block(0, (k - h) * n, n, n);
                CHECK(lhs == ref::naive_product(mhh, m1));
                ++checked;
            }
        }
    }
    CHECK(checked > 50);
}
