#include "reference.hpp"

#include <doctest.h>

using namespace ptime;

namespace {

const ExtendedRational inf = ExtendedRational::pos_inf();

std::size_t count_kind(const std::vector<Violation>& vs, Violation::Kind kind) {
    return static_cast<std::size_t>(std::count_if(vs.begin(), vs.end(), [kind](const Violation& v) { return v.kind == kind; }));
}

}  // namespace

TEST_CASE("net construction checks names and bounds") {
    CHECK_THROWS_AS(PTimeEventGraph({"a", "a"}, {}), std::invalid_argument);
    CHECK_THROWS_AS(PTimeEventGraph({"a"}, {Place{"a", "b", 0, 0, inf}}), std::invalid_argument);
    CHECK_THROWS_AS(PTimeEventGraph({"a"}, {Place{"a", "a", 1, -1, inf}}), std::invalid_argument);
    CHECK_THROWS_AS(PTimeEventGraph({"a"}, {Place{"a", "a", 1, 0, ExtendedRational::neg_inf()}}),
                    std::invalid_argument);
    // An empty window on a single place is allowed; it makes the net inconsistent.
    PTimeEventGraph empty_window({"a"}, {Place{"a", "a", 1, 2, ExtendedRational(1)}});
    CHECK(empty_window.index_of("a") == 1);
    CHECK_THROWS_AS(empty_window.index_of("b"), std::invalid_argument);
}

TEST_CASE("marking normalization") {
    SUBCASE("marking 3 becomes a three-place chain") {
        PTimeEventGraph net({"t1", "t2"}, {Place{"t1", "t2", 3, 1, ExtendedRational(5)}});
        auto norm = normalize_marking(net);
        CHECK(norm.transition_count() == 4);
        CHECK(norm.transitions()[0] == "t1");
        CHECK(norm.transitions()[1] == "t2");
        REQUIRE(norm.places().size() == 3);
        CHECK(norm.markings_at_most_one());
        const auto& p = norm.places();
        CHECK(p[0].from == "t1");
        CHECK(p[0].to == norm.transitions()[2]);
        CHECK(p[1].from == norm.transitions()[2]);
        CHECK(p[1].to == norm.transitions()[3]);
        CHECK(p[2].from == norm.transitions()[3]);
        CHECK(p[2].to == "t2");
        for (int k = 0; k < 2; ++k) {
            CHECK(p[k].lower == 0);
            CHECK(p[k].upper == ExtendedRational(0));
        }
        CHECK(p[2].lower == 1);
        CHECK(p[2].upper == ExtendedRational(5));
    }
    SUBCASE("marking 2 on [1,5]") {
        auto norm = normalize_marking(PTimeEventGraph({"a", "b"}, {Place{"a", "b", 2, 1, ExtendedRational(5)}}));
        REQUIRE(norm.places().size() == 2);
        CHECK(norm.places()[0].upper == ExtendedRational(0));
        CHECK(norm.places()[1].lower == 1);
        CHECK(norm.places()[1].upper == ExtendedRational(5));
    }
    SUBCASE("transition count grows by the excess tokens") {
        auto g = ref::rng(4);
        for (int t = 0; t < 50; ++t) {
            auto net = random_instance(g(), 3, 0.6, 10, 3);
            std::size_t excess = 0;
            for (const auto& p : net.places()) {
                excess += p.marking > 1 ? p.marking - 1 : 0;
            }
            CHECK(normalize_marking(net).transition_count() == 3 + excess);
        }
    }
    SUBCASE("fresh names avoid collisions") {
        PTimeEventGraph net({"p1_u1", "b"}, {Place{"p1_u1", "b", 2, 0, inf}});
        auto norm = normalize_marking(net);
        CHECK(norm.transitions()[2] != "p1_u1");
    }
    SUBCASE("normalized nets are unchanged") {
        auto net = ref::example_net(-5, 4);
        CHECK(normalize_marking(net) == net);
    }
}

TEST_CASE("characteristic matrices") {
    SUBCASE("running example net") {
        auto cm = to_characteristic(ref::example_net(-5, 4));
        CHECK(cm.a0 == ref::matrix({". .", "0 ."}));
        CHECK(cm.a1 == ref::matrix({"4 .", ". 2"}));
        CHECK(cm.b0 == TropicalMatrix(2, 2, inf));
        CHECK(cm.b1 == ref::matrix({"5 inf", "inf 3"}));
        auto m = characteristic_to_m(cm);
        auto expected = ref::running_example(-5, 4);
        CHECK(m.minus == expected.minus);
        CHECK(m.zero == expected.zero);
        CHECK(m.plus == expected.plus);
    }
    SUBCASE("empty net") {
        auto cm = to_characteristic(PTimeEventGraph({"a", "b"}, {}));
        CHECK(cm.a0 == TropicalMatrix(2, 2));
        CHECK(cm.b1 == TropicalMatrix(2, 2, inf));
        auto m = characteristic_to_m(cm);
        CHECK(m.minus == TropicalMatrix(2, 2));
        CHECK(m.zero == TropicalMatrix(2, 2));
        CHECK(m.plus == TropicalMatrix::identity(2));
    }
    SUBCASE("parallel places intersect") {
        PTimeEventGraph net({"t1", "t2"}, {Place{"t1", "t2", 0, 1, ExtendedRational(4)},
                                           Place{"t1", "t2", 0, 2, ExtendedRational(5)}});
        auto cm = to_characteristic(net);
        CHECK(cm.a0(1, 0) == ExtendedRational(2));
        CHECK(cm.b0(1, 0) == ExtendedRational(4));
    }
    SUBCASE("disjoint parallel places are reported") {
        PTimeEventGraph net({"t1", "t2"}, {Place{"t1", "t2", 1, 0, ExtendedRational(1)},
                                           Place{"t1", "t1", 0, 0, inf},
                                           Place{"t1", "t2", 1, 3, ExtendedRational(4)}});
        try {
            (void)to_characteristic(net);
            FAIL("expected InfeasiblePlacePair");
        } catch (const InfeasiblePlacePair& e) {
            CHECK(e.first() == 1);
            CHECK(e.second() == 3);
        }
    }
    SUBCASE("markings above one need normalization") {
        CHECK_THROWS_AS(to_characteristic(PTimeEventGraph({"a"}, {Place{"a", "a", 2, 0, inf}})),
                        std::invalid_argument);
    }
    SUBCASE("negative self-loop lower bound on M+1 is lifted to zero") {
        CharacteristicMatrices cm{TropicalMatrix(1, 1), ref::matrix({"-2"}), TropicalMatrix(1, 1, inf),
                                  TropicalMatrix(1, 1, inf)};
        CHECK(characteristic_to_m(cm).plus == ref::matrix({"0"}));
    }
}

TEST_CASE("characteristic matrices round trip through a net") {
    auto g = ref::rng(12);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + uniform_index(g, 3);
        CharacteristicMatrices cm{TropicalMatrix(n, n), TropicalMatrix(n, n), TropicalMatrix(n, n, inf),
                                  TropicalMatrix(n, n, inf)};
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n; ++i) {
            names.push_back("t" + std::to_string(i + 1));
        }
        std::vector<Place> places;
        for (unsigned mu = 0; mu <= 1; ++mu) {
            auto& a = mu == 0 ? cm.a0 : cm.a1;
            auto& b = mu == 0 ? cm.b0 : cm.b1;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (!bernoulli(g, 0.5)) {
                        continue;
                    }
                    Rational low(ref::uniform(g, 0, 20), 2);
                    a(i, j) = ExtendedRational(low);
                    if (bernoulli(g, 0.7)) {
                        b(i, j) = ExtendedRational(Rational(low + ratio(ref::uniform(g, 0, 10), 3)));
                    }
                    places.push_back(Place{names[j], names[i], mu, low, b(i, j)});
                }
            }
        }
        auto back = to_characteristic(PTimeEventGraph(names, places));
        CHECK(back.a0 == cm.a0);
        CHECK(back.a1 == cm.a1);
        CHECK(back.b0 == cm.b0);
        CHECK(back.b1 == cm.b1);
    }
}

TEST_CASE("trajectory validation") {
    SUBCASE("reference trajectory on the consistent net") {
        CHECK(validate_trajectory(ref::example_net(-1, 1), ref::reference_trajectory(5)).empty());
        CHECK(validate_trajectory(ref::example_net(-1, 1), ref::reference_trajectory(10)).empty());
    }
    SUBCASE("same trajectory violates the lower bound of the t1 loop when beta = 2") {
        auto vs = validate_trajectory(ref::example_net(-1, 2), ref::reference_trajectory(5));
        REQUIRE(vs.size() == 4);
        for (std::size_t k = 1; k <= 4; ++k) {
            const auto& v = vs[k - 1];
            CHECK(v.kind == Violation::Kind::PlaceLower);
            CHECK(v.place == std::optional<std::size_t>(1));
            CHECK(v.i == 1);
            CHECK(v.j == 1);
            CHECK(v.mu == 1);
            CHECK(v.k == k);
            CHECK(v.slack == -1);
        }
        CHECK(validate_trajectory(ref::example_net(-1, 2), ref::reference_trajectory(2)).size() == 1);
    }
    SUBCASE("decreasing firing times") {
        Trajectory t{{{Rational(1), Rational(0)}, {Rational(0), Rational(0)}}};
        auto vs = validate_trajectory(PTimeEventGraph({"a", "b"}, {}), t);
        REQUIRE(vs.size() == 1);
        CHECK(vs[0].kind == Violation::Kind::Nondecreasing);
        CHECK_FALSE(vs[0].place);
        CHECK(vs[0].i == 1);
    }
    SUBCASE("upper bound violation") {
        PTimeEventGraph net({"a"}, {Place{"a", "a", 1, 1, ExtendedRational(2)}});
        Trajectory t{{{Rational(0)}, {Rational(3)}}};
        auto vs = validate_trajectory(net, t);
        REQUIRE(vs.size() == 1);
        CHECK(vs[0].kind == Violation::Kind::PlaceUpper);
        CHECK(vs[0].slack == -1);
    }
    SUBCASE("dimension mismatch") {
        Trajectory t{{{Rational(0)}}};
        CHECK_THROWS_AS(validate_trajectory(ref::example_net(-1, 1), t), std::invalid_argument);
        CHECK_THROWS_AS(m_form_violations(ref::running_example(-1, 1), t), std::invalid_argument);
    }
}

TEST_CASE("net constraints and the matrix form accept the same trajectories") {
    auto g = ref::rng(19);
    int valid = 0;
    int invalid = 0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + uniform_index(g, 3);
        auto net = random_instance(g(), n, 0.5, 10, 1);
        auto m = characteristic_to_m(to_characteristic(net));
        const std::size_t horizon = 1 + uniform_index(g, 6);
        Trajectory traj;
        auto report = weak_feasible(m, horizon);
        if (report.feasible && bernoulli(g, 0.6)) {
            traj = *report.witness;
            if (bernoulli(g, 0.5)) {
                auto& cell = traj.x[uniform_index(g, horizon)][uniform_index(g, n)];
                cell += ratio(ref::uniform(g, -4, 4), 2);
            }
        } else {
            traj.x.assign(horizon, std::vector<Rational>(n));
            for (std::size_t k = 0; k < horizon; ++k) {
                for (std::size_t i = 0; i < n; ++i) {
                    traj.x[k][i] = (k > 0 ? traj.x[k - 1][i] : Rational(0)) + ratio(ref::uniform(g, -2, 12), 2);
                }
            }
        }
        bool by_places = validate_trajectory(net, traj).empty();
        bool by_matrices = m_form_violations(m, traj) == 0;
        CHECK(by_places == by_matrices);
        (by_places ? valid : invalid)++;
    }
    CHECK(valid > 30);
    CHECK(invalid > 30);
}

TEST_CASE("consistency verdicts of the running example") {
    auto v12 = check_consistency(ref::example_net(-1, 2));
    CHECK_FALSE(v12.consistent());
    CHECK(std::holds_alternative<PositiveCircuit>(v12.certificate));
    CHECK_FALSE(v12.witness);

    auto v54 = check_consistency(ref::example_net(-5, 4));
    REQUIRE(std::holds_alternative<PumpablePair>(v54.certificate));
    const auto& pp = std::get<PumpablePair>(v54.certificate);
    CHECK(pp.i1 == 1);
    CHECK(pp.s1 == 1);
    CHECK(pp.w1 == 4);
    CHECK(pp.i2 == 2);
    CHECK(pp.s2 == -1);
    CHECK(pp.w2 == -3);
    CHECK(pp.value() == 1);

    auto v11 = check_consistency(ref::example_net(-1, 1));
    REQUIRE(v11.consistent());
    REQUIRE(v11.witness);
    CHECK(v11.witness->horizon() == 10);
    CHECK(validate_trajectory(v11.normalized, *v11.witness).empty());
}

TEST_CASE("witness prefixes") {
    SUBCASE("running example, horizon 3") {
        auto t = witness_prefix(ref::running_example(-1, 1), 3);
        CHECK(t.horizon() == 3);
        CHECK(validate_trajectory(ref::example_net(-1, 1), t).empty());
    }
    SUBCASE("single self-loop on [1,2]") {
        PTimeEventGraph net({"a"}, {Place{"a", "a", 1, 1, ExtendedRational(2)}});
        auto t = witness_prefix(characteristic_to_m(to_characteristic(net)), 6);
        for (std::size_t k = 1; k < 6; ++k) {
            Rational step = t.x[k][0] - t.x[k - 1][0];
            CHECK(step >= 1);
            CHECK(step <= 2);
        }
    }
    SUBCASE("no places") {
        PTimeEventGraph net({"a", "b"}, {});
        auto t = witness_prefix(characteristic_to_m(to_characteristic(net)), 2);
        CHECK(t.horizon() == 2);
        CHECK(validate_trajectory(net, t).empty());
    }
    SUBCASE("precondition") {
        CHECK_THROWS_AS(witness_prefix(ref::running_example(-5, 4), 3), std::invalid_argument);
        CHECK_THROWS_AS(witness_prefix(ref::running_example(-1, 1), 0), std::invalid_argument);
    }
    SUBCASE("random consistent nets") {
        auto g = ref::rng(33);
        int built = 0;
        for (int t = 0; t < 150; ++t) {
            auto net = normalize_marking(random_instance(g(), 1 + uniform_index(g, 3), 0.5, 10, 2));
            auto m = characteristic_to_m(to_characteristic(net));
            if (!std::holds_alternative<NoInfinitePath>(detect_infinite_weight(m))) {
                continue;
            }
            ++built;
            auto w = witness_prefix(m, 8);
            CHECK(validate_trajectory(net, w).empty());
            CHECK(m_form_violations(m, w) == 0);
        }
        CHECK(built > 30);
    }
}

TEST_CASE("scaling bounds preserves validity and verdict class") {
    auto g = ref::rng(71);
    for (int t = 0; t < 60; ++t) {
        auto net = random_instance(g(), 1 + uniform_index(g, 3), 0.5, 10, 1);
        Rational c = ratio(static_cast<long>(1 + uniform_index(g, 7)), static_cast<long>(1 + uniform_index(g, 3)));
        std::vector<Place> scaled = net.places();
        for (auto& p : scaled) {
            p.lower *= c;
            if (p.upper.is_finite()) {
                p.upper = ExtendedRational(Rational(p.upper.value() * c));
            }
        }
        PTimeEventGraph net_c(net.transitions(), scaled);
        auto v = check_consistency(net, 6);
        auto vc = check_consistency(net_c, 6);
        CHECK(verdict_class(v.certificate) == verdict_class(vc.certificate));
        if (v.witness) {
            Trajectory tc = *v.witness;
            for (auto& xk : tc.x) {
                for (auto& x : xk) {
                    x *= c;
                }
            }
            CHECK(validate_trajectory(net_c, tc).empty());
        }
    }
}

TEST_CASE("finite horizons: truncation makes exact agreement impossible") {
    // x_i(k+2) = x_j(k) and x_i(k+1) >= x_j(k) + 5: feasible at h = 2, but the
    // chain's fresh transition must fire before x_j(1), forcing x_i(2) <= x_j(1).
    PTimeEventGraph net({"j", "i"}, {Place{"j", "i", 2, 0, ExtendedRational(0)}, Place{"j", "i", 1, 5, inf}});
    auto m = characteristic_to_m(to_characteristic(normalize_marking(net)));
    CHECK(weak_feasible(net, 2).feasible);
    CHECK_FALSE(weak_feasible(m, 2).feasible);
    CHECK_FALSE(weak_feasible(net, 3).feasible);
    CHECK_FALSE(check_consistency(net).consistent());
}

TEST_CASE("normalization preserves feasibility up to the marking lag") {
    auto g = ref::rng(1000);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + uniform_index(g, 3);
        auto net = random_instance(g(), n, 0.5, 10, 3);
        unsigned lag = 0;
        for (const auto& p : net.places()) {
            lag = std::max(lag, p.marking > 0 ? p.marking - 1 : 0);
        }
        auto m = characteristic_to_m(to_characteristic(normalize_marking(net)));
        for (std::size_t h = 1; h <= 8; ++h) {
            bool norm = weak_feasible(m, h).feasible;
            if (norm) {
                CHECK(weak_feasible(net, h).feasible);
            }
            if (weak_feasible(net, h + lag).feasible) {
                CHECK(norm);
            }
        }
    }
}

TEST_CASE("a self-loop chain keeps its upper bound") {
    // Marking-2 loop on [1,1] with a marking-1 loop on [1,inf) is infeasible:
    // x(k+2) = x(k) + 1 and x(k+1) >= x(k) + 1.
    PTimeEventGraph net({"a"}, {Place{"a", "a", 2, 1, ExtendedRational(1)}, Place{"a", "a", 1, 1, inf}});
    CHECK_FALSE(weak_feasible(net, 3).feasible);
    auto v = check_consistency(net);
    CHECK_FALSE(v.consistent());
}
