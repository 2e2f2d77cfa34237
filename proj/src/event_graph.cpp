#include "ptime/event_graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace ptime {

PTimeEventGraph::PTimeEventGraph(std::vector<std::string> transitions, std::vector<Place> places)
    : transitions_(std::move(transitions)), places_(std::move(places)) {
    std::set<std::string> seen;
    for (const auto& t : transitions_) {
        if (!seen.insert(t).second) {
            throw std::invalid_argument("duplicate transition '" + t + "'");
        }
    }
    for (std::size_t p = 0; p < places_.size(); ++p) {
        auto& pl = places_[p];
        pl.lower.canonicalize();
        const std::string where = "place " + std::to_string(p + 1);
        if (!seen.contains(pl.from) || !seen.contains(pl.to)) {
            throw std::invalid_argument(where + " references an unknown transition");
        }
        if (sgn(pl.lower) < 0) {
            throw std::invalid_argument(where + ": lower bound is negative");
        }
        if (pl.upper.is_neg_inf()) {
            throw std::invalid_argument(where + ": upper bound is -inf");
        }
    }
}

std::size_t PTimeEventGraph::index_of(const std::string& name) const {
    auto it = std::find(transitions_.begin(), transitions_.end(), name);
    if (it == transitions_.end()) {
        throw std::invalid_argument("unknown transition '" + name + "'");
    }
    return static_cast<std::size_t>(it - transitions_.begin()) + 1;
}

bool PTimeEventGraph::markings_at_most_one() const {
    return std::all_of(places_.begin(), places_.end(), [](const Place& p) { return p.marking <= 1; });
}

PTimeEventGraph normalize_marking(const PTimeEventGraph& net) {
    std::vector<std::string> transitions = net.transitions();
    std::set<std::string> names(transitions.begin(), transitions.end());
    std::vector<Place> places;
    for (std::size_t p = 0; p < net.places().size(); ++p) {
        const Place& pl = net.places()[p];
        if (pl.marking <= 1) {
            places.push_back(pl);
            continue;
        }
        std::string prev = pl.from;
        for (unsigned l = 1; l < pl.marking; ++l) {
            std::string fresh = "p" + std::to_string(p + 1) + "_u" + std::to_string(l);
            while (names.contains(fresh)) {
                fresh += "'";
            }
            names.insert(fresh);
            transitions.push_back(fresh);
            places.push_back(Place{prev, fresh, 1, 0, ExtendedRational::zero()});
            prev = fresh;
        }
        places.push_back(Place{prev, pl.to, 1, pl.lower, pl.upper});
    }
    return PTimeEventGraph(std::move(transitions), std::move(places));
}

CharacteristicMatrices to_characteristic(const PTimeEventGraph& net) {
    const std::size_t n = net.transition_count();
    CharacteristicMatrices cm{TropicalMatrix(n, n), TropicalMatrix(n, n),
                              TropicalMatrix(n, n, ExtendedRational::pos_inf()),
                              TropicalMatrix(n, n, ExtendedRational::pos_inf())};
    // First place seen at each (mu, i, j), for error reporting.
    std::map<std::tuple<unsigned, std::size_t, std::size_t>, std::size_t> first;
    for (std::size_t p = 0; p < net.places().size(); ++p) {
        const Place& pl = net.places()[p];
        if (pl.marking > 1) {
            throw std::invalid_argument("place " + std::to_string(p + 1) +
                                        " has more than one token; normalize the marking first");
        }
        std::size_t i = net.index_of(pl.to) - 1;
        std::size_t j = net.index_of(pl.from) - 1;
        auto& a = pl.marking == 0 ? cm.a0 : cm.a1;
        auto& b = pl.marking == 0 ? cm.b0 : cm.b1;
        a(i, j) = oplus(a(i, j), ExtendedRational(pl.lower));
        b(i, j) = std::min(b(i, j), pl.upper);
        auto [it, inserted] = first.emplace(std::make_tuple(pl.marking, i, j), p + 1);
        // A lone place with lower > upper is a legitimate (inconsistent) net.
        if (!inserted && b(i, j) < a(i, j)) {
            throw InfeasiblePlacePair(it->second, p + 1,
                                      "places " + std::to_string(it->second) + " and " +
                                          std::to_string(p + 1) + " between " + pl.from + " and " +
                                          pl.to + " have disjoint time windows");
        }
    }
    return cm;
}

ShiftedMatrices characteristic_to_m(const CharacteristicMatrices& cm) {
    const std::size_t n = cm.a0.rows();
    ShiftedMatrices m{TropicalMatrix(n, n), TropicalMatrix(n, n), TropicalMatrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m.zero(i, j) = oplus(cm.a0(i, j), -cm.b0(j, i));
            m.plus(i, j) = i == j ? oplus(ExtendedRational::zero(), cm.a1(i, i)) : cm.a1(i, j);
            m.minus(i, j) = -cm.b1(j, i);
        }
    }
    return m;
}

std::vector<Violation> validate_trajectory(const PTimeEventGraph& net, const Trajectory& t) {
    const std::size_t n = net.transition_count();
    const std::size_t horizon = t.horizon();
    for (const auto& xk : t.x) {
        if (xk.size() != n) {
            throw std::invalid_argument("trajectory dimension does not match the transition count");
        }
    }
    std::vector<Violation> out;
    for (std::size_t p = 0; p < net.places().size(); ++p) {
        const Place& pl = net.places()[p];
        std::size_t i = net.index_of(pl.to);
        std::size_t j = net.index_of(pl.from);
        for (std::size_t k = 1; k + pl.marking <= horizon; ++k) {
            const Rational& xi = t.x[k + pl.marking - 1][i - 1];
            const Rational& xj = t.x[k - 1][j - 1];
            Rational low = pl.lower + xj;
            if (xi < low) {
                out.push_back(Violation{Violation::Kind::PlaceLower, p + 1, i, j, pl.marking, k, low, xi,
                                        Rational(xi - low)});
            }
            if (pl.upper.is_finite()) {
                Rational high = pl.upper.value() + xj;
                if (xi > high) {
                    out.push_back(Violation{Violation::Kind::PlaceUpper, p + 1, i, j, pl.marking, k, xi,
                                            high, Rational(high - xi)});
                }
            }
        }
    }
    for (std::size_t k = 1; k < horizon; ++k) {
        for (std::size_t i = 1; i <= n; ++i) {
            const Rational& now = t.x[k - 1][i - 1];
            const Rational& next = t.x[k][i - 1];
            if (next < now) {
                out.push_back(Violation{Violation::Kind::Nondecreasing, std::nullopt, i, i, 1, k, now, next,
                                        Rational(next - now)});
            }
        }
    }
    return out;
}

namespace {

Vector to_vector(const std::vector<Rational>& v) { return Vector(v.begin(), v.end()); }

std::size_t count_below(const Vector& lhs, const Vector& rhs) {
    std::size_t bad = 0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        if (lhs[i] < rhs[i]) {
            ++bad;
        }
    }
    return bad;
}

}  // namespace

std::size_t m_form_violations(const ShiftedMatrices& m, const Trajectory& t) {
    m.validate();
    for (const auto& xk : t.x) {
        if (xk.size() != m.n()) {
            throw std::invalid_argument("trajectory dimension does not match the matrices");
        }
    }
    std::size_t bad = 0;
    for (std::size_t k = 0; k < t.horizon(); ++k) {
        Vector xk = to_vector(t.x[k]);
        bad += count_below(xk, mat_vec(m.zero, xk));
        if (k + 1 < t.horizon()) {
            Vector next = to_vector(t.x[k + 1]);
            bad += count_below(xk, mat_vec(m.minus, next));
            bad += count_below(next, mat_vec(m.plus, xk));
        }
    }
    return bad;
}

namespace detail {

Trajectory build_witness(const ShiftedMatrices& m, std::size_t horizon) {
    if (horizon == 0) {
        throw std::invalid_argument("witness horizon must be >= 1");
    }
    const std::size_t n = m.n();
    if (n == 0) {
        return Trajectory{std::vector<std::vector<Rational>>(horizon)};
    }
    StaticGraph g = StaticGraph::from_matrices(m);
    std::size_t depth = horizon + n + 2;
    for (int attempt = 0; attempt < 4; ++attempt, depth *= 2) {
        StarResult star = kleene_star(build_slice(g, SliceSpec::natural(n, static_cast<long>(depth))));
        if (star.has_positive_circuit()) {
            throw std::invalid_argument("no consistent trajectory: positive circuit within the horizon");
        }
        // alpha_k = -max of the entries of the first block row up to block k.
        Vector alpha(depth * n);
        ExtendedRational running = ExtendedRational::neg_inf();
        for (std::size_t k = 0; k < depth; ++k) {
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t c = 0; c < n; ++c) {
                    running = oplus(running, star.star(r, k * n + c));
                }
            }
            for (std::size_t c = 0; c < n; ++c) {
                alpha[k * n + c] = -running;
            }
        }
        Trajectory t;
        for (std::size_t h = 0; h < horizon; ++h) {
            std::vector<Rational> xh(n);
            for (std::size_t r = 0; r < n; ++r) {
                ExtendedRational acc = ExtendedRational::neg_inf();
                for (std::size_t c = 0; c < depth * n; ++c) {
                    acc = oplus(acc, otimes(star.star(h * n + r, c), alpha[c]));
                }
                if (!acc.is_finite()) {
                    throw std::logic_error("witness entry is not finite");
                }
                xh[r] = acc.value();
            }
            t.x.push_back(std::move(xh));
        }
        if (m_form_violations(m, t) == 0) {
            return t;
        }
    }
    throw std::logic_error("witness construction failed its self-check after 4 depth doublings");
}

}  // namespace detail

Trajectory witness_prefix(const ShiftedMatrices& m, std::size_t horizon) {
    if (!std::holds_alternative<NoInfinitePath>(detect_infinite_weight(m))) {
        throw std::invalid_argument("witness_prefix: the graph contains an infinite-weight path");
    }
    return detail::build_witness(m, horizon);
}

ConsistencyVerdict check_consistency(const PTimeEventGraph& net, std::size_t horizon) {
    ConsistencyVerdict v;
    v.normalized = normalize_marking(net);
    ShiftedMatrices m = characteristic_to_m(to_characteristic(v.normalized));
    v.certificate = detect_infinite_weight(m);
    if (v.consistent()) {
        v.witness = detail::build_witness(m, horizon);
        if (!validate_trajectory(v.normalized, *v.witness).empty()) {
            throw std::logic_error("witness does not validate against the net");
        }
    }
    return v;
}

}  // namespace ptime
