#include "ptime/oracle.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>

namespace ptime {

namespace {

FeasibilityReport report_from_star(const TropicalMatrix& a, std::size_t n, std::size_t horizon) {
    FeasibilityReport out;
    out.horizon = horizon;
    StarResult star = kleene_star(a);
    // Node (i, k), k = 1..h, sits at (k - 1) n + i - 1.
    auto node = [n](std::size_t v) { return std::make_pair(v % n + 1, static_cast<long>(v / n) + 1); };
    if (star.has_positive_circuit()) {
        out.feasible = false;
        std::vector<std::pair<std::size_t, long>> circuit;
        for (std::size_t v : star.positive_circuit) {
            circuit.push_back(node(v));
        }
        out.blocking_circuit = std::move(circuit);
        return out;
    }
    out.feasible = true;
    Trajectory t;
    t.x.assign(horizon, std::vector<Rational>(n));
    for (std::size_t v = 0; v < a.rows(); ++v) {
        ExtendedRational best = ExtendedRational::neg_inf();
        for (std::size_t u = 0; u < a.cols(); ++u) {
            best = oplus(best, star.star(v, u));
        }
        t.x[v / n][v % n] = best.value();
    }
    out.witness = std::move(t);
    return out;
}

}  // namespace

FeasibilityReport weak_feasible(const ShiftedMatrices& m, std::size_t horizon) {
    if (horizon < 1) {
        throw std::invalid_argument("weak_feasible: horizon must be >= 1");
    }
    m.validate();
    const std::size_t n = m.n();
    if (n == 0) {
        return FeasibilityReport{horizon, true, Trajectory{std::vector<std::vector<Rational>>(horizon)}, {}};
    }
    StaticGraph g = StaticGraph::from_matrices(m);
    return report_from_star(build_slice(g, SliceSpec::natural(n, static_cast<long>(horizon))), n, horizon);
}

FeasibilityReport weak_feasible(const PTimeEventGraph& net, std::size_t horizon) {
    if (horizon < 1) {
        throw std::invalid_argument("weak_feasible: horizon must be >= 1");
    }
    const std::size_t n = net.transition_count();
    if (n == 0) {
        return FeasibilityReport{horizon, true, Trajectory{std::vector<std::vector<Rational>>(horizon)}, {}};
    }
    TropicalMatrix a(n * horizon, n * horizon);
    auto at = [n](std::size_t i, std::size_t k) { return (k - 1) * n + (i - 1); };
    auto raise = [&a](std::size_t to, std::size_t from, const ExtendedRational& w) {
        a(to, from) = oplus(a(to, from), w);
    };
    for (const Place& p : net.places()) {
        std::size_t i = net.index_of(p.to);
        std::size_t j = net.index_of(p.from);
        for (std::size_t k = 1; k + p.marking <= horizon; ++k) {
            raise(at(i, k + p.marking), at(j, k), ExtendedRational(p.lower));
            if (p.upper.is_finite()) {
                raise(at(j, k), at(i, k + p.marking), ExtendedRational(Rational(-p.upper.value())));
            }
        }
    }
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t k = 1; k < horizon; ++k) {
            raise(at(i, k + 1), at(i, k), ExtendedRational::zero());
        }
    }
    return report_from_star(a, n, horizon);
}

namespace {

class Johnson {
public:
    Johnson(const Multigraph& g, const std::function<bool(const std::vector<std::size_t>&)>& visit)
        : g_(g), visit_(visit), out_(g.node_count), blocked_(g.node_count), b_(g.node_count) {
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            out_[g.edges[e].from].push_back(e);
        }
    }

    void run() {
        for (start_ = 0; start_ < g_.node_count && !stop_; ++start_) {
            for (std::size_t v = start_; v < g_.node_count; ++v) {
                blocked_[v] = false;
                b_[v].clear();
            }
            circuit(start_);
        }
    }

private:
    bool circuit(std::size_t v) {
        bool found = false;
        blocked_[v] = true;
        for (std::size_t e : out_[v]) {
            if (stop_) {
                return true;
            }
            std::size_t w = g_.edges[e].to;
            if (w < start_) {
                continue;
            }
            stack_.push_back(e);
            if (w == start_) {
                found = true;
                if (!visit_(stack_)) {
                    stop_ = true;
                }
            } else if (!blocked_[w] && circuit(w)) {
                found = true;
            }
            stack_.pop_back();
        }
        if (found) {
            unblock(v);
        } else {
            for (std::size_t e : out_[v]) {
                std::size_t w = g_.edges[e].to;
                if (w >= start_) {
                    b_[w].insert(v);
                }
            }
        }
        return found;
    }

    void unblock(std::size_t u) {
        std::vector<std::size_t> todo{u};
        while (!todo.empty()) {
            std::size_t x = todo.back();
            todo.pop_back();
            if (!blocked_[x]) {
                continue;
            }
            blocked_[x] = false;
            for (std::size_t y : b_[x]) {
                todo.push_back(y);
            }
            b_[x].clear();
        }
    }

    const Multigraph& g_;
    const std::function<bool(const std::vector<std::size_t>&)>& visit_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<bool> blocked_;
    std::vector<std::set<std::size_t>> b_;
    std::vector<std::size_t> stack_;
    std::size_t start_ = 0;
    bool stop_ = false;
};

}  // namespace

void for_each_elementary_circuit(const Multigraph& g,
                                 const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    for (const auto& e : g.edges) {
        if (e.from >= g.node_count || e.to >= g.node_count) {
            throw std::invalid_argument("multigraph edge endpoint out of range");
        }
    }
    Johnson(g, visit).run();
}

std::size_t CircuitCatalog::size() const {
    std::size_t total = 0;
    for (const auto& [key, entries] : groups) {
        total += entries.size();
    }
    return total;
}

std::optional<Rational> CircuitCatalog::max_weight(std::size_t base, long shift) const {
    auto it = groups.find({base, shift});
    if (it == groups.end()) {
        return std::nullopt;
    }
    Rational best = it->second.front().weight;
    for (const auto& e : it->second) {
        best = std::max(best, e.weight);
    }
    return best;
}

CircuitCatalog enumerate_pseudo_circuits(const StaticGraph& g, std::size_t max_len) {
    if (max_len < 1) {
        throw std::invalid_argument("enumerate_pseudo_circuits: max_len must be >= 1");
    }
    Multigraph mg{g.node_count(), {}};
    for (const auto& arc : g.arcs()) {
        mg.edges.push_back({arc.source - 1, arc.target - 1});
    }
    CircuitCatalog catalog;
    for_each_elementary_circuit(mg, [&](const std::vector<std::size_t>& ids) {
        if (ids.size() > max_len) {
            return true;
        }
        for (std::size_t r = 0; r < ids.size(); ++r) {
            Path p{g.arcs()[ids[r]].source, {}};
            for (std::size_t t = 0; t < ids.size(); ++t) {
                p.arcs.push_back(g.arcs()[ids[(r + t) % ids.size()]]);
            }
            Rational w = path_weight(p);
            long s = path_shift(p);
            catalog.groups[{p.anchor, s}].push_back(CatalogEntry{std::move(p), std::move(w)});
        }
        return true;
    });
    return catalog;
}

namespace {

struct SliceEdge {
    std::size_t from;
    std::size_t to;
    Arc arc;
};

// Positive circuit of the radius-n slice by Bellman-Ford longest paths from
// a virtual source joined to every node.
std::optional<PositiveCircuit> bellman_ford_positive(const ShiftedMatrices& m) {
    const std::size_t n = m.n();
    const long r = static_cast<long>(n);
    const std::size_t count = n * static_cast<std::size_t>(2 * r + 1);
    auto id = [n, r](std::size_t i, long k) { return static_cast<std::size_t>(k + r) * n + (i - 1); };
    std::vector<SliceEdge> edges;
    for (int s = -1; s <= 1; ++s) {
        const auto& ms = m.by_shift(s);
        for (std::size_t to = 1; to <= n; ++to) {
            for (std::size_t from = 1; from <= n; ++from) {
                if (!ms(to - 1, from - 1).is_finite()) {
                    continue;
                }
                for (long k = -r; k <= r; ++k) {
                    if (k + s < -r || k + s > r) {
                        continue;
                    }
                    edges.push_back({id(from, k), id(to, k + s), Arc{from, to, s, ms(to - 1, from - 1).value()}});
                }
            }
        }
    }
    std::vector<Rational> dist(count, Rational(0));
    std::vector<std::optional<std::size_t>> pred(count);
    std::optional<std::size_t> touched;
    for (std::size_t round = 0; round < count; ++round) {
        touched.reset();
        for (std::size_t e = 0; e < edges.size(); ++e) {
            Rational cand = dist[edges[e].from] + edges[e].arc.weight;
            if (cand > dist[edges[e].to]) {
                dist[edges[e].to] = cand;
                pred[edges[e].to] = e;
                touched = edges[e].to;
            }
        }
        if (!touched) {
            return std::nullopt;
        }
    }
    std::size_t v = *touched;
    for (std::size_t step = 0; step < count; ++step) {
        v = edges[*pred[v]].from;
    }
    std::vector<std::size_t> cycle;
    std::size_t u = v;
    do {
        cycle.push_back(*pred[u]);
        u = edges[*pred[u]].from;
    } while (u != v);
    std::reverse(cycle.begin(), cycle.end());

    PositiveCircuit pc;
    pc.node = edges[cycle.front()].from + 1;
    pc.base = {edges[cycle.front()].arc.source,
               static_cast<long>(edges[cycle.front()].from / n) - r};
    pc.circuit.anchor = edges[cycle.front()].arc.source;
    for (std::size_t e : cycle) {
        pc.circuit.arcs.push_back(edges[e].arc);
    }
    pc.weight = path_weight(pc.circuit);
    if (sgn(pc.weight) <= 0 || path_shift(pc.circuit) != 0) {
        throw std::logic_error("bellman_ford_positive: predecessor cycle is not a positive circuit");
    }
    return pc;
}

std::optional<Path> bfs_path(const StaticGraph& g, std::size_t from, std::size_t to) {
    const std::size_t n = g.node_count();
    std::vector<std::optional<Arc>> via(n + 1);
    std::vector<bool> seen(n + 1, false);
    std::deque<std::size_t> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (const auto& arc : g.arcs()) {
            if (arc.source == v && !seen[arc.target]) {
                seen[arc.target] = true;
                via[arc.target] = arc;
                queue.push_back(arc.target);
            }
        }
    }
    if (!seen[to]) {
        return std::nullopt;
    }
    Path p{from, {}};
    for (std::size_t v = to; v != from; v = via[v]->source) {
        p.arcs.push_back(*via[v]);
    }
    std::reverse(p.arcs.begin(), p.arcs.end());
    return p;
}

const CatalogEntry& best_entry(const std::vector<CatalogEntry>& entries) {
    return *std::max_element(entries.begin(), entries.end(),
                             [](const CatalogEntry& a, const CatalogEntry& b) { return a.weight < b.weight; });
}

}  // namespace

BruteVerdict brute_infinite_weight(const ShiftedMatrices& m) {
    m.validate();
    const std::size_t n = m.n();
    if (n > 4) {
        throw std::invalid_argument("brute_infinite_weight: n > 4 is outside the size guard");
    }
    BruteVerdict out{NoInfinitePath{}, {}};
    if (n == 0) {
        return out;
    }
    if (auto pc = bellman_ford_positive(m)) {
        out.verdict = std::move(*pc);
        return out;
    }
    StaticGraph g = StaticGraph::from_matrices(m);
    CircuitCatalog catalog = enumerate_pseudo_circuits(g, n);
    for (const auto& [key1, group1] : catalog.groups) {
        if (key1.second <= 0) {
            continue;
        }
        const CatalogEntry& q1 = best_entry(group1);
        for (const auto& [key2, group2] : catalog.groups) {
            if (key2.second >= 0) {
                continue;
            }
            const CatalogEntry& q2 = best_entry(group2);
            PumpablePair pair{key1.first, key1.second, q1.weight, key2.first, key2.second, q2.weight, true};
            if (sgn(pair.value()) <= 0) {
                continue;
            }
            auto connector = bfs_path(g, key1.first, key2.first);
            if (!connector) {
                continue;
            }
            for (std::size_t h = 1; h <= 3; ++h) {
                Path r = concat(concat(repeat(q1.circuit, h * static_cast<std::size_t>(-key2.second)), *connector),
                                repeat(q2.circuit, h * static_cast<std::size_t>(key1.second)));
                if (!out.pumped_weights.empty() && path_weight(r) <= out.pumped_weights.back()) {
                    throw std::logic_error("brute_infinite_weight: pumped weights do not increase");
                }
                out.pumped_weights.push_back(path_weight(r));
            }
            out.verdict = pair;
            return out;
        }
    }
    return out;
}

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("uniform_index: bound must be positive");
    }
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = rng();
        if (r >= threshold) {
            return r % bound;
        }
    }
}

bool bernoulli(std::mt19937_64& rng, double p) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

namespace {

void check_generator_args(std::size_t n, double density, long weight_range) {
    if (n < 1 || !(density >= 0.0 && density <= 1.0) || weight_range < 0) {
        throw std::invalid_argument("random instance: need n >= 1, density in [0, 1], weight_range >= 0");
    }
}

std::vector<std::string> transition_names(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= n; ++i) {
        names.push_back("t" + std::to_string(i));
    }
    return names;
}

// Lower uniform on the half-grid of [0, R]; upper +inf w.p. 1/5, else uniform
// on the half-grid of [lower, R].
Place random_place(std::mt19937_64& rng, std::string from, std::string to, unsigned marking, long weight_range) {
    const auto halves = static_cast<std::uint64_t>(2 * weight_range);
    Place p{std::move(from), std::move(to), marking, 0, ExtendedRational::pos_inf()};
    std::uint64_t low = uniform_index(rng, halves + 1);
    p.lower = ratio(static_cast<long>(low), 2);
    if (!bernoulli(rng, 0.2)) {
        std::uint64_t high = low + uniform_index(rng, halves - low + 1);
        p.upper = ExtendedRational(ratio(static_cast<long>(high), 2));
    }
    return p;
}

}  // namespace

PTimeEventGraph random_instance(std::uint64_t seed, std::size_t n, double density, long weight_range,
                                unsigned marking_max) {
    check_generator_args(n, density, weight_range);
    std::mt19937_64 rng(seed);
    auto names = transition_names(n);
    std::vector<Place> places;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            if (bernoulli(rng, density)) {
                auto marking = static_cast<unsigned>(uniform_index(rng, marking_max + 1ULL));
                places.push_back(random_place(rng, names[j], names[i], marking, weight_range));
            }
        }
    }
    return PTimeEventGraph(std::move(names), std::move(places));
}

PTimeEventGraph random_feedforward_instance(std::uint64_t seed, std::size_t n, double density,
                                            long weight_range, unsigned marking_max) {
    check_generator_args(n, density, weight_range);
    std::mt19937_64 rng(seed);
    auto names = transition_names(n);
    std::vector<Place> places;
    const std::uint64_t loop_markings = std::max(1U, marking_max);
    for (std::size_t i = 0; i < n; ++i) {
        if (bernoulli(rng, density)) {
            auto marking = static_cast<unsigned>(1 + uniform_index(rng, loop_markings));
            places.push_back(random_place(rng, names[i], names[i], marking, weight_range));
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (bernoulli(rng, density)) {
                auto marking = static_cast<unsigned>(uniform_index(rng, marking_max + 1ULL));
                places.push_back(random_place(rng, names[j], names[i], marking, weight_range));
            }
        }
    }
    return PTimeEventGraph(std::move(names), std::move(places));
}

ShiftedMatrices random_matrices(std::uint64_t seed, std::size_t n, double density, long lo, long hi) {
    if (lo > hi || !(density >= 0.0 && density <= 1.0)) {
        throw std::invalid_argument("random_matrices: need lo <= hi and density in [0, 1]");
    }
    std::mt19937_64 rng(seed);
    ShiftedMatrices m{TropicalMatrix(n, n), TropicalMatrix(n, n), TropicalMatrix(n, n)};
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    for (int s = -1; s <= 1; ++s) {
        auto& ms = m.by_shift(s);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (bernoulli(rng, density)) {
                    ms(i, j) = ExtendedRational(lo + static_cast<long>(uniform_index(rng, span)));
                }
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        m.plus(i, i) = oplus(m.plus(i, i), ExtendedRational::zero());
    }
    return m;
}

}  // namespace ptime
