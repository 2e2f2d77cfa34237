#include "ptime/periodic.hpp"

#include <sstream>
#include <stdexcept>

namespace ptime {

SliceSpec SliceSpec::symmetric(std::size_t n, long radius) {
    if (radius < 0) {
        throw std::invalid_argument("slice radius must be >= 0");
    }
    return SliceSpec{Kind::Symmetric, n, radius};
}

SliceSpec SliceSpec::natural(std::size_t n, long depth) {
    if (depth < 1) {
        throw std::invalid_argument("slice depth must be >= 1");
    }
    return SliceSpec{Kind::Natural, n, depth};
}

std::size_t NodeIndexMap::flat(std::size_t base, long shift) const {
    if (base < 1 || base > spec_.n || !contains(shift)) {
        throw std::out_of_range("node outside slice");
    }
    return base + spec_.n * static_cast<std::size_t>(shift - spec_.first_shift());
}

std::pair<std::size_t, long> NodeIndexMap::node(std::size_t flat) const {
    if (flat < 1 || flat > spec_.node_count()) {
        throw std::out_of_range("flat index outside slice");
    }
    std::size_t z = flat - 1;
    return {z % spec_.n + 1, static_cast<long>(z / spec_.n) + spec_.first_shift()};
}

std::string NodeIndexMap::label(std::size_t flat) const {
    auto [i, k] = node(flat);
    return "(" + std::to_string(i) + "," + std::to_string(k) + ")";
}

TropicalMatrix build_slice(const StaticGraph& g, const SliceSpec& spec) {
    if (spec.n != g.node_count()) {
        throw std::invalid_argument("slice node count does not match the graph");
    }
    NodeIndexMap map(spec);
    TropicalMatrix a(spec.node_count(), spec.node_count());
    for (long k = spec.first_shift(); k <= spec.last_shift(); ++k) {
        for (const auto& e : g.arcs()) {
            long to = k + e.shift;
            if (!map.contains(to)) {
                continue;
            }
            a(map.flat(e.target, to) - 1, map.flat(e.source, k) - 1) = ExtendedRational(e.weight);
        }
    }
    return a;
}

std::string slice_to_dot(const StaticGraph& g, const SliceSpec& spec) {
    TropicalMatrix a = build_slice(g, spec);
    NodeIndexMap map(spec);
    std::ostringstream os;
    os << "digraph slice {\n";
    for (std::size_t v = 1; v <= spec.node_count(); ++v) {
        os << "  " << v << " [label=\"" << map.label(v) << "\"];\n";
    }
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (a(i, j).is_finite()) {
                os << "  " << j + 1 << " -> " << i + 1 << " [label=\"" << a(i, j) << "\"];\n";
            }
        }
    }
    os << "}\n";
    return os.str();
}

std::size_t PseudoCircuitTable::slot(std::size_t base, long shift) const {
    auto nn = static_cast<long>(n_);
    if (base < 1 || base > n_ || shift == 0 || shift < -nn || shift > nn) {
        throw std::out_of_range("pseudo-circuit table index out of range");
    }
    long s = shift < 0 ? shift + nn : shift + nn - 1;  // 0 .. 2n-1
    return (base - 1) * 2 * n_ + static_cast<std::size_t>(s);
}

PseudoCircuitTable pseudo_circuit_table(const TropicalMatrix& star, const NodeIndexMap& map) {
    const auto& spec = map.spec();
    const std::size_t n = spec.n;
    if (spec.kind != SliceSpec::Kind::Symmetric || spec.extent != static_cast<long>(n) ||
        star.rows() != spec.node_count() || !star.is_square()) {
        throw std::invalid_argument("pseudo_circuit_table expects the star of the radius-n slice");
    }
    if (star.contains_pos_inf()) {
        throw std::invalid_argument("pseudo_circuit_table: slice contains a positive circuit");
    }
    PseudoCircuitTable table(n);
    auto nn = static_cast<long>(n);
    for (std::size_t i = 1; i <= n; ++i) {
        std::size_t from = map.flat(i, 0) - 1;
        for (long s = -nn; s <= nn; ++s) {
            if (s != 0) {
                table.set(i, s, star(map.flat(i, s) - 1, from));
            }
        }
    }
    return table;
}

std::string verdict_class(const InfWeightVerdict& v) {
    if (std::holds_alternative<PositiveCircuit>(v)) {
        return "positive_circuit";
    }
    if (std::holds_alternative<PumpablePair>(v)) {
        return "pumpable_pair";
    }
    return "consistent";
}

namespace {

// Static path along slice nodes (zero-based flats); with `closed` the final
// arc back to the first node is included.
Path slice_walk_to_path(const StaticGraph& g, const NodeIndexMap& map,
                        const std::vector<std::size_t>& flats, bool closed) {
    Path p{map.node(flats.front() + 1).first, {}};
    std::size_t steps = closed ? flats.size() : flats.size() - 1;
    for (std::size_t t = 0; t < steps; ++t) {
        auto [i, k] = map.node(flats[t] + 1);
        auto [j, k2] = map.node(flats[(t + 1) % flats.size()] + 1);
        auto arc = g.find_arc(i, j, static_cast<int>(k2 - k));
        if (!arc) {
            throw std::logic_error("slice path uses an arc missing from the static graph");
        }
        p.arcs.push_back(*arc);
    }
    return p;
}

}  // namespace

InfWeightAnalysis analyze_infinite_weight(const ShiftedMatrices& m, bool exhaustive) {
    m.validate();
    const std::size_t n = m.n();
    InfWeightAnalysis out;
    out.graph = StaticGraph::from_matrices(m);
    out.reach = reachability_closure(out.graph);
    out.map = NodeIndexMap(SliceSpec::symmetric(n, static_cast<long>(n)));
    out.star = kleene_star(build_slice(out.graph, out.map.spec()));
    out.verdict = NoInfinitePath{};
    if (n == 0) {
        return out;
    }

    if (out.star.has_positive_circuit()) {
        const auto& nodes = out.star.positive_circuit;
        PositiveCircuit pc;
        pc.node = nodes.front() + 1;
        pc.base = out.map.node(pc.node);
        pc.circuit = slice_walk_to_path(out.graph, out.map, nodes, true);
        pc.weight = path_weight(pc.circuit);
        out.verdict = std::move(pc);
        return out;
    }

    out.table = pseudo_circuit_table(out.star.star, out.map);
    const auto& table = *out.table;
    auto nn = static_cast<long>(n);
    bool found = false;
    for (std::size_t i1 = 1; i1 <= n; ++i1) {
        for (std::size_t i2 = 1; i2 <= n; ++i2) {
            if (!out.reach(i2, i1)) {
                continue;
            }
            for (long s1 = 1; s1 <= nn; ++s1) {
                const auto& w1 = table.at(i1, s1);
                if (!w1.is_finite()) {
                    continue;
                }
                for (long s2 = -1; s2 >= -nn; --s2) {
                    const auto& w2 = table.at(i2, s2);
                    if (!w2.is_finite()) {
                        continue;
                    }
                    PumpablePair pair{i1, s1, w1.value(), i2, s2, w2.value(), true};
                    if (sgn(pair.value()) <= 0) {
                        continue;
                    }
                    if (!found) {
                        out.verdict = pair;
                        found = true;
                    }
                    if (!exhaustive) {
                        out.all_pairs.push_back(std::move(pair));
                        return out;
                    }
                    out.all_pairs.push_back(std::move(pair));
                }
            }
        }
    }
    return out;
}

InfWeightVerdict detect_infinite_weight(const ShiftedMatrices& m) {
    return analyze_infinite_weight(m).verdict;
}

PumpCertificate pump_certificate(const StaticGraph& g, const PumpablePair& cert, std::size_t count) {
    const std::size_t n = g.node_count();
    auto nn = static_cast<long>(n);
    if (cert.i1 < 1 || cert.i1 > n || cert.i2 < 1 || cert.i2 > n || cert.s1 < 1 || cert.s1 > nn ||
        cert.s2 > -1 || cert.s2 < -nn) {
        throw std::invalid_argument("pump_certificate: indices out of range");
    }
    if (sgn(cert.value()) <= 0) {
        throw std::invalid_argument("pump_certificate: -s2 w1 + s1 w2 is not positive");
    }
    NodeIndexMap map(SliceSpec::symmetric(n, nn));
    StarResult star = kleene_star(build_slice(g, map.spec()));
    if (star.has_positive_circuit()) {
        throw std::invalid_argument("pump_certificate: slice has a positive circuit");
    }
    auto circuit_path = [&](std::size_t base, long shift, const Rational& expected) {
        auto nodes = star.longest_path(map.flat(base, 0) - 1, map.flat(base, shift) - 1);
        if (!nodes) {
            throw std::invalid_argument("pump_certificate: no pseudo-circuit at (" + std::to_string(base) +
                                        ", " + std::to_string(shift) + ")");
        }
        Path p = slice_walk_to_path(g, map, *nodes, false);
        if (path_weight(p) != expected || path_shift(p) != shift) {
            throw std::invalid_argument("pump_certificate: circuit weight does not match certificate");
        }
        return p;
    };

    PumpCertificate out;
    out.q1 = circuit_path(cert.i1, cert.s1, cert.w1);
    out.q2 = circuit_path(cert.i2, cert.s2, cert.w2);
    auto connector = shortest_hop_path(g, cert.i1, cert.i2);
    if (!connector) {
        throw std::invalid_argument("pump_certificate: node i2 is not reachable from i1");
    }
    out.connector = *connector;
    const long bound = path_lshift(out.connector) - nn;
    out.base_shift = 1 - bound;

    const Rational connector_weight = path_weight(out.connector);
    for (std::size_t h = 1; h <= count; ++h) {
        auto x1 = static_cast<std::size_t>(-cert.s2) * h;
        auto x2 = static_cast<std::size_t>(cert.s1) * h;
        Path r = concat(concat(repeat(out.q1, x1), out.connector), repeat(out.q2, x2));
        PumpStep step{h, path_weight(r), path_shift(r), path_lshift(r)};
        if (step.lshift < bound ||
            step.weight != Rational(static_cast<long>(h) * cert.value() + connector_weight)) {
            throw std::logic_error("pump_certificate: pumped path violates its invariants");
        }
        out.steps.push_back(std::move(step));
    }
    return out;
}

}  // namespace ptime
