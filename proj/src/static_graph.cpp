#include "ptime/static_graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace ptime {

const TropicalMatrix& ShiftedMatrices::by_shift(int s) const {
    switch (s) {
        case -1:
            return minus;
        case 0:
            return zero;
        case 1:
            return plus;
        default:
            throw std::invalid_argument("shift must be -1, 0 or +1");
    }
}

TropicalMatrix& ShiftedMatrices::by_shift(int s) {
    return const_cast<TropicalMatrix&>(std::as_const(*this).by_shift(s));
}

void ShiftedMatrices::validate() const {
    const std::size_t n = zero.rows();
    for (const TropicalMatrix* m : {&minus, &zero, &plus}) {
        if (m->rows() != n || m->cols() != n) {
            throw std::invalid_argument("M_-1, M_0, M_+1 must all be n x n with the same n");
        }
        if (m->contains_pos_inf()) {
            throw std::invalid_argument("M matrices must not contain +inf");
        }
    }
}

void Path::check_chained() const {
    std::size_t at = anchor;
    for (const auto& e : arcs) {
        if (e.source != at) {
            throw std::invalid_argument("path arcs do not chain");
        }
        at = e.target;
    }
}

Path concat(const Path& first, const Path& second) {
    if (first.target() != second.source()) {
        throw std::invalid_argument("concat: paths do not meet");
    }
    Path out = first;
    out.arcs.insert(out.arcs.end(), second.arcs.begin(), second.arcs.end());
    return out;
}

Path repeat(const Path& circuit, std::size_t times) {
    if (circuit.source() != circuit.target()) {
        throw std::invalid_argument("repeat: path is not a circuit");
    }
    Path out{circuit.anchor, {}};
    out.arcs.reserve(circuit.arcs.size() * times);
    for (std::size_t t = 0; t < times; ++t) {
        out.arcs.insert(out.arcs.end(), circuit.arcs.begin(), circuit.arcs.end());
    }
    return out;
}

long path_shift(const Path& p) {
    p.check_chained();
    long s = 0;
    for (const auto& e : p.arcs) {
        s += e.shift;
    }
    return s;
}

Rational path_weight(const Path& p) {
    p.check_chained();
    Rational w = 0;
    for (const auto& e : p.arcs) {
        w += e.weight;
    }
    return w;
}

long path_lshift(const Path& p) {
    p.check_chained();
    long s = 0;
    long lowest = 0;
    for (const auto& e : p.arcs) {
        s += e.shift;
        lowest = std::min(lowest, s);
    }
    return lowest;
}

StaticGraph::StaticGraph(std::size_t n, std::vector<Arc> arcs) : n_(n) {
    std::map<std::tuple<std::size_t, std::size_t, int>, Rational> best;
    for (auto& e : arcs) {
        if (e.source < 1 || e.source > n || e.target < 1 || e.target > n) {
            throw std::invalid_argument("arc endpoint outside [1, n]");
        }
        if (e.shift < -1 || e.shift > 1) {
            throw std::invalid_argument("arc shift outside {-1, 0, +1}");
        }
        auto key = std::make_tuple(e.source, e.target, e.shift);
        auto it = best.find(key);
        if (it == best.end()) {
            best.emplace(key, e.weight);
        } else if (e.weight > it->second) {
            it->second = e.weight;
        }
    }
    for (auto& [key, w] : best) {
        arcs_.push_back(Arc{std::get<0>(key), std::get<1>(key), std::get<2>(key), w});
    }
}

StaticGraph StaticGraph::from_matrices(const ShiftedMatrices& m) {
    m.validate();
    const std::size_t n = m.n();
    std::vector<Arc> arcs;
    for (int s = -1; s <= 1; ++s) {
        const auto& ms = m.by_shift(s);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                if (ms(j, i).is_finite()) {
                    arcs.push_back(Arc{i + 1, j + 1, s, ms(j, i).value()});
                }
            }
        }
    }
    return StaticGraph(n, std::move(arcs));
}

std::vector<Arc> StaticGraph::out_arcs(std::size_t node) const {
    std::vector<Arc> out;
    for (const auto& e : arcs_) {
        if (e.source == node) {
            out.push_back(e);
        }
    }
    std::sort(out.begin(), out.end(), [](const Arc& a, const Arc& b) {
        return std::tie(a.target, a.shift) < std::tie(b.target, b.shift);
    });
    return out;
}

std::optional<Arc> StaticGraph::find_arc(std::size_t source, std::size_t target, int shift) const {
    for (const auto& e : arcs_) {
        if (e.source == source && e.target == target && e.shift == shift) {
            return e;
        }
    }
    return std::nullopt;
}

ShiftedMatrices StaticGraph::to_matrices() const {
    ShiftedMatrices m{TropicalMatrix(n_, n_), TropicalMatrix(n_, n_), TropicalMatrix(n_, n_)};
    for (const auto& e : arcs_) {
        m.by_shift(e.shift)(e.target - 1, e.source - 1) = ExtendedRational(e.weight);
    }
    return m;
}

std::string StaticGraph::to_dot() const {
    std::ostringstream os;
    os << "digraph static_graph {\n";
    for (std::size_t i = 1; i <= n_; ++i) {
        os << "  " << i << ";\n";
    }
    for (const auto& e : arcs_) {
        os << "  " << e.source << " -> " << e.target << " [label=\"" << e.shift << ","
           << to_string(e.weight) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

BooleanMatrix reachability_closure(const StaticGraph& g) {
    const std::size_t n = g.node_count();
    BooleanMatrix h(n);
    for (std::size_t i = 1; i <= n; ++i) {
        h.set(i, i, true);
    }
    for (const auto& e : g.arcs()) {
        h.set(e.target, e.source, true);
    }
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t i = 1; i <= n; ++i) {
            if (!h(i, k)) {
                continue;
            }
            for (std::size_t j = 1; j <= n; ++j) {
                if (h(k, j)) {
                    h.set(i, j, true);
                }
            }
        }
    }
    return h;
}

std::optional<Path> shortest_hop_path(const StaticGraph& g, std::size_t from, std::size_t to) {
    const std::size_t n = g.node_count();
    std::vector<std::optional<Arc>> parent(n + 1);
    std::vector<unsigned char> seen(n + 1, 0);
    std::deque<std::size_t> queue{from};
    seen[from] = 1;
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        if (v == to) {
            break;
        }
        for (const auto& e : g.out_arcs(v)) {
            if (!seen[e.target]) {
                seen[e.target] = 1;
                parent[e.target] = e;
                queue.push_back(e.target);
            }
        }
    }
    if (!seen[to]) {
        return std::nullopt;
    }
    Path p{from, {}};
    for (std::size_t v = to; v != from; v = parent[v]->source) {
        p.arcs.push_back(*parent[v]);
    }
    std::reverse(p.arcs.begin(), p.arcs.end());
    return p;
}

}  // namespace ptime
