#include "ptime/maxplus.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace ptime {

TropicalMatrix::TropicalMatrix(std::size_t rows, std::size_t cols, const ExtendedRational& fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

TropicalMatrix TropicalMatrix::identity(std::size_t n) {
    TropicalMatrix e(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        e(i, i) = ExtendedRational::zero();
    }
    return e;
}

TropicalMatrix TropicalMatrix::block(std::size_t r0, std::size_t c0, std::size_t count_r,
                                     std::size_t count_c) const {
    if (r0 + count_r > rows_ || c0 + count_c > cols_) {
        throw std::out_of_range("block outside matrix");
    }
    TropicalMatrix out(count_r, count_c);
    for (std::size_t r = 0; r < count_r; ++r) {
        for (std::size_t c = 0; c < count_c; ++c) {
            out(r, c) = (*this)(r0 + r, c0 + c);
        }
    }
    return out;
}

bool TropicalMatrix::contains_pos_inf() const {
    return std::any_of(entries_.begin(), entries_.end(), [](const auto& x) { return x.is_pos_inf(); });
}

TropicalMatrix mat_oplus(const TropicalMatrix& a, const TropicalMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("mat_oplus: dimension mismatch");
    }
    TropicalMatrix out(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            out(r, c) = oplus(a(r, c), b(r, c));
        }
    }
    return out;
}

TropicalMatrix mat_otimes(const TropicalMatrix& a, const TropicalMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("mat_otimes: dimension mismatch");
    }
    TropicalMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(r, k).is_neg_inf()) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols(); ++c) {
                out(r, c) = oplus(out(r, c), otimes(a(r, k), b(k, c)));
            }
        }
    }
    return out;
}

Vector mat_vec(const TropicalMatrix& a, std::span<const ExtendedRational> v) {
    if (a.cols() != v.size()) {
        throw std::invalid_argument("mat_vec: dimension mismatch");
    }
    Vector out(a.rows(), ExtendedRational::neg_inf());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            out[r] = oplus(out[r], otimes(a(r, c), v[c]));
        }
    }
    return out;
}

namespace {

inline void add_into(std::int64_t& out, std::int64_t a, std::int64_t b) { out = a + b; }
inline void add_into(Rational& out, const Rational& a, const Rational& b) {
    mpq_add(out.get_mpq_t(), a.get_mpq_t(), b.get_mpq_t());
}
inline bool positive(std::int64_t x) { return x > 0; }
inline bool positive(const Rational& x) { return sgn(x) > 0; }

// In-place Floyd–Warshall over Q_max. d[i*n + j] is the best weight of a path
// j -> i; fin marks the entries that are not -inf.
template <class W>
struct Kernel {
    std::size_t n = 0;
    std::vector<W> d;
    std::vector<unsigned char> fin;
    std::vector<int> via;

    std::optional<std::size_t> positive_diagonal() const {
        for (std::size_t i = 0; i < n; ++i) {
            if (fin[i * n + i] && positive(d[i * n + i])) {
                return i;
            }
        }
        return std::nullopt;
    }

    // Stops at the first round that produces a positive diagonal entry and
    // returns that node.
    std::optional<std::size_t> run() {
        if (auto v = positive_diagonal()) {
            return v;
        }
        W cand{};
        for (std::size_t k = 0; k < n; ++k) {
            const W* rowk = d.data() + k * n;
            const unsigned char* fink = fin.data() + k * n;
            for (std::size_t i = 0; i < n; ++i) {
                if (!fin[i * n + k]) {
                    continue;
                }
                // d[i][k] cannot change during round k while d[k][k] <= 0.
                const W& dik = d[i * n + k];
                W* rowi = d.data() + i * n;
                unsigned char* fini = fin.data() + i * n;
                int* viai = via.data() + i * n;
                for (std::size_t j = 0; j < n; ++j) {
                    if (!fink[j]) {
                        continue;
                    }
                    add_into(cand, dik, rowk[j]);
                    if (!fini[j] || cand > rowi[j]) {
                        rowi[j] = cand;
                        fini[j] = 1;
                        viai[j] = static_cast<int>(k);
                    }
                }
            }
            if (auto v = positive_diagonal()) {
                return v;
            }
        }
        return std::nullopt;
    }
};

struct Closure {
    TropicalMatrix d;
    std::vector<int> via;
    std::optional<std::size_t> positive_at;
};

template <class W, class Load, class Store>
Closure close_with(const TropicalMatrix& a, Load load, Store store) {
    const std::size_t n = a.rows();
    Kernel<W> k;
    k.n = n;
    k.d.assign(n * n, W{});
    k.fin.assign(n * n, 0);
    k.via.assign(n * n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (a(i, j).is_finite()) {
                k.d[i * n + j] = load(a(i, j).value());
                k.fin[i * n + j] = 1;
            }
        }
    }
    Closure out;
    out.positive_at = k.run();
    out.d = TropicalMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (k.fin[i * n + j]) {
                out.d(i, j) = ExtendedRational(store(k.d[i * n + j]));
            }
        }
    }
    out.via = std::move(k.via);
    return out;
}

// Chooses the int64 kernel when every weight scaled by the common
// denominator, times 2(n+1), stays below 2^62; path weights handled by the
// kernel before exit are sums of at most n arcs.
Closure close(const TropicalMatrix& a) {
    const std::size_t n = a.rows();
    mpz_class lcm = 1;
    for (const auto& x : a.entries()) {
        if (x.is_finite()) {
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.value().get_den_mpz_t());
        }
    }
    mpz_class max_abs = 0;
    for (const auto& x : a.entries()) {
        if (x.is_finite()) {
            mpz_class scaled = abs(x.value().get_num() * (lcm / x.value().get_den()));
            if (scaled > max_abs) {
                max_abs = scaled;
            }
        }
    }
    mpz_class bound = max_abs * 2 * static_cast<unsigned long>(n + 1);
    mpz_class limit;
    mpz_ui_pow_ui(limit.get_mpz_t(), 2, 62);
    if (bound < limit) {
        return close_with<std::int64_t>(
            a,
            [&](const Rational& q) {
                mpz_class s = q.get_num() * (lcm / q.get_den());
                return static_cast<std::int64_t>(s.get_si());
            },
            [&](std::int64_t v) { return Rational(mpz_class(static_cast<long>(v)), lcm); });
    }
    return close_with<Rational>(a, [](const Rational& q) { return q; },
                                [](const Rational& q) { return q; });
}

// Appends the inner nodes of the recorded path j -> i (exclusive of both).
bool expand_path(const std::vector<int>& via, std::size_t n, std::size_t i, std::size_t j,
                 std::vector<std::size_t>& out) {
    // Explicit stack of (target, source) segments; a budget guards against
    // inconsistent via entries.
    std::vector<std::pair<std::size_t, std::size_t>> stack{{i, j}};
    std::size_t budget = 4 * n * n + 16;
    std::vector<std::size_t> reversed;
    // Process segments left to right: we emit nodes in path order by pushing
    // the right half first.
    while (!stack.empty()) {
        if (budget-- == 0) {
            return false;
        }
        auto [ti, sj] = stack.back();
        stack.pop_back();
        if (ti == static_cast<std::size_t>(-1)) {
            out.push_back(sj);
            continue;
        }
        int k = via[ti * n + sj];
        if (k < 0) {
            continue;
        }
        auto ks = static_cast<std::size_t>(k);
        stack.emplace_back(ti, ks);                          // k -> i, after k
        stack.emplace_back(static_cast<std::size_t>(-1), ks);  // emit k
        stack.emplace_back(ks, sj);                          // j -> k, first
    }
    return true;
}

// Reduces a positive closed walk to one positive elementary circuit.
std::vector<std::size_t> elementary_positive(const TropicalMatrix& a, std::vector<std::size_t> walk) {
    // walk = v0 v1 ... v_{m-1} with implicit arc v_{m-1} -> v0.
    walk.push_back(walk.front());
    std::vector<std::size_t> stack;
    std::vector<long> pos(a.rows(), -1);
    for (std::size_t v : walk) {
        if (pos[v] >= 0) {
            auto start = static_cast<std::size_t>(pos[v]);
            std::vector<std::size_t> cycle(stack.begin() + static_cast<long>(start), stack.end());
            Rational w = 0;
            for (std::size_t t = 0; t < cycle.size(); ++t) {
                std::size_t from = cycle[t];
                std::size_t to = t + 1 < cycle.size() ? cycle[t + 1] : v;
                w += a(to, from).value();
            }
            if (sgn(w) > 0) {
                return cycle;
            }
            for (std::size_t t = start + 1; t < stack.size(); ++t) {
                pos[stack[t]] = -1;
            }
            stack.resize(start + 1);
        } else {
            pos[v] = static_cast<long>(stack.size());
            stack.push_back(v);
        }
    }
    throw std::logic_error("kleene_star: closed walk has no positive elementary circuit");
}

// Tarjan's strongly connected components, iterative.
std::vector<std::vector<std::size_t>> strong_components(const TropicalMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<std::vector<std::size_t>> succ(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (a(i, j).is_finite()) {
                succ[j].push_back(i);
            }
        }
    }
    std::vector<long> index(n, -1), low(n, 0);
    std::vector<unsigned char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> comps;
    long counter = 0;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] >= 0) {
            continue;
        }
        std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, next] = call.back();
            if (next < succ[v].size()) {
                std::size_t w = succ[v][next++];
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                } while (w != v);
                comps.push_back(std::move(comp));
            }
            std::size_t done = v;
            call.pop_back();
            if (!call.empty()) {
                low[call.back().first] = std::min(low[call.back().first], low[done]);
            }
        }
    }
    return comps;
}

// reach[v] = bitset of nodes reachable from v (reflexive).
std::vector<std::vector<std::uint64_t>> reachability(const TropicalMatrix& a) {
    const std::size_t n = a.rows();
    const std::size_t words = (n + 63) / 64;
    std::vector<std::vector<std::uint64_t>> reach(n, std::vector<std::uint64_t>(words, 0));
    for (std::size_t v = 0; v < n; ++v) {
        reach[v][v / 64] |= std::uint64_t{1} << (v % 64);
        for (std::size_t i = 0; i < n; ++i) {
            if (a(i, v).is_finite()) {
                reach[v][i / 64] |= std::uint64_t{1} << (i % 64);
            }
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t v = 0; v < n; ++v) {
            if (reach[v][k / 64] >> (k % 64) & 1U) {
                for (std::size_t w = 0; w < words; ++w) {
                    reach[v][w] |= reach[k][w];
                }
            }
        }
    }
    return reach;
}

}  // namespace

std::optional<std::vector<std::size_t>> StarResult::longest_path(std::size_t from, std::size_t to) const {
    const std::size_t n = star.rows();
    if (from >= n || to >= n) {
        throw std::out_of_range("longest_path: node out of range");
    }
    if (has_positive_circuit()) {
        throw std::logic_error("longest_path: closure contains a positive circuit");
    }
    if (from == to) {
        return std::vector<std::size_t>{from};
    }
    if (plus(to, from).is_neg_inf()) {
        return std::nullopt;
    }
    std::vector<std::size_t> nodes{from};
    if (!expand_path(via, n, to, from, nodes)) {
        throw std::logic_error("longest_path: inconsistent closure record");
    }
    nodes.push_back(to);
    return nodes;
}

StarResult kleene_star(const TropicalMatrix& a) {
    if (!a.is_square()) {
        throw std::invalid_argument("kleene_star: matrix is not square");
    }
    if (a.contains_pos_inf()) {
        throw std::invalid_argument("kleene_star: +inf entry in input");
    }
    const std::size_t n = a.rows();
    Closure full = close(a);
    StarResult result;
    if (!full.positive_at) {
        result.plus = full.d;
        result.star = mat_oplus(full.d, TropicalMatrix::identity(n));
        result.via = std::move(full.via);
        return result;
    }

    std::size_t v = *full.positive_at;
    std::vector<std::size_t> walk{v};
    if (!expand_path(full.via, n, v, v, walk)) {
        throw std::logic_error("kleene_star: could not rebuild positive circuit");
    }
    result.positive_circuit = elementary_positive(a, std::move(walk));

    std::vector<unsigned char> in_positive(n, 0);
    for (const auto& comp : strong_components(a)) {
        bool cyclic = comp.size() > 1 || a(comp[0], comp[0]).is_finite();
        if (!cyclic) {
            continue;
        }
        TropicalMatrix sub(comp.size(), comp.size());
        for (std::size_t r = 0; r < comp.size(); ++r) {
            for (std::size_t c = 0; c < comp.size(); ++c) {
                sub(r, c) = a(comp[r], comp[c]);
            }
        }
        if (close(sub).positive_at) {
            for (std::size_t u : comp) {
                in_positive[u] = 1;
            }
        }
    }
    for (std::size_t u = 0; u < n; ++u) {
        if (in_positive[u]) {
            result.positive_circuit_nodes.push_back(u);
        }
    }

    TropicalMatrix pruned = a;
    for (std::size_t u : result.positive_circuit_nodes) {
        for (std::size_t t = 0; t < n; ++t) {
            pruned(u, t) = ExtendedRational::neg_inf();
            pruned(t, u) = ExtendedRational::neg_inf();
        }
    }
    Closure rest = close(pruned);
    if (rest.positive_at) {
        throw std::logic_error("kleene_star: positive circuit outside marked components");
    }

    auto reach = reachability(a);
    const std::size_t words = (n + 63) / 64;
    result.plus = rest.d;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::uint64_t> through(words, 0);
        for (std::size_t c : result.positive_circuit_nodes) {
            if (reach[j][c / 64] >> (c % 64) & 1U) {
                for (std::size_t w = 0; w < words; ++w) {
                    through[w] |= reach[c][w];
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (through[i / 64] >> (i % 64) & 1U) {
                result.plus(i, j) = ExtendedRational::pos_inf();
            }
        }
    }
    result.star = mat_oplus(result.plus, TropicalMatrix::identity(n));
    result.via = std::move(rest.via);
    return result;
}

}  // namespace ptime
