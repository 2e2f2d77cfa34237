#pragma once

#include "ptime/periodic.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptime {

/// Place of a P-time event graph: one upstream and one downstream transition,
/// an initial marking and a residence-time window [lower, upper].
struct Place {
    std::string from;
    std::string to;
    unsigned marking = 0;
    Rational lower = 0;
    ExtendedRational upper = ExtendedRational::pos_inf();

    friend bool operator==(const Place&, const Place&) = default;
};

/// Raised when parallel places with the same endpoints and marking leave an
/// empty window after intersection.
class InfeasiblePlacePair : public std::invalid_argument {
public:
    InfeasiblePlacePair(std::size_t first, std::size_t second, const std::string& what)
        : std::invalid_argument(what), first_(first), second_(second) {}
    /// 1-based place indices.
    std::size_t first() const { return first_; }
    std::size_t second() const { return second_; }

private:
    std::size_t first_;
    std::size_t second_;
};

class PTimeEventGraph {
public:
    PTimeEventGraph() = default;
    /// Throws std::invalid_argument for unknown or duplicate transition names,
    /// negative lower bounds or an upper bound of -inf. A single place with
    /// lower > upper is accepted; it makes the net inconsistent.
    PTimeEventGraph(std::vector<std::string> transitions, std::vector<Place> places);

    const std::vector<std::string>& transitions() const { return transitions_; }
    const std::vector<Place>& places() const { return places_; }
    std::size_t transition_count() const { return transitions_.size(); }
    /// 1-based index of a transition.
    std::size_t index_of(const std::string& name) const;
    bool markings_at_most_one() const;

    friend bool operator==(const PTimeEventGraph&, const PTimeEventGraph&) = default;

private:
    std::vector<std::string> transitions_;
    std::vector<Place> places_;
};

/// Replaces every place with m >= 2 tokens by a chain of m single-token places
/// through m - 1 fresh transitions appended after the original ones. The
/// place entering the downstream transition keeps [lower, upper]; the others
/// get [0, 0].
PTimeEventGraph normalize_marking(const PTimeEventGraph& net);

/// A^mu, B^mu: entry (i, j) holds the window of the place t_j -> t_i with
/// marking mu (A = -inf, B = +inf where there is none).
struct CharacteristicMatrices {
    TropicalMatrix a0;
    TropicalMatrix a1;
    TropicalMatrix b0;
    TropicalMatrix b1;
};

/// Throws std::invalid_argument for markings above one and
/// InfeasiblePlacePair when two or more parallel places have an empty
/// intersection.
CharacteristicMatrices to_characteristic(const PTimeEventGraph& net);

/// (M0)_ij = max(A0_ij, -B0_ji), (M+1)_ij = A1_ij off the diagonal and
/// max(0, A1_ii) on it, (M-1)_ij = -B1_ji.
ShiftedMatrices characteristic_to_m(const CharacteristicMatrices& cm);

/// Firing times x(1), ..., x(K), each of dimension n.
struct Trajectory {
    std::vector<std::vector<Rational>> x;

    std::size_t horizon() const { return x.size(); }
    std::size_t dimension() const { return x.empty() ? 0 : x.front().size(); }
};

/// One violated inequality lhs <= rhs; slack = rhs - lhs < 0.
struct Violation {
    enum class Kind { PlaceLower, PlaceUpper, Nondecreasing };
    Kind kind = Kind::Nondecreasing;
    std::optional<std::size_t> place;  // 1-based, absent for nondecreasingness
    std::size_t i = 0;                 // downstream transition, 1-based
    std::size_t j = 0;                 // upstream transition, 1-based
    unsigned mu = 0;
    std::size_t k = 0;
    Rational lhs;
    Rational rhs;
    Rational slack;
};

/// Checks A + x_j(k) <= x_i(k+mu) <= B + x_j(k) for every place and
/// x_i(k) <= x_i(k+1), for all k with k + mu <= K.
std::vector<Violation> validate_trajectory(const PTimeEventGraph& net, const Trajectory& t);

/// Number of violated inequalities of x(k) >= M-1 x(k+1), x(k) >= M0 x(k),
/// x(k+1) >= M+1 x(k) within the horizon.
std::size_t m_form_violations(const ShiftedMatrices& m, const Trajectory& t);

/// Finite prefix of a consistent trajectory built from the Kleene star of a
/// natural slice of depth K + n + 2 (doubled on failed self-check).
/// Throws std::invalid_argument when the graph has an infinite-weight path.
Trajectory witness_prefix(const ShiftedMatrices& m, std::size_t horizon);

struct ConsistencyVerdict {
    PTimeEventGraph normalized;
    InfWeightVerdict certificate;
    /// Present iff consistent; validated over `normalized` at the horizon.
    std::optional<Trajectory> witness;

    bool consistent() const { return std::holds_alternative<NoInfinitePath>(certificate); }
};

ConsistencyVerdict check_consistency(const PTimeEventGraph& net, std::size_t horizon = 10);

namespace detail {
Trajectory build_witness(const ShiftedMatrices& m, std::size_t horizon);
}

}  // namespace ptime
