#include "ptime/io.hpp"

namespace ptime::io {

namespace {

const Json& field(const Json& doc, const char* name) {
    if (!doc.is_object() || !doc.contains(name)) {
        throw FormatError(std::string("missing field '") + name + "'");
    }
    return doc.at(name);
}

TropicalMatrix read_square(const Json& rows, std::size_t n, const std::string& name) {
    if (!rows.is_array() || rows.size() != n) {
        throw FormatError("'" + name + "' must have " + std::to_string(n) + " rows");
    }
    TropicalMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n) {
            throw FormatError("'" + name + "' row " + std::to_string(i + 1) + " must have " +
                              std::to_string(n) + " entries");
        }
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = read_extended(rows[i][j], name);
        }
    }
    return a;
}

Json write_arc(const Arc& e) {
    return Json{{"from", e.source}, {"to", e.target}, {"shift", e.shift}, {"weight", write(e.weight)}};
}

Json write_pair(const PumpablePair& p) {
    return Json{{"i1", p.i1}, {"s1", p.s1}, {"w1", write(p.w1)}, {"i2", p.i2},
                {"s2", p.s2}, {"w2", write(p.w2)}, {"value", write(p.value())}};
}

}  // namespace

ExtendedRational read_extended(const Json& v, const std::string& name) {
    if (v.is_string()) {
        try {
            return ExtendedRational::parse(v.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw FormatError("'" + name + "': " + e.what());
        }
    }
    if (v.is_number_integer()) {
        return v.is_number_unsigned() ? ExtendedRational(Rational(std::to_string(v.get<std::uint64_t>())))
                                      : ExtendedRational(Rational(std::to_string(v.get<std::int64_t>())));
    }
    throw FormatError("'" + name + "' must be a rational string or an integer");
}

Rational read_rational(const Json& v, const std::string& name) {
    ExtendedRational x = read_extended(v, name);
    if (!x.is_finite()) {
        throw FormatError("'" + name + "' must be finite");
    }
    return x.value();
}

PTimeEventGraph read_net(const Json& doc) {
    const Json& ts = field(doc, "transitions");
    const Json& ps = field(doc, "places");
    if (!ts.is_array() || !ps.is_array()) {
        throw FormatError("'transitions' and 'places' must be arrays");
    }
    std::vector<std::string> names;
    for (const auto& t : ts) {
        if (!t.is_string()) {
            throw FormatError("transition names must be strings");
        }
        names.push_back(t.get<std::string>());
    }
    std::vector<Place> places;
    for (const auto& p : ps) {
        Place pl;
        const Json& from = field(p, "from");
        const Json& to = field(p, "to");
        if (!from.is_string() || !to.is_string()) {
            throw FormatError("place endpoints must be transition names");
        }
        pl.from = from.get<std::string>();
        pl.to = to.get<std::string>();
        const Json& marking = field(p, "marking");
        if (!marking.is_number_unsigned() && !(marking.is_number_integer() && marking.get<std::int64_t>() >= 0)) {
            throw FormatError("'marking' must be a non-negative integer");
        }
        pl.marking = marking.get<unsigned>();
        pl.lower = read_rational(field(p, "lower"), "lower");
        const Json& upper = field(p, "upper");
        pl.upper = upper.is_null() ? ExtendedRational::pos_inf() : read_extended(upper, "upper");
        places.push_back(std::move(pl));
    }
    return PTimeEventGraph(std::move(names), std::move(places));
}

bool is_matrix_document(const Json& doc) { return doc.is_object() && doc.contains("M_zero"); }

ShiftedMatrices read_matrices(const Json& doc) {
    const Json& nj = field(doc, "n");
    if (!nj.is_number_unsigned() && !(nj.is_number_integer() && nj.get<std::int64_t>() >= 0)) {
        throw FormatError("'n' must be a non-negative integer");
    }
    auto n = nj.get<std::size_t>();
    ShiftedMatrices m{read_square(field(doc, "M_minus"), n, "M_minus"),
                      read_square(field(doc, "M_zero"), n, "M_zero"),
                      read_square(field(doc, "M_plus"), n, "M_plus")};
    m.validate();
    return m;
}

Trajectory read_trajectory(const Json& doc) {
    const Json& rows = doc.is_object() ? field(doc, "x") : doc;
    if (!rows.is_array()) {
        throw FormatError("trajectory must be an array of firing-time vectors");
    }
    Trajectory t;
    for (const auto& row : rows) {
        if (!row.is_array()) {
            throw FormatError("trajectory rows must be arrays");
        }
        std::vector<Rational> xk;
        for (const auto& v : row) {
            xk.push_back(read_rational(v, "x"));
        }
        if (!t.x.empty() && xk.size() != t.x.front().size()) {
            throw FormatError("trajectory rows differ in length");
        }
        t.x.push_back(std::move(xk));
    }
    return t;
}

Json write(const ExtendedRational& x) { return x.str(); }
Json write(const Rational& x) { return to_string(x); }

Json write_net(const PTimeEventGraph& net) {
    Json places = Json::array();
    for (const auto& p : net.places()) {
        places.push_back(Json{{"from", p.from},
                              {"to", p.to},
                              {"marking", p.marking},
                              {"lower", write(p.lower)},
                              {"upper", p.upper.is_pos_inf() ? Json(nullptr) : write(p.upper)}});
    }
    return Json{{"transitions", net.transitions()}, {"places", std::move(places)}};
}

Json write_matrix(const TropicalMatrix& a) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < a.cols(); ++j) {
            row.push_back(write(a(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json write_matrices(const ShiftedMatrices& m) {
    return Json{{"n", m.n()},
                {"M_minus", write_matrix(m.minus)},
                {"M_zero", write_matrix(m.zero)},
                {"M_plus", write_matrix(m.plus)}};
}

Json write_trajectory(const Trajectory& t) {
    Json rows = Json::array();
    for (const auto& xk : t.x) {
        Json row = Json::array();
        for (const auto& v : xk) {
            row.push_back(write(v));
        }
        rows.push_back(std::move(row));
    }
    return Json{{"horizon", t.horizon()}, {"x", std::move(rows)}};
}

Json write_path(const Path& p) {
    Json arcs = Json::array();
    for (const auto& e : p.arcs) {
        arcs.push_back(write_arc(e));
    }
    return Json{{"start", p.anchor},
                {"shift", path_shift(p)},
                {"weight", write(path_weight(p))},
                {"arcs", std::move(arcs)}};
}

Json write_star(const TropicalMatrix& star, const NodeIndexMap& map) {
    Json labels = Json::array();
    for (std::size_t v = 1; v <= star.rows(); ++v) {
        labels.push_back(map.label(v));
    }
    return Json{{"labels", std::move(labels)}, {"star", write_matrix(star)}};
}

Json write_violations(const std::vector<Violation>& violations) {
    Json out = Json::array();
    for (const auto& v : violations) {
        const char* kind = v.kind == Violation::Kind::PlaceLower   ? "place_lower"
                           : v.kind == Violation::Kind::PlaceUpper ? "place_upper"
                                                                   : "nondecreasing";
        out.push_back(Json{{"kind", kind},
                           {"place", v.place ? Json(*v.place) : Json(nullptr)},
                           {"i", v.i},
                           {"j", v.j},
                           {"mu", v.mu},
                           {"k", v.k},
                           {"lhs", write(v.lhs)},
                           {"rhs", write(v.rhs)},
                           {"slack", write(v.slack)}});
    }
    return out;
}

Json write_feasibility(const FeasibilityReport& r) {
    Json out{{"horizon", r.horizon}, {"feasible", r.feasible}};
    if (r.witness) {
        out["witness"] = write_trajectory(*r.witness);
    }
    if (r.blocking_circuit) {
        Json nodes = Json::array();
        for (const auto& [i, k] : *r.blocking_circuit) {
            nodes.push_back(Json{{"i", i}, {"k", k}});
        }
        out["blocking_circuit"] = std::move(nodes);
    }
    return out;
}

Json write_certificate(const InfWeightVerdict& v, const StaticGraph* graph) {
    if (const auto* pc = std::get_if<PositiveCircuit>(&v)) {
        return Json{{"type", "positive_circuit"},
                    {"node", Json{{"i", pc->base.first}, {"k", pc->base.second}}},
                    {"weight", write(pc->weight)},
                    {"circuit", write_path(pc->circuit)}};
    }
    if (const auto* pp = std::get_if<PumpablePair>(&v)) {
        Json cert{{"type", "pumpable_pair"}};
        cert.update(write_pair(*pp));
        if (graph != nullptr) {
            PumpCertificate pumped = pump_certificate(*graph, *pp, 3);
            cert["q1"] = write_path(pumped.q1);
            cert["q2"] = write_path(pumped.q2);
            cert["connector"] = write_path(pumped.connector);
            cert["base_shift"] = pumped.base_shift;
            Json steps = Json::array();
            for (const auto& s : pumped.steps) {
                steps.push_back(Json{{"h", s.h}, {"weight", write(s.weight)}, {"shift", s.shift}, {"lshift", s.lshift}});
            }
            cert["pumping"] = std::move(steps);
        }
        return cert;
    }
    return nullptr;
}

Json write_analysis(const InfWeightAnalysis& a, bool exhaustive) {
    Json out{{"verdict", std::holds_alternative<NoInfinitePath>(a.verdict) ? "no_infinite_path" : "infinite_path"},
             {"class", verdict_class(a.verdict)},
             {"certificate", write_certificate(a.verdict, &a.graph)}};
    if (exhaustive) {
        Json pairs = Json::array();
        for (const auto& p : a.all_pairs) {
            pairs.push_back(write_pair(p));
        }
        out["all_pairs"] = std::move(pairs);
    }
    return out;
}

Json write_consistency(const ConsistencyVerdict& v) {
    std::optional<StaticGraph> graph;
    if (std::holds_alternative<PumpablePair>(v.certificate)) {
        graph = StaticGraph::from_matrices(characteristic_to_m(to_characteristic(v.normalized)));
    }
    Json out{{"verdict", v.consistent() ? "consistent" : "inconsistent"},
             {"class", verdict_class(v.certificate)},
             {"transitions", v.normalized.transitions()},
             {"certificate", write_certificate(v.certificate, graph ? &*graph : nullptr)}};
    if (v.witness) {
        Json w = write_trajectory(*v.witness);
        w["note"] = "finite prefix validated at this horizon; unbounded extension follows from the verdict";
        out["witness"] = std::move(w);
    }
    return out;
}

}  // namespace ptime::io
