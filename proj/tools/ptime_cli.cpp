// ptime: command-line front end. JSON in, JSON out; exit 0 = ok/consistent,
// 1 = inconsistent/violations/disagreement, 2 = error (JSON object on stderr).

#include "ptime/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace {

using ptime::io::Json;

struct Options {
    std::string input = "-";
    std::string output = "-";
    std::string trajectory;
    std::size_t horizon = 10;
    std::optional<long> radius;
    std::optional<long> depth;
    std::uint64_t seed = 1;
    std::size_t n = 2;
    double density = 0.5;
    long range = 10;
    unsigned marking_max = 1;
    bool exhaustive = false;
};

std::string slurp(const std::string& path) {
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Json read_json(const std::string& path) { return Json::parse(slurp(path)); }

void emit(const Options& o, const std::string& text) {
    if (o.output == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(o.output, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + o.output + "'");
    }
    out << text;
}

void emit(const Options& o, const Json& doc) { emit(o, doc.dump(2) + "\n"); }

ptime::ShiftedMatrices matrices_of(const Json& doc) {
    if (ptime::io::is_matrix_document(doc)) {
        return ptime::io::read_matrices(doc);
    }
    auto net = ptime::normalize_marking(ptime::io::read_net(doc));
    return ptime::characteristic_to_m(ptime::to_characteristic(net));
}

ptime::SliceSpec slice_of(const Options& o, std::size_t n) {
    if (o.depth) {
        return ptime::SliceSpec::natural(n, *o.depth);
    }
    return ptime::SliceSpec::symmetric(n, o.radius.value_or(static_cast<long>(n)));
}

int cmd_check(const Options& o) {
    Json doc = read_json(o.input);
    if (ptime::io::is_matrix_document(doc)) {
        auto analysis = ptime::analyze_infinite_weight(ptime::io::read_matrices(doc), o.exhaustive);
        emit(o, ptime::io::write_analysis(analysis, o.exhaustive));
        return std::holds_alternative<ptime::NoInfinitePath>(analysis.verdict) ? 0 : 1;
    }
    auto verdict = ptime::check_consistency(ptime::io::read_net(doc), o.horizon);
    Json out = ptime::io::write_consistency(verdict);
    if (o.exhaustive) {
        auto m = ptime::characteristic_to_m(ptime::to_characteristic(verdict.normalized));
        out["all_pairs"] = ptime::io::write_analysis(ptime::analyze_infinite_weight(m, true), true)["all_pairs"];
    }
    emit(o, out);
    return verdict.consistent() ? 0 : 1;
}

int cmd_star(const Options& o) {
    auto m = matrices_of(read_json(o.input));
    auto spec = slice_of(o, m.n());
    auto star = ptime::kleene_star(ptime::build_slice(ptime::StaticGraph::from_matrices(m), spec));
    Json out = ptime::io::write_star(star.star, ptime::NodeIndexMap(spec));
    out["positive_circuit"] = star.has_positive_circuit();
    emit(o, out);
    return 0;
}

int cmd_witness(const Options& o) {
    Json doc = read_json(o.input);
    if (ptime::io::is_matrix_document(doc)) {
        emit(o, ptime::io::write_trajectory(ptime::witness_prefix(ptime::io::read_matrices(doc), o.horizon)));
        return 0;
    }
    auto verdict = ptime::check_consistency(ptime::io::read_net(doc), o.horizon);
    if (!verdict.witness) {
        throw std::invalid_argument("net is inconsistent; no witness exists");
    }
    emit(o, ptime::io::write_trajectory(*verdict.witness));
    return 0;
}

int cmd_validate(const Options& o) {
    auto net = ptime::io::read_net(read_json(o.input));
    auto t = ptime::io::read_trajectory(read_json(o.trajectory));
    auto violations = ptime::validate_trajectory(net, t);
    emit(o, Json{{"horizon", t.horizon()},
                 {"violation_count", violations.size()},
                 {"violations", ptime::io::write_violations(violations)}});
    return violations.empty() ? 0 : 1;
}

int cmd_oracle_compare(const Options& o, bool generated) {
    ptime::ShiftedMatrices m;
    if (generated) {
        auto net = ptime::random_instance(o.seed, o.n, o.density, o.range, o.marking_max);
        m = ptime::characteristic_to_m(ptime::to_characteristic(ptime::normalize_marking(net)));
    } else {
        m = matrices_of(read_json(o.input));
    }
    auto algorithm = ptime::detect_infinite_weight(m);
    auto oracle = ptime::brute_infinite_weight(m);
    bool agree = ptime::verdict_class(algorithm) == ptime::verdict_class(oracle.verdict);
    emit(o, Json{{"algorithm", ptime::verdict_class(algorithm)},
                 {"oracle", ptime::verdict_class(oracle.verdict)},
                 {"agree", agree},
                 {"algorithm_certificate", ptime::io::write_certificate(algorithm)},
                 {"oracle_certificate", ptime::io::write_certificate(oracle.verdict)}});
    return agree ? 0 : 1;
}

int cmd_gen(const Options& o) {
    emit(o, ptime::io::write_net(ptime::random_instance(o.seed, o.n, o.density, o.range, o.marking_max)));
    return 0;
}

int cmd_export_dot(const Options& o) {
    auto g = ptime::StaticGraph::from_matrices(matrices_of(read_json(o.input)));
    if (o.radius || o.depth) {
        emit(o, ptime::slice_to_dot(g, slice_of(o, g.node_count())));
    } else {
        emit(o, g.to_dot());
    }
    return 0;
}

int fail(const std::string& message) {
    std::cerr << Json{{"error", message}}.dump() << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Consistency analysis for P-time event graphs"};
    app.require_subcommand(1);
    Options o;

    auto io_flags = [&o](CLI::App* cmd) {
        cmd->add_option("-i,--input", o.input, "input JSON file ('-' for stdin)");
        cmd->add_option("-o,--output", o.output, "output file ('-' for stdout)");
    };
    auto slice_flags = [&o](CLI::App* cmd) {
        auto* r = cmd->add_option("--radius", o.radius, "symmetric slice [-r, r]");
        auto* d = cmd->add_option("--depth", o.depth, "natural slice [1, K]");
        r->excludes(d);
    };
    auto gen_flags = [&o](CLI::App* cmd) {
        cmd->add_option("--seed", o.seed, "generator seed");
        cmd->add_option("--n", o.n, "transition count")->check(CLI::PositiveNumber);
        cmd->add_option("--density", o.density, "place probability per ordered pair")->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--range", o.range, "bounds lie in [0, range]")->check(CLI::NonNegativeNumber);
        cmd->add_option("--marking-max", o.marking_max, "largest initial marking");
    };

    auto* check = app.add_subcommand("check", "decide consistency (net) or infinite-weight paths (matrices)");
    io_flags(check);
    check->add_option("--horizon", o.horizon, "witness length")->check(CLI::PositiveNumber);
    check->add_flag("--exhaustive", o.exhaustive, "list every pumpable pair");

    auto* star = app.add_subcommand("star", "Kleene star of a slice");
    io_flags(star);
    slice_flags(star);

    auto* witness = app.add_subcommand("witness", "finite trajectory prefix of a consistent instance");
    io_flags(witness);
    witness->add_option("--horizon", o.horizon, "witness length")->check(CLI::PositiveNumber);

    auto* validate = app.add_subcommand("validate", "check a trajectory against a net");
    io_flags(validate);
    validate->add_option("--trajectory", o.trajectory, "trajectory JSON file")->required();

    auto* compare = app.add_subcommand("oracle-compare", "cross-check detection against the brute-force oracle");
    io_flags(compare);
    gen_flags(compare);
    auto* generate = compare->add_flag("--generate", "use a generated instance instead of --input");

    auto* gen = app.add_subcommand("gen", "random net");
    gen->add_option("-o,--output", o.output, "output file ('-' for stdout)");
    gen_flags(gen);

    auto* dot = app.add_subcommand("export-dot", "Graphviz export of the static graph or a slice");
    io_flags(dot);
    slice_flags(dot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(e.what());
    }

    try {
        if (*check) {
            return cmd_check(o);
        }
        if (*star) {
            return cmd_star(o);
        }
        if (*witness) {
            return cmd_witness(o);
        }
        if (*validate) {
            return cmd_validate(o);
        }
        if (*compare) {
            return cmd_oracle_compare(o, generate->count() > 0);
        }
        if (*gen) {
            return cmd_gen(o);
        }
        return cmd_export_dot(o);
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}
