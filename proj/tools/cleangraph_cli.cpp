// Command-line interface: analyze | verify | distance | matching | export |
// bench. Exit codes: 0 success, 1 formula/oracle mismatch, 2 parse error,
// 3 budget exceeded, 4 domain error, 5 I/O error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <cleangraph/cleangraph.hpp>

namespace {

using namespace cleangraph;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitParse = 2;
constexpr int kExitBudget = 3;
constexpr int kExitDomain = 4;
constexpr int kExitIo = 5;

WienerVariant parse_variant(const std::string& s) {
    if (s == "proof") return WienerVariant::proof;
    if (s == "statement") return WienerVariant::statement;
    throw std::invalid_argument("unknown variant: " + s);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

cpp_int parse_decimal(const std::string& s) {
    std::string t = trim(s);
    if (t.empty()) throw std::invalid_argument("empty number");
    for (char c : t) {
        if (c < '0' || c > '9') {
            throw std::invalid_argument("not a decimal number: " + s);
        }
    }
    return cpp_int(t);
}

// A vertex named on the command line, reduced to what the closed-form
// distance needs: the idempotent's factor-support mask and the unit element.
struct VertexParts {
    std::uint64_t mask = 0;
    RingElement unit;
};

// Accepts "(e,u)" with CRT residues, or the index form "e#i,u#j" (parens
// optional). The index form follows the canonical table orders.
VertexParts parse_vertex_literal(const FactoredRing& ring,
                                 std::optional<UnitTable>& units,
                                 const std::string& raw) {
    std::string s = trim(raw);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
        s = trim(s.substr(1, s.size() - 2));
    }
    auto parts = split(s, ',');
    if (parts.size() != 2) {
        throw std::invalid_argument("vertex literal must have two "
                                    "components: " + raw);
    }
    std::string a = trim(parts[0]), b = trim(parts[1]);
    VertexParts out;
    if (a.find('#') != std::string::npos ||
        b.find('#') != std::string::npos) {
        if (a.rfind("e#", 0) != 0 || b.rfind("u#", 0) != 0) {
            throw std::invalid_argument(
                "index-form vertex literal must look like e#i,u#j: " + raw);
        }
        cpp_int i = parse_decimal(a.substr(2));
        cpp_int j = parse_decimal(b.substr(2));
        if (i >= ring.idempotent_count_nonzero()) {
            throw std::invalid_argument("idempotent index out of range: " +
                                        a);
        }
        if (j >= ring.phi()) {
            throw std::invalid_argument("unit index out of range: " + b);
        }
        out.mask = idempotent_index_to_mask(
            i.convert_to<std::size_t>(), ring.n());
        if (!units) units.emplace(ring);  // may throw BudgetError
        out.unit = units->unit(j.convert_to<std::size_t>());
        return out;
    }
    if (!ring.has_crt_view()) {
        throw std::invalid_argument(
            "residue vertex literals need a single-modulus ring; use the "
            "e#i,u#j index form");
    }
    cpp_int e = parse_decimal(a), u = parse_decimal(b);
    if (e >= ring.modulus() || u >= ring.modulus()) {
        throw std::invalid_argument("vertex residue out of range: " + raw);
    }
    RingElement ee = element_from_residue(ring, e);
    if (is_zero(ee) || !is_idempotent(ring, ee)) {
        throw std::invalid_argument(
            "first component is not a nonzero idempotent: " + a);
    }
    RingElement uu = element_from_residue(ring, u);
    if (!is_unit(ring, uu)) {
        throw std::invalid_argument("second component is not a unit: " + b);
    }
    out.mask = idempotent_support_mask(ring, ee);
    out.unit = std::move(uu);
    return out;
}

struct CommonArgs {
    std::string ring;
    std::string variant = "proof";
    std::uint64_t budget = kDefaultVertexBudget;
};

int cmd_analyze(const CommonArgs& args) {
    FactoredRing ring = parse_ring_spec(args.ring);
    WienerVariant variant = parse_variant(args.variant);
    std::string spec = ring.spec_string();
    const bool product = ring.n() >= 2;
    cpp_int phi = ring.phi();
    cpp_int r = ring.self_inverse_count();
    cpp_int paired = phi - r;
    cpp_int idem = ring.idempotent_count_nonzero();
    cpp_int nv = ring.vertex_count();

    std::optional<CleanGraph> graph;
    std::optional<GraphScan> scan;
    std::string skip_note;
    if (nv <= args.budget) {
        try {
            graph.emplace(build_clean_graph(ring, args.budget));
            scan.emplace(scan_graph(*graph));
        } catch (const BudgetError& e) {
            skip_note = e.what();
        }
    } else {
        skip_note = "N = " + nv.str() + " exceeds budget " +
                    std::to_string(args.budget);
    }

    int case_label =
        product ? wiener_case_label(phi, r) : 0;
    std::string wiener_formula =
        product ? wiener_closed_form(ring, variant).str() : "inf";
    std::string diam_formula = product ? ((phi == 1) ? "1" : "3") : "inf";
    std::string conn_formula = product ? "true" : "false";
    std::string matching_formula =
        product ? matching_number_closed_form(ring).str() : "";

    std::string wiener_oracle, diam_oracle, conn_oracle;
    if (scan) {
        wiener_oracle = scan->connected ? scan->wiener.str() : "inf";
        diam_oracle =
            scan->connected ? std::to_string(scan->diameter) : "inf";
        conn_oracle = scan->connected ? "true" : "false";
    }

    auto with_oracle = [&](const std::string& formula,
                           const std::string& oracle) {
        if (!scan) return formula + " (oracle skipped: " + skip_note + ")";
        std::string verdict = (formula == oracle) ? "agree" : "DISAGREE";
        return formula + " (oracle: " + oracle + ", " + verdict + ")";
    };

    std::cout << "ring               : " << spec << "\n";
    std::cout << "factorization      : ";
    for (std::size_t i = 0; i < ring.factors().size(); ++i) {
        if (i) std::cout << " * ";
        std::cout << ring.factors()[i].p << "^" << ring.factors()[i].alpha;
    }
    std::cout << "\n";
    std::cout << "local factors      : " << ring.n() << "\n";
    std::cout << "units (phi)        : " << phi.str() << "\n";
    std::cout << "self-inverse units : " << r.str() << "\n";
    std::cout << "paired units       : " << paired.str() << "\n";
    std::cout << "nonzero idempotents: " << idem.str() << "\n";
    std::cout << "vertices (N)       : " << nv.str() << "\n";
    std::cout << "case               : "
              << (case_label ? std::to_string(case_label)
                             : std::string("-"))
              << "\n";
    std::cout << "variant            : " << to_string(variant) << "\n";
    std::cout << "connected          : " << with_oracle(conn_formula,
                                                        conn_oracle)
              << "\n";
    std::cout << "diameter           : " << with_oracle(diam_formula,
                                                        diam_oracle)
              << "\n";
    std::cout << "wiener             : " << with_oracle(wiener_formula,
                                                        wiener_oracle)
              << "\n";
    std::cout << "matching number    : "
              << (product ? matching_formula
                          : std::string("undefined (single local factor)"))
              << "\n";

    nlohmann::ordered_json j;
    j["ring"] = spec;
    j["num_factors"] = ring.n();
    j["phi"] = phi.str();
    j["self_inverse_units"] = r.str();
    j["paired_units"] = paired.str();
    j["nonzero_idempotents"] = idem.str();
    j["num_vertices"] = nv.str();
    j["connected"] = nlohmann::ordered_json{{"formula", conn_formula}};
    j["diameter"] = nlohmann::ordered_json{{"formula", diam_formula}};
    if (scan) {
        j["connected"]["oracle"] = conn_oracle;
        j["diameter"]["oracle"] = diam_oracle;
    } else {
        j["connected"]["oracle"] = "skip:budget";
        j["diameter"]["oracle"] = "skip:budget";
    }
    if (scan) {
        WienerReport rep;
        rep.ring_spec = spec;
        rep.case_label = case_label;
        rep.variant = variant;
        if (product) rep.closed_form = wiener_closed_form(ring, variant);
        if (scan->connected) rep.oracle = scan->wiener;
        rep.match = (wiener_formula == wiener_oracle);
        for (std::size_t d = 1; d < 4 && d < scan->pairs_at_distance.size();
             ++d) {
            rep.pairs_at_distance[d] = scan->pairs_at_distance[d];
        }
        j["wiener"] = wiener_report_to_json(rep);
    } else {
        nlohmann::ordered_json w;
        w["ring"] = spec;
        w["case"] = case_label;
        w["variant"] = to_string(variant);
        w["closed_form"] = wiener_formula;
        w["oracle"] = "skip:budget";
        w["match"] = nullptr;
        j["wiener"] = w;
    }
    if (product) {
        j["matching_number"] = matching_formula;
    } else {
        j["matching_number"] = nullptr;
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

struct VerifyArgs {
    std::string ring;
    std::string range;
    std::string checks;
    std::string variant = "proof";
    std::uint64_t budget = kDefaultVertexBudget;
    std::uint64_t matching_budget = kDefaultMatchingBudget;
    std::string cache_path;
    std::size_t jobs = 1;
};

std::vector<CheckKind> parse_checks(const std::string& list) {
    if (trim(list).empty()) return all_checks();
    std::vector<CheckKind> out;
    for (const std::string& tok : split(list, ',')) {
        CheckKind k = parse_check(trim(tok));
        if (std::find(out.begin(), out.end(), k) == out.end()) {
            out.push_back(k);
        }
    }
    return out;
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& s) {
    std::size_t dots = s.find("..");
    if (dots == std::string::npos) {
        throw std::invalid_argument("range must look like a..b: " + s);
    }
    cpp_int a = parse_decimal(s.substr(0, dots));
    cpp_int b = parse_decimal(s.substr(dots + 2));
    if (a < 2 || b > std::numeric_limits<std::uint64_t>::max()) {
        throw std::invalid_argument("range out of bounds: " + s);
    }
    return {a.convert_to<std::uint64_t>(), b.convert_to<std::uint64_t>()};
}

int cmd_verify(const VerifyArgs& args) {
    if (args.ring.empty() == args.range.empty()) {
        throw std::invalid_argument(
            "verify needs exactly one of --ring or --range");
    }
    VerifyOptions opts;
    opts.checks = parse_checks(args.checks);
    opts.variant = parse_variant(args.variant);
    opts.budget = args.budget;
    opts.matching_budget = args.matching_budget;
    opts.jobs = args.jobs;
    std::optional<VerifyCache> cache;
    if (!args.cache_path.empty()) {
        cache.emplace(args.cache_path);
        opts.cache = &*cache;
    }
    std::vector<VerificationRecord> recs;
    if (!args.ring.empty()) {
        recs = verify_ring(parse_ring_spec(args.ring), opts);
    } else {
        auto [a, b] = parse_range(args.range);
        recs = verify_range(a, b, opts);
    }
    if (cache) cache->flush();
    write_csv(recs, std::cout);
    return all_acceptable(recs) ? kExitOk : kExitMismatch;
}

int cmd_distance(const CommonArgs& args, const std::string& from,
                 const std::string& to) {
    FactoredRing ring = parse_ring_spec(args.ring);
    std::optional<UnitTable> units;
    VertexParts a = parse_vertex_literal(ring, units, from);
    VertexParts b = parse_vertex_literal(ring, units, to);
    if (a.mask == b.mask && a.unit == b.unit) {
        std::cout << 0 << "\n";
        return kExitOk;
    }
    int d = closed_form_distance_parts(ring, a.mask, a.unit, b.mask, b.unit);
    std::cout << d << "\n";
    return kExitOk;
}

int cmd_matching(const CommonArgs& args) {
    FactoredRing ring = parse_ring_spec(args.ring);
    if (ring.n() < 2) {
        throw std::domain_error(
            "matching construction requires >= 2 local factors");
    }
    CleanGraph g = build_clean_graph(ring, args.budget);
    MatchingResult m = build_canonical_matching(g);
    if (!verify_matching(g, m)) {
        throw FormulaViolation("constructed matching failed validation on " +
                               ring.spec_string());
    }
    if (cpp_int(m.size()) != matching_number_closed_form(ring)) {
        throw FormulaViolation(
            "constructed matching size disagrees with the closed form on " +
            ring.spec_string());
    }
    std::cout << matching_to_json(m).dump(2) << "\n";
    return kExitOk;
}

int cmd_export(const CommonArgs& args, const std::string& format,
               const std::string& out_path) {
    FactoredRing ring = parse_ring_spec(args.ring);
    CleanGraph g = build_clean_graph(ring, args.budget);
    if (out_path.empty()) {
        export_graph(g, format, std::cout);
        return kExitOk;
    }
    std::ofstream out(out_path);
    if (!out) {
        throw std::ios_base::failure("cannot open output file: " + out_path);
    }
    export_graph(g, format, out);
    out.flush();
    if (!out.good()) {
        throw std::ios_base::failure("failed writing output file: " +
                                     out_path);
    }
    return kExitOk;
}

int cmd_bench(const std::vector<std::string>& specs,
              const std::string& variant, std::uint64_t budget) {
    VerifyOptions opts;
    opts.checks = {CheckKind::Wiener};
    opts.variant = parse_variant(variant);
    opts.budget = budget;
    std::vector<VerificationRecord> recs;
    for (const std::string& s : specs) {
        for (VerificationRecord& r : verify_ring(parse_ring_spec(s), opts)) {
            recs.push_back(std::move(r));
        }
    }
    write_csv(recs, std::cout);
    return all_acceptable(recs) ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "clean graph Cl2(R) of finite commutative rings: construction, "
        "closed-form invariants, and oracle verification"};
    app.set_version_flag("--version", cleangraph::kVersion);
    app.require_subcommand(1);

    CommonArgs analyze_args;
    auto* analyze = app.add_subcommand(
        "analyze", "summarize one ring: sizes, connectivity, diameter, "
                   "Wiener index, matching number");
    analyze->add_option("--ring", analyze_args.ring, "ring spec")->required();
    analyze->add_option("--variant", analyze_args.variant,
                        "closed-form variant")
        ->check(CLI::IsMember({"proof", "statement"}));
    analyze->add_option("--budget", analyze_args.budget,
                        "oracle vertex budget");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand(
        "verify", "check closed forms against oracles; CSV on stdout");
    verify->add_option("--ring", verify_args.ring, "single ring spec");
    verify->add_option("--range", verify_args.range,
                       "modulus range a..b (e.g. 6..200)");
    verify->add_option("--checks", verify_args.checks,
                       "comma-separated subset of: wiener,distance,diameter,"
                       "connectivity,self-inverse-count,idempotent-count,"
                       "matching");
    verify->add_option("--variant", verify_args.variant,
                       "closed-form variant")
        ->check(CLI::IsMember({"proof", "statement"}));
    verify->add_option("--budget", verify_args.budget,
                       "oracle vertex budget");
    verify->add_option("--matching-budget", verify_args.matching_budget,
                       "maximum-matching oracle vertex budget");
    verify->add_option("--cache", verify_args.cache_path,
                       "JSON-lines result cache path");
    verify->add_option("--jobs", verify_args.jobs, "worker threads");

    CommonArgs distance_args;
    std::string distance_from, distance_to;
    auto* distance = app.add_subcommand(
        "distance", "closed-form distance between two vertices");
    distance->add_option("--ring", distance_args.ring, "ring spec")
        ->required();
    distance->add_option("from", distance_from,
                         "vertex literal (e,u) or e#i,u#j")
        ->required();
    distance->add_option("to", distance_to,
                         "vertex literal (e,u) or e#i,u#j")
        ->required();

    CommonArgs matching_args;
    auto* matching = app.add_subcommand(
        "matching", "emit the canonical maximum matching as JSON");
    matching->add_option("--ring", matching_args.ring, "ring spec")
        ->required();
    matching->add_option("--budget", matching_args.budget,
                         "graph vertex budget");

    CommonArgs export_args;
    std::string export_format, export_out;
    auto* exp = app.add_subcommand("export", "write the graph to a file");
    exp->add_option("--ring", export_args.ring, "ring spec")->required();
    exp->add_option("--format", export_format, "output format")
        ->required()
        ->check(CLI::IsMember({"dot", "json", "csv-edges"}));
    exp->add_option("--out", export_out, "output path (default: stdout)");

    std::vector<std::string> bench_specs;
    std::string bench_variant = "proof";
    std::uint64_t bench_budget = cleangraph::kDefaultVertexBudget;
    auto* bench = app.add_subcommand(
        "bench", "time closed-form vs oracle Wiener for each ring spec");
    bench->add_option("specs", bench_specs, "ring specs")->required();
    bench->add_option("--variant", bench_variant, "closed-form variant")
        ->check(CLI::IsMember({"proof", "statement"}));
    bench->add_option("--budget", bench_budget, "oracle vertex budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(analyze_args);
        if (app.got_subcommand(verify)) return cmd_verify(verify_args);
        if (app.got_subcommand(distance)) {
            return cmd_distance(distance_args, distance_from, distance_to);
        }
        if (app.got_subcommand(matching)) return cmd_matching(matching_args);
        if (app.got_subcommand(exp)) {
            return cmd_export(export_args, export_format, export_out);
        }
        if (app.got_subcommand(bench)) {
            return cmd_bench(bench_specs, bench_variant, bench_budget);
        }
        return kExitParse;
    } catch (const cleangraph::BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const cleangraph::FormulaViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMismatch;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
