// Command-line front end: exact computations with finite-group cochains,
// tabular ternary structures, based ternary algebras, and disk evaluations.
//
// Exit codes: 0 = success / verified, 1 = a verification ran and failed
// (machine-readable report on stdout), 2 = malformed input or refused
// computation.  JSON goes to stdout, human-readable summaries to stderr.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "delta3/cochain.hpp"
#include "delta3/cohomology.hpp"
#include "delta3/delta_group.hpp"
#include "delta3/evaluator.hpp"
#include "delta3/gmodule.hpp"
#include "delta3/group.hpp"
#include "delta3/rational.hpp"
#include "delta3/report.hpp"
#include "delta3/three_algebra.hpp"

namespace {

using nlohmann::json;
using namespace delta3;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);
    try {
        json j;
        in >> j;
        return j;
    } catch (const std::exception& e) {
        throw input_error("invalid JSON in " + path + ": " + e.what());
    }
}

bool has_prefix(const std::string& s, const std::string& p) {
    return s.size() >= p.size() && s.compare(0, p.size(), p) == 0;
}

int parse_spec_int(const std::string& spec, const std::string& what) {
    try {
        size_t used = 0;
        const int v = std::stoi(spec, &used);
        if (used != spec.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw input_error("bad " + what + " parameter: '" + spec + "'");
    }
}

GroupPtr parse_group(const std::string& spec) {
    if (has_prefix(spec, "cyclic:")) {
        const int n = parse_spec_int(spec.substr(7), "cyclic group order");
        if (n < 1 || n > 10000) throw input_error("cyclic group order out of range: " + spec);
        return cyclic_group(n);
    }
    if (has_prefix(spec, "symmetric:")) {
        const int n = parse_spec_int(spec.substr(10), "symmetric group degree");
        if (n < 1 || n > 4)
            throw input_error("symmetric group degree must be between 1 and 4: " + spec);
        return symmetric_group(n);
    }
    if (has_prefix(spec, "file:")) return group_from_json(read_json_file(spec.substr(5)));
    throw input_error("unrecognized group specifier '" + spec +
                      "' (expected cyclic:n, symmetric:n, or file:path)");
}

ModulePtr parse_module(const GroupPtr& group, const std::string& group_spec,
                       const std::string& spec) {
    if (has_prefix(spec, "trivial:")) {
        const int m = parse_spec_int(spec.substr(8), "modulus");
        if (m < 2 || m > 1000000) throw input_error("modulus out of range: " + spec);
        return trivial_module(group, m);
    }
    if (has_prefix(spec, "sign:")) {
        const int m = parse_spec_int(spec.substr(5), "modulus");
        if (m < 2 || m > 1000000) throw input_error("modulus out of range: " + spec);
        std::vector<int> signs;
        if (has_prefix(group_spec, "cyclic:"))
            signs = cyclic_sign_vector(parse_spec_int(group_spec.substr(7), "order"));
        else if (has_prefix(group_spec, "symmetric:"))
            signs = symmetric_sign_vector(parse_spec_int(group_spec.substr(10), "degree"));
        else
            throw input_error(
                "sign modules need a cyclic:n or symmetric:n group specifier "
                "(for a file group, supply the module as a file too)");
        return sign_module(group, m, signs);
    }
    if (has_prefix(spec, "file:")) return module_from_json(group, read_json_file(spec.substr(5)));
    throw input_error("unrecognized module specifier '" + spec +
                      "' (expected trivial:m, sign:m, or file:path)");
}

json report_json(const CheckReport& rep) {
    json checks = json::array();
    for (const auto& it : rep.items) {
        json o;
        o["name"] = it.name;
        o["pass"] = it.pass;
        if (!it.witness.empty()) o["witness"] = it.witness;
        checks.push_back(std::move(o));
    }
    json out;
    out["pass"] = rep.all_pass();
    out["checks"] = std::move(checks);
    return out;
}

int emit_report(const CheckReport& rep, const std::string& subject) {
    std::cout << report_json(rep).dump() << "\n";
    std::cerr << subject << ": " << rep.summary() << "\n";
    return rep.all_pass() ? 0 : 1;
}

struct Options {
    std::string group_spec, module_spec, input_path, kind;
    int degree = -1;
    bool symmetric = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int trials = 1;
    int jobs = 1;
    std::int64_t max_dim = 0;  // 0 means library defaults
};

std::int64_t effective_max_dim(const Options& o) {
    return o.max_dim > 0 ? o.max_dim : kDefaultMaxDim;
}

int algebra_dim_cap(const Options& o) {
    return o.max_dim > 0 ? static_cast<int>(std::min<std::int64_t>(o.max_dim, 1 << 20))
                         : kDefaultAlgebraDimCap;
}

std::uint64_t algebra_term_budget(const Options& o) {
    if (o.max_dim <= 0) return 10'000'000;
    const std::uint64_t d = static_cast<std::uint64_t>(std::min<std::int64_t>(o.max_dim, 4096));
    return std::max<std::uint64_t>(10'000'000, d * d * d * 500);
}

int run_cohomology(const Options& o) {
    const GroupPtr G = parse_group(o.group_spec);
    const ModulePtr A = parse_module(G, o.group_spec, o.module_spec);
    if (o.degree < 0) throw input_error("cohomology needs --degree n with n >= 0");
    const std::int64_t md = effective_max_dim(o);
    const auto H = cohomology_group(G, A, o.degree, md);
    json out;
    out["H"] = H.invariant_factors;
    std::string human = "H^" + std::to_string(o.degree) + " = " + H.to_string();
    if (o.symmetric) {
        const auto HS = symmetric_cohomology_group(G, A, o.degree, md);
        out["HS"] = HS.invariant_factors;
        human += ", HS^" + std::to_string(o.degree) + " = " + HS.to_string();
    }
    std::cout << out.dump() << "\n";
    std::cerr << human << "\n";
    return 0;
}

int run_verify_delta(const Options& o) {
    const json j = read_json_file(o.input_path);
    if (!j.is_object() || !j.contains("carriers"))
        throw input_error("expected a carrier-family document (group/carriers/m/P/Q)");
    const DeltaGroup d = delta_from_json(j);
    const CheckReport rep = verify_delta_axioms(d, o.jobs);
    return emit_report(rep, "carrier family (" + std::to_string(d.size()) + " elements)");
}

int run_verify_algebra(const Options& o) {
    const json j = read_json_file(o.input_path);
    if (!j.is_object()) throw input_error("expected a JSON object");
    const int cap = algebra_dim_cap(o);
    const std::uint64_t budget = algebra_term_budget(o);
    if (j.contains("u")) {
        const StrongThreeAlgebra s = algebra_from_json(j);
        const CheckReport rep = verify_strong(s, cap, budget);
        return emit_report(rep, "based algebra (dim " + std::to_string(s.dim) + ")");
    }
    if (j.contains("mbar")) {
        const SparseTrilinearSystem sys = system_from_json(j);
        const CheckReport rep = verify_three_algebra(sys, cap, budget);
        return emit_report(rep, "trilinear system (dim " + std::to_string(sys.dim) + ")");
    }
    throw input_error("unrecognized algebra document: expected a 'u' or an 'mbar' field");
}

int run_classify(const Options& o) {
    const GroupPtr G = parse_group(o.group_spec);
    const ModulePtr A = parse_module(G, o.group_spec, o.module_spec);
    if (o.degree >= 0 && o.degree != 3)
        throw input_error("classification is implemented for degree 3 only");
    const std::int64_t md = effective_max_dim(o);
    const Cochain zero = zero_cochain(G, A, 3);
    const std::int64_t slots = static_cast<std::int64_t>(zero.data.size());
    const std::int64_t m = A->modulus;
    double total_f = 1;
    for (std::int64_t i = 0; i < slots; ++i) {
        total_f *= static_cast<double>(m);
        if (total_f > 1048576.0)
            throw input_error("twist family too large to enumerate exhaustively (" +
                              std::to_string(slots) + " slots mod " + std::to_string(m) + ")");
    }
    const std::int64_t total = static_cast<std::int64_t>(total_f + 0.5);
    std::map<std::vector<std::int64_t>, std::pair<std::vector<std::int64_t>, std::int64_t>>
        classes;
    std::int64_t valid = 0;
    Cochain alpha = zero;
    for (std::int64_t code = 0; code < total; ++code) {
        std::int64_t c = code;
        for (std::int64_t i = 0; i < slots; ++i) {
            alpha.data[i] = c % m;
            c /= m;
        }
        if (!alpha_conditions_hold(alpha)) continue;
        ++valid;
        auto res = twist_class_residue(alpha, md);
        auto it = classes.find(res);
        if (it == classes.end())
            classes.emplace(std::move(res), std::make_pair(alpha.data, std::int64_t{1}));
        else
            ++it->second.second;
    }
    json cls = json::array();
    for (const auto& [res, rep] : classes) {
        json o2;
        o2["representative"] = rep.first;
        o2["size"] = rep.second;
        cls.push_back(std::move(o2));
    }
    json out;
    out["classes"] = std::move(cls);
    out["valid"] = valid;
    std::cout << out.dump() << "\n";
    std::cerr << valid << " of " << total << " twists are admissible, in " << classes.size()
              << " translation classes\n";
    return 0;
}

int run_evaluate(const Options& o) {
    const json j = read_json_file(o.input_path);
    if (!j.is_object() || !j.contains("algebra") || !j.contains("triangulation"))
        throw input_error("expected a document with 'algebra' and 'triangulation' fields");
    if (!j["algebra"].contains("u"))
        throw input_error("evaluation needs a based algebra document (with a 'u' field)");
    const StrongThreeAlgebra s = algebra_from_json(j["algebra"]);
    const LabeledTriangulation tri = triangulation_from_json(j["triangulation"]);

    const int cap = algebra_dim_cap(o);
    const std::uint64_t budget = algebra_term_budget(o);
    const int ocap = o.max_dim > 0 ? cap : kDefaultOrthogonalDimCap;
    const SparseTrilinearSystem sys = system_with_derived_recoupling(s);
    CheckReport pre = verify_three_algebra(sys, cap, budget);
    {
        CheckReport orth = verify_orthogonal(sys, ocap);
        pre.items.insert(pre.items.end(), orth.items.begin(), orth.items.end());
    }
    if (!pre.all_pass()) {
        std::cout << report_json(pre).dump() << "\n";
        std::cerr << "algebra rejected: " << pre.summary() << "\n";
        return 1;
    }

    const size_t term_budget =
        o.max_dim > 0 ? std::max<size_t>(100000, static_cast<size_t>(o.max_dim) * 1000) : 100000;
    std::vector<SparseVec> results;
    for (int t = 0; t < o.trials; ++t)
        results.push_back(evaluate(tri, s, o.seed + static_cast<std::uint64_t>(t), 10000,
                                   term_budget));
    bool coherent = true;
    for (const auto& r : results)
        if (r != results.front()) coherent = false;

    json out;
    out["coherent"] = coherent;
    out["trials"] = o.trials;
    json res = json::array();
    for (const auto& [idx, c] : results.front()) res.push_back({idx, rat_to_string(c)});
    out["result"] = std::move(res);
    std::cout << out.dump() << "\n";

    std::string human;
    for (const auto& [idx, c] : results.front()) {
        if (!human.empty()) human += " + ";
        human += s.name(idx) + ":" + rat_to_string(c);
    }
    if (human.empty()) human = "0";
    std::cerr << "state = " << human << (coherent ? "" : "  [NOT seed-stable]") << "\n";
    return coherent ? 0 : 1;
}

int run_generate(const Options& o) {
    json out;
    std::string note;
    if (o.kind == "T_G_0") {
        const GroupPtr G = parse_group(o.group_spec);
        out = delta_to_json(build_T_G_0(G));
        note = "carrier family over a group of order " + std::to_string(G->order);
    } else if (o.kind == "T_G_A_alpha") {
        const GroupPtr G = parse_group(o.group_spec);
        const ModulePtr A = parse_module(G, o.group_spec, o.module_spec);
        const Cochain alpha = zero_cochain(G, A, 3);
        out = delta_to_json(build_T_G_A_alpha(alpha));
        note = "twisted carrier family (zero twist)";
    } else if (o.kind == "dw") {
        const GroupPtr G = parse_group(o.group_spec);
        const MultiplicativeCocycle alpha =
            o.seed_given ? random_sign_cocycle(G, o.seed) : constant_one_cocycle(G);
        out = algebra_to_json(build_dw(alpha));
        note = o.seed_given ? "pair-basis algebra with a random sign table"
                            : "pair-basis algebra with the constant table";
    } else if (o.kind == "sixj") {
        const int n = o.degree;
        if (n < 1 || n > 6) throw input_error("sixj generation needs --degree n with 1 <= n <= 6");
        SixJData data;
        if (o.seed_given) {
            data = random_sixj(n, o.seed);
        } else {
            std::vector<Rat> f(static_cast<size_t>(n) * n * n * n * n * n, Rat(1));
            std::vector<Rat> w(static_cast<size_t>(n), Rat(1));
            data = make_sixj(n, std::move(f), std::move(w));
        }
        out = algebra_to_json(build_sixj(data));
        note = "recoupling-symbol algebra on an index set of size " + std::to_string(n);
    } else if (o.kind == "triangulation") {
        if (o.input_path.empty())
            throw input_error("triangulation generation needs --input <based algebra file>");
        const json aj = read_json_file(o.input_path);
        if (!aj.is_object() || !aj.contains("u"))
            throw input_error("triangulation generation needs a based algebra document (--input)");
        const StrongThreeAlgebra s = algebra_from_json(aj);
        const int subdivisions = o.degree >= 0 ? o.degree : 2;
        if (subdivisions > 10) throw input_error("at most 10 subdivisions");
        out["algebra"] = aj;
        out["triangulation"] =
            triangulation_to_json(random_triangulation(s.dim, subdivisions, o.seed));
        note = "labeled disk with " + std::to_string(1 + 2 * subdivisions) + " cells";
    } else {
        throw input_error("unknown generate kind '" + o.kind +
                          "' (expected T_G_0, T_G_A_alpha, dw, sixj, or triangulation)");
    }
    std::cout << out.dump() << "\n";
    std::cerr << "generated " << note << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verifier for ternary structures over finite groups"};
    app.require_subcommand(1);
    Options o;

    const auto add_group = [&](CLI::App* c, bool req) {
        auto* opt = c->add_option("--group", o.group_spec, "group: cyclic:n, symmetric:n, file:path");
        if (req) opt->required();
    };
    const auto add_module = [&](CLI::App* c, bool req) {
        auto* opt = c->add_option("--module", o.module_spec, "module: trivial:m, sign:m, file:path");
        if (req) opt->required();
    };
    const auto add_input = [&](CLI::App* c, bool req) {
        auto* opt = c->add_option("--input", o.input_path, "input JSON document");
        if (req) opt->required();
    };
    const auto add_max_dim = [&](CLI::App* c) {
        c->add_option("--max-dim", o.max_dim, "raise the dimension / term-count ceilings");
    };

    CLI::Option* seed_opt = nullptr;

    auto* coh = app.add_subcommand("cohomology", "invariant factors of a cohomology group");
    add_group(coh, true);
    add_module(coh, true);
    coh->add_option("--degree", o.degree, "cochain degree")->required();
    coh->add_flag("--symmetric", o.symmetric, "also compute the transposition-fixed theory");
    add_max_dim(coh);

    auto* vd = app.add_subcommand("verify-delta", "check every axiom of a carrier family");
    add_input(vd, true);
    vd->add_option("--jobs", o.jobs, "worker threads for the heavy axiom sweep")
        ->check(CLI::Range(1, 256));

    auto* va = app.add_subcommand("verify-algebra", "check every axiom of an algebra document");
    add_input(va, true);
    add_max_dim(va);

    auto* cl = app.add_subcommand("classify", "group admissible degree-3 twists into classes");
    add_group(cl, true);
    add_module(cl, true);
    cl->add_option("--degree", o.degree, "twist degree (only 3 is supported)");
    add_max_dim(cl);

    auto* ev = app.add_subcommand("evaluate", "reduce a labeled disk to its final state");
    add_input(ev, true);
    seed_opt = ev->add_option("--seed", o.seed, "seed for the move schedule");
    ev->add_option("--trials", o.trials, "run several consecutive seeds and compare")
        ->check(CLI::Range(1, 1000));
    add_max_dim(ev);

    auto* ge = app.add_subcommand("generate", "emit a sample input document");
    ge->add_option("kind", o.kind, "T_G_0 | T_G_A_alpha | dw | sixj | triangulation")->required();
    add_group(ge, false);
    add_module(ge, false);
    ge->add_option("--degree", o.degree, "size / subdivision parameter");
    auto* ge_seed = ge->add_option("--seed", o.seed, "randomize the generated data");
    add_input(ge, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }
    o.seed_given = (seed_opt && seed_opt->count() > 0) || ge_seed->count() > 0;

    try {
        if (app.got_subcommand(coh)) return run_cohomology(o);
        if (app.got_subcommand(vd)) return run_verify_delta(o);
        if (app.got_subcommand(va)) return run_verify_algebra(o);
        if (app.got_subcommand(cl)) return run_classify(o);
        if (app.got_subcommand(ev)) return run_evaluate(o);
        if (app.got_subcommand(ge)) return run_generate(o);
        std::cerr << app.help();
        return 2;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const internal_error& e) {
        std::cerr << "internal invariant violated: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
