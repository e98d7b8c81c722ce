// graft: command-line front end. Exit codes: 0 ok, 1 negative verdict, 2 usage or input
// error, 3 capacity refusal.
#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "graft/expansions.hpp"
#include "graft/io.hpp"
#include "graft/logic.hpp"
#include "graft/random.hpp"

using namespace graft;

namespace {

struct Options {
    std::string format = "json";
    int cap = -1;
    uint64_t seed = 1;
    int depth = -1;
    int m = 1;
    int max_size = -1;
    std::string sig;
};

Options opt;

struct Verdict {
    int code = 0;
};

void emit(const Json& j, const std::string& text) {
    if (opt.format == "text") std::cout << text << (text.empty() || text.back() == '\n' ? "" : "\n");
    else std::cout << j.dump(2) << "\n";
}

Sig sig_or(Sig fallback) { return opt.sig.empty() ? fallback : parse_sig(opt.sig); }

std::string text_arg(const std::string& file, const std::string& inline_text, const char* what) {
    if (!file.empty()) return read_file(file);
    if (!inline_text.empty()) return inline_text;
    throw CLI::ValidationError(std::string(what) + ": give -f FILE or the text inline");
}

Json load_json(const std::string& path) { return parse_json(read_file(path)); }

Structure load_structure(const std::string& path) { return structure_from_json(load_json(path)); }

std::string summary(const Structure& s) {
    std::string out = std::to_string(s.size) + " elements";
    for (auto& [r, ts] : s.tuples) out += ", " + std::to_string(ts.size()) + " " + r;
    for (auto& [c, v] : s.sources) out += ", " + c + "=" + std::to_string(v);
    return out;
}

// A structure file, or a type file (recognized by its "root" field) taken as is.
HType load_theory(const std::string& path, int depth) {
    Json j = load_json(path);
    if (j.contains("root")) return type_from_json(j);
    return fo_theory(structure_from_json(j), depth);
}

TreeAutomaton make_automaton(const std::string& spec) {
    if (spec == "zeta") return zeta_automaton(sig_or(Sig::HR));
    if (spec == "simplicity") return simplicity_automaton();
    if (spec == "prime") return prime_automaton([](const Structure&) { return true; });
    if (spec.starts_with("fo:")) {
        Formula f = parse_formula(spec.substr(3));
        return compile_fo_recognizer(f, opt.depth < 0 ? qdepth(f) : opt.depth, sig_or(Sig::S));
    }
    return automaton_from_json(load_json(spec));
}

CongruenceEvaluator make_evaluator(const std::string& name) {
    if (name == "zeta") return zeta_evaluator(sig_or(Sig::HR));
    if (name == "simplicity") return simplicity_evaluator();
    if (name == "prime") return prime_evaluator([](const Structure&) { return true; });
    if (name == "parity") return parity_evaluator(sig_or(Sig::HR));
    if (name == "eta-only") return eta_only_evaluator();
    throw CLI::ValidationError("unknown evaluator '" + name + "'");
}

Json run_terms(const TreeAutomaton& a, const std::vector<std::string>& files, const std::vector<std::string>& inline_terms,
               Verdict& v) {
    Json runs = Json::array();
    std::vector<std::string> texts = inline_terms;
    for (auto& f : files) texts.push_back(read_file(f));
    for (auto& text : texts) {
        auto t = parse_term(text);
        State s = a.run(t);
        bool acc = a.accepting(s);
        if (!acc) v.code = 1;
        runs.push_back({{"term", print_term(t)}, {"state", s}, {"accepted", acc}});
    }
    return runs;
}

std::string runs_text(const Json& runs) {
    std::string out;
    for (auto& r : runs) out += (r["accepted"].get<bool>() ? "accept " : "reject ") + r["term"].get<std::string>() + "\n";
    return out;
}

// ---------------------------------------------------------------------------------------
// batch oracles

struct OracleResult {
    int samples = 0;
    int failures = 0;
    std::string first;
};

OracleResult run_oracle(const std::string& name, int samples) {
    Rng rng(opt.seed);
    OracleResult r;
    auto fail = [&](const std::string& what) {
        if (r.failures++ == 0) r.first = what;
    };
    for (int i = 0; i < samples; ++i, ++r.samples) {
        if (name == "expansions") {
            int m = uniform_int(rng, 1, 2);
            auto g = random_structure(Sort::ports({"p", "q"}), uniform_int(rng, 1, opt.max_size < 0 ? 5 : opt.max_size), 0.3, rng);
            if (enumerate_expansions(g, m).keys != expansion_keys_by_filter(g, m))
                fail(structure_to_json(g).dump());
        } else if (name == "simplicity") {
            static auto a = simplicity_automaton();
            RandomTermSpec spec;
            spec.sig = Sig::HRM;
            spec.leaves = uniform_int(rng, 1, opt.max_size < 0 ? 12 : opt.max_size);
            auto t = random_term(spec, rng);
            if (a.accepts(t) == has_multiedges(eval_multigraph(t))) fail(print_term(t));
        } else if (name == "moddecomp") {
            auto g = random_structure(Sort::graph(), uniform_int(rng, 1, opt.max_size < 0 ? 8 : opt.max_size), 0.4, rng);
            if (!isomorphic(evaluate_tree(modular_decomposition(g)), g)) fail(structure_to_json(g).dump());
        } else if (name == "oplus") {
            int d = opt.depth < 0 ? 2 : opt.depth;
            Sort s1 = Sort::graph({"a"}), s2 = Sort::graph({"b"});
            auto x = random_structure(s1, uniform_int(rng, 1, 3), 0.4, rng);
            auto y = random_structure(s2, uniform_int(rng, 1, 3), 0.4, rng);
            if (!same_type(theory_oplus(fo_theory(x, d), fo_theory(y, d)), fo_theory(oplus(x, y), d)))
                fail(structure_to_json(x).dump() + " " + structure_to_json(y).dump());
        } else if (name == "compose") {
            Sort s = Sort::graph({"a", "b"});
            auto g1 = random_scheme(s, s, rng), g2 = random_scheme(s, s, rng);
            auto c = compose_schemes(g2, g1);
            auto x = random_structure(s, uniform_int(rng, 1, 4), 0.4, rng);
            if (!isomorphic(apply_scheme(c, x), apply_scheme(g2, apply_scheme(g1, x)))) fail(scheme_to_json(c).dump());
        } else {
            throw CLI::ValidationError("unknown oracle '" + name + "' (expansions, simplicity, moddecomp, oplus, compose)");
        }
    }
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graft: graph algebras, definable operations, theories and recognizers"};
    app.require_subcommand(1);
    app.add_option("--format", opt.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--cap", opt.cap, "capacity cap for exhaustive routines (sets GRAFT_CAP)");
    app.add_option("--seed", opt.seed, "seed for randomized checks");
    app.add_option("--depth", opt.depth, "quantifier depth");
    app.add_option("--m", opt.m, "expansion threshold m");
    app.add_option("--max-size", opt.max_size, "size bound for enumerations");
    app.add_option("--sig", opt.sig, "signature (S, VR, VRPLUS, VRPI, NLC, HR, HR_PAR, HR_SEP, ...)");
    Verdict verdict;
    auto sub = [&](CLI::App* parent, const std::string& name, const std::string& help) {
        auto* s = parent->add_subcommand(name, help);
        s->fallthrough();
        return s;
    };

    // eval
    std::string file, text;
    std::vector<std::string> scheme_defs;
    auto* eval_cmd = sub(&app, "eval", "evaluate a term");
    eval_cmd->add_option("-f,--file", file, "term file");
    eval_cmd->add_option("term", text, "term text");
    eval_cmd->add_option("--scheme", scheme_defs, "NAME=FILE scheme for apply-scheme");
    eval_cmd->callback([&] {
        auto t = parse_term(text_arg(file, text, "eval"));
        EvalContext ctx;
        for (auto& d : scheme_defs) {
            auto eq = d.find('=');
            if (eq == std::string::npos) throw CLI::ValidationError("--scheme expects NAME=FILE");
            ctx.schemes[d.substr(0, eq)] = scheme_from_json(load_json(d.substr(eq + 1)));
        }
        Value v = eval_term(t, sig_or(Sig::HR), ctx);
        if (auto* s = std::get_if<Structure>(&v)) {
            Structure c = canonical(*s);
            emit(structure_to_json(c), summary(c));
        } else {
            auto& g = std::get<MultiGraph>(v);
            emit(multigraph_to_json(g), std::to_string(g.nv) + " vertices, " + std::to_string(g.edges.size()) +
                                            " edges" + (has_multiedges(g) ? ", multiple edges" : ""));
        }
    });

    // scheme
    auto* scheme_cmd = sub(&app, "scheme", "qfd schemes");
    scheme_cmd->require_subcommand(1);
    std::vector<std::string> files;
    auto* validate_cmd = sub(scheme_cmd, "validate", "decide the validity conditions");
    validate_cmd->add_option("scheme", file, "scheme file")->required();
    validate_cmd->callback([&] {
        auto r = validate_scheme(scheme_from_json(load_json(file)));
        Json j{{"valid", r.ok}, {"condition", r.condition}, {"message", r.message}};
        if (r.witness) j["witness"] = structure_to_json(*r.witness);
        if (!r.ok) verdict.code = 1;
        emit(j, r.ok ? "valid" : "invalid: " + r.condition + ": " + r.message);
    });
    auto* apply_cmd = sub(scheme_cmd, "apply", "apply a scheme to a structure");
    apply_cmd->add_option("files", files, "scheme.json structure.json")->required()->expected(2);
    apply_cmd->callback([&] {
        auto g = scheme_from_json(load_json(files[0]));
        auto s = apply_scheme(require_valid(g), load_structure(files[1]));
        emit(structure_to_json(s), summary(s));
    });
    auto* compose_cmd = sub(scheme_cmd, "compose", "g2 after g1: compose g2.json g1.json");
    compose_cmd->add_option("files", files, "g2.json g1.json")->required()->expected(2);
    compose_cmd->callback([&] {
        auto c = compose_schemes(scheme_from_json(load_json(files[0])), scheme_from_json(load_json(files[1])));
        emit(scheme_to_json(c), scheme_to_json(c).dump());
    });
    auto* sep_cmd = sub(scheme_cmd, "sep-check", "does the scheme preserve source separation");
    sep_cmd->add_option("scheme", file, "scheme file")->required();
    sep_cmd->callback([&] {
        auto g = scheme_from_json(load_json(file));
        bool ok = preserves_source_separation(require_valid(g));
        if (!ok) verdict.code = 1;
        emit(Json{{"preserves_separation", ok}, {"syntactic", separation_syntactic(g)}},
             ok ? "preserves source separation" : "does not preserve source separation");
    });
    std::vector<std::string> params;
    std::string sort_file, constants, ports;
    auto* builtin_cmd = sub(scheme_cmd, "builtin", "print a built-in scheme: builtin NAME [PARAM...]");
    builtin_cmd->add_option("name", text, "identity srcren srcfg fus fus-to add ren fg mark mdf del include")->required();
    builtin_cmd->add_option("params", params, "parameters");
    builtin_cmd->add_option("--sort", sort_file, "input sort file");
    builtin_cmd->add_option("--constants", constants, "graph sort with these constants (comma separated)");
    builtin_cmd->add_option("--ports", ports, "graph sort with these ports (comma separated)");
    builtin_cmd->callback([&] {
        auto split = [](const std::string& s) {
            std::set<Label> out;
            for (size_t i = 0; i < s.size();) {
                size_t j = s.find(',', i);
                if (j == std::string::npos) j = s.size();
                if (j > i) out.insert(s.substr(i, j - i));
                i = j + 1;
            }
            return out;
        };
        Sort s = !sort_file.empty() ? sort_from_json(load_json(sort_file))
                 : !ports.empty()   ? Sort::ports(split(ports))
                                    : Sort::graph(split(constants));
        auto g = builtin(text, params, s);
        emit(scheme_to_json(g), scheme_to_json(g).dump());
    });
    auto* split_cmd = sub(scheme_cmd, "split-union", "split a scheme over a disjoint union");
    split_cmd->add_option("files", files, "h.json z1.json z2.json (z1, z2 realize the side types)")
        ->required()
        ->expected(3);
    split_cmd->callback([&] {
        auto h = scheme_from_json(load_json(files[0]));
        auto z1 = load_structure(files[1]), z2 = load_structure(files[2]);
        auto u = split_over_union(h, z1.sort, z2.sort, z1, z2);
        Json j{{"g1", scheme_to_json(u.g1)}, {"g2", scheme_to_json(u.g2)}};
        j["adds"] = Json::array();
        for (auto& [p, q] : u.adds) j["adds"].push_back({p, q});
        j["forget"] = Json::array();
        for (auto& [p, q] : u.forget) j["forget"].push_back({p, q});
        j["aux"] = u.aux_formulas;
        emit(j, std::to_string(u.adds.size()) + " add operations, " + std::to_string(u.aux_formulas.size()) + " auxiliary ports");
    });

    // theory
    auto* theory_cmd = sub(&app, "theory", "depth-d first-order types");
    theory_cmd->require_subcommand(1);
    auto* tc_cmd = sub(theory_cmd, "compute", "type of a structure");
    tc_cmd->add_option("-f,--file,structure", file, "structure file")->required();
    tc_cmd->callback([&] {
        auto t = fo_theory(load_structure(file), std::max(opt.depth, 0));
        emit(type_to_json(t), type_text(t));
    });
    auto* to_cmd = sub(theory_cmd, "oplus", "type of a disjoint union from the parts");
    to_cmd->add_option("files", files, "two structure or type files")->required()->expected(2);
    to_cmd->callback([&] {
        int d = std::max(opt.depth, 0);
        auto t = theory_oplus(load_theory(files[0], d), load_theory(files[1], d));
        emit(type_to_json(t), type_text(t));
    });
    auto* tq_cmd = sub(theory_cmd, "qfd", "type of g(S) from the type of S");
    tq_cmd->add_option("files", files, "scheme.json structure-or-type.json")->required()->expected(2);
    tq_cmd->callback([&] {
        int d = std::max(opt.depth, 0);
        auto g = require_valid(scheme_from_json(load_json(files[0])));
        auto t = theory_qfd(g, load_theory(files[1], d), d);
        emit(type_to_json(t), type_text(t));
    });

    // normalize
    auto* norm_cmd = sub(&app, "normalize", "normal forms of formulas");
    norm_cmd->require_subcommand(1);
    for (std::string kind : {"bool", "qf", "fo"}) {
        auto* c = sub(norm_cmd, kind, kind == "bool" ? "propositional" : kind == "qf" ? "quantifier-free" : "first-order");
        c->add_option("-f,--file", file, "formula file");
        c->add_option("formula", text, "formula text");
        c->callback([&, kind] {
            Formula f = parse_formula(text_arg(file, text, "normalize"));
            Formula n = kind == "bool" ? normalize_bool(f)
                        : kind == "qf" ? normalize_qf(f)
                                       : normalize_fo(f, opt.depth < 0 ? qdepth(f) : opt.depth);
            std::string out = print_formula(n);
            emit(Json{{"normal", out}}, out);
        });
    }

    // automaton
    auto* auto_cmd = sub(&app, "automaton", "tree automata");
    auto_cmd->require_subcommand(1);
    std::vector<std::string> specs, terms;
    std::string context;
    auto add_auto = [&](const std::string& name, const std::string& help, int n_specs) {
        auto* c = sub(auto_cmd, name, help);
        c->add_option("automata", specs,
                      "zeta | simplicity | prime | fo:SENTENCE | automaton.json")
            ->required()
            ->expected(n_specs);
        c->add_option("-f,--file", files, "term files");
        c->add_option("--term", terms, "term text");
        return c;
    };
    auto finish = [&](const TreeAutomaton& a) {
        Json runs = run_terms(a, files, terms, verdict);
        emit(Json{{"runs", runs}, {"automaton", automaton_to_json(a)}}, runs_text(runs));
    };
    add_auto("run", "run an automaton on terms", 1)->callback([&] { finish(make_automaton(specs[0])); });
    add_auto("product", "intersection of two automata", 2)->callback([&] {
        finish(product(make_automaton(specs[0]), make_automaton(specs[1])));
    });
    add_auto("complement", "complement", 1)->callback([&] { finish(complement(make_automaton(specs[0]))); });
    add_auto("preimage", "accepts t when ctx[t] is accepted", 1)
        ->callback([&] { finish(preimage(make_automaton(specs[0]), parse_term(read_file(context)))); })
        ->add_option("--context", context, "context term file with one hole")
        ->required();
    auto* cfo_cmd = sub(auto_cmd, "compile-fo", "recognizer of a first-order sentence");
    cfo_cmd->add_option("sentence", text, "sentence")->required();
    cfo_cmd->add_option("-f,--file", files, "term files");
    cfo_cmd->add_option("--term", terms, "term text");
    cfo_cmd->callback([&] { finish(make_automaton("fo:" + text)); });

    // expansions and sim
    auto* exp_cmd = sub(&app, "expansions", "expansions of a graph with ports");
    exp_cmd->add_option("-f,--file", file, "graph file")->required();
    exp_cmd->callback([&] {
        auto g = load_structure(file);
        auto stats = classify_ports(g, opt.m);
        auto es = enumerate_expansions(g, opt.m);
        Json ports = Json::object();
        for (auto& [p, c] : stats) ports[p] = {{"class", port_class_name(c.kind)}, {"count", c.count}};
        Json list = Json::array();
        std::string txt;
        for (auto& e : es.expansions) {
            list.push_back(structure_to_json(e.graph));
            std::string labels;
            for (auto& c : e.graph.sort.constants) labels += " " + c;
            txt += std::to_string(e.graph.size) + " vertices:" + labels + "\n";
        }
        emit(Json{{"m", opt.m},
                  {"ports", ports},
                  {"contains_bicomplete", es.contains_bicomplete},
                  {"count", es.expansions.size()},
                  {"expansions", list}},
             (es.contains_bicomplete ? "contains the bicomplete graph\n" : "") + std::to_string(es.expansions.size()) +
                 " expansions\n" + txt);
    });
    std::string evaluator = "zeta";
    auto* sim_cmd = sub(&app, "sim", "decide the expansion equivalence of two graphs");
    sim_cmd->add_option("-f,--file", files, "g1.json g2.json")->required()->expected(2);
    sim_cmd->add_option("--evaluator", evaluator, "congruence on source-separated graphs (zeta)");
    sim_cmd->callback([&] {
        if (evaluator != "zeta") throw CLI::ValidationError("sim supports the zeta evaluator");
        auto r = decide_sim_explained(load_structure(files[0]), load_structure(files[1]), opt.m,
                                      zeta_evaluator(Sig::HR_SEP), opt.depth);
        if (!r.equivalent) verdict.code = 1;
        emit(Json{{"equivalent", r.equivalent}, {"condition", std::string(1, r.condition)}, {"detail", r.detail}},
             std::string(r.equivalent ? "equivalent" : "not equivalent") + " (" + r.condition + "): " + r.detail);
    });

    // modular decomposition
    auto* md_cmd = sub(&app, "moddecomp", "modular decomposition");
    md_cmd->add_option("-f,--file", file, "graph file")->required();
    md_cmd->callback([&] {
        auto tr = modular_decomposition(load_structure(file));
        std::string term = print_term(tree_term(tr));
        emit(Json{{"tree", tree_to_json(tr)}, {"term", term}}, term);
    });
    auto* prime_cmd = sub(&app, "prime", "is the graph prime");
    prime_cmd->add_option("-f,--file", file, "graph file")->required();
    prime_cmd->callback([&] {
        bool p = is_prime(load_structure(file));
        if (!p) verdict.code = 1;
        emit(Json{{"prime", p}}, p ? "prime" : "not prime");
    });

    // clique-width and ECON
    int max_k = 4;
    auto* cwd_cmd = sub(&app, "cwd", "exact clique-width by exhaustive search");
    cwd_cmd->add_option("-f,--file", file, "graph file")->required();
    cwd_cmd->add_option("--max-k", max_k, "largest label count tried");
    cwd_cmd->callback([&] {
        auto k = cwd_exact(load_structure(file), max_k);
        if (!k) verdict.code = 1;
        emit(Json{{"cwd", k ? Json(*k) : Json(nullptr)}, {"max_k", max_k}},
             k ? "clique-width " + std::to_string(*k) : "clique-width above " + std::to_string(max_k));
    });
    auto* econ_cmd = sub(&app, "econ-search", "graphs reached by ECON terms");
    econ_cmd->callback([&] {
        auto r = econ_search(opt.max_size < 0 ? 3 : opt.max_size);
        Json reached = Json::array();
        std::string txt;
        for (auto& [k, t] : r.reached) {
            reached.push_back({{"key", k}, {"term", print_term(t)}});
            txt += print_term(t) + "\n";
        }
        emit(Json{{"graphs", r.reached.size()}, {"states", r.states}, {"reached", reached}},
             std::to_string(r.reached.size()) + " graphs\n" + txt);
    });

    // checks
    auto* check_cmd = sub(&app, "check", "property checks");
    check_cmd->require_subcommand(1);
    auto* cong_cmd = sub(check_cmd, "congruence", "is an evaluator a congruence on a finite domain");
    cong_cmd->add_option("--evaluator", evaluator, "zeta | simplicity | prime | parity | eta-only");
    cong_cmd->callback([&] {
        auto ev = make_evaluator(evaluator);
        CongruenceDomain d;
        d.max_size = opt.max_size < 0 ? 2 : opt.max_size;
        d.loops = evaluator != "prime";
        auto r = check_congruence(ev, d);
        if (!r.ok) verdict.code = 1;
        Json j{{"evaluator", ev.name}, {"sig", sig_name(ev.sig)}, {"congruence", r.ok}, {"domain", r.domain},
               {"classes", r.classes}, {"checks", r.checks}};
        if (!r.ok) {
            j["op"] = r.op;
            j["message"] = r.message;
        }
        emit(j, r.ok ? "congruence (" + std::to_string(r.checks) + " checks)" : "not a congruence: " + r.message);
    });
    int samples = 50;
    std::string oracle;
    auto* oracle_cmd = sub(check_cmd, "oracle", "compare a construction with its brute-force oracle");
    oracle_cmd->add_option("name", oracle, "expansions | simplicity | moddecomp | oplus | compose")->required();
    oracle_cmd->add_option("--samples", samples, "number of random samples");
    oracle_cmd->callback([&] {
        auto r = run_oracle(oracle, samples);
        if (r.failures) verdict.code = 1;
        Json j{{"oracle", oracle}, {"seed", opt.seed}, {"samples", r.samples}, {"failures", r.failures}};
        if (r.failures) j["first_failure"] = r.first;
        emit(j, oracle + ": " + std::to_string(r.failures) + " failures in " + std::to_string(r.samples) + " samples");
    });

    app.parse_complete_callback([&] {
        if (opt.cap > 0) setenv("GRAFT_CAP", std::to_string(opt.cap).c_str(), 1);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "capacity: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const SortError& e) {
        std::cerr << "sort error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return verdict.code;
}
