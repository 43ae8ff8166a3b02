#include "cfga/cli.hh"

#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "cfga/analyses.hh"
#include "cfga/grammar.hh"
#include "cfga/nfa.hh"
#include "cfga/oracle.hh"
#include "cfga/prestar.hh"

namespace cfga::cli {

namespace {

constexpr int exit_positive = 0;
constexpr int exit_negative = 1;
constexpr int exit_usage = 2;
constexpr int exit_resource = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

Word resolve_word(const SymbolTable& symbols, const std::string& text) {
    Word word;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        auto s = symbols.find(tok);
        if (!s)
            throw std::runtime_error("unknown symbol '" + tok + "' in word");
        if (!symbols.is_terminal(*s))
            throw std::runtime_error("word symbol '" + tok + "' is not a terminal");
        word.push_back(*s);
    }
    return word;
}

Grammar load_grammar(const std::string& path, const std::string& start_override) {
    Grammar g = parse_grammar(read_file(path));
    if (start_override.empty())
        return g;
    auto s = g.symbols().find(start_override);
    if (!s || !g.symbols().is_variable(*s))
        throw std::runtime_error("--start names unknown variable '" + start_override + "'");
    return g.with_start(*s);
}

void emit_inert_label_warnings(const NormalizedGrammar& ng, const Nfa& a,
                               const SymbolTable& symbols, std::ostream& err) {
    std::set<uint32_t> occurring;
    for (Symbol s : occurring_symbols(ng))
        occurring.insert(s.id);
    std::set<std::string> warned;
    for (const Transition& t : a.transitions()) {
        if (occurring.count(t.label.id))
            continue;
        const std::string& name = symbols.name(t.label);
        if (warned.insert(name).second)
            err << "warning: label '" << name
                << "' occurs in no production; transitions on it stay inert\n";
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"grammar analysis via predecessor saturation", "cfga"};
    app.require_subcommand(1);

    std::string grammar_path, automaton_path, word_text, start_override, dot_path;
    std::string bfs_from;
    bool stats = false, do_complement = false;
    uint32_t max_dfa_states = 1u << 16;
    std::optional<uint64_t> seed;
    uint32_t bfs_depth = 12, bfs_max_form = 8;

    auto add_grammar = [&](CLI::App* cmd) {
        cmd->add_option("-g,--grammar", grammar_path, "grammar file")->required();
        cmd->add_option("--start", start_override, "override the start variable");
    };

    CLI::App* c_prestar = app.add_subcommand("prestar", "saturate an automaton and list the added transitions");
    add_grammar(c_prestar);
    c_prestar->add_option("-a,--automaton", automaton_path, "automaton file")->required();
    c_prestar->add_option("--dot", dot_path, "write the saturated automaton as DOT");
    c_prestar->add_flag("--stats", stats, "emit counters as one JSON line on stderr");
    c_prestar->add_option("--seed", seed, "randomize worklist order (diagnostic)");

    CLI::App* c_member = app.add_subcommand("member", "is the word in the language?");
    add_grammar(c_member);
    c_member->add_option("-w,--word", word_text, "whitespace-separated terminals")->required();
    c_member->add_option("--dot", dot_path, "write the saturated word automaton as DOT");
    c_member->add_flag("--stats", stats, "emit counters as one JSON line on stderr");

    CLI::App* c_parse = app.add_subcommand("parse", "derivation of the word, if any");
    add_grammar(c_parse);
    c_parse->add_option("-w,--word", word_text, "whitespace-separated terminals")->required();
    c_parse->add_option("--dot", dot_path, "write the saturated word automaton as DOT");
    c_parse->add_flag("--stats", stats, "emit counters as one JSON line on stderr");

    CLI::App* c_empty = app.add_subcommand("empty", "is the language empty?");
    add_grammar(c_empty);
    c_empty->add_flag("--stats", stats, "emit counters as one JSON line on stderr");

    CLI::App* c_finite = app.add_subcommand("finite", "is the language finite?");
    add_grammar(c_finite);
    c_finite->add_flag("--stats", stats, "emit counters as one JSON line on stderr");

    CLI::App* c_useless = app.add_subcommand("useless", "variables useless for the start symbol");
    add_grammar(c_useless);
    c_useless->add_flag("--stats", stats, "emit counters as one JSON line on stderr");

    CLI::App* c_productive = app.add_subcommand("productive", "variables deriving some terminal word");
    add_grammar(c_productive);
    c_productive->add_flag("--stats", stats, "emit counters as one JSON line on stderr");

    CLI::App* c_reachable = app.add_subcommand("reachable", "variables occurring in sentential forms");
    add_grammar(c_reachable);
    c_reachable->add_flag("--stats", stats, "emit counters as one JSON line on stderr");

    CLI::App* c_nullable = app.add_subcommand("nullable", "variables deriving the empty word");
    add_grammar(c_nullable);
    c_nullable->add_flag("--stats", stats, "emit counters as one JSON line on stderr");

    CLI::App* c_contain = app.add_subcommand("contain", "is the language contained in a regular one?");
    add_grammar(c_contain);
    c_contain->add_option("-a,--automaton", automaton_path,
                          "complement automaton, or the language itself with --complement")
        ->required();
    c_contain->add_flag("--complement", do_complement,
                        "complement the automaton internally over its alphabet plus the "
                        "grammar's terminals");
    c_contain->add_option("--max-dfa-states", max_dfa_states,
                          "determinization cap for --complement");
    c_contain->add_flag("--stats", stats, "emit counters as one JSON line on stderr");

    CLI::App* c_oracle = app.add_subcommand("oracle", "naive reference algorithms (debugging)");
    c_oracle->group(""); // hidden
    std::string oracle_mode;
    c_oracle->add_option("mode", oracle_mode, "naive-prestar | cyk | bfs")->required();
    c_oracle->add_option("-g,--grammar", grammar_path)->required();
    c_oracle->add_option("-a,--automaton", automaton_path);
    c_oracle->add_option("-w,--word", word_text);
    c_oracle->add_option("--start", start_override);
    c_oracle->add_option("--from", bfs_from);
    c_oracle->add_option("--depth", bfs_depth);
    c_oracle->add_option("--max-form-len", bfs_max_form);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return exit_positive;
        }
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (app.got_subcommand(c_prestar)) {
            Grammar g = load_grammar(grammar_path, start_override);
            NormalizedGrammar ng = normalize(g);
            SymbolTable table = ng.symbols();
            LoadedAutomaton loaded = parse_automaton(read_file(automaton_path), table);
            emit_inert_label_warnings(ng, loaded.nfa, table, err);
            SaturatedAutomaton sat = saturate(build_index(ng), loaded.nfa, {seed});
            for (const Transition& t : sat.added_transitions())
                out << loaded.state_names[t.from] << ' ' << table.name(t.label) << ' '
                    << loaded.state_names[t.to] << '\n';
            if (!dot_path.empty())
                write_file(dot_path, to_dot(sat, table, loaded.state_names));
            if (stats)
                err << to_json(sat.counters()) << '\n';
            return exit_positive;
        }

        if (app.got_subcommand(c_member) || app.got_subcommand(c_parse)) {
            Grammar g = load_grammar(grammar_path, start_override);
            Word word = resolve_word(g.symbols(), word_text);
            AnalysisReport report = app.got_subcommand(c_member)
                                        ? analyze_membership(g, word)
                                        : analyze_parse(g, word);
            if (!dot_path.empty()) {
                // Re-run the saturation to export it; analyses stay pure.
                NormalizedGrammar ng = normalize(g);
                SaturatedAutomaton sat =
                    saturate(build_index(ng), word_automaton(word, ng.symbols().size()));
                write_file(dot_path, to_dot(sat, ng.symbols()));
            }
            if (stats)
                err << to_json(report.counters) << '\n';
            if (!*report.verdict) {
                out << "not in language\n";
                return exit_negative;
            }
            if (report.derivation)
                out << render_derivation(report.normalized->grammar(), *report.derivation);
            else
                out << "in language\n";
            return exit_positive;
        }

        if (app.got_subcommand(c_contain)) {
            Grammar g = load_grammar(grammar_path, start_override);
            NormalizedGrammar ng = normalize(g);
            SymbolTable table = ng.symbols();
            LoadedAutomaton loaded = parse_automaton(read_file(automaton_path), table);
            Nfa lbar = std::move(loaded.nfa);
            if (do_complement) {
                std::vector<Symbol> alphabet = lbar.alphabet();
                for (uint32_t i = 0; i < ng.original_symbol_count(); ++i)
                    if (table.is_terminal(Symbol{i}))
                        alphabet.push_back(Symbol{i});
                lbar = complement(lbar, alphabet, max_dfa_states);
            }
            AnalysisReport report = analyze_containment(g, lbar);
            if (stats)
                err << to_json(report.counters) << '\n';
            out << (*report.verdict ? "contained\n" : "not contained\n");
            return *report.verdict ? exit_positive : exit_negative;
        }

        const std::vector<std::pair<CLI::App*, AnalysisReport (*)(const Grammar&)>> simple{
            {c_empty, analyze_empty},
            {c_finite, analyze_finite},
            {c_useless, analyze_useless},
            {c_productive, analyze_productive},
            {c_reachable, analyze_reachable},
            {c_nullable, analyze_nullable},
        };
        for (const auto& [cmd, fn] : simple) {
            if (!app.got_subcommand(cmd))
                continue;
            Grammar g = load_grammar(grammar_path, start_override);
            AnalysisReport report = fn(g);
            if (stats)
                err << to_json(report.counters) << '\n';
            if (report.verdict) {
                if (cmd == c_empty)
                    out << (*report.verdict ? "empty\n" : "non-empty\n");
                else
                    out << (*report.verdict ? "finite\n" : "infinite\n");
                return *report.verdict ? exit_positive : exit_negative;
            }
            for (Symbol s : report.symbols)
                out << g.symbols().name(s) << '\n';
            return exit_positive;
        }

        if (app.got_subcommand(c_oracle)) {
            Grammar g = load_grammar(grammar_path, start_override);
            if (oracle_mode == "naive-prestar") {
                if (automaton_path.empty())
                    throw std::runtime_error("naive-prestar needs --automaton");
                NormalizedGrammar ng = normalize(g);
                SymbolTable table = ng.symbols();
                LoadedAutomaton loaded = parse_automaton(read_file(automaton_path), table);
                for (const Transition& t : oracle::naive_saturate(ng, loaded.nfa))
                    out << loaded.state_names[t.from] << ' ' << table.name(t.label) << ' '
                        << loaded.state_names[t.to] << '\n';
                return exit_positive;
            }
            if (oracle_mode == "cyk") {
                Word word = resolve_word(g.symbols(), word_text);
                bool in = oracle::cyk_membership(oracle::to_full_cnf(g), word);
                out << (in ? "in language\n" : "not in language\n");
                return in ? exit_positive : exit_negative;
            }
            if (oracle_mode == "bfs") {
                if (automaton_path.empty())
                    throw std::runtime_error("bfs needs --automaton");
                SymbolTable table = g.symbols();
                LoadedAutomaton loaded = parse_automaton(read_file(automaton_path), table);
                Word from;
                std::istringstream in(bfs_from);
                std::string tok;
                while (in >> tok) {
                    auto s = table.find(tok);
                    if (!s)
                        throw std::runtime_error("unknown symbol '" + tok + "' in --from");
                    from.push_back(*s);
                }
                bool reached =
                    oracle::bounded_bfs_reaches(g, from, loaded.nfa, bfs_depth, bfs_max_form);
                out << (reached ? "reached\n" : "not reached\n");
                return reached ? exit_positive : exit_negative;
            }
            throw std::runtime_error("unknown oracle mode '" + oracle_mode + "'");
        }

        throw std::runtime_error("no subcommand selected");
    } catch (const ResourceLimitError& e) {
        err << "error: " << e.what() << '\n';
        return exit_resource;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
}

} // namespace cfga::cli
