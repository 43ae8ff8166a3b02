#include "cfga/analyses.hh"

#include <algorithm>

namespace cfga {

namespace {

void accumulate(Counters* stats, const SaturatedAutomaton& sat) {
    if (stats)
        *stats += sat.counters();
}

void check_terminal_word(const Grammar& g, std::span<const Symbol> word) {
    for (Symbol s : word) {
        if (!g.symbols().contains(s))
            throw std::invalid_argument("word symbol outside the grammar");
        if (!g.symbols().is_terminal(s))
            throw std::invalid_argument("word symbol '" + g.symbols().name(s) +
                                        "' is not a terminal");
    }
}

std::vector<Symbol> sorted_by_name(const SymbolTable& symbols, std::vector<Symbol> set) {
    std::sort(set.begin(), set.end(),
              [&](Symbol a, Symbol b) { return symbols.name(a) < symbols.name(b); });
    return set;
}

/// Original variables only; fresh normalization symbols are internal.
std::vector<Symbol> original_variables(const NormalizedGrammar& ng) {
    std::vector<Symbol> out;
    for (uint32_t i = 0; i < ng.original_symbol_count(); ++i)
        if (ng.symbols().is_variable(Symbol{i}))
            out.push_back(Symbol{i});
    return out;
}

std::vector<Symbol> original_terminals(const NormalizedGrammar& ng) {
    std::vector<Symbol> out;
    for (uint32_t i = 0; i < ng.original_symbol_count(); ++i)
        if (ng.symbols().is_terminal(Symbol{i}))
            out.push_back(Symbol{i});
    return out;
}

/// Variables whose self-loop on the single sigma-star / epsilon state was
/// added: the uniform "one saturation yields the whole set" pattern.
std::vector<Symbol> loop_marked_variables(const NormalizedGrammar& ng,
                                          const SaturatedAutomaton& sat) {
    std::vector<Symbol> out;
    for (Symbol v : original_variables(ng))
        if (sat.nfa().has_transition(0, v, 0))
            out.push_back(v);
    return out;
}

/// Productions whose body is all-productive-or-terminal; the grammar the
/// reachability half of the useless test runs on.
Grammar restrict_to_productive(const Grammar& g, const std::vector<Symbol>& productive) {
    std::vector<bool> ok(g.symbols().size(), false);
    for (Symbol v : productive)
        ok[v.id] = true;
    for (uint32_t i = 0; i < g.symbols().size(); ++i)
        if (g.symbols().is_terminal(Symbol{i}))
            ok[i] = true;
    std::vector<Production> kept;
    for (const Production& p : g.productions()) {
        bool all = true;
        for (Symbol s : p.body)
            all = all && ok[s.id];
        if (all)
            kept.push_back(p);
    }
    return Grammar(g.symbols(), std::move(kept), g.start());
}

/// S in pre*(loops* A loops*) for each candidate, one tiny saturation per
/// variable: transition (0, S, 1) of the occurrence automaton.
std::vector<Symbol> occurrence_reachable(const NormalizedGrammar& ng,
                                         const ProductionIndex& index,
                                         std::span<const Symbol> loops,
                                         std::span<const Symbol> candidates,
                                         Counters* stats) {
    std::vector<Symbol> out;
    for (Symbol v : candidates) {
        Nfa pattern = occurrence_automaton(loops, v, ng.symbols().size());
        SaturatedAutomaton sat = saturate(index, pattern);
        accumulate(stats, sat);
        if (sat.nfa().has_transition(0, ng.start(), 1))
            out.push_back(v);
    }
    return out;
}

} // namespace

bool membership(const Grammar& g, std::span<const Symbol> word, Counters* stats) {
    check_terminal_word(g, word);
    NormalizedGrammar ng = normalize(g);
    SaturatedAutomaton sat =
        saturate(build_index(ng), word_automaton(word, ng.symbols().size()));
    accumulate(stats, sat);
    return sat.nfa().has_transition(0, ng.start(), static_cast<uint32_t>(word.size()));
}

ParseResult parse_word(const Grammar& g, std::span<const Symbol> word, Counters* stats) {
    check_terminal_word(g, word);
    NormalizedGrammar ng = normalize(g);
    SaturatedAutomaton sat =
        saturate(build_index(ng), word_automaton(word, ng.symbols().size()));
    accumulate(stats, sat);
    const Transition start_span{0, ng.start(), static_cast<uint32_t>(word.size())};
    if (!sat.nfa().has_transition(start_span))
        return {false, std::move(ng), std::nullopt};
    Derivation d = extract_derivation(sat, start_span);
    return {true, std::move(ng), std::move(d)};
}

std::vector<Symbol> productive_variables(const Grammar& g, Counters* stats) {
    NormalizedGrammar ng = normalize(g);
    std::vector<Symbol> terminals = original_terminals(ng);
    SaturatedAutomaton sat =
        saturate(build_index(ng), sigma_star_automaton(terminals, ng.symbols().size()));
    accumulate(stats, sat);
    return loop_marked_variables(ng, sat);
}

std::vector<Symbol> reachable_variables(const Grammar& g, Counters* stats) {
    // Loops over the whole alphabet, not just terminals: a variable counts
    // as reachable when it appears in any sentential form, whether or not
    // its context can finish deriving terminals.
    NormalizedGrammar ng = normalize(g);
    ProductionIndex index = build_index(ng);
    std::vector<Symbol> all;
    for (uint32_t i = 0; i < ng.symbols().size(); ++i)
        all.push_back(Symbol{i});
    return occurrence_reachable(ng, index, all, original_variables(ng), stats);
}

std::vector<Symbol> useless_variables(const Grammar& g, Counters* stats) {
    std::vector<Symbol> productive = productive_variables(g, stats);
    Grammar restricted = restrict_to_productive(g, productive);
    // With every surviving body productive, terminal contexts are always
    // derivable, so the terminal-loop pattern is exact here.
    NormalizedGrammar ng = normalize(restricted);
    ProductionIndex index = build_index(ng);
    std::vector<Symbol> reachable = occurrence_reachable(
        ng, index, original_terminals(ng), original_variables(ng), stats);

    std::vector<bool> useful(g.symbols().size(), false);
    for (Symbol v : productive) {
        if (std::find(reachable.begin(), reachable.end(), v) != reachable.end())
            useful[v.id] = true;
    }
    std::vector<Symbol> out;
    for (Symbol v : g.variables())
        if (!useful[v.id])
            out.push_back(v);
    return out;
}

bool is_empty(const Grammar& g, Counters* stats) {
    std::vector<Symbol> productive = productive_variables(g, stats);
    return std::find(productive.begin(), productive.end(), g.start()) == productive.end();
}

bool contained_in(const Grammar& g, const Nfa& lbar, Counters* stats) {
    NormalizedGrammar ng = normalize(g);
    SaturatedAutomaton sat = saturate(build_index(ng), lbar);
    accumulate(stats, sat);
    for (uint32_t f : sat.nfa().finals())
        if (sat.nfa().has_transition(lbar.initial(), ng.start(), f))
            return false; // some word of L(g) escapes into the complement
    return true;
}

bool is_finite(const Grammar& g, Counters* stats) {
    std::vector<Symbol> useless = useless_variables(g, stats);
    std::vector<bool> is_useless(g.symbols().size(), false);
    for (Symbol v : useless)
        is_useless[v.id] = true;
    if (is_useless[g.start().id])
        return true; // the language is empty

    std::vector<Production> kept;
    for (const Production& p : g.productions()) {
        bool all = !is_useless[p.lhs.id];
        for (Symbol s : p.body)
            all = all && !(g.symbols().is_variable(s) && is_useless[s.id]);
        if (all)
            kept.push_back(p);
    }
    Grammar reduced(g.symbols(), std::move(kept), g.start());

    NormalizedGrammar ng = normalize(reduced);
    ProductionIndex index = build_index(ng);
    std::vector<Symbol> terminals = original_terminals(ng);
    for (Symbol v : original_variables(ng)) {
        if (is_useless[v.id])
            continue;
        Nfa pattern = pumping_occurrence_automaton(terminals, v, ng.symbols().size());
        SaturatedAutomaton sat = saturate(index, pattern);
        accumulate(stats, sat);
        // A =>* uAv with uv != eps shows up as the initial-to-final A-edge.
        if (sat.nfa().has_transition(0, v, 3))
            return false;
    }
    return true;
}

std::vector<Symbol> nullable_variables(const Grammar& g, Counters* stats) {
    NormalizedGrammar ng = normalize(g);
    SaturatedAutomaton sat =
        saturate(build_index(ng), epsilon_automaton(ng.symbols().size()));
    accumulate(stats, sat);
    return loop_marked_variables(ng, sat);
}

AnalysisReport analyze_membership(const Grammar& g, std::span<const Symbol> word) {
    AnalysisReport r{.query = "member"};
    r.verdict = membership(g, word, &r.counters);
    return r;
}

AnalysisReport analyze_parse(const Grammar& g, std::span<const Symbol> word) {
    AnalysisReport r{.query = "parse"};
    ParseResult p = parse_word(g, word, &r.counters);
    r.verdict = p.in_language;
    r.derivation = std::move(p.derivation);
    r.normalized = std::move(p.normalized);
    return r;
}

AnalysisReport analyze_productive(const Grammar& g) {
    AnalysisReport r{.query = "productive"};
    r.symbols = sorted_by_name(g.symbols(), productive_variables(g, &r.counters));
    return r;
}

AnalysisReport analyze_reachable(const Grammar& g) {
    AnalysisReport r{.query = "reachable"};
    r.symbols = sorted_by_name(g.symbols(), reachable_variables(g, &r.counters));
    return r;
}

AnalysisReport analyze_useless(const Grammar& g) {
    AnalysisReport r{.query = "useless"};
    r.symbols = sorted_by_name(g.symbols(), useless_variables(g, &r.counters));
    return r;
}

AnalysisReport analyze_empty(const Grammar& g) {
    AnalysisReport r{.query = "empty"};
    r.verdict = is_empty(g, &r.counters);
    return r;
}

AnalysisReport analyze_containment(const Grammar& g, const Nfa& lbar) {
    AnalysisReport r{.query = "contain"};
    r.verdict = contained_in(g, lbar, &r.counters);
    return r;
}

AnalysisReport analyze_finite(const Grammar& g) {
    AnalysisReport r{.query = "finite"};
    r.verdict = is_finite(g, &r.counters);
    return r;
}

AnalysisReport analyze_nullable(const Grammar& g) {
    AnalysisReport r{.query = "nullable"};
    r.symbols = sorted_by_name(g.symbols(), nullable_variables(g, &r.counters));
    return r;
}

} // namespace cfga
