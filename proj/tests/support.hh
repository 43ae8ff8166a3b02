/* support.hh -- deterministic random instances for the test suites.
 * splitmix64-based so results do not depend on the standard library's
 * distribution implementations. */

#ifndef CFGA_TESTS_SUPPORT_HH_
#define CFGA_TESTS_SUPPORT_HH_

#include <cstdint>
#include <string>
#include <vector>

#include "cfga/grammar.hh"
#include "cfga/nfa.hh"

namespace cfga::testgen {

struct Rng {
    uint64_t state;

    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    uint64_t below(uint64_t n) { return n ? next() % n : 0; }
    bool chance(uint64_t percent) { return below(100) < percent; }
};

struct Instance {
    Grammar grammar;
    Nfa automaton;
};

inline SymbolTable make_table(uint32_t variables, uint32_t terminals) {
    SymbolTable t;
    for (uint32_t i = 0; i < variables; ++i)
        t.intern("V" + std::to_string(i), SymbolKind::variable);
    for (uint32_t i = 0; i < terminals; ++i)
        t.intern("t" + std::to_string(i), SymbolKind::terminal);
    return t;
}

/// Random grammar already in extended CNF (bodies BC | a | B | eps).
inline Grammar random_ext_cnf_grammar(Rng& rng, uint32_t max_vars = 4,
                                      uint32_t max_terms = 3, uint32_t max_prods = 8) {
    const uint32_t nv = 1 + static_cast<uint32_t>(rng.below(max_vars));
    const uint32_t nt = 1 + static_cast<uint32_t>(rng.below(max_terms));
    SymbolTable table = make_table(nv, nt);
    auto var = [&] { return Symbol{static_cast<uint32_t>(rng.below(nv))}; };
    auto term = [&] { return Symbol{nv + static_cast<uint32_t>(rng.below(nt))}; };

    std::vector<Production> prods;
    const uint32_t np = static_cast<uint32_t>(rng.below(max_prods + 1));
    for (uint32_t i = 0; i < np; ++i) {
        Production p{var(), {}};
        const uint64_t shape = rng.below(100);
        if (shape < 40)
            p.body = {var(), var()};
        else if (shape < 70)
            p.body = {term()};
        else if (shape < 85)
            p.body = {var()};
        // else epsilon
        prods.push_back(std::move(p));
    }
    return Grammar(std::move(table), std::move(prods), Symbol{0});
}

/// Random general grammar: bodies of length 0..4 mixing any symbols.
inline Grammar random_grammar(Rng& rng, uint32_t max_vars = 4, uint32_t max_terms = 3,
                              uint32_t max_prods = 8, uint32_t max_body = 4) {
    const uint32_t nv = 1 + static_cast<uint32_t>(rng.below(max_vars));
    const uint32_t nt = 1 + static_cast<uint32_t>(rng.below(max_terms));
    SymbolTable table = make_table(nv, nt);

    std::vector<Production> prods;
    const uint32_t np = 1 + static_cast<uint32_t>(rng.below(max_prods));
    for (uint32_t i = 0; i < np; ++i) {
        Production p{Symbol{static_cast<uint32_t>(rng.below(nv))}, {}};
        const uint32_t len = static_cast<uint32_t>(rng.below(max_body + 1));
        for (uint32_t j = 0; j < len; ++j)
            p.body.push_back(Symbol{static_cast<uint32_t>(rng.below(nv + nt))});
        prods.push_back(std::move(p));
    }
    return Grammar(std::move(table), std::move(prods), Symbol{0});
}

/// The grammar format can only express variables that own a rule and
/// terminals that occur in one; gives every silent symbol a use so
/// render/parse round-trips.
inline Grammar make_renderable(const Grammar& g, Rng& rng) {
    std::vector<bool> has_rule(g.symbols().size(), false);
    std::vector<bool> occurs(g.symbols().size(), false);
    for (const Production& p : g.productions()) {
        has_rule[p.lhs.id] = true;
        for (Symbol s : p.body)
            occurs[s.id] = true;
    }
    std::vector<Production> prods = g.productions();
    std::vector<Symbol> terminals = g.terminals();
    for (Symbol v : g.variables())
        if (!has_rule[v.id]) {
            Production p{v, {}};
            if (!terminals.empty() && rng.chance(70))
                p.body = {terminals[rng.below(terminals.size())]};
            prods.push_back(std::move(p));
        }
    for (Symbol t : terminals)
        if (!occurs[t.id])
            prods.push_back({g.variables()[rng.below(g.variables().size())], {t}});
    return Grammar(g.symbols(), std::move(prods), g.start());
}

/// Random automaton over the grammar's symbol table (labels may be
/// variables as well as terminals).
inline Nfa random_automaton(Rng& rng, const Grammar& g, uint32_t max_states = 4,
                            uint32_t max_transitions = 10) {
    const uint32_t ns = 1 + static_cast<uint32_t>(rng.below(max_states));
    const uint32_t nsym = g.symbols().size();
    Nfa a(ns, nsym);
    a.set_initial(0);
    const uint32_t nt = static_cast<uint32_t>(rng.below(max_transitions + 1));
    for (uint32_t i = 0; i < nt; ++i)
        a.add_transition(static_cast<uint32_t>(rng.below(ns)),
                         Symbol{static_cast<uint32_t>(rng.below(nsym))},
                         static_cast<uint32_t>(rng.below(ns)));
    bool any_final = false;
    for (uint32_t q = 0; q < ns; ++q)
        if (rng.chance(40)) {
            a.add_final(q);
            any_final = true;
        }
    if (!any_final && rng.chance(80))
        a.add_final(static_cast<uint32_t>(rng.below(ns)));
    std::vector<Symbol> alphabet;
    for (uint32_t i = 0; i < nsym; ++i)
        alphabet.push_back(Symbol{i});
    a.set_alphabet(std::move(alphabet));
    return a;
}

inline Instance random_instance(Rng& rng) {
    Grammar g = random_ext_cnf_grammar(rng);
    Nfa a = random_automaton(rng, g);
    return {std::move(g), std::move(a)};
}

/// Random terminal word of length <= max_len.
inline Word random_word(Rng& rng, const Grammar& g, uint32_t max_len) {
    std::vector<Symbol> terminals = g.terminals();
    Word w;
    if (terminals.empty())
        return w;
    const uint32_t len = static_cast<uint32_t>(rng.below(max_len + 1));
    for (uint32_t i = 0; i < len; ++i)
        w.push_back(terminals[rng.below(terminals.size())]);
    return w;
}

/// Tries to sample a word of L(g) by random leftmost expansion; falls back
/// to a random word when the grammar will not produce one within bounds.
inline Word sample_word(Rng& rng, const Grammar& g, uint32_t max_len) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        Word form{g.start()};
        for (int step = 0; step < 64; ++step) {
            size_t var_at = form.size();
            for (size_t i = 0; i < form.size(); ++i)
                if (g.symbols().is_variable(form[i])) {
                    var_at = i;
                    break;
                }
            if (var_at == form.size()) {
                if (form.size() <= max_len)
                    return form;
                break;
            }
            std::vector<uint32_t> options;
            for (uint32_t pi = 0; pi < g.productions().size(); ++pi)
                if (g.production(pi).lhs == form[var_at])
                    options.push_back(pi);
            if (options.empty())
                break;
            const Production& p = g.production(options[rng.below(options.size())]);
            Word next(form.begin(), form.begin() + var_at);
            next.insert(next.end(), p.body.begin(), p.body.end());
            next.insert(next.end(), form.begin() + var_at + 1, form.end());
            if (next.size() > max_len + 4)
                break;
            form = std::move(next);
        }
    }
    return random_word(rng, g, max_len);
}

/// All words over `symbols` of length <= max_len, shortest first.
inline std::vector<Word> all_words(std::span<const Symbol> symbols, uint32_t max_len) {
    std::vector<Word> out{{}};
    size_t layer_begin = 0;
    for (uint32_t len = 1; len <= max_len; ++len) {
        const size_t layer_end = out.size();
        for (size_t i = layer_begin; i < layer_end; ++i)
            for (Symbol s : symbols) {
                Word w = out[i];
                w.push_back(s);
                out.push_back(std::move(w));
            }
        layer_begin = layer_end;
    }
    return out;
}

} // namespace cfga::testgen

#endif // CFGA_TESTS_SUPPORT_HH_
