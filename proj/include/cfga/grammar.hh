/* grammar.hh -- context-free grammars, the text format, normalization to
 * extended Chomsky normal form, and the production index consumed by the
 * saturation engine. */

#ifndef CFGA_GRAMMAR_HH_
#define CFGA_GRAMMAR_HH_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfga/symbol.hh"

namespace cfga {

struct Production {
    Symbol lhs;
    Word body; // empty body = epsilon production

    friend bool operator==(const Production&, const Production&) = default;
};

/// Immutable after construction; safe to share read-only across threads.
class Grammar {
public:
    Grammar(SymbolTable symbols, std::vector<Production> productions, Symbol start);

    const SymbolTable& symbols() const { return symbols_; }
    const std::vector<Production>& productions() const { return productions_; }
    const Production& production(uint32_t i) const { return productions_.at(i); }
    Symbol start() const { return start_; }

    std::vector<Symbol> variables() const { return symbols_.variables(); }
    std::vector<Symbol> terminals() const { return symbols_.terminals(); }

    /// Same grammar with a different start variable.
    Grammar with_start(Symbol start) const;

private:
    SymbolTable symbols_;
    std::vector<Production> productions_;
    Symbol start_;
};

/// Grammar text format:
///   # comment (any token starting with '#' eats the rest of the line)
///   start: S          -- optional, at most once; default is the first LHS
///   S -> A B | a
///   A -> eps
/// Tokens are whitespace-separated. Every LHS token is a variable, every
/// other token a terminal. `eps` denotes the empty body and must stand
/// alone in its alternative.
Grammar parse_grammar(const std::string& text);

/// Emits the same format, rules grouped by LHS in first-appearance order.
std::string render_grammar(const Grammar& g);

/// Name-level equality: same variable/terminal name sets, same start name,
/// same production multiset. Ignores symbol ids and production order.
bool structurally_equal(const Grammar& a, const Grammar& b);

enum class ProductionShape : uint8_t { binary, terminal, unit, epsilon };

enum class SymbolOrigin : uint8_t { original, wrapper, binarization };

/// Extended CNF: every body is one of A->BC, A->a, A->B, A->eps.
/// Fresh terminal wrappers are named `_<terminal>`, binarization variables
/// `<lhs>#<k>` with a counter reset per normalize() call; both uniquified
/// against clashes with user symbols.
class NormalizedGrammar {
public:
    NormalizedGrammar(Grammar g, std::vector<uint32_t> production_origin,
                      std::vector<SymbolOrigin> symbol_origin, uint32_t original_symbols);

    static constexpr uint32_t no_origin = UINT32_MAX;

    const Grammar& grammar() const { return g_; }
    const SymbolTable& symbols() const { return g_.symbols(); }
    Symbol start() const { return g_.start(); }

    /// Index of the original production a normalized production came from;
    /// no_origin for shared terminal-wrapper productions.
    uint32_t production_origin(uint32_t i) const { return production_origin_.at(i); }
    SymbolOrigin symbol_origin(Symbol s) const { return symbol_origin_.at(s.id); }
    bool is_fresh(Symbol s) const { return symbol_origin(s) != SymbolOrigin::original; }

    /// Count of symbols that already existed in the input grammar.
    uint32_t original_symbol_count() const { return original_symbols_; }

private:
    Grammar g_;
    std::vector<uint32_t> production_origin_;
    std::vector<SymbolOrigin> symbol_origin_;
    uint32_t original_symbols_;
};

/// Language-preserving conversion to extended CNF. Bodies of length <= 1
/// are kept verbatim; longer bodies get terminal wrappers and a chain of
/// binary productions. Idempotent on already-normalized input.
NormalizedGrammar normalize(const Grammar& g);

ProductionShape shape_of(const Grammar& g, const Production& p);

struct IndexedProduction {
    Symbol lhs;
    ProductionShape shape;
    Symbol first;  // terminal of A->a, B of A->B, B of A->BC
    Symbol second; // C of A->BC
};

/// Productions bucketed by body shape and indexed by body symbol, O(p) to
/// build. For A->BC the production appears in front[B] and back[C].
class ProductionIndex {
public:
    ProductionIndex(std::vector<IndexedProduction> productions, std::vector<bool> variable_mask,
                    std::vector<Symbol> occurring);

    uint32_t production_count() const { return static_cast<uint32_t>(productions_.size()); }
    uint32_t symbol_count() const { return symbol_count_; }
    bool is_variable(Symbol s) const { return s.id < variable_.size() && variable_[s.id]; }
    const std::vector<bool>& variable_mask() const { return variable_; }
    const IndexedProduction& production(uint32_t i) const { return productions_.at(i); }
    const std::vector<IndexedProduction>& productions() const { return productions_; }

    const std::vector<uint32_t>& chain(Symbol b) const { return chain_.at(b.id); }
    const std::vector<uint32_t>& front(Symbol b) const { return front_.at(b.id); }
    const std::vector<uint32_t>& back(Symbol b) const { return back_.at(b.id); }
    const std::vector<uint32_t>& term(Symbol a) const { return term_.at(a.id); }
    const std::vector<uint32_t>& eps() const { return eps_; }

    /// Symbols occurring in at least one production, sorted by id.
    const std::vector<Symbol>& occurring() const { return occurring_; }

private:
    std::vector<IndexedProduction> productions_;
    uint32_t symbol_count_;
    std::vector<bool> variable_;
    std::vector<std::vector<uint32_t>> chain_, front_, back_, term_;
    std::vector<uint32_t> eps_;
    std::vector<Symbol> occurring_;
};

ProductionIndex build_index(const NormalizedGrammar& g);

/// All symbols appearing in some production (lhs or body), sorted by id.
/// Symbols outside this set can never take part in saturation.
std::vector<Symbol> occurring_symbols(const NormalizedGrammar& g);

} // namespace cfga

#endif // CFGA_GRAMMAR_HH_
