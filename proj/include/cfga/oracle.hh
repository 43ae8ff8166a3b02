/* oracle.hh -- deliberately naive reference implementations, used by the
 * test suites as independent ground truth. Nothing here shares code with
 * the engine paths it checks. */

#ifndef CFGA_ORACLE_HH_
#define CFGA_ORACLE_HH_

#include <cstdint>
#include <vector>

#include "cfga/grammar.hh"
#include "cfga/nfa.hh"

namespace cfga::oracle {

struct OracleConfig {
    uint32_t max_word_length = 6;
    uint32_t max_bfs_depth = 12;
    uint64_t random_seed = 1;
};

/// Repeated full scans over every production and state pair, adding
/// (q,A,q') whenever a body-labelled path exists, until a pass adds
/// nothing. Returns the fixpoint transition set sorted.
std::vector<Transition> naive_saturate(const NormalizedGrammar& g, const Nfa& a);

/// Full Chomsky normal form (A->BC, A->a only) with epsilon-, unit- and
/// useless-elimination; an independent code path from normalize().
struct CnfGrammar {
    SymbolTable symbols;
    std::vector<Production> productions; // all bodies BC or a
    Symbol start;
    bool start_nullable = false; // eps was in the language
};

CnfGrammar to_full_cnf(const Grammar& g);

/// Classic O(n^3) table decision; eps handled via start_nullable.
bool cyk_membership(const CnfGrammar& g, std::span<const Symbol> word);

/// Breadth-first search over =>, expanding every production at every
/// variable occurrence, pruning forms longer than `max_form_len` and
/// deeper than `depth`. True iff a form accepted by `target` is reached.
/// Sound but depth-bounded; callers keep instances small enough that the
/// bound is exhaustive.
bool bounded_bfs_reaches(const Grammar& g, std::span<const Symbol> from, const Nfa& target,
                         uint32_t depth, uint32_t max_form_len);
bool bounded_bfs_reaches(const Grammar& g, std::span<const Symbol> from, const Nfa& target,
                         const OracleConfig& config);

/// Iterative marking fixpoints and graph reachability, textbook style.
std::vector<Symbol> productive_oracle(const Grammar& g);
std::vector<Symbol> nullable_oracle(const Grammar& g);
std::vector<Symbol> reachable_oracle(const Grammar& g); // BFS from start over bodies
std::vector<Symbol> useless_oracle(const Grammar& g);   // two-pass marking

/// Cycle detection in the variable digraph of the full-CNF conversion.
bool finite_oracle(const Grammar& g);

/// All terminal words of length <= max_len derivable from the start
/// symbol, by exhaustive closure over length-capped sentential forms.
/// Throws std::length_error past `max_forms` visited forms; keep inputs
/// tiny.
std::vector<Word> enumerate_words(const Grammar& g, uint32_t max_len,
                                  size_t max_forms = 1u << 20);

} // namespace cfga::oracle

#endif // CFGA_ORACLE_HH_
