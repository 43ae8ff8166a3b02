/* analyses.hh -- grammar analyses, each phrased as "build the right
 * automaton, saturate, query".
 *
 *   membership   S in pre*({w})
 *   productive   A in pre*(T*)            one saturation for all variables
 *   nullable     A in pre*({eps})         one saturation for all variables
 *   reachable    S in pre*(Sigma* A Sigma*)   per variable
 *   emptiness    S unproductive
 *   containment  S not in pre*(complement of L)
 *   finiteness   no useful A in pre*(T+ A T* | T* A T+)
 */

#ifndef CFGA_ANALYSES_HH_
#define CFGA_ANALYSES_HH_

#include <optional>
#include <string>
#include <vector>

#include "cfga/derivation.hh"
#include "cfga/grammar.hh"
#include "cfga/nfa.hh"
#include "cfga/prestar.hh"

namespace cfga {

/// True iff w is in L(g). Saturates against the word automaton and tests
/// the single transition (q0, start, q_n). `stats` accumulates counters.
bool membership(const Grammar& g, std::span<const Symbol> word, Counters* stats = nullptr);

struct ParseResult {
    bool in_language = false;
    NormalizedGrammar normalized;            // the grammar the derivation is over
    std::optional<Derivation> derivation;    // set iff in_language
};

/// Derivation of w over the normalized grammar, extracted from transition
/// provenance. Words outside the language yield in_language = false.
ParseResult parse_word(const Grammar& g, std::span<const Symbol> word,
                       Counters* stats = nullptr);

/// Variables A with A =>* w for some terminal word w, via pre*(T*).
std::vector<Symbol> productive_variables(const Grammar& g, Counters* stats = nullptr);

/// Variables occurring in some sentential form, via one two-state
/// occurrence query per variable.
std::vector<Symbol> reachable_variables(const Grammar& g, Counters* stats = nullptr);

/// Variables that appear in no terminating derivation from the start
/// symbol: productivity first, then reachability over the grammar
/// restricted to productive bodies.
std::vector<Symbol> useless_variables(const Grammar& g, Counters* stats = nullptr);

/// True iff L(g) is empty, i.e. the start symbol is unproductive.
bool is_empty(const Grammar& g, Counters* stats = nullptr);

/// True iff L(g) is contained in the complement of L(lbar); the caller
/// supplies the complement automaton directly.
bool contained_in(const Grammar& g, const Nfa& lbar, Counters* stats = nullptr);

/// True iff L(g) is finite: after discarding useless symbols, no surviving
/// variable can re-derive itself around at least one terminal.
bool is_finite(const Grammar& g, Counters* stats = nullptr);

/// Variables A with A =>* eps, via pre*({eps}).
std::vector<Symbol> nullable_variables(const Grammar& g, Counters* stats = nullptr);

/// Uniform result record for the CLI and other front ends.
struct AnalysisReport {
    std::string query;
    std::optional<bool> verdict;              // boolean queries
    std::vector<Symbol> symbols;              // set-valued queries, sorted by name
    Counters counters;
    std::optional<Derivation> derivation;     // parse
    std::optional<NormalizedGrammar> normalized; // parse: grammar of the derivation
};

AnalysisReport analyze_membership(const Grammar& g, std::span<const Symbol> word);
AnalysisReport analyze_parse(const Grammar& g, std::span<const Symbol> word);
AnalysisReport analyze_productive(const Grammar& g);
AnalysisReport analyze_reachable(const Grammar& g);
AnalysisReport analyze_useless(const Grammar& g);
AnalysisReport analyze_empty(const Grammar& g);
AnalysisReport analyze_containment(const Grammar& g, const Nfa& lbar);
AnalysisReport analyze_finite(const Grammar& g);
AnalysisReport analyze_nullable(const Grammar& g);

} // namespace cfga

#endif // CFGA_ANALYSES_HH_
