/* nfa.hh -- finite automata over the mixed variable/terminal alphabet,
 * with constant-time transition membership and the adjacency projections
 * the saturation engine relies on. */

#ifndef CFGA_NFA_HH_
#define CFGA_NFA_HH_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cfga/symbol.hh"

namespace cfga {

class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Transition {
    uint32_t from = 0;
    Symbol label;
    uint32_t to = 0;

    friend bool operator==(const Transition&, const Transition&) = default;
    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// Epsilon-free NFA. The transition set supports O(1) amortized membership
/// and insertion: a bit array over states x symbols x states while that
/// fits in memory, a hash set beyond (large subset-construction outputs).
/// Mutable while being built, then treated as immutable and shareable.
class Nfa {
public:
    /// `symbol_count` fixes the symbol universe (all ids that may ever
    /// label a transition); `alphabet` is the subset the automaton is
    /// declared over (drives completion in complement()).
    Nfa(uint32_t state_count, uint32_t symbol_count);

    uint32_t state_count() const { return states_; }
    uint32_t symbol_count() const { return symbols_; }

    void set_initial(uint32_t q);
    uint32_t initial() const { return initial_; }

    void add_final(uint32_t q);
    bool is_final(uint32_t q) const { return final_.at(q); }
    const std::vector<uint32_t>& finals() const { return final_list_; }

    void set_alphabet(std::vector<Symbol> alphabet); // sorted + deduplicated
    const std::vector<Symbol>& alphabet() const { return alphabet_; }

    /// Returns false if the transition was already present.
    bool add_transition(uint32_t from, Symbol label, uint32_t to);
    bool has_transition(uint32_t from, Symbol label, uint32_t to) const;
    bool has_transition(const Transition& t) const { return has_transition(t.from, t.label, t.to); }

    /// Insertion-ordered transition list.
    const std::vector<Transition>& transitions() const { return list_; }

    /// Back(q, C): states q'' with (q, C, q'') a transition.
    const std::vector<uint32_t>& targets(uint32_t q, Symbol label) const;
    /// Front(C, q): states q'' with (q'', C, q) a transition.
    const std::vector<uint32_t>& sources(Symbol label, uint32_t q) const;

    /// Standard subset simulation. Throws std::invalid_argument on a word
    /// symbol outside the symbol universe.
    bool accepts(std::span<const Symbol> word) const;

    /// Audit helper: both adjacency projections re-derived from the
    /// transition list compare equal to the maintained ones.
    bool adjacency_consistent() const;

private:
    uint64_t key(uint32_t from, uint32_t sym, uint32_t to) const;
    uint64_t slot(uint32_t q, uint32_t sym) const;
    void check_state(uint32_t q) const;
    void check_symbol(Symbol s) const;

    uint32_t states_;
    uint32_t symbols_;
    uint32_t initial_ = 0;
    std::vector<bool> final_;
    std::vector<uint32_t> final_list_;
    std::vector<Symbol> alphabet_;
    std::vector<Transition> list_;

    bool dense_;
    std::vector<bool> bits_;
    std::unordered_set<uint64_t> sparse_;
    std::vector<std::vector<uint32_t>> fwd_, bwd_;
    std::unordered_map<uint64_t, std::vector<uint32_t>> fwd_map_, bwd_map_;
};

/// n+1 states accepting exactly {word}. Alphabet = the word's symbols.
Nfa word_automaton(std::span<const Symbol> word, uint32_t symbol_count);

/// One state, a self-loop per symbol; accepts symbols*.
Nfa sigma_star_automaton(std::span<const Symbol> symbols, uint32_t symbol_count);

/// One state, no transitions, initial = final; accepts {eps}.
Nfa epsilon_automaton(uint32_t symbol_count);

/// Two states; accepts loops* mark loops* (one mandatory `mark` between
/// arbitrary strings over `loops`).
Nfa occurrence_automaton(std::span<const Symbol> loops, Symbol mark, uint32_t symbol_count);

/// Four states; accepts loops+ mark loops* | loops* mark loops+, i.e. one
/// `mark` with at least one loop symbol somewhere around it.
Nfa pumping_occurrence_automaton(std::span<const Symbol> loops, Symbol mark,
                                 uint32_t symbol_count);

/// Subset construction, completion with a sink, final-set inversion;
/// accepts alphabet* minus L(a). Determinization is worst-case exponential:
/// past `max_states` subsets a ResourceLimitError is thrown.
Nfa complement(const Nfa& a, std::span<const Symbol> alphabet, uint32_t max_states = 1u << 16);
Nfa complement(const Nfa& a, uint32_t max_states = 1u << 16);

/// GraphViz rendering, deterministic node and edge order. `added` styles
/// the matching transitions dashed; `state_names` overrides q0..qN labels.
std::string to_dot(const Nfa& a, const SymbolTable& symbols,
                   const std::vector<Transition>& added = {},
                   std::span<const std::string> state_names = {});

/// Automaton text format:
///   states: q0 q1 q2
///   initial: q0
///   final: q2
///   q0 a q1
/// Comments as in the grammar format. Epsilon labels are rejected; labels
/// unknown to `symbols` are interned as terminals and reported in
/// `warnings` (they stay inert during saturation).
struct LoadedAutomaton {
    Nfa nfa;
    std::vector<std::string> state_names;
    std::vector<std::string> warnings;
};

LoadedAutomaton parse_automaton(const std::string& text, SymbolTable& symbols);

} // namespace cfga

#endif // CFGA_NFA_HH_
