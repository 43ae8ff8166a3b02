/* prestar.hh -- the saturation engine.
 *
 * Given a grammar in extended CNF and an epsilon-free automaton A, computes
 * the automaton accepting the set of sentential forms from which some word
 * of L(A) is derivable. No states are added; every added transition is
 * labelled by a variable and carries the justification that licensed it.
 */

#ifndef CFGA_PRESTAR_HH_
#define CFGA_PRESTAR_HH_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>

#include "cfga/derivation.hh"
#include "cfga/grammar.hh"
#include "cfga/nfa.hh"

namespace cfga {

struct Counters {
    uint64_t pops = 0;         // worklist removals
    uint64_t unit_fires = 0;   // unit-production rule executions
    uint64_t binary_fires = 0; // binary-production rule executions (the p*s^3 term)
    uint64_t adds = 0;         // transitions added beyond the input automaton

    Counters& operator+=(const Counters& o);
};

/// One line, fixed key order: {"pops":..,"unit_fires":..,"binary_fires":..,"adds":..}
std::string to_json(const Counters& c);

/// Why a transition is in the result. Unit/binary children always have
/// strictly smaller timestamps, so derivation extraction is well-founded.
struct Provenance {
    enum class Kind : uint8_t { original, terminal, epsilon, unit, binary };

    Kind kind = Kind::original;
    uint32_t production = UINT32_MAX; // index into the production index
    Transition left, right;           // unit uses left only
    uint32_t timestamp = 0;           // insertion sequence number

    uint32_t middle() const { return left.to; } // binary: the meeting state
};

struct SaturateOptions {
    /// When set, the worklist pops a pseudo-random element instead of the
    /// top of the stack. The resulting transition set is identical; only
    /// provenance and counters may differ.
    std::optional<uint64_t> shuffle_seed;
};

class SaturatedAutomaton {
public:
    SaturatedAutomaton(Nfa nfa, std::vector<Provenance> provenance,
                       std::vector<IndexedProduction> productions,
                       std::vector<bool> variable_mask, Counters counters);

    const Nfa& nfa() const { return nfa_; }
    const Counters& counters() const { return counters_; }
    const std::vector<IndexedProduction>& productions() const { return productions_; }
    bool is_variable(Symbol s) const { return s.id < variable_.size() && variable_[s.id]; }

    bool contains(const Transition& t) const { return nfa_.has_transition(t); }
    const Provenance& provenance(const Transition& t) const;
    bool is_added(const Transition& t) const;

    /// Transitions not present in the input automaton, in insertion order.
    std::vector<Transition> added_transitions() const;
    uint64_t added_count() const { return counters_.adds; }

private:
    friend Derivation extract_derivation(const SaturatedAutomaton&, const Transition&);
    uint32_t provenance_slot(const Transition& t) const;

    Nfa nfa_;
    std::vector<Provenance> provenance_; // aligned with nfa_.transitions()
    std::unordered_map<uint64_t, uint32_t> slot_;
    std::vector<IndexedProduction> productions_;
    std::vector<bool> variable_;
    Counters counters_;
};

/// Worklist saturation, one pass per pending transition:
/// seed the worklist with the input transitions, with (q,A,q') for every
/// A->a and (q,a,q') in the input, and with (q,A,q) for every A->eps and
/// state q; then repeatedly pop t=(q,B,q'), insert it if new, and fire the
/// chain/front/back productions of B against the adjacency of what is
/// already confirmed. A seen-guard keeps every transition from entering
/// the worklist twice.
SaturatedAutomaton saturate(const ProductionIndex& index, const Nfa& a,
                            const SaturateOptions& options = {});

/// Membership of a sentential form in the computed predecessor set.
bool prestar_accepts(const SaturatedAutomaton& sat, std::span<const Symbol> form);

/// Structural recursion on provenance: binary justifications expand into
/// both children, unit into one, terminal/epsilon close the node, original
/// transitions become leaves. Throws std::invalid_argument for transitions
/// outside the result or for original transitions labelled by a terminal.
Derivation extract_derivation(const SaturatedAutomaton& sat, const Transition& t);

std::string to_dot(const SaturatedAutomaton& sat, const SymbolTable& symbols,
                   std::span<const std::string> state_names = {});

} // namespace cfga

#endif // CFGA_PRESTAR_HH_
