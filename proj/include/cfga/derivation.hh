/* derivation.hh -- derivation trees witnessing A =>* w. */

#ifndef CFGA_DERIVATION_HH_
#define CFGA_DERIVATION_HH_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfga/grammar.hh"

namespace cfga {

/// One node per production application, children in body order. A node
/// without a production is a leaf: a terminal of the derived word, or a
/// variable left unexpanded (zero-step leaf of a sentential form).
struct Derivation {
    Symbol label;
    std::optional<uint32_t> production; // index into the grammar the tree is over
    std::vector<Derivation> children;
};

/// Left-to-right leaf labels; epsilon productions contribute nothing.
Word frontier(const Derivation& d);

/// Every node applies a real production of `g` whose lhs is the node label
/// and whose body matches the children labels. With `require_complete`,
/// variable leaves without a production are rejected.
bool valid_derivation(const Grammar& g, const Derivation& d, bool require_complete = true);

/// Folds a derivation over the normalized grammar back into one over the
/// original grammar it was produced from: wrapper nodes collapse to their
/// terminal, binarization chains flatten into the original production's
/// body. Production indices in the result refer to `original`.
Derivation to_original(const NormalizedGrammar& ng, const Grammar& original,
                       const Derivation& d);

/// Indented production applications, one per line.
std::string render_derivation(const Grammar& g, const Derivation& d);

} // namespace cfga

#endif // CFGA_DERIVATION_HH_
