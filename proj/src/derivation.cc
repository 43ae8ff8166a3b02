#include "cfga/derivation.hh"

#include <sstream>

namespace cfga {

namespace {

void collect_frontier(const Derivation& d, Word& out) {
    if (!d.production) {
        out.push_back(d.label);
        return;
    }
    for (const Derivation& c : d.children)
        collect_frontier(c, out);
}

bool check_node(const Grammar& g, const Derivation& d, bool require_complete) {
    if (!d.production) {
        if (!d.children.empty())
            return false;
        if (require_complete && g.symbols().is_variable(d.label))
            return false;
        return true;
    }
    if (*d.production >= g.productions().size())
        return false;
    const Production& p = g.production(*d.production);
    if (p.lhs != d.label || p.body.size() != d.children.size())
        return false;
    for (size_t i = 0; i < p.body.size(); ++i) {
        if (d.children[i].label != p.body[i])
            return false;
        if (!check_node(g, d.children[i], require_complete))
            return false;
    }
    return true;
}

} // namespace

Word frontier(const Derivation& d) {
    Word out;
    collect_frontier(d, out);
    return out;
}

bool valid_derivation(const Grammar& g, const Derivation& d, bool require_complete) {
    return check_node(g, d, require_complete);
}

namespace {

Derivation fold_node(const NormalizedGrammar& ng, const Grammar& original,
                     const Derivation& d) {
    if (!d.production) {
        if (ng.is_fresh(d.label))
            throw std::invalid_argument("unexpanded fresh variable in derivation");
        return {d.label, std::nullopt, {}};
    }

    const Production& np = ng.grammar().production(*d.production);
    if (ng.symbol_origin(np.lhs) == SymbolOrigin::wrapper)
        return {np.body[0], std::nullopt, {}}; // wrapper node collapses to its terminal

    const uint32_t origin = ng.production_origin(*d.production);
    if (origin == NormalizedGrammar::no_origin)
        throw std::invalid_argument("derivation node has no originating production");
    const Production& op = original.production(origin);

    // Bodies kept verbatim map one to one; longer bodies were split into a
    // chain through binarization variables which is flattened here.
    std::vector<const Derivation*> parts;
    if (op.body.size() <= 1) {
        for (const Derivation& c : d.children)
            parts.push_back(&c);
    } else {
        const Derivation* cur = &d;
        while (true) {
            if (cur->children.size() != 2)
                throw std::invalid_argument("malformed binarization chain node");
            parts.push_back(&cur->children[0]);
            const Derivation& right = cur->children[1];
            if (ng.symbol_origin(right.label) == SymbolOrigin::binarization) {
                if (!right.production)
                    throw std::invalid_argument("incomplete binarization chain");
                if (ng.production_origin(*right.production) != origin)
                    throw std::invalid_argument("binarization chain crosses productions");
                cur = &right;
            } else {
                parts.push_back(&right);
                break;
            }
        }
    }
    if (parts.size() != op.body.size())
        throw std::invalid_argument("derivation does not match the originating production");

    Derivation out{d.label, origin, {}};
    for (const Derivation* part : parts)
        out.children.push_back(fold_node(ng, original, *part));
    return out;
}

void render_node(const Grammar& g, const Derivation& d, int depth, std::ostringstream& out) {
    for (int i = 0; i < depth; ++i)
        out << "  ";
    if (!d.production) {
        out << g.symbols().name(d.label) << '\n';
        return;
    }
    const Production& p = g.production(*d.production);
    out << g.symbols().name(p.lhs) << " -> "
        << (p.body.empty() ? "eps" : g.symbols().render(p.body)) << '\n';
    for (const Derivation& c : d.children)
        if (c.production || g.symbols().is_variable(c.label))
            render_node(g, c, depth + 1, out);
}

} // namespace

Derivation to_original(const NormalizedGrammar& ng, const Grammar& original,
                       const Derivation& d) {
    return fold_node(ng, original, d);
}

std::string render_derivation(const Grammar& g, const Derivation& d) {
    std::ostringstream out;
    render_node(g, d, 0, out);
    return out.str();
}

} // namespace cfga
