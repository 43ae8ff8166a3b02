#include "cfga/prestar.hh"

#include <algorithm>

namespace cfga {

namespace {

// splitmix64; reproducible across platforms, unlike <random> distributions.
struct SplitMix {
    uint64_t state;
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

struct Pending {
    Transition t;
    Provenance prov;
};

} // namespace

Counters& Counters::operator+=(const Counters& o) {
    pops += o.pops;
    unit_fires += o.unit_fires;
    binary_fires += o.binary_fires;
    adds += o.adds;
    return *this;
}

std::string to_json(const Counters& c) {
    return "{\"pops\":" + std::to_string(c.pops) + ",\"unit_fires\":" +
           std::to_string(c.unit_fires) + ",\"binary_fires\":" +
           std::to_string(c.binary_fires) + ",\"adds\":" + std::to_string(c.adds) + "}";
}

SaturatedAutomaton::SaturatedAutomaton(Nfa nfa, std::vector<Provenance> provenance,
                                       std::vector<IndexedProduction> productions,
                                       std::vector<bool> variable_mask, Counters counters)
    : nfa_(std::move(nfa)), provenance_(std::move(provenance)),
      productions_(std::move(productions)), variable_(std::move(variable_mask)),
      counters_(counters) {
    for (uint32_t i = 0; i < nfa_.transitions().size(); ++i) {
        const Transition& t = nfa_.transitions()[i];
        uint64_t k = (static_cast<uint64_t>(t.from) * nfa_.symbol_count() + t.label.id) *
                         nfa_.state_count() +
                     t.to;
        slot_.emplace(k, i);
    }
}

uint32_t SaturatedAutomaton::provenance_slot(const Transition& t) const {
    uint64_t k = (static_cast<uint64_t>(t.from) * nfa_.symbol_count() + t.label.id) *
                     nfa_.state_count() +
                 t.to;
    auto it = slot_.find(k);
    if (it == slot_.end())
        throw std::invalid_argument("transition is not part of the saturated automaton");
    return it->second;
}

const Provenance& SaturatedAutomaton::provenance(const Transition& t) const {
    return provenance_[provenance_slot(t)];
}

bool SaturatedAutomaton::is_added(const Transition& t) const {
    return provenance(t).kind != Provenance::Kind::original;
}

std::vector<Transition> SaturatedAutomaton::added_transitions() const {
    std::vector<Transition> out;
    for (uint32_t i = 0; i < nfa_.transitions().size(); ++i)
        if (provenance_[i].kind != Provenance::Kind::original)
            out.push_back(nfa_.transitions()[i]);
    return out;
}

SaturatedAutomaton saturate(const ProductionIndex& index, const Nfa& a,
                            const SaturateOptions& options) {
    const uint32_t states = a.state_count();
    const uint32_t symbols = std::max(a.symbol_count(), index.symbol_count());

    Nfa result(states, symbols);
    result.set_initial(a.initial());
    for (uint32_t f : a.finals())
        result.add_final(f);
    {
        std::vector<Symbol> alphabet = a.alphabet();
        alphabet.insert(alphabet.end(), index.occurring().begin(), index.occurring().end());
        result.set_alphabet(std::move(alphabet));
    }

    // seen guards the worklist: no transition is ever pushed twice, so the
    // provenance attached at push time is its first justification.
    const uint64_t universe = static_cast<uint64_t>(states) * states * symbols;
    const bool dense_seen = universe <= (1ull << 26);
    std::vector<bool> seen_bits;
    std::unordered_set<uint64_t> seen_set;
    if (dense_seen)
        seen_bits.assign(universe, false);
    auto key = [&](const Transition& t) {
        return (static_cast<uint64_t>(t.from) * symbols + t.label.id) * states + t.to;
    };

    std::vector<Pending> eta;
    auto push = [&](const Transition& t, const Provenance& prov) {
        const uint64_t k = key(t);
        if (dense_seen) {
            if (seen_bits[k])
                return;
            seen_bits[k] = true;
        } else if (!seen_set.insert(k).second) {
            return;
        }
        eta.push_back({t, prov});
    };

    for (const Transition& t : a.transitions())
        push(t, {Provenance::Kind::original, UINT32_MAX, {}, {}, 0});

    // Terminal productions fire only against input transitions: saturation
    // never adds terminal-labelled ones.
    for (const Transition& t : a.transitions()) {
        if (t.label.id >= index.symbol_count())
            continue;
        for (uint32_t pi : index.term(t.label))
            push({t.from, index.production(pi).lhs, t.to},
                 {Provenance::Kind::terminal, pi, t, {}, 0});
    }
    for (uint32_t pi : index.eps())
        for (uint32_t q = 0; q < states; ++q)
            push({q, index.production(pi).lhs, q},
                 {Provenance::Kind::epsilon, pi, {}, {}, 0});

    SplitMix rng{options.shuffle_seed.value_or(0)};
    std::vector<Provenance> provenance;
    Counters counters;

    while (!eta.empty()) {
        if (options.shuffle_seed) {
            size_t i = static_cast<size_t>(rng.next() % eta.size());
            std::swap(eta[i], eta.back());
        }
        Pending cur = std::move(eta.back());
        eta.pop_back();
        ++counters.pops;

        const Transition t = cur.t;
        if (!result.add_transition(t.from, t.label, t.to))
            continue;
        cur.prov.timestamp = static_cast<uint32_t>(provenance.size());
        if (cur.prov.kind != Provenance::Kind::original)
            ++counters.adds;
        provenance.push_back(cur.prov);

        // t is already in the confirmed set, so the binary rules below can
        // pair it with itself (A -> BB over a self-loop).
        if (t.label.id >= index.symbol_count())
            continue;
        for (uint32_t pi : index.chain(t.label)) {
            ++counters.unit_fires;
            push({t.from, index.production(pi).lhs, t.to},
                 {Provenance::Kind::unit, pi, t, {}, 0});
        }
        for (uint32_t pi : index.front(t.label)) {
            const IndexedProduction& p = index.production(pi);
            for (uint32_t q2 : result.targets(t.to, p.second)) {
                ++counters.binary_fires;
                push({t.from, p.lhs, q2},
                     {Provenance::Kind::binary, pi, t, {t.to, p.second, q2}, 0});
            }
        }
        for (uint32_t pi : index.back(t.label)) {
            const IndexedProduction& p = index.production(pi);
            for (uint32_t q2 : result.sources(p.first, t.from)) {
                // the pair (t, t) of an A->BB self-loop already fired in
                // the front pass of this pop; counting it twice would
                // break the once-per-combination bound
                if (q2 == t.from && p.first == t.label && t.from == t.to)
                    continue;
                ++counters.binary_fires;
                push({q2, p.lhs, t.to},
                     {Provenance::Kind::binary, pi, {q2, p.first, t.from}, t, 0});
            }
        }
    }

    const uint64_t p = index.production_count();
    const uint64_t s = states;
    if (counters.binary_fires > p * s * s * s)
        throw std::logic_error("saturation exceeded the p*s^3 binary-rule bound");
    if (counters.pops > static_cast<uint64_t>(s) * s * symbols)
        throw std::logic_error("saturation popped more transitions than can exist");

    return SaturatedAutomaton(std::move(result), std::move(provenance),
                              index.productions(), index.variable_mask(), counters);
}

bool prestar_accepts(const SaturatedAutomaton& sat, std::span<const Symbol> form) {
    return sat.nfa().accepts(form);
}

namespace {

Derivation extract_node(const SaturatedAutomaton& sat, const Transition& t);

Derivation extract_child(const SaturatedAutomaton& sat, const Transition& t,
                         uint32_t parent_timestamp) {
    if (sat.provenance(t).timestamp >= parent_timestamp)
        throw std::logic_error("provenance timestamps must strictly decrease");
    return extract_node(sat, t);
}

Derivation extract_node(const SaturatedAutomaton& sat, const Transition& t) {
    const Provenance& prov = sat.provenance(t);
    switch (prov.kind) {
    case Provenance::Kind::original:
        return {t.label, std::nullopt, {}};
    case Provenance::Kind::terminal: {
        const IndexedProduction& p = sat.productions()[prov.production];
        return {p.lhs, prov.production, {{p.first, std::nullopt, {}}}};
    }
    case Provenance::Kind::epsilon: {
        const IndexedProduction& p = sat.productions()[prov.production];
        return {p.lhs, prov.production, {}};
    }
    case Provenance::Kind::unit: {
        const IndexedProduction& p = sat.productions()[prov.production];
        Derivation d{p.lhs, prov.production, {}};
        d.children.push_back(extract_child(sat, prov.left, prov.timestamp));
        return d;
    }
    case Provenance::Kind::binary: {
        const IndexedProduction& p = sat.productions()[prov.production];
        Derivation d{p.lhs, prov.production, {}};
        d.children.push_back(extract_child(sat, prov.left, prov.timestamp));
        d.children.push_back(extract_child(sat, prov.right, prov.timestamp));
        return d;
    }
    }
    throw std::logic_error("corrupt provenance kind");
}

} // namespace

Derivation extract_derivation(const SaturatedAutomaton& sat, const Transition& t) {
    const Provenance& prov = sat.provenance(t); // throws if t is absent
    if (prov.kind == Provenance::Kind::original && !sat.is_variable(t.label))
        throw std::invalid_argument(
            "original transition with a terminal label has no derivation");
    return extract_node(sat, t);
}

std::string to_dot(const SaturatedAutomaton& sat, const SymbolTable& symbols,
                   std::span<const std::string> state_names) {
    return to_dot(sat.nfa(), symbols, sat.added_transitions(), state_names);
}

} // namespace cfga
