#include "cfga/nfa.hh"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

namespace cfga {

namespace {

const std::vector<uint32_t> empty_states;

// Dense bit/adjacency storage only while it stays modest; determinized
// complements can have 2^16 states and must fall back to hashing.
constexpr uint64_t dense_bit_limit = 1ull << 26;
constexpr uint64_t dense_slot_limit = 1ull << 20;

} // namespace

Nfa::Nfa(uint32_t state_count, uint32_t symbol_count)
    : states_(state_count), symbols_(symbol_count), final_(state_count, false) {
    if (state_count == 0)
        throw std::invalid_argument("automaton needs at least one state");
    const uint64_t bits = static_cast<uint64_t>(states_) * states_ * symbols_;
    const uint64_t slots = static_cast<uint64_t>(states_) * symbols_;
    dense_ = bits <= dense_bit_limit && slots <= dense_slot_limit;
    if (dense_) {
        bits_.assign(bits, false);
        fwd_.resize(slots);
        bwd_.resize(slots);
    }
}

uint64_t Nfa::key(uint32_t from, uint32_t sym, uint32_t to) const {
    return (static_cast<uint64_t>(from) * symbols_ + sym) * states_ + to;
}

uint64_t Nfa::slot(uint32_t q, uint32_t sym) const {
    return static_cast<uint64_t>(q) * symbols_ + sym;
}

void Nfa::check_state(uint32_t q) const {
    if (q >= states_)
        throw std::out_of_range("state out of range");
}

void Nfa::check_symbol(Symbol s) const {
    if (!s.valid() || s.id >= symbols_)
        throw std::invalid_argument("symbol outside the automaton's universe");
}

void Nfa::set_initial(uint32_t q) {
    check_state(q);
    initial_ = q;
}

void Nfa::add_final(uint32_t q) {
    check_state(q);
    if (!final_[q]) {
        final_[q] = true;
        final_list_.push_back(q);
        std::sort(final_list_.begin(), final_list_.end());
    }
}

void Nfa::set_alphabet(std::vector<Symbol> alphabet) {
    for (Symbol s : alphabet)
        check_symbol(s);
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
    alphabet_ = std::move(alphabet);
}

bool Nfa::add_transition(uint32_t from, Symbol label, uint32_t to) {
    check_state(from);
    check_state(to);
    check_symbol(label);
    const uint64_t k = key(from, label.id, to);
    if (dense_) {
        if (bits_[k])
            return false;
        bits_[k] = true;
        fwd_[slot(from, label.id)].push_back(to);
        bwd_[slot(to, label.id)].push_back(from);
    } else {
        if (!sparse_.insert(k).second)
            return false;
        fwd_map_[slot(from, label.id)].push_back(to);
        bwd_map_[slot(to, label.id)].push_back(from);
    }
    list_.push_back({from, label, to});
    return true;
}

bool Nfa::has_transition(uint32_t from, Symbol label, uint32_t to) const {
    if (from >= states_ || to >= states_ || !label.valid() || label.id >= symbols_)
        return false;
    const uint64_t k = key(from, label.id, to);
    return dense_ ? bool(bits_[k]) : sparse_.count(k) != 0;
}

const std::vector<uint32_t>& Nfa::targets(uint32_t q, Symbol label) const {
    check_state(q);
    check_symbol(label);
    if (dense_)
        return fwd_[slot(q, label.id)];
    auto it = fwd_map_.find(slot(q, label.id));
    return it == fwd_map_.end() ? empty_states : it->second;
}

const std::vector<uint32_t>& Nfa::sources(Symbol label, uint32_t q) const {
    check_state(q);
    check_symbol(label);
    if (dense_)
        return bwd_[slot(q, label.id)];
    auto it = bwd_map_.find(slot(q, label.id));
    return it == bwd_map_.end() ? empty_states : it->second;
}

bool Nfa::accepts(std::span<const Symbol> word) const {
    for (Symbol s : word)
        check_symbol(s);
    std::vector<bool> in_cur(states_, false);
    std::vector<uint32_t> cur{initial_};
    in_cur[initial_] = true;
    for (Symbol s : word) {
        std::vector<bool> in_next(states_, false);
        std::vector<uint32_t> next;
        for (uint32_t q : cur)
            for (uint32_t t : targets(q, s))
                if (!in_next[t]) {
                    in_next[t] = true;
                    next.push_back(t);
                }
        if (next.empty())
            return false;
        cur = std::move(next);
        in_cur = std::move(in_next);
    }
    return std::any_of(cur.begin(), cur.end(), [&](uint32_t q) { return final_[q]; });
}

bool Nfa::adjacency_consistent() const {
    std::map<std::pair<uint64_t, uint32_t>, uint32_t> fwd_count, bwd_count;
    for (const Transition& t : list_) {
        ++fwd_count[{slot(t.from, t.label.id), t.to}];
        ++bwd_count[{slot(t.to, t.label.id), t.from}];
    }
    size_t fwd_total = 0, bwd_total = 0;
    for (uint32_t q = 0; q < states_; ++q)
        for (uint32_t s = 0; s < symbols_; ++s) {
            for (uint32_t t : targets(q, Symbol{s})) {
                if (!fwd_count.count({slot(q, s), t}))
                    return false;
                ++fwd_total;
            }
            for (uint32_t t : sources(Symbol{s}, q)) {
                if (!bwd_count.count({slot(q, s), t}))
                    return false;
                ++bwd_total;
            }
        }
    return fwd_total == list_.size() && bwd_total == list_.size();
}

Nfa word_automaton(std::span<const Symbol> word, uint32_t symbol_count) {
    Nfa a(static_cast<uint32_t>(word.size()) + 1, symbol_count);
    for (uint32_t i = 0; i < word.size(); ++i)
        a.add_transition(i, word[i], i + 1);
    a.set_initial(0);
    a.add_final(static_cast<uint32_t>(word.size()));
    a.set_alphabet({word.begin(), word.end()});
    return a;
}

Nfa sigma_star_automaton(std::span<const Symbol> symbols, uint32_t symbol_count) {
    Nfa a(1, symbol_count);
    for (Symbol s : symbols)
        a.add_transition(0, s, 0);
    a.set_initial(0);
    a.add_final(0);
    a.set_alphabet({symbols.begin(), symbols.end()});
    return a;
}

Nfa epsilon_automaton(uint32_t symbol_count) {
    Nfa a(1, symbol_count);
    a.set_initial(0);
    a.add_final(0);
    return a;
}

Nfa occurrence_automaton(std::span<const Symbol> loops, Symbol mark, uint32_t symbol_count) {
    Nfa a(2, symbol_count);
    for (Symbol s : loops) {
        a.add_transition(0, s, 0);
        a.add_transition(1, s, 1);
    }
    a.add_transition(0, mark, 1);
    a.set_initial(0);
    a.add_final(1);
    std::vector<Symbol> alphabet{loops.begin(), loops.end()};
    alphabet.push_back(mark);
    a.set_alphabet(std::move(alphabet));
    return a;
}

Nfa pumping_occurrence_automaton(std::span<const Symbol> loops, Symbol mark,
                                 uint32_t symbol_count) {
    // 0: before mark, no loop symbol yet; 1: before mark, at least one;
    // 2: after mark, none anywhere; 3: after mark, at least one somewhere.
    Nfa a(4, symbol_count);
    for (Symbol s : loops) {
        a.add_transition(0, s, 1);
        a.add_transition(1, s, 1);
        a.add_transition(2, s, 3);
        a.add_transition(3, s, 3);
    }
    a.add_transition(0, mark, 2);
    a.add_transition(1, mark, 3);
    a.set_initial(0);
    a.add_final(3);
    std::vector<Symbol> alphabet{loops.begin(), loops.end()};
    alphabet.push_back(mark);
    a.set_alphabet(std::move(alphabet));
    return a;
}

Nfa complement(const Nfa& a, std::span<const Symbol> alphabet, uint32_t max_states) {
    std::vector<Symbol> sigma{alphabet.begin(), alphabet.end()};
    std::sort(sigma.begin(), sigma.end());
    sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());

    using Subset = std::vector<uint32_t>; // sorted
    std::map<Subset, uint32_t> ids;
    std::vector<Subset> subsets;
    std::vector<std::vector<uint32_t>> table; // subset id x sigma index -> subset id

    auto id_of = [&](Subset s) {
        auto it = ids.find(s);
        if (it != ids.end())
            return it->second;
        if (subsets.size() >= max_states)
            throw ResourceLimitError("complement: determinization exceeded " +
                                     std::to_string(max_states) + " states");
        uint32_t id = static_cast<uint32_t>(subsets.size());
        ids.emplace(s, id);
        subsets.push_back(std::move(s));
        table.emplace_back();
        return id;
    };

    id_of({a.initial()});
    for (uint32_t cur = 0; cur < subsets.size(); ++cur) {
        table[cur].resize(sigma.size());
        for (size_t si = 0; si < sigma.size(); ++si) {
            std::vector<bool> mark(a.state_count(), false);
            Subset next;
            for (uint32_t q : subsets[cur])
                for (uint32_t t : a.targets(q, sigma[si]))
                    if (!mark[t]) {
                        mark[t] = true;
                        next.push_back(t);
                    }
            std::sort(next.begin(), next.end());
            table[cur][si] = id_of(std::move(next));
        }
    }

    Nfa out(static_cast<uint32_t>(subsets.size()), a.symbol_count());
    out.set_initial(0);
    for (uint32_t i = 0; i < subsets.size(); ++i) {
        for (size_t si = 0; si < sigma.size(); ++si)
            out.add_transition(i, sigma[si], table[i][si]);
        bool accepts_original = std::any_of(subsets[i].begin(), subsets[i].end(),
                                            [&](uint32_t q) { return a.is_final(q); });
        if (!accepts_original)
            out.add_final(i);
    }
    out.set_alphabet(sigma);
    return out;
}

Nfa complement(const Nfa& a, uint32_t max_states) {
    return complement(a, a.alphabet(), max_states);
}

std::string to_dot(const Nfa& a, const SymbolTable& symbols,
                   const std::vector<Transition>& added,
                   std::span<const std::string> state_names) {
    auto escape = [](const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\')
                out += '\\';
            out += c;
        }
        return out;
    };
    auto state_label = [&](uint32_t q) {
        return q < state_names.size() ? escape(state_names[q]) : "q" + std::to_string(q);
    };

    std::ostringstream out;
    out << "digraph nfa {\n  rankdir=LR;\n  node [shape=circle];\n";
    out << "  __start [shape=point];\n";
    for (uint32_t q = 0; q < a.state_count(); ++q) {
        out << "  n" << q << " [label=\"" << state_label(q) << "\"";
        if (a.is_final(q))
            out << ", shape=doublecircle";
        out << "];\n";
    }
    out << "  __start -> n" << a.initial() << ";\n";

    std::vector<Transition> edges = a.transitions();
    std::sort(edges.begin(), edges.end());
    std::vector<Transition> dashed = added;
    std::sort(dashed.begin(), dashed.end());
    for (const Transition& t : edges) {
        out << "  n" << t.from << " -> n" << t.to << " [label=\""
            << escape(symbols.name(t.label)) << "\"";
        if (std::binary_search(dashed.begin(), dashed.end(), t))
            out << ", style=dashed";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

LoadedAutomaton parse_automaton(const std::string& text, SymbolTable& symbols) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    std::vector<std::string> state_names;
    std::unordered_map<std::string, uint32_t> state_ids;
    std::optional<std::string> initial_name;
    std::vector<std::string> final_names;
    std::vector<std::array<std::string, 3>> raw_transitions;
    std::vector<int> transition_lines;

    while (std::getline(in, line)) {
        ++line_no;
        std::vector<std::string> tokens;
        {
            std::istringstream ls(line);
            std::string tok;
            while (ls >> tok) {
                if (tok[0] == '#')
                    break;
                tokens.push_back(tok);
            }
        }
        if (tokens.empty())
            continue;
        if (tokens[0] == "states:") {
            if (!state_names.empty())
                throw ParseError(line_no, "duplicate states: line");
            for (size_t i = 1; i < tokens.size(); ++i) {
                if (state_ids.count(tokens[i]))
                    throw ParseError(line_no, "duplicate state '" + tokens[i] + "'");
                state_ids.emplace(tokens[i], static_cast<uint32_t>(state_names.size()));
                state_names.push_back(tokens[i]);
            }
            if (state_names.empty())
                throw ParseError(line_no, "states: needs at least one state");
            continue;
        }
        if (tokens[0] == "initial:") {
            if (tokens.size() != 2)
                throw ParseError(line_no, "initial: expects exactly one state");
            if (initial_name)
                throw ParseError(line_no, "duplicate initial: line");
            initial_name = tokens[1];
            continue;
        }
        if (tokens[0] == "final:") {
            for (size_t i = 1; i < tokens.size(); ++i)
                final_names.push_back(tokens[i]);
            continue;
        }
        if (tokens.size() != 3)
            throw ParseError(line_no, "expected '<state> <symbol> <state>'");
        raw_transitions.push_back({tokens[0], tokens[1], tokens[2]});
        transition_lines.push_back(line_no);
    }

    if (state_names.empty())
        throw ParseError(line_no ? line_no : 1, "missing states: line");
    if (!initial_name)
        throw ParseError(line_no, "missing initial: line");

    auto state_of = [&](const std::string& name, int at_line) {
        auto it = state_ids.find(name);
        if (it == state_ids.end())
            throw ParseError(at_line, "unknown state '" + name + "'");
        return it->second;
    };

    std::vector<std::string> warnings;
    // Interning new labels first keeps the final table size known before
    // the Nfa's symbol universe is fixed.
    std::vector<Symbol> labels;
    for (size_t i = 0; i < raw_transitions.size(); ++i) {
        const std::string& label = raw_transitions[i][1];
        if (label == "eps")
            throw ParseError(transition_lines[i], "epsilon transitions are not supported");
        if (auto s = symbols.find(label)) {
            labels.push_back(*s);
        } else {
            labels.push_back(symbols.intern(label, SymbolKind::terminal));
            warnings.push_back("label '" + label +
                               "' does not occur in the grammar; transitions on it stay inert");
        }
    }

    Nfa a(static_cast<uint32_t>(state_names.size()), symbols.size());
    a.set_initial(state_of(*initial_name, line_no));
    for (const std::string& f : final_names)
        a.add_final(state_of(f, line_no));
    for (size_t i = 0; i < raw_transitions.size(); ++i)
        a.add_transition(state_of(raw_transitions[i][0], transition_lines[i]), labels[i],
                         state_of(raw_transitions[i][2], transition_lines[i]));
    a.set_alphabet(labels);
    return {std::move(a), std::move(state_names), std::move(warnings)};
}

} // namespace cfga
