#include "cfga/oracle.hh"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace cfga::oracle {

namespace {

std::vector<Symbol> mask_to_symbols(const std::vector<bool>& mask) {
    std::vector<Symbol> out;
    for (uint32_t i = 0; i < mask.size(); ++i)
        if (mask[i])
            out.push_back(Symbol{i});
    return out;
}

} // namespace

std::vector<Transition> naive_saturate(const NormalizedGrammar& g, const Nfa& a) {
    const Grammar& ng = g.grammar();
    const uint32_t states = a.state_count();

    std::set<Transition> delta;
    for (const Transition& t : a.transitions())
        delta.insert(t);

    // Full rescans until a pass adds nothing.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Production& p : ng.productions()) {
            for (uint32_t q = 0; q < states; ++q) {
                for (uint32_t q2 = 0; q2 < states; ++q2) {
                    bool path = false;
                    switch (p.body.size()) {
                    case 0:
                        path = q == q2;
                        break;
                    case 1:
                        path = delta.count({q, p.body[0], q2}) != 0;
                        break;
                    case 2:
                        for (uint32_t mid = 0; mid < states && !path; ++mid)
                            path = delta.count({q, p.body[0], mid}) &&
                                   delta.count({mid, p.body[1], q2});
                        break;
                    default:
                        throw std::invalid_argument("naive_saturate needs extended CNF");
                    }
                    if (path && delta.insert({q, p.lhs, q2}).second)
                        changed = true;
                }
            }
        }
    }
    return {delta.begin(), delta.end()};
}

CnfGrammar to_full_cnf(const Grammar& g) {
    SymbolTable symbols = g.symbols();
    const Symbol start = g.start();

    // Nullable marking.
    std::vector<bool> nullable(symbols.size(), false);
    for (bool changed = true; changed;) {
        changed = false;
        for (const Production& p : g.productions()) {
            if (nullable[p.lhs.id])
                continue;
            bool all = true;
            for (Symbol s : p.body)
                all = all && symbols.is_variable(s) && nullable[s.id];
            if (all) {
                nullable[p.lhs.id] = true;
                changed = true;
            }
        }
    }

    // Epsilon elimination: every way of omitting nullable body symbols.
    std::set<std::pair<uint32_t, Word>> body_set;
    for (const Production& p : g.productions()) {
        std::vector<size_t> optional;
        for (size_t i = 0; i < p.body.size(); ++i)
            if (symbols.is_variable(p.body[i]) && nullable[p.body[i].id])
                optional.push_back(i);
        if (optional.size() > 20)
            throw std::invalid_argument("oracle CNF conversion: body too long");
        for (uint64_t mask = 0; mask < (1ull << optional.size()); ++mask) {
            Word body;
            size_t opt = 0;
            for (size_t i = 0; i < p.body.size(); ++i) {
                if (opt < optional.size() && optional[opt] == i) {
                    if (mask & (1ull << opt))
                        body.push_back(p.body[i]);
                    ++opt;
                } else {
                    body.push_back(p.body[i]);
                }
            }
            if (!body.empty())
                body_set.insert({p.lhs.id, std::move(body)});
        }
    }

    // Unit elimination: A gets every non-unit body of everything in its
    // unit closure.
    auto is_unit = [&](const std::pair<uint32_t, Word>& p) {
        return p.second.size() == 1 && symbols.is_variable(p.second[0]);
    };
    std::map<uint32_t, std::set<uint32_t>> unit_closure;
    for (Symbol v : symbols.variables())
        unit_closure[v.id].insert(v.id);
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& p : body_set) {
            if (!is_unit(p))
                continue;
            for (auto& [from, closure] : unit_closure)
                if (closure.count(p.first) && closure.insert(p.second[0].id).second)
                    changed = true;
        }
    }
    std::set<std::pair<uint32_t, Word>> expanded;
    for (const auto& [from, closure] : unit_closure)
        for (uint32_t mid : closure)
            for (const auto& p : body_set)
                if (p.first == mid && !is_unit(p))
                    expanded.insert({from, p.second});

    // Useless elimination: productive marking, then reachability.
    std::vector<bool> productive(symbols.size(), false);
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& [lhs, body] : expanded) {
            if (productive[lhs])
                continue;
            bool all = true;
            for (Symbol s : body)
                all = all && (symbols.is_terminal(s) || productive[s.id]);
            if (all) {
                productive[lhs] = true;
                changed = true;
            }
        }
    }
    std::set<std::pair<uint32_t, Word>> productive_set;
    for (const auto& p : expanded) {
        bool all = productive[p.first];
        for (Symbol s : p.second)
            all = all && (symbols.is_terminal(s) || productive[s.id]);
        if (all)
            productive_set.insert(p);
    }
    std::vector<bool> reach(symbols.size(), false);
    reach[start.id] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& [lhs, body] : productive_set) {
            if (!reach[lhs])
                continue;
            for (Symbol s : body)
                if (symbols.is_variable(s) && !reach[s.id]) {
                    reach[s.id] = true;
                    changed = true;
                }
        }
    }

    // Terminal wrapping and binarization with oracle-private fresh names.
    std::vector<Production> productions;
    std::vector<Symbol> wrapper(symbols.size(), Symbol{});
    auto wrap = [&](Symbol t) {
        if (!wrapper[t.id].valid()) {
            std::string name = "cnfT<" + symbols.name(t) + ">";
            while (symbols.find(name))
                name += "'";
            Symbol w = symbols.intern(name, SymbolKind::variable);
            wrapper.resize(symbols.size(), Symbol{});
            wrapper[t.id] = w;
            productions.push_back({w, {t}});
        }
        return wrapper[t.id];
    };
    uint32_t counter = 0;
    for (const auto& [lhs_id, original_body] : productive_set) {
        if (!reach[lhs_id])
            continue;
        Word body;
        for (Symbol s : original_body)
            body.push_back(original_body.size() >= 2 && symbols.is_terminal(s) ? wrap(s) : s);
        Symbol head{lhs_id};
        if (body.size() == 1) {
            productions.push_back({head, body});
            continue;
        }
        for (size_t i = 0; i + 2 < body.size(); ++i) {
            std::string name = "cnfB<" + std::to_string(++counter) + ">";
            while (symbols.find(name))
                name += "'";
            Symbol link = symbols.intern(name, SymbolKind::variable);
            productions.push_back({head, {body[i], link}});
            head = link;
        }
        productions.push_back({head, {body[body.size() - 2], body.back()}});
    }

    return {std::move(symbols), std::move(productions), start, nullable[start.id]};
}

bool cyk_membership(const CnfGrammar& g, std::span<const Symbol> word) {
    const size_t n = word.size();
    if (n == 0)
        return g.start_nullable;

    const uint32_t vars = g.symbols.size();
    auto cell = [&](size_t i, size_t len) -> size_t { return (len - 1) * n + i; };
    std::vector<std::vector<bool>> table(n * n, std::vector<bool>(vars, false));

    for (size_t i = 0; i < n; ++i)
        for (const Production& p : g.productions)
            if (p.body.size() == 1 && p.body[0] == word[i])
                table[cell(i, 1)][p.lhs.id] = true;

    for (size_t len = 2; len <= n; ++len)
        for (size_t i = 0; i + len <= n; ++i)
            for (size_t split = 1; split < len; ++split)
                for (const Production& p : g.productions)
                    if (p.body.size() == 2 && table[cell(i, split)][p.body[0].id] &&
                        table[cell(i + split, len - split)][p.body[1].id])
                        table[cell(i, len)][p.lhs.id] = true;

    return table[cell(0, n)][g.start.id];
}

namespace {

struct FormHash {
    size_t operator()(const Word& w) const noexcept {
        size_t h = 0xcbf29ce484222325ull;
        for (Symbol s : w) {
            h ^= s.id + 1;
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

std::vector<Word> successors(const Grammar& g, const Word& form, uint32_t max_form_len) {
    std::vector<Word> out;
    for (size_t i = 0; i < form.size(); ++i) {
        if (!g.symbols().is_variable(form[i]))
            continue;
        for (const Production& p : g.productions()) {
            if (p.lhs != form[i])
                continue;
            if (form.size() - 1 + p.body.size() > max_form_len)
                continue;
            Word next;
            next.reserve(form.size() - 1 + p.body.size());
            next.insert(next.end(), form.begin(), form.begin() + i);
            next.insert(next.end(), p.body.begin(), p.body.end());
            next.insert(next.end(), form.begin() + i + 1, form.end());
            out.push_back(std::move(next));
        }
    }
    return out;
}

} // namespace

bool bounded_bfs_reaches(const Grammar& g, std::span<const Symbol> from, const Nfa& target,
                         const OracleConfig& config) {
    return bounded_bfs_reaches(g, from, target, config.max_bfs_depth,
                               config.max_word_length + 2);
}

bool bounded_bfs_reaches(const Grammar& g, std::span<const Symbol> from, const Nfa& target,
                         uint32_t depth, uint32_t max_form_len) {
    Word start{from.begin(), from.end()};
    if (start.size() > max_form_len)
        return false;
    if (target.accepts(start))
        return true;

    std::unordered_set<Word, FormHash> visited{start};
    std::deque<std::pair<Word, uint32_t>> queue{{start, 0}};
    while (!queue.empty()) {
        auto [form, d] = std::move(queue.front());
        queue.pop_front();
        if (d == depth)
            continue;
        for (Word& next : successors(g, form, max_form_len)) {
            if (!visited.insert(next).second)
                continue;
            if (target.accepts(next))
                return true;
            queue.emplace_back(std::move(next), d + 1);
        }
    }
    return false;
}

std::vector<Symbol> productive_oracle(const Grammar& g) {
    std::vector<bool> marked(g.symbols().size(), false);
    for (bool changed = true; changed;) {
        changed = false;
        for (const Production& p : g.productions()) {
            if (marked[p.lhs.id])
                continue;
            bool all = true;
            for (Symbol s : p.body)
                all = all && (g.symbols().is_terminal(s) || marked[s.id]);
            if (all) {
                marked[p.lhs.id] = true;
                changed = true;
            }
        }
    }
    return mask_to_symbols(marked);
}

std::vector<Symbol> nullable_oracle(const Grammar& g) {
    std::vector<bool> marked(g.symbols().size(), false);
    for (bool changed = true; changed;) {
        changed = false;
        for (const Production& p : g.productions()) {
            if (marked[p.lhs.id])
                continue;
            bool all = true;
            for (Symbol s : p.body)
                all = all && g.symbols().is_variable(s) && marked[s.id];
            if (all) {
                marked[p.lhs.id] = true;
                changed = true;
            }
        }
    }
    return mask_to_symbols(marked);
}

std::vector<Symbol> reachable_oracle(const Grammar& g) {
    std::vector<bool> marked(g.symbols().size(), false);
    marked[g.start().id] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (const Production& p : g.productions()) {
            if (!marked[p.lhs.id])
                continue;
            for (Symbol s : p.body)
                if (g.symbols().is_variable(s) && !marked[s.id]) {
                    marked[s.id] = true;
                    changed = true;
                }
        }
    }
    return mask_to_symbols(marked);
}

std::vector<Symbol> useless_oracle(const Grammar& g) {
    std::vector<Symbol> productive = productive_oracle(g);
    std::vector<bool> is_productive(g.symbols().size(), false);
    for (Symbol v : productive)
        is_productive[v.id] = true;

    std::vector<bool> useful(g.symbols().size(), false);
    std::vector<bool> context(g.symbols().size(), false); // reachable via productive bodies
    context[g.start().id] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (const Production& p : g.productions()) {
            if (!context[p.lhs.id])
                continue;
            bool body_ok = true;
            for (Symbol s : p.body)
                body_ok = body_ok && (g.symbols().is_terminal(s) || is_productive[s.id]);
            if (!body_ok)
                continue;
            for (Symbol s : p.body)
                if (g.symbols().is_variable(s) && !context[s.id]) {
                    context[s.id] = true;
                    changed = true;
                }
        }
    }
    for (uint32_t i = 0; i < g.symbols().size(); ++i)
        if (context[i] && is_productive[i])
            useful[i] = true;

    std::vector<Symbol> out;
    for (Symbol v : g.variables())
        if (!useful[v.id])
            out.push_back(v);
    return out;
}

bool finite_oracle(const Grammar& g) {
    CnfGrammar cnf = to_full_cnf(g);

    // Variable digraph of the binary productions; a cycle pumps some word.
    std::map<uint32_t, std::vector<uint32_t>> edges;
    for (const Production& p : cnf.productions)
        if (p.body.size() == 2) {
            edges[p.lhs.id].push_back(p.body[0].id);
            edges[p.lhs.id].push_back(p.body[1].id);
        }

    std::map<uint32_t, int> color; // 0 white, 1 grey, 2 black
    auto cyclic = [&](auto&& self, uint32_t v) -> bool {
        color[v] = 1;
        if (auto it = edges.find(v); it != edges.end())
            for (uint32_t w : it->second) {
                if (color[w] == 1)
                    return true;
                if (color[w] == 0 && self(self, w))
                    return true;
            }
        color[v] = 2;
        return false;
    };
    for (const auto& [v, targets] : edges)
        if (color[v] == 0 && cyclic(cyclic, v))
            return false;
    return true;
}

std::vector<Word> enumerate_words(const Grammar& g, uint32_t max_len, size_t max_forms) {
    const uint32_t cap = max_len + 4; // slack for forms that shrink via eps

    // Minimum yield per symbol; forms that cannot contract to max_len are
    // pruned without losing any word in range.
    constexpr uint64_t inf = UINT32_MAX;
    std::vector<uint64_t> min_yield(g.symbols().size(), inf);
    for (uint32_t i = 0; i < g.symbols().size(); ++i)
        if (g.symbols().is_terminal(Symbol{i}))
            min_yield[i] = 1;
    for (bool changed = true; changed;) {
        changed = false;
        for (const Production& p : g.productions()) {
            uint64_t total = 0;
            for (Symbol s : p.body)
                total = std::min(total + min_yield[s.id], inf);
            if (total < min_yield[p.lhs.id]) {
                min_yield[p.lhs.id] = total;
                changed = true;
            }
        }
    }
    auto too_long = [&](const Word& form) {
        uint64_t total = 0;
        for (Symbol s : form)
            total = std::min(total + min_yield[s.id], inf);
        return total > max_len;
    };

    std::unordered_set<Word, FormHash> visited;
    std::set<Word> words;
    std::deque<Word> queue;
    Word start{g.start()};
    if (too_long(start))
        return {};
    visited.insert(start);
    queue.push_back(std::move(start));
    while (!queue.empty()) {
        Word form = std::move(queue.front());
        queue.pop_front();
        bool terminal = std::all_of(form.begin(), form.end(), [&](Symbol s) {
            return g.symbols().is_terminal(s);
        });
        if (terminal) {
            words.insert(form);
            continue;
        }
        for (Word& next : successors(g, form, cap))
            if (!too_long(next) && visited.insert(next).second) {
                if (visited.size() > max_forms)
                    throw std::length_error("enumerate_words: form budget exhausted");
                queue.push_back(std::move(next));
            }
    }
    return {words.begin(), words.end()};
}

} // namespace cfga::oracle
