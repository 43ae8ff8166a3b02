#include "cfga/grammar.hh"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cfga {

namespace {

// Splits one line into tokens; a token starting with '#' drops the rest of
// the line, so '#' inside a token (fresh names like S#1) survives.
std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        if (tok[0] == '#')
            break;
        tokens.push_back(tok);
    }
    return tokens;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        lines.push_back(cur);
    return lines;
}

bool reserved_token(const std::string& tok) {
    return tok == "->" || tok == "|" || tok == "eps" || tok == "start:";
}

} // namespace

Grammar::Grammar(SymbolTable symbols, std::vector<Production> productions, Symbol start)
    : symbols_(std::move(symbols)), productions_(std::move(productions)), start_(start) {
    if (!symbols_.contains(start_) || !symbols_.is_variable(start_))
        throw std::invalid_argument("start symbol must be a variable of the grammar");
    for (const Production& p : productions_) {
        if (!symbols_.contains(p.lhs) || !symbols_.is_variable(p.lhs))
            throw std::invalid_argument("production lhs must be a variable");
        for (Symbol s : p.body)
            if (!symbols_.contains(s))
                throw std::invalid_argument("production body symbol outside the grammar");
    }
}

Grammar Grammar::with_start(Symbol start) const {
    return Grammar(symbols_, productions_, start);
}

Grammar parse_grammar(const std::string& text) {
    const std::vector<std::string> lines = split_lines(text);

    struct RuleLine {
        int number;
        std::vector<std::string> tokens;
    };
    std::vector<RuleLine> rules;
    std::string start_name;
    int start_line = 0;

    SymbolTable symbols;
    for (size_t i = 0; i < lines.size(); ++i) {
        const int line_no = static_cast<int>(i) + 1;
        std::vector<std::string> tokens = tokenize(lines[i]);
        if (tokens.empty())
            continue;
        if (tokens[0] == "start:") {
            if (tokens.size() != 2)
                throw ParseError(line_no, "start: expects exactly one symbol");
            if (start_line)
                throw ParseError(line_no, "duplicate start: directive");
            start_name = tokens[1];
            start_line = line_no;
            continue;
        }
        if (tokens.size() < 2 || tokens[1] != "->")
            throw ParseError(line_no, "expected '<variable> -> ...'");
        if (reserved_token(tokens[0]))
            throw ParseError(line_no, "'" + tokens[0] + "' cannot name a variable");
        symbols.intern(tokens[0], SymbolKind::variable);
        rules.push_back({line_no, std::move(tokens)});
    }

    if (rules.empty())
        throw ParseError(start_line ? start_line : 1, "grammar has no rules");

    std::vector<Production> productions;
    for (const RuleLine& rule : rules) {
        Symbol lhs = *symbols.find(rule.tokens[0]);
        std::vector<std::vector<std::string>> alternatives(1);
        for (size_t i = 2; i < rule.tokens.size(); ++i) {
            if (rule.tokens[i] == "|")
                alternatives.emplace_back();
            else
                alternatives.back().push_back(rule.tokens[i]);
        }
        for (const auto& alt : alternatives) {
            if (alt.empty())
                throw ParseError(rule.number, "empty alternative (use 'eps')");
            Production p{lhs, {}};
            if (alt.size() == 1 && alt[0] == "eps") {
                productions.push_back(std::move(p));
                continue;
            }
            for (const std::string& tok : alt) {
                if (tok == "eps")
                    throw ParseError(rule.number, "'eps' must stand alone in an alternative");
                if (tok == "->" || tok == "|" || tok == "start:")
                    throw ParseError(rule.number, "'" + tok + "' cannot appear in a body");
                Symbol s = symbols.find(tok)
                               ? *symbols.find(tok)
                               : symbols.intern(tok, SymbolKind::terminal);
                p.body.push_back(s);
            }
            productions.push_back(std::move(p));
        }
    }

    Symbol start = productions.front().lhs;
    if (start_line) {
        auto s = symbols.find(start_name);
        if (!s || !symbols.is_variable(*s))
            throw ParseError(start_line, "start: names unknown variable '" + start_name + "'");
        start = *s;
    }
    return Grammar(std::move(symbols), std::move(productions), start);
}

std::string render_grammar(const Grammar& g) {
    const SymbolTable& symbols = g.symbols();
    auto renderable = [](const std::string& name) {
        if (reserved_token(name) || name[0] == '#')
            return false;
        return name.find_first_of(" \t\n") == std::string::npos;
    };
    for (uint32_t i = 0; i < symbols.size(); ++i)
        if (!renderable(symbols.name(Symbol{i})))
            throw std::invalid_argument("symbol '" + symbols.name(Symbol{i}) +
                                        "' cannot be rendered in the grammar format");

    std::vector<Symbol> order; // lhs by first appearance
    for (const Production& p : g.productions())
        if (std::find(order.begin(), order.end(), p.lhs) == order.end())
            order.push_back(p.lhs);

    std::ostringstream out;
    out << "start: " << symbols.name(g.start()) << '\n';
    for (Symbol lhs : order) {
        out << symbols.name(lhs) << " ->";
        bool first = true;
        for (const Production& p : g.productions()) {
            if (p.lhs != lhs)
                continue;
            out << (first ? " " : " | ");
            first = false;
            out << (p.body.empty() ? "eps" : symbols.render(p.body));
        }
        out << '\n';
    }
    return out.str();
}

bool structurally_equal(const Grammar& a, const Grammar& b) {
    auto names = [](const Grammar& g, SymbolKind k) {
        std::set<std::string> out;
        for (uint32_t i = 0; i < g.symbols().size(); ++i)
            if (g.symbols().kind(Symbol{i}) == k)
                out.insert(g.symbols().name(Symbol{i}));
        return out;
    };
    if (names(a, SymbolKind::variable) != names(b, SymbolKind::variable) ||
        names(a, SymbolKind::terminal) != names(b, SymbolKind::terminal))
        return false;
    if (a.symbols().name(a.start()) != b.symbols().name(b.start()))
        return false;
    auto production_names = [](const Grammar& g) {
        std::multiset<std::vector<std::string>> out;
        for (const Production& p : g.productions()) {
            std::vector<std::string> key{g.symbols().name(p.lhs)};
            for (Symbol s : p.body)
                key.push_back(g.symbols().name(s));
            out.insert(std::move(key));
        }
        return out;
    };
    return production_names(a) == production_names(b);
}

ProductionShape shape_of(const Grammar& g, const Production& p) {
    switch (p.body.size()) {
    case 0:
        return ProductionShape::epsilon;
    case 1:
        return g.symbols().is_variable(p.body[0]) ? ProductionShape::unit
                                                  : ProductionShape::terminal;
    case 2:
        if (g.symbols().is_variable(p.body[0]) && g.symbols().is_variable(p.body[1]))
            return ProductionShape::binary;
        [[fallthrough]];
    default:
        throw std::invalid_argument("production not in extended CNF");
    }
}

NormalizedGrammar::NormalizedGrammar(Grammar g, std::vector<uint32_t> production_origin,
                                     std::vector<SymbolOrigin> symbol_origin,
                                     uint32_t original_symbols)
    : g_(std::move(g)), production_origin_(std::move(production_origin)),
      symbol_origin_(std::move(symbol_origin)), original_symbols_(original_symbols) {}

NormalizedGrammar normalize(const Grammar& g) {
    SymbolTable symbols = g.symbols();
    const uint32_t original_symbols = symbols.size();
    std::vector<SymbolOrigin> symbol_origin(original_symbols, SymbolOrigin::original);

    std::vector<Production> productions;
    std::vector<uint32_t> origin;
    std::vector<Symbol> wrapper_of(symbols.size(), Symbol{}); // terminal id -> wrapper var

    auto fresh = [&](const std::string& base, SymbolOrigin kind) {
        std::string name = base;
        while (symbols.find(name))
            name.insert(name.begin(), '_');
        Symbol s = symbols.intern(name, SymbolKind::variable);
        symbol_origin.push_back(kind);
        wrapper_of.resize(symbols.size(), Symbol{});
        return s;
    };

    uint32_t chain_counter = 0;
    for (uint32_t pi = 0; pi < g.productions().size(); ++pi) {
        const Production& p = g.production(pi);
        if (p.body.size() <= 1) {
            productions.push_back(p);
            origin.push_back(pi);
            continue;
        }

        // Replace terminals by shared wrapper variables, emitting the
        // wrapper production the first time a terminal is seen.
        Word body;
        for (Symbol s : p.body) {
            if (symbols.is_variable(s)) {
                body.push_back(s);
                continue;
            }
            if (!wrapper_of[s.id].valid()) {
                Symbol w = fresh("_" + symbols.name(s), SymbolOrigin::wrapper);
                wrapper_of[s.id] = w;
                productions.push_back({w, {s}});
                origin.push_back(pi);
            }
            body.push_back(wrapper_of[s.id]);
        }

        // Binarize: a body of length k becomes k-1 productions chained
        // through fresh variables named <lhs>#<counter>.
        Symbol head = p.lhs;
        for (size_t i = 0; i + 2 < body.size(); ++i) {
            std::string base;
            do
                base = symbols.name(p.lhs) + "#" + std::to_string(++chain_counter);
            while (symbols.find(base));
            Symbol link = fresh(base, SymbolOrigin::binarization);
            productions.push_back({head, {body[i], link}});
            origin.push_back(pi);
            head = link;
        }
        productions.push_back({head, {body[body.size() - 2], body.back()}});
        origin.push_back(pi);
    }

    // Wrapper productions belong to whichever original production first
    // needed them; replay never depends on that choice.
    for (uint32_t i = 0; i < productions.size(); ++i)
        if (symbol_origin[productions[i].lhs.id] == SymbolOrigin::wrapper)
            origin[i] = NormalizedGrammar::no_origin;

    Grammar ng(std::move(symbols), std::move(productions), g.start());
    return NormalizedGrammar(std::move(ng), std::move(origin), std::move(symbol_origin),
                             original_symbols);
}

ProductionIndex::ProductionIndex(std::vector<IndexedProduction> productions,
                                 std::vector<bool> variable_mask, std::vector<Symbol> occurring)
    : productions_(std::move(productions)),
      symbol_count_(static_cast<uint32_t>(variable_mask.size())),
      variable_(std::move(variable_mask)), chain_(symbol_count_), front_(symbol_count_),
      back_(symbol_count_), term_(symbol_count_), occurring_(std::move(occurring)) {
    for (uint32_t i = 0; i < productions_.size(); ++i) {
        const IndexedProduction& p = productions_[i];
        switch (p.shape) {
        case ProductionShape::binary:
            front_[p.first.id].push_back(i);
            back_[p.second.id].push_back(i);
            break;
        case ProductionShape::terminal:
            term_[p.first.id].push_back(i);
            break;
        case ProductionShape::unit:
            chain_[p.first.id].push_back(i);
            break;
        case ProductionShape::epsilon:
            eps_.push_back(i);
            break;
        }
    }
}

ProductionIndex build_index(const NormalizedGrammar& g) {
    const Grammar& ng = g.grammar();
    std::vector<IndexedProduction> indexed;
    indexed.reserve(ng.productions().size());
    for (const Production& p : ng.productions()) {
        IndexedProduction ip{p.lhs, shape_of(ng, p), {}, {}};
        if (!p.body.empty())
            ip.first = p.body[0];
        if (p.body.size() == 2)
            ip.second = p.body[1];
        indexed.push_back(ip);
    }
    std::vector<bool> variable_mask(ng.symbols().size(), false);
    for (uint32_t i = 0; i < ng.symbols().size(); ++i)
        variable_mask[i] = ng.symbols().is_variable(Symbol{i});
    return ProductionIndex(std::move(indexed), std::move(variable_mask), occurring_symbols(g));
}

std::vector<Symbol> occurring_symbols(const NormalizedGrammar& g) {
    std::vector<bool> seen(g.symbols().size(), false);
    for (const Production& p : g.grammar().productions()) {
        seen[p.lhs.id] = true;
        for (Symbol s : p.body)
            seen[s.id] = true;
    }
    std::vector<Symbol> out;
    for (uint32_t i = 0; i < seen.size(); ++i)
        if (seen[i])
            out.push_back(Symbol{i});
    return out;
}

} // namespace cfga
