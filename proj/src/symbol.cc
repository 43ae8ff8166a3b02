#include "cfga/symbol.hh"

#include <stdexcept>

namespace cfga {

Symbol SymbolTable::intern(std::string_view name, SymbolKind kind) {
    if (name.empty())
        throw std::invalid_argument("symbol name must be non-empty");
    auto it = index_.find(std::string(name));
    if (it != index_.end()) {
        Symbol s{it->second};
        if (kinds_[s.id] != kind)
            throw std::invalid_argument("symbol '" + std::string(name) +
                                        "' already interned with the other kind");
        return s;
    }
    Symbol s{static_cast<uint32_t>(names_.size())};
    names_.emplace_back(name);
    kinds_.push_back(kind);
    index_.emplace(names_.back(), s.id);
    return s;
}

std::optional<Symbol> SymbolTable::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end())
        return std::nullopt;
    return Symbol{it->second};
}

std::vector<Symbol> SymbolTable::variables() const {
    std::vector<Symbol> out;
    for (uint32_t i = 0; i < names_.size(); ++i)
        if (kinds_[i] == SymbolKind::variable)
            out.push_back(Symbol{i});
    return out;
}

std::vector<Symbol> SymbolTable::terminals() const {
    std::vector<Symbol> out;
    for (uint32_t i = 0; i < names_.size(); ++i)
        if (kinds_[i] == SymbolKind::terminal)
            out.push_back(Symbol{i});
    return out;
}

std::string SymbolTable::render(std::span<const Symbol> word) const {
    std::string out;
    for (size_t i = 0; i < word.size(); ++i) {
        if (i)
            out += ' ';
        out += name(word[i]);
    }
    return out;
}

} // namespace cfga
