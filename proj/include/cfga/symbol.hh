/* symbol.hh -- interned symbols shared by grammars and automata. */

#ifndef CFGA_SYMBOL_HH_
#define CFGA_SYMBOL_HH_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cfga {

/// Error from the grammar/automaton text parsers; line numbers are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

enum class SymbolKind : uint8_t { variable, terminal };

/// Dense handle into a SymbolTable. Ids are 0..size-1 and never change
/// once interned, so extending a table keeps older handles valid.
struct Symbol {
    uint32_t id = UINT32_MAX;

    constexpr bool valid() const { return id != UINT32_MAX; }
    friend constexpr bool operator==(Symbol, Symbol) = default;
    friend constexpr auto operator<=>(Symbol, Symbol) = default;
};

using Word = std::vector<Symbol>;

/// Name/kind store. Variable and terminal name sets are disjoint;
/// interning an existing name with a different kind is an error.
class SymbolTable {
public:
    Symbol intern(std::string_view name, SymbolKind kind);
    std::optional<Symbol> find(std::string_view name) const;

    const std::string& name(Symbol s) const { return names_.at(s.id); }
    SymbolKind kind(Symbol s) const { return kinds_.at(s.id); }
    bool is_variable(Symbol s) const { return kind(s) == SymbolKind::variable; }
    bool is_terminal(Symbol s) const { return kind(s) == SymbolKind::terminal; }
    bool contains(Symbol s) const { return s.id < names_.size(); }

    uint32_t size() const { return static_cast<uint32_t>(names_.size()); }

    std::vector<Symbol> variables() const;
    std::vector<Symbol> terminals() const;

    /// Symbol names joined by single spaces.
    std::string render(std::span<const Symbol> word) const;

private:
    std::vector<std::string> names_;
    std::vector<SymbolKind> kinds_;
    std::unordered_map<std::string, uint32_t> index_;
};

} // namespace cfga

template <>
struct std::hash<cfga::Symbol> {
    size_t operator()(cfga::Symbol s) const noexcept { return std::hash<uint32_t>{}(s.id); }
};

#endif // CFGA_SYMBOL_HH_
