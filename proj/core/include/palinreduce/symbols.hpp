#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace palin {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using SymId = std::uint32_t;

// One character of the reduction alphabet.  A circuit wire `a` contributes
// three characters (a, ~a, x.a); separators are numbered and globally unique.
enum class Role : std::uint8_t { Plain, Bar, X, Dollar, Hash };

bool is_separator(Role r);

struct Symbol {
    Role role = Role::Plain;
    std::string tag;            // Plain/Bar/X; may carry primes: b', c''
    std::uint32_t serial = 0;   // Dollar/Hash

    bool operator==(const Symbol&) const = default;
};

struct SymbolHash {
    std::size_t operator()(const Symbol& s) const;
};

// Token text for a single symbol: `a`, `~a`, `x.a`, `$3`, `#3`.
std::string token_of(const Symbol& s);
Symbol symbol_from_token(std::string_view token);

// Intern table plus fresh-name bookkeeping for one reduction run.
// Ids are dense and assigned in intern order, so identical call sequences
// produce identical ids.
class SymbolPool {
public:
    struct WireSyms { SymId plain, bar, x; };
    struct AuxSyms  { SymId plain, bar; };
    struct SepPair  { SymId dollar, hash; std::uint32_t serial; };

    SymId intern(const Symbol& s);
    std::optional<SymId> find(const Symbol& s) const;
    const Symbol& at(SymId id) const;
    std::size_t size() const { return symbols_.size(); }

    // Registers tag and returns the (plain, bar, x) triple.  Throws on reuse.
    WireSyms fresh_wire_symbols(std::string_view tag);
    // As above but only (plain, bar); used for gadget auxiliaries.
    AuxSyms fresh_aux_symbols(std::string_view tag);
    SepPair fresh_separator_pair();

    bool tag_registered(std::string_view tag) const;
    // base + the smallest number of primes (>= 1) that is still free.
    std::string fresh_primed_tag(std::string_view base) const;

    std::uint32_t separator_count() const { return sep_serial_; }

private:
    std::vector<Symbol> symbols_;
    std::unordered_map<Symbol, SymId, SymbolHash> ids_;
    std::unordered_set<std::string> tags_;
    std::uint32_t sep_serial_ = 0;
};

// A sequence of interned symbols together with its pool.  Self-contained
// value: copies are independent and safe to share across threads once built.
struct SymString {
    SymbolPool pool;
    std::vector<SymId> seq;

    std::size_t size() const { return seq.size(); }
    const Symbol& symbol_at(std::size_t i) const { return pool.at(seq[i]); }
};

// Content equality (role/tag/serial sequence), independent of intern ids.
bool symbols_equal(const SymString& a, const SymString& b);

inline constexpr std::string_view kSymstringHeader = "palinreduce-symstring v1";

// Whitespace-separated token text, no header.
std::string serialize(const SymString& s);
// Accepts bare token text or text whose first line is the version header.
SymString parse_symstring(std::string_view text);

std::string symstring_to_json(const SymString& s);
SymString symstring_from_json(std::string_view json_text);

// File layer: text format carries the header line, JSON the version field.
void write_symstring_file(const std::string& path, const SymString& s, bool json = false);
SymString read_symstring_file(const std::string& path);

} // namespace palin
