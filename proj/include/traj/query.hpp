#ifndef TRAJ_QUERY_HPP
#define TRAJ_QUERY_HPP

#include "traj/store.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace traj {

/// The seven queryable row sources (one per query class; stops and moves
/// split the structured class).
enum class QuerySource { Raw, Stops, Moves, Semantic, RoiVisits, StPath, Devices };

const char* to_string(QuerySource s);

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* to_string(CompareOp op);

/// Typed literal. Time literals are plain integers and stay Number; the
/// field's type decides how they compare.
struct Literal {
    enum class Kind { String, Number, Duration };

    Kind kind = Kind::Number;
    std::string text;          // String contents
    std::int64_t ivalue = 0;   // integer Number / Duration seconds
    double dvalue = 0.0;       // numeric value used in comparisons
    bool is_int = true;        // Number printed without decimal point

    static Literal str(std::string s);
    static Literal integer(std::int64_t v);
    static Literal real(double v);
    static Literal duration_s(std::int64_t seconds);

    friend bool operator==(const Literal&, const Literal&) = default;
};

struct Predicate {
    enum class Kind { Compare, Like, IntersectsLayer, WithinRegion, InWindow };

    Kind kind = Kind::Compare;
    std::string field;  // Compare, Like
    CompareOp op = CompareOp::Eq;
    Literal literal;    // Compare
    std::string text;   // Like pattern / layer category / region name
    STWindow window;    // InWindow

    friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// Parsed query: a source, conjunctive predicates, optional grouping
/// (count only) and an optional projection.
struct QueryAst {
    QuerySource source = QuerySource::Raw;
    std::vector<Predicate> predicates;
    std::optional<std::string> group_by;
    bool select_count = false;
    std::optional<std::vector<std::string>> projection; // absent = full row model

    friend bool operator==(const QueryAst&, const QueryAst&) = default;
};

/// A single table cell.
using Value = std::variant<std::int64_t, double, std::string, bool>;

std::string format_value(const Value& v);
bool value_less(const Value& a, const Value& b);

/// Deterministic tabular query answer; rows sorted lexicographically over
/// all columns.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;

    std::string to_tsv() const;

    friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

/// Parses query text (whitespace-insensitive, case-insensitive keywords).
/// Throws ParseError with position and expectation on bad syntax, and for
/// fields unknown to the source (the message names the valid fields).
QueryAst parse(const std::string& text);

/// Canonical text: lowercase keywords, single-spaced tokens, durations in
/// seconds. parse(pretty_print(a)) == a for every valid AST.
std::string pretty_print(const QueryAst& ast);

/// Evaluates a parsed query against the store.
ResultTable evaluate(const QueryAst& ast, const TrajectoryStore& store);

namespace query_detail {

enum class FieldType { Str, Num, Time, Dur };

struct FieldSpec {
    const char* name;
    FieldType type;
};

/// Full row model of a source. `with_place` appends the conditional `place`
/// column of the raw/stops/moves/stpath sources.
std::vector<FieldSpec> source_fields(QuerySource s, bool with_place);

/// Whether the source gains a `place` column from intersects(layer ...).
bool place_is_conditional(QuerySource s);

/// Whether spatial predicates (intersects/within/window) apply to the source.
bool supports_spatial_predicates(QuerySource s);

/// Lexicographic row comparison used for the deterministic result order.
bool rows_less(const std::vector<Value>& a, const std::vector<Value>& b);

} // namespace query_detail

} // namespace traj

#endif // TRAJ_QUERY_HPP
