#include "traj/query.hpp"
#include "traj/text.hpp"

#include <algorithm>
#include <cctype>

namespace traj {

const char* to_string(QuerySource s) {
    switch (s) {
    case QuerySource::Raw: return "raw";
    case QuerySource::Stops: return "stops";
    case QuerySource::Moves: return "moves";
    case QuerySource::Semantic: return "semantic";
    case QuerySource::RoiVisits: return "roi-visits";
    case QuerySource::StPath: return "stpath";
    case QuerySource::Devices: return "devices";
    }
    return "?";
}

const char* to_string(CompareOp op) {
    switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    }
    return "?";
}

Literal Literal::str(std::string s) {
    Literal l;
    l.kind = Kind::String;
    l.text = std::move(s);
    return l;
}

Literal Literal::integer(std::int64_t v) {
    Literal l;
    l.kind = Kind::Number;
    l.ivalue = v;
    l.dvalue = static_cast<double>(v);
    l.is_int = true;
    return l;
}

Literal Literal::real(double v) {
    Literal l;
    l.kind = Kind::Number;
    l.dvalue = v;
    l.is_int = false;
    return l;
}

Literal Literal::duration_s(std::int64_t seconds) {
    Literal l;
    l.kind = Kind::Duration;
    l.ivalue = seconds;
    l.dvalue = static_cast<double>(seconds);
    return l;
}

namespace query_detail {

std::vector<FieldSpec> source_fields(QuerySource s, bool with_place) {
    std::vector<FieldSpec> f;
    switch (s) {
    case QuerySource::Raw:
        f = {{"object", FieldType::Str}, {"t", FieldType::Time}, {"x", FieldType::Num},
             {"y", FieldType::Num}};
        break;
    case QuerySource::Stops:
    case QuerySource::Moves:
        f = {{"object", FieldType::Str}, {"t_begin", FieldType::Time},
             {"t_end", FieldType::Time}, {"duration", FieldType::Dur}, {"x", FieldType::Num},
             {"y", FieldType::Num}};
        break;
    case QuerySource::Semantic:
        f = {{"object", FieldType::Str}, {"t_begin", FieldType::Time},
             {"t_end", FieldType::Time}, {"duration", FieldType::Dur}, {"x", FieldType::Num},
             {"y", FieldType::Num}, {"place", FieldType::Str}, {"category", FieldType::Str},
             {"role", FieldType::Str}};
        break;
    case QuerySource::RoiVisits:
        f = {{"object", FieldType::Str}, {"region", FieldType::Str},
             {"category", FieldType::Str}, {"t_begin", FieldType::Time},
             {"t_end", FieldType::Time}, {"via_descendant", FieldType::Str}};
        break;
    case QuerySource::StPath:
        f = {{"object", FieldType::Str}, {"t_begin", FieldType::Time},
             {"t_end", FieldType::Time}, {"activity_kind", FieldType::Str},
             {"label", FieldType::Str}, {"x", FieldType::Num}, {"y", FieldType::Num}};
        break;
    case QuerySource::Devices:
        f = {{"device", FieldType::Str}, {"kind", FieldType::Str},
             {"reliability", FieldType::Num}, {"t", FieldType::Time},
             {"region", FieldType::Str}};
        break;
    }
    if (with_place && place_is_conditional(s)) f.push_back({"place", FieldType::Str});
    return f;
}

bool place_is_conditional(QuerySource s) {
    return s == QuerySource::Raw || s == QuerySource::Stops || s == QuerySource::Moves
        || s == QuerySource::StPath;
}

bool supports_spatial_predicates(QuerySource s) {
    return s != QuerySource::RoiVisits;
}

} // namespace query_detail

namespace {

using query_detail::FieldSpec;
using query_detail::FieldType;

struct Token {
    enum class Kind { Ident, Number, Duration, String, Symbol, End };

    Kind kind = Kind::End;
    std::string text;       // ident (original case), symbol, string contents
    std::int64_t ivalue = 0;
    double dvalue = 0.0;
    bool is_int = true;
    std::size_t offset = 0;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const Token& at, const std::string& expected) const {
        throw ParseError(at.offset, at.line, at.column, expected);
    }

private:
    void bump_pos(char c) {
        ++pos_;
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            bump_pos(src_[pos_]);
        }
    }

    static bool ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    }

    void advance() {
        skip_ws();
        Token t;
        t.offset = pos_;
        t.line = line_;
        t.column = col_;
        if (pos_ >= src_.size()) {
            t.kind = Token::Kind::End;
            current_ = t;
            return;
        }
        const char c = src_[pos_];
        if (ident_start(c)) {
            std::string s;
            while (pos_ < src_.size() && ident_char(src_[pos_])) {
                s.push_back(src_[pos_]);
                bump_pos(src_[pos_]);
            }
            t.kind = Token::Kind::Ident;
            t.text = std::move(s);
            current_ = t;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))
            || (c == '-' && pos_ + 1 < src_.size()
                && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            std::string num;
            if (c == '-') {
                num.push_back(c);
                bump_pos(c);
            }
            bool has_dot = false;
            while (pos_ < src_.size()
                   && (std::isdigit(static_cast<unsigned char>(src_[pos_]))
                       || (!has_dot && src_[pos_] == '.'))) {
                if (src_[pos_] == '.') has_dot = true;
                num.push_back(src_[pos_]);
                bump_pos(src_[pos_]);
            }
            // A unit glued to the digits makes it a duration literal.
            std::string suffix;
            while (pos_ < src_.size() && ident_char(src_[pos_])) {
                suffix.push_back(src_[pos_]);
                bump_pos(src_[pos_]);
            }
            if (!suffix.empty()) {
                if (has_dot || (suffix != "s" && suffix != "min" && suffix != "h")) {
                    throw ParseError(t.offset, t.line, t.column,
                                     "expected duration unit s, min or h after integer, got '"
                                         + num + suffix + "'");
                }
                const std::int64_t base = std::stoll(num);
                const std::int64_t mult = suffix == "s" ? 1 : suffix == "min" ? 60 : 3600;
                t.kind = Token::Kind::Duration;
                t.ivalue = base * mult;
                t.dvalue = static_cast<double>(t.ivalue);
                current_ = t;
                return;
            }
            t.kind = Token::Kind::Number;
            t.is_int = !has_dot;
            t.dvalue = std::stod(num);
            t.ivalue = t.is_int ? std::stoll(num) : 0;
            current_ = t;
            return;
        }
        if (c == '"') {
            bump_pos(c);
            std::string s;
            while (pos_ < src_.size() && src_[pos_] != '"') {
                s.push_back(src_[pos_]);
                bump_pos(src_[pos_]);
            }
            if (pos_ >= src_.size()) {
                throw ParseError(t.offset, t.line, t.column, "unterminated string literal");
            }
            bump_pos('"');
            t.kind = Token::Kind::String;
            t.text = std::move(s);
            current_ = t;
            return;
        }
        static const char* symbols[] = {"!=", "<=", ">=", "=", "<", ">", "(", ")", ","};
        for (const char* sym : symbols) {
            const std::size_t n = std::char_traits<char>::length(sym);
            if (src_.compare(pos_, n, sym) == 0) {
                for (std::size_t i = 0; i < n; ++i) bump_pos(src_[pos_]);
                t.kind = Token::Kind::Symbol;
                t.text = sym;
                current_ = t;
                return;
            }
        }
        throw ParseError(t.offset, t.line, t.column,
                         std::string("unexpected character '") + c + "'");
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
    Token current_;
};

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    QueryAst run() {
        QueryAst ast;
        ast.source = parse_source();
        if (accept_keyword("where")) {
            ast.predicates.push_back(parse_predicate(ast.source));
            while (accept_keyword("and")) {
                ast.predicates.push_back(parse_predicate(ast.source));
            }
        }
        if (accept_keyword("group")) {
            expect_keyword("by");
            const Token t = expect(Token::Kind::Ident, "field name after group by");
            ast.group_by = t.text;
            check_field(ast.source, t, has_intersects(ast));
        }
        if (accept_keyword("select")) {
            if (accept_keyword("count")) {
                ast.select_count = true;
            } else {
                std::vector<std::string> fields;
                const Token first = expect(Token::Kind::Ident, "field name or count after select");
                check_field(ast.source, first, has_intersects(ast));
                fields.push_back(first.text);
                while (accept_symbol(",")) {
                    const Token t = expect(Token::Kind::Ident, "field name after ','");
                    check_field(ast.source, t, has_intersects(ast));
                    fields.push_back(t.text);
                }
                ast.projection = std::move(fields);
            }
        }
        const Token& end = lex_.peek();
        if (end.kind != Token::Kind::End) {
            lex_.fail(end, "expected end of query, got '" + end.text + "'");
        }
        if (ast.group_by && !ast.select_count) {
            lex_.fail(end, "group by requires select count");
        }
        return ast;
    }

private:
    static bool has_intersects(const QueryAst& ast) {
        return std::any_of(ast.predicates.begin(), ast.predicates.end(), [](const Predicate& p) {
            return p.kind == Predicate::Kind::IntersectsLayer;
        });
    }

    bool accept_keyword(const std::string& kw) {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Ident && to_lower(t.text) == kw) {
            lex_.take();
            return true;
        }
        return false;
    }

    void expect_keyword(const std::string& kw) {
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::Ident || to_lower(t.text) != kw) {
            lex_.fail(t, "expected '" + kw + "'");
        }
        lex_.take();
    }

    bool accept_symbol(const std::string& sym) {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Symbol && t.text == sym) {
            lex_.take();
            return true;
        }
        return false;
    }

    void expect_symbol(const std::string& sym) {
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::Symbol || t.text != sym) {
            lex_.fail(t, "expected '" + sym + "'");
        }
        lex_.take();
    }

    Token expect(Token::Kind kind, const std::string& what) {
        const Token& t = lex_.peek();
        if (t.kind != kind) lex_.fail(t, "expected " + what);
        return lex_.take();
    }

    QuerySource parse_source() {
        const Token t = expect(Token::Kind::Ident, "query source (raw, stops, moves, semantic, "
                                                   "roi-visits, stpath or devices)");
        const std::string s = to_lower(t.text);
        if (s == "raw") return QuerySource::Raw;
        if (s == "stops") return QuerySource::Stops;
        if (s == "moves") return QuerySource::Moves;
        if (s == "semantic") return QuerySource::Semantic;
        if (s == "roi-visits") return QuerySource::RoiVisits;
        if (s == "stpath") return QuerySource::StPath;
        if (s == "devices") return QuerySource::Devices;
        lex_.fail(t, "unknown query source '" + t.text + "'");
    }

    void check_field(QuerySource source, const Token& at, bool with_intersects) {
        const FieldSpec spec = check_field_lenient(source, at);
        if (std::string(spec.name) == "place" && query_detail::place_is_conditional(source)
            && !with_intersects) {
            lex_.fail(at, "field 'place' on source " + std::string(to_string(source))
                              + " requires an intersects(layer ...) predicate");
        }
    }

    std::int64_t expect_timelit() {
        const Token t = expect(Token::Kind::Number, "integer epoch seconds");
        if (!t.is_int) lex_.fail(t, "time literal must be an integer");
        if (t.ivalue < 0) lex_.fail(t, "time literal must be >= 0");
        return t.ivalue;
    }

    Predicate parse_predicate(QuerySource source) {
        const Token& head = lex_.peek();
        if (head.kind != Token::Kind::Ident) {
            lex_.fail(head, "expected a predicate");
        }
        const std::string kw = to_lower(head.text);

        if (kw == "intersects") {
            require_spatial(source, head);
            lex_.take();
            expect_symbol("(");
            expect_keyword("layer");
            const Token cat = expect(Token::Kind::String, "layer category string");
            expect_symbol(")");
            Predicate p;
            p.kind = Predicate::Kind::IntersectsLayer;
            p.text = cat.text;
            return p;
        }
        if (kw == "within") {
            require_spatial(source, head);
            lex_.take();
            expect_symbol("(");
            expect_keyword("region");
            const Token name = expect(Token::Kind::String, "region name string");
            expect_symbol(")");
            Predicate p;
            p.kind = Predicate::Kind::WithinRegion;
            p.text = name.text;
            return p;
        }
        if (kw == "window") {
            require_spatial(source, head);
            const Token open = lex_.take();
            expect_symbol("(");
            const double x0 = expect_number();
            expect_symbol(",");
            const double x1 = expect_number();
            expect_symbol(",");
            const double y0 = expect_number();
            expect_symbol(",");
            const double y1 = expect_number();
            expect_symbol(",");
            const std::int64_t t0 = expect_timelit();
            expect_symbol(",");
            const std::int64_t t1 = expect_timelit();
            expect_symbol(")");
            if (x0 > x1) lex_.fail(open, "window x_min exceeds x_max");
            if (y0 > y1) lex_.fail(open, "window y_min exceeds y_max");
            if (t0 > t1) lex_.fail(open, "window t_begin exceeds t_end");
            Predicate p;
            p.kind = Predicate::Kind::InWindow;
            p.window = STWindow(x0, x1, y0, y1, TimeInterval(TimeInstant(t0), TimeInstant(t1)));
            return p;
        }

        const Token field = lex_.take();
        // Field validity first, so errors name the field even before we see
        // whether an intersects predicate will follow; the conditional
        // 'place' column is re-checked on the fully parsed AST by run().
        const FieldSpec spec = check_field_lenient(source, field);

        const Token& next = lex_.peek();
        if (next.kind == Token::Kind::Ident && to_lower(next.text) == "like") {
            lex_.take();
            if (spec.type != FieldType::Str) {
                lex_.fail(field, "like applies to string fields; '" + std::string(spec.name)
                                     + "' is not a string");
            }
            const Token pat = expect(Token::Kind::String, "like pattern string");
            Predicate p;
            p.kind = Predicate::Kind::Like;
            p.field = spec.name;
            p.text = pat.text;
            return p;
        }

        if (next.kind != Token::Kind::Symbol
            || (next.text != "=" && next.text != "!=" && next.text != "<" && next.text != "<="
                && next.text != ">" && next.text != ">=")) {
            lex_.fail(next, "expected comparison operator or 'like'");
        }
        const Token op_tok = lex_.take();
        CompareOp op = CompareOp::Eq;
        if (op_tok.text == "=") op = CompareOp::Eq;
        else if (op_tok.text == "!=") op = CompareOp::Ne;
        else if (op_tok.text == "<") op = CompareOp::Lt;
        else if (op_tok.text == "<=") op = CompareOp::Le;
        else if (op_tok.text == ">") op = CompareOp::Gt;
        else op = CompareOp::Ge;

        const Token lit = lex_.take();
        Literal literal;
        switch (lit.kind) {
        case Token::Kind::String: literal = Literal::str(lit.text); break;
        case Token::Kind::Number:
            literal = lit.is_int ? Literal::integer(lit.ivalue) : Literal::real(lit.dvalue);
            break;
        case Token::Kind::Duration: literal = Literal::duration_s(lit.ivalue); break;
        default: lex_.fail(lit, "expected a literal (string, number or duration)");
        }

        switch (spec.type) {
        case FieldType::Str:
            if (literal.kind != Literal::Kind::String) {
                lex_.fail(lit, "field '" + std::string(spec.name) + "' compares to strings");
            }
            break;
        case FieldType::Num:
            if (literal.kind != Literal::Kind::Number) {
                lex_.fail(lit, "field '" + std::string(spec.name) + "' compares to numbers");
            }
            break;
        case FieldType::Time:
            if (literal.kind != Literal::Kind::Number || !literal.is_int) {
                lex_.fail(lit, "field '" + std::string(spec.name)
                                   + "' compares to integer epoch seconds");
            }
            break;
        case FieldType::Dur:
            if (literal.kind != Literal::Kind::Duration) {
                lex_.fail(lit, "field '" + std::string(spec.name)
                                   + "' compares to durations with an explicit unit (s, min, h)");
            }
            break;
        }

        Predicate p;
        p.kind = Predicate::Kind::Compare;
        p.field = spec.name;
        p.op = op;
        p.literal = literal;
        return p;
    }

    // Same lookup as check_field but without the place/intersects coupling;
    // predicates may mention place before the intersects predicate appears.
    FieldSpec check_field_lenient(QuerySource source, const Token& at) {
        for (const FieldSpec& f : query_detail::source_fields(source, true)) {
            if (to_lower(at.text) == f.name) return f;
        }
        std::vector<std::string> names;
        for (const FieldSpec& f : query_detail::source_fields(source, true)) {
            names.push_back(f.name);
        }
        lex_.fail(at, "unknown field '" + at.text + "' for source " + to_string(source)
                          + "; valid fields: " + join(names, ", "));
    }

    void require_spatial(QuerySource source, const Token& at) {
        if (!query_detail::supports_spatial_predicates(source)) {
            lex_.fail(at, std::string("spatial predicates do not apply to source ")
                              + to_string(source));
        }
    }

    double expect_number() {
        const Token t = expect(Token::Kind::Number, "number");
        return t.dvalue;
    }

    Lexer lex_;
};

} // namespace

QueryAst parse(const std::string& text) {
    Parser parser(text);
    QueryAst ast = parser.run();

    // The conditional place column needs an intersects predicate somewhere in
    // the final predicate list.
    const bool with_intersects =
        std::any_of(ast.predicates.begin(), ast.predicates.end(), [](const Predicate& p) {
            return p.kind == Predicate::Kind::IntersectsLayer;
        });
    if (query_detail::place_is_conditional(ast.source) && !with_intersects) {
        auto uses_place = [](const Predicate& p) {
            return (p.kind == Predicate::Kind::Compare || p.kind == Predicate::Kind::Like)
                && p.field == "place";
        };
        const bool predicate_place =
            std::any_of(ast.predicates.begin(), ast.predicates.end(), uses_place);
        const bool projected_place = ast.projection
            && std::find(ast.projection->begin(), ast.projection->end(), "place")
                != ast.projection->end();
        const bool grouped_place = ast.group_by && *ast.group_by == "place";
        if (predicate_place || projected_place || grouped_place) {
            throw ParseError(0, 1, 1,
                             std::string("field 'place' on source ") + to_string(ast.source)
                                 + " requires an intersects(layer ...) predicate");
        }
    }
    return ast;
}

std::string pretty_print(const QueryAst& ast) {
    std::string out = to_string(ast.source);
    auto literal_text = [](const Literal& l) -> std::string {
        switch (l.kind) {
        case Literal::Kind::String: return '"' + l.text + '"';
        case Literal::Kind::Duration: return std::to_string(l.ivalue) + "s";
        case Literal::Kind::Number:
            return l.is_int ? std::to_string(l.ivalue) : format_double(l.dvalue);
        }
        return "?";
    };
    if (!ast.predicates.empty()) {
        out += " where ";
        for (std::size_t i = 0; i < ast.predicates.size(); ++i) {
            const Predicate& p = ast.predicates[i];
            if (i > 0) out += " and ";
            switch (p.kind) {
            case Predicate::Kind::Compare:
                out += p.field;
                out += ' ';
                out += to_string(p.op);
                out += ' ';
                out += literal_text(p.literal);
                break;
            case Predicate::Kind::Like:
                out += p.field + " like \"" + p.text + '"';
                break;
            case Predicate::Kind::IntersectsLayer:
                out += "intersects(layer \"" + p.text + "\")";
                break;
            case Predicate::Kind::WithinRegion:
                out += "within(region \"" + p.text + "\")";
                break;
            case Predicate::Kind::InWindow:
                out += "window(" + format_double(p.window.x_min) + ", "
                    + format_double(p.window.x_max) + ", " + format_double(p.window.y_min) + ", "
                    + format_double(p.window.y_max) + ", " + std::to_string(p.window.time.begin.t)
                    + ", " + std::to_string(p.window.time.end.t) + ")";
                break;
            }
        }
    }
    if (ast.group_by) out += " group by " + *ast.group_by;
    if (ast.select_count) {
        out += " select count";
    } else if (ast.projection) {
        out += " select " + join(*ast.projection, ", ");
    }
    return out;
}

} // namespace traj
