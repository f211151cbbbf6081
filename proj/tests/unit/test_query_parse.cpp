#include "query_gen.hpp"
#include "traj/query.hpp"

#include <doctest.h>

#include <random>

using namespace traj;
using fixtures::random_ast;

namespace {

std::string parse_error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e.expected();
    }
    return {};
}

} // namespace

TEST_CASE("parse the stop-duration road query") {
    const QueryAst ast = parse(
        R"(stops where object = "MO" and duration > 600s and intersects(layer "road") select place)");
    CHECK(ast.source == QuerySource::Stops);
    REQUIRE(ast.predicates.size() == 3);
    CHECK(ast.predicates[0].kind == Predicate::Kind::Compare);
    CHECK(ast.predicates[0].field == "object");
    CHECK(ast.predicates[0].literal.text == "MO");
    CHECK(ast.predicates[1].field == "duration");
    CHECK(ast.predicates[1].literal.kind == Literal::Kind::Duration);
    CHECK(ast.predicates[1].literal.ivalue == 600);
    CHECK(ast.predicates[2].kind == Predicate::Kind::IntersectsLayer);
    CHECK(ast.predicates[2].text == "road");
    REQUIRE(ast.projection.has_value());
    CHECK(*ast.projection == std::vector<std::string>{"place"});
}

TEST_CASE("parse the roi-visits group-by-count query") {
    const QueryAst ast =
        parse(R"(roi-visits where category = "commercial" group by region select count)");
    CHECK(ast.source == QuerySource::RoiVisits);
    REQUIRE(ast.predicates.size() == 1);
    CHECK(ast.group_by == "region");
    CHECK(ast.select_count);
}

TEST_CASE("unknown fields are named along the valid ones") {
    const std::string msg = parse_error_of("stops where frobnicate = 1");
    CHECK(msg.find("frobnicate") != std::string::npos);
    CHECK(msg.find("duration") != std::string::npos);
    CHECK(msg.find("t_begin") != std::string::npos);
}

TEST_CASE("parse errors carry positions") {
    try {
        parse("stops where\nduration >");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() > 9);
        CHECK(e.offset() == 22);
    }
}

TEST_CASE("grammar rejections") {
    CHECK(parse_error_of("").find("query source") != std::string::npos);
    CHECK(parse_error_of("frob").find("unknown query source") != std::string::npos);
    CHECK(parse_error_of("stops where duration > 600")
              .find("explicit unit") != std::string::npos);
    CHECK(parse_error_of(R"(stops where object = 5)").find("strings") != std::string::npos);
    CHECK(parse_error_of(R"(stops where x = "five")").find("numbers") != std::string::npos);
    CHECK(parse_error_of(R"(stops where t_begin = 1.5)").find("integer") != std::string::npos);
    CHECK(parse_error_of(R"(raw where object like 5)").find("pattern") != std::string::npos);
    CHECK(parse_error_of(R"(raw where x like "5%")").find("string fields") != std::string::npos);
    CHECK(parse_error_of("raw group by object").find("select count") != std::string::npos);
    CHECK(parse_error_of(R"(raw select place)").find("intersects") != std::string::npos);
    CHECK(parse_error_of(R"(roi-visits where intersects(layer "x"))")
              .find("do not apply") != std::string::npos);
    CHECK(parse_error_of("raw where window(10, 0, 0, 1, 0, 1)")
              .find("x_min") != std::string::npos);
    CHECK(parse_error_of("raw where window(0, 1, 0, 1, 5, 1)")
              .find("t_begin") != std::string::npos);
    CHECK(parse_error_of(R"(raw where object = "unterminated)")
              .find("unterminated") != std::string::npos);
    CHECK(parse_error_of("raw extra").find("end of query") != std::string::npos);
    CHECK(parse_error_of("stops where duration > 600parsecs")
              .find("duration unit") != std::string::npos);
}

TEST_CASE("keywords are case-insensitive, whitespace is free-form") {
    const QueryAst a = parse("STOPS   WHERE duration >= 10min AND object != \"x\" SELECT object");
    const QueryAst b = parse("stops where duration >= 600s and object != \"x\" select object");
    CHECK(a == b);
}

TEST_CASE("duration units normalize to seconds") {
    CHECK(parse("stops where duration > 2min").predicates[0].literal.ivalue == 120);
    CHECK(parse("stops where duration > 2h").predicates[0].literal.ivalue == 7200);
    CHECK(parse("stops where duration > 2s").predicates[0].literal.ivalue == 2);
}

TEST_CASE("negative window coordinates parse") {
    const QueryAst ast = parse("raw where window(-10.5, 10, -20, -1, 0, 100)");
    CHECK(ast.predicates[0].window.x_min == -10.5);
    CHECK(ast.predicates[0].window.y_max == -1.0);
}

TEST_CASE("pretty_print produces canonical text") {
    const std::string canon = pretty_print(
        parse("STOPS   where duration>10min and  intersects( layer \"road\" ) select place"));
    CHECK(canon == R"(stops where duration > 600s and intersects(layer "road") select place)");

    const std::string group = pretty_print(
        parse(R"(roi-visits WHERE category="commercial" GROUP BY region SELECT COUNT)"));
    CHECK(group == R"(roi-visits where category = "commercial" group by region select count)");
}

TEST_CASE("parse after pretty_print is the identity on random ASTs") {
    std::mt19937 rng(1234);
    for (int i = 0; i < 100; ++i) {
        const QueryAst ast = random_ast(rng);
        CAPTURE(pretty_print(ast));
        const QueryAst back = parse(pretty_print(ast));
        CHECK(back == ast);
    }
}

TEST_CASE("pretty_print after parse is the identity on canonical strings") {
    std::mt19937 rng(4321);
    for (int i = 0; i < 100; ++i) {
        const std::string canonical = pretty_print(random_ast(rng));
        CHECK(pretty_print(parse(canonical)) == canonical);
    }
}

TEST_CASE("semantic source exposes place without intersects") {
    const QueryAst ast = parse(R"(semantic where place like "%bank%" select place, role)");
    CHECK(ast.source == QuerySource::Semantic);
    CHECK(ast.predicates[0].field == "place");
}

TEST_CASE("place becomes legal once intersects appears anywhere in the chain") {
    CHECK_NOTHROW(parse(R"(raw where place like "%a%" and intersects(layer "road"))"));
    CHECK_THROWS_AS(parse(R"(raw where place like "%a%")"), ParseError);
}
