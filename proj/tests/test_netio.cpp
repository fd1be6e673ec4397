#include "support.hpp"

#include <gtest/gtest.h>

using namespace testkit;

TEST(ParseNetwork, Fig1)
{
    const auto doc = parse_network(kFig1Source);
    EXPECT_EQ(doc.variables, (std::vector<std::string>{"x1", "x2"}));
    ASSERT_EQ(doc.rules.size(), 2u);
    const auto phi = compile(doc);
    EXPECT_EQ(phi, phi_fig1());
    EXPECT_EQ(phi.names(), doc.variables);
}

TEST(ParseNetwork, IdentityAndNot)
{
    EXPECT_EQ(compile(parse_network("vars: a\nnext a = a")), GeneratorFunction::identity(1));
    EXPECT_EQ(compile(parse_network("vars: x1 x2\nnext x1 = !x1\nnext x2 = !x2")), phi_not());
}

TEST(ParseNetwork, Precedence)
{
    // ! binds tighter than &, & tighter than | and ^, which associate left
    const auto doc = parse_network("vars: a b c\nnext a = a | b & c\nnext b = a ^ b | c\nnext c = !a & b");
    const auto phi = compile(doc);
    for (std::uint32_t code = 0; code < 8; ++code) {
        const bool a = code & 4, b = code & 2, c = code & 1;
        const std::uint32_t want = ((a || (b && c)) << 2) | (((a != b) || c) << 1) | (!a && b);
        EXPECT_EQ(phi.image(code), want) << code;
    }
    EXPECT_EQ(format_expr(doc.rules[0].expr, doc.variables), "a | b & c");
    EXPECT_EQ(format_expr(doc.rules[1].expr, doc.variables), "a ^ b | c");
}

TEST(ParseNetwork, CommentsConstantsAndTilde)
{
    const auto phi = compile(parse_network("# header\nvars: p q # two\nnext q = 1\nnext p = ~(p ^ 0)\n"));
    EXPECT_EQ(phi.image(0b00), 0b11u);
    EXPECT_EQ(phi.image(0b10), 0b01u);
}

namespace {

ParseError parse_error(const std::string& text)
{
    try {
        parse_network(text);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no error for: " << text;
    return ParseError("none");
}

} // namespace

TEST(ParseNetwork, DiagnosticsCarryPositions)
{
    auto e = parse_error("vars: x\nnext x = y");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 10u);
    EXPECT_NE(std::string(e.what()).find("undeclared variable 'y'"), std::string::npos);

    e = parse_error("vars: x y\nnext x = y\nnext x = x\nnext y = x");
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("duplicate rule"), std::string::npos);

    e = parse_error("vars: x y\nnext x = y");
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 9u);
    EXPECT_NE(std::string(e.what()).find("missing rule for 'y'"), std::string::npos);

    e = parse_error("vars: x\nnext x = x $ x");
    EXPECT_EQ(e.column(), 12u);

    e = parse_error("vars: x\nnext x = (x");
    EXPECT_NE(std::string(e.what()).find("expected ')'"), std::string::npos);

    e = parse_error("vars: x x\nnext x = x");
    EXPECT_NE(std::string(e.what()).find("declared twice"), std::string::npos);

    e = parse_error("vars: x\nnext x = 2");
    EXPECT_NE(std::string(e.what()).find("invalid constant"), std::string::npos);

    e = parse_error("vars: next\nnext next = 1");
    EXPECT_EQ(e.column(), 7u);
}

TEST(ParseNetwork, CapacityIsEnforcedAtCompile)
{
    std::string text = "vars:";
    for (int i = 0; i < 21; ++i)
        text += " v" + std::to_string(i);
    text += "\n";
    for (int i = 0; i < 21; ++i)
        text += "next v" + std::to_string(i) + " = v" + std::to_string(i) + "\n";
    const auto doc = parse_network(text);
    EXPECT_THROW(compile(doc), CapacityError);
}

TEST(Serialize, RoundTripsRandomDocuments)
{
    Rng rng(5);
    std::function<std::string(int, int)> gen = [&](int depth, int n) -> std::string {
        const int pick = static_cast<int>(rng() % (depth > 3 ? 2 : 6));
        switch (pick) {
        case 0: return "v" + std::to_string(rng() % static_cast<unsigned>(n));
        case 1: return rng() % 2 ? "1" : "0";
        case 2: return "!" + gen(depth + 1, n);
        case 3: return "(" + gen(depth + 1, n) + " & " + gen(depth + 1, n) + ")";
        case 4: return "(" + gen(depth + 1, n) + " | " + gen(depth + 1, n) + ")";
        default: return gen(depth + 1, n) + " ^ " + gen(depth + 1, n);
        }
    };
    for (int rep = 0; rep < 300; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 4);
        std::string text = "vars:";
        for (int i = 0; i < n; ++i)
            text += " v" + std::to_string(i);
        text += "\n";
        for (int i = 0; i < n; ++i)
            text += "next v" + std::to_string(i) + " = " + gen(0, n) + "\n";
        const auto doc = parse_network(text);
        const auto again = parse_network(serialize(doc));
        EXPECT_EQ(doc, again) << text << "\n---\n" << serialize(doc);
        EXPECT_EQ(serialize(again), serialize(doc));
        EXPECT_EQ(compile(doc), compile(again));
    }
}

TEST(TruthTable, ParsesAndRejects)
{
    const auto neg = parse_truth_table("n=1\n0 -> 1\n1 -> 0\n");
    EXPECT_EQ(neg.image(0), 1u);
    EXPECT_EQ(neg.image(1), 0u);
    EXPECT_EQ(parse_truth_table("n=2\n00 -> 11\n01 -> 00\n\n10 -> 00\n11 -> 11"), phi_omega());
    EXPECT_THROW(parse_truth_table("n=1\n0 -> 1"), ParseError);
    EXPECT_THROW(parse_truth_table("n=1\n1 -> 1\n0 -> 0"), ParseError);
    EXPECT_THROW(parse_truth_table("n=1\n0 -> 1\n0 -> 0"), ParseError);
    EXPECT_THROW(parse_truth_table("n=2\n00 -> 1\n01 -> 00\n10 -> 00\n11 -> 11"), ParseError);
    EXPECT_THROW(parse_truth_table("n=2\n00 -> 1x\n01 -> 00\n10 -> 00\n11 -> 11"), ParseError);
    EXPECT_THROW(parse_truth_table("2\n0 -> 1"), ParseError);
    EXPECT_THROW(parse_truth_table("n=21\n"), CapacityError);
    EXPECT_EQ(parse_truth_table(format_truth_table(phi_fig1())), phi_fig1());
}

TEST(StateSetLiteral, Examples)
{
    EXPECT_EQ(parse_state_set("{01, 10}", 2).str(), "{01, 10}");
    EXPECT_TRUE(parse_state_set("{}", 2).empty());
    EXPECT_TRUE(parse_state_set(" { } ", 2).empty());
    EXPECT_EQ(parse_state_set("{11,00}", 2).str(), "{00, 11}");
    EXPECT_THROW(parse_state_set("{001}", 2), ParseError);
    EXPECT_THROW(parse_state_set("{01, 01}", 2), ParseError);
    EXPECT_THROW(parse_state_set("{01,}", 2), ParseError);
    EXPECT_THROW(parse_state_set("01, 10", 2), ParseError);
    EXPECT_THROW(parse_state_set("{0a}", 2), ParseError);
}
