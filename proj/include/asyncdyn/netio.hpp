#ifndef ASYNCDYN_NETIO_HPP
#define ASYNCDYN_NETIO_HPP

#include "core.hpp"

#include <cctype>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace asyncdyn {

//=============================================================================
// Boolean expressions

struct SourceSpan {
    std::size_t line = 0;
    std::size_t column = 0;
};

class BoolExpr {
public:
    enum class Kind { Constant, Variable, Not, And, Or, Xor };

    static BoolExpr constant(bool v) { return BoolExpr(Kind::Constant, v, 0, nullptr, nullptr); }
    static BoolExpr variable(std::size_t index)
    {
        return BoolExpr(Kind::Variable, false, index, nullptr, nullptr);
    }
    static BoolExpr negation(BoolExpr e)
    {
        return BoolExpr(Kind::Not, false, 0, std::make_shared<const BoolExpr>(std::move(e)), nullptr);
    }
    static BoolExpr binary(Kind k, BoolExpr a, BoolExpr b)
    {
        return BoolExpr(k, false, 0, std::make_shared<const BoolExpr>(std::move(a)),
                        std::make_shared<const BoolExpr>(std::move(b)));
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] bool value() const noexcept { return value_; }
    [[nodiscard]] std::size_t var() const noexcept { return var_; }
    [[nodiscard]] const BoolExpr& lhs() const { return *lhs_; }
    [[nodiscard]] const BoolExpr& rhs() const { return *rhs_; }

    /// Evaluates with `vars[i]` as the value of variable i.
    [[nodiscard]] bool eval(const std::vector<bool>& vars) const
    {
        switch (kind_) {
        case Kind::Constant: return value_;
        case Kind::Variable: return vars[var_];
        case Kind::Not: return !lhs_->eval(vars);
        case Kind::And: return lhs_->eval(vars) && rhs_->eval(vars);
        case Kind::Or: return lhs_->eval(vars) || rhs_->eval(vars);
        case Kind::Xor: return lhs_->eval(vars) != rhs_->eval(vars);
        }
        return false;
    }

    friend bool operator==(const BoolExpr& a, const BoolExpr& b)
    {
        if (a.kind_ != b.kind_)
            return false;
        switch (a.kind_) {
        case Kind::Constant: return a.value_ == b.value_;
        case Kind::Variable: return a.var_ == b.var_;
        case Kind::Not: return *a.lhs_ == *b.lhs_;
        default: return *a.lhs_ == *b.lhs_ && *a.rhs_ == *b.rhs_;
        }
    }

private:
    BoolExpr(Kind k, bool v, std::size_t var, std::shared_ptr<const BoolExpr> l,
             std::shared_ptr<const BoolExpr> r)
        : kind_(k), value_(v), var_(var), lhs_(std::move(l)), rhs_(std::move(r))
    {
    }

    Kind kind_;
    bool value_;
    std::size_t var_;
    std::shared_ptr<const BoolExpr> lhs_;
    std::shared_ptr<const BoolExpr> rhs_;
};

struct Rule {
    BoolExpr expr;
    SourceSpan span; // position of the rule's target identifier
};

/// A parsed `.abn` network: declared variables in order and one update rule
/// per variable (rules[i] drives coordinate i + 1).
struct NetworkDocument {
    std::vector<std::string> variables;
    std::vector<Rule> rules;
    std::string file_name;

    [[nodiscard]] int dimension() const noexcept { return static_cast<int>(variables.size()); }

    friend bool operator==(const NetworkDocument& a, const NetworkDocument& b)
    {
        if (a.variables != b.variables || a.rules.size() != b.rules.size())
            return false;
        for (std::size_t i = 0; i < a.rules.size(); ++i)
            if (!(a.rules[i].expr == b.rules[i].expr))
                return false;
        return true;
    }
};

//=============================================================================
// Lexer / parser for the network language
//
//   doc    := "vars" ":" ident+ rule+
//   rule   := "next" ident "=" expr
//   expr   := term (("|" | "^") term)*
//   term   := factor ("&" factor)*
//   factor := ("!" | "~") factor | "(" expr ")" | ident | "0" | "1"
//
// "#" starts a comment running to the end of the line.

namespace detail {

struct Token {
    enum class Type { Ident, Vars, Next, Colon, Equals, Or, Xor, And, Not, LParen, RParen, Zero, One, End };
    Type type;
    std::string text;
    SourceSpan span;
};

inline const char* token_name(Token::Type t)
{
    switch (t) {
    case Token::Type::Ident: return "identifier";
    case Token::Type::Vars: return "'vars'";
    case Token::Type::Next: return "'next'";
    case Token::Type::Colon: return "':'";
    case Token::Type::Equals: return "'='";
    case Token::Type::Or: return "'|'";
    case Token::Type::Xor: return "'^'";
    case Token::Type::And: return "'&'";
    case Token::Type::Not: return "'!'";
    case Token::Type::LParen: return "'('";
    case Token::Type::RParen: return "')'";
    case Token::Type::Zero: return "'0'";
    case Token::Type::One: return "'1'";
    case Token::Type::End: return "end of input";
    }
    return "?";
}

inline std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&] {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    };
    while (i < text.size()) {
        const char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n')
                advance();
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        const SourceSpan span{line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
                word += text[i];
                advance();
            }
            auto type = word == "vars"   ? Token::Type::Vars
                        : word == "next" ? Token::Type::Next
                                         : Token::Type::Ident;
            out.push_back({type, std::move(word), span});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) {
                num += text[i];
                advance();
            }
            if (num != "0" && num != "1")
                throw ParseError("invalid constant '" + num + "' (only 0 and 1 are allowed)",
                                 span.line, span.column);
            out.push_back({num == "0" ? Token::Type::Zero : Token::Type::One, num, span});
            continue;
        }
        Token::Type type;
        switch (c) {
        case ':': type = Token::Type::Colon; break;
        case '=': type = Token::Type::Equals; break;
        case '|': type = Token::Type::Or; break;
        case '^': type = Token::Type::Xor; break;
        case '&': type = Token::Type::And; break;
        case '!':
        case '~': type = Token::Type::Not; break;
        case '(': type = Token::Type::LParen; break;
        case ')': type = Token::Type::RParen; break;
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", span.line, span.column);
        }
        out.push_back({type, std::string(1, c), span});
        advance();
    }
    out.push_back({Token::Type::End, "", {line, col}});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    NetworkDocument document()
    {
        NetworkDocument doc;
        expect(Token::Type::Vars);
        expect(Token::Type::Colon);
        std::vector<SourceSpan> decl_spans;
        while (peek().type == Token::Type::Ident) {
            const auto& t = take();
            if (index_.count(t.text))
                throw ParseError("variable '" + t.text + "' declared twice", t.span.line, t.span.column);
            index_[t.text] = doc.variables.size();
            doc.variables.push_back(t.text);
            decl_spans.push_back(t.span);
        }
        if (doc.variables.empty())
            throw error_here("expected at least one variable name");

        std::vector<std::optional<Rule>> rules(doc.variables.size());
        do {
            expect(Token::Type::Next);
            const auto target = expect(Token::Type::Ident);
            auto it = index_.find(target.text);
            if (it == index_.end())
                throw ParseError("rule for undeclared variable '" + target.text + "'",
                                 target.span.line, target.span.column);
            if (rules[it->second])
                throw ParseError("duplicate rule for '" + target.text + "'", target.span.line,
                                 target.span.column);
            expect(Token::Type::Equals);
            rules[it->second] = Rule{expr(), target.span};
        } while (peek().type != Token::Type::End);

        for (std::size_t i = 0; i < rules.size(); ++i) {
            if (!rules[i])
                throw ParseError("missing rule for '" + doc.variables[i] + "'", decl_spans[i].line,
                                 decl_spans[i].column);
            doc.rules.push_back(std::move(*rules[i]));
        }
        return doc;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }

    ParseError error_here(const std::string& what) const
    {
        return ParseError(what, peek().span.line, peek().span.column);
    }

    Token expect(Token::Type t)
    {
        if (peek().type != t)
            throw error_here(std::string("expected ") + token_name(t) + ", found " +
                             (peek().type == Token::Type::End ? std::string("end of input")
                                                              : "'" + peek().text + "'"));
        return take();
    }

    BoolExpr expr()
    {
        auto lhs = term();
        while (peek().type == Token::Type::Or || peek().type == Token::Type::Xor) {
            const auto k = take().type == Token::Type::Or ? BoolExpr::Kind::Or : BoolExpr::Kind::Xor;
            lhs = BoolExpr::binary(k, std::move(lhs), term());
        }
        return lhs;
    }

    BoolExpr term()
    {
        auto lhs = factor();
        while (peek().type == Token::Type::And) {
            take();
            lhs = BoolExpr::binary(BoolExpr::Kind::And, std::move(lhs), factor());
        }
        return lhs;
    }

    BoolExpr factor()
    {
        const auto& t = peek();
        switch (t.type) {
        case Token::Type::Not: take(); return BoolExpr::negation(factor());
        case Token::Type::LParen: {
            take();
            auto e = expr();
            expect(Token::Type::RParen);
            return e;
        }
        case Token::Type::Zero: take(); return BoolExpr::constant(false);
        case Token::Type::One: take(); return BoolExpr::constant(true);
        case Token::Type::Ident: {
            auto it = index_.find(t.text);
            if (it == index_.end())
                throw error_here("undeclared variable '" + t.text + "'");
            take();
            return BoolExpr::variable(it->second);
        }
        default:
            throw error_here("expected an expression, found " +
                             (t.type == Token::Type::End ? std::string("end of input")
                                                         : "'" + t.text + "'"));
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
};

inline int precedence(BoolExpr::Kind k)
{
    switch (k) {
    case BoolExpr::Kind::Or:
    case BoolExpr::Kind::Xor: return 1;
    case BoolExpr::Kind::And: return 2;
    case BoolExpr::Kind::Not: return 3;
    default: return 4;
    }
}

inline void print(std::ostream& os, const BoolExpr& e, const std::vector<std::string>& names)
{
    using K = BoolExpr::Kind;
    auto child = [&](const BoolExpr& c, bool paren) {
        if (paren)
            os << '(';
        print(os, c, names);
        if (paren)
            os << ')';
    };
    switch (e.kind()) {
    case K::Constant: os << (e.value() ? '1' : '0'); return;
    case K::Variable: os << names[e.var()]; return;
    case K::Not:
        os << '!';
        child(e.lhs(), precedence(e.lhs().kind()) < precedence(K::Not));
        return;
    default: {
        const int p = precedence(e.kind());
        child(e.lhs(), precedence(e.lhs().kind()) < p);
        os << (e.kind() == K::And ? " & " : e.kind() == K::Or ? " | " : " ^ ");
        // left-associative: an equal-precedence right operand needs parentheses
        child(e.rhs(), precedence(e.rhs().kind()) <= p);
    }
    }
}

} // namespace detail

inline NetworkDocument parse_network(std::string_view text, std::string file_name = {})
{
    auto doc = detail::Parser(detail::tokenize(text)).document();
    doc.file_name = std::move(file_name);
    return doc;
}

inline std::string format_expr(const BoolExpr& e, const std::vector<std::string>& names)
{
    std::ostringstream os;
    detail::print(os, e, names);
    return os.str();
}

inline std::string serialize(const NetworkDocument& doc)
{
    std::ostringstream os;
    os << "vars:";
    for (const auto& v : doc.variables)
        os << ' ' << v;
    os << '\n';
    for (std::size_t i = 0; i < doc.rules.size(); ++i)
        os << "next " << doc.variables[i] << " = " << format_expr(doc.rules[i].expr, doc.variables)
           << '\n';
    return os.str();
}

namespace detail {

/// Truth column of e over all 2^n states, 64 states per word.
inline std::vector<std::uint64_t> column(const BoolExpr& e, int n, std::size_t words)
{
    using K = BoolExpr::Kind;
    std::vector<std::uint64_t> out(words);
    switch (e.kind()) {
    case K::Constant:
        for (auto& w : out)
            w = e.value() ? ~std::uint64_t{0} : 0;
        break;
    case K::Variable: {
        // coordinate i (0-based var) is bit n-1-i of the encoding
        const int bit = n - 1 - static_cast<int>(e.var());
        for (std::size_t wi = 0; wi < words; ++wi) {
            std::uint64_t w = 0;
            for (int b = 0; b < 64; ++b) {
                const std::uint64_t code = wi * 64 + static_cast<std::uint64_t>(b);
                if ((code >> bit) & 1u)
                    w |= std::uint64_t{1} << b;
            }
            out[wi] = w;
        }
        break;
    }
    case K::Not: {
        out = column(e.lhs(), n, words);
        for (auto& w : out)
            w = ~w;
        break;
    }
    default: {
        out = column(e.lhs(), n, words);
        const auto rhs = column(e.rhs(), n, words);
        for (std::size_t i = 0; i < words; ++i)
            out[i] = e.kind() == K::And ? (out[i] & rhs[i])
                     : e.kind() == K::Or ? (out[i] | rhs[i])
                                         : (out[i] ^ rhs[i]);
    }
    }
    return out;
}

} // namespace detail

/// Tabulates the rules: table[e] is the rule vector evaluated at the state
/// with encoding e. Rule i feeds coordinate i.
inline GeneratorFunction compile(const NetworkDocument& doc)
{
    const int n = doc.dimension();
    check_dimension(n);
    const std::size_t states = std::size_t{1} << n;
    const std::size_t words = (states + 63) / 64;
    std::vector<std::uint32_t> table(states, 0);
    for (int i = 0; i < n; ++i) {
        const auto col = detail::column(doc.rules[static_cast<std::size_t>(i)].expr, n, words);
        const std::uint32_t bit = std::uint32_t{1} << (n - 1 - i);
        for (std::size_t c = 0; c < states; ++c)
            if ((col[c >> 6] >> (c & 63)) & 1u)
                table[c] |= bit;
    }
    return GeneratorFunction(n, std::move(table), doc.variables, serialize(doc));
}

//=============================================================================
// Truth tables: "n=<k>" followed by 2^k lines "<in> -> <out>", inputs in
// increasing order. Blank lines are ignored.

inline GeneratorFunction parse_truth_table(std::string_view text)
{
    std::vector<std::pair<std::size_t, std::string_view>> lines;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        ++line_no;
        auto l = text.substr(start, end - start);
        while (!l.empty() && std::isspace(static_cast<unsigned char>(l.back())))
            l.remove_suffix(1);
        while (!l.empty() && std::isspace(static_cast<unsigned char>(l.front())))
            l.remove_prefix(1);
        if (!l.empty())
            lines.emplace_back(line_no, l);
        start = end + 1;
    }
    if (lines.empty())
        throw ParseError("empty truth table");
    auto [hl, header] = lines.front();
    if (header.substr(0, 2) != "n=")
        throw ParseError("truth table must start with 'n=<k>'", hl, 1);
    int n = 0;
    for (char c : header.substr(2)) {
        if (c < '0' || c > '9' || n > 100)
            throw ParseError("malformed dimension in '" + std::string(header) + "'", hl, 3);
        n = n * 10 + (c - '0');
    }
    if (header.size() == 2 || n < 1)
        throw ParseError("malformed dimension in '" + std::string(header) + "'", hl, 3);
    check_dimension(n);
    const std::size_t states = std::size_t{1} << n;
    if (lines.size() - 1 != states)
        throw ParseError("expected " + std::to_string(states) + " table lines for n=" +
                         std::to_string(n) + ", got " + std::to_string(lines.size() - 1));
    std::vector<std::uint32_t> table(states);
    for (std::size_t i = 0; i < states; ++i) {
        auto [ln, l] = lines[i + 1];
        const auto arrow = l.find("->");
        if (arrow == std::string_view::npos)
            throw ParseError("expected '<input> -> <output>'", ln, 1);
        auto in = l.substr(0, arrow);
        auto out = l.substr(arrow + 2);
        while (!in.empty() && std::isspace(static_cast<unsigned char>(in.back())))
            in.remove_suffix(1);
        while (!out.empty() && std::isspace(static_cast<unsigned char>(out.front())))
            out.remove_prefix(1);
        StateVector a, b;
        try {
            a = StateVector::parse(in);
            b = StateVector::parse(out);
        } catch (const Error& e) {
            throw ParseError(e.what(), ln, 1);
        }
        if (a.size() != n || b.size() != n)
            throw ParseError("bitstring length differs from n=" + std::to_string(n), ln, 1);
        if (a.bits() != i)
            throw ParseError("input " + a.str() + " out of order or duplicated (expected " +
                                 StateVector(n, static_cast<std::uint32_t>(i)).str() + ")",
                             ln, 1);
        table[i] = b.bits();
    }
    return GeneratorFunction(n, std::move(table));
}

inline std::string format_truth_table(const GeneratorFunction& phi)
{
    std::string out = "n=" + std::to_string(phi.dimension()) + "\n";
    for (std::uint32_t c = 0; c < phi.state_count(); ++c)
        out += StateVector(phi.dimension(), c).str() + " -> " +
               StateVector(phi.dimension(), phi.image(c)).str() + "\n";
    return out;
}

//=============================================================================
// State-set literals: "{b1, b2, ...}", "{}" for the empty set.

inline StateSet parse_state_set(std::string_view text, int n)
{
    auto t = text;
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front())))
        t.remove_prefix(1);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back())))
        t.remove_suffix(1);
    if (t.size() < 2 || t.front() != '{' || t.back() != '}')
        throw ParseError("state set must be written as '{b1, b2, ...}', got '" + std::string(text) + "'");
    t = t.substr(1, t.size() - 2);
    StateSet out(n);
    std::size_t start = 0;
    bool any = false;
    for (std::size_t i = 0; i <= t.size(); ++i) {
        if (i < t.size() && t[i] != ',')
            continue;
        auto tok = t.substr(start, i - start);
        start = i + 1;
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front())))
            tok.remove_prefix(1);
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back())))
            tok.remove_suffix(1);
        if (tok.empty()) {
            if (i == t.size() && !any)
                break; // "{}"
            throw ParseError("empty element in state set '" + std::string(text) + "'");
        }
        const auto s = StateVector::parse(tok);
        if (s.size() != n)
            throw ParseError("state '" + std::string(tok) + "' has length " +
                             std::to_string(s.size()) + ", expected " + std::to_string(n));
        if (out.contains(s))
            throw ParseError("duplicate state '" + std::string(tok) + "' in set");
        out.insert(s);
        any = true;
    }
    return out;
}

inline std::string format_state_set(const StateSet& s) { return s.str(); }

} // namespace asyncdyn

#endif // ASYNCDYN_NETIO_HPP
