#ifndef WEIL_EXPR_HPP
#define WEIL_EXPR_HPP

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "error.hpp"
#include "poly.hpp"
#include "rational.hpp"

namespace weil {

enum class Primitive { sin, cos, exp, log, sqrt };

inline std::string_view primitive_name(Primitive p) {
    switch (p) {
        case Primitive::sin: return "sin";
        case Primitive::cos: return "cos";
        case Primitive::exp: return "exp";
        case Primitive::log: return "log";
        case Primitive::sqrt: return "sqrt";
    }
    return "?";
}

inline std::optional<Primitive> primitive_by_name(std::string_view s) {
    if (s == "sin") return Primitive::sin;
    if (s == "cos") return Primitive::cos;
    if (s == "exp") return Primitive::exp;
    if (s == "log") return Primitive::log;
    if (s == "sqrt") return Primitive::sqrt;
    return std::nullopt;
}

// Immutable expression tree in canonical form.  Canonicalization is minimal
// and structural: nested sums/products are flattened, literal operands are
// folded, 0/1 are absorbed, operands are sorted by a fixed total order.  Two
// expressions built from the same mathematical term therefore compare equal
// with `equals`, which is what the law tests rely on.
class Expr {
public:
    enum class Kind { literal, variable, sum, product, quotient, power, call };

    Expr() : Expr(lit(Rat(0))) {}

    static Expr lit(Rat value) {
        Node n;
        n.kind = Kind::literal;
        n.literal = std::move(value);
        return make(std::move(n));
    }

    static Expr var(std::size_t index) {
        Node n;
        n.kind = Kind::variable;
        n.var = index;
        return make(std::move(n));
    }

    // n-ary sum with flattening, literal folding, zero removal, sorting.
    static Expr sum(std::vector<Expr> ops) {
        std::vector<Expr> flat;
        Rat constant(0);
        for (Expr& e : ops) {
            if (e.kind() == Kind::sum) {
                for (const Expr& sub : e.operands())
                    if (sub.kind() == Kind::literal) constant += sub.literal();
                    else flat.push_back(sub);
            } else if (e.kind() == Kind::literal) {
                constant += e.literal();
            } else {
                flat.push_back(std::move(e));
            }
        }
        if (constant != 0) flat.push_back(lit(constant));
        std::sort(flat.begin(), flat.end(),
                  [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
        if (flat.empty()) return lit(Rat(0));
        if (flat.size() == 1) return flat.front();
        Node n;
        n.kind = Kind::sum;
        n.ops = std::move(flat);
        return make(std::move(n));
    }

    // n-ary product with flattening, literal folding, 0/1 absorption, sorting.
    static Expr product(std::vector<Expr> ops) {
        std::vector<Expr> flat;
        Rat constant(1);
        for (Expr& e : ops) {
            if (e.kind() == Kind::product) {
                for (const Expr& sub : e.operands())
                    if (sub.kind() == Kind::literal) constant *= sub.literal();
                    else flat.push_back(sub);
            } else if (e.kind() == Kind::literal) {
                constant *= e.literal();
            } else {
                flat.push_back(std::move(e));
            }
        }
        if (constant == 0) return lit(Rat(0));
        std::sort(flat.begin(), flat.end(),
                  [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
        if (constant != 1) flat.insert(flat.begin(), lit(constant));
        if (flat.empty()) return lit(Rat(1));
        if (flat.size() == 1) return flat.front();
        Node n;
        n.kind = Kind::product;
        n.ops = std::move(flat);
        return make(std::move(n));
    }

    // Division by a nonzero literal folds into the product; a literal-zero
    // numerator folds to 0 (smooth-function identity on the domain of
    // definition).  Everything else stays a quotient node.
    static Expr quotient(Expr num, Expr den) {
        if (den.kind() == Kind::literal && den.literal() != 0)
            return product({std::move(num), lit(Rat(1) / den.literal())});
        if (num.kind() == Kind::literal && num.literal() == 0) return lit(Rat(0));
        Node n;
        n.kind = Kind::quotient;
        n.ops = {std::move(num), std::move(den)};
        return make(std::move(n));
    }

    static Expr power(Expr base, unsigned exponent) {
        if (exponent == 0) return lit(Rat(1));
        if (exponent == 1) return base;
        if (base.kind() == Kind::literal) {
            Rat r(1);
            for (unsigned i = 0; i < exponent; ++i) r *= base.literal();
            return lit(std::move(r));
        }
        if (base.kind() == Kind::power) {
            const unsigned inner = base.exponent();
            return power(base.operands().front(), inner * exponent);
        }
        Node n;
        n.kind = Kind::power;
        n.exponent = exponent;
        n.ops = {std::move(base)};
        return make(std::move(n));
    }

    static Expr call(Primitive p, Expr arg) {
        Node n;
        n.kind = Kind::call;
        n.prim = p;
        n.ops = {std::move(arg)};
        return make(std::move(n));
    }

    Kind kind() const { return n_->kind; }
    const Rat& literal() const { return n_->literal; }
    std::size_t var_index() const { return n_->var; }
    const std::vector<Expr>& operands() const { return n_->ops; }
    unsigned exponent() const { return n_->exponent; }
    Primitive primitive() const { return n_->prim; }

    bool is_literal(const Rat& v) const {
        return kind() == Kind::literal && literal() == v;
    }
    bool is_zero() const { return is_literal(Rat(0)); }

    friend Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
    friend Expr operator-(const Expr& a, const Expr& b) { return sum({a, negate(b)}); }
    friend Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
    friend Expr operator/(const Expr& a, const Expr& b) { return quotient(a, b); }
    static Expr negate(const Expr& e) { return product({lit(Rat(-1)), e}); }

    // Fixed total order on canonical expressions; drives operand sorting.
    static int compare(const Expr& a, const Expr& b) {
        if (a.n_ == b.n_) return 0;
        const int ka = static_cast<int>(a.kind()), kb = static_cast<int>(b.kind());
        if (ka != kb) return ka < kb ? -1 : 1;
        switch (a.kind()) {
            case Kind::literal:
                return a.literal() == b.literal() ? 0 : (a.literal() < b.literal() ? -1 : 1);
            case Kind::variable:
                return a.var_index() == b.var_index() ? 0
                       : (a.var_index() < b.var_index() ? -1 : 1);
            case Kind::power: {
                const int c = compare(a.operands().front(), b.operands().front());
                if (c != 0) return c;
                return a.exponent() == b.exponent() ? 0
                       : (a.exponent() < b.exponent() ? -1 : 1);
            }
            case Kind::call: {
                const int pa = static_cast<int>(a.primitive()),
                          pb = static_cast<int>(b.primitive());
                if (pa != pb) return pa < pb ? -1 : 1;
                return compare(a.operands().front(), b.operands().front());
            }
            default: {  // sum, product, quotient: lexicographic on operands
                const auto& oa = a.operands();
                const auto& ob = b.operands();
                const std::size_t k = std::min(oa.size(), ob.size());
                for (std::size_t i = 0; i < k; ++i) {
                    const int c = compare(oa[i], ob[i]);
                    if (c != 0) return c;
                }
                if (oa.size() != ob.size()) return oa.size() < ob.size() ? -1 : 1;
                return 0;
            }
        }
    }

    bool equals(const Expr& o) const { return compare(*this, o) == 0; }

    // 1 + largest variable index appearing anywhere; 0 if variable-free.
    std::size_t min_arity() const {
        std::size_t w = 0;
        walk([&](const Node& n) {
            if (n.kind == Kind::variable) w = std::max(w, n.var + 1);
        });
        return w;
    }

    bool has_primitive() const {
        bool found = false;
        walk([&](const Node& n) { found |= n.kind == Kind::call; });
        return found;
    }

    bool is_polynomial() const {
        bool bad = false;
        walk([&](const Node& n) {
            bad |= n.kind == Kind::call || n.kind == Kind::quotient;
        });
        return !bad;
    }

    Poly to_polynomial() const {
        switch (kind()) {
            case Kind::literal: return Poly::constant(literal());
            case Kind::variable: return Poly::var(var_index());
            case Kind::sum: {
                Poly p;
                for (const Expr& e : operands()) p += e.to_polynomial();
                return p;
            }
            case Kind::product: {
                Poly p = Poly::constant(Rat(1));
                for (const Expr& e : operands()) p *= e.to_polynomial();
                return p;
            }
            case Kind::power: return operands().front().to_polynomial().pow(exponent());
            default:
                fail(errc::mode_mismatch,
                     "expression is not polynomial (contains " +
                         std::string(kind() == Kind::call ? "a primitive call"
                                                          : "a quotient") +
                         ")");
        }
    }

    // Replace variable i by images[i], rebuilding canonically.  Used for
    // symbolic composition of maps.
    Expr substitute(const std::vector<Expr>& images) const {
        switch (kind()) {
            case Kind::literal: return *this;
            case Kind::variable:
                if (var_index() >= images.size())
                    fail(errc::arity_violation,
                         "substitution image missing for x" + std::to_string(var_index()));
                return images[var_index()];
            case Kind::sum:
            case Kind::product: {
                std::vector<Expr> ops;
                ops.reserve(operands().size());
                for (const Expr& e : operands()) ops.push_back(e.substitute(images));
                return kind() == Kind::sum ? sum(std::move(ops)) : product(std::move(ops));
            }
            case Kind::quotient:
                return quotient(operands()[0].substitute(images),
                                operands()[1].substitute(images));
            case Kind::power:
                return power(operands().front().substitute(images), exponent());
            case Kind::call:
                return call(primitive(), operands().front().substitute(images));
        }
        fail(errc::syntax_error, "corrupt expression node");
    }

    std::string str() const { return print(Context::top); }

private:
    struct Node {
        Kind kind = Kind::literal;
        Rat literal{};
        std::size_t var = 0;
        std::vector<Expr> ops;
        unsigned exponent = 0;
        Primitive prim = Primitive::sin;
    };

    explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    static Expr make(Node&& n) { return Expr(std::make_shared<const Node>(std::move(n))); }

    template <class F>
    void walk(F&& visit) const {
        visit(*n_);
        for (const Expr& e : n_->ops) e.walk(visit);
    }

    enum class Context { top, sum_operand, product_operand, denominator, power_base };

    bool needs_parens(Context c) const {
        switch (kind()) {
            case Kind::literal:
                // A negative literal inside a product/denominator/base needs
                // parens only when it is not the leading factor; the printer
                // places folded literals first, so exclude that case below.
                return false;
            case Kind::variable:
            case Kind::call:
                return false;
            case Kind::power:
                return false;
            case Kind::sum:
                return c != Context::top && c != Context::sum_operand;
            case Kind::product:
                return c == Context::denominator || c == Context::power_base;
            case Kind::quotient:
                return c == Context::product_operand || c == Context::denominator ||
                       c == Context::power_base;
        }
        return false;
    }

    std::string print(Context c) const {
        std::string out;
        switch (kind()) {
            case Kind::literal:
                out = to_string(literal());
                break;
            case Kind::variable:
                out = "x" + std::to_string(var_index());
                break;
            case Kind::sum: {
                bool first = true;
                for (const Expr& e : operands()) {
                    auto [neg, body] = e.split_negative();
                    if (first) {
                        out += neg ? "-" + body.print(Context::sum_operand)
                                   : body.print(Context::sum_operand);
                        first = false;
                    } else {
                        out += neg ? " - " : " + ";
                        out += body.print(Context::sum_operand);
                    }
                }
                break;
            }
            case Kind::product: {
                const auto& ops = operands();
                std::size_t start = 0;
                if (ops.front().is_literal(Rat(-1)) && ops.size() > 1) {
                    out += "-";
                    start = 1;
                }
                for (std::size_t i = start; i < ops.size(); ++i) {
                    if (i > start) out += "*";
                    out += ops[i].print(Context::product_operand);
                }
                break;
            }
            case Kind::quotient:
                out = operands()[0].print(Context::product_operand) + "/" +
                      operands()[1].print(Context::denominator);
                break;
            case Kind::power:
                out = operands().front().print(Context::power_base) + "^" +
                      std::to_string(exponent());
                break;
            case Kind::call:
                out = std::string(primitive_name(primitive())) + "(" +
                      operands().front().print(Context::top) + ")";
                break;
        }
        if (needs_parens(c)) out = "(" + out + ")";
        // Literal corner case: "x0*-3" would not re-parse; parenthesize a
        // negative literal whenever it is not in leading position.
        if (kind() == Kind::literal && literal() < 0 &&
            (c == Context::product_operand || c == Context::denominator ||
             c == Context::power_base))
            out = "(" + out + ")";
        return out;
    }

    // Split e into (true, -e) when e is a negative literal or a product with
    // negative leading literal; printing uses this to emit "a - b".
    std::pair<bool, Expr> split_negative() const {
        if (kind() == Kind::literal && literal() < 0) return {true, lit(-literal())};
        if (kind() == Kind::product && operands().front().kind() == Kind::literal &&
            operands().front().literal() < 0) {
            std::vector<Expr> ops = operands();
            ops.front() = lit(-ops.front().literal());
            return {true, product(std::move(ops))};
        }
        return {false, *this};
    }

    std::shared_ptr<const Node> n_;
};

// -------------------------------------------------------------------------
// Symbolic differentiation.

inline Expr derive(const Expr& e, std::size_t var) {
    using K = Expr::Kind;
    switch (e.kind()) {
        case K::literal: return Expr::lit(Rat(0));
        case K::variable: return Expr::lit(Rat(e.var_index() == var ? 1 : 0));
        case K::sum: {
            std::vector<Expr> parts;
            for (const Expr& op : e.operands()) parts.push_back(derive(op, var));
            return Expr::sum(std::move(parts));
        }
        case K::product: {
            std::vector<Expr> parts;
            const auto& ops = e.operands();
            for (std::size_t i = 0; i < ops.size(); ++i) {
                std::vector<Expr> factors = ops;
                factors[i] = derive(ops[i], var);
                parts.push_back(Expr::product(std::move(factors)));
            }
            return Expr::sum(std::move(parts));
        }
        case K::quotient: {
            const Expr& a = e.operands()[0];
            const Expr& b = e.operands()[1];
            return Expr::quotient(derive(a, var) * b - a * derive(b, var),
                                  Expr::power(b, 2));
        }
        case K::power: {
            const Expr& base = e.operands().front();
            return Expr::product({Expr::lit(Rat(e.exponent())),
                                  Expr::power(base, e.exponent() - 1), derive(base, var)});
        }
        case K::call: {
            const Expr& u = e.operands().front();
            const Expr du = derive(u, var);
            switch (e.primitive()) {
                case Primitive::sin: return Expr::call(Primitive::cos, u) * du;
                case Primitive::cos:
                    return Expr::negate(Expr::call(Primitive::sin, u)) * du;
                case Primitive::exp: return Expr::call(Primitive::exp, u) * du;
                case Primitive::log: return Expr::quotient(du, u);
                case Primitive::sqrt:
                    return Expr::quotient(
                        du, Expr::product({Expr::lit(Rat(2)), Expr::call(Primitive::sqrt, u)}));
            }
            fail(errc::syntax_error, "corrupt primitive node");
        }
    }
    fail(errc::syntax_error, "corrupt expression node");
}

// -------------------------------------------------------------------------
// Numeric evaluation over Rat (exact; quotient-free of primitives) or double.

namespace detail {
template <class S>
inline S scalar_from_rat(const Rat& q) {
    if constexpr (std::is_same_v<S, Rat>)
        return q;
    else
        return static_cast<S>(to_double(q));
}

template <class S>
inline S powi(S base, unsigned e) {
    S r = detail::scalar_from_rat<S>(Rat(1));
    while (e > 0) {
        if (e & 1u) r = r * base;
        base = e > 1 ? S(base * base) : base;
        e >>= 1u;
    }
    return r;
}
} // namespace detail

template <class S>
inline S eval(const Expr& e, const std::vector<S>& point) {
    using K = Expr::Kind;
    switch (e.kind()) {
        case K::literal: return detail::scalar_from_rat<S>(e.literal());
        case K::variable:
            if (e.var_index() >= point.size())
                fail(errc::arity_violation,
                     "point has no coordinate for x" + std::to_string(e.var_index()));
            return point[e.var_index()];
        case K::sum: {
            S acc = detail::scalar_from_rat<S>(Rat(0));
            for (const Expr& op : e.operands()) acc = acc + eval(op, point);
            return acc;
        }
        case K::product: {
            S acc = detail::scalar_from_rat<S>(Rat(1));
            for (const Expr& op : e.operands()) acc = acc * eval(op, point);
            return acc;
        }
        case K::quotient: {
            const S num = eval(e.operands()[0], point);
            const S den = eval(e.operands()[1], point);
            if (den == detail::scalar_from_rat<S>(Rat(0)))
                fail(errc::domain_error, "division by zero");
            return num / den;
        }
        case K::power: return detail::powi(eval(e.operands().front(), point), e.exponent());
        case K::call: {
            if constexpr (std::is_same_v<S, Rat>) {
                fail(errc::mode_mismatch,
                     "primitive " + std::string(primitive_name(e.primitive())) +
                         " requires float mode");
            } else {
                const double a = eval(e.operands().front(), point);
                switch (e.primitive()) {
                    case Primitive::sin: return std::sin(a);
                    case Primitive::cos: return std::cos(a);
                    case Primitive::exp: return std::exp(a);
                    case Primitive::log:
                        if (a <= 0) fail(errc::domain_error, "log of non-positive value");
                        return std::log(a);
                    case Primitive::sqrt:
                        if (a < 0) fail(errc::domain_error, "sqrt of negative value");
                        return std::sqrt(a);
                }
                fail(errc::syntax_error, "corrupt primitive node");
            }
        }
    }
    fail(errc::syntax_error, "corrupt expression node");
}

inline Rat eval_real(const Expr& e, const std::vector<Rat>& point) { return eval(e, point); }
inline double eval_real(const Expr& e, const std::vector<double>& point) {
    return eval(e, point);
}

// -------------------------------------------------------------------------
// Parser.  Grammar (EBNF, also documented in the README):
//
//   expression := term { ("+" | "-") term }
//   term       := factor { ("*" | "/") factor }
//   factor     := "-" factor | atom [ "^" exponent ]
//   exponent   := integer [ "^" exponent ]          (right-associative)
//   atom       := number | variable | primitive "(" expression ")"
//                 | "(" expression ")"
//   variable   := "x" digits            (index < arity)
//   number     := digits [ "." digits ]             (exact rational)
//
// Binary + - * / are left-associative; ^ binds tighter than unary minus.

namespace detail {

struct Token {
    enum class Kind { number, ident, op, lparen, rparen, end } kind;
    std::size_t pos = 0;
    std::string text;  // ident name or operator character
    Rat value{};       // number payload
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < src_.size() && (src_[i_] == ' ' || src_[i_] == '\t' ||
                                    src_[i_] == '\n' || src_[i_] == '\r'))
            ++i_;
        tok_ = Token{};
        tok_.pos = i_;
        if (i_ >= src_.size()) {
            tok_.kind = Token::Kind::end;
            return;
        }
        const char c = src_[i_];
        if (c >= '0' && c <= '9') {
            tok_.kind = Token::Kind::number;
            const std::size_t start = i_;
            while (i_ < src_.size() && src_[i_] >= '0' && src_[i_] <= '9') ++i_;
            if (i_ < src_.size() && src_[i_] == '.') {
                ++i_;
                if (i_ >= src_.size() || src_[i_] < '0' || src_[i_] > '9')
                    fail(errc::syntax_error, "expected digits after decimal point", i_);
                while (i_ < src_.size() && src_[i_] >= '0' && src_[i_] <= '9') ++i_;
            }
            tok_.value = parse_rational(std::string(src_.substr(start, i_ - start)));
            return;
        }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
            tok_.kind = Token::Kind::ident;
            const std::size_t start = i_;
            while (i_ < src_.size() &&
                   ((src_[i_] >= 'a' && src_[i_] <= 'z') ||
                    (src_[i_] >= 'A' && src_[i_] <= 'Z') ||
                    (src_[i_] >= '0' && src_[i_] <= '9') || src_[i_] == '_'))
                ++i_;
            tok_.text = std::string(src_.substr(start, i_ - start));
            return;
        }
        if (c == '(') {
            tok_.kind = Token::Kind::lparen;
            ++i_;
            return;
        }
        if (c == ')') {
            tok_.kind = Token::Kind::rparen;
            ++i_;
            return;
        }
        if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            tok_.kind = Token::Kind::op;
            tok_.text = std::string(1, c);
            ++i_;
            return;
        }
        fail(errc::syntax_error, std::string("unexpected character '") + c + "'", i_);
    }

    std::string_view src_;
    std::size_t i_ = 0;
    Token tok_;
};

class Parser {
public:
    Parser(std::string_view src, std::size_t arity) : lex_(src), arity_(arity) {}

    Expr parse() {
        Expr e = expression();
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::end)
            fail(errc::syntax_error, "unexpected trailing input", t.pos);
        return e;
    }

private:
    bool at_op(const char* s) const {
        return lex_.peek().kind == Token::Kind::op && lex_.peek().text == s;
    }

    Expr expression() {
        Expr acc = term();
        while (at_op("+") || at_op("-")) {
            const bool minus = lex_.take().text == "-";
            Expr rhs = term();
            acc = minus ? acc - rhs : acc + rhs;
        }
        return acc;
    }

    Expr term() {
        Expr acc = factor();
        while (at_op("*") || at_op("/")) {
            const Token op = lex_.take();
            Expr rhs = factor();
            if (op.text == "*")
                acc = acc * rhs;
            else
                acc = Expr::quotient(acc, rhs);
        }
        return acc;
    }

    Expr factor() {
        if (at_op("-")) {
            lex_.take();
            return Expr::negate(factor());
        }
        Expr base = atom();
        if (at_op("^")) {
            lex_.take();
            return Expr::power(std::move(base), exponent());
        }
        return base;
    }

    unsigned exponent() {
        const Token t = lex_.take();
        if (t.kind != Token::Kind::number || denominator(t.value) != 1 || t.value < 0)
            fail(errc::syntax_error, "expected non-negative integer exponent", t.pos);
        const BigInt n = numerator(t.value);
        if (n > 64) fail(errc::syntax_error, "exponent too large", t.pos);
        unsigned e = n.convert_to<unsigned>();
        if (at_op("^")) {
            lex_.take();
            const unsigned inner = exponent();
            unsigned r = 1;
            for (unsigned i = 0; i < inner; ++i) {
                if (r > 64) fail(errc::syntax_error, "exponent too large", t.pos);
                r *= e;
            }
            e = r;
        }
        return e;
    }

    Expr atom() {
        const Token t = lex_.take();
        switch (t.kind) {
            case Token::Kind::number: return Expr::lit(t.value);
            case Token::Kind::lparen: {
                Expr e = expression();
                const Token close = lex_.take();
                if (close.kind != Token::Kind::rparen)
                    fail(errc::syntax_error, "expected ')'", close.pos);
                return e;
            }
            case Token::Kind::ident: {
                if (t.text.size() > 1 && t.text[0] == 'x' &&
                    t.text.find_first_not_of("0123456789", 1) == std::string::npos) {
                    std::size_t idx = 0;
                    for (std::size_t i = 1; i < t.text.size(); ++i)
                        idx = idx * 10 + static_cast<std::size_t>(t.text[i] - '0');
                    if (idx >= arity_)
                        fail(errc::arity_violation,
                             "variable x" + std::to_string(idx) + " exceeds arity " +
                                 std::to_string(arity_),
                             t.pos);
                    return Expr::var(idx);
                }
                if (auto prim = primitive_by_name(t.text)) {
                    const Token open = lex_.take();
                    if (open.kind != Token::Kind::lparen)
                        fail(errc::syntax_error,
                             "expected '(' after " + t.text, open.pos);
                    Expr arg = expression();
                    const Token close = lex_.take();
                    if (close.kind != Token::Kind::rparen)
                        fail(errc::syntax_error, "expected ')'", close.pos);
                    return Expr::call(*prim, std::move(arg));
                }
                fail(errc::unknown_identifier, "unknown identifier '" + t.text + "'",
                     t.pos);
            }
            case Token::Kind::end:
                fail(errc::syntax_error, "unexpected end of input", t.pos);
            default:
                fail(errc::syntax_error, "unexpected token", t.pos);
        }
    }

    Lexer lex_;
    std::size_t arity_;
};

} // namespace detail

inline Expr parse_expr(const std::string& src, std::size_t arity) {
    return detail::Parser(src, arity).parse();
}

// Relation strings and point components: same grammar restricted to
// polynomial operations (+ - * ^, rational literals, division by literals).
inline Poly parse_polynomial(const std::string& src, std::size_t arity) {
    Expr e = parse_expr(src, arity);
    if (!e.is_polynomial())
        fail(errc::syntax_error,
             "expected a polynomial (only + - * ^, rational literals): '" + src + "'");
    return e.to_polynomial();
}

// -------------------------------------------------------------------------
// Smooth maps between charts.

// Product of open intervals; an open subset of R^n.  Bounds are exact.
struct OpenBox {
    std::vector<std::pair<Rat, Rat>> intervals;

    std::size_t dim() const { return intervals.size(); }

    bool contains(const std::vector<Rat>& p) const {
        if (p.size() != intervals.size()) return false;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (!(intervals[i].first < p[i] && p[i] < intervals[i].second)) return false;
        return true;
    }

    bool contains(const std::vector<double>& p) const {
        if (p.size() != intervals.size()) return false;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (!(to_double(intervals[i].first) < p[i] &&
                  p[i] < to_double(intervals[i].second)))
                return false;
        return true;
    }

    bool operator==(const OpenBox& o) const { return intervals == o.intervals; }
    bool operator!=(const OpenBox& o) const { return !(*this == o); }
};

// A smooth map R^n -> R^m (optionally restricted to an open box in R^n),
// written componentwise in the expression language.
class SmoothMap {
public:
    SmoothMap(std::size_t arity, std::vector<Expr> components,
              std::optional<OpenBox> domain = std::nullopt)
        : arity_(arity), components_(std::move(components)), domain_(std::move(domain)) {
        for (const Expr& c : components_)
            if (c.min_arity() > arity_)
                fail(errc::arity_violation, "component uses variable beyond arity " +
                                                std::to_string(arity_));
        if (domain_ && domain_->dim() != arity_)
            fail(errc::arity_violation, "domain box dimension does not match arity");
    }

    static SmoothMap from_strings(const std::vector<std::string>& sources,
                                  std::size_t arity,
                                  std::optional<OpenBox> domain = std::nullopt) {
        std::vector<Expr> comps;
        comps.reserve(sources.size());
        for (const std::string& s : sources) comps.push_back(parse_expr(s, arity));
        return SmoothMap(arity, std::move(comps), std::move(domain));
    }

    std::size_t arity() const { return arity_; }
    std::size_t coarity() const { return components_.size(); }
    const std::vector<Expr>& components() const { return components_; }
    const std::optional<OpenBox>& domain() const { return domain_; }

    bool is_polynomial() const {
        for (const Expr& c : components_)
            if (!c.is_polynomial()) return false;
        return true;
    }

    bool has_primitive() const {
        for (const Expr& c : components_)
            if (c.has_primitive()) return true;
        return false;
    }

    std::vector<Poly> to_polynomials() const {
        std::vector<Poly> out;
        out.reserve(components_.size());
        for (const Expr& c : components_) out.push_back(c.to_polynomial());
        return out;
    }

    // g after f, by symbolic substitution.  The domain of f is kept; g must
    // be unrestricted (box pullbacks are not representable as boxes).
    static SmoothMap compose(const SmoothMap& g, const SmoothMap& f) {
        if (g.arity() != f.coarity())
            fail(errc::composition_mismatch,
                 "inner coarity " + std::to_string(f.coarity()) +
                     " does not match outer arity " + std::to_string(g.arity()));
        if (g.domain())
            fail(errc::domain_error, "outer map of a composition must be unrestricted");
        std::vector<Expr> comps;
        comps.reserve(g.coarity());
        for (const Expr& c : g.components()) comps.push_back(c.substitute(f.components()));
        return SmoothMap(f.arity(), std::move(comps), f.domain());
    }

    // The pairing (f, g): R^n -> R^{m1+m2} of two maps on the same chart.
    static SmoothMap pair(const SmoothMap& f, const SmoothMap& g) {
        if (f.arity() != g.arity())
            fail(errc::composition_mismatch, "paired maps must share their arity");
        std::vector<Expr> comps = f.components();
        comps.insert(comps.end(), g.components().begin(), g.components().end());
        std::optional<OpenBox> dom = f.domain() ? f.domain() : g.domain();
        return SmoothMap(f.arity(), std::move(comps), std::move(dom));
    }

private:
    std::size_t arity_;
    std::vector<Expr> components_;
    std::optional<OpenBox> domain_;
};

} // namespace weil

#endif
