#include "gll/expr.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "gll/errors.hpp"

namespace gll::expr {

namespace {

const std::set<std::string> kFunctions = {"sin", "cos", "exp", "log", "sqrt",
                                          "abs", "min", "max", "floor"};

struct Token {
    enum class Type { Number, Ident, Op, End };
    Type type = Type::End;
    double number = 0;
    std::string text; // ident name or operator spelling
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() &&
               (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                src_[pos_] == '\r')) {
            if (src_[pos_] == '\n') { ++line_; col_ = 0; }
            ++pos_;
            ++col_;
        }
        tok_ = Token{};
        tok_.line = line_;
        tok_.col = col_ + 1;
        if (pos_ >= src_.size()) return;

        char c = src_[pos_];
        if ((c >= '0' && c <= '9') || c == '.') {
            const char* begin = src_.c_str() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin)
                throw SyntaxError("malformed number", line_, tok_.col, "number");
            size_t len = size_t(end - begin);
            pos_ += len;
            col_ += int(len);
            tok_.type = Token::Type::Number;
            tok_.number = v;
            tok_.text = std::string(begin, len);
            return;
        }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   ((src_[pos_] >= 'a' && src_[pos_] <= 'z') ||
                    (src_[pos_] >= 'A' && src_[pos_] <= 'Z') ||
                    (src_[pos_] >= '0' && src_[pos_] <= '9') || src_[pos_] == '_')) {
                ++pos_;
                ++col_;
            }
            tok_.type = Token::Type::Ident;
            tok_.text = src_.substr(start, pos_ - start);
            return;
        }
        auto two = src_.substr(pos_, 2);
        if (two == "==" || two == "<=" || two == ">=") {
            tok_.type = Token::Type::Op;
            tok_.text = two;
            pos_ += 2;
            col_ += 2;
            return;
        }
        if (std::string("+-*/^(),<>").find(c) != std::string::npos) {
            tok_.type = Token::Type::Op;
            tok_.text = std::string(1, c);
            ++pos_;
            ++col_;
            return;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", line_,
                          tok_.col, "operator or operand");
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 0;
    Token tok_;
};

NodePtr mk(Node n) { return std::make_shared<Node>(std::move(n)); }

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    NodePtr run() {
        NodePtr e = expr();
        expect_end();
        return e;
    }

private:
    [[noreturn]] void fail(const Token& t, const std::string& expected) {
        std::string got = t.type == Token::Type::End ? "end of input" : "'" + t.text + "'";
        throw SyntaxError("unexpected " + got + " at " + std::to_string(t.line) + ":" +
                              std::to_string(t.col) + ", expected " + expected,
                          t.line, t.col, expected);
    }

    bool is_op(const std::string& s) const {
        return lex_.peek().type == Token::Type::Op && lex_.peek().text == s;
    }
    bool is_ident(const std::string& s) const {
        return lex_.peek().type == Token::Type::Ident && lex_.peek().text == s;
    }
    void eat_op(const std::string& s) {
        if (!is_op(s)) fail(lex_.peek(), "'" + s + "'");
        lex_.take();
    }
    void eat_ident(const std::string& s) {
        if (!is_ident(s)) fail(lex_.peek(), "'" + s + "'");
        lex_.take();
    }
    void expect_end() {
        if (lex_.peek().type != Token::Type::End) fail(lex_.peek(), "end of input");
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (is_op("+") || is_op("-")) {
            bool plus = lex_.take().text == "+";
            NodePtr rhs = term();
            Node n;
            n.kind = plus ? Node::Kind::Add : Node::Kind::Sub;
            n.kids = {std::move(lhs), std::move(rhs)};
            lhs = mk(std::move(n));
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = factor();
        while (is_op("*") || is_op("/")) {
            bool mul = lex_.take().text == "*";
            NodePtr rhs = factor();
            Node n;
            n.kind = mul ? Node::Kind::Mul : Node::Kind::Div;
            n.kids = {std::move(lhs), std::move(rhs)};
            lhs = mk(std::move(n));
        }
        return lhs;
    }

    NodePtr factor() {
        if (is_op("-")) {
            lex_.take();
            Node n;
            n.kind = Node::Kind::Neg;
            n.kids = {factor()};
            return mk(std::move(n));
        }
        NodePtr b = base();
        if (is_op("^")) {
            lex_.take();
            bool negexp = false;
            if (is_op("-")) {
                lex_.take();
                negexp = true;
            }
            Token t = lex_.peek();
            if (t.type != Token::Type::Number || t.number != std::floor(t.number))
                fail(t, "integer exponent");
            lex_.take();
            Node n;
            n.kind = Node::Kind::Pow;
            n.exponent = int64_t(t.number) * (negexp ? -1 : 1);
            n.kids = {std::move(b)};
            return mk(std::move(n));
        }
        return b;
    }

    Cmp comparison() {
        Token t = lex_.peek();
        if (t.type != Token::Type::Op) fail(t, "comparison operator");
        Cmp c;
        if (t.text == "==") c = Cmp::Eq;
        else if (t.text == "<") c = Cmp::Lt;
        else if (t.text == "<=") c = Cmp::Le;
        else if (t.text == ">") c = Cmp::Gt;
        else if (t.text == ">=") c = Cmp::Ge;
        else fail(t, "one of == < <= > >=");
        lex_.take();
        return c;
    }

    NodePtr base() {
        Token t = lex_.peek();
        if (t.type == Token::Type::Number) {
            lex_.take();
            Node n;
            n.kind = Node::Kind::Number;
            n.number = t.number;
            return mk(std::move(n));
        }
        if (t.type == Token::Type::Op && t.text == "(") {
            lex_.take();
            NodePtr e = expr();
            eat_op(")");
            return e;
        }
        if (t.type != Token::Type::Ident) fail(t, "operand");

        if (t.text == "if") {
            lex_.take();
            NodePtr lhs = expr();
            Cmp c = comparison();
            NodePtr rhs = expr();
            eat_ident("then");
            NodePtr then_e = expr();
            eat_ident("else");
            NodePtr else_e = expr();
            Node n;
            n.kind = Node::Kind::If;
            n.cmp = c;
            n.kids = {std::move(lhs), std::move(rhs), std::move(then_e), std::move(else_e)};
            return mk(std::move(n));
        }
        if (t.text == "sum") {
            lex_.take();
            eat_op("(");
            NodePtr body = expr_with_bound_placeholder();
            eat_op(",");
            Token var = lex_.peek();
            if (var.type != Token::Type::Ident) fail(var, "summation variable");
            lex_.take();
            eat_op(",");
            NodePtr lo = expr();
            eat_op(",");
            NodePtr hi = expr();
            eat_op(")");
            check_bound(body, var.text, t);
            Node n;
            n.kind = Node::Kind::Sum;
            n.name = var.text;
            n.kids = {std::move(body), std::move(lo), std::move(hi)};
            return mk(std::move(n));
        }
        if (t.text == "i") {
            lex_.take();
            Node n;
            n.kind = Node::Kind::ImagUnit;
            return mk(std::move(n));
        }
        if (kFunctions.count(t.text)) {
            lex_.take();
            eat_op("(");
            Node n;
            n.kind = Node::Kind::Call;
            n.name = t.text;
            n.kids.push_back(expr());
            while (is_op(",")) {
                lex_.take();
                n.kids.push_back(expr());
            }
            eat_op(")");
            size_t arity = n.kids.size();
            bool ok = (n.name == "min" || n.name == "max") ? arity >= 2 : arity == 1;
            if (!ok)
                throw SyntaxError("wrong number of arguments to " + n.name, t.line,
                                  t.col, "argument list");
            return mk(std::move(n));
        }
        if (t.text == "then" || t.text == "else") fail(t, "operand");
        if (t.text == "d" || t.text == "x" || t.text == "y" || permissive_ > 0) {
            // Inside a sum body the summation variable has not been read
            // yet; accept the identifier and validate once it is known.
            lex_.take();
            Node n;
            n.kind = Node::Kind::Var;
            n.name = t.text;
            return mk(std::move(n));
        }
        throw UnknownIdentifier("unknown identifier '" + t.text + "' at " +
                                std::to_string(t.line) + ":" + std::to_string(t.col));
    }

    NodePtr expr_with_bound_placeholder() {
        permissive_++;
        NodePtr body = expr();
        permissive_--;
        return body;
    }

    // Nested sum bodies are validated by the outermost sum, which sees the
    // full stack of bound names.
    void check_bound(const NodePtr& body, const std::string& var, const Token& at) {
        if (permissive_ > 0) return;
        std::vector<std::string> unknown;
        std::set<std::string> allowed{var};
        collect_unknown(*body, allowed, unknown);
        if (!unknown.empty())
            throw UnknownIdentifier("unknown identifier '" + unknown.front() +
                                    "' in sum body at " + std::to_string(at.line) + ":" +
                                    std::to_string(at.col));
    }

    void collect_unknown(const Node& n, const std::set<std::string>& allowed,
                         std::vector<std::string>& out) const {
        if (n.kind == Node::Kind::Var && n.name != "d" && n.name != "x" &&
            n.name != "y" && !allowed.count(n.name)) {
            out.push_back(n.name);
            return;
        }
        if (n.kind == Node::Kind::Sum) {
            collect_unknown(*n.kids[1], allowed, out);
            collect_unknown(*n.kids[2], allowed, out);
            std::set<std::string> inner = allowed;
            inner.insert(n.name);
            collect_unknown(*n.kids[0], inner, out);
            return;
        }
        for (const auto& k : n.kids) collect_unknown(*k, allowed, out);
    }

    Lexer lex_;
    int permissive_ = 0;
};

} // namespace

NodePtr parse(const std::string& src) {
    Parser p(src);
    return p.run();
}

namespace {

int precedence(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Add:
        case Node::Kind::Sub: return 1;
        case Node::Kind::Mul:
        case Node::Kind::Div: return 2;
        case Node::Kind::Neg: return 3;
        case Node::Kind::Pow: return 4;
        default: return 5; // atoms, calls, sum; If handled separately
    }
}

void print_rec(const Node& n, std::string& out, int parent_prec, bool right_operand);

void print_child(const NodePtr& c, std::string& out, int parent_prec, bool right) {
    print_rec(*c, out, parent_prec, right);
}

std::string number_str(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void print_rec(const Node& n, std::string& out, int parent_prec, bool right_operand) {
    int prec = precedence(n);
    bool need_parens = n.kind == Node::Kind::If
                           ? parent_prec > 0
                           : (prec < parent_prec ||
                              (prec == parent_prec && right_operand && prec <= 2));
    if (need_parens) out += '(';
    switch (n.kind) {
        case Node::Kind::Number: out += number_str(n.number); break;
        case Node::Kind::ImagUnit: out += 'i'; break;
        case Node::Kind::Var: out += n.name; break;
        case Node::Kind::Add:
        case Node::Kind::Sub:
        case Node::Kind::Mul:
        case Node::Kind::Div: {
            const char* op = n.kind == Node::Kind::Add   ? " + "
                             : n.kind == Node::Kind::Sub ? " - "
                             : n.kind == Node::Kind::Mul ? " * "
                                                         : " / ";
            print_child(n.kids[0], out, prec, false);
            out += op;
            print_child(n.kids[1], out, prec, true);
            break;
        }
        case Node::Kind::Neg:
            out += '-';
            print_child(n.kids[0], out, prec, true);
            break;
        case Node::Kind::Pow:
            print_child(n.kids[0], out, prec + 1, false);
            out += '^';
            out += std::to_string(n.exponent);
            break;
        case Node::Kind::Call: {
            out += n.name;
            out += '(';
            for (size_t i = 0; i < n.kids.size(); ++i) {
                if (i) out += ", ";
                print_child(n.kids[i], out, 0, false);
            }
            out += ')';
            break;
        }
        case Node::Kind::Sum: {
            out += "sum(";
            print_child(n.kids[0], out, 0, false);
            out += ", " + n.name + ", ";
            print_child(n.kids[1], out, 0, false);
            out += ", ";
            print_child(n.kids[2], out, 0, false);
            out += ')';
            break;
        }
        case Node::Kind::If: {
            const char* cmp = n.cmp == Cmp::Eq   ? " == "
                              : n.cmp == Cmp::Lt ? " < "
                              : n.cmp == Cmp::Le ? " <= "
                              : n.cmp == Cmp::Gt ? " > "
                                                 : " >= ";
            out += "if ";
            print_child(n.kids[0], out, 0, false);
            out += cmp;
            print_child(n.kids[1], out, 0, false);
            out += " then ";
            print_child(n.kids[2], out, 0, false);
            out += " else ";
            print_child(n.kids[3], out, 0, false);
            break;
        }
    }
    if (need_parens) out += ')';
}

} // namespace

std::string print(const Node& n) {
    std::string out;
    print_rec(n, out, 0, false);
    return out;
}

bool structurally_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.name != b.name || a.exponent != b.exponent ||
        a.cmp != b.cmp || a.kids.size() != b.kids.size())
        return false;
    if (a.kind == Node::Kind::Number && a.number != b.number) return false;
    for (size_t i = 0; i < a.kids.size(); ++i)
        if (!structurally_equal(*a.kids[i], *b.kids[i])) return false;
    return true;
}

namespace {

using C = std::complex<double>;

[[noreturn]] void eval_fail(const EvalEnv& env, const std::string& msg) {
    throw EvaluationError(msg + (env.vertex ? " at vertex '" + *env.vertex + "'" : ""),
                          env.vertex ? *env.vertex : "");
}

double require_real(const C& z, const EvalEnv& env, const char* what) {
    if (z.imag() != 0.0) eval_fail(env, std::string(what) + " requires a real value");
    return z.real();
}

C eval_rec(const Node& n, EvalEnv& env) {
    switch (n.kind) {
        case Node::Kind::Number: return C(n.number, 0.0);
        case Node::Kind::ImagUnit: return C(0.0, 1.0);
        case Node::Kind::Var: {
            if (n.name == "d") return C(double(env.d), 0.0);
            if (n.name == "x") {
                if (!env.x) eval_fail(env, "variable 'x' is not defined on this family");
                return C(double(*env.x), 0.0);
            }
            if (n.name == "y") {
                if (!env.y) eval_fail(env, "variable 'y' is not defined on this family");
                return C(double(*env.y), 0.0);
            }
            for (auto it = env.bound.rbegin(); it != env.bound.rend(); ++it)
                if (it->first == n.name) return it->second;
            eval_fail(env, "unbound variable '" + n.name + "'");
        }
        case Node::Kind::Add: return eval_rec(*n.kids[0], env) + eval_rec(*n.kids[1], env);
        case Node::Kind::Sub: return eval_rec(*n.kids[0], env) - eval_rec(*n.kids[1], env);
        case Node::Kind::Mul: return eval_rec(*n.kids[0], env) * eval_rec(*n.kids[1], env);
        case Node::Kind::Div: {
            C a = eval_rec(*n.kids[0], env);
            C b = eval_rec(*n.kids[1], env);
            if (b.real() == 0.0 && b.imag() == 0.0) eval_fail(env, "division by zero");
            if (b.imag() == 0.0) return C(a.real() / b.real(), a.imag() / b.real());
            return a / b;
        }
        case Node::Kind::Neg: return -eval_rec(*n.kids[0], env);
        case Node::Kind::Pow: {
            C b = eval_rec(*n.kids[0], env);
            int64_t e = n.exponent;
            if (e < 0) {
                if (b.real() == 0.0 && b.imag() == 0.0)
                    eval_fail(env, "zero raised to a negative power");
                C r(1.0, 0.0);
                for (int64_t k = 0; k < -e; ++k) r *= b;
                return C(1.0, 0.0) / r;
            }
            C r(1.0, 0.0);
            for (int64_t k = 0; k < e; ++k) r *= b;
            return r;
        }
        case Node::Kind::Call: {
            if (n.name == "min" || n.name == "max") {
                double best = require_real(eval_rec(*n.kids[0], env), env, n.name.c_str());
                for (size_t i = 1; i < n.kids.size(); ++i) {
                    double v = require_real(eval_rec(*n.kids[i], env), env, n.name.c_str());
                    best = n.name == "min" ? std::min(best, v) : std::max(best, v);
                }
                return C(best, 0.0);
            }
            C z = eval_rec(*n.kids[0], env);
            bool real_arg = z.imag() == 0.0;
            if (n.name == "sin") return real_arg ? C(std::sin(z.real()), 0.0) : std::sin(z);
            if (n.name == "cos") return real_arg ? C(std::cos(z.real()), 0.0) : std::cos(z);
            if (n.name == "exp") return real_arg ? C(std::exp(z.real()), 0.0) : std::exp(z);
            if (n.name == "abs") return C(std::abs(z), 0.0);
            if (n.name == "log") {
                if (z.real() == 0.0 && z.imag() == 0.0) eval_fail(env, "log of zero");
                if (real_arg && z.real() > 0.0) return C(std::log(z.real()), 0.0);
                return std::log(z);
            }
            if (n.name == "sqrt") {
                if (real_arg && z.real() >= 0.0) return C(std::sqrt(z.real()), 0.0);
                return std::sqrt(z);
            }
            if (n.name == "floor")
                return C(std::floor(require_real(z, env, "floor")), 0.0);
            eval_fail(env, "unknown function '" + n.name + "'");
        }
        case Node::Kind::Sum: {
            double lo = require_real(eval_rec(*n.kids[1], env), env, "sum bound");
            double hi = require_real(eval_rec(*n.kids[2], env), env, "sum bound");
            if (lo != std::floor(lo) || hi != std::floor(hi))
                eval_fail(env, "sum bounds must be integers");
            C acc(0.0, 0.0);
            env.bound.emplace_back(n.name, C(0.0, 0.0));
            for (int64_t k = int64_t(lo); k <= int64_t(hi); ++k) {
                env.bound.back().second = C(double(k), 0.0);
                acc += eval_rec(*n.kids[0], env);
            }
            env.bound.pop_back();
            return acc;
        }
        case Node::Kind::If: {
            double a = require_real(eval_rec(*n.kids[0], env), env, "comparison");
            double b = require_real(eval_rec(*n.kids[1], env), env, "comparison");
            bool cond = false;
            switch (n.cmp) {
                case Cmp::Eq: cond = a == b; break;
                case Cmp::Lt: cond = a < b; break;
                case Cmp::Le: cond = a <= b; break;
                case Cmp::Gt: cond = a > b; break;
                case Cmp::Ge: cond = a >= b; break;
            }
            return eval_rec(*n.kids[cond ? 2 : 3], env);
        }
    }
    eval_fail(env, "internal: unhandled node");
}

void vars_rec(const Node& n, VarUse& out, std::vector<std::string>& bound) {
    if (n.kind == Node::Kind::Var) {
        for (const auto& b : bound)
            if (b == n.name) return;
        if (n.name == "d") out.d = true;
        if (n.name == "x") out.x = true;
        if (n.name == "y") out.y = true;
        return;
    }
    if (n.kind == Node::Kind::Sum) {
        vars_rec(*n.kids[1], out, bound);
        vars_rec(*n.kids[2], out, bound);
        bound.push_back(n.name);
        vars_rec(*n.kids[0], out, bound);
        bound.pop_back();
        return;
    }
    for (const auto& k : n.kids) vars_rec(*k, out, bound);
}

} // namespace

std::complex<double> evaluate(const Node& n, const EvalEnv& env) {
    EvalEnv e = env;
    return eval_rec(n, e);
}

VarUse free_variables(const Node& n) {
    VarUse out;
    std::vector<std::string> bound;
    vars_rec(n, out, bound);
    return out;
}

} // namespace gll::expr
