#include "heatctl/expr.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <vector>

#include "heatctl/grid.hpp"

namespace heatctl {

namespace {

struct Node {
    virtual ~Node() = default;
    virtual double eval(double x, double y) const = 0;
};
using NodePtr = std::unique_ptr<Node>;

struct Const : Node {
    double v;
    explicit Const(double v) : v(v) {}
    double eval(double, double) const override { return v; }
};
struct Var : Node {
    bool is_x;
    explicit Var(bool is_x) : is_x(is_x) {}
    double eval(double x, double y) const override { return is_x ? x : y; }
};
struct Unary : Node {
    double (*fn)(double);
    NodePtr arg;
    double eval(double x, double y) const override { return fn(arg->eval(x, y)); }
};
struct Binary : Node {
    char op;
    NodePtr lhs, rhs;
    double eval(double x, double y) const override {
        double a = lhs->eval(x, y), b = rhs->eval(x, y);
        switch (op) {
            case '+': return a + b;
            case '-': return a - b;
            case '*': return a * b;
            case '/': return a / b;
            default: return std::pow(a, b);
        }
    }
};

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw config_error("expression: trailing input at position " + std::to_string(pos_));
        return e;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool consume(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {  // + -
        NodePtr lhs = term();
        for (;;) {
            if (consume('+'))
                lhs = make_bin('+', std::move(lhs), term());
            else if (consume('-'))
                lhs = make_bin('-', std::move(lhs), term());
            else
                return lhs;
        }
    }
    NodePtr term() {  // * /
        NodePtr lhs = power();
        for (;;) {
            if (consume('*'))
                lhs = make_bin('*', std::move(lhs), power());
            else if (consume('/'))
                lhs = make_bin('/', std::move(lhs), power());
            else
                return lhs;
        }
    }
    NodePtr power() {  // right-associative ^
        NodePtr base = unary();
        if (consume('^')) return make_bin('^', std::move(base), power());
        return base;
    }
    NodePtr unary() {
        if (consume('-')) return make_bin('-', std::make_unique<Const>(0.0), unary());
        if (consume('+')) return unary();
        return atom();
    }
    NodePtr atom() {
        skip_ws();
        if (pos_ >= s_.size()) throw config_error("expression: unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!consume(')')) throw config_error("expression: missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t end;
            double v = std::stod(s_.substr(pos_), &end);
            pos_ += end;
            return std::make_unique<Const>(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (name == "x") return std::make_unique<Var>(true);
            if (name == "y") return std::make_unique<Var>(false);
            if (name == "pi") return std::make_unique<Const>(std::acos(-1.0));
            double (*fn)(double) = nullptr;
            if (name == "sin") fn = std::sin;
            else if (name == "cos") fn = std::cos;
            else if (name == "exp") fn = std::exp;
            if (!fn) throw config_error("expression: unknown identifier '" + name + "'");
            if (!consume('(')) throw config_error("expression: expected '(' after " + name);
            auto u = std::make_unique<Unary>();
            u->fn = fn;
            u->arg = expr();
            if (!consume(')')) throw config_error("expression: missing ')'");
            return u;
        }
        throw config_error(std::string("expression: unexpected character '") + c + "'");
    }

    static NodePtr make_bin(char op, NodePtr l, NodePtr r) {
        auto b = std::make_unique<Binary>();
        b->op = op;
        b->lhs = std::move(l);
        b->rhs = std::move(r);
        return b;
    }
};

}  // namespace

std::function<double(double, double)> parse_expression(const std::string& text) {
    std::shared_ptr<Node> root{Parser(text).parse().release()};
    return [root](double x, double y) { return root->eval(x, y); };
}

}  // namespace heatctl
