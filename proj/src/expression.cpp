#include "gptlab/expression.hpp"

#include "gptlab/basis.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <vector>

namespace gptlab {

namespace {

struct Node {
    virtual ~Node() = default;
    virtual double eval(double r, double theta) const = 0;
};
using NodePtr = std::unique_ptr<Node>;

struct Constant : Node {
    double v;
    explicit Constant(double v) : v(v) {}
    double eval(double, double) const override { return v; }
};

struct Variable : Node {
    bool is_r;
    explicit Variable(bool is_r) : is_r(is_r) {}
    double eval(double r, double theta) const override { return is_r ? r : theta; }
};

struct Unary : Node {
    double (*fn)(double);
    NodePtr arg;
    Unary(double (*fn)(double), NodePtr arg) : fn(fn), arg(std::move(arg)) {}
    double eval(double r, double t) const override { return fn(arg->eval(r, t)); }
};

struct Binary : Node {
    char op;
    NodePtr lhs, rhs;
    Binary(char op, NodePtr l, NodePtr r) : op(op), lhs(std::move(l)), rhs(std::move(r)) {}
    double eval(double r, double t) const override {
        double a = lhs->eval(r, t), b = rhs->eval(r, t);
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
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip_space();
        if (pos_ != text_.size())
            throw InadmissibleError("expression: unexpected trailing input at '" +
                                    text_.substr(pos_) + "'");
        return e;
    }

   private:
    const std::string& text_;
    size_t pos_ = 0;

    void skip_space() {
        while (pos_ < text_.size() && std::isspace((unsigned char)text_[pos_])) ++pos_;
    }

    bool consume(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr expression() {
        NodePtr lhs = term();
        for (;;) {
            if (consume('+'))
                lhs = std::make_unique<Binary>('+', std::move(lhs), term());
            else if (consume('-'))
                lhs = std::make_unique<Binary>('-', std::move(lhs), term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            if (consume('*'))
                lhs = std::make_unique<Binary>('*', std::move(lhs), factor());
            else if (consume('/'))
                lhs = std::make_unique<Binary>('/', std::move(lhs), factor());
            else
                return lhs;
        }
    }

    NodePtr factor() {
        if (consume('-')) {
            NodePtr arg = factor();
            return std::make_unique<Binary>('-', std::make_unique<Constant>(0.0), std::move(arg));
        }
        if (consume('+')) return factor();
        NodePtr base = primary();
        if (consume('^')) return std::make_unique<Binary>('^', std::move(base), factor());
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) throw InadmissibleError("expression: unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expression();
            if (!consume(')')) throw InadmissibleError("expression: missing ')'");
            return e;
        }
        if (std::isdigit((unsigned char)c) || c == '.') return number();
        if (std::isalpha((unsigned char)c) || c == '_') return identifier();
        throw InadmissibleError(std::string("expression: unexpected character '") + c + "'");
    }

    NodePtr number() {
        char* end = nullptr;
        double v = std::strtod(text_.c_str() + pos_, &end);
        if (end == text_.c_str() + pos_) throw InadmissibleError("expression: bad number");
        pos_ = end - text_.c_str();
        return std::make_unique<Constant>(v);
    }

    NodePtr identifier() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        if (name == "r") return std::make_unique<Variable>(true);
        if (name == "theta") return std::make_unique<Variable>(false);
        if (name == "pi") return std::make_unique<Constant>(M_PI);
        if (name == "e") return std::make_unique<Constant>(M_E);
        static const struct {
            const char* name;
            double (*fn)(double);
        } fns[] = {{"sin", std::sin},   {"cos", std::cos}, {"tan", std::tan},
                   {"exp", std::exp},   {"log", std::log}, {"sqrt", std::sqrt},
                   {"abs", std::fabs}};
        for (const auto& f : fns) {
            if (name == f.name) {
                if (!consume('(')) throw InadmissibleError("expression: expected '(' after " + name);
                NodePtr arg = expression();
                if (!consume(')')) throw InadmissibleError("expression: missing ')'");
                return std::make_unique<Unary>(f.fn, std::move(arg));
            }
        }
        throw InadmissibleError("expression: unknown identifier '" + name + "'");
    }
};

}  // namespace

std::function<double(double, double)> parse_expression(const std::string& text) {
    Parser parser(text);
    std::shared_ptr<Node> root(parser.parse().release());
    return [root](double r, double theta) { return root->eval(r, theta); };
}

}  // namespace gptlab
