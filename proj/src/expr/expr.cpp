#include "vielbein/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

#include "vielbein/errors.hpp"

namespace vielbein {

struct Expr::Node {
    Op op;
    double number = 0.0;
    int coordinate = 0;
    std::string name;
    Function fn = Function::sin;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
};

Expr Expr::number(double v) {
    auto n = std::make_shared<Node>();
    n->op = Op::number;
    n->number = v;
    return Expr(std::move(n));
}

Expr Expr::coordinate(int index) {
    auto n = std::make_shared<Node>();
    n->op = Op::coordinate;
    n->coordinate = index;
    return Expr(std::move(n));
}

Expr Expr::parameter(std::string name) {
    auto n = std::make_shared<Node>();
    n->op = Op::parameter;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(lhs.node_);
    n->b = std::move(rhs.node_);
    return Expr(std::move(n));
}

Expr Expr::negate(Expr arg) {
    auto n = std::make_shared<Node>();
    n->op = Op::neg;
    n->a = std::move(arg.node_);
    return Expr(std::move(n));
}

Expr Expr::call(Function fn, Expr arg) {
    auto n = std::make_shared<Node>();
    n->op = Op::call;
    n->fn = fn;
    n->a = std::move(arg.node_);
    return Expr(std::move(n));
}

Expr::Op Expr::op() const { return node_->op; }
double Expr::number_value() const { return node_->number; }
int Expr::coordinate_index() const { return node_->coordinate; }
const std::string& Expr::parameter_name() const { return node_->name; }
Expr::Function Expr::function() const { return node_->fn; }
Expr Expr::lhs() const { return Expr(node_->a); }
Expr Expr::rhs() const { return Expr(node_->b); }
Expr Expr::arg() const { return Expr(node_->a); }

std::string_view function_name(Expr::Function fn) {
    switch (fn) {
        case Expr::Function::sin: return "sin";
        case Expr::Function::cos: return "cos";
        case Expr::Function::sqrt: return "sqrt";
        case Expr::Function::exp: return "exp";
        case Expr::Function::ln: return "ln";
    }
    return "?";
}

bool operator==(const Expr& x, const Expr& y) {
    const Expr::Node& a = *x.node_;
    const Expr::Node& b = *y.node_;
    if (a.op != b.op) return false;
    switch (a.op) {
        case Expr::Op::number: return a.number == b.number;
        case Expr::Op::coordinate: return a.coordinate == b.coordinate;
        case Expr::Op::parameter: return a.name == b.name;
        case Expr::Op::neg: return x.arg() == y.arg();
        case Expr::Op::call: return a.fn == b.fn && x.arg() == y.arg();
        default: return x.lhs() == y.lhs() && x.rhs() == y.rhs();
    }
}

namespace {

int precedence(Expr::Op op) {
    switch (op) {
        case Expr::Op::add:
        case Expr::Op::sub: return 1;
        case Expr::Op::mul:
        case Expr::Op::div: return 2;
        case Expr::Op::neg: return 3;
        case Expr::Op::pow: return 4;
        default: return 5;
    }
}

char op_char(Expr::Op op) {
    switch (op) {
        case Expr::Op::add: return '+';
        case Expr::Op::sub: return '-';
        case Expr::Op::mul: return '*';
        case Expr::Op::div: return '/';
        case Expr::Op::pow: return '^';
        default: return '?';
    }
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // Prefer the shortest representation that round-trips.
    for (int prec = 1; prec <= 17; ++prec) {
        char shorter[64];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

void print(const Expr& e, std::string& out) {
    const auto wrap = [&out](const Expr& child, bool paren) {
        if (paren) out += '(';
        print(child, out);
        if (paren) out += ')';
    };
    switch (e.op()) {
        case Expr::Op::number: out += format_number(e.number_value()); return;
        case Expr::Op::coordinate: out += "x" + std::to_string(e.coordinate_index()); return;
        case Expr::Op::parameter: out += e.parameter_name(); return;
        case Expr::Op::neg:
            out += '-';
            wrap(e.arg(), precedence(e.arg().op()) < precedence(Expr::Op::neg));
            return;
        case Expr::Op::call:
            out += function_name(e.function());
            wrap(e.arg(), true);
            return;
        default: {
            const int p = precedence(e.op());
            wrap(e.lhs(), precedence(e.lhs().op()) < p);
            out += op_char(e.op());
            wrap(e.rhs(), precedence(e.rhs().op()) <= p);
        }
    }
}

void sexpr(const Expr& e, std::string& out) {
    switch (e.op()) {
        case Expr::Op::number: out += format_number(e.number_value()); return;
        case Expr::Op::coordinate: out += "x" + std::to_string(e.coordinate_index()); return;
        case Expr::Op::parameter: out += e.parameter_name(); return;
        case Expr::Op::neg:
            out += "Neg(";
            sexpr(e.arg(), out);
            out += ')';
            return;
        case Expr::Op::call:
            out += function_name(e.function());
            out += '(';
            sexpr(e.arg(), out);
            out += ')';
            return;
        default: break;
    }
    static constexpr const char* names[] = {"", "", "", "Add", "Sub", "Mul", "Div", "Pow"};
    out += names[static_cast<int>(e.op())];
    out += '(';
    sexpr(e.lhs(), out);
    out += ", ";
    sexpr(e.rhs(), out);
    out += ')';
}

void collect(const Expr& e, std::set<std::string>& params, int& max_coord) {
    switch (e.op()) {
        case Expr::Op::number: return;
        case Expr::Op::coordinate: max_coord = std::max(max_coord, e.coordinate_index()); return;
        case Expr::Op::parameter: params.insert(e.parameter_name()); return;
        case Expr::Op::neg:
        case Expr::Op::call: collect(e.arg(), params, max_coord); return;
        default:
            collect(e.lhs(), params, max_coord);
            collect(e.rhs(), params, max_coord);
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
    Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

    Expr run() {
        skip_space();
        if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
        Expr e = sum();
        skip_space();
        if (pos_ != text_.size()) throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr sum() {
        Expr e = product();
        for (;;) {
            if (accept('+')) e = Expr::binary(Expr::Op::add, e, product());
            else if (accept('-')) e = Expr::binary(Expr::Op::sub, e, product());
            else return e;
        }
    }

    Expr product() {
        Expr e = unary();
        for (;;) {
            if (accept('*')) e = Expr::binary(Expr::Op::mul, e, unary());
            else if (accept('/')) e = Expr::binary(Expr::Op::div, e, unary());
            else return e;
        }
    }

    Expr unary() {
        if (accept('-')) return Expr::negate(unary());
        return power();
    }

    Expr power() {
        Expr e = primary();
        while (accept('^')) e = Expr::binary(Expr::Op::pow, e, exponent());
        return e;
    }

    Expr exponent() {
        if (accept('-')) return Expr::negate(exponent());
        return primary();
    }

    Expr primary() {
        skip_space();
        if (pos_ == text_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = sum();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                pos_ = p;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (ec != std::errc() || ptr != text_.data() + pos_) throw ParseError("malformed number", start);
        return Expr::number(v);
    }

    Expr name() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string id(text_.substr(start, pos_ - start));
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            static const std::pair<const char*, Expr::Function> table[] = {
                {"sin", Expr::Function::sin},   {"cos", Expr::Function::cos}, {"sqrt", Expr::Function::sqrt},
                {"exp", Expr::Function::exp},   {"ln", Expr::Function::ln},
            };
            for (const auto& [fname, fn] : table) {
                if (id == fname) {
                    ++pos_;
                    Expr arg = sum();
                    if (!accept(')')) throw ParseError("expected ')' after function argument", pos_);
                    return Expr::call(fn, arg);
                }
            }
            throw ParseError("unknown function '" + id + "'", start);
        }
        if (id.size() > 1 && id[0] == 'x' &&
            id.find_first_not_of("0123456789", 1) == std::string::npos) {
            const int k = std::stoi(id.substr(1));
            if (k < 1 || k > dim_)
                throw ParseError("coordinate " + id + " out of range for dimension " + std::to_string(dim_), start);
            return Expr::coordinate(k);
        }
        return Expr::parameter(id);
    }

    std::string_view text_;
    int dim_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

[[noreturn]] void domain_error(const Expr& e, const std::string& what) {
    throw EvaluationError(what + " in '" + e.to_string() + "'");
}

Jet2 eval_node(const Expr& e, std::span<const Jet2> x, const ParameterMap& params) {
    switch (e.op()) {
        case Expr::Op::number: return Jet2(e.number_value());
        case Expr::Op::coordinate: {
            const auto k = static_cast<std::size_t>(e.coordinate_index() - 1);
            if (k >= x.size()) domain_error(e, "coordinate outside the evaluation point");
            return x[k];
        }
        case Expr::Op::parameter: {
            const auto it = params.find(e.parameter_name());
            if (it == params.end()) throw EvaluationError("unresolved parameter '" + e.parameter_name() + "'");
            return Jet2(it->second);
        }
        case Expr::Op::neg: return -eval_node(e.arg(), x, params);
        case Expr::Op::call: {
            const Jet2 a = eval_node(e.arg(), x, params);
            switch (e.function()) {
                case Expr::Function::sin: return sin(a);
                case Expr::Function::cos: return cos(a);
                case Expr::Function::exp: {
                    Jet2 r = exp(a);
                    if (!std::isfinite(r.value())) domain_error(e, "exp overflow");
                    return r;
                }
                case Expr::Function::sqrt:
                    if (!(a.value() > 0.0))
                        domain_error(e, "sqrt of non-positive value " + format_number(a.value()));
                    return sqrt(a);
                case Expr::Function::ln:
                    if (!(a.value() > 0.0)) domain_error(e, "ln of non-positive value " + format_number(a.value()));
                    return log(a);
            }
            break;
        }
        default: break;
    }
    const Jet2 a = eval_node(e.lhs(), x, params);
    const Jet2 b = eval_node(e.rhs(), x, params);
    switch (e.op()) {
        case Expr::Op::add: return a + b;
        case Expr::Op::sub: return a - b;
        case Expr::Op::mul: return a * b;
        case Expr::Op::div:
            if (b.value() == 0.0) domain_error(e, "division by zero");
            return a / b;
        case Expr::Op::pow: {
            bool constant_exponent = true;
            for (int i = 0; i < b.dim(); ++i) constant_exponent = constant_exponent && b.grad(i) == 0.0;
            const double p = b.value();
            const double v = a.value();
            if (constant_exponent && p == std::floor(p)) {
                if (v == 0.0 && p < 0.0) domain_error(e, "zero raised to a negative power");
                return pow(a, p);
            }
            if (!(v > 0.0)) domain_error(e, "non-positive base " + format_number(v) + " with non-integer exponent");
            return constant_exponent ? pow(a, p) : pow(a, b);
        }
        default: break;
    }
    domain_error(e, "unsupported node");
}

}  // namespace

std::string Expr::to_string() const {
    std::string s;
    print(*this, s);
    return s;
}

std::string Expr::to_sexpr() const {
    std::string s;
    sexpr(*this, s);
    return s;
}

std::set<std::string> Expr::parameters() const {
    std::set<std::string> p;
    int m = 0;
    collect(*this, p, m);
    return p;
}

int Expr::max_coordinate() const {
    std::set<std::string> p;
    int m = 0;
    collect(*this, p, m);
    return m;
}

Expr parse(std::string_view text, int dim) { return Parser(text, dim).run(); }

Jet2 eval_jet(const Expr& e, std::span<const Jet2> x, const ParameterMap& params) {
    return eval_node(e, x, params);
}

double eval(const Expr& e, std::span<const double> x, const ParameterMap& params) {
    std::vector<Jet2> consts(x.begin(), x.end());
    return eval_node(e, consts, params).value();
}

}  // namespace vielbein
