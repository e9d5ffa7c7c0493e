#include "bergman_limits/symbol.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <random>

namespace bl {

using Fn = std::function<cplx(const Point&)>;

Symbol::Symbol() : kind_(SymbolKind::Constant), label_("0"), fn_([](const Point&) { return cplx(0.0); }) {
  buc = true;
  vo = true;
}

Symbol Symbol::constant(cplx c) {
  Symbol s;
  s.constant_ = c;
  s.bound_ = std::abs(c);
  s.buc = true;
  s.vo = true;
  s.fn_ = [c](const Point&) { return c; };
  char buf[64];
  if (c.imag() == 0.0)
    std::snprintf(buf, sizeof buf, "%.17g", c.real());
  else
    std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", c.real(), c.imag());
  s.label_ = buf;
  return s;
}

Symbol Symbol::polynomial(std::string label, std::vector<PolyTerm> terms) {
  auto fn = [terms](const Point& z) {
    cplx sum = 0.0;
    for (const auto& t : terms) {
      cplx v = t.coeff;
      for (int i = 0; i < z.n; ++i) {
        for (int k = 0; k < t.a[i]; ++k) v *= z[i];
        for (int k = 0; k < t.b[i]; ++k) v *= std::conj(z[i]);
      }
      sum += v;
    }
    return sum;
  };
  double bound = 0.0;
  for (const auto& t : terms) bound += std::abs(t.coeff);
  Symbol s = callable(std::move(label), fn, bound);
  s.kind_ = SymbolKind::Polynomial;
  s.terms_ = std::move(terms);
  s.buc = true;
  return s;
}

Symbol Symbol::radial(std::string label, std::function<double(double)> profile, double bound) {
  Symbol s = callable(std::move(label), [profile](const Point& z) { return cplx(profile(z.norm2())); }, bound);
  s.kind_ = SymbolKind::Radial;
  return s;
}

Symbol Symbol::indicator(std::string label, std::function<bool(const Point&)> pred) {
  Symbol s = callable(std::move(label), [pred](const Point& z) { return cplx(pred(z) ? 1.0 : 0.0); }, 1.0);
  s.kind_ = SymbolKind::Indicator;
  s.buc = false;
  return s;
}

Symbol Symbol::callable(std::string label, std::function<cplx(const Point&)> fn, double bound) {
  Symbol s;
  s.kind_ = SymbolKind::Callable;
  s.buc.reset();
  s.vo.reset();
  s.label_ = std::move(label);
  s.fn_ = std::move(fn);
  s.bound_ = bound;
  return s;
}

namespace {

std::optional<Point> shared_focus(const Symbol& a, const Symbol& b) {
  if (a.is_constant()) return b.focus;
  if (b.is_constant()) return a.focus;
  if (!a.focus || !b.focus || a.focus->n != b.focus->n) return std::nullopt;
  for (int i = 0; i < a.focus->n; ++i)
    if ((*a.focus)[i] != (*b.focus)[i]) return std::nullopt;
  return a.focus;
}

}  // namespace

Symbol Symbol::conj() const {
  if (is_constant()) return constant(std::conj(constant_));
  Fn f = fn_;
  Symbol s = callable("conj(" + label_ + ")", [f](const Point& z) { return std::conj(f(z)); }, bound_);
  s.buc = buc;
  s.vo = vo;
  if (kind_ == SymbolKind::Radial || kind_ == SymbolKind::Indicator) s.kind_ = kind_;
  s.focus = focus;
  return s;
}

Symbol Symbol::operator*(const Symbol& o) const {
  if (is_constant() && o.is_constant()) return constant(constant_ * o.constant_);
  Fn f = fn_, g = o.fn_;
  Symbol s = callable("(" + label_ + ")*(" + o.label_ + ")", [f, g](const Point& z) { return f(z) * g(z); },
                      bound_ * o.bound_);
  if (buc && o.buc && *buc && *o.buc) s.buc = true;
  if (vo && o.vo && *vo && *o.vo) s.vo = true;
  s.focus = shared_focus(*this, o);
  return s;
}

Symbol Symbol::operator+(const Symbol& o) const {
  if (is_constant() && o.is_constant()) return constant(constant_ + o.constant_);
  Fn f = fn_, g = o.fn_;
  Symbol s = callable("(" + label_ + ")+(" + o.label_ + ")", [f, g](const Point& z) { return f(z) + g(z); },
                      bound_ + o.bound_);
  if (buc && o.buc && *buc && *o.buc) s.buc = true;
  if (vo && o.vo && *vo && *o.vo) s.vo = true;
  s.focus = shared_focus(*this, o);
  return s;
}

Symbol Symbol::scaled(cplx c) const { return constant(c) * *this; }

Symbol Symbol::composed(const Domain& dom, const Point& z) const {
  if (is_constant()) return *this;
  Fn f = fn_;
  Symbol s = callable(label_ + " o phi_z", [f, dom, z](const Point& w) { return f(dom.phi(z, w)); }, bound_);
  s.buc = buc;
  s.vo = vo;
  // f o phi_z varies fastest where phi_z(w) is near the focus of f (the origin by default).
  s.focus = dom.phi(z, focus.value_or(dom.origin()));
  return s;
}

double sample_bound(const Domain& dom, const std::function<cplx(const Point&)>& f) {
  double best = 0.0;
  auto visit = [&](const Point& x) {
    const double v = std::abs(f(x));
    if (std::isfinite(v)) best = std::max(best, v);
  };
  if (dom.kind() == DomainKind::UnitDisk) {
    for (int i = 0; i <= 40; ++i) {
      const double r = i < 40 ? i / 40.0 : 0.999;
      for (int k = 0; k < 64; ++k) visit(Point{std::polar(r, 2 * M_PI * k / 64)});
    }
    return best;
  }
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 4000; ++k) {
    Point z(dom.n());
    for (int i = 0; i < dom.n(); ++i) z[i] = {g(rng), g(rng)};
    const double t = dom.polar(z).max();
    const double target = k % 4 == 0 ? 0.999 : std::pow(u(rng), 1.0 / (2 * dom.n()));
    visit(z.scaled(target / t));
  }
  return best;
}

namespace {

// Recursive-descent parser producing closures. Constant subtrees are folded.
class Parser {
 public:
  Parser(const std::string& src, const Domain& dom) : s_(src), dom_(dom) {}

  struct Node {
    Fn fn;
    bool is_const = false;
    cplx value = 0.0;
  };

  Node parse() {
    Node n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  const std::string& s_;
  const Domain& dom_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::Parse, "symbol parse error at position " + std::to_string(pos_) + ": " + msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static Node constant(cplx v) {
    Node n;
    n.is_const = true;
    n.value = v;
    n.fn = [v](const Point&) { return v; };
    return n;
  }

  template <class Op>
  static Node binary(const Node& a, const Node& b, Op op) {
    if (a.is_const && b.is_const) return constant(op(a.value, b.value));
    Fn fa = a.fn, fb = b.fn;
    Node n;
    n.fn = [fa, fb, op](const Point& z) { return op(fa(z), fb(z)); };
    return n;
  }

  template <class Op>
  static Node unary(const Node& a, Op op) {
    if (a.is_const) return constant(op(a.value));
    Fn fa = a.fn;
    Node n;
    n.fn = [fa, op](const Point& z) { return op(fa(z)); };
    return n;
  }

  Node expr() {
    Node lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = binary(lhs, term(), [](cplx x, cplx y) { return x + y; });
      else if (accept('-'))
        lhs = binary(lhs, term(), [](cplx x, cplx y) { return x - y; });
      else
        return lhs;
    }
  }

  Node term() {
    Node lhs = unary_expr();
    for (;;) {
      if (accept('*'))
        lhs = binary(lhs, unary_expr(), [](cplx x, cplx y) { return x * y; });
      else if (accept('/'))
        lhs = binary(lhs, unary_expr(), [](cplx x, cplx y) { return x / y; });
      else
        return lhs;
    }
  }

  Node unary_expr() {
    if (accept('-')) return unary(unary_expr(), [](cplx x) { return -x; });
    if (accept('+')) return unary_expr();
    return power();
  }

  Node power() {
    Node base = primary();
    if (!accept('^')) return base;
    Node ex = unary_expr();
    // Integer exponents use repeated multiplication so polynomials stay exact.
    if (ex.is_const && ex.value.imag() == 0.0 && std::abs(ex.value.real()) <= 64 &&
        ex.value.real() == std::round(ex.value.real())) {
      const int k = static_cast<int>(ex.value.real());
      return unary(base, [k](cplx x) {
        cplx r = 1.0;
        for (int j = 0; j < std::abs(k); ++j) r *= x;
        return k < 0 ? 1.0 / r : r;
      });
    }
    return binary(base, ex, [](cplx x, cplx y) { return std::pow(x, y); });
  }

  Node variable(const std::string& name) {
    int idx = -1;
    if (name == "z" || name == "z1") idx = 0;
    if (dom_.kind() == DomainKind::MatrixBall) {
      static const std::map<std::string, int> m{{"z11", 0}, {"z12", 1}, {"z21", 2}, {"z22", 3}};
      if (auto it = m.find(name); it != m.end()) idx = it->second;
    }
    if (idx < 0 && name.size() == 2 && name[0] == 'z' && name[1] >= '1' && name[1] <= '4') idx = name[1] - '1';
    if (idx < 0 || idx >= dom_.n()) fail("unknown variable '" + name + "' for " + dom_.name());
    Node n;
    n.fn = [idx](const Point& z) { return z[idx]; };
    return n;
  }

  Node call(const std::string& name, const Node& arg) {
    using F = cplx (*)(cplx);
    static const std::map<std::string, F> table{
        {"conj", [](cplx x) { return std::conj(x); }},
        {"abs", [](cplx x) { return cplx(std::abs(x)); }},
        {"abs2", [](cplx x) { return cplx(std::norm(x)); }},
        {"re", [](cplx x) { return cplx(x.real()); }},
        {"im", [](cplx x) { return cplx(x.imag()); }},
        {"exp", [](cplx x) { return std::exp(x); }},
        {"sin", [](cplx x) { return std::sin(x); }},
        {"cos", [](cplx x) { return std::cos(x); }},
        {"tanh", [](cplx x) { return std::tanh(x); }},
        {"sqrt", [](cplx x) { return std::sqrt(x); }},
        {"log", [](cplx x) { return std::log(x); }},
    };
    auto it = table.find(name);
    if (it == table.end()) fail("unknown function '" + name + "'");
    return unary(arg, it->second);
  }

  Node primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (accept('(')) {
      Node n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (accept('|')) {
      Node n = expr();
      if (!accept('|')) fail("expected closing '|'");
      return call("abs", n);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (accept('(')) {
        Node arg = expr();
        if (!accept(')')) fail("expected ')' after argument of " + name);
        return call(name, arg);
      }
      if (name == "i") return constant(cplx(0.0, 1.0));
      if (name == "pi") return constant(M_PI);
      if (name == "r2") {
        Node n;
        n.fn = [](const Point& z) { return cplx(z.norm2()); };
        return n;
      }
      return variable(name);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace

Symbol parse_symbol(const std::string& expr, const Domain& dom) {
  Parser parser(expr, dom);
  const auto node = parser.parse();
  if (node.is_const) return Symbol::constant(node.value);
  return Symbol::callable(expr, node.fn, sample_bound(dom, node.fn));
}

}  // namespace bl
