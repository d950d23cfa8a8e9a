#include "formcalc/expr.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>

#include "formcalc/error.hpp"

namespace formcalc {

struct Expr::Node {
  Kind kind = Kind::Const;
  Rational value;
  std::string name;
  Func func = Func::Sin;
  long exponent = 0;
  std::vector<Expr> children;
};

namespace {

const std::shared_ptr<const Expr::Node>& zero_node() {
  static const auto node = std::make_shared<const Expr::Node>();
  return node;
}

bool is_atom_for_print(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Var:
    case Expr::Kind::Apply:
      return true;
    case Expr::Kind::Const:
      return e.value() >= 0 && e.value().get_den() == 1;
    default:
      return false;
  }
}

}  // namespace

std::string_view func_name(Func f) {
  switch (f) {
    case Func::Sin:
      return "sin";
    case Func::Cos:
      return "cos";
    case Func::Exp:
      return "exp";
    case Func::Log:
      return "log";
  }
  return "?";
}

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr::Expr(long value) : Expr(Rational(value)) {}

Expr::Expr(const Rational& value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = value;
  n->value.canonicalize();
  node_ = std::move(n);
}

Expr Expr::constant(const Rational& value) { return Expr(value); }

Expr Expr::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  Rational constant = 0;
  for (auto& t : terms) {
    if (t.kind() == Kind::Sum) {
      for (const auto& c : t.children()) {
        if (c.is_const()) {
          constant += c.value();
        } else {
          flat.push_back(c);
        }
      }
    } else if (t.is_const()) {
      constant += t.value();
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (constant != 0) flat.emplace_back(constant);
  if (flat.empty()) return Expr();
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->children = std::move(flat);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  Rational constant = 1;
  auto absorb = [&](const Expr& f) {
    if (f.is_const()) {
      constant *= f.value();
    } else {
      flat.push_back(f);
    }
  };
  for (const auto& f : factors) {
    if (f.kind() == Kind::Product) {
      for (const auto& c : f.children()) absorb(c);
    } else {
      absorb(f);
    }
  }
  if (constant == 0) return Expr();
  if (constant != 1) flat.insert(flat.begin(), Expr(constant));
  if (flat.empty()) return Expr(1L);
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->children = std::move(flat);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::quotient(Expr numerator, Expr denominator) {
  if (denominator.is_literal_one()) return numerator;
  if (numerator.is_literal_zero() && denominator.is_const() &&
      !denominator.is_literal_zero()) {
    return Expr();
  }
  if (numerator.is_const() && denominator.is_const() &&
      !denominator.is_literal_zero()) {
    return Expr(Rational(numerator.value() / denominator.value()));
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Quotient;
  n->children = {std::move(numerator), std::move(denominator)};
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::power(Expr base, long exponent) {
  if (exponent == 0) return Expr(1L);
  if (exponent == 1) return base;
  if (base.is_const() && !(base.is_literal_zero() && exponent < 0)) {
    mpz_class num, den;
    const unsigned long e = static_cast<unsigned long>(std::labs(exponent));
    mpz_pow_ui(num.get_mpz_t(), base.value().get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), base.value().get_den_mpz_t(), e);
    Rational r = exponent > 0 ? Rational(num, den) : Rational(den, num);
    r.canonicalize();
    return Expr(r);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->exponent = exponent;
  n->children = {std::move(base)};
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::apply(Func f, Expr argument) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Apply;
  n->func = f;
  n->children = {std::move(argument)};
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
Func Expr::func() const { return node_->func; }
long Expr::exponent() const { return node_->exponent; }
std::span<const Expr> Expr::children() const { return node_->children; }

bool Expr::is_literal_zero() const { return is_const() && value() == 0; }
bool Expr::is_literal_one() const { return is_const() && value() == 1; }

bool Expr::has_function() const {
  if (kind() == Kind::Apply) return true;
  for (const auto& c : children()) {
    if (c.has_function()) return true;
  }
  return false;
}

int natural_compare(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie])))
        ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je])))
        ++je;
      auto ra = a.substr(i, ie - i);
      auto rb = b.substr(j, je - j);
      while (ra.size() > 1 && ra.front() == '0') ra.remove_prefix(1);
      while (rb.size() > 1 && rb.front() == '0') rb.remove_prefix(1);
      if (ra.size() != rb.size()) return ra.size() < rb.size() ? -1 : 1;
      if (int c = ra.compare(rb); c != 0) return c < 0 ? -1 : 1;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j] ? -1 : 1;
      ++i;
      ++j;
    }
  }
  if (i < a.size()) return 1;
  if (j < b.size()) return -1;
  return a.compare(b) < 0 ? -1 : (a.compare(b) > 0 ? 1 : 0);
}

int Expr::compare(const Expr& other) const {
  if (node_ == other.node_) return 0;
  if (kind() != other.kind()) return kind() < other.kind() ? -1 : 1;
  switch (kind()) {
    case Kind::Const:
      return cmp(value(), other.value()) < 0
                 ? -1
                 : (cmp(value(), other.value()) > 0 ? 1 : 0);
    case Kind::Var:
      return natural_compare(name(), other.name());
    case Kind::Apply:
      if (func() != other.func()) return func() < other.func() ? -1 : 1;
      return children()[0].compare(other.children()[0]);
    case Kind::Power:
      if (int c = children()[0].compare(other.children()[0]); c != 0) return c;
      if (exponent() != other.exponent())
        return exponent() < other.exponent() ? -1 : 1;
      return 0;
    default: {
      const auto a = children();
      const auto b = other.children();
      for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (int c = a[i].compare(b[i]); c != 0) return c;
      }
      if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
      return 0;
    }
  }
}

namespace {

bool is_negative_term(const Expr& e) {
  if (e.is_const()) return e.value() < 0;
  if (e.kind() == Expr::Kind::Product && e.children()[0].is_const())
    return e.children()[0].value() < 0;
  return false;
}

Expr negate_term(const Expr& e) {
  if (e.is_const()) return Expr(Rational(-e.value()));
  std::vector<Expr> f(e.children().begin(), e.children().end());
  f[0] = Expr(Rational(-f[0].value()));
  return Expr::product(std::move(f));
}

void print(std::ostream& os, const Expr& e);

void print_factor(std::ostream& os, const Expr& f, bool first) {
  const bool paren =
      f.kind() == Expr::Kind::Sum || f.kind() == Expr::Kind::Quotient ||
      (f.is_const() && !first && !is_atom_for_print(f));
  if (paren) os << '(';
  print(os, f);
  if (paren) os << ')';
}

void print(std::ostream& os, const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Const:
      os << e.value().get_str();
      return;
    case Expr::Kind::Var:
      os << e.name();
      return;
    case Expr::Kind::Apply:
      os << func_name(e.func()) << '(';
      print(os, e.children()[0]);
      os << ')';
      return;
    case Expr::Kind::Power: {
      const auto& b = e.children()[0];
      const bool paren = !is_atom_for_print(b);
      if (paren) os << '(';
      print(os, b);
      if (paren) os << ')';
      if (e.exponent() < 0) {
        os << "^(" << e.exponent() << ')';
      } else {
        os << '^' << e.exponent();
      }
      return;
    }
    case Expr::Kind::Product: {
      auto f = e.children();
      std::size_t start = 0;
      if (f[0].is_const() && f[0].value() == -1 && f.size() > 1) {
        os << '-';
        start = 1;
      }
      for (std::size_t i = start; i < f.size(); ++i) {
        if (i > start) os << '*';
        print_factor(os, f[i], i == start && start == 0);
      }
      return;
    }
    case Expr::Kind::Sum: {
      auto t = e.children();
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i == 0) {
          print(os, t[i]);
        } else if (is_negative_term(t[i])) {
          os << " - ";
          print(os, negate_term(t[i]));
        } else {
          os << " + ";
          print(os, t[i]);
        }
      }
      return;
    }
    case Expr::Kind::Quotient: {
      const auto& n = e.children()[0];
      const auto& d = e.children()[1];
      const bool pn = n.kind() == Expr::Kind::Sum ||
                      n.kind() == Expr::Kind::Quotient ||
                      (n.is_const() && !is_atom_for_print(n)) ||
                      (n.kind() == Expr::Kind::Product && is_negative_term(n));
      const bool pd = !is_atom_for_print(d) && d.kind() != Expr::Kind::Power;
      if (pn) os << '(';
      print(os, n);
      if (pn) os << ')';
      os << '/';
      if (pd) os << '(';
      print(os, d);
      if (pd) os << ')';
      return;
    }
  }
}

}  // namespace

std::string Expr::str() const {
  std::ostringstream os;
  print(os, *this);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) {
  print(os, e);
  return os;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) {
  return Expr::sum({a, Expr::product({Expr(-1L), b})});
}
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::quotient(a, b); }
Expr operator-(const Expr& a) { return Expr::product({Expr(-1L), a}); }

Expr sin(const Expr& e) { return Expr::apply(Func::Sin, e); }
Expr cos(const Expr& e) { return Expr::apply(Func::Cos, e); }
Expr exp(const Expr& e) { return Expr::apply(Func::Exp, e); }
Expr log(const Expr& e) { return Expr::apply(Func::Log, e); }
Expr pow(const Expr& base, long exponent) {
  return Expr::power(base, exponent);
}

namespace {

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == Expr::Kind::Var) {
    out.insert(e.name());
    return;
  }
  for (const auto& c : e.children()) collect_vars(c, out);
}

}  // namespace

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

bool depends_on(const Expr& e, std::string_view var) {
  if (e.kind() == Expr::Kind::Var) return e.name() == var;
  for (const auto& c : e.children()) {
    if (depends_on(c, var)) return true;
  }
  return false;
}

namespace {

Expr substitute_raw(const Expr& e, const Bindings& bindings) {
  switch (e.kind()) {
    case Expr::Kind::Const:
      return e;
    case Expr::Kind::Var: {
      auto it = bindings.find(e.name());
      return it == bindings.end() ? e : it->second;
    }
    case Expr::Kind::Apply:
      return Expr::apply(e.func(), substitute_raw(e.children()[0], bindings));
    case Expr::Kind::Power:
      return Expr::power(substitute_raw(e.children()[0], bindings),
                         e.exponent());
    case Expr::Kind::Quotient:
      return Expr::quotient(substitute_raw(e.children()[0], bindings),
                            substitute_raw(e.children()[1], bindings));
    case Expr::Kind::Sum:
    case Expr::Kind::Product: {
      std::vector<Expr> c;
      c.reserve(e.children().size());
      for (const auto& ch : e.children())
        c.push_back(substitute_raw(ch, bindings));
      return e.kind() == Expr::Kind::Sum ? Expr::sum(std::move(c))
                                         : Expr::product(std::move(c));
    }
  }
  return e;
}

Rational rational_pow(const Rational& base, long exponent) {
  if (base == 0 && exponent < 0) throw DivisionByZero("0 raised to a negative power");
  mpz_class num, den;
  const auto e = static_cast<unsigned long>(std::labs(exponent));
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational r = exponent >= 0 ? Rational(num, den) : Rational(den, num);
  r.canonicalize();
  return r;
}

Rational eval_exact(const Expr& e, const Point& point) {
  switch (e.kind()) {
    case Expr::Kind::Const:
      return e.value();
    case Expr::Kind::Var: {
      auto it = point.find(e.name());
      if (it == point.end()) throw UnboundVariable(e.name());
      return it->second;
    }
    case Expr::Kind::Sum: {
      Rational s = 0;
      for (const auto& c : e.children()) s += eval_exact(c, point);
      return s;
    }
    case Expr::Kind::Product: {
      Rational p = 1;
      for (const auto& c : e.children()) p *= eval_exact(c, point);
      return p;
    }
    case Expr::Kind::Quotient: {
      const Rational d = eval_exact(e.children()[1], point);
      if (d == 0) throw DivisionByZero("division by zero at evaluation point");
      return eval_exact(e.children()[0], point) / d;
    }
    case Expr::Kind::Power:
      return rational_pow(eval_exact(e.children()[0], point), e.exponent());
    case Expr::Kind::Apply:
      break;
  }
  throw StructuralError("function node in exact evaluation");
}

double eval_float(const Expr& e, const Point& point) {
  switch (e.kind()) {
    case Expr::Kind::Const:
      return e.value().get_d();
    case Expr::Kind::Var: {
      auto it = point.find(e.name());
      if (it == point.end()) throw UnboundVariable(e.name());
      return it->second.get_d();
    }
    case Expr::Kind::Sum: {
      double s = 0;
      for (const auto& c : e.children()) s += eval_float(c, point);
      return s;
    }
    case Expr::Kind::Product: {
      double p = 1;
      for (const auto& c : e.children()) p *= eval_float(c, point);
      return p;
    }
    case Expr::Kind::Quotient: {
      const double d = eval_float(e.children()[1], point);
      if (d == 0.0) throw DivisionByZero("division by zero at evaluation point");
      return eval_float(e.children()[0], point) / d;
    }
    case Expr::Kind::Power: {
      const double b = eval_float(e.children()[0], point);
      if (b == 0.0 && e.exponent() < 0)
        throw DivisionByZero("0 raised to a negative power");
      return std::pow(b, static_cast<double>(e.exponent()));
    }
    case Expr::Kind::Apply: {
      const double a = eval_float(e.children()[0], point);
      switch (e.func()) {
        case Func::Sin:
          return std::sin(a);
        case Func::Cos:
          return std::cos(a);
        case Func::Exp:
          return std::exp(a);
        case Func::Log:
          if (a <= 0.0) throw DomainError("log of a non-positive value");
          return std::log(a);
      }
    }
  }
  throw StructuralError("unknown node in evaluation");
}

}  // namespace

Expr substitute(const Expr& e, const Bindings& bindings) {
  return simplify(substitute_raw(e, bindings));
}

Value eval_at(const Expr& e, const Point& point) {
  if (e.has_function()) return eval_float(e, point);
  return eval_exact(e, point);
}

double to_double(const Value& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return r->get_d();
  return std::get<double>(v);
}

std::string_view to_string(ZeroTest z) {
  switch (z) {
    case ZeroTest::Zero:
      return "Zero";
    case ZeroTest::NonZero:
      return "NonZero";
    case ZeroTest::ProbablyNonZero:
      return "ProbablyNonZero";
  }
  return "?";
}

ZeroTest combine(ZeroTest a, ZeroTest b) {
  if (a == ZeroTest::NonZero || b == ZeroTest::NonZero) return ZeroTest::NonZero;
  if (a == ZeroTest::ProbablyNonZero || b == ZeroTest::ProbablyNonZero)
    return ZeroTest::ProbablyNonZero;
  return ZeroTest::Zero;
}

}  // namespace formcalc
