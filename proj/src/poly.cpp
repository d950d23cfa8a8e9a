#include "formcalc/poly.hpp"

#include <algorithm>
#include <set>

#include "formcalc/error.hpp"

namespace formcalc::alg {

// ---------------------------------------------------------------- Monomial

int Monomial::total_degree() const {
  int d = 0;
  for (const auto& [k, e] : factors) d += e;
  return d;
}

int Monomial::degree_in(const Expr& kernel) const {
  for (const auto& [k, e] : factors) {
    if (k == kernel) return e;
  }
  return 0;
}

Monomial Monomial::without(const Expr& kernel) const {
  Monomial m;
  for (const auto& f : factors) {
    if (!(f.first == kernel)) m.factors.push_back(f);
  }
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.factors.reserve(a.factors.size() + b.factors.size());
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    if (j == b.factors.size()) {
      out.factors.push_back(a.factors[i++]);
    } else if (i == a.factors.size()) {
      out.factors.push_back(b.factors[j++]);
    } else {
      const int c = a.factors[i].first.compare(b.factors[j].first);
      if (c < 0) {
        out.factors.push_back(a.factors[i++]);
      } else if (c > 0) {
        out.factors.push_back(b.factors[j++]);
      } else {
        const int e = a.factors[i].second + b.factors[j].second;
        if (e != 0) out.factors.emplace_back(a.factors[i].first, e);
        ++i;
        ++j;
      }
    }
  }
  return out;
}

std::optional<Monomial> divide(const Monomial& a, const Monomial& b) {
  Monomial out;
  std::size_t i = 0;
  for (const auto& [k, e] : b.factors) {
    while (i < a.factors.size() && a.factors[i].first.compare(k) < 0) {
      out.factors.push_back(a.factors[i++]);
    }
    if (i == a.factors.size() || !(a.factors[i].first == k) ||
        a.factors[i].second < e) {
      return std::nullopt;
    }
    if (a.factors[i].second > e) {
      out.factors.emplace_back(k, a.factors[i].second - e);
    }
    ++i;
  }
  while (i < a.factors.size()) out.factors.push_back(a.factors[i++]);
  return out;
}

int lex_compare(const Monomial& a, const Monomial& b) {
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    if (j == b.factors.size()) return 1;
    if (i == a.factors.size()) return -1;
    const int c = a.factors[i].first.compare(b.factors[j].first);
    if (c < 0) return 1;
    if (c > 0) return -1;
    if (a.factors[i].second != b.factors[j].second)
      return a.factors[i].second < b.factors[j].second ? -1 : 1;
    ++i;
    ++j;
  }
  return 0;
}

// -------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(const Rational& c) {
  Polynomial p;
  p.add_term(c, Monomial{});
  return p;
}

Polynomial Polynomial::kernel(const Expr& k, int exponent) {
  Polynomial p;
  p.add_term(1, Monomial{{{k, exponent}}});
  return p;
}

Polynomial Polynomial::term(const Rational& c, Monomial m) {
  Polynomial p;
  p.add_term(c, m);
  return p;
}

void Polynomial::add_term(const Rational& c, const Monomial& m) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool Polynomial::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return 0;
  return terms_.begin()->second;
}

const std::pair<const Monomial, Rational>& Polynomial::leading() const {
  return *terms_.rbegin();
}

int Polynomial::degree_in(const Expr& kernel) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree_in(kernel));
  return d;
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
  return d;
}

std::vector<Expr> Polynomial::kernels() const {
  std::set<Expr> ks;
  for (const auto& [m, c] : terms_) {
    for (const auto& [k, e] : m.factors) ks.insert(k);
  }
  return {ks.begin(), ks.end()};
}

bool Polynomial::has_function_kernel() const {
  for (const auto& [m, c] : terms_) {
    for (const auto& [k, e] : m.factors) {
      if (k.kind() != Expr::Kind::Var) return true;
    }
  }
  return false;
}

std::map<int, Polynomial> Polynomial::coefficients_in(const Expr& kernel) const {
  std::map<int, Polynomial> out;
  for (const auto& [m, c] : terms_) {
    out[m.degree_in(kernel)].add_term(c, m.without(kernel));
  }
  return out;
}

Polynomial Polynomial::leading_coefficient_in(const Expr& kernel) const {
  auto cs = coefficients_in(kernel);
  if (cs.empty()) return {};
  return cs.rbegin()->second;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(c, m);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(Rational(-c), m);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      out.add_term(Rational(ca * cb), ma * mb);
    }
  }
  return out;
}

Polynomial operator-(const Polynomial& a) { return a.scaled(-1); }

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial out;
  if (c == 0) return out;
  for (const auto& [m, k] : terms_) out.terms_.emplace_hint(out.terms_.end(), m, Rational(k * c));
  return out;
}

Polynomial Polynomial::times(const Monomial& mono) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) out.add_term(c, m * mono);
  return out;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result = constant(1);
  Polynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  return scaled(Rational(1 / leading().second));
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  for (; i != a.terms_.end(); ++i, ++j) {
    if (lex_compare(i->first, j->first) != 0 || i->second != j->second)
      return false;
  }
  return true;
}

namespace {

Expr monomial_expr(const Rational& c, const Monomial& m) {
  std::vector<Expr> f;
  f.reserve(m.factors.size() + 1);
  f.emplace_back(c);
  for (const auto& [k, e] : m.factors) {
    f.push_back(e == 1 ? k : Expr::power(k, e));
  }
  return Expr::product(std::move(f));
}

}  // namespace

Expr Polynomial::to_expr() const {
  std::vector<const std::pair<const Monomial, Rational>*> order;
  order.reserve(terms_.size());
  for (const auto& t : terms_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
    const int da = a->first.total_degree();
    const int db = b->first.total_degree();
    if (da != db) return da > db;
    return lex_compare(a->first, b->first) > 0;
  });
  std::vector<Expr> ts;
  ts.reserve(order.size());
  for (const auto* t : order) ts.push_back(monomial_expr(t->second, t->first));
  return Expr::sum(std::move(ts));
}

// ------------------------------------------------------- division and gcd

std::optional<Polynomial> divide_exact(const Polynomial& a,
                                       const Polynomial& b) {
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  if (b.is_constant()) return a.scaled(Rational(1 / b.constant_value()));
  Polynomial q;
  Polynomial r = a;
  const auto& [lm_b, lc_b] = b.leading();
  while (!r.is_zero()) {
    const auto& [lm_r, lc_r] = r.leading();
    auto m = divide(lm_r, lm_b);
    if (!m) return std::nullopt;
    const Rational c = lc_r / lc_b;
    q.add_term(c, *m);
    r -= b.times(*m).scaled(c);
  }
  return q;
}

namespace {

Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b,
                            const Expr& k) {
  const int db = b.degree_in(k);
  const Polynomial lcb = b.leading_coefficient_in(k);
  Polynomial r = a;
  while (!r.is_zero()) {
    const int dr = r.degree_in(k);
    if (dr < db) break;
    const Polynomial lcr = r.leading_coefficient_in(k);
    Monomial shift;
    if (dr > db) shift.factors.emplace_back(k, dr - db);
    r = r * lcb - (lcr * b).times(shift);
  }
  return r;
}

Polynomial primitive_part_in(const Polynomial& p, const Expr& k) {
  const Polynomial c = content_in(p, k);
  auto q = divide_exact(p, c);
  return q->monic();
}

Polynomial primitive_gcd(Polynomial a, Polynomial b, const Expr& k) {
  if (a.degree_in(k) < b.degree_in(k)) std::swap(a, b);
  while (true) {
    Polynomial r = pseudo_remainder(a, b, k);
    if (r.is_zero()) return b.monic();
    if (r.degree_in(k) == 0) return Polynomial::constant(1);
    a = std::move(b);
    b = primitive_part_in(r, k);
  }
}

}  // namespace

Polynomial content_in(const Polynomial& p, const Expr& k) {
  if (p.degree_in(k) == 0) return p.monic();
  std::vector<Polynomial> cs;
  for (auto& [d, c] : p.coefficients_in(k)) {
    if (c.is_constant()) return Polynomial::constant(1);
    cs.push_back(std::move(c));
  }
  std::sort(cs.begin(), cs.end(), [](const Polynomial& a, const Polynomial& b) {
    return a.terms().size() < b.terms().size();
  });
  Polynomial g;
  for (const auto& c : cs) {
    g = gcd(g, c);
    if (g.is_constant() && !g.is_zero()) break;
  }
  return g;
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial::constant(1);
  if (a.monic() == b.monic()) return a.monic();
  if (b.terms().size() <= a.terms().size()) {
    if (divide_exact(a, b)) return b.monic();
  } else if (divide_exact(b, a)) {
    return a.monic();
  }
  if (a.terms().size() == 1 && b.terms().size() == 1) {
    Monomial g;
    const auto& fa = a.leading().first.factors;
    for (const auto& [k, e] : b.leading().first.factors) {
      for (const auto& [ka, ea] : fa) {
        if (ka == k) g.factors.emplace_back(k, std::min(e, ea));
      }
    }
    return Polynomial::term(1, g);
  }
  std::set<Expr> ks;
  for (const auto& k : a.kernels()) ks.insert(k);
  for (const auto& k : b.kernels()) ks.insert(k);
  const Expr k = *ks.begin();
  const bool in_a = a.degree_in(k) > 0;
  const bool in_b = b.degree_in(k) > 0;
  if (!in_a) return gcd(a, content_in(b, k));
  if (!in_b) return gcd(content_in(a, k), b);
  const Polynomial ca = content_in(a, k);
  const Polynomial cb = content_in(b, k);
  const Polynomial pa = *divide_exact(a, ca);
  const Polynomial pb = *divide_exact(b, cb);
  const Polynomial c = gcd(ca, cb);
  return (c * primitive_gcd(pa, pb, k)).monic();
}

// ------------------------------------------------------------ trig rewrite

Polynomial reduce_trig(const Polynomial& p) {
  bool needed = false;
  for (const auto& [m, c] : p.terms()) {
    for (const auto& [k, e] : m.factors) {
      if (e >= 2 && k.kind() == Expr::Kind::Apply && k.func() == Func::Cos)
        needed = true;
    }
  }
  if (!needed) return p;
  Polynomial out;
  for (const auto& [m, c] : p.terms()) {
    Monomial rest;
    Polynomial factor = Polynomial::constant(c);
    for (const auto& [k, e] : m.factors) {
      if (e >= 2 && k.kind() == Expr::Kind::Apply && k.func() == Func::Cos) {
        if (e % 2 == 1) rest.factors.emplace_back(k, 1);
        const Expr s = Expr::apply(Func::Sin, k.children()[0]);
        const Polynomial one_minus_sin2 =
            Polynomial::constant(1) - Polynomial::kernel(s, 2);
        factor = factor * one_minus_sin2.pow(static_cast<unsigned>(e / 2));
      } else {
        rest.factors.emplace_back(k, e);
      }
    }
    // `rest` keeps ascending kernel order because it is a subsequence.
    out += factor.times(rest);
  }
  return out;
}

// ------------------------------------------------------------- square root

namespace {

std::optional<Rational> rational_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  if (mpz_perfect_square_p(r.get_num_mpz_t()) == 0 ||
      mpz_perfect_square_p(r.get_den_mpz_t()) == 0)
    return std::nullopt;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), r.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), r.get_den_mpz_t());
  return Rational(n, d);
}

std::optional<Monomial> monomial_sqrt(const Monomial& m) {
  Monomial out;
  for (const auto& [k, e] : m.factors) {
    if (e % 2 != 0) return std::nullopt;
    out.factors.emplace_back(k, e / 2);
  }
  return out;
}

}  // namespace

std::optional<Polynomial> sqrt_exact(const Polynomial& p) {
  if (p.is_zero()) return p;
  const auto& [lm, lc] = p.leading();
  auto c = rational_sqrt(lc);
  auto m = monomial_sqrt(lm);
  if (!c || !m) return std::nullopt;
  Polynomial s = Polynomial::term(*c, *m);
  const Rational two_lead = 2 * *c;
  const std::size_t limit = p.terms().size() + 2;
  for (std::size_t it = 0; it < limit * limit; ++it) {
    const Polynomial r = p - s * s;
    if (r.is_zero()) return s;
    const auto& [rm, rc] = r.leading();
    auto q = divide(rm, *m);
    if (!q) return std::nullopt;
    // New terms must stay below the leading term of the root.
    if (lex_compare(*q, *m) >= 0) return std::nullopt;
    s.add_term(Rational(rc / two_lead), *q);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- RatFunc

RatFunc::RatFunc(Polynomial num)
    : num_(std::move(num)), den_(Polynomial::constant(1)) {
  num_ = reduce_trig(num_);
}

RatFunc::RatFunc(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

void RatFunc::normalize() {
  if (den_.is_zero()) throw DivisionByZero("division by zero");
  if (num_.is_zero()) {
    den_ = Polynomial::constant(1);
    return;
  }
  num_ = reduce_trig(num_);
  den_ = reduce_trig(den_);
  if (den_.is_constant()) {
    num_ = num_.scaled(Rational(1 / den_.constant_value()));
    den_ = Polynomial::constant(1);
    return;
  }
  const Polynomial g = gcd(num_, den_);
  if (!g.is_constant()) {
    num_ = *divide_exact(num_, g);
    den_ = *divide_exact(den_, g);
  }
  const Rational lead = den_.leading().second;
  if (lead != 1) {
    num_ = num_.scaled(Rational(1 / lead));
    den_ = den_.scaled(Rational(1 / lead));
  }
  if (den_.is_constant()) {
    num_ = num_.scaled(Rational(1 / den_.constant_value()));
    den_ = Polynomial::constant(1);
  }
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) {
    if (a.is_polynomial()) return RatFunc(a.num_ + b.num_);
    return RatFunc(a.num_ + b.num_, a.den_);
  }
  return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a) {
  RatFunc out = a;
  out.num_ = -a.num_;
  return out;
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_polynomial() && b.is_polynomial()) return RatFunc(a.num_ * b.num_);
  return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw DivisionByZero("division by zero");
  return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

RatFunc RatFunc::pow(long exponent) const {
  if (exponent == 0) return RatFunc(Polynomial::constant(1));
  if (exponent < 0) {
    if (is_zero()) throw DivisionByZero("0 raised to a negative power");
    const auto e = static_cast<unsigned>(-exponent);
    return RatFunc(den_.pow(e), num_.pow(e));
  }
  const auto e = static_cast<unsigned>(exponent);
  if (is_polynomial()) return RatFunc(num_.pow(e));
  return RatFunc(num_.pow(e), den_.pow(e));
}

Expr RatFunc::to_expr() const {
  if (den_.is_constant()) return num_.to_expr();
  return Expr::quotient(num_.to_expr(), den_.to_expr());
}

// ------------------------------------------------- canonical conversion

namespace {

RatFunc kernel_rf(const Expr& k) { return RatFunc(Polynomial::kernel(k)); }

/// The single kernel `f(w)` when `a` is exactly that kernel.
std::optional<Expr> as_single_kernel(const RatFunc& a, Func f) {
  if (!a.is_polynomial() || a.num().terms().size() != 1) return std::nullopt;
  const auto& [m, c] = a.num().leading();
  if (c != 1 || m.factors.size() != 1 || m.factors[0].second != 1)
    return std::nullopt;
  const Expr& k = m.factors[0].first;
  if (k.kind() != Expr::Kind::Apply || k.func() != f) return std::nullopt;
  return k.children()[0];
}

bool negative_leading(const RatFunc& a) {
  return !a.is_zero() && a.num().leading().second < 0;
}

RatFunc apply_function(Func f, const RatFunc& a) {
  switch (f) {
    case Func::Sin:
      if (a.is_zero()) return {};
      if (negative_leading(a))
        return -kernel_rf(Expr::apply(Func::Sin, (-a).to_expr()));
      return kernel_rf(Expr::apply(Func::Sin, a.to_expr()));
    case Func::Cos:
      if (a.is_zero()) return RatFunc(Polynomial::constant(1));
      if (negative_leading(a))
        return kernel_rf(Expr::apply(Func::Cos, (-a).to_expr()));
      return kernel_rf(Expr::apply(Func::Cos, a.to_expr()));
    case Func::Exp: {
      if (a.is_zero()) return RatFunc(Polynomial::constant(1));
      if (auto w = as_single_kernel(a, Func::Log)) return to_ratfunc(*w);
      if (!a.is_polynomial())
        return kernel_rf(Expr::apply(Func::Exp, a.to_expr()));
      RatFunc out(Polynomial::constant(1));
      for (const auto& [m, c] : a.num().terms()) {
        if (c.get_den() == 1) {
          const Expr base =
              m.is_one() ? Expr(1L) : Polynomial::term(1, m).to_expr();
          out = out * kernel_rf(Expr::apply(Func::Exp, base))
                          .pow(c.get_num().get_si());
        } else {
          out = out * kernel_rf(Expr::apply(
                          Func::Exp, Polynomial::term(c, m).to_expr()));
        }
      }
      return out;
    }
    case Func::Log:
      if (a.is_polynomial() && a.num().is_constant() &&
          a.num().constant_value() == 1)
        return {};
      if (auto w = as_single_kernel(a, Func::Exp)) return to_ratfunc(*w);
      return kernel_rf(Expr::apply(Func::Log, a.to_expr()));
  }
  throw StructuralError("unknown function node");
}

}  // namespace

RatFunc to_ratfunc(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Const:
      return RatFunc(Polynomial::constant(e.value()));
    case Expr::Kind::Var:
      return kernel_rf(e);
    case Expr::Kind::Sum: {
      // Accumulate polynomial parts without touching gcd machinery.
      Polynomial poly;
      RatFunc rest;
      for (const auto& c : e.children()) {
        RatFunc r = to_ratfunc(c);
        if (r.is_polynomial()) {
          poly += r.num();
        } else {
          rest = rest + r;
        }
      }
      return RatFunc(std::move(poly)) + rest;
    }
    case Expr::Kind::Product: {
      RatFunc out(Polynomial::constant(1));
      for (const auto& c : e.children()) out = out * to_ratfunc(c);
      return out;
    }
    case Expr::Kind::Quotient:
      return to_ratfunc(e.children()[0]) / to_ratfunc(e.children()[1]);
    case Expr::Kind::Power:
      return to_ratfunc(e.children()[0]).pow(e.exponent());
    case Expr::Kind::Apply:
      return apply_function(e.func(), to_ratfunc(e.children()[0]));
  }
  throw StructuralError("unknown node kind");
}

// ------------------------------------------------------------- derivative

namespace {

bool kernel_depends_on(const Expr& k, std::string_view var) {
  if (k.kind() == Expr::Kind::Var) return k.name() == var;
  return depends_on(k, var);
}

RatFunc kernel_derivative(const Expr& k, std::string_view var) {
  if (k.kind() == Expr::Kind::Var)
    return RatFunc(Polynomial::constant(k.name() == var ? 1 : 0));
  if (k.kind() != Expr::Kind::Apply)
    throw StructuralError("non-kernel node in polynomial");
  const Expr& u = k.children()[0];
  const RatFunc du = derivative(to_ratfunc(u), var);
  if (du.is_zero()) return {};
  switch (k.func()) {
    case Func::Sin:
      return to_ratfunc(cos(u)) * du;
    case Func::Cos:
      return -(to_ratfunc(sin(u)) * du);
    case Func::Exp:
      return kernel_rf(k) * du;
    case Func::Log:
      return du / to_ratfunc(u);
  }
  throw StructuralError("unknown function node");
}

}  // namespace

RatFunc derivative(const Polynomial& p, std::string_view var) {
  std::map<Expr, RatFunc> kernel_cache;
  Polynomial poly_part;
  RatFunc rational_part;
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t i = 0; i < m.factors.size(); ++i) {
      const auto& [k, e] = m.factors[i];
      if (!kernel_depends_on(k, var)) continue;
      auto it = kernel_cache.find(k);
      if (it == kernel_cache.end())
        it = kernel_cache.emplace(k, kernel_derivative(k, var)).first;
      const RatFunc& dk = it->second;
      if (dk.is_zero()) continue;
      Monomial rest = m;
      if (e == 1) {
        rest.factors.erase(rest.factors.begin() + static_cast<long>(i));
      } else {
        rest.factors[i].second = e - 1;
      }
      const Polynomial t = Polynomial::term(Rational(c * e), rest);
      if (dk.is_polynomial()) {
        poly_part += t * dk.num();
      } else {
        rational_part = rational_part + RatFunc(t) * dk;
      }
    }
  }
  return RatFunc(std::move(poly_part)) + rational_part;
}

RatFunc derivative(const RatFunc& f, std::string_view var) {
  if (f.is_polynomial()) return derivative(f.num(), var);
  const RatFunc dn = derivative(f.num(), var);
  const RatFunc dd = derivative(f.den(), var);
  if (dn.is_zero() && dd.is_zero()) return {};
  const RatFunc num = dn * RatFunc(f.den()) - RatFunc(f.num()) * dd;
  return num / RatFunc(f.den().pow(2));
}

}  // namespace formcalc::alg
