#include "formcalc/forms.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "formcalc/error.hpp"

namespace formcalc {

MultiIndex::MultiIndex(std::vector<int> indices) : idx_(std::move(indices)) {
  for (std::size_t i = 0; i < idx_.size(); ++i) {
    if (idx_[i] < 0 || (i > 0 && idx_[i] <= idx_[i - 1]))
      throw InvalidArgument("multi-index must be strictly increasing");
  }
}

bool MultiIndex::contains(int i) const {
  return std::binary_search(idx_.begin(), idx_.end(), i);
}

std::pair<int, MultiIndex> canonical_index(std::vector<int> indices) {
  int sign = 1;
  // Insertion sort counting transpositions; degrees are tiny.
  for (std::size_t i = 1; i < indices.size(); ++i) {
    for (std::size_t j = i; j > 0 && indices[j - 1] >= indices[j]; --j) {
      if (indices[j - 1] == indices[j]) return {0, MultiIndex{}};
      std::swap(indices[j - 1], indices[j]);
      sign = -sign;
    }
  }
  return {sign, MultiIndex(std::move(indices))};
}

Coords default_coords(int n, const std::string& prefix) {
  Coords c;
  c.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) c.push_back(prefix + std::to_string(i));
  return c;
}

Form::Form(Coords coords, int degree)
    : coords_(std::move(coords)), degree_(degree) {
  if (degree < 0) throw InvalidArgument("negative form degree");
}

Form Form::from_terms(Coords coords, int degree, std::vector<RawTerm> terms) {
  Form f(std::move(coords), degree);
  std::map<MultiIndex, std::vector<Expr>> acc;
  for (auto& [idx, c] : terms) {
    if (static_cast<int>(idx.size()) != degree)
      throw DegreeMismatch("term degree differs from form degree");
    for (int i : idx) {
      if (i < 0 || i >= f.dim())
        throw DimensionMismatch("basis index outside coordinate space");
    }
    auto [sign, mi] = canonical_index(std::move(idx));
    if (sign == 0 || c.is_literal_zero()) continue;
    acc[std::move(mi)].push_back(sign > 0 ? c : -c);
  }
  for (auto& [mi, parts] : acc) {
    Expr c = simplify(parts.size() == 1 ? parts.front()
                                        : Expr::sum(std::move(parts)));
    if (!c.is_literal_zero()) f.terms_.emplace(mi, std::move(c));
  }
  return f;
}

Form Form::scalar(Coords coords, const Expr& f) {
  return from_terms(std::move(coords), 0, {{{}, f}});
}

Form Form::basis(Coords coords, std::vector<int> indices,
                 const Expr& coefficient) {
  const int p = static_cast<int>(indices.size());
  return from_terms(std::move(coords), p, {{std::move(indices), coefficient}});
}

Expr Form::coefficient(const MultiIndex& index) const {
  auto it = terms_.find(index);
  return it == terms_.end() ? Expr() : it->second;
}

Form Form::map_coefficients(const std::function<Expr(const Expr&)>& f) const {
  std::vector<RawTerm> raw;
  raw.reserve(terms_.size());
  for (const auto& [mi, c] : terms_) {
    raw.emplace_back(std::vector<int>(mi.indices().begin(), mi.indices().end()),
                     f(c));
  }
  return from_terms(coords_, degree_, std::move(raw));
}

namespace {

void print_basis(std::ostream& os, const Coords& coords,
                 std::span<const int> idx) {
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k > 0) os << '^';
    os << 'd' << coords[static_cast<std::size_t>(idx[k])];
  }
}

}  // namespace

std::string Form::str() const {
  std::ostringstream os;
  if (terms_.empty()) {
    os << "(0)";
    if (degree_ > 0 && !coords_.empty()) {
      std::vector<int> idx;
      for (int k = 0; k < degree_; ++k)
        idx.push_back(degree_ <= dim() ? k : 0);
      os << ' ';
      print_basis(os, coords_, idx);
    }
    return os.str();
  }
  bool first = true;
  for (const auto& [mi, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << '(' << c << ')';
    if (mi.size() > 0) {
      os << ' ';
      print_basis(os, coords_, mi.indices());
    }
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Form& f) {
  return os << f.str();
}

bool operator==(const Form& a, const Form& b) {
  return a.coords_ == b.coords_ && a.degree_ == b.degree_ &&
         a.terms_ == b.terms_;
}

void require_same_space(const Form& a, const Form& b) {
  if (a.coords() != b.coords())
    throw DimensionMismatch("forms live on different coordinate spaces");
}

Form wedge(const Form& a, const Form& b) {
  require_same_space(a, b);
  const int p = a.degree() + b.degree();
  if (p > a.dim()) return Form(a.coords(), p);
  std::vector<Form::RawTerm> raw;
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      std::vector<int> idx(ia.indices().begin(), ia.indices().end());
      idx.insert(idx.end(), ib.indices().begin(), ib.indices().end());
      raw.emplace_back(std::move(idx), ca * cb);
    }
  }
  return Form::from_terms(a.coords(), p, std::move(raw));
}

Form add(const Form& a, const Form& b) {
  require_same_space(a, b);
  if (a.degree() != b.degree())
    throw DegreeMismatch("cannot add forms of different degree");
  std::vector<Form::RawTerm> raw;
  for (const auto* f : {&a, &b}) {
    for (const auto& [mi, c] : f->terms()) {
      raw.emplace_back(std::vector<int>(mi.indices().begin(), mi.indices().end()),
                       c);
    }
  }
  return Form::from_terms(a.coords(), a.degree(), std::move(raw));
}

Form negate(const Form& a) {
  return a.map_coefficients([](const Expr& c) { return -c; });
}

Form subtract(const Form& a, const Form& b) { return add(a, negate(b)); }

Form scale(const Form& a, const Expr& c) {
  return a.map_coefficients([&](const Expr& x) { return c * x; });
}

Form d_flat(const Form& a) {
  const int n = a.dim();
  const int p = a.degree() + 1;
  if (p > n) return Form(a.coords(), p);
  std::vector<Form::RawTerm> raw;
  for (const auto& [mi, c] : a.terms()) {
    for (int j = 0; j < n; ++j) {
      if (mi.contains(j)) continue;
      Expr dc = differentiate(c, a.coords()[static_cast<std::size_t>(j)]);
      if (dc.is_literal_zero()) continue;
      std::vector<int> idx{j};
      idx.insert(idx.end(), mi.indices().begin(), mi.indices().end());
      raw.emplace_back(std::move(idx), std::move(dc));
    }
  }
  return Form::from_terms(a.coords(), p, std::move(raw));
}

ZeroTest is_zero_form(const Form& a, const ProbeOptions& options) {
  ZeroTest z = ZeroTest::Zero;
  for (const auto& [mi, c] : a.terms()) {
    z = combine(z, is_zero(c, options));
    if (z == ZeroTest::NonZero) break;
  }
  return z;
}

ZeroTest is_closed_flat(const Form& a, const ProbeOptions& options) {
  return is_zero_form(d_flat(a), options);
}

}  // namespace formcalc
