#pragma once

// Manifolds with a possibly non-symmetric connection, and the evolutionary
// differential whose extra term comes from the antisymmetric part of the
// connection (the commutator of the metric form).

#include <optional>
#include <vector>

#include "formcalc/forms.hpp"
#include "formcalc/metric.hpp"

namespace formcalc {

/// Connection coefficients Gamma^s_{b a}, stored so that the covariant
/// derivative of a 1-form reads a_{b;a} = d a_b / d x^a + Gamma^s_{b a} a_s.
class Connection {
 public:
  /// `entries[(s * n + b) * n + a]` is Gamma^s_{b a}.
  Connection(int n, std::vector<Expr> entries);
  static Connection zero(int n);

  int dim() const { return n_; }
  const Expr& operator()(int upper, int lower_first, int lower_second) const {
    return entries_[static_cast<std::size_t>((upper * n_ + lower_first) * n_ +
                                             lower_second)];
  }

 private:
  int n_;
  std::vector<Expr> entries_;
};

class Manifold {
 public:
  /// Throws InvalidArgument on duplicate coordinate names and
  /// DimensionMismatch when the connection or metric shape differs from n.
  explicit Manifold(Coords coords, std::optional<Connection> connection = {},
                    std::optional<Metric> metric = {});
  static Manifold flat(int n);
  static Manifold euclidean(int n);

  const Coords& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const std::optional<Connection>& connection() const { return connection_; }
  const std::optional<Metric>& metric() const { return metric_; }

  /// Throws DimensionMismatch unless `f` lives on this manifold's coordinates.
  void require_form(const Form& f) const;

 private:
  Coords coords_;
  std::optional<Connection> connection_;
  std::optional<Metric> metric_;
};

/// T^s_{a b} = Gamma^s_{b a} - Gamma^s_{a b}, antisymmetric in (a, b).
class TorsionTable {
 public:
  TorsionTable(int n, std::vector<Expr> entries);
  int dim() const { return n_; }
  const Expr& operator()(int sigma, int alpha, int beta) const {
    return entries_[static_cast<std::size_t>((sigma * n_ + alpha) * n_ + beta)];
  }

 private:
  int n_;
  std::vector<Expr> entries_;
};

/// Throws MissingConnection.
TorsionTable torsion_commutator(const Manifold& m);

/// Split of the evolutionary differential of a form into the part coming from
/// its coefficients and the part coming from the deforming basis.
struct CommutatorReport {
  Form total;
  Form coefficient_term;
  Form metric_term;
};

/// For a 1-form theta = a_s dx^s the components are
///   K_ab = (d a_b/d x^a - d a_a/d x^b) + (Gamma^s_{b a} - Gamma^s_{a b}) a_s
/// assembled as sum_{a<b} K_ab dx^a ^ dx^b. Other degrees use the slot-wise
/// basis differential of `d_evolutionary`. A manifold without connection is
/// treated as flat.
CommutatorReport commutator(const Manifold& m, const Form& theta);

/// d(dx^s) = sum_{a<b} T^s_{a b} dx^a ^ dx^b on the given manifold.
Form basis_differential(const Manifold& m, int sigma);

/// d_flat(theta) plus sum_I a_I d(dx^I), where d(dx^I) expands by the graded
/// Leibniz rule over the basis slots. Reduces to the 1-form commutator total
/// for p = 1 and to d_flat when the torsion vanishes.
Form d_evolutionary(const Manifold& m, const Form& theta);

/// True when some torsion component is not provably zero.
bool is_deforming(const Manifold& m, const ProbeOptions& options = {});

}  // namespace formcalc
