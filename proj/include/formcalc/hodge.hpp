#pragma once

// Metric duality on forms.
//
// Sign conventions (fixed once for the whole library):
//   *(dx^I) = sqrt|g| * sum_J det(g^{I,J}) * sgn(J, J^c) dx^{J^c}
// where g^{I,J} is the p x p block of the inverse metric and sgn(J, J^c) the
// sign of the permutation listing J followed by its complement. Hence
// ** = (-1)^{p(n-p)} * sign(det g).
//
//   delta = (-1)^{n(q+1)} * sign(det g) * (* d *)   on q-forms, q >= 1.
//
// With this choice delta(f dx^i) is the divergence in Euclidean space, and
// the standard Laplacian d delta + delta d acts on functions as the sum of
// second derivatives, so it is +4 on x1^2 + x2^2.

#include <utility>

#include "formcalc/forms.hpp"
#include "formcalc/manifold.hpp"

namespace formcalc {

/// Degree p -> n - p. Throws MissingMetric.
Form star(const Manifold& m, const Form& theta);

/// Degree q -> q - 1 for q >= 1. Throws MissingMetric, InvalidArgument on
/// 0-forms.
Form codifferential(const Manifold& m, const Form& theta);

enum class LaplacianVariant { Standard, Difference };

/// Standard: d delta + delta d. Difference: d delta - delta d.
Form laplacian(const Manifold& m, const Form& theta,
               LaplacianVariant variant = LaplacianVariant::Standard);

struct LaplacianPair {
  Form standard;
  Form difference;
};
LaplacianPair laplacian_both(const Manifold& m, const Form& theta);

}  // namespace formcalc
