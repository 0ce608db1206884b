#pragma once

// Twisting actions and functors by a unitary 2-cocycle on U(G) (x) U(G).
//
// For the dual of a finite group the cocycle is a function on pairs of group
// elements; for a finite group it is an element of the tensor square of the
// group algebra. Both are stored on the basis pairs of U(G) (x) U(G).

#include <cstdint>
#include <memory>

#include "qdual/spectral.hpp"

namespace qdual {

struct CocycleData {
  BackendKind kind = BackendKind::DualGroup;
  CVec values;    // counital normalization of the input
  CVec original;  // as loaded
  cplx phase = 1.0;  // values = original / phase

  /// Normalizes by (eps (x) eps)(omega); throws ConfigurationError if omega is not invertible.
  static CocycleData from_values(const Backend& be, const CVec& omega);
  static CocycleData trivial(const Backend& be);
  /// exp(2 pi i a_2 b_1 / n) on Z_n x Z_n for the dual backend.
  static CocycleData bicharacter(const Backend& be, int n);
};

/// Unitarity, the cocycle identity (worst triple in the detail) and counitality.
Report check_cocycle(const Backend& be, const CocycleData& omega, const Tolerance& tol = {});

struct UElement {
  CVec value;
  CVec inverse;  // S(u^*)
  Report report;
};

/// u = m(1 (x) S)(omega), with u^{-1} = m(S (x) 1)(omega^*) = S(u^*) and
/// omega R_U = (u (x) 1) R_U checked on every irreducible.
UElement u_element(const Backend& be, const CocycleData& omega, const Tolerance& tol = {});

/// B with x * y = m((x (x) y) |> omega) and x^dagger = x^* |> u^*.
class DeformedAlgebra {
 public:
  DeformedAlgebra(ActionData act, const CocycleData& omega, const Tolerance& tol = {});

  const ActionData& action() const { return act_; }
  const std::shared_ptr<const Backend>& twisted_backend() const { return twisted_; }
  const CVec& u() const { return u_; }
  int dim() const { return act_.algebra.dim(); }

  CVec multiply(const CVec& x, const CVec& y) const;
  CVec star(const CVec& x) const;
  CVec unit() const { return act_.algebra.unit(); }
  CMat left_mult(const CVec& x) const;
  CVec act(const CVec& x, const CVec& omega) const { return act_.act(x, omega); }

 private:
  ActionData act_;
  CVec omega_, u_;
  std::shared_ptr<const Backend> twisted_;
};

struct DeformResult {
  std::shared_ptr<DeformedAlgebra> algebra;
  Report report;
};

/// Twists the action and checks the *-algebra axioms, the algebraic action of
/// the twisted dual and that the fixed point algebra is untouched.
DeformResult deform_action(const ActionData& act, const CocycleData& omega, const Tolerance& tol = {},
                           std::uint64_t seed = 0, int samples = 20);

/// Dimension of the center of the deformed algebra.
int center_dimension(const DeformedAlgebra& b, const Tolerance& tol = {});

/// F composed with the twisting equivalence: same modules over the twisted
/// backend, phi re-expanded on the twisted fusion isometries through omega^*.
FunctorData deform_functor(const FunctorData& f, const CocycleData& omega, const Tolerance& tol = {});

/// build(deform_functor(F, omega)) against deform_action(B_F, omega).
Report deform_cross_test(const FunctorData& f, const CocycleData& omega, const Tolerance& tol = {},
                         std::uint64_t seed = 0, int samples = 20);

}  // namespace qdual
