#pragma once

// Weak unitary tensor functors Rep G -> Hilb A given by their values on
// irreducibles: correspondences M_alpha and bimodule maps
// phi(T) : M_alpha (x) M_beta -> M_gamma for T in Mor(U_alpha x U_beta, U_gamma).

#include <map>
#include <memory>
#include <tuple>

#include "qdual/hilbmod.hpp"
#include "qdual/qcat.hpp"
#include "qdual/report.hpp"

namespace qdual {

struct FunctorData {
  std::shared_ptr<const Backend> backend;
  FdCStarAlgebra base;
  std::vector<Correspondence> modules;  // indexed by irrep index
  /// phi[(a, b, c)][k] is phi(w_k^*) for w_k = backend->fusion_for(a, b, c)[k],
  /// a dim M_c x (dim M_a * dim M_b) matrix on the vector-space tensor product.
  std::map<std::tuple<int, int, int>, std::vector<CMat>> phi;

  const Correspondence& module(int a) const { return modules.at(static_cast<std::size_t>(a)); }
  /// Throws IncompleteDataError when a needed tensor is missing.
  CMat phi_basis(int a, int b, int c, int k) const;
  /// phi(T) for an arbitrary T in Mor(U_a x U_b, U_c).
  CMat phi_of(int a, int b, int c, const CMat& t) const;
};

/// A representation together with its decomposition; F(X) = sum of M_label.
struct FObject {
  Rep rep;
  std::vector<Part> parts;
  std::vector<int> offsets;
  int dim = 0;  // dimension of F(X)
};

FObject functor_object(const FunctorData& f, const Rep& u);
FObject irreducible_object(const FunctorData& f, int a);

Correspondence functor_module(const FunctorData& f, const FObject& x);
/// F(T) for T in Mor(X, Y) (dim Y x dim X matrix on the Hilbert spaces).
CMat functor_morphism(const FunctorData& f, const FObject& x, const FObject& y, const CMat& t);
/// F_2 : F(X) (x) F(Y) -> F(Z) where Z is an object for the representation X x Y.
CMat functor_tensor(const FunctorData& f, const FObject& x, const FObject& y, const FObject& z);

/// S_X : F(V) -> F(U x V), Y -> F_2(X (x) Y), for X in F(U).
CMat tensor_left_map(const FunctorData& f, const FObject& u, const FObject& v, const FObject& uv,
                     const CVec& x);

Report validate_wutf(const FunctorData& f, const Tolerance& tol = {});

/// X^bullet = S_X^* F(Rbar)(1) in M_conj(a); conjugate-linear in x.
CVec bullet(const FunctorData& f, int a, const CVec& x, const Tolerance& tol = {});
/// Matrix of x -> conj(bullet(x)) (bullet is conj-linear, so this is linear).
CMat bullet_matrix(const FunctorData& f, int a, const Tolerance& tol = {});
/// Both defining identities of the bullet and the double-bullet relation.
Report check_bullet(const FunctorData& f, int a, const Tolerance& tol = {});
/// The scalar u with Rbar_conj(a) = (1 (x) u) R_a, so that X^{bullet bullet} = u X.
cplx double_bullet_scalar(const Backend& be, int a);

struct GradedBundleData {
  GroupPresentation group;
  FdCStarAlgebra base;
  std::vector<Correspondence> fibers;  // indexed by group element
  std::map<std::pair<int, int>, CMat> mult;  // (a, b) -> M_a (x) M_b -> M_ab

  CMat mult_of(int a, int b) const;
};

Report validate_graded(const GradedBundleData& g, const Tolerance& tol = {});
FunctorData from_graded(const GradedBundleData& g, const Tolerance& tol = {});

}  // namespace qdual
