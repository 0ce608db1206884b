#pragma once

// Representation categories of finite quantum groups: finite groups and duals
// of finite groups. Everything is phrased through the dual Hopf *-algebra
// U(G) = C[G]^*, which for both backends has a distinguished basis indexed by
// the group: group elements for a finite group G, point masses delta_g for the
// dual of a finite group. A representation is a *-representation of U(G),
// stored as one matrix per basis element.

#include <optional>
#include <string>
#include <vector>

#include "qdual/linalg.hpp"

namespace qdual {

struct GroupPresentation {
  std::vector<std::string> elements;
  std::vector<std::vector<int>> mul;  // mul[a][b] = index of a*b
  int identity = 0;
  std::vector<int> inverse;

  /// Builds the presentation, derives inverses and checks the group axioms.
  static GroupPresentation from_table(std::vector<std::string> elements,
                                      std::vector<std::vector<int>> mul, int identity);

  int size() const { return static_cast<int>(elements.size()); }
  int index_of(const std::string& label) const;
  void validate() const;
};

GroupPresentation cyclic_group(int n);
GroupPresentation product_group(const GroupPresentation& a, const GroupPresentation& b);
GroupPresentation symmetric_group_3();

enum class BackendKind { FiniteGroup, DualGroup };

/// U(G) with structure constants on the distinguished basis. Elements of the
/// k-th tensor power are dense vectors of length dim^k (row-major in the
/// tensor factors).
struct HopfAlgebra {
  int dim = 0;
  std::vector<std::vector<int>> prod;  // basis product, -1 for zero
  std::vector<int> star;               // basis involution (a permutation)
  CVec unit;
  CVec counit;
  CMat coproduct;  // dim^2 x dim, column b holds Delta(b)
  CMat antipode;   // dim x dim, column b holds S(b)
  CVec integral;   // normalized two-sided integral, counit(integral) = 1

  CVec multiply(const CVec& x, const CVec& y) const;
  CVec multiply_tensor(const CVec& x, const CVec& y, int factors) const;
  CVec adjoint(const CVec& x) const;
  CVec adjoint_tensor(const CVec& x, int factors) const;
  CVec basis(int b) const;
  CVec one_tensor(int factors) const;
  /// Applies Delta to one tensor leg of an element of the k-th power.
  CVec coproduct_on_leg(const CVec& x, int factors, int leg) const;
};

HopfAlgebra group_algebra(const GroupPresentation& g);
HopfAlgebra function_algebra(const GroupPresentation& g);

struct Rep {
  std::vector<CMat> pi;  // one matrix per basis element of U(G)
  int dim() const { return pi.empty() ? 0 : static_cast<int>(pi.front().rows()); }
};

struct Irrep {
  std::string label;
  int dim = 1;
  Rep rep;
  CMat rho;   // positive operator pi_U(rho)
  int conj = -1;
  CMat J;     // unitary identifying the conjugate space with the representative of conj
};

/// An isometry w in Mor(U_label, U).
struct Part {
  int label = 0;
  CMat w;
};

struct ConjugateSolution {
  CVec r;     // R : C -> H_conj (x) H_alpha
  CVec rbar;  // Rbar : C -> H_alpha (x) H_conj
};

struct IntertwinerBasis {
  int source_dim = 0;
  int target_dim = 0;
  std::vector<CMat> basis;  // orthonormal for Tr(S^* T)
  std::size_t size() const { return basis.size(); }
};

class Backend {
 public:
  static Backend finite_group(GroupPresentation group, std::vector<Irrep> irreps,
                              const Tolerance& tol = {});
  static Backend dual_group(GroupPresentation group, const Tolerance& tol = {});
  /// Same irreducibles and U(G) algebra; tensor products conjugated by the
  /// unitary 2-cocycle `omega` (coefficients on basis pairs of U(G)(x)U(G)).
  static Backend twisted(const Backend& base, const CVec& omega, const Tolerance& tol = {});

  BackendKind kind() const { return kind_; }
  const GroupPresentation& group() const { return group_; }
  const HopfAlgebra& hopf() const { return hopf_; }
  const std::vector<Irrep>& irreps() const { return irreps_; }
  int num_irreps() const { return static_cast<int>(irreps_.size()); }
  int trivial() const { return trivial_; }
  int irrep_index(const std::string& label) const;
  const Irrep& irrep(int a) const { return irreps_.at(static_cast<std::size_t>(a)); }
  bool is_twisted() const { return twist_.has_value(); }
  const std::optional<CVec>& twist() const { return twist_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  /// Coproduct used for tensor products (twisted when a cocycle is present).
  const CMat& coproduct() const { return coproduct_; }
  /// Antipode of the (possibly twisted) dual: u S(.) u^{-1} when twisted.
  const CMat& antipode() const { return antipode_; }

  const Rep& rep(int a) const { return irreps_.at(static_cast<std::size_t>(a)).rep; }
  Rep tensor(const Rep& u, const Rep& v) const;
  Rep trivial_rep() const { return rep(trivial_); }
  /// pi_U(x) for an element x of U(G).
  CMat evaluate(const Rep& u, const CVec& x) const;
  /// (pi_U (x) pi_V)(x) for x in U(G)(x)U(G).
  CMat evaluate2(const Rep& u, const Rep& v, const CVec& x) const;
  /// Conjugate representation realized on the conjugate space of H_alpha.
  Rep conjugate_space_rep(int a) const;

  /// Fusion isometries of U_alpha x U_beta in canonical order.
  const std::vector<Part>& fusion(int a, int b) const;
  /// Isometries w in Mor(U_gamma, U_alpha x U_beta); intertwiner_index k of
  /// the functor data refers to fusion_for(a,b,c)[k].
  std::vector<CMat> fusion_for(int a, int b, int c) const;

  const ConjugateSolution& conjugate(int a) const { return conj_.at(static_cast<std::size_t>(a)); }

  const Tolerance& tolerance() const { return tol_; }

 private:
  void finalize();

  BackendKind kind_ = BackendKind::FiniteGroup;
  GroupPresentation group_;
  HopfAlgebra hopf_;
  std::vector<Irrep> irreps_;
  int trivial_ = 0;
  std::optional<CVec> twist_;
  CMat coproduct_;
  CMat antipode_;
  std::vector<std::vector<std::vector<Part>>> fusion_;
  std::vector<ConjugateSolution> conj_;
  Tolerance tol_;
  std::string name_;
};

/// Built-in backends: "S3", "Zn", "ZnxZm" for finite groups and the same
/// names prefixed by "dual:" for their duals.
Backend builtin_backend(const std::string& name, const Tolerance& tol = {});

// Operations.

/// Projection of `seed` (dim V x dim U) onto Mor(U, V) by Haar averaging.
CMat haar_average(const Backend& be, const Rep& u, const Rep& v, const CMat& seed);

/// Orthonormal basis (trace inner product) of Mor(U, V).
IntertwinerBasis mor_space(const Backend& be, const Rep& u, const Rep& v);

/// Isometries w_i in Mor(U_{alpha_i}, U) with sum w_i w_i^* = 1.
std::vector<Part> decompose(const Backend& be, const Rep& u);

/// Standard solution of the conjugate equations built from rho.
ConjugateSolution conjugate_solution(const Backend& be, int a);

/// Standalone standard solution for given rho and conjugate identification J.
ConjugateSolution standard_solution(const CMat& rho, const CMat& J);

double quantum_dim(const Backend& be, int a);
double quantum_dim(const Irrep& irrep);

/// Residuals of the two conjugate equations.
struct ConjugateResiduals {
  double first = 0.0;   // (Rbar^* (x) 1)(1 (x) R) - 1 on H_alpha
  double second = 0.0;  // (R^* (x) 1)(1 (x) Rbar) - 1 on H_conj
  double norm_r = 0.0;  // | ||R||^2 - dim_q |
  double norm_rbar = 0.0;
};
ConjugateResiduals conjugate_residuals(const ConjugateSolution& s, int dim_alpha, int dim_conj,
                                       double dim_q);

/// Frobenius reciprocity for an irreducible U_alpha:
/// T in Mor(B (x) U, B (x) V) maps to (T (x) 1)(1 (x) Rbar) in Mor(B, B (x) V (x) conj U).
CMat frobenius(const Backend& be, int alpha, const CMat& t, int dim_b, int dim_v);
/// Inverse: S maps to (1 (x) 1 (x) R^*)(S (x) 1).
CMat frobenius_inverse(const Backend& be, int alpha, const CMat& s, int dim_b, int dim_v);

/// dim Mor(U, V) from characters alone: the trace of the Haar projection,
/// sum over Delta(integral) of Tr pi_V(a) Tr pi_U(S a').
double character_pairing(const Backend& be, const Rep& u, const Rep& v);

/// Row-major flattening of a matrix into a vector of H_rows (x) H_cols.
CVec flatten_rowmajor(const CMat& m);
CMat unflatten_rowmajor(const CVec& v, Eigen::Index rows, Eigen::Index cols);

}  // namespace qdual
