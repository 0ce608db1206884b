#include "qdual/qcat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qdual {

// ---------------------------------------------------------------------------
// Groups

GroupPresentation GroupPresentation::from_table(std::vector<std::string> elements,
                                                std::vector<std::vector<int>> mul, int identity) {
  GroupPresentation g;
  g.elements = std::move(elements);
  g.mul = std::move(mul);
  g.identity = identity;
  const int n = g.size();
  if (n == 0) throw TableError("group must be non-empty");
  if (static_cast<int>(g.mul.size()) != n) throw TableError("multiplication table has wrong size");
  for (const auto& row : g.mul)
    if (static_cast<int>(row.size()) != n) throw TableError("multiplication table is not square");
  if (identity < 0 || identity >= n) throw TableError("identity index out of range");
  g.inverse.assign(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.mul[a][b] == identity) g.inverse[a] = b;
  g.validate();
  return g;
}

int GroupPresentation::index_of(const std::string& label) const {
  auto it = std::find(elements.begin(), elements.end(), label);
  if (it == elements.end()) throw TableError("unknown group element: " + label);
  return static_cast<int>(it - elements.begin());
}

void GroupPresentation::validate() const {
  const int n = size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (mul[a][b] < 0 || mul[a][b] >= n) throw TableError("multiplication table not closed");
  for (int a = 0; a < n; ++a) {
    if (mul[identity][a] != a || mul[a][identity] != a)
      throw TableError("identity element is not neutral");
    if (inverse[a] < 0 || mul[inverse[a]][a] != identity)
      throw TableError("element " + elements[a] + " has no inverse");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mul[mul[a][b]][c] != mul[a][mul[b][c]])
          throw TableError("multiplication is not associative");
}

GroupPresentation cyclic_group(int n) {
  if (n < 1) throw ConfigurationError("cyclic group order must be positive");
  std::vector<std::string> el;
  std::vector<std::vector<int>> mul(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    el.push_back(std::to_string(a));
    for (int b = 0; b < n; ++b) mul[a][b] = (a + b) % n;
  }
  return GroupPresentation::from_table(el, mul, 0);
}

GroupPresentation product_group(const GroupPresentation& a, const GroupPresentation& b) {
  const int na = a.size(), nb = b.size();
  std::vector<std::string> el;
  std::vector<std::vector<int>> mul(na * nb, std::vector<int>(na * nb));
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) el.push_back("(" + a.elements[i] + "," + b.elements[j] + ")");
  for (int i = 0; i < na * nb; ++i)
    for (int j = 0; j < na * nb; ++j)
      mul[i][j] = a.mul[i / nb][j / nb] * nb + b.mul[i % nb][j % nb];
  return GroupPresentation::from_table(el, mul, a.identity * nb + b.identity);
}

namespace {

using Perm = std::array<int, 3>;

std::vector<Perm> s3_elements() {
  // identity, transpositions, 3-cycles
  return {Perm{0, 1, 2}, Perm{1, 0, 2}, Perm{0, 2, 1}, Perm{2, 1, 0}, Perm{1, 2, 0}, Perm{2, 0, 1}};
}

std::string perm_label(const Perm& p) {
  return std::to_string(p[0]) + std::to_string(p[1]) + std::to_string(p[2]);
}

int perm_sign(const Perm& p) {
  int inv = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

}  // namespace

GroupPresentation symmetric_group_3() {
  auto perms = s3_elements();
  std::vector<std::string> el;
  for (const auto& p : perms) el.push_back(perm_label(p));
  std::vector<std::vector<int>> mul(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      Perm c{};
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];  // (ab)(i) = a(b(i))
      mul[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return GroupPresentation::from_table(el, mul, 0);
}

// ---------------------------------------------------------------------------
// Hopf algebra U(G)

CVec HopfAlgebra::basis(int b) const {
  CVec v = CVec::Zero(dim);
  v(b) = 1.0;
  return v;
}

CVec HopfAlgebra::multiply(const CVec& x, const CVec& y) const { return multiply_tensor(x, y, 1); }

CVec HopfAlgebra::multiply_tensor(const CVec& x, const CVec& y, int factors) const {
  const Eigen::Index len = x.size();
  if (y.size() != len) throw DimensionError("multiply_tensor: size mismatch");
  CVec out = CVec::Zero(len);
  std::vector<Eigen::Index> ynz;
  for (Eigen::Index j = 0; j < len; ++j)
    if (y(j) != cplx(0.0)) ynz.push_back(j);
  for (Eigen::Index i = 0; i < len; ++i) {
    if (x(i) == cplx(0.0)) continue;
    for (Eigen::Index j : ynz) {
      Eigen::Index a = i, b = j, idx = 0, stride = 1;
      bool zero = false;
      for (int f = 0; f < factors; ++f) {
        int p = prod[a % dim][b % dim];
        if (p < 0) {
          zero = true;
          break;
        }
        idx += p * stride;
        stride *= dim;
        a /= dim;
        b /= dim;
      }
      if (!zero) out(idx) += x(i) * y(j);
    }
  }
  return out;
}

CVec HopfAlgebra::adjoint(const CVec& x) const { return adjoint_tensor(x, 1); }

CVec HopfAlgebra::adjoint_tensor(const CVec& x, int factors) const {
  CVec out = CVec::Zero(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) == cplx(0.0)) continue;
    Eigen::Index a = i, idx = 0, stride = 1;
    for (int f = 0; f < factors; ++f) {
      idx += star[a % dim] * stride;
      stride *= dim;
      a /= dim;
    }
    out(idx) += std::conj(x(i));
  }
  return out;
}

CVec HopfAlgebra::one_tensor(int factors) const {
  CVec out = unit;
  for (int f = 1; f < factors; ++f) out = linalg::kron(out, unit);
  return out;
}

CVec HopfAlgebra::coproduct_on_leg(const CVec& x, int factors, int leg) const {
  // Index layout: leg 0 is the most significant factor.
  Eigen::Index after = 1;
  for (int f = leg + 1; f < factors; ++f) after *= dim;
  CVec out = CVec::Zero(x.size() * dim);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) == cplx(0.0)) continue;
    Eigen::Index hi = i / (dim * after), mid = (i / after) % dim, lo = i % after;
    for (Eigen::Index c = 0; c < coproduct.rows(); ++c) {
      cplx v = coproduct(c, mid);
      if (v == cplx(0.0)) continue;
      out((hi * dim * dim + c) * after + lo) += x(i) * v;
    }
  }
  return out;
}

HopfAlgebra group_algebra(const GroupPresentation& g) {
  HopfAlgebra h;
  const int n = g.size();
  h.dim = n;
  h.prod = g.mul;
  h.star = g.inverse;
  h.unit = CVec::Zero(n);
  h.unit(g.identity) = 1.0;
  h.counit = CVec::Ones(n);
  h.coproduct = CMat::Zero(n * n, n);
  h.antipode = CMat::Zero(n, n);
  for (int b = 0; b < n; ++b) {
    h.coproduct(b * n + b, b) = 1.0;
    h.antipode(g.inverse[b], b) = 1.0;
  }
  h.integral = CVec::Constant(n, 1.0 / n);
  return h;
}

HopfAlgebra function_algebra(const GroupPresentation& g) {
  HopfAlgebra h;
  const int n = g.size();
  h.dim = n;
  h.prod.assign(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a) h.prod[a][a] = a;
  h.star.resize(n);
  for (int a = 0; a < n; ++a) h.star[a] = a;
  h.unit = CVec::Ones(n);
  h.counit = CVec::Zero(n);
  h.counit(g.identity) = 1.0;
  h.coproduct = CMat::Zero(n * n, n);
  h.antipode = CMat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) h.coproduct(a * n + b, g.mul[a][b]) = 1.0;
  for (int b = 0; b < n; ++b) h.antipode(g.inverse[b], b) = 1.0;
  h.integral = CVec::Zero(n);
  h.integral(g.identity) = 1.0;
  return h;
}

// ---------------------------------------------------------------------------
// Backend

namespace {

bool is_unitary(const CMat& u, double tol) {
  return linalg::max_abs(CMat(u.adjoint() * u - CMat::Identity(u.cols(), u.cols()))) <= tol &&
         u.rows() == u.cols();
}

// Precomputed pi_U(S(b)) for every basis element, untwisted antipode.
std::vector<CMat> antipode_images(const Backend& be, const Rep& u) {
  const HopfAlgebra& h = be.hopf();
  std::vector<CMat> out;
  out.reserve(static_cast<std::size_t>(h.dim));
  for (int b = 0; b < h.dim; ++b) out.push_back(be.evaluate(u, h.antipode.col(b)));
  return out;
}

}  // namespace

Backend Backend::finite_group(GroupPresentation group, std::vector<Irrep> irreps,
                              const Tolerance& tol) {
  Backend be;
  be.kind_ = BackendKind::FiniteGroup;
  be.group_ = std::move(group);
  be.group_.validate();
  be.hopf_ = group_algebra(be.group_);
  be.tol_ = tol;
  const int n = be.group_.size();
  int total = 0;
  be.trivial_ = -1;
  for (auto& ir : irreps) {
    if (static_cast<int>(ir.rep.pi.size()) != n)
      throw TableError("irrep " + ir.label + " must have one matrix per group element");
    ir.dim = ir.rep.dim();
    if (ir.dim < 1) throw TableError("irrep " + ir.label + " has dimension zero");
    for (const auto& m : ir.rep.pi)
      if (m.rows() != ir.dim || m.cols() != ir.dim)
        throw DimensionError("irrep " + ir.label + " has matrices of inconsistent size");
    if (ir.rho.size() == 0) ir.rho = CMat::Identity(ir.dim, ir.dim);
    if (ir.rho.rows() != ir.dim || ir.rho.cols() != ir.dim)
      throw DimensionError("rho for " + ir.label + " has the wrong size");
    if (linalg::max_abs(CMat(ir.rho - ir.rho.adjoint())) > tol.tau ||
        linalg::min_eigenvalue_hermitian(ir.rho) <= 0)
      throw TableError("rho for " + ir.label + " is not positive");
    double tr = ir.rho.trace().real();
    double tri = ir.rho.inverse().trace().real();
    if (std::abs(tr - tri) > tol.tau * std::max(1.0, tr))
      throw TableError("rho for " + ir.label + " violates Tr(rho) = Tr(rho^-1)");
    for (int a = 0; a < n; ++a) {
      if (!is_unitary(ir.rep.pi[a], tol.tau))
        throw TableError("irrep " + ir.label + " is not unitary at " + be.group_.elements[a]);
      for (int b = 0; b < n; ++b)
        if (linalg::max_abs(CMat(ir.rep.pi[a] * ir.rep.pi[b] - ir.rep.pi[be.group_.mul[a][b]])) >
            tol.tau)
          throw TableError("irrep " + ir.label + " is not multiplicative");
    }
    total += ir.dim * ir.dim;
  }
  if (total != n) throw TableError("irreducible dimensions do not satisfy sum d^2 = |G|");
  be.irreps_ = std::move(irreps);
  for (int a = 0; a < be.num_irreps(); ++a) {
    const auto& ir = be.irreps_[a];
    bool triv = ir.dim == 1;
    for (const auto& m : ir.rep.pi) triv = triv && std::abs(m(0, 0) - 1.0) <= tol.tau;
    if (triv && be.trivial_ < 0) be.trivial_ = a;
  }
  if (be.trivial_ < 0) throw TableError("no trivial representation in the irrep list");
  for (int a = 0; a < be.num_irreps(); ++a)
    for (int b = a; b < be.num_irreps(); ++b) {
      double m = character_pairing(be, be.irreps_[a].rep, be.irreps_[b].rep);
      double expect = a == b ? 1.0 : 0.0;
      if (std::abs(m - expect) > 1e-6)
        throw TableError("irreps " + be.irreps_[a].label + " and " + be.irreps_[b].label +
                         " are not irreducible and pairwise inequivalent");
    }
  be.finalize();
  return be;
}

Backend Backend::dual_group(GroupPresentation group, const Tolerance& tol) {
  Backend be;
  be.kind_ = BackendKind::DualGroup;
  be.group_ = std::move(group);
  be.group_.validate();
  be.hopf_ = function_algebra(be.group_);
  be.tol_ = tol;
  const int n = be.group_.size();
  for (int g = 0; g < n; ++g) {
    Irrep ir;
    ir.label = be.group_.elements[g];
    ir.dim = 1;
    for (int b = 0; b < n; ++b) ir.rep.pi.push_back(CMat::Constant(1, 1, b == g ? 1.0 : 0.0));
    ir.rho = CMat::Identity(1, 1);
    be.irreps_.push_back(std::move(ir));
  }
  be.trivial_ = be.group_.identity;
  be.finalize();
  return be;
}

Backend Backend::twisted(const Backend& base, const CVec& omega, const Tolerance& tol) {
  if (base.is_twisted()) throw ConfigurationError("backend is already twisted");
  const HopfAlgebra& h = base.hopf_;
  if (omega.size() != static_cast<Eigen::Index>(h.dim) * h.dim)
    throw DimensionError("cocycle has the wrong number of coefficients");
  Backend be = base;
  be.tol_ = tol;
  be.twist_ = omega;
  CVec omega_star = h.adjoint_tensor(omega, 2);
  be.coproduct_ = CMat::Zero(h.dim * h.dim, h.dim);
  for (int b = 0; b < h.dim; ++b)
    be.coproduct_.col(b) =
        h.multiply_tensor(h.multiply_tensor(omega, h.coproduct.col(b), 2), omega_star, 2);
  // u = m(1 (x) S)(omega) and its inverse.
  CVec u = CVec::Zero(h.dim);
  for (int a = 0; a < h.dim; ++a)
    for (int b = 0; b < h.dim; ++b) {
      cplx c = omega(a * h.dim + b);
      if (c != cplx(0.0)) u += c * h.multiply(h.basis(a), h.antipode.col(b));
    }
  CMat left(h.dim, h.dim);
  for (int c = 0; c < h.dim; ++c) left.col(c) = h.multiply(u, h.basis(c));
  Eigen::FullPivLU<CMat> lu(left);
  if (!lu.isInvertible()) throw ConfigurationError("cocycle is not invertible");
  CVec u_inv = lu.solve(h.unit);
  be.antipode_ = CMat::Zero(h.dim, h.dim);
  for (int b = 0; b < h.dim; ++b)
    be.antipode_.col(b) = h.multiply(h.multiply(u, h.antipode.col(b)), u_inv);
  be.finalize();
  return be;
}

void Backend::finalize() {
  if (!twist_) {
    coproduct_ = hopf_.coproduct;
    antipode_ = hopf_.antipode;
    // Conjugates and the identification J are properties of the untwisted category.
    for (int a = 0; a < num_irreps(); ++a) {
      Rep ubar = conjugate_space_rep(a);
      auto& ir = irreps_[a];
      ir.conj = -1;
      for (int b = 0; b < num_irreps() && ir.conj < 0; ++b) {
        if (irreps_[b].dim != ir.dim) continue;
        if (std::abs(character_pairing(*this, ubar, irreps_[b].rep) - 1.0) > 1e-6) continue;
        IntertwinerBasis m = mor_space(*this, ubar, irreps_[b].rep);
        if (m.size() != 1) throw TableError("conjugate of " + ir.label + " is ambiguous");
        CMat j = std::sqrt(static_cast<double>(ir.dim)) * m.basis.front();
        if (!is_unitary(j, 1e3 * tol_.tau))
          throw TableError("rho for " + ir.label + " is inconsistent with the representation");
        ir.conj = b;
        ir.J = j;
      }
      if (ir.conj < 0) throw TableError("no conjugate found for " + ir.label);
    }
    conj_.clear();
    for (const auto& ir : irreps_) conj_.push_back(standard_solution(ir.rho, ir.J));
  } else {
    std::vector<ConjugateSolution> base = conj_;
    for (int a = 0; a < num_irreps(); ++a) {
      int ab = irreps_[a].conj;
      conj_[a].r = evaluate2(rep(ab), rep(a), *twist_) * base[a].r;
      conj_[a].rbar = evaluate2(rep(a), rep(ab), *twist_) * base[a].rbar;
    }
  }
  const int k = num_irreps();
  fusion_.assign(k, std::vector<std::vector<Part>>(k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) fusion_[a][b] = decompose(*this, tensor(rep(a), rep(b)));
}

int Backend::irrep_index(const std::string& label) const {
  for (int a = 0; a < num_irreps(); ++a)
    if (irreps_[a].label == label) return a;
  throw TableError("unknown irreducible label: " + label);
}

CMat Backend::evaluate(const Rep& u, const CVec& x) const {
  CMat out = CMat::Zero(u.dim(), u.dim());
  for (Eigen::Index b = 0; b < x.size(); ++b)
    if (x(b) != cplx(0.0)) out += x(b) * u.pi[b];
  return out;
}

CMat Backend::evaluate2(const Rep& u, const Rep& v, const CVec& x) const {
  const int n = hopf_.dim;
  CMat out = CMat::Zero(u.dim() * v.dim(), u.dim() * v.dim());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) != cplx(0.0)) out += x(i) * linalg::kron(u.pi[i / n], v.pi[i % n]);
  return out;
}

Rep Backend::tensor(const Rep& u, const Rep& v) const {
  Rep out;
  for (int b = 0; b < hopf_.dim; ++b) out.pi.push_back(evaluate2(u, v, coproduct_.col(b)));
  return out;
}

Rep Backend::conjugate_space_rep(int a) const {
  const auto& ir = irrep(a);
  CMat s = linalg::sqrt_psd(ir.rho).transpose();
  CMat si = linalg::inv_sqrt_pd(ir.rho).transpose();
  Rep out;
  for (int b = 0; b < hopf_.dim; ++b)
    out.pi.push_back(s * evaluate(ir.rep, hopf_.antipode.col(b)).transpose() * si);
  return out;
}

const std::vector<Part>& Backend::fusion(int a, int b) const { return fusion_.at(a).at(b); }

std::vector<CMat> Backend::fusion_for(int a, int b, int c) const {
  std::vector<CMat> out;
  for (const auto& p : fusion(a, b))
    if (p.label == c) out.push_back(p.w);
  return out;
}

Backend builtin_backend(const std::string& name, const Tolerance& tol) {
  std::string core = name;
  bool dual = false;
  if (core.rfind("dual:", 0) == 0) {
    dual = true;
    core = core.substr(5);
  }
  GroupPresentation g;
  std::vector<Irrep> irreps;
  if (core == "S3") {
    g = symmetric_group_3();
    auto perms = s3_elements();
    Eigen::MatrixXd basis(3, 2);
    basis << 1 / std::sqrt(2.0), 1 / std::sqrt(6.0), -1 / std::sqrt(2.0), 1 / std::sqrt(6.0), 0,
        -2 / std::sqrt(6.0);
    Irrep triv{"triv", 1, {}, {}, -1, {}}, sign{"sign", 1, {}, {}, -1, {}},
        stdr{"std", 2, {}, {}, -1, {}};
    for (const auto& p : perms) {
      Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(3, 3);
      for (int i = 0; i < 3; ++i) perm(p[i], i) = 1.0;
      triv.rep.pi.push_back(CMat::Ones(1, 1));
      sign.rep.pi.push_back(CMat::Constant(1, 1, static_cast<double>(perm_sign(p))));
      stdr.rep.pi.push_back((basis.transpose() * perm * basis).cast<cplx>());
    }
    irreps = {triv, sign, stdr};
  } else if (core.size() >= 2 && core[0] == 'Z') {
    std::vector<int> orders;
    std::stringstream ss(core.substr(1));
    std::string tok;
    while (std::getline(ss, tok, 'x')) {
      if (!tok.empty() && tok[0] == 'Z') tok = tok.substr(1);
      try {
        orders.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw ConfigurationError("unknown builtin backend: " + name);
      }
    }
    if (orders.empty() || orders.size() > 2) throw ConfigurationError("unknown builtin backend: " + name);
    g = cyclic_group(orders[0]);
    if (orders.size() == 2) g = product_group(g, cyclic_group(orders[1]));
    const int n0 = orders[0], n1 = orders.size() == 2 ? orders[1] : 1;
    for (int j = 0; j < n0; ++j)
      for (int k = 0; k < n1; ++k) {
        Irrep ir;
        ir.label = orders.size() == 2 ? "chi(" + std::to_string(j) + "," + std::to_string(k) + ")"
                                      : "chi" + std::to_string(j);
        ir.dim = 1;
        for (int a = 0; a < n0; ++a)
          for (int b = 0; b < n1; ++b) {
            double phase = 2 * std::numbers::pi * (double(j * a) / n0 + double(k * b) / n1);
            ir.rep.pi.push_back(CMat::Constant(1, 1, std::polar(1.0, phase)));
          }
        irreps.push_back(std::move(ir));
      }
  } else {
    throw ConfigurationError("unknown builtin backend: " + name);
  }
  Backend be = dual ? Backend::dual_group(g, tol) : Backend::finite_group(g, irreps, tol);
  be.set_name(name);
  return be;
}

// ---------------------------------------------------------------------------
// Operations

CMat haar_average(const Backend& be, const Rep& u, const Rep& v, const CMat& seed) {
  const HopfAlgebra& h = be.hopf();
  if (seed.rows() != v.dim() || seed.cols() != u.dim())
    throw DimensionError("haar_average: seed has the wrong shape");
  CVec dl = h.coproduct * h.integral;
  CMat out = CMat::Zero(v.dim(), u.dim());
  std::vector<CMat> su = antipode_images(be, u);
  for (Eigen::Index i = 0; i < dl.size(); ++i)
    if (std::abs(dl(i)) > 0) out += dl(i) * v.pi[i / h.dim] * seed * su[i % h.dim];
  return out;
}

IntertwinerBasis mor_space(const Backend& be, const Rep& u, const Rep& v) {
  const HopfAlgebra& h = be.hopf();
  const int du = u.dim(), dv = v.dim();
  IntertwinerBasis out;
  out.source_dim = du;
  out.target_dim = dv;
  if (du == 0 || dv == 0) return out;
  CVec dl = h.coproduct * h.integral;
  std::vector<CMat> su = antipode_images(be, u);
  // The Haar projection acting on column-major vec(T) is sum c (S a')^T (x) pi(a).
  CMat proj = CMat::Zero(du * dv, du * dv);
  for (Eigen::Index i = 0; i < dl.size(); ++i)
    if (std::abs(dl(i)) > 0) proj += dl(i) * linalg::kron(CMat(su[i % h.dim].transpose()), v.pi[i / h.dim]);
  CMat span = linalg::orthonormal_span(proj, be.tolerance().rank);
  for (Eigen::Index k = 0; k < span.cols(); ++k)
    out.basis.push_back(linalg::unvec(span.col(k), dv, du));
  return out;
}

std::vector<Part> decompose(const Backend& be, const Rep& u) {
  std::vector<Part> parts;
  const int d = u.dim();
  if (d == 0) return parts;
  CMat sum = CMat::Zero(d, d);
  for (int a = 0; a < be.num_irreps(); ++a) {
    IntertwinerBasis m = mor_space(be, be.rep(a), u);
    double s = std::sqrt(static_cast<double>(be.irrep(a).dim));
    for (const auto& t : m.basis) {
      parts.push_back({a, s * t});
      sum += parts.back().w * parts.back().w.adjoint();
    }
  }
  if (linalg::max_abs(CMat(sum - CMat::Identity(d, d))) > 1e3 * be.tolerance().tau)
    throw TableError("decomposition is incomplete; the irreducible list may be wrong (defect " +
                     std::to_string(linalg::max_abs(CMat(sum - CMat::Identity(d, d)))) + ")");
  return parts;
}

CVec flatten_rowmajor(const CMat& m) {
  CVec out(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i * m.cols() + j) = m(i, j);
  return out;
}

CMat unflatten_rowmajor(const CVec& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw DimensionError("unflatten: size mismatch");
  CMat out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = v(i * cols + j);
  return out;
}

ConjugateSolution standard_solution(const CMat& rho, const CMat& J) {
  ConjugateSolution s;
  s.r = flatten_rowmajor(J * linalg::inv_sqrt_pd(rho).transpose());
  s.rbar = flatten_rowmajor(linalg::sqrt_psd(rho) * J.transpose());
  return s;
}

ConjugateSolution conjugate_solution(const Backend& be, int a) { return be.conjugate(a); }

double quantum_dim(const Irrep& irrep) { return irrep.rho.trace().real(); }
double quantum_dim(const Backend& be, int a) { return quantum_dim(be.irrep(a)); }

ConjugateResiduals conjugate_residuals(const ConjugateSolution& s, int dim_alpha, int dim_conj,
                                       double dim_q) {
  if (s.r.size() != dim_alpha * dim_conj || s.rbar.size() != dim_alpha * dim_conj)
    throw DimensionError("conjugate_residuals: solution has the wrong size");
  CMat ia = CMat::Identity(dim_alpha, dim_alpha), ic = CMat::Identity(dim_conj, dim_conj);
  CMat r = s.r, rb = s.rbar;
  ConjugateResiduals out;
  out.first = linalg::max_abs(CMat(linalg::kron(CMat(rb.adjoint()), ia) * linalg::kron(ia, r) - ia));
  out.second = linalg::max_abs(CMat(linalg::kron(CMat(r.adjoint()), ic) * linalg::kron(ic, rb) - ic));
  out.norm_r = std::abs(s.r.squaredNorm() - dim_q);
  out.norm_rbar = std::abs(s.rbar.squaredNorm() - dim_q);
  return out;
}

CMat frobenius(const Backend& be, int alpha, const CMat& t, int dim_b, int dim_v) {
  const int da = be.irrep(alpha).dim;
  if (t.rows() != dim_b * dim_v || t.cols() != dim_b * da)
    throw DimensionError("frobenius: morphism has the wrong shape");
  const int dc = be.irrep(be.irrep(alpha).conj).dim;
  CMat rb = be.conjugate(alpha).rbar;
  return linalg::kron(t, CMat::Identity(dc, dc)) * linalg::kron(CMat::Identity(dim_b, dim_b), rb);
}

CMat frobenius_inverse(const Backend& be, int alpha, const CMat& s, int dim_b, int dim_v) {
  const int da = be.irrep(alpha).dim;
  const int dc = be.irrep(be.irrep(alpha).conj).dim;
  if (s.rows() != dim_b * dim_v * dc || s.cols() != dim_b)
    throw DimensionError("frobenius_inverse: morphism has the wrong shape");
  CMat r = be.conjugate(alpha).r;
  return linalg::kron(CMat::Identity(dim_b * dim_v, dim_b * dim_v), CMat(r.adjoint())) *
         linalg::kron(s, CMat::Identity(da, da));
}

double character_pairing(const Backend& be, const Rep& u, const Rep& v) {
  const HopfAlgebra& h = be.hopf();
  CVec dl = h.coproduct * h.integral;
  cplx acc = 0.0;
  for (Eigen::Index i = 0; i < dl.size(); ++i) {
    if (std::abs(dl(i)) == 0) continue;
    cplx tv = v.pi[i / h.dim].trace();
    cplx tu = be.evaluate(u, h.antipode.col(i % h.dim)).trace();
    acc += dl(i) * tv * tu;
  }
  return acc.real();
}

}  // namespace qdual
