#include "qdual/hilbmod.hpp"

#include <algorithm>
#include <cmath>

namespace qdual {

FdCStarAlgebra::FdCStarAlgebra(std::vector<int> blocks) : blocks_(std::move(blocks)) {
  for (int n : blocks_) {
    if (n < 1) throw ConfigurationError("matrix block sizes must be positive");
    offsets_.push_back(dim_);
    moffsets_.push_back(size_);
    dim_ += n * n;
    size_ += n;
  }
}

int FdCStarAlgebra::coord(int block, int row, int col) const {
  const int n = blocks_.at(static_cast<std::size_t>(block));
  return offsets_[block] + row * n + col;
}

CVec FdCStarAlgebra::basis(int k) const {
  CVec v = CVec::Zero(dim_);
  v(k) = 1.0;
  return v;
}

CVec FdCStarAlgebra::unit() const {
  CVec v = CVec::Zero(dim_);
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    for (int r = 0; r < blocks_[k]; ++r) v(coord(static_cast<int>(k), r, r)) = 1.0;
  return v;
}

CMat FdCStarAlgebra::block(const CVec& x, int k) const {
  const int n = blocks_.at(static_cast<std::size_t>(k));
  CMat m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = x(offsets_[k] + r * n + c);
  return m;
}

CMat FdCStarAlgebra::to_matrix(const CVec& x) const {
  if (x.size() != dim_) throw DimensionError("algebra element has the wrong dimension");
  CMat m = CMat::Zero(size_, size_);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const int n = blocks_[k];
    m.block(moffsets_[k], moffsets_[k], n, n) = block(x, static_cast<int>(k));
  }
  return m;
}

CVec FdCStarAlgebra::from_matrix(const CMat& m) const {
  if (m.rows() != size_ || m.cols() != size_) throw DimensionError("matrix has the wrong size");
  CVec x(dim_);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const int n = blocks_[k];
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) x(offsets_[k] + r * n + c) = m(moffsets_[k] + r, moffsets_[k] + c);
  }
  return x;
}

CVec FdCStarAlgebra::multiply(const CVec& x, const CVec& y) const {
  if (x.size() != dim_ || y.size() != dim_) throw DimensionError("algebra element has the wrong dimension");
  CVec out(dim_);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const int n = blocks_[k];
    CMat p = block(x, static_cast<int>(k)) * block(y, static_cast<int>(k));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) out(offsets_[k] + r * n + c) = p(r, c);
  }
  return out;
}

CVec FdCStarAlgebra::adjoint(const CVec& x) const {
  CVec out(dim_);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const int n = blocks_[k];
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        out(offsets_[k] + r * n + c) = std::conj(x(offsets_[k] + c * n + r));
  }
  return out;
}

cplx FdCStarAlgebra::trace(const CVec& x) const {
  cplx t = 0.0;
  for (std::size_t k = 0; k < blocks_.size(); ++k) t += block(x, static_cast<int>(k)).trace();
  return t;
}

double FdCStarAlgebra::norm(const CVec& x) const {
  double m = 0.0;
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    m = std::max(m, linalg::op_norm(block(x, static_cast<int>(k))));
  return m;
}

double FdCStarAlgebra::min_eigenvalue(const CVec& x) const {
  double m = 0.0;
  bool first = true;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    double e = linalg::min_eigenvalue_hermitian(block(x, static_cast<int>(k)));
    m = first ? e : std::min(m, e);
    first = false;
  }
  return m;
}

bool FdCStarAlgebra::is_positive(const CVec& x, double tau) const {
  return linalg::max_abs(CVec(x - adjoint(x))) <= tau && min_eigenvalue(x) >= -tau;
}

CMat FdCStarAlgebra::left_mult(const CVec& x) const {
  CMat m(dim_, dim_);
  for (int k = 0; k < dim_; ++k) m.col(k) = multiply(x, basis(k));
  return m;
}

CMat FdCStarAlgebra::right_mult(const CVec& x) const {
  CMat m(dim_, dim_);
  for (int k = 0; k < dim_; ++k) m.col(k) = multiply(basis(k), x);
  return m;
}

// ---------------------------------------------------------------------------

CVec Correspondence::inner_product(const CVec& x, const CVec& y) const {
  CVec out = algebra.zero();
  for (int i = 0; i < dim; ++i) {
    if (x(i) == cplx(0.0)) continue;
    for (int j = 0; j < dim; ++j)
      if (y(j) != cplx(0.0)) out += std::conj(x(i)) * y(j) * inner[i][j];
  }
  return out;
}

CMat Correspondence::right_matrix(const CVec& a) const {
  CMat m = CMat::Zero(dim, dim);
  for (int k = 0; k < algebra.dim(); ++k)
    if (a(k) != cplx(0.0)) m += a(k) * right[k];
  return m;
}

CMat Correspondence::left_matrix(const CVec& a) const {
  CMat m = CMat::Zero(dim, dim);
  for (int k = 0; k < algebra.dim(); ++k)
    if (a(k) != cplx(0.0)) m += a(k) * left[k];
  return m;
}

CVec Correspondence::act_right(const CVec& x, const CVec& a) const { return right_matrix(a) * x; }
CVec Correspondence::act_left(const CVec& a, const CVec& x) const { return left_matrix(a) * x; }

CMat Correspondence::trace_gram() const {
  CMat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = algebra.trace(inner[i][j]);
  return g;
}

CMat Correspondence::faithful_gram() const {
  const int n = algebra.size();
  CMat g(dim * n, dim * n);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g.block(i * n, j * n, n, n) = algebra.to_matrix(inner[i][j]);
  return g;
}

std::vector<CMat> Correspondence::coordinate_grams() const {
  std::vector<CMat> out(algebra.dim(), CMat::Zero(dim, dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int p = 0; p < algebra.dim(); ++p) out[p](i, j) = inner[i][j](p);
  return out;
}

Correspondence Correspondence::identity(const FdCStarAlgebra& a) {
  Correspondence m;
  m.algebra = a;
  m.dim = a.dim();
  for (int k = 0; k < a.dim(); ++k) {
    m.right.push_back(a.right_mult(a.basis(k)));
    m.left.push_back(a.left_mult(a.basis(k)));
  }
  m.inner.assign(m.dim, std::vector<CVec>(m.dim));
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) m.inner[i][j] = a.multiply(a.adjoint(a.basis(i)), a.basis(j));
  return m;
}

Correspondence Correspondence::zero(const FdCStarAlgebra& a) {
  Correspondence m;
  m.algebra = a;
  m.dim = 0;
  m.right.assign(a.dim(), CMat(0, 0));
  m.left.assign(a.dim(), CMat(0, 0));
  return m;
}

Report validate_correspondence(const Correspondence& m, double tau) {
  Report rep;
  const FdCStarAlgebra& a = m.algebra;
  const int d = m.dim, da = a.dim();
  bool shapes = static_cast<int>(m.right.size()) == da && static_cast<int>(m.left.size()) == da &&
                static_cast<int>(m.inner.size()) == d;
  for (const auto& r : m.right) shapes = shapes && r.rows() == d && r.cols() == d;
  for (const auto& l : m.left) shapes = shapes && l.rows() == d && l.cols() == d;
  for (const auto& row : m.inner) {
    shapes = shapes && static_cast<int>(row.size()) == d;
    for (const auto& v : row) shapes = shapes && v.size() == da;
  }
  rep.add_flag("shapes", shapes);
  if (!shapes) return rep;

  double herm = 0.0, lin = 0.0, radj = 0.0, ladj = 0.0, lhom = 0.0, comm = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      herm = std::max(herm, linalg::max_abs(CVec(m.inner[j][i] - a.adjoint(m.inner[i][j]))));
  for (int k = 0; k < da; ++k) {
    CVec ak = a.basis(k), ak_star = a.adjoint(ak);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        CVec ej = CVec::Zero(d), ei = CVec::Zero(d);
        ej(j) = 1.0;
        ei(i) = 1.0;
        lin = std::max(lin, linalg::max_abs(CVec(m.inner_product(ei, m.right[k] * ej) -
                                                 a.multiply(m.inner[i][j], ak))));
        ladj = std::max(ladj, linalg::max_abs(CVec(m.inner_product(m.left[k] * ei, ej) -
                                                   m.inner_product(ei, m.left_matrix(ak_star) * ej))));
      }
    for (int l = 0; l < da; ++l) {
      CVec prod = a.multiply(ak, a.basis(l));
      radj = std::max(radj, linalg::max_abs(CMat(m.right_matrix(prod) - m.right[l] * m.right[k])));
      lhom = std::max(lhom, linalg::max_abs(CMat(m.left_matrix(prod) - m.left[k] * m.left[l])));
      comm = std::max(comm, linalg::max_abs(CMat(m.left[k] * m.right[l] - m.right[l] * m.left[k])));
    }
  }
  CMat id = CMat::Identity(d, d);
  rep.add("inner_hermitian", herm, tau);
  rep.add("inner_right_linear", lin, tau);
  rep.add("right_action_multiplicative", radj, tau);
  rep.add("right_unit", linalg::max_abs(CMat(m.right_matrix(a.unit()) - id)), tau);
  rep.add("left_action_multiplicative", lhom, tau);
  rep.add("left_unit", linalg::max_abs(CMat(m.left_matrix(a.unit()) - id)), tau);
  rep.add("left_action_adjointable", ladj, tau);
  rep.add("actions_commute", comm, tau);
  double pos = d ? linalg::min_eigenvalue_hermitian(m.faithful_gram()) : 0.0;
  rep.add("inner_positive", std::max(0.0, -pos), tau);
  double def = d ? linalg::min_eigenvalue_hermitian(m.trace_gram()) : 1.0;
  rep.add_flag("inner_definite", def > tau, "smallest trace-Gram eigenvalue " + std::to_string(def));
  return rep;
}

TensorProduct internal_tensor(const Correspondence& m, const Correspondence& n, double gram_cutoff) {
  if (m.algebra != n.algebra) throw ConfigurationError("internal_tensor: algebras differ");
  const FdCStarAlgebra& a = m.algebra;
  const int dm = m.dim, dn = n.dim, d = dm * dn;
  TensorProduct out;
  out.module.algebra = a;
  if (d == 0) {
    out.module = Correspondence::zero(a);
    out.quotient = CMat(0, d);
    return out;
  }
  // Semi-inner product <e_i (x) f_j, e_k (x) f_l> = <f_j, <e_i,e_k> f_l>.
  std::vector<std::vector<CVec>> g(d, std::vector<CVec>(d));
  for (int i = 0; i < dm; ++i)
    for (int k = 0; k < dm; ++k) {
      CMat lmat = n.left_matrix(m.inner[i][k]);
      for (int j = 0; j < dn; ++j)
        for (int l = 0; l < dn; ++l) {
          CVec acc = a.zero();
          for (int p = 0; p < dn; ++p)
            if (lmat(p, l) != cplx(0.0)) acc += lmat(p, l) * n.inner[j][p];
          g[i * dn + j][k * dn + l] = acc;
        }
    }
  CMat tg(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) tg(i, j) = a.trace(g[i][j]);
  Eigen::SelfAdjointEigenSolver<CMat> es(CMat(0.5 * (tg + tg.adjoint())));
  const RVec& ev = es.eigenvalues();
  double cut = gram_cutoff * std::max(ev(d - 1), 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < d; ++k)
    if (ev(k) > cut && ev(k) > 0) keep.push_back(k);
  const int dq = static_cast<int>(keep.size());
  CMat v(d, dq);
  for (int k = 0; k < dq; ++k) v.col(k) = es.eigenvectors().col(keep[k]);
  Correspondence& q = out.module;
  q.dim = dq;
  for (int k = 0; k < a.dim(); ++k) {
    q.right.push_back(v.adjoint() * linalg::kron(CMat::Identity(dm, dm), n.right[k]) * v);
    q.left.push_back(v.adjoint() * linalg::kron(m.left[k], CMat::Identity(dn, dn)) * v);
  }
  q.inner.assign(dq, std::vector<CVec>(dq, a.zero()));
  for (int k = 0; k < dq; ++k)
    for (int l = 0; l < dq; ++l) {
      CVec acc = a.zero();
      for (int i = 0; i < d; ++i) {
        if (v(i, k) == cplx(0.0)) continue;
        for (int j = 0; j < d; ++j)
          if (v(j, l) != cplx(0.0)) acc += std::conj(v(i, k)) * v(j, l) * g[i][j];
      }
      q.inner[k][l] = acc;
    }
  out.quotient = v.adjoint();
  return out;
}

std::vector<CMat> tensor_semi_grams(const Correspondence& m, const Correspondence& n) {
  if (m.algebra != n.algebra) throw ConfigurationError("tensor_semi_grams: algebras differ");
  const int da = m.algebra.dim();
  std::vector<CMat> gm = m.coordinate_grams(), gn = n.coordinate_grams();
  std::vector<CMat> out(da, CMat::Zero(m.dim * n.dim, m.dim * n.dim));
  for (int p = 0; p < da; ++p)
    for (int q = 0; q < da; ++q) {
      if (gm[q].cwiseAbs().maxCoeff() == 0.0) continue;
      out[p] += linalg::kron(gm[q], CMat(gn[p] * n.left[q]));
    }
  return out;
}

double gram_defect(const std::vector<CMat>& target_grams, const CMat& map,
                   const std::vector<CMat>& source_grams) {
  double r = 0.0;
  for (std::size_t p = 0; p < target_grams.size(); ++p)
    r = std::max(r, linalg::max_abs(CMat(map.adjoint() * target_grams[p] * map - source_grams[p])));
  return r;
}

Correspondence direct_sum(const std::vector<Correspondence>& parts, const FdCStarAlgebra& a) {
  Correspondence out;
  out.algebra = a;
  for (const auto& p : parts) {
    if (p.algebra != a) throw ConfigurationError("direct_sum: algebras differ");
    out.dim += p.dim;
  }
  const int d = out.dim;
  out.right.assign(a.dim(), CMat::Zero(d, d));
  out.left.assign(a.dim(), CMat::Zero(d, d));
  out.inner.assign(d, std::vector<CVec>(d, a.zero()));
  int off = 0;
  for (const auto& p : parts) {
    for (int k = 0; k < a.dim(); ++k) {
      out.right[k].block(off, off, p.dim, p.dim) = p.right[k];
      out.left[k].block(off, off, p.dim, p.dim) = p.left[k];
    }
    for (int i = 0; i < p.dim; ++i)
      for (int j = 0; j < p.dim; ++j) out.inner[off + i][off + j] = p.inner[i][j];
    off += p.dim;
  }
  return out;
}

double right_linearity_defect(const Correspondence& m, const Correspondence& n, const CMat& t) {
  double r = 0.0;
  for (int k = 0; k < m.algebra.dim(); ++k)
    r = std::max(r, linalg::max_abs(CMat(t * m.right[k] - n.right[k] * t)));
  return r;
}

double left_linearity_defect(const Correspondence& m, const Correspondence& n, const CMat& t) {
  double r = 0.0;
  for (int k = 0; k < m.algebra.dim(); ++k)
    r = std::max(r, linalg::max_abs(CMat(t * m.left[k] - n.left[k] * t)));
  return r;
}

AdjointResult adjoint_of(const Correspondence& m, const Correspondence& n, const CMat& t, double tau) {
  if (m.algebra != n.algebra) throw ConfigurationError("adjoint_of: algebras differ");
  if (t.rows() != n.dim || t.cols() != m.dim) throw DimensionError("adjoint_of: map has the wrong shape");
  if (right_linearity_defect(m, n, t) > tau * std::max(1.0, linalg::max_abs(t)))
    throw ContractViolation("adjoint_of: map is not right A-linear");
  const FdCStarAlgebra& a = m.algebra;
  const int dm = m.dim, dn = n.dim, da = a.dim();
  AdjointResult res;
  res.adjoint = CMat::Zero(dm, dn);
  if (dm == 0 || dn == 0) {
    res.adjointable = true;
    return res;
  }
  // For each f_j: sum_l S_lj <e_i, e_l> = <T e_i, f_j>, one equation per (i, coordinate).
  CMat k(dm * da, dm);
  for (int i = 0; i < dm; ++i)
    for (int l = 0; l < dm; ++l) k.block(i * da, l, da, 1) = m.inner[i][l];
  CMat kp = linalg::pinv(k);
  CMat rhs(dm * da, dn);
  for (int j = 0; j < dn; ++j) {
    CVec fj = CVec::Zero(dn);
    fj(j) = 1.0;
    for (int i = 0; i < dm; ++i) {
      CVec te = t.col(i);
      rhs.block(i * da, j, da, 1) = n.inner_product(te, fj);
    }
  }
  res.adjoint = kp * rhs;
  res.residual = linalg::max_abs(CMat(k * res.adjoint - rhs));
  res.adjointable = res.residual <= tau * std::max(1.0, linalg::max_abs(rhs));
  return res;
}

double module_norm(const Correspondence& m, const CVec& x) {
  return std::sqrt(std::max(0.0, m.algebra.norm(m.inner_product(x, x))));
}

double operator_norm(const Correspondence& m, const Correspondence& n, const CMat& t,
                     double gram_cutoff) {
  if (m.dim == 0 || n.dim == 0) return 0.0;
  const int size = m.algebra.size();
  CMat gm = m.faithful_gram();
  Eigen::SelfAdjointEigenSolver<CMat> es(CMat(0.5 * (gm + gm.adjoint())));
  const RVec& ev = es.eigenvalues();
  double cut = gram_cutoff * std::max(ev(ev.size() - 1), 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) > cut && ev(k) > 0) keep.push_back(k);
  CMat w(gm.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    w.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]) / std::sqrt(ev(keep[k]));
  CMat tt = linalg::kron(t, CMat::Identity(size, size)) * w;
  CMat h = tt.adjoint() * n.faithful_gram() * tt;
  return std::sqrt(std::max(0.0, linalg::max_eigenvalue_hermitian(h)));
}

}  // namespace qdual

namespace qdual {

CVec WedderburnDecomposition::coordinates(const CMat& x) const {
  CVec c(static_cast<Eigen::Index>(units.size()));
  for (std::size_t k = 0; k < units.size(); ++k)
    c(static_cast<Eigen::Index>(k)) = (units[k].adjoint() * x).trace() / (units[k].adjoint() * units[k]).trace();
  return c;
}

CMat WedderburnDecomposition::matrix(const CVec& coords) const {
  CMat m = CMat::Zero(units.empty() ? 0 : units[0].rows(), units.empty() ? 0 : units[0].cols());
  for (std::size_t k = 0; k < units.size(); ++k) m += coords(static_cast<Eigen::Index>(k)) * units[k];
  return m;
}

namespace {

// Orthonormal basis (Hilbert-Schmidt) of the span of the given matrices.
std::vector<CMat> hs_basis(const std::vector<CMat>& span, double rank_tol) {
  if (span.empty()) return {};
  const Eigen::Index r = span[0].rows(), c = span[0].cols();
  CMat cols(r * c, static_cast<Eigen::Index>(span.size()));
  for (std::size_t k = 0; k < span.size(); ++k) cols.col(static_cast<Eigen::Index>(k)) = linalg::vec(span[k]);
  CMat on = linalg::orthonormal_span(cols, rank_tol);
  std::vector<CMat> out;
  for (Eigen::Index k = 0; k < on.cols(); ++k) out.push_back(linalg::unvec(on.col(k), r, c));
  return out;
}

Eigen::Index first_weight(const CMat& p) {
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    if (std::abs(p(i, i)) > 1e-6) return i;
  return p.rows();
}

// Spectral projections of a Hermitian matrix restricted to the range of v
// (orthonormal columns), grouped by clustered eigenvalues.
std::vector<CMat> spectral_projections(const CMat& h, const CMat& v, double gap) {
  CMat hv = v.adjoint() * h * v;
  Eigen::SelfAdjointEigenSolver<CMat> es(CMat(0.5 * (hv + hv.adjoint())));
  std::vector<CMat> out;
  for (const auto& cl : linalg::cluster_sorted(es.eigenvalues(), gap)) {
    CMat u(v.cols(), static_cast<Eigen::Index>(cl.size()));
    for (std::size_t i = 0; i < cl.size(); ++i) u.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(cl[i]);
    CMat w = v * u;
    out.push_back(w * w.adjoint());
  }
  return out;
}

CMat range_basis(const CMat& p) {
  Eigen::SelfAdjointEigenSolver<CMat> es(CMat(0.5 * (p + p.adjoint())));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  CMat v(p.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) v.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]);
  return v;
}

}  // namespace

WedderburnDecomposition wedderburn(const std::vector<CMat>& span, std::uint64_t seed, double rank_tol) {
  WedderburnDecomposition out;
  std::vector<CMat> basis = hs_basis(span, rank_tol);
  if (basis.empty()) {
    out.algebra = FdCStarAlgebra(std::vector<int>{});
    return out;
  }
  const Eigen::Index n = basis[0].rows();
  const Eigen::Index d = static_cast<Eigen::Index>(basis.size());
  Rng rng(seed);
  double scale = 0.0;
  for (const auto& b : basis) scale = std::max(scale, linalg::op_norm(b));

  // Center: sum c_j [b_j, b_k] = 0 for all k.
  CMat sys(d * n * n, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = 0; k < d; ++k)
      sys.block(k * n * n, j, n * n, 1) = linalg::vec(CMat(basis[j] * basis[k] - basis[k] * basis[j]));
  CMat cen = linalg::null_space(sys, rank_tol);
  CMat h = CMat::Zero(n, n);
  for (Eigen::Index i = 0; i < cen.cols(); ++i) {
    CMat z = CMat::Zero(n, n);
    for (Eigen::Index j = 0; j < d; ++j) z += cen(j, i) * basis[j];
    h += rng.complex_uniform() * z;
  }
  h = CMat(0.5 * (h + h.adjoint()));
  const double gap = 1e-6 * std::max(1.0, linalg::op_norm(h));
  std::vector<CMat> central;
  for (const CMat& p : spectral_projections(h, CMat::Identity(n, n), gap)) {
    double act = 0.0;
    for (const auto& b : basis) act = std::max(act, linalg::max_abs(CMat(p * b)));
    if (act > rank_tol * std::max(1.0, scale)) central.push_back(p);
  }
  std::sort(central.begin(), central.end(),
            [](const CMat& a, const CMat& b) { return first_weight(a) < first_weight(b); });

  std::vector<int> sizes;
  std::vector<CMat> units;
  for (const CMat& p : central) {
    CMat s = CMat::Zero(n, n);
    for (const auto& b : basis) s += rng.complex_uniform() * (p * b * p);
    s = CMat(0.5 * (s + s.adjoint()));
    CMat v = range_basis(p);
    std::vector<CMat> q = spectral_projections(s, v, 1e-6 * std::max(1.0, linalg::op_norm(s)));
    std::sort(q.begin(), q.end(), [](const CMat& a, const CMat& b) { return first_weight(a) < first_weight(b); });
    const int m = static_cast<int>(q.size());
    std::vector<CMat> e1(m);
    e1[0] = q[0];
    for (int j = 1; j < m; ++j) {
      CMat best;
      double bn = -1.0;
      for (const auto& b : basis) {
        CMat t = q[0] * b * q[j];
        double tn = t.norm();
        if (tn > bn) {
          bn = tn;
          best = t;
        }
      }
      cplx c = (best * best.adjoint()).trace() / q[0].trace();
      CMat e = best / std::sqrt(c.real());
      Eigen::Index r, cidx;
      e.cwiseAbs().maxCoeff(&r, &cidx);
      e *= std::conj(e(r, cidx)) / std::abs(e(r, cidx));
      e1[j] = e;
    }
    sizes.push_back(m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) units.push_back(CMat(e1[r].adjoint() * e1[c]));
  }
  out.algebra = FdCStarAlgebra(sizes);
  out.units = std::move(units);
  return out;
}

}  // namespace qdual
