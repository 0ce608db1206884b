#include "qdual/io.hpp"

#include <fstream>
#include <sstream>

namespace qdual::io {

bool Node::has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

Node Node::operator[](const std::string& key) const {
  if (!j_->is_object()) fail("expected an object");
  auto it = j_->find(key);
  if (it == j_->end()) fail("missing field \"" + key + "\"");
  return Node(*it, where_ + "." + key);
}

Node Node::operator[](std::size_t i) const {
  if (!j_->is_array()) fail("expected an array");
  if (i >= j_->size()) fail("index " + std::to_string(i) + " out of range");
  return Node((*j_)[i], where_ + "[" + std::to_string(i) + "]");
}

std::size_t Node::size() const {
  if (!j_->is_array()) fail("expected an array");
  return j_->size();
}

void Node::fail(const std::string& msg) const { throw InputError(where_ + ": " + msg); }

int Node::as_int() const {
  if (!j_->is_number_integer()) fail("expected an integer");
  return j_->get<int>();
}

double Node::as_double() const {
  if (!j_->is_number()) fail("expected a number");
  return j_->get<double>();
}

std::string Node::as_string() const {
  if (!j_->is_string()) fail("expected a string");
  return j_->get<std::string>();
}

cplx Node::as_complex() const {
  if (j_->is_number()) return {j_->get<double>(), 0.0};
  if (j_->is_array() && j_->size() == 2 && (*j_)[0].is_number() && (*j_)[1].is_number())
    return {(*j_)[0].get<double>(), (*j_)[1].get<double>()};
  fail("expected a number or [re, im]");
}

CVec Node::as_vector() const {
  const std::size_t n = size();
  CVec v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = (*this)[i].as_complex();
  return v;
}

CMat Node::as_matrix() const {
  const std::size_t r = size();
  if (r == 0) return CMat(0, 0);
  const std::size_t c = (*this)[0].size();
  CMat m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  for (std::size_t i = 0; i < r; ++i) {
    Node row = (*this)[i];
    if (row.size() != c) row.fail("ragged matrix row");
    for (std::size_t j = 0; j < c; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].as_complex();
  }
  return m;
}

std::vector<int> Node::as_ints() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].as_int());
  return out;
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const CVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

json to_json(const CMat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    a.push_back(row);
  }
  return a;
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

void write_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot write file");
  out << doc.dump(2) << "\n";
}

void check_header(const Node& doc, const std::string& expected) {
  if (!doc.raw().is_object()) doc.fail("expected a JSON object");
  const int v = doc["schema_version"].as_int();
  if (v != kSchemaVersion) doc["schema_version"].fail("unsupported schema version " + std::to_string(v));
  if (!expected.empty()) {
    const std::string t = doc["type"].as_string();
    if (t != expected) doc["type"].fail("expected type \"" + expected + "\", got \"" + t + "\"");
  }
}

json header(const std::string& type) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["type"] = type;
  return j;
}

GroupPresentation group_from_json(const Node& n) {
  std::vector<std::string> el;
  Node e = n["elements"];
  for (std::size_t i = 0; i < e.size(); ++i) el.push_back(e[i].as_string());
  std::vector<std::vector<int>> mul;
  Node t = n["table"];
  for (std::size_t i = 0; i < t.size(); ++i) mul.push_back(t[i].as_ints());
  const int id = n.has("identity") ? n["identity"].as_int() : 0;
  try {
    return GroupPresentation::from_table(el, mul, id);
  } catch (const std::exception& ex) {
    n.fail(ex.what());
  }
}

json group_to_json(const GroupPresentation& g) {
  json j;
  j["elements"] = g.elements;
  j["table"] = g.mul;
  j["identity"] = g.identity;
  return j;
}

namespace {

template <class F>
auto guarded(const Node& n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& ex) {
    n.fail(ex.what());
  }
}

std::vector<CMat> matrices(const Node& n) {
  std::vector<CMat> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(n[i].as_matrix());
  return out;
}

json matrices_to_json(const std::vector<CMat>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(to_json(m));
  return a;
}

}  // namespace

std::shared_ptr<const Backend> backend_from_json(const Node& n, const Tolerance& tol) {
  if (n.raw().is_string()) {
    const std::string name = n.as_string();
    return guarded(n, [&] { return std::make_shared<const Backend>(builtin_backend(name, tol)); });
  }
  Backend base = guarded(n, [&] {
    if (n.has("name")) return builtin_backend(n["name"].as_string(), tol);
    const std::string kind = n["kind"].as_string();
    GroupPresentation g = group_from_json(n["group"]);
    if (kind == "dual") return Backend::dual_group(g, tol);
    if (kind != "finite") n["kind"].fail("kind must be \"finite\" or \"dual\"");
    std::vector<Irrep> irreps;
    Node ir = n["irreps"];
    for (std::size_t i = 0; i < ir.size(); ++i) {
      Irrep u;
      u.label = ir[i]["label"].as_string();
      u.rep.pi = matrices(ir[i]["pi"]);
      if (ir[i].has("rho")) u.rho = ir[i]["rho"].as_matrix();
      irreps.push_back(std::move(u));
    }
    return Backend::finite_group(g, irreps, tol);
  });
  if (!n.has("twist")) return std::make_shared<const Backend>(std::move(base));
  CVec w = n["twist"].as_vector();
  return guarded(n["twist"], [&] { return std::make_shared<const Backend>(Backend::twisted(base, w, tol)); });
}

json backend_to_json(const Backend& be) {
  json j;
  if (!be.name().empty()) {
    if (!be.is_twisted()) return be.name();
    j["name"] = be.name();
  } else if (be.kind() == BackendKind::DualGroup) {
    j["kind"] = "dual";
    j["group"] = group_to_json(be.group());
  } else {
    j["kind"] = "finite";
    j["group"] = group_to_json(be.group());
    json irs = json::array();
    for (const auto& u : be.irreps()) {
      json r;
      r["label"] = u.label;
      r["pi"] = matrices_to_json(u.rep.pi);
      r["rho"] = to_json(u.rho);
      irs.push_back(r);
    }
    j["irreps"] = irs;
  }
  if (be.is_twisted()) j["twist"] = to_json(*be.twist());
  return j;
}

std::shared_ptr<const Backend> resolve_backend(const std::string& name_or_path, const Tolerance& tol) {
  std::ifstream probe(name_or_path);
  if (!probe) {
    try {
      return std::make_shared<const Backend>(builtin_backend(name_or_path, tol));
    } catch (const std::exception& ex) {
      throw InputError("--backend: " + name_or_path + " is neither a file nor a builtin backend (" + ex.what() + ")");
    }
  }
  json doc = read_file(name_or_path);
  Node root(doc, name_or_path);
  check_header(root, "backend");
  return backend_from_json(root["backend"], tol);
}

FdCStarAlgebra algebra_from_json(const Node& n) {
  std::vector<int> blocks = n["blocks"].as_ints();
  for (int b : blocks)
    if (b < 1) n["blocks"].fail("block sizes must be positive");
  return FdCStarAlgebra(blocks);
}

json algebra_to_json(const FdCStarAlgebra& a) {
  json j;
  j["blocks"] = a.blocks();
  return j;
}

Correspondence correspondence_from_json(const Node& n, const FdCStarAlgebra& a) {
  Correspondence m;
  m.algebra = a;
  m.dim = n["dim"].as_int();
  if (m.dim < 0) n["dim"].fail("negative dimension");
  if (m.dim == 0) return Correspondence::zero(a);
  m.right = matrices(n["right"]);
  m.left = matrices(n["left"]);
  Node in = n["inner"];
  for (std::size_t i = 0; i < in.size(); ++i) {
    std::vector<CVec> row;
    for (std::size_t j = 0; j < in[i].size(); ++j) row.push_back(in[i][j].as_vector());
    m.inner.push_back(std::move(row));
  }
  const auto ad = static_cast<std::size_t>(a.dim());
  const auto d = static_cast<std::size_t>(m.dim);
  if (m.right.size() != ad) n["right"].fail("expected one matrix per algebra basis element");
  if (m.left.size() != ad) n["left"].fail("expected one matrix per algebra basis element");
  for (std::size_t k = 0; k < ad; ++k) {
    if (m.right[k].rows() != m.dim || m.right[k].cols() != m.dim) n["right"][k].fail("wrong matrix size");
    if (m.left[k].rows() != m.dim || m.left[k].cols() != m.dim) n["left"][k].fail("wrong matrix size");
  }
  if (m.inner.size() != d) in.fail("expected dim x dim inner products");
  for (std::size_t i = 0; i < d; ++i) {
    if (m.inner[i].size() != d) in[i].fail("expected dim inner products");
    for (std::size_t j = 0; j < d; ++j)
      if (m.inner[i][j].size() != a.dim()) in[i][j].fail("inner product has the wrong length");
  }
  return m;
}

json correspondence_to_json(const Correspondence& m) {
  json j;
  j["dim"] = m.dim;
  if (m.dim == 0) return j;
  j["right"] = matrices_to_json(m.right);
  j["left"] = matrices_to_json(m.left);
  json in = json::array();
  for (const auto& row : m.inner) {
    json r = json::array();
    for (const auto& v : row) r.push_back(to_json(v));
    in.push_back(r);
  }
  j["inner"] = in;
  return j;
}

FunctorData functor_from_json(const Node& n, std::shared_ptr<const Backend> be) {
  FunctorData f;
  if (!be) be = backend_from_json(n["backend"]);
  f.backend = be;
  f.base = algebra_from_json(n["base"]);
  Node mods = n["modules"];
  if (mods.size() != static_cast<std::size_t>(be->num_irreps()))
    mods.fail("expected one module per irreducible (" + std::to_string(be->num_irreps()) + ")");
  for (std::size_t a = 0; a < mods.size(); ++a) f.modules.push_back(correspondence_from_json(mods[a], f.base));
  Node phi = n["phi"];
  for (std::size_t i = 0; i < phi.size(); ++i) {
    std::vector<int> t = phi[i]["irreps"].as_ints();
    if (t.size() != 3) phi[i]["irreps"].fail("expected [a, b, c]");
    for (int x : t)
      if (x < 0 || x >= be->num_irreps()) phi[i]["irreps"].fail("irrep index out of range");
    f.phi[{t[0], t[1], t[2]}] = matrices(phi[i]["maps"]);
  }
  return f;
}

json functor_to_json(const FunctorData& f) {
  json j = header("functor");
  j["backend"] = backend_to_json(*f.backend);
  j["base"] = algebra_to_json(f.base);
  json mods = json::array();
  for (const auto& m : f.modules) mods.push_back(correspondence_to_json(m));
  j["modules"] = mods;
  json phi = json::array();
  for (const auto& [key, maps] : f.phi) {
    json e;
    e["irreps"] = {std::get<0>(key), std::get<1>(key), std::get<2>(key)};
    e["maps"] = matrices_to_json(maps);
    phi.push_back(e);
  }
  j["phi"] = phi;
  return j;
}

GradedBundleData graded_from_json(const Node& n) {
  GradedBundleData g;
  g.group = group_from_json(n["group"]);
  g.base = algebra_from_json(n["base"]);
  Node fib = n["fibers"];
  if (fib.size() != static_cast<std::size_t>(g.group.size())) fib.fail("expected one fiber per group element");
  for (std::size_t i = 0; i < fib.size(); ++i) g.fibers.push_back(correspondence_from_json(fib[i], g.base));
  Node mult = n["mult"];
  for (std::size_t i = 0; i < mult.size(); ++i) {
    std::vector<int> p = mult[i]["pair"].as_ints();
    if (p.size() != 2 || p[0] < 0 || p[1] < 0 || p[0] >= g.group.size() || p[1] >= g.group.size())
      mult[i]["pair"].fail("expected a pair of group element indices");
    g.mult[{p[0], p[1]}] = mult[i]["map"].as_matrix();
  }
  return g;
}

json graded_to_json(const GradedBundleData& g) {
  json j = header("graded");
  j["group"] = group_to_json(g.group);
  j["base"] = algebra_to_json(g.base);
  json fib = json::array();
  for (const auto& m : g.fibers) fib.push_back(correspondence_to_json(m));
  j["fibers"] = fib;
  json mult = json::array();
  for (const auto& [key, map] : g.mult) {
    json e;
    e["pair"] = {key.first, key.second};
    e["map"] = to_json(map);
    mult.push_back(e);
  }
  j["mult"] = mult;
  return j;
}

ActionData action_from_json(const Node& n, std::shared_ptr<const Backend> be) {
  if (!be) be = backend_from_json(n["backend"]);
  FdCStarAlgebra b = algebra_from_json(n["algebra"]);
  const auto ng = static_cast<std::size_t>(be->group().size());
  const Eigen::Index d = b.dim();
  ActionData act;
  if (n.has("automorphisms")) {
    std::vector<CMat> autos = matrices(n["automorphisms"]);
    if (autos.size() != ng) n["automorphisms"].fail("expected one matrix per group element");
    for (std::size_t i = 0; i < ng; ++i)
      if (autos[i].rows() != d || autos[i].cols() != d) n["automorphisms"][i].fail("wrong matrix size");
    act = guarded(n, [&] { return ActionData::from_automorphisms(be, b, autos); });
  } else if (n.has("inner")) {
    Node in = n["inner"];
    if (in.size() != ng) in.fail("expected one entry per group element");
    std::vector<CMat> autos;
    for (std::size_t g = 0; g < ng; ++g) {
      std::vector<CMat> us = matrices(in[g]);
      if (us.size() != b.blocks().size()) in[g].fail("expected one unitary per block");
      CMat u = CMat::Zero(b.size(), b.size());
      for (std::size_t k = 0; k < us.size(); ++k) {
        const int s = b.blocks()[k];
        if (us[k].rows() != s || us[k].cols() != s) in[g][k].fail("wrong matrix size");
        u.block(b.offset(static_cast<int>(k)), b.offset(static_cast<int>(k)), s, s) = us[k];
      }
      CMat m(d, d);
      for (Eigen::Index k = 0; k < d; ++k)
        m.col(k) = b.from_matrix(u * b.to_matrix(b.basis(static_cast<int>(k))) * u.adjoint());
      autos.push_back(m);
    }
    act = guarded(n, [&] { return ActionData::from_automorphisms(be, b, autos); });
  } else if (n.has("grading")) {
    std::vector<CMat> blocks = matrices(n["grading"]);
    if (blocks.size() != ng) n["grading"].fail("expected one block per group element");
    for (std::size_t i = 0; i < ng; ++i)
      if (blocks[i].size() == 0)
        blocks[i] = CMat::Zero(d, 0);
      else if (blocks[i].rows() != d)
        n["grading"][i].fail("columns must have length dim B");
    act = guarded(n, [&] { return ActionData::from_grading(be, b, blocks); });
  } else {
    act.backend = be;
    act.algebra = b;
    act.kind = n.has("kind") && n["kind"].as_string() == "grading" ? ActionKind::Grading : ActionKind::Automorphism;
    act.module_maps = matrices(n["module_maps"]);
    if (act.module_maps.size() != static_cast<std::size_t>(be->hopf().dim))
      n["module_maps"].fail("expected one matrix per basis element of U(G)");
  }
  if (n.has("fixed_algebra")) {
    Node fa = n["fixed_algebra"];
    act.fixed_embedding = std::make_pair(algebra_from_json(fa["algebra"]), fa["embedding"].as_matrix());
  }
  return act;
}

json action_to_json(const ActionData& a) {
  json j = header("action");
  j["backend"] = backend_to_json(*a.backend);
  j["algebra"] = algebra_to_json(a.algebra);
  j["kind"] = a.kind == ActionKind::Grading ? "grading" : "automorphism";
  j["module_maps"] = matrices_to_json(a.module_maps);
  if (a.fixed_embedding) {
    json fa;
    fa["algebra"] = algebra_to_json(a.fixed_embedding->first);
    fa["embedding"] = to_json(a.fixed_embedding->second);
    j["fixed_algebra"] = fa;
  }
  return j;
}

CocycleData cocycle_from_json(const Node& n, const Backend& be) {
  return guarded(n, [&] {
    if (n.has("bicharacter")) return CocycleData::bicharacter(be, n["bicharacter"].as_int());
    if (n.has("trivial")) return CocycleData::trivial(be);
    CVec v = n["values"].as_vector();
    return CocycleData::from_values(be, v);
  });
}

json cocycle_to_json(const CocycleData& c) {
  json j = header("cocycle");
  j["values"] = to_json(c.original);
  return j;
}

EquivariantModule module_from_json(const Node& n, std::shared_ptr<const Backend> be) {
  ActionData act = action_from_json(n["action"], be);
  Node sum = n["summands"];
  if (sum.size() == 0) sum.fail("at least one summand is required");
  std::optional<EquivariantModule> m;
  for (std::size_t i = 0; i < sum.size(); ++i) {
    EquivariantModule part = EquivariantModule::regular(act);
    if (!sum[i].raw().is_null()) {
      const int a = sum[i].as_int();
      if (a < 0 || a >= act.backend->num_irreps()) sum[i].fail("irrep index out of range");
      part = EquivariantModule::tensor_irrep(part, a);
    }
    m = m ? EquivariantModule::direct_sum(*m, part) : part;
  }
  if (n.has("submodule")) {
    CMat basis = n["submodule"].as_matrix();
    if (basis.rows() != m->dim) n["submodule"].fail("basis columns must have the carrier dimension");
    m = guarded(n["submodule"], [&] { return EquivariantModule::submodule(*m, basis); });
  }
  return *m;
}

json report_to_json(const Report& r) {
  json a = json::array();
  for (const auto& c : r.checks) {
    json e;
    e["name"] = c.name;
    e["residual"] = c.residual;
    e["tolerance"] = c.tolerance;
    e["passed"] = c.passed;
    if (!c.detail.empty()) e["detail"] = c.detail;
    a.push_back(e);
  }
  return a;
}

}  // namespace qdual::io
