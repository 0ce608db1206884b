#include "qdual/cli.hpp"

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "qdual/io.hpp"

namespace qdual::cli {

using io::json;
using io::Node;

const std::vector<std::string>& verbs() {
  static const std::vector<std::string> v = {"validate", "validate-graded", "build",         "spectral", "roundtrip",
                                             "module-functor", "fullness", "cocycle-check", "deform"};
  return v;
}

namespace {

struct Input {
  std::string path;
  json doc;
};

class Job {
 public:
  Job(const JobConfig& c, Tolerance tol) : cfg_(c), tol_(tol) {
    for (const auto& p : c.inputs) {
      Input in{p, io::read_file(p)};
      io::check_header(Node(in.doc, p), "");
      const std::string type = Node(in.doc, p)["type"].as_string();
      if (docs_.count(type)) throw io::InputError(p + ": a second \"" + type + "\" document was given");
      docs_[type] = std::move(in);
    }
    if (!c.backend.empty()) backend_ = io::resolve_backend(c.backend, tol);
  }

  bool has(const std::string& type) const { return docs_.count(type) > 0; }

  Node doc(const std::string& type) const {
    auto it = docs_.find(type);
    if (it == docs_.end()) throw io::InputError("--input: verb " + cfg_.verb + " needs a \"" + type + "\" document");
    return Node(it->second.doc, it->second.path);
  }

  /// --backend wins; otherwise the backend embedded in the first document that has one.
  std::shared_ptr<const Backend> backend(const Node& n) {
    if (backend_) return backend_;
    backend_ = io::backend_from_json(n["backend"], tol_);
    return backend_;
  }

  FunctorData functor() {
    if (has("functor")) {
      Node n = doc("functor");
      return io::functor_from_json(n, backend(n));
    }
    if (has("graded")) {
      GradedBundleData g = io::graded_from_json(doc("graded"));
      return from_graded(g, tol_);
    }
    throw io::InputError("--input: verb " + cfg_.verb + " needs a \"functor\" or \"graded\" document");
  }

  ActionData action() {
    Node n = doc("action");
    return io::action_from_json(n, backend(n));
  }

  const Tolerance& tol() const { return tol_; }
  std::uint64_t seed() const { return cfg_.seed; }

 private:
  const JobConfig& cfg_;
  Tolerance tol_;
  std::map<std::string, Input> docs_;
  std::shared_ptr<const Backend> backend_;
};

struct Outcome {
  Report report;
  json results = json::object();
};

json dims_of(const FunctorData& f) {
  json d = json::array();
  for (int a = 0; a < f.backend->num_irreps(); ++a) {
    json e;
    e["irrep"] = f.backend->irrep(a).label;
    e["dim_H"] = f.backend->irrep(a).dim;
    e["dim_M"] = f.module(a).dim;
    d.push_back(e);
  }
  return d;
}

Outcome do_validate(Job& job) {
  Outcome o;
  FunctorData f = job.functor();
  o.report = validate_wutf(f, job.tol());
  o.results["modules"] = dims_of(f);
  return o;
}

Outcome do_validate_graded(Job& job) {
  Outcome o;
  GradedBundleData g = io::graded_from_json(job.doc("graded"));
  o.report.append(validate_graded(g, job.tol()), "graded.");
  if (!o.report.ok()) return o;
  FunctorData f = from_graded(g, job.tol());
  o.report.append(validate_wutf(f, job.tol()), "functor.");
  o.results["modules"] = dims_of(f);
  return o;
}

Outcome do_build(Job& job) {
  Outcome o;
  FunctorData f = job.functor();
  o.results["modules"] = dims_of(f);
  Report v = validate_wutf(f, job.tol());
  if (!v.ok()) {
    o.report.append(v, "functor.");
    return o;
  }
  BuildResult b = build(f, job.tol(), job.seed());
  o.report.append(b.validation, "functor.");
  o.report.append(b.report, "algebra.");
  if (b.algebra) {
    o.results["dim"] = b.algebra->dim();
    RealizedAction ra = realize(*b.algebra, job.tol(), job.seed());
    o.results["blocks"] = ra.action.algebra.blocks();
  }
  return o;
}

Outcome do_spectral(Job& job) {
  Outcome o;
  ActionData act = job.action();
  o.report.append(validate_action(act, job.tol()), "action.");
  if (!o.report.ok()) return o;
  SpectralFunctor s = spectral_functor(act, job.tol(), job.seed());
  o.report.append(check_spectral(act, s, job.tol()), "spectral.");
  o.report.append(validate_wutf(s.functor, job.tol()), "functor.");
  o.results["fixed_algebra"] = io::algebra_to_json(s.fixed.algebra);
  o.results["modules"] = dims_of(s.functor);
  o.results["functor"] = io::functor_to_json(s.functor);
  return o;
}

Outcome do_roundtrip(Job& job) {
  Outcome o;
  if (job.has("action")) {
    ActionData act = job.action();
    IsomorphismCertificate c = roundtrip_check(act, job.tol(), job.seed());
    o.report = c.report;
    o.results["certificate"] = io::to_json(c.map);
  } else {
    FunctorData f = job.functor();
    NaturalIsomorphism n = functor_roundtrip(f, job.tol(), job.seed());
    o.report = n.report;
    json comps = json::array();
    for (const auto& c : n.components) comps.push_back(io::to_json(c));
    o.results["components"] = comps;
  }
  return o;
}

Outcome do_module_functor(Job& job) {
  Outcome o;
  Node n = job.doc("module");
  EquivariantModule m = io::module_from_json(n, job.backend(n["action"]));
  o.report.append(validate_module(m, job.tol()), "module.");
  if (!o.report.ok()) return o;
  ModuleFunctor mf = module_functor(m, job.tol(), job.seed());
  o.report.append(validate_wutf(mf.functor, job.tol()), "functor.");
  o.results["endomorphisms"] = io::algebra_to_json(mf.functor.base);
  o.results["modules"] = dims_of(mf.functor);
  return o;
}

Outcome do_fullness(Job& job) {
  Outcome o;
  Node n = job.doc("module");
  EquivariantModule m = io::module_from_json(n, job.backend(n["action"]));
  o.report.append(validate_module(m, job.tol()), "module.");
  if (!o.report.ok()) return o;
  FullnessResult r = fullness_check(m, job.tol());
  o.report.append(r.report, "fullness.");
  o.results["full"] = r.full;
  o.results["rank"] = r.rank;
  o.results["full_rank"] = r.full_rank;
  o.results["domination"] = r.domination;
  json vs = json::array();
  for (const auto& [a, v] : r.vectors) vs.push_back({{"irrep", a}, {"vector", io::to_json(v)}});
  o.results["vectors"] = vs;
  return o;
}

Outcome do_cocycle_check(Job& job) {
  Outcome o;
  Node n = job.doc("cocycle");
  auto be = job.backend(n);
  CocycleData c = io::cocycle_from_json(n, *be);
  o.report.append(check_cocycle(*be, c, job.tol()), "cocycle.");
  UElement u = u_element(*be, c, job.tol());
  o.report.append(u.report, "u.");
  o.results["phase"] = io::to_json(c.phase);
  o.results["u"] = io::to_json(u.value);
  return o;
}

Outcome do_deform(Job& job, bool cross) {
  Outcome o;
  if (cross) {
    FunctorData f = job.functor();
    CocycleData c = io::cocycle_from_json(job.doc("cocycle"), *f.backend);
    o.report = deform_cross_test(f, c, job.tol(), job.seed());
    o.results["functor"] = io::functor_to_json(deform_functor(f, c, job.tol()));
    return o;
  }
  ActionData act = job.action();
  CocycleData c = io::cocycle_from_json(job.doc("cocycle"), *act.backend);
  DeformResult d = deform_action(act, c, job.tol(), job.seed());
  o.report = d.report;
  o.results["dim"] = d.algebra->dim();
  o.results["center_dim"] = center_dimension(*d.algebra, job.tol());
  json maps = json::array();
  for (int i = 0; i < d.algebra->dim(); ++i) maps.push_back(io::to_json(d.algebra->left_mult(act.algebra.basis(i))));
  o.results["left_multiplication"] = maps;
  return o;
}

Outcome dispatch(Job& job, const JobConfig& c) {
  if (c.verb == "validate") return do_validate(job);
  if (c.verb == "validate-graded") return do_validate_graded(job);
  if (c.verb == "build") return do_build(job);
  if (c.verb == "spectral") return do_spectral(job);
  if (c.verb == "roundtrip") return do_roundtrip(job);
  if (c.verb == "module-functor") return do_module_functor(job);
  if (c.verb == "fullness") return do_fullness(job);
  if (c.verb == "cocycle-check") return do_cocycle_check(job);
  if (c.verb == "deform") return do_deform(job, c.cross_test);
  throw io::InputError("unknown verb " + c.verb);
}

void emit(const JobConfig& c, const json& report) {
  if (c.report.empty())
    std::cout << report.dump(2) << "\n";
  else
    io::write_file(c.report, report);
}

}  // namespace

int run(const JobConfig& c, std::ostream& summary) {
  json rep = io::header("report");
  rep["verb"] = c.verb;
  rep["seed"] = c.seed;
  rep["inputs"] = c.inputs;
  Tolerance tol;
  if (c.tolerance) tol.tau = *c.tolerance;
  rep["tolerance"] = tol.tau;

  int status = kPass;
  try {
    if (c.tolerance && !(*c.tolerance > 0)) throw io::InputError("--tolerance: must be positive");
    Job job(c, tol);
    Outcome o;
    try {
      o = dispatch(job, c);
    } catch (const io::InputError&) {
      throw;
    } catch (const std::exception& ex) {
      // data that loads but violates a precondition of the computation
      o.report.add_flag("aborted", false, ex.what());
    }
    status = o.report.ok() ? kPass : kValidationFailure;
    rep["status"] = status == kPass ? "pass" : "fail";
    rep["max_residual"] = o.report.max_residual();
    rep["checks"] = io::report_to_json(o.report);
    rep["results"] = o.results;
    int failed = 0;
    for (const auto& ch : o.report.checks)
      if (!ch.passed) {
        ++failed;
        summary << "  FAIL " << ch.name << " residual " << ch.residual << " > " << ch.tolerance
                << (ch.detail.empty() ? "" : " (" + ch.detail + ")") << "\n";
      }
    summary << c.verb << ": " << (status == kPass ? "PASS" : "FAIL") << " (" << o.report.checks.size() << " checks, "
            << failed << " failed, max residual " << o.report.max_residual() << ")\n";
  } catch (const std::exception& ex) {
    // io::InputError and errors raised while interpreting the documents.
    status = kInputError;
    rep["status"] = "input-error";
    rep["error"] = ex.what();
    summary << c.verb << ": INPUT ERROR " << ex.what() << "\n";
  }
  try {
    emit(c, rep);
  } catch (const std::exception& ex) {
    summary << "cannot write report: " << ex.what() << "\n";
    return kInputError;
  }
  return status;
}

int main(int argc, char** argv) {
  CLI::App app{"qdual: reconstruction, spectral functors and deformations of quantum group actions"};
  JobConfig c;
  double tol = 0.0;
  app.add_option("verb", c.verb, "Action to run")->required()->check(CLI::IsMember(verbs()));
  app.add_option("--backend", c.backend, "Builtin backend name (S3, Z4, Z2xZ2, dual:...) or backend document");
  app.add_option("--input", c.inputs, "Input document (repeatable)");
  auto* t = app.add_option("--tolerance", tol, "Residual tolerance");
  app.add_option("--report", c.report, "Report path (default: stdout)");
  app.add_option("--seed", c.seed, "Seed for randomized checks");
  app.add_flag("--cross-test", c.cross_test, "deform: compare the deformed functor against the deformed action");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }
  if (*t) c.tolerance = tol;
  return run(c, c.report.empty() ? std::cerr : std::cout);
}

}  // namespace qdual::cli
