#pragma once

// JSON documents for backends, actions, functors, graded bundles, cocycles,
// modules and reports.
//
// Complex numbers are written as [re, im] (plain numbers are accepted on
// input). Matrices are arrays of rows. Every document carries "type" and
// "schema_version".

#include <memory>
#include <string>

#include <json.hpp>

#include "qdual/deform.hpp"
#include "qdual/module.hpp"
#include "qdual/reconstruct.hpp"

namespace qdual::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Malformed input; the message starts with "file: location:".
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A JSON value together with where it came from, for error messages.
class Node {
 public:
  Node(const json& j, std::string where) : j_(&j), where_(std::move(where)) {}

  const json& raw() const { return *j_; }
  const std::string& where() const { return where_; }
  bool has(const std::string& key) const;
  Node operator[](const std::string& key) const;
  Node operator[](std::size_t i) const;
  std::size_t size() const;

  int as_int() const;
  double as_double() const;
  std::string as_string() const;
  cplx as_complex() const;
  CVec as_vector() const;
  CMat as_matrix() const;
  std::vector<int> as_ints() const;

  [[noreturn]] void fail(const std::string& msg) const;

 private:
  const json* j_;
  std::string where_;
};

json to_json(cplx z);
json to_json(const CVec& v);
json to_json(const CMat& m);

/// Reads and parses a file; throws InputError on I/O or syntax errors.
json read_file(const std::string& path);
/// Pretty-printed with a trailing newline.
void write_file(const std::string& path, const json& doc);

/// Checks "type" (when expected is non-empty) and "schema_version".
void check_header(const Node& doc, const std::string& expected);
json header(const std::string& type);

GroupPresentation group_from_json(const Node& n);
json group_to_json(const GroupPresentation& g);

/// A builtin name such as "S3" or "dual:Z2xZ2", or an object
/// {"name"} / {"kind", "group", "irreps"} with an optional "twist".
std::shared_ptr<const Backend> backend_from_json(const Node& n, const Tolerance& tol = {});
json backend_to_json(const Backend& be);
/// Builtin name, or a path to a document of type "backend".
std::shared_ptr<const Backend> resolve_backend(const std::string& name_or_path, const Tolerance& tol = {});

FdCStarAlgebra algebra_from_json(const Node& n);
json algebra_to_json(const FdCStarAlgebra& a);

Correspondence correspondence_from_json(const Node& n, const FdCStarAlgebra& a);
json correspondence_to_json(const Correspondence& m);

FunctorData functor_from_json(const Node& n, std::shared_ptr<const Backend> be);
json functor_to_json(const FunctorData& f);

GradedBundleData graded_from_json(const Node& n);
json graded_to_json(const GradedBundleData& g);

/// "automorphisms" (per group element), "inner" (unitaries per group element
/// and block), "grading" (spanning columns per grade) or raw "module_maps".
ActionData action_from_json(const Node& n, std::shared_ptr<const Backend> be);
json action_to_json(const ActionData& a);

/// "values" (n^2 coefficients), "bicharacter": n, or "trivial": true.
CocycleData cocycle_from_json(const Node& n, const Backend& be);
json cocycle_to_json(const CocycleData& c);

/// {"action": {...}, "summands": [null | irrep index, ...], "submodule": matrix}
EquivariantModule module_from_json(const Node& n, std::shared_ptr<const Backend> be);

json report_to_json(const Report& r);

}  // namespace qdual::io
