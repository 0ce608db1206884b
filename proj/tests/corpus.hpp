#pragma once

// Loads the shipped JSON fixtures.

#include <string>

#include "qdual/io.hpp"

#ifndef QDUAL_FIXTURE_DIR
#error "QDUAL_FIXTURE_DIR must be defined"
#endif

namespace qdual::testing {

inline std::string fixture_path(const std::string& name) { return std::string(QDUAL_FIXTURE_DIR) + "/" + name; }

inline io::json fixture_doc(const std::string& name) { return io::read_file(fixture_path(name)); }

inline ActionData load_action(const std::string& name) {
  io::json d = fixture_doc(name);
  return io::action_from_json(io::Node(d, name), nullptr);
}

inline FunctorData load_functor(const std::string& name) {
  io::json d = fixture_doc(name);
  if (d["type"] == "graded") return from_graded(io::graded_from_json(io::Node(d, name)));
  return io::functor_from_json(io::Node(d, name), nullptr);
}

inline GradedBundleData load_graded(const std::string& name) {
  io::json d = fixture_doc(name);
  return io::graded_from_json(io::Node(d, name));
}

inline EquivariantModule load_module(const std::string& name) {
  io::json d = fixture_doc(name);
  return io::module_from_json(io::Node(d, name), nullptr);
}

inline CocycleData load_cocycle(const std::string& name, const Backend& be) {
  io::json d = fixture_doc(name);
  return io::cocycle_from_json(io::Node(d, name), be);
}

}  // namespace qdual::testing
