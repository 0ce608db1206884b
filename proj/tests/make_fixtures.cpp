// Writes the JSON fixture corpus into the directory given on the command line.

#include <filesystem>
#include <iostream>

#include "qdual/io.hpp"
#include "support.hpp"

using namespace qdual;
using io::json;

namespace {

std::filesystem::path out_dir;

void put(const std::string& name, json doc) {
  io::write_file((out_dir / name).string(), doc);
  std::cout << name << "\n";
}

json action_doc(const std::string& backend, const FdCStarAlgebra& b, const std::string& field, json data) {
  json j = io::header("action");
  j["backend"] = backend;
  j["algebra"] = io::algebra_to_json(b);
  j[field] = std::move(data);
  return j;
}

json matrices(const std::vector<CMat>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(io::to_json(m));
  return a;
}

json module_doc(json action, json summands, std::optional<CMat> sub = std::nullopt) {
  json j = io::header("module");
  j["action"] = std::move(action);
  j["summands"] = std::move(summands);
  if (sub) j["submodule"] = io::to_json(*sub);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <dir>\n";
    return 2;
  }
  out_dir = argv[1];
  std::filesystem::create_directories(out_dir);

  // S3 acting on C(S3) by left translation.
  {
    const GroupPresentation g = symmetric_group_3();
    std::vector<CMat> autos;
    for (int x = 0; x < 6; ++x) {
      CMat p = CMat::Zero(6, 6);
      for (int h = 0; h < 6; ++h) p(g.mul[x][h], h) = 1.0;
      autos.push_back(p);
    }
    json a = action_doc("S3", FdCStarAlgebra(std::vector<int>(6, 1)), "automorphisms", matrices(autos));
    put("s3_translation.action.json", a);
    put("s3_translation_regular.module.json", module_doc(a, json::array({nullptr})));
    put("s3_translation_std.module.json", module_doc(a, json::array({2})));
  }
  // Z2 swapping the summands of C + C.
  {
    CMat sw(2, 2);
    sw << 0, 1, 1, 0;
    json a = action_doc("Z2", FdCStarAlgebra({1, 1}), "automorphisms", matrices({CMat::Identity(2, 2), sw}));
    put("z2_swap.action.json", a);
    put("z2_swap_regular.module.json", module_doc(a, json::array({nullptr})));
    put("z2_swap_sign.module.json", module_doc(a, json::array({1})));
  }
  // Trivial actions.
  {
    const CMat id = CMat::Identity(2, 2);
    json a = action_doc("Z2", FdCStarAlgebra({1, 1}), "automorphisms", matrices({id, id}));
    put("z2_trivial_c2.action.json", a);
    CMat e(2, 1);
    e << 1, 0;
    put("z2_trivial_c2_ideal.module.json", module_doc(a, json::array({nullptr}), e));
    const CMat one = CMat::Identity(1, 1);
    put("s3_trivial_c.action.json",
        action_doc("S3", FdCStarAlgebra({1}), "automorphisms", matrices(std::vector<CMat>(6, one))));
  }
  // Inner Z2 action on M2 by conjugation with diag(1, -1).
  {
    CMat z(2, 2);
    z << 1, 0, 0, -1;
    json inner = json::array({json::array({io::to_json(CMat(CMat::Identity(2, 2)))}), json::array({io::to_json(z)})});
    put("m2_inner_z2.action.json", action_doc("Z2", FdCStarAlgebra({2}), "inner", inner));
  }
  // Z3 grading of M3 by i - j mod 3, as an action of the dual.
  {
    FdCStarAlgebra m3({3});
    std::vector<CMat> blocks(3, CMat::Zero(9, 0));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CMat& bl = blocks[((i - j) % 3 + 3) % 3];
        bl.conservativeResize(9, bl.cols() + 1);
        bl.col(bl.cols() - 1) = m3.basis(i * 3 + j);
      }
    put("m3_clock_shift.action.json", action_doc("dual:Z3", m3, "grading", matrices(blocks)));
    put("clock_shift.graded.json", io::graded_to_json(testing::clock_shift_bundle()));
  }
  // Z2 x Z2 group algebra as the functions on its dual, graded by the characters.
  {
    std::vector<CMat> blocks;
    for (int x = 0; x < 4; ++x) {
      CMat col(4, 1);
      for (int k = 0; k < 4; ++k) col(k, 0) = (((k / 2) * (x / 2) + (k % 2) * (x % 2)) % 2) ? -1.0 : 1.0;
      blocks.push_back(col);
    }
    put("z2xz2_group_algebra.action.json",
        action_doc("dual:Z2xZ2", FdCStarAlgebra(std::vector<int>(4, 1)), "grading", matrices(blocks)));
    put("z2xz2_group_algebra.graded.json",
        io::graded_to_json(testing::trivial_bundle(product_group(cyclic_group(2), cyclic_group(2)))));
    json c = io::header("cocycle");
    c["backend"] = "dual:Z2xZ2";
    c["bicharacter"] = 2;
    put("z2xz2_bicharacter.cocycle.json", c);
    json t = io::header("cocycle");
    t["backend"] = "dual:Z2xZ2";
    t["trivial"] = true;
    put("z2xz2_trivial.cocycle.json", t);
  }
  // S3 acting on M3 by permutation matrices, and its spectral functor.
  {
    auto be = std::make_shared<const Backend>(builtin_backend("S3"));
    FdCStarAlgebra m3({3});
    const int perm[6][3] = {{0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}};
    json inner = json::array();
    std::vector<CMat> autos;
    for (int x = 0; x < 6; ++x) {
      CMat p = CMat::Zero(3, 3);
      for (int i = 0; i < 3; ++i) p(perm[x][i], i) = 1.0;
      inner.push_back(json::array({io::to_json(p)}));
    }
    json a = action_doc("S3", m3, "inner", inner);
    put("m3_permutation_s3.action.json", a);
    ActionData act = io::action_from_json(io::Node(a, "m3_permutation_s3"), be);
    put("s3_spectral.functor.json", io::functor_to_json(spectral_functor(act).functor));
  }
  // Trivial Z2 on C with M_sign = 0: a non-full functor.
  {
    auto be = std::make_shared<const Backend>(builtin_backend("Z2"));
    FunctorData f;
    f.backend = be;
    f.base = FdCStarAlgebra({1});
    f.modules = {Correspondence::identity(f.base), Correspondence::zero(f.base)};
    f.phi[{0, 0, 0}] = {CMat::Ones(1, 1)};
    f.phi[{0, 1, 1}] = {CMat::Zero(0, 0)};
    f.phi[{1, 0, 1}] = {CMat::Zero(0, 0)};
    f.phi[{1, 1, 0}] = {CMat::Zero(1, 0)};
    put("z2_nonfull.functor.json", io::functor_to_json(f));
  }
  return 0;
}
