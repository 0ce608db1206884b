#include <doctest.h>

#include "corpus.hpp"
#include "support.hpp"

using namespace qdual;
using namespace qdual::testing;

TEST_CASE("equivariant modules validate") {
  for (const std::string name : {"z2_swap_regular.module.json", "z2_swap_sign.module.json",
                                 "s3_translation_std.module.json", "z2_trivial_c2_ideal.module.json"})
    CHECK(validate_module(load_module(name)).ok());
}

TEST_CASE("the regular module reproduces the spectral functor") {
  for (const std::string name : {"z2_swap.action.json", "s3_translation.action.json", "m3_clock_shift.action.json"}) {
    NaturalIsomorphism n = regular_module_comparison(load_action(name));
    CHECK(n.report.ok());
  }
}

TEST_CASE("B + B has End = M_2(A) and doubled modules") {
  ActionData act = load_action("z2_swap.action.json");
  EquivariantModule b = EquivariantModule::regular(act);
  ModuleFunctor single = module_functor(b);
  ModuleFunctor twice = module_functor(EquivariantModule::direct_sum(b, b));
  CHECK(validate_wutf(twice.functor).ok());
  CHECK(twice.functor.base.dim() == 4 * single.functor.base.dim());
  for (int a = 0; a < act.backend->num_irreps(); ++a)
    CHECK(twice.functor.module(a).dim == 4 * single.functor.module(a).dim);
}

TEST_CASE("trivial action on C: modules are intertwiner spaces") {
  ActionData act = load_action("s3_trivial_c.action.json");
  const Backend& be = *act.backend;
  const int s = be.irrep_index("std");
  EquivariantModule m = EquivariantModule::tensor_irrep(EquivariantModule::regular(act), s);
  ModuleFunctor mf = module_functor(m);
  CHECK(validate_wutf(mf.functor).ok());
  for (int a = 0; a < be.num_irreps(); ++a) {
    Rep target = be.tensor(be.rep(s), be.rep(a));
    CHECK(mf.functor.module(a).dim == static_cast<int>(mor_space(be, be.rep(s), target).size()));
  }
}

TEST_CASE("fullness") {
  SUBCASE("B is full with Y from the unit") {
    FullnessResult r = fullness_check(load_module("z2_swap_regular.module.json"));
    CHECK(r.full);
    CHECK(r.report.ok());
    CHECK(r.domination > 0.0);
  }
  SUBCASE("B (x) H_U is full") {
    CHECK(fullness_check(load_module("s3_translation_std.module.json")).full);
    CHECK(fullness_check(load_module("z2_swap_sign.module.json")).full);
  }
  SUBCASE("a proper ideal is not full") {
    FullnessResult r = fullness_check(load_module("z2_trivial_c2_ideal.module.json"));
    CHECK_FALSE(r.full);
    CHECK(r.rank == 1);
    CHECK(r.full_rank == 2);
  }
}

TEST_CASE("invalid modules are rejected") {
  EquivariantModule m = load_module("z2_swap_regular.module.json");
  m.module_maps[1] = CMat::Identity(2, 2) * 2.0;
  CHECK_FALSE(validate_module(m).ok());
  CHECK_THROWS_AS(module_functor(m), ContractViolation);
}
