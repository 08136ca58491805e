// Property-map lattice tests: per-key flat lattice with an "unknown" top and
// "absent" as the missing-key state.

#include <catch2/catch_amalgamated.hpp>

#include "crusted/prop_map.hpp"
#include "support/rng.hpp"

#include <vector>

using crusted::PropertyMap;
using crusted::PropValue;

namespace {

const std::vector<std::string> kKeys = {"blade", "door", "lamp"};
const std::vector<std::string> kAtoms = {"on", "off", "open", "closed"};

PropertyMap random_map(testsupport::Rng &rng) {
  PropertyMap m;
  for (const auto &k : kKeys) {
    switch (testsupport::pick_int(rng, 0, 3)) {
    case 0:
      break; // absent
    case 1:
      m.assign_unknown(k);
      break;
    default:
      m.assign(k, kAtoms[static_cast<size_t>(
                     testsupport::pick_int(rng, 0, 3))]);
      break;
    }
  }
  return m;
}

} // namespace

TEST_CASE("pinned property joins") {
  PropertyMap a, b;
  a.assign("blade", "off");
  b.assign("blade", "off");
  CHECK(PropertyMap::join(a, b).entails("blade", "off"));

  b.assign("blade", "on");
  auto j = PropertyMap::join(a, b);
  REQUIRE(j.get("blade"));
  CHECK(j.get("blade")->unknown); // disagreement -> unknown

  // Present on one side only joins to unknown, absent on both stays absent.
  PropertyMap c;
  c.assign("door", "closed");
  auto j2 = PropertyMap::join(c, PropertyMap());
  REQUIRE(j2.get("door"));
  CHECK(j2.get("door")->unknown);
  CHECK_FALSE(j2.get("lamp"));

  // Entailment rejects unknown and absent.
  PropertyMap m;
  m.assign("door", "closed");
  CHECK(m.entails("door", "closed"));
  CHECK_FALSE(m.entails("door", "open"));
  CHECK_FALSE(m.entails("blade", "off"));
  m.assign_unknown("door");
  CHECK_FALSE(m.entails("door", "closed"));

  CHECK(m.to_string() == "{door=?}");
}

TEST_CASE("property map lattice laws", "[property]") {
  auto rng = testsupport::make_rng(0xFACE0001);
  for (int i = 0; i < 1500; ++i) {
    PropertyMap a = random_map(rng);
    PropertyMap b = random_map(rng);
    PropertyMap c = random_map(rng);

    CHECK(PropertyMap::join(a, a) == a);
    CHECK(PropertyMap::join(a, b) == PropertyMap::join(b, a));
    CHECK(PropertyMap::join(PropertyMap::join(a, b), c) ==
          PropertyMap::join(a, PropertyMap::join(b, c)));

    PropertyMap j = PropertyMap::join(a, b);
    CHECK(a.leq(j));
    CHECK(b.leq(j));

    CHECK(a.leq(a));
    if (a.leq(b) && b.leq(a))
      CHECK(a == b);
    if (a.leq(b) && b.leq(c))
      CHECK(a.leq(c));

    // Joining cannot invent an entailment neither side had.
    for (const auto &k : kKeys)
      for (const auto &atom : kAtoms)
        if (j.entails(k, atom))
          CHECK((a.entails(k, atom) && b.entails(k, atom)));
  }
}
