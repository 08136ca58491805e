// Typestate lattice tests: pinned joins the engine relies on, plus
// property-based checks of the lattice laws over randomly generated states.

#include <catch2/catch_amalgamated.hpp>

#include "crusted/typestate.hpp"
#include "support/rng.hpp"

using crusted::Typestate;

namespace {

Typestate random_state(testsupport::Rng &rng) {
  Typestate t;
  int atoms = static_cast<int>(testsupport::pick_int(rng, 0, 3));
  for (int i = 0; i < atoms; ++i) {
    switch (testsupport::pick_int(rng, 0, 9)) {
    case 0: t = Typestate::join(t, Typestate::uninit()); break;
    case 1: t = Typestate::join(t, Typestate::init()); break;
    case 2: t = Typestate::join(t, Typestate::moved()); break;
    case 3: t = Typestate::join(t, Typestate::released()); break;
    case 4: t = Typestate::join(t, Typestate::finalized()); break;
    case 5: t = Typestate::join(t, Typestate::shared_ref()); break;
    case 6: t = Typestate::join(t, Typestate::excl_ref()); break;
    case 7: t = Typestate::join(t, Typestate::unknown()); break;
    case 8:
      t = Typestate::join(
          t, Typestate::sentinel(testsupport::pick_int(rng, -2, 2)));
      break;
    default:
      t = Typestate::join(
          t, Typestate::owned(
                 static_cast<uint32_t>(testsupport::pick_int(rng, 0, 3))));
      break;
    }
  }
  return t;
}

} // namespace

TEST_CASE("pinned joins") {
  // Optional-valued handle merged with a definitely-valid one stays optional:
  // join(maybe_optional(owned, -1), owned) keeps both atoms.
  Typestate opt =
      Typestate::join(Typestate::owned(7), Typestate::sentinel(-1));
  REQUIRE(opt.is_maybe_optional());
  Typestate merged = Typestate::join(opt, Typestate::owned(7));
  CHECK(merged == opt);
  CHECK(merged.is_maybe_optional());

  // Guard collapse and its complement.
  CHECK(opt.refine_to_sentinel(-1).is_sentinel_only());
  CHECK(opt.refine_drop_sentinel(-1).is_owned_only());

  // Mixing in a foreign atom breaks the optional shape.
  Typestate dirty = Typestate::join(opt, Typestate::uninit());
  CHECK_FALSE(dirty.is_maybe_optional());
  CHECK(dirty.has(Typestate::AUninit));

  // Unknown refines onto any sentinel the guard compares against.
  CHECK(Typestate::unknown().refine_to_sentinel(0).is_sentinel_only());

  // Init plus its null sentinel is the optional-pointer shape.
  Typestate optr =
      Typestate::join(Typestate::init(), Typestate::sentinel(0));
  CHECK(optr.is_maybe_optional());
  CHECK(optr.refine_drop_sentinel(0).is_single(Typestate::AInit));

  CHECK(Typestate::moved().after_move() == Typestate::moved());
  CHECK(Typestate::bottom().is_bottom());
  CHECK(opt.to_string() == "sentinel(-1)|owned{7}");
}

TEST_CASE("typestate lattice laws", "[property]") {
  auto rng = testsupport::make_rng(0xBEEF0001);
  for (int i = 0; i < 1500; ++i) {
    Typestate a = random_state(rng);
    Typestate b = random_state(rng);
    Typestate c = random_state(rng);

    CHECK(Typestate::join(a, a) == a);
    CHECK(Typestate::join(a, b) == Typestate::join(b, a));
    CHECK(Typestate::join(Typestate::join(a, b), c) ==
          Typestate::join(a, Typestate::join(b, c)));

    Typestate j = Typestate::join(a, b);
    CHECK(a.leq(j));
    CHECK(b.leq(j));
    CHECK(Typestate::bottom().leq(a));

    // leq is a partial order.
    CHECK(a.leq(a));
    if (a.leq(b) && b.leq(a))
      CHECK(a == b);
    if (a.leq(b) && b.leq(c))
      CHECK(a.leq(c));

    // join is the least upper bound: any upper bound dominates it.
    Typestate u = Typestate::join(j, c);
    CHECK(j.leq(u));

    // Widening coincides with join on this finite lattice.
    CHECK(Typestate::widen(a, b) == j);
  }
}

TEST_CASE("shape classification is stable under join order", "[property]") {
  auto rng = testsupport::make_rng(0xBEEF0002);
  for (int i = 0; i < 1000; ++i) {
    Typestate a = random_state(rng);
    Typestate b = random_state(rng);
    Typestate ab = Typestate::join(a, b);
    Typestate ba = Typestate::join(b, a);
    CHECK(ab.is_maybe_optional() == ba.is_maybe_optional());
    CHECK(ab.is_sentinel_only() == ba.is_sentinel_only());
    CHECK(ab.atom_count() == ba.atom_count());
    CHECK(ab.to_string() == ba.to_string());
  }
}
