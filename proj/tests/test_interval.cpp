// Multi-interval domain tests. The arithmetic transfer functions are checked
// against an exhaustive concrete oracle over small ranges: every value pair is
// evaluated with real C semantics and the result must land inside the abstract
// answer.

#include <catch2/catch_amalgamated.hpp>

#include "crusted/interval.hpp"
#include "support/rng.hpp"

#include <set>
#include <vector>

using crusted::Bound;
using crusted::MultiInterval;

namespace {

std::vector<MultiInterval> small_intervals(int64_t lo, int64_t hi) {
  std::vector<MultiInterval> out;
  for (int64_t a = lo; a <= hi; ++a)
    for (int64_t b = a; b <= hi; ++b)
      out.push_back(MultiInterval::range(a, b));
  return out;
}

std::set<int64_t> concrete_values(const MultiInterval &m) {
  std::set<int64_t> vals;
  for (const auto &c : m.components()) {
    REQUIRE(c.lo.finite());
    REQUIRE(c.hi.finite());
    for (int64_t v = c.lo.v; v <= c.hi.v; ++v)
      vals.insert(v);
  }
  return vals;
}

int64_t eval_concrete(const std::string &op, int64_t x, int64_t y) {
  if (op == "+")
    return x + y;
  if (op == "-")
    return x - y;
  if (op == "*")
    return x * y;
  if (op == "/")
    return x / y;
  if (op == "%")
    return x % y;
  if (op == "==")
    return x == y;
  if (op == "!=")
    return x != y;
  if (op == "<")
    return x < y;
  if (op == "<=")
    return x <= y;
  if (op == ">")
    return x > y;
  return x >= y; // ">="
}

MultiInterval random_multi(testsupport::Rng &rng) {
  MultiInterval m;
  int parts = static_cast<int>(testsupport::pick_int(rng, 1, 3));
  for (int i = 0; i < parts; ++i) {
    int64_t a = testsupport::pick_int(rng, -10, 10);
    int64_t b = testsupport::pick_int(rng, -10, 10);
    if (b < a)
      std::swap(a, b);
    m = MultiInterval::join(m, MultiInterval::range(a, b));
  }
  return m;
}

} // namespace

TEST_CASE("binop matches exhaustive concrete evaluation on small intervals") {
  const auto intervals = small_intervals(-8, 8);
  const std::vector<std::string> ops = {"+",  "-",  "*", "/", "%", "==",
                                        "!=", "<",  "<=", ">", ">="};
  for (const auto &op : ops) {
    for (const auto &a : intervals) {
      for (const auto &b : intervals) {
        auto r = MultiInterval::binop(op, a, b);
        bool divider = (op == "/" || op == "%");
        if (divider) {
          bool b_has_zero = b.contains(0);
          if (r.div_by_zero != b_has_zero) {
            CAPTURE(op, a.to_string(), b.to_string());
            REQUIRE(r.div_by_zero == b_has_zero);
          }
        }
        std::set<int64_t> truth;
        for (int64_t x = a.min().v; x <= a.max().v; ++x)
          for (int64_t y = b.min().v; y <= b.max().v; ++y) {
            if (divider && y == 0)
              continue;
            truth.insert(eval_concrete(op, x, y));
          }
        for (int64_t v : truth) {
          if (!r.value.contains(v)) {
            CAPTURE(op, a.to_string(), b.to_string(), r.value.to_string(), v);
            REQUIRE(r.value.contains(v));
          }
        }
        if (!truth.empty() && (op == "+" || op == "-" || op == "*")) {
          // These are exact on single intervals: the hull must be tight.
          REQUIRE(r.value.min().v == *truth.begin());
          REQUIRE(r.value.max().v == *truth.rbegin());
        }
        if (op == "==" || op == "!=" || op == "<" || op == "<=" ||
            op == ">" || op == ">=") {
          REQUIRE(concrete_values(r.value) == truth);
        }
      }
    }
  }
}

TEST_CASE("remove_point matches concrete set difference exhaustively") {
  for (const auto &m : small_intervals(-8, 8)) {
    for (int64_t p = -9; p <= 9; ++p) {
      auto out = m.remove_point(p);
      std::set<int64_t> expect;
      for (int64_t v = m.min().v; v <= m.max().v; ++v)
        if (v != p)
          expect.insert(v);
      REQUIRE(concrete_values(out) == expect);
    }
  }
}

TEST_CASE("pinned transfer results") {
  auto sub = MultiInterval::binop("-", MultiInterval::range(0, 10),
                                  MultiInterval::range(0, 10));
  CHECK(sub.value == MultiInterval::range(-10, 10));

  // The value set of "== 0 or == EOF" with EOF == -1 collapses to one run.
  auto eof_or_zero =
      MultiInterval::join(MultiInterval::point(0), MultiInterval::point(-1));
  CHECK(eof_or_zero == MultiInterval::range(-1, 0));
  CHECK(eof_or_zero.to_string() == "[-1, 0]");

  auto gap = MultiInterval::join(MultiInterval::range(0, 4),
                                 MultiInterval::range(6, 9));
  CHECK(gap.components().size() == 2);
  auto fused = MultiInterval::join(MultiInterval::range(0, 4),
                                   MultiInterval::range(5, 9));
  CHECK(fused == MultiInterval::range(0, 9));

  auto div = MultiInterval::binop("/", MultiInterval::range(10, 20),
                                  MultiInterval::range(2, 4));
  CHECK(div.value.min().v == 2);
  CHECK(div.value.max().v == 10);
  CHECK_FALSE(div.div_by_zero);

  auto divz = MultiInterval::binop("/", MultiInterval::point(8),
                                   MultiInterval::range(-1, 1));
  CHECK(divz.div_by_zero);

  CHECK(MultiInterval::point(3).to_string() == "3");
  CHECK(MultiInterval::at_least(0).to_string() == "[0, +inf]");
  CHECK(MultiInterval::empty().to_string() == "empty");
}

TEST_CASE("join meet and leq satisfy the lattice laws", "[property]") {
  auto rng = testsupport::make_rng(0xC0FFEE01);
  for (int i = 0; i < 1200; ++i) {
    MultiInterval a = random_multi(rng);
    MultiInterval b = random_multi(rng);
    MultiInterval c = random_multi(rng);

    CHECK(MultiInterval::join(a, a) == a);
    CHECK(MultiInterval::meet(a, a) == a);
    CHECK(MultiInterval::join(a, b) == MultiInterval::join(b, a));
    CHECK(MultiInterval::meet(a, b) == MultiInterval::meet(b, a));
    CHECK(MultiInterval::join(MultiInterval::join(a, b), c) ==
          MultiInterval::join(a, MultiInterval::join(b, c)));
    CHECK(MultiInterval::meet(MultiInterval::meet(a, b), c) ==
          MultiInterval::meet(a, MultiInterval::meet(b, c)));
    CHECK(MultiInterval::join(a, MultiInterval::meet(a, b)) == a);
    CHECK(MultiInterval::meet(a, MultiInterval::join(a, b)) == a);

    MultiInterval j = MultiInterval::join(a, b);
    CHECK(a.leq(j));
    CHECK(b.leq(j));
    CHECK(MultiInterval::meet(a, b).leq(a));
    CHECK(a.leq(MultiInterval::full()));
    CHECK(MultiInterval::empty().leq(a));
  }
}

TEST_CASE("widening stabilizes within four steps", "[property]") {
  auto rng = testsupport::make_rng(0xC0FFEE02);
  for (int i = 0; i < 1200; ++i) {
    MultiInterval state = random_multi(rng);
    int steps = 0;
    for (; steps < 16; ++steps) {
      MultiInterval next = random_multi(rng);
      MultiInterval widened = MultiInterval::widen(state, next);
      CHECK(state.leq(widened));
      CHECK(next.leq(widened));
      if (widened == state)
        break;
      state = widened;
    }
    CHECK(steps <= 4);
  }
}

TEST_CASE("widening keeps stable bounds", "[property]") {
  auto w = MultiInterval::widen(MultiInterval::range(0, 4),
                                MultiInterval::range(0, 6));
  CHECK(w == MultiInterval::of(Bound::of(0), Bound::pos_inf()));
  auto w2 = MultiInterval::widen(MultiInterval::range(0, 4),
                                 MultiInterval::range(-2, 4));
  CHECK(w2 == MultiInterval::of(Bound::neg_inf(), Bound::of(4)));
  auto w3 = MultiInterval::widen(MultiInterval::range(0, 4),
                                 MultiInterval::range(0, 4));
  CHECK(w3 == MultiInterval::range(0, 4));
}

TEST_CASE("multi component soundness under random ops", "[property]") {
  auto rng = testsupport::make_rng(0xC0FFEE03);
  const std::vector<std::string> ops = {"+", "-", "*", "/", "%"};
  for (int i = 0; i < 1500; ++i) {
    MultiInterval a = random_multi(rng);
    MultiInterval b = random_multi(rng);
    const std::string &op = ops[i % ops.size()];
    auto r = MultiInterval::binop(op, a, b);
    auto avals = concrete_values(a);
    auto bvals = concrete_values(b);
    for (int64_t x : avals)
      for (int64_t y : bvals) {
        if ((op == "/" || op == "%") && y == 0)
          continue;
        int64_t v = eval_concrete(op, x, y);
        if (!r.value.contains(v)) {
          CAPTURE(op, a.to_string(), b.to_string(), x, y, v);
          REQUIRE(r.value.contains(v));
        }
      }
  }
}

TEST_CASE("component count stays capped and joins stay sound") {
  MultiInterval m;
  for (int64_t k = 0; k < 20; ++k)
    m = MultiInterval::join(m, MultiInterval::point(k * 3));
  CHECK(m.components().size() <= 8);
  for (int64_t k = 0; k < 20; ++k)
    CHECK(m.contains(k * 3));
  CHECK(m.min().v == 0);
  CHECK(m.max().v == 57);
  // Forcing past the cap in one normalization collapses to the hull.
  MultiInterval wide;
  for (int64_t k = 0; k < 9; ++k)
    wide = MultiInterval::join(wide, MultiInterval::point(k * 100));
  CHECK(wide.components().size() <= 8);
  CHECK(wide.contains(0));
  CHECK(wide.contains(800));
}
