// Integer multi-interval domain: an ordered list of disjoint, non-adjacent
// closed intervals over signed 64-bit values with infinite bounds. Join is
// set union, meet is intersection, widening drives unstable bounds to the
// infinities so chains stabilize in a handful of steps.

#ifndef CRUSTED_INTERVAL_HPP
#define CRUSTED_INTERVAL_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace crusted {

struct Bound {
  enum Kind : int8_t { NegInf = -1, Finite = 0, PosInf = 1 };
  Kind kind = Finite;
  int64_t v = 0;

  static Bound neg_inf() { return {NegInf, 0}; }
  static Bound pos_inf() { return {PosInf, 0}; }
  static Bound of(int64_t x) { return {Finite, x}; }

  bool finite() const { return kind == Finite; }

  friend bool operator==(const Bound &a, const Bound &b) {
    return a.kind == b.kind && (a.kind != Finite || a.v == b.v);
  }
  friend bool operator<(const Bound &a, const Bound &b) {
    if (a.kind != b.kind)
      return a.kind < b.kind;
    return a.kind == Finite && a.v < b.v;
  }
  friend bool operator<=(const Bound &a, const Bound &b) {
    return a < b || a == b;
  }
};

inline Bound bound_min(Bound a, Bound b) { return a < b ? a : b; }
inline Bound bound_max(Bound a, Bound b) { return a < b ? b : a; }

// Saturating bound arithmetic; overflow widens to the matching infinity,
// which only ever over-approximates.
inline Bound bound_add(Bound a, Bound b) {
  if (!a.finite())
    return a;
  if (!b.finite())
    return b;
  __int128 s = static_cast<__int128>(a.v) + b.v;
  if (s > std::numeric_limits<int64_t>::max())
    return Bound::pos_inf();
  if (s < std::numeric_limits<int64_t>::min())
    return Bound::neg_inf();
  return Bound::of(static_cast<int64_t>(s));
}

inline Bound bound_neg(Bound a) {
  if (a.kind == Bound::NegInf)
    return Bound::pos_inf();
  if (a.kind == Bound::PosInf)
    return Bound::neg_inf();
  if (a.v == std::numeric_limits<int64_t>::min())
    return Bound::pos_inf();
  return Bound::of(-a.v);
}

inline Bound bound_sub(Bound a, Bound b) { return bound_add(a, bound_neg(b)); }

// 0 times anything is 0, even an infinity; an interval bound at infinity
// stands for arbitrarily large finite values.
inline Bound bound_mul(Bound a, Bound b) {
  if ((a.finite() && a.v == 0) || (b.finite() && b.v == 0))
    return Bound::of(0);
  if (!a.finite() || !b.finite()) {
    int sa = a.finite() ? (a.v > 0 ? 1 : -1) : static_cast<int>(a.kind);
    int sb = b.finite() ? (b.v > 0 ? 1 : -1) : static_cast<int>(b.kind);
    return sa * sb > 0 ? Bound::pos_inf() : Bound::neg_inf();
  }
  __int128 p = static_cast<__int128>(a.v) * b.v;
  if (p > std::numeric_limits<int64_t>::max())
    return Bound::pos_inf();
  if (p < std::numeric_limits<int64_t>::min())
    return Bound::neg_inf();
  return Bound::of(static_cast<int64_t>(p));
}

// C truncating division on bounds; the divisor is never the zero bound here.
inline Bound bound_div(Bound a, Bound b) {
  if (!a.finite() && !b.finite()) {
    int sa = static_cast<int>(a.kind), sb = static_cast<int>(b.kind);
    return sa * sb > 0 ? Bound::pos_inf() : Bound::neg_inf();
  }
  if (!a.finite()) {
    int sb = b.v > 0 ? 1 : -1;
    int sa = static_cast<int>(a.kind);
    return sa * sb > 0 ? Bound::pos_inf() : Bound::neg_inf();
  }
  if (!b.finite())
    return Bound::of(0); // finite / huge truncates to 0
  return Bound::of(a.v / b.v);
}

struct Interval {
  Bound lo, hi;
  bool valid() const { return lo <= hi; }
};

struct BinopResult;

class MultiInterval {
public:
  MultiInterval() = default; // empty (bottom)

  static MultiInterval empty() { return MultiInterval(); }
  static MultiInterval full() {
    return of(Bound::neg_inf(), Bound::pos_inf());
  }
  static MultiInterval point(int64_t v) { return of(Bound::of(v), Bound::of(v)); }
  static MultiInterval range(int64_t lo, int64_t hi) {
    return of(Bound::of(lo), Bound::of(hi));
  }
  static MultiInterval at_least(int64_t lo) {
    return of(Bound::of(lo), Bound::pos_inf());
  }
  static MultiInterval at_most(int64_t hi) {
    return of(Bound::neg_inf(), Bound::of(hi));
  }
  static MultiInterval of(Bound lo, Bound hi) {
    MultiInterval m;
    if (lo <= hi)
      m.comps_.push_back({lo, hi});
    return m;
  }

  bool is_empty() const { return comps_.empty(); }
  bool is_full() const {
    return comps_.size() == 1 && comps_[0].lo == Bound::neg_inf() &&
           comps_[0].hi == Bound::pos_inf();
  }
  const std::vector<Interval> &components() const { return comps_; }

  Bound min() const { return comps_.front().lo; }
  Bound max() const { return comps_.back().hi; }

  bool contains(int64_t v) const {
    for (const Interval &c : comps_)
      if (c.lo <= Bound::of(v) && Bound::of(v) <= c.hi)
        return true;
    return false;
  }

  bool is_point(int64_t v) const {
    return comps_.size() == 1 && comps_[0].lo == Bound::of(v) &&
           comps_[0].hi == Bound::of(v);
  }

  friend bool operator==(const MultiInterval &a, const MultiInterval &b) {
    if (a.comps_.size() != b.comps_.size())
      return false;
    for (size_t i = 0; i < a.comps_.size(); ++i)
      if (!(a.comps_[i].lo == b.comps_[i].lo &&
            a.comps_[i].hi == b.comps_[i].hi))
        return false;
    return true;
  }

  bool leq(const MultiInterval &other) const {
    return join(*this, other) == other;
  }

  static MultiInterval join(const MultiInterval &a, const MultiInterval &b) {
    MultiInterval out;
    out.comps_ = a.comps_;
    out.comps_.insert(out.comps_.end(), b.comps_.begin(), b.comps_.end());
    out.normalize();
    return out;
  }

  static MultiInterval meet(const MultiInterval &a, const MultiInterval &b) {
    MultiInterval out;
    for (const Interval &x : a.comps_)
      for (const Interval &y : b.comps_) {
        Interval c{bound_max(x.lo, y.lo), bound_min(x.hi, y.hi)};
        if (c.valid())
          out.comps_.push_back(c);
      }
    out.normalize();
    return out;
  }

  // Component-wise widening: a bound that moved between `a` and join(a, b)
  // goes to its infinity. If the component structure changed, both sides are
  // hulled first so the chain length stays bounded.
  static MultiInterval widen(const MultiInterval &a, const MultiInterval &b) {
    if (a.is_empty())
      return b;
    MultiInterval j = join(a, b);
    if (j == a)
      return a;
    MultiInterval out;
    if (j.comps_.size() == a.comps_.size()) {
      bool aligned = true;
      for (size_t i = 0; i < j.comps_.size(); ++i) {
        Interval c;
        c.lo = j.comps_[i].lo == a.comps_[i].lo ? a.comps_[i].lo
                                                : Bound::neg_inf();
        c.hi = j.comps_[i].hi == a.comps_[i].hi ? a.comps_[i].hi
                                                : Bound::pos_inf();
        out.comps_.push_back(c);
        if (!(a.comps_[i].lo <= j.comps_[i].hi &&
              j.comps_[i].lo <= a.comps_[i].hi))
          aligned = false;
      }
      if (aligned) {
        out.normalize();
        return out;
      }
    }
    Interval hull;
    hull.lo = j.min() == a.min() ? a.min() : Bound::neg_inf();
    hull.hi = j.max() == a.max() ? a.max() : Bound::pos_inf();
    out.comps_.clear();
    out.comps_.push_back(hull);
    return out;
  }

  MultiInterval remove_point(int64_t v) const {
    MultiInterval out;
    for (const Interval &c : comps_) {
      Bound bv = Bound::of(v);
      if (!(c.lo <= bv && bv <= c.hi)) {
        out.comps_.push_back(c);
        continue;
      }
      Interval left{c.lo, bound_sub(bv, Bound::of(1))};
      Interval right{bound_add(bv, Bound::of(1)), c.hi};
      if (left.valid() && bv.v != std::numeric_limits<int64_t>::min())
        out.comps_.push_back(left);
      if (right.valid() && bv.v != std::numeric_limits<int64_t>::max())
        out.comps_.push_back(right);
    }
    out.normalize();
    return out;
  }

  static BinopResult binop(const std::string &op, const MultiInterval &a,
                           const MultiInterval &b);

  static MultiInterval negate(const MultiInterval &a) {
    MultiInterval out;
    for (const Interval &c : a.comps_)
      out.comps_.push_back({bound_neg(c.hi), bound_neg(c.lo)});
    out.normalize();
    return out;
  }

  std::string to_string() const {
    if (comps_.empty())
      return "empty";
    auto bnd = [](Bound b) {
      if (b.kind == Bound::NegInf)
        return std::string("-inf");
      if (b.kind == Bound::PosInf)
        return std::string("+inf");
      return std::to_string(b.v);
    };
    std::string s;
    for (size_t i = 0; i < comps_.size(); ++i) {
      if (i)
        s += " or ";
      if (comps_[i].lo == comps_[i].hi)
        s += bnd(comps_[i].lo);
      else
        s += "[" + bnd(comps_[i].lo) + ", " + bnd(comps_[i].hi) + "]";
    }
    return s;
  }

private:
  std::vector<Interval> comps_;

  static constexpr size_t max_components = 8;

  void normalize() {
    comps_.erase(std::remove_if(comps_.begin(), comps_.end(),
                                [](const Interval &c) { return !c.valid(); }),
                 comps_.end());
    std::sort(comps_.begin(), comps_.end(),
              [](const Interval &x, const Interval &y) {
                if (!(x.lo == y.lo))
                  return x.lo < y.lo;
                return x.hi < y.hi;
              });
    std::vector<Interval> merged;
    for (const Interval &c : comps_) {
      if (!merged.empty()) {
        Interval &last = merged.back();
        // Adjacent integer intervals fuse: [a,b] and [b+1,c].
        Bound next = last.hi.finite() ? bound_add(last.hi, Bound::of(1))
                                      : last.hi;
        if (c.lo <= next || c.lo <= last.hi) {
          last.hi = bound_max(last.hi, c.hi);
          continue;
        }
      }
      merged.push_back(c);
    }
    comps_ = std::move(merged);
    if (comps_.size() > max_components) {
      Interval hull{comps_.front().lo, comps_.back().hi};
      comps_.clear();
      comps_.push_back(hull);
    }
  }

  friend struct BinopResult;
  friend MultiInterval pairwise(const MultiInterval &, const MultiInterval &,
                                Interval (*)(const Interval &,
                                             const Interval &));
};

struct BinopResult {
  MultiInterval value;
  bool div_by_zero = false; // divisor may be zero (caller decides what to do)
};

namespace detail {

inline Interval iv_add(const Interval &x, const Interval &y) {
  return {bound_add(x.lo, y.lo), bound_add(x.hi, y.hi)};
}
inline Interval iv_sub(const Interval &x, const Interval &y) {
  return {bound_sub(x.lo, y.hi), bound_sub(x.hi, y.lo)};
}
inline Interval iv_mul(const Interval &x, const Interval &y) {
  Bound cands[4] = {bound_mul(x.lo, y.lo), bound_mul(x.lo, y.hi),
                    bound_mul(x.hi, y.lo), bound_mul(x.hi, y.hi)};
  Bound lo = cands[0], hi = cands[0];
  for (Bound c : cands) {
    lo = bound_min(lo, c);
    hi = bound_max(hi, c);
  }
  return {lo, hi};
}
// Divisor interval has one sign (0 excluded by the caller).
inline Interval iv_div(const Interval &x, const Interval &y) {
  Bound cands[4] = {bound_div(x.lo, y.lo), bound_div(x.lo, y.hi),
                    bound_div(x.hi, y.lo), bound_div(x.hi, y.hi)};
  Bound lo = cands[0], hi = cands[0];
  for (Bound c : cands) {
    lo = bound_min(lo, c);
    hi = bound_max(hi, c);
  }
  return {lo, hi};
}

} // namespace detail

inline BinopResult MultiInterval::binop(const std::string &op,
                                        const MultiInterval &a,
                                        const MultiInterval &b) {
  BinopResult r;
  if (a.is_empty() || b.is_empty())
    return r;

  auto combine = [&](Interval (*f)(const Interval &, const Interval &),
                     const MultiInterval &x, const MultiInterval &y) {
    MultiInterval out;
    for (const Interval &cx : x.comps_)
      for (const Interval &cy : y.comps_)
        out.comps_.push_back(f(cx, cy));
    out.normalize();
    return out;
  };

  if (op == "+") {
    r.value = combine(detail::iv_add, a, b);
    return r;
  }
  if (op == "-") {
    r.value = combine(detail::iv_sub, a, b);
    return r;
  }
  if (op == "*") {
    r.value = combine(detail::iv_mul, a, b);
    return r;
  }
  if (op == "/" || op == "%") {
    r.div_by_zero = b.contains(0);
    MultiInterval divisor = b.remove_point(0);
    if (divisor.is_empty()) {
      r.value = MultiInterval::empty();
      return r;
    }
    if (op == "/") {
      // Split the divisor at zero so each part keeps one sign.
      MultiInterval neg = meet(divisor, MultiInterval::at_most(-1));
      MultiInterval pos = meet(divisor, MultiInterval::at_least(1));
      MultiInterval out;
      if (!neg.is_empty())
        out = join(out, combine(detail::iv_div, a, neg));
      if (!pos.is_empty())
        out = join(out, combine(detail::iv_div, a, pos));
      r.value = out;
      return r;
    }
    // C remainder: sign follows the dividend, magnitude below the divisor's
    // and never above the dividend's.
    Bound mag = Bound::pos_inf();
    Bound dmax = bound_max(divisor.max(), bound_neg(divisor.min()));
    if (dmax.finite())
      mag = Bound::of(dmax.v - 1);
    MultiInterval out = MultiInterval::of(bound_neg(mag), mag);
    Bound amax = bound_max(a.max(), bound_neg(a.min()));
    if (amax.finite())
      out = meet(out, MultiInterval::of(bound_neg(amax), amax));
    if (Bound::of(0) <= a.min())
      out = meet(out, MultiInterval::at_least(0));
    if (a.max() <= Bound::of(0))
      out = meet(out, MultiInterval::at_most(0));
    r.value = out;
    return r;
  }

  // Comparisons produce a subset of {0,1}.
  bool can_true = false, can_false = false;
  if (op == "==") {
    can_true = !meet(a, b).is_empty();
    can_false = !(a.comps_.size() == 1 && b.comps_.size() == 1 &&
                  a.min() == a.max() && b.min() == b.max() &&
                  a.min() == b.min());
  } else if (op == "!=") {
    can_false = !meet(a, b).is_empty();
    can_true = !(a.comps_.size() == 1 && b.comps_.size() == 1 &&
                 a.min() == a.max() && b.min() == b.max() &&
                 a.min() == b.min());
  } else if (op == "<") {
    can_true = a.min() < b.max();
    can_false = !(a.max() < b.min());
  } else if (op == "<=") {
    can_true = a.min() <= b.max();
    can_false = !(a.max() <= b.min());
  } else if (op == ">") {
    can_true = b.min() < a.max();
    can_false = !(b.max() < a.min());
  } else if (op == ">=") {
    can_true = b.min() <= a.max();
    can_false = !(b.max() <= a.min());
  } else if (op == "&&" || op == "||") {
    can_true = can_false = true;
  } else {
    r.value = MultiInterval::full();
    return r;
  }
  MultiInterval out;
  if (can_false)
    out = join(out, MultiInterval::point(0));
  if (can_true)
    out = join(out, MultiInterval::point(1));
  r.value = out;
  return r;
}

// Builds the value set of an e_val predicate chain.
inline MultiInterval mi_geq(int64_t c) { return MultiInterval::at_least(c); }
inline MultiInterval mi_eq(int64_t c) { return MultiInterval::point(c); }
inline MultiInterval mi_range(int64_t lo, int64_t hi) {
  return MultiInterval::range(lo, hi);
}

} // namespace crusted

#endif
