// Typestate lattice for tracked places. A state is a set of atoms: the
// classic lattice laws then hold by construction because join is set union
// and the order is set inclusion. The canonical shapes the checks care about
// (definitely-uninitialized, maybe-optional, moved-out, ...) are read off the
// atom set rather than stored.

#ifndef CRUSTED_TYPESTATE_HPP
#define CRUSTED_TYPESTATE_HPP

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>

namespace crusted {

class Typestate {
public:
  // Plain atoms (each one bit).
  enum Atom : unsigned {
    AUninit = 1u << 0,
    AInit = 1u << 1,
    AMoved = 1u << 2,
    AReleased = 1u << 3,
    AFinalized = 1u << 4,
    ASharedRef = 1u << 5,
    AExclRef = 1u << 6,
    AUnknown = 1u << 7,
  };

  Typestate() = default; // bottom: no atoms

  static Typestate bottom() { return Typestate(); }
  static Typestate uninit() { return with(AUninit); }
  static Typestate init() { return with(AInit); }
  static Typestate moved() { return with(AMoved); }
  static Typestate released() { return with(AReleased); }
  static Typestate finalized() { return with(AFinalized); }
  static Typestate shared_ref() { return with(ASharedRef); }
  static Typestate excl_ref() { return with(AExclRef); }
  static Typestate unknown() { return with(AUnknown); }
  static Typestate sentinel(int64_t v) {
    Typestate t;
    t.sentinels_.insert(v);
    return t;
  }
  static Typestate owned(uint32_t resource_id) {
    Typestate t;
    t.owned_.insert(resource_id);
    return t;
  }

  bool is_bottom() const {
    return flags_ == 0 && sentinels_.empty() && owned_.empty();
  }

  bool has(Atom a) const { return (flags_ & a) != 0; }
  bool has_sentinel() const { return !sentinels_.empty(); }
  bool has_sentinel(int64_t v) const { return sentinels_.count(v) != 0; }
  bool has_owned() const { return !owned_.empty(); }
  const std::set<int64_t> &sentinels() const { return sentinels_; }
  const std::set<uint32_t> &owned_ids() const { return owned_; }

  // Number of distinct atoms; every sentinel value is its own atom, the
  // owned-ids set forms a single atom.
  int atom_count() const {
    int n = static_cast<int>(__builtin_popcount(flags_));
    n += static_cast<int>(sentinels_.size());
    if (!owned_.empty())
      ++n;
    return n;
  }

  friend bool operator==(const Typestate &a, const Typestate &b) {
    return a.flags_ == b.flags_ && a.sentinels_ == b.sentinels_ &&
           a.owned_ == b.owned_;
  }
  friend bool operator!=(const Typestate &a, const Typestate &b) {
    return !(a == b);
  }

  bool leq(const Typestate &o) const {
    if ((flags_ & ~o.flags_) != 0)
      return false;
    if (!std::includes(o.sentinels_.begin(), o.sentinels_.end(),
                       sentinels_.begin(), sentinels_.end()))
      return false;
    return std::includes(o.owned_.begin(), o.owned_.end(), owned_.begin(),
                         owned_.end());
  }

  static Typestate join(const Typestate &a, const Typestate &b) {
    Typestate t;
    t.flags_ = a.flags_ | b.flags_;
    t.sentinels_ = a.sentinels_;
    t.sentinels_.insert(b.sentinels_.begin(), b.sentinels_.end());
    t.owned_ = a.owned_;
    t.owned_.insert(b.owned_.begin(), b.owned_.end());
    return t;
  }

  // The set is finite (no growing chains besides sentinel values, which come
  // from program constants), so widening is plain join.
  static Typestate widen(const Typestate &a, const Typestate &b) {
    return join(a, b);
  }

  // --- canonical shapes --------------------------------------------------

  // A "valid payload" atom: something an optional can wrap.
  bool has_payload() const {
    return has(AInit) || has(ASharedRef) || has(AExclRef) || has_owned();
  }

  // Exactly one payload atom plus exactly one sentinel, nothing else.
  bool is_maybe_optional() const {
    if (sentinels_.size() != 1)
      return false;
    unsigned payload = flags_ & (AInit | ASharedRef | AExclRef);
    int payload_atoms =
        static_cast<int>(__builtin_popcount(payload)) + (owned_.empty() ? 0 : 1);
    unsigned other = flags_ & ~(AInit | ASharedRef | AExclRef);
    return payload_atoms == 1 && other == 0;
  }

  // Only sentinel atoms: the guard collapsed the value onto its sentinel.
  bool is_sentinel_only() const {
    return flags_ == 0 && owned_.empty() && !sentinels_.empty();
  }

  bool is_single(Atom a) const {
    return flags_ == a && sentinels_.empty() && owned_.empty();
  }
  bool is_owned_only() const {
    return flags_ == 0 && sentinels_.empty() && !owned_.empty();
  }

  // Whether the atom set is "clean" for a plain read: no uninit, moved,
  // released or finalized contribution.
  bool may_be(Atom a) const { return has(a); }

  // --- refinement --------------------------------------------------------

  // Keep only the sentinel part (guard proved value == sentinel).
  Typestate refine_to_sentinel(int64_t v) const {
    Typestate t;
    if (sentinels_.count(v))
      t.sentinels_.insert(v);
    else if (has(AUnknown))
      t.sentinels_.insert(v); // unknown covers any concrete value
    return t;
  }

  // Remove one sentinel value (guard proved value != sentinel).
  Typestate refine_drop_sentinel(int64_t v) const {
    Typestate t = *this;
    t.sentinels_.erase(v);
    return t;
  }

  // Move-out: the owning payload leaves; everything else resets.
  Typestate after_move() const { return moved(); }

  std::string to_string() const {
    if (is_bottom())
      return "bottom";
    std::string s;
    auto add = [&](const std::string &part) {
      if (!s.empty())
        s += "|";
      s += part;
    };
    if (has(AUninit))
      add("uninit");
    if (has(AInit))
      add("init");
    if (has(AMoved))
      add("moved");
    if (has(AReleased))
      add("released");
    if (has(AFinalized))
      add("finalized");
    if (has(ASharedRef))
      add("shared-ref");
    if (has(AExclRef))
      add("excl-ref");
    if (has(AUnknown))
      add("unknown");
    for (int64_t v : sentinels_)
      add("sentinel(" + std::to_string(v) + ")");
    if (!owned_.empty()) {
      std::string ids;
      for (uint32_t id : owned_) {
        if (!ids.empty())
          ids += ",";
        ids += std::to_string(id);
      }
      add("owned{" + ids + "}");
    }
    return s;
  }

private:
  unsigned flags_ = 0;
  std::set<int64_t> sentinels_;
  std::set<uint32_t> owned_;

  static Typestate with(Atom a) {
    Typestate t;
    t.flags_ = a;
    return t;
  }
};

} // namespace crusted

#endif
