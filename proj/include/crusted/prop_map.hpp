// Abstract map of named properties to symbolic atoms, used for
// state-machine style contracts on globals and parameters. Per key the
// lattice is flat: concrete atoms (and "absent") sit below a single
// "unknown" top. A key missing from the map means "absent".

#ifndef CRUSTED_PROP_MAP_HPP
#define CRUSTED_PROP_MAP_HPP

#include <map>
#include <optional>
#include <string>

namespace crusted {

struct PropValue {
  bool unknown = false;
  std::string atom; // meaningful only when !unknown

  static PropValue of(std::string a) { return {false, std::move(a)}; }
  static PropValue top() { return {true, {}}; }

  friend bool operator==(const PropValue &a, const PropValue &b) {
    return a.unknown == b.unknown && (a.unknown || a.atom == b.atom);
  }
};

class PropertyMap {
public:
  void assign(const std::string &key, const std::string &atom) {
    entries_[key] = PropValue::of(atom);
  }
  void assign_unknown(const std::string &key) {
    entries_[key] = PropValue::top();
  }
  void clear(const std::string &key) { entries_.erase(key); }

  std::optional<PropValue> get(const std::string &key) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
      return std::nullopt;
    return it->second;
  }

  bool empty() const { return entries_.empty(); }
  const std::map<std::string, PropValue> &entries() const { return entries_; }

  // A requirement key=atom holds only when the key is present with exactly
  // that atom; unknown or absent both fail.
  bool entails(const std::string &key, const std::string &atom) const {
    auto v = get(key);
    return v && !v->unknown && v->atom == atom;
  }

  friend bool operator==(const PropertyMap &a, const PropertyMap &b) {
    return a.entries_ == b.entries_;
  }
  friend bool operator!=(const PropertyMap &a, const PropertyMap &b) {
    return !(a == b);
  }

  // Key present on one side only joins with "absent", which yields unknown;
  // equal atoms survive; any disagreement yields unknown.
  static PropertyMap join(const PropertyMap &a, const PropertyMap &b) {
    PropertyMap out;
    for (const auto &[k, va] : a.entries_) {
      auto vb = b.get(k);
      if (!vb)
        out.entries_[k] = PropValue::top();
      else if (va == *vb)
        out.entries_[k] = va;
      else
        out.entries_[k] = PropValue::top();
    }
    for (const auto &[k, vb] : b.entries_) {
      if (!a.get(k))
        out.entries_[k] = PropValue::top();
    }
    return out;
  }

  static PropertyMap widen(const PropertyMap &a, const PropertyMap &b) {
    return join(a, b);
  }

  bool leq(const PropertyMap &o) const {
    for (const auto &[k, va] : entries_) {
      auto vb = o.get(k);
      if (!vb)
        return false; // atom or unknown vs absent: not ordered
      if (!(va == *vb) && !vb->unknown)
        return false;
    }
    for (const auto &[k, vb] : o.entries_) {
      if (!get(k) && !vb.unknown)
        return false; // absent ≤ only unknown
    }
    return true;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (const auto &[k, v] : entries_) {
      if (!first)
        s += ", ";
      first = false;
      s += k + "=" + (v.unknown ? std::string("?") : v.atom);
    }
    return s + "}";
  }

private:
  std::map<std::string, PropValue> entries_;
};

} // namespace crusted

#endif
