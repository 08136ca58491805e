// Places and the per-block abstract state of the analysis.
//
// A place is an interned storage location: a named local, parameter or
// global, the pointee a parameter references, or the contents of a heap
// block identified by its allocation site. The state maps places to their
// typestate, numeric range, nominal tag, property map and referents, and
// additionally tracks the live resources of the frame, the borrows in
// flight, and the stack of open e_checked/e_unchecked brackets.
//
// Join is componentwise; everything is either a finite lattice or an
// interval (which widens), so fixpoints terminate.

#ifndef CRUSTED_ABSTRACT_STATE_HPP
#define CRUSTED_ABSTRACT_STATE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "crusted/ast.hpp"
#include "crusted/interval.hpp"
#include "crusted/prop_map.hpp"
#include "crusted/type_table.hpp"
#include "crusted/typestate.hpp"

namespace crusted {

using PlaceId = uint32_t;
inline constexpr PlaceId kNoPlace = ~0u;

enum class RootKind { Local, Param, Global, Pointee, HeapContents };

struct PlaceInfo {
  RootKind root = RootKind::Local;
  std::string display; // how diagnostics name it
  int param_index = -1;
  ContractSlot slot; // declared contract, if any
  bool has_slot = false;
};

class PlaceTable {
public:
  PlaceId named(RootKind root, const std::string &name) {
    auto key = std::make_pair(static_cast<int>(root), name);
    auto it = named_.find(key);
    if (it != named_.end())
      return it->second;
    PlaceId id = fresh();
    infos_[id].root = root;
    infos_[id].display = name;
    named_[key] = id;
    return id;
  }

  // The place a pointer place references when nothing more precise is known
  // (parameter pointees, mostly). One per pointer place.
  PlaceId pointee_of(PlaceId ptr) {
    auto it = pointees_.find(ptr);
    if (it != pointees_.end())
      return it->second;
    PlaceId id = fresh();
    infos_[id].root = RootKind::Pointee;
    infos_[id].display = "*" + infos_[ptr].display;
    pointees_[ptr] = id;
    return id;
  }

  // The contents of the heap block allocated at a given site.
  PlaceId heap_contents(uint32_t site_line, uint32_t site_col) {
    auto key = std::make_pair(site_line, site_col);
    auto it = heap_.find(key);
    if (it != heap_.end())
      return it->second;
    PlaceId id = fresh();
    infos_[id].root = RootKind::HeapContents;
    infos_[id].display = "heap@" + std::to_string(site_line);
    heap_[key] = id;
    return id;
  }

  PlaceId find_named(RootKind root, const std::string &name) const {
    auto it = named_.find(std::make_pair(static_cast<int>(root), name));
    return it == named_.end() ? kNoPlace : it->second;
  }

  const PlaceInfo &info(PlaceId id) const { return infos_[id]; }
  PlaceInfo &info(PlaceId id) { return infos_[id]; }
  const std::string &display(PlaceId id) const { return infos_[id].display; }
  size_t size() const { return infos_.size(); }

private:
  std::vector<PlaceInfo> infos_;
  std::map<std::pair<int, std::string>, PlaceId> named_;
  std::map<PlaceId, PlaceId> pointees_;
  std::map<std::pair<uint32_t, uint32_t>, PlaceId> heap_;

  PlaceId fresh() {
    infos_.emplace_back();
    return static_cast<PlaceId>(infos_.size() - 1);
  }
};

// Reconstructs roughly the source text of an expression, for diagnostics.
inline std::string expr_to_string(const Expr *e) {
  if (!e)
    return "";
  switch (e->kind) {
  case ExprKind::IntLit:
  case ExprKind::FloatLit:
  case ExprKind::CharLit:
  case ExprKind::StringLit:
  case ExprKind::Ident:
    return e->text;
  case ExprKind::Paren:
    return "(" + expr_to_string(e->a.get()) + ")";
  case ExprKind::Unary:
    if (e->prefix)
      return e->op + expr_to_string(e->a.get());
    return expr_to_string(e->a.get()) + e->op;
  case ExprKind::Binary:
    return expr_to_string(e->a.get()) + " " + e->op + " " +
           expr_to_string(e->b.get());
  case ExprKind::Assign:
    return expr_to_string(e->a.get()) + " = " + expr_to_string(e->b.get());
  case ExprKind::Call: {
    std::string s = expr_to_string(e->a.get()) + "(";
    for (size_t i = 0; i < e->args.size(); ++i) {
      if (i)
        s += ", ";
      s += expr_to_string(e->args[i].get());
    }
    return s + ")";
  }
  case ExprKind::Index:
    return expr_to_string(e->a.get()) + "[" + expr_to_string(e->b.get()) + "]";
  case ExprKind::Member:
    return expr_to_string(e->a.get()) + (e->arrow ? "->" : ".") + e->member;
  case ExprKind::Cast:
    return "(" + type_syntax_name(e->cast_type) + ") " +
           expr_to_string(e->a.get());
  }
  return "";
}

struct ResourceInfo {
  uint32_t id = 0;
  std::string res_class = "resource";
  uint32_t site_line = 0;
  bool possibly = false;       // creation not (yet) proven successful
  PlaceId contents = kNoPlace; // contents place, if the resource has one
  std::set<PlaceId> size_places; // operands that sized the allocation

  friend bool operator==(const ResourceInfo &a, const ResourceInfo &b) {
    return a.id == b.id && a.res_class == b.res_class &&
           a.site_line == b.site_line && a.possibly == b.possibly &&
           a.contents == b.contents && a.size_places == b.size_places;
  }
};

struct Borrow {
  PlaceId holder = kNoPlace; // the place holding the reference
  PlaceId target = kNoPlace; // the place borrowed from
  bool exclusive = false;

  friend bool operator==(const Borrow &a, const Borrow &b) {
    return a.holder == b.holder && a.target == b.target &&
           a.exclusive == b.exclusive;
  }
  friend bool operator<(const Borrow &a, const Borrow &b) {
    return std::tie(a.holder, a.target, a.exclusive) <
           std::tie(b.holder, b.target, b.exclusive);
  }
};

struct UnsafeBracket {
  std::string kind;
  bool unchecked = false;

  friend bool operator==(const UnsafeBracket &a, const UnsafeBracket &b) {
    return a.kind == b.kind && a.unchecked == b.unchecked;
  }
};

struct AbstractState {
  bool reachable = false;
  std::map<PlaceId, Typestate> ts;
  std::map<PlaceId, MultiInterval> vals; // absent key: unconstrained
  std::map<PlaceId, std::string> tags;   // nominal tags; absent: untagged
  std::map<PlaceId, PropertyMap> props;
  std::map<PlaceId, std::set<PlaceId>> refs;
  std::map<uint32_t, ResourceInfo> resources;
  std::set<Borrow> borrows;
  std::vector<UnsafeBracket> unsafe_stack;

  static AbstractState bottom() { return AbstractState(); }

  Typestate ts_of(PlaceId p) const {
    auto it = ts.find(p);
    return it == ts.end() ? Typestate::bottom() : it->second;
  }
  MultiInterval val_of(PlaceId p) const {
    auto it = vals.find(p);
    return it == vals.end() ? MultiInterval::full() : it->second;
  }
  std::string tag_of(PlaceId p) const {
    auto it = tags.find(p);
    return it == tags.end() ? std::string() : it->second;
  }
  const std::set<PlaceId> *refs_of(PlaceId p) const {
    auto it = refs.find(p);
    return it == refs.end() ? nullptr : &it->second;
  }

  // The places currently owning the given resource.
  std::vector<PlaceId> owners_of(uint32_t resource_id) const {
    std::vector<PlaceId> out;
    for (const auto &[p, state] : ts)
      if (state.owned_ids().count(resource_id))
        out.push_back(p);
    return out;
  }

  friend bool operator==(const AbstractState &a, const AbstractState &b) {
    return a.reachable == b.reachable && a.ts == b.ts && a.vals == b.vals &&
           a.tags == b.tags && a.props == b.props && a.refs == b.refs &&
           a.resources == b.resources && a.borrows == b.borrows &&
           a.unsafe_stack == b.unsafe_stack;
  }

  static AbstractState merge(const AbstractState &a, const AbstractState &b,
                             bool widen_vals) {
    if (!a.reachable)
      return b;
    if (!b.reachable)
      return a;
    AbstractState out;
    out.reachable = true;
    for (const auto &[p, sa] : a.ts)
      out.ts[p] = Typestate::join(sa, b.ts_of(p));
    for (const auto &[p, sb] : b.ts)
      if (!out.ts.count(p))
        out.ts[p] = sb;
    for (const auto &[p, va] : a.vals) {
      auto it = b.vals.find(p);
      if (it == b.vals.end())
        continue; // joined with unconstrained
      MultiInterval m = widen_vals ? MultiInterval::widen(va, it->second)
                                   : MultiInterval::join(va, it->second);
      if (!m.is_full())
        out.vals[p] = std::move(m);
    }
    for (const auto &[p, ta] : a.tags) {
      auto it = b.tags.find(p);
      if (it != b.tags.end() && it->second == ta)
        out.tags[p] = ta;
    }
    {
      std::set<PlaceId> keys;
      for (const auto &[p, m] : a.props)
        keys.insert(p);
      for (const auto &[p, m] : b.props)
        keys.insert(p);
      for (PlaceId p : keys) {
        auto ia = a.props.find(p);
        auto ib = b.props.find(p);
        PropertyMap merged = PropertyMap::join(
            ia == a.props.end() ? PropertyMap() : ia->second,
            ib == b.props.end() ? PropertyMap() : ib->second);
        if (!merged.empty())
          out.props[p] = std::move(merged);
      }
    }
    for (const auto &[p, ra] : a.refs) {
      std::set<PlaceId> u = ra;
      if (const auto *rb = b.refs_of(p))
        u.insert(rb->begin(), rb->end());
      out.refs[p] = std::move(u);
    }
    for (const auto &[p, rb] : b.refs)
      if (!out.refs.count(p))
        out.refs[p] = rb;
    for (const auto &[id, ra] : a.resources) {
      auto it = b.resources.find(id);
      if (it == b.resources.end()) {
        ResourceInfo r = ra;
        r.possibly = true; // absent on the other path
        out.resources[id] = std::move(r);
      } else {
        ResourceInfo r = ra;
        r.possibly = ra.possibly || it->second.possibly;
        r.size_places.insert(it->second.size_places.begin(),
                             it->second.size_places.end());
        out.resources[id] = std::move(r);
      }
    }
    for (const auto &[id, rb] : b.resources) {
      if (!out.resources.count(id)) {
        ResourceInfo r = rb;
        r.possibly = true;
        out.resources[id] = std::move(r);
      }
    }
    out.borrows = a.borrows;
    out.borrows.insert(b.borrows.begin(), b.borrows.end());
    // Bracket stacks agree on every join a structured program can build;
    // keep the common prefix to stay sound if recovery produced a mismatch.
    size_t n = std::min(a.unsafe_stack.size(), b.unsafe_stack.size());
    for (size_t i = 0; i < n && a.unsafe_stack[i] == b.unsafe_stack[i]; ++i)
      out.unsafe_stack.push_back(a.unsafe_stack[i]);
    return out;
  }

  static AbstractState join(const AbstractState &a, const AbstractState &b) {
    return merge(a, b, false);
  }
  static AbstractState widen(const AbstractState &a, const AbstractState &b) {
    return merge(a, b, true);
  }

  bool leq(const AbstractState &o) const {
    if (!reachable)
      return true;
    if (!o.reachable)
      return false;
    for (const auto &[p, s] : ts)
      if (!s.leq(o.ts_of(p)))
        return false;
    for (const auto &[p, v] : o.vals)
      if (!val_of(p).leq(v))
        return false;
    for (const auto &[p, t] : o.tags)
      if (tag_of(p) != t)
        return false;
    {
      std::set<PlaceId> keys;
      for (const auto &[p, m] : props)
        keys.insert(p);
      for (const auto &[p, m] : o.props)
        keys.insert(p);
      for (PlaceId p : keys) {
        auto ia = props.find(p);
        auto ib = o.props.find(p);
        const PropertyMap empty;
        const PropertyMap &ma = ia == props.end() ? empty : ia->second;
        const PropertyMap &mb = ib == o.props.end() ? empty : ib->second;
        if (!ma.leq(mb))
          return false;
      }
    }
    for (const auto &[p, r] : refs) {
      const auto *ro = o.refs_of(p);
      if (!ro)
        return r.empty();
      if (!std::includes(ro->begin(), ro->end(), r.begin(), r.end()))
        return false;
    }
    for (const auto &[id, r] : resources) {
      auto it = o.resources.find(id);
      if (it == o.resources.end())
        return false;
      if (r.possibly && !it->second.possibly)
        return false;
    }
    for (const Borrow &b : borrows)
      if (!o.borrows.count(b))
        return false;
    return unsafe_stack == o.unsafe_stack;
  }

  std::string to_string(const PlaceTable &places) const {
    if (!reachable)
      return "  unreachable\n";
    std::string out;
    for (const auto &[p, s] : ts) {
      out += "  " + places.display(p) + ": " + s.to_string();
      auto v = vals.find(p);
      if (v != vals.end())
        out += " in " + v->second.to_string();
      auto t = tags.find(p);
      if (t != tags.end())
        out += " tag " + t->second;
      auto pm = props.find(p);
      if (pm != props.end() && !pm->second.empty())
        out += " props " + pm->second.to_string();
      out += "\n";
    }
    for (const auto &[id, r] : resources)
      out += "  resource #" + std::to_string(id) + " " + r.res_class +
             " @line " + std::to_string(r.site_line) +
             (r.possibly ? " (possibly)" : "") + "\n";
    for (const Borrow &b : borrows)
      out += std::string("  borrow ") + (b.exclusive ? "excl " : "shared ") +
             places.display(b.holder) + " -> " + places.display(b.target) +
             "\n";
    for (const UnsafeBracket &u : unsafe_stack)
      out += std::string("  bracket ") +
             (u.unchecked ? "unchecked" : "checked") + "(\"" + u.kind +
             "\")\n";
    return out;
  }
};

// --- guard refinement ------------------------------------------------------

// Applies `place <op> c` (with op already oriented for the taken edge) to the
// state: crops the numeric range, collapses or drops sentinels, and keeps
// the resource bookkeeping in step. Equality against a tracked sentinel is
// how optionality checks are discharged; proving an allocation size zero
// drops the corresponding resource (a zero-sized block is not leakable, and
// in this model a zero-sized allocation request yields the sentinel).
inline void refine_place_relop(AbstractState &st, PlaceId p,
                               const std::string &op, int64_t c) {
  // Numeric range.
  MultiInterval cur = st.val_of(p);
  MultiInterval cropped = cur;
  if (op == "==")
    cropped = MultiInterval::meet(cur, MultiInterval::point(c));
  else if (op == "!=")
    cropped = cur.remove_point(c);
  else if (op == "<")
    cropped = MultiInterval::meet(cur, MultiInterval::at_most(c - 1));
  else if (op == "<=")
    cropped = MultiInterval::meet(cur, MultiInterval::at_most(c));
  else if (op == ">")
    cropped = MultiInterval::meet(cur, MultiInterval::at_least(c + 1));
  else if (op == ">=")
    cropped = MultiInterval::meet(cur, MultiInterval::at_least(c));
  if (!cropped.is_full())
    st.vals[p] = cropped;
  else
    st.vals.erase(p);

  // Sentinel refinement.
  Typestate cur_ts = st.ts_of(p);
  if (op == "==" && cur_ts.has_sentinel(c)) {
    // The value IS the sentinel: the payload, and any resource it owned,
    // never materialized on this path.
    for (uint32_t id : cur_ts.owned_ids())
      st.resources.erase(id);
    st.ts[p] = cur_ts.refine_to_sentinel(c);
    st.refs.erase(p);
    st.tags.erase(p);
  } else if (op == "!=" && cur_ts.has_sentinel(c)) {
    st.ts[p] = cur_ts.refine_drop_sentinel(c);
    for (uint32_t id : cur_ts.owned_ids()) {
      auto it = st.resources.find(id);
      if (it != st.resources.end())
        it->second.possibly = false;
    }
  }

  // Allocation-size coupling: proving a recorded size operand == 0 drops the
  // resources sized by it; an owner still carrying its sentinel collapses
  // onto it (the failed/zero-sized allocation in one).
  if (op == "==" && c == 0) {
    std::vector<uint32_t> drop;
    for (const auto &[id, r] : st.resources)
      if (r.size_places.count(p))
        drop.push_back(id);
    for (uint32_t id : drop) {
      for (PlaceId owner : st.owners_of(id)) {
        Typestate ots = st.ts_of(owner);
        if (ots.is_maybe_optional()) {
          int64_t s = *ots.sentinels().begin();
          st.ts[owner] = ots.refine_to_sentinel(s);
          st.refs.erase(owner);
          st.tags.erase(owner);
        } else {
          Typestate stripped;
          for (int64_t s : ots.sentinels())
            stripped = Typestate::join(stripped, Typestate::sentinel(s));
          if (ots.has(Typestate::AInit) || ots.has(Typestate::AUnknown) ||
              ots.has_owned())
            stripped = Typestate::join(stripped, Typestate::init());
          st.ts[owner] = stripped;
        }
      }
      st.resources.erase(id);
    }
  }
}

} // namespace crusted

#endif
