// Source positions. Lines and columns are 1-based; len is in bytes.

#ifndef CRUSTED_SPAN_HPP
#define CRUSTED_SPAN_HPP

#include <cstdint>
#include <tuple>

namespace crusted {

struct Span {
  uint32_t line = 0;
  uint32_t col = 0;
  uint32_t len = 0;

  bool valid() const { return line != 0; }

  friend bool operator==(const Span &a, const Span &b) {
    return a.line == b.line && a.col == b.col && a.len == b.len;
  }
  friend bool operator<(const Span &a, const Span &b) {
    return std::tie(a.line, a.col, a.len) < std::tie(b.line, b.col, b.len);
  }
};

// Smallest span that covers both operands; an invalid side is ignored.
inline Span span_cover(const Span &a, const Span &b) {
  if (!a.valid())
    return b;
  if (!b.valid())
    return a;
  Span lo = a < b ? a : b;
  Span hi = a < b ? b : a;
  Span out = lo;
  if (lo.line == hi.line)
    out.len = (hi.col + hi.len) - lo.col;
  return out;
}

} // namespace crusted

#endif
