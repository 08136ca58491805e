// Diagnostic catalog, message templates, and the text/JSON renderers.
// Messages are deterministic functions of (code, payload); everything the
// renderers print is ordered, so equal inputs give byte-equal output.

#ifndef CRUSTED_DIAGNOSTIC_HPP
#define CRUSTED_DIAGNOSTIC_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include <crusted/span.hpp>

namespace crusted {

enum class Code {
  Lex,
  Parse,
  Lower,
  IncludeUnknown,
  AnnConflict,
  AnnArg,
  AnnUnknownType,
  AnnRedundant,
  ModelConflict,
  OptDeref,
  OptArg,
  OptRet,
  UninitUse,
  UseAfterMove,
  UseAfterRelease,
  OwnLeak,
  OwnUnclear,
  ReleaseInvalid,
  FiniMissing,
  NominalOp,
  NominalMix,
  ValRange,
  PreViolation,
  PostViolation,
  UnsafeAccess,
  UnsafePropagate,
  ExclViolation,
  ConstCast,
  Unreachable,
};

enum class Severity { Note, Warning, Error };

inline const std::vector<Code> &all_codes() {
  static const std::vector<Code> codes = {
      Code::Lex,           Code::Parse,        Code::Lower,
      Code::IncludeUnknown, Code::AnnConflict, Code::AnnArg,
      Code::AnnUnknownType, Code::AnnRedundant, Code::ModelConflict,
      Code::OptDeref,      Code::OptArg,       Code::OptRet,
      Code::UninitUse,     Code::UseAfterMove, Code::UseAfterRelease,
      Code::OwnLeak,       Code::OwnUnclear,   Code::ReleaseInvalid,
      Code::FiniMissing,   Code::NominalOp,    Code::NominalMix,
      Code::ValRange,      Code::PreViolation, Code::PostViolation,
      Code::UnsafeAccess,  Code::UnsafePropagate, Code::ExclViolation,
      Code::ConstCast,     Code::Unreachable,
  };
  return codes;
}

inline const char *code_name(Code c) {
  switch (c) {
  case Code::Lex:             return "CR-LEX";
  case Code::Parse:           return "CR-PARSE";
  case Code::Lower:           return "CR-LOWER";
  case Code::IncludeUnknown:  return "CR-INCLUDE-UNKNOWN";
  case Code::AnnConflict:     return "CR-ANN-CONFLICT";
  case Code::AnnArg:          return "CR-ANN-ARG";
  case Code::AnnUnknownType:  return "CR-ANN-UNKNOWN-TYPE";
  case Code::AnnRedundant:    return "CR-ANN-REDUNDANT";
  case Code::ModelConflict:   return "CR-MODEL-CONFLICT";
  case Code::OptDeref:        return "CR-OPT-DEREF";
  case Code::OptArg:          return "CR-OPT-ARG";
  case Code::OptRet:          return "CR-OPT-RET";
  case Code::UninitUse:       return "CR-UNINIT-USE";
  case Code::UseAfterMove:    return "CR-USE-AFTER-MOVE";
  case Code::UseAfterRelease: return "CR-USE-AFTER-RELEASE";
  case Code::OwnLeak:         return "CR-OWN-LEAK";
  case Code::OwnUnclear:      return "CR-OWN-UNCLEAR";
  case Code::ReleaseInvalid:  return "CR-RELEASE-INVALID";
  case Code::FiniMissing:     return "CR-FINI-MISSING";
  case Code::NominalOp:       return "CR-NOMINAL-OP";
  case Code::NominalMix:      return "CR-NOMINAL-MIX";
  case Code::ValRange:        return "CR-VAL-RANGE";
  case Code::PreViolation:    return "CR-PRE-VIOLATION";
  case Code::PostViolation:   return "CR-POST-VIOLATION";
  case Code::UnsafeAccess:    return "CR-UNSAFE-ACCESS";
  case Code::UnsafePropagate: return "CR-UNSAFE-PROPAGATE";
  case Code::ExclViolation:   return "CR-EXCL-VIOLATION";
  case Code::ConstCast:       return "CR-CONST-CAST";
  case Code::Unreachable:     return "CR-UNREACHABLE";
  }
  return "CR-UNKNOWN";
}

inline Severity default_severity(Code c) {
  switch (c) {
  case Code::Lex:
  case Code::Parse:
  case Code::Lower:
  case Code::AnnConflict:
  case Code::AnnArg:
  case Code::AnnUnknownType:
  case Code::ModelConflict:
    return Severity::Error;
  case Code::AnnRedundant:
  case Code::Unreachable:
    return Severity::Note;
  default:
    return Severity::Warning;
  }
}

inline const char *severity_name(Severity s) {
  switch (s) {
  case Severity::Note:    return "note";
  case Severity::Warning: return "warning";
  case Severity::Error:   return "error";
  }
  return "?";
}

// Payloads are small ordered key/value maps; the keys a code uses are fixed
// by its message template below.
using Payload = std::map<std::string, std::string>;

inline std::string payload_get(const Payload &p, const std::string &key) {
  auto it = p.find(key);
  return it == p.end() ? std::string() : it->second;
}

// Renders the message for a code from its payload. Templates are the single
// source of truth for user-facing wording.
inline std::string render_message(Code code, const Payload &p) {
  auto v = [&](const char *k) { return payload_get(p, k); };
  switch (code) {
  case Code::Lex:
  case Code::Parse:
  case Code::Lower:
    return v("detail");
  case Code::IncludeUnknown:
    return "unknown header <" + v("header") +
           ">; its declarations are treated as external";
  case Code::AnnConflict:
    return "conflicting annotations on '" + v("subject") + "': " + v("detail");
  case Code::AnnArg:
    return "malformed argument of " + v("ann") + ": " + v("detail");
  case Code::AnnUnknownType:
    return "annotation refers to unknown type '" + v("type") + "'";
  case Code::AnnRedundant:
    return "redundant annotation " + v("ann") + " on '" + v("subject") +
           "': " + v("detail");
  case Code::ModelConflict:
    return "declaration of '" + v("function") +
           "' conflicts with the built-in library model: " + v("detail");
  case Code::OptDeref:
    if (v("role") == "index")
      return "'" + v("place") + "' may be " + v("sentinel") +
             " here and is used as an index without a preceding check";
    return "'" + v("place") + "' may be " + v("sentinel") +
           " here and is dereferenced without a preceding check";
  case Code::OptArg:
    return "'" + v("place") + "' may be " + v("sentinel") +
           " here; parameter " + v("param") + " of '" + v("callee") +
           "' is not optional";
  case Code::OptRet:
    return "returned value may be " + v("sentinel") +
           " but the return type of '" + v("function") + "' is not optional";
  case Code::UninitUse:
    return "'" + v("place") + "' may be used uninitialized here";
  case Code::UseAfterMove:
    return "'" + v("place") + "' is used here after its ownership was moved";
  case Code::UseAfterRelease:
    return "'" + v("place") +
           "' refers to a resource that was already released";
  case Code::OwnLeak:
    return "the " + v("resource-class") + " acquired at line " +
           v("site-line") + " " + v("qualifier") + " leaked here";
  case Code::OwnUnclear:
    return "'" + v("callee") + "' has no ownership annotation for parameter " +
           v("param") + "; ownership of '" + v("place") +
           "' is unclear and the call is treated as a borrow";
  case Code::ReleaseInvalid:
    return "'" + v("place") + "' cannot be released here: " + v("detail");
  case Code::FiniMissing:
    return "'" + v("place") +
           "' requires finalization but may reach this point without it";
  case Code::NominalOp:
    if (v("role") == "binary")
      return "operator '" + v("op") + "' not permitted between '" + v("lhs") +
             "' and '" + v("rhs") + "'";
    return v("operation") + " not permitted on nominal type '" + v("type") +
           "'";
  case Code::NominalMix:
    return "value of type '" + v("from") + "' cannot be used as '" + v("to") +
           "' without a declared conversion";
  case Code::ValRange:
    return "value " + v("actual") + " is outside the declared range " +
           v("expected") + " of '" + v("subject") + "'";
  case Code::PreViolation:
    return "precondition " + v("key") + "=" + v("expected") + " of '" +
           v("callee") + "' may not hold here (" + v("key") + " is " +
           v("actual") + ")";
  case Code::PostViolation:
    return "postcondition of '" + v("function") +
           "' may be violated at this return: " + v("key") + " is " +
           v("actual") + ", expected " + v("expected");
  case Code::UnsafeAccess:
    return "access to '" + v("place") + "' of unsafe kind \"" + v("kind") +
           "\" outside an e_checked/e_unchecked block";
  case Code::UnsafePropagate:
    return "e_unchecked(\"" + v("kind") +
           "\") requires the enclosing function '" + v("function") +
           "' to be annotated e_unsafe(\"" + v("kind") + "\")";
  case Code::ExclViolation:
    if (v("mode") == "write-shared")
      return "write through shared reference '" + v("place") + "'";
    if (v("mode") == "borrowed-shared")
      return "write to '" + v("place") + "' while shared reference '" +
             v("borrower") + "' is live";
    return "'" + v("place") + "' is accessed here while exclusively borrowed"
           " by '" + v("borrower") + "'";
  case Code::ConstCast:
    return "cast removes const qualification from '" + v("subject") + "'";
  case Code::Unreachable:
    return "statement is unreachable";
  }
  return "";
}

struct Diagnostic {
  std::string file;
  Span span;
  Code code = Code::Parse;
  Severity severity = Severity::Error;
  std::string message;
  Payload payload;

  friend bool operator==(const Diagnostic &a, const Diagnostic &b) {
    return a.file == b.file && a.span == b.span && a.code == b.code &&
           a.message == b.message;
  }
};

inline Diagnostic make_diagnostic(std::string file, Span span, Code code,
                                  Payload payload) {
  Diagnostic d;
  d.file = std::move(file);
  d.span = span;
  d.code = code;
  d.severity = default_severity(code);
  d.message = render_message(code, payload);
  d.payload = std::move(payload);
  return d;
}

// Collects diagnostics for one file and drops exact repeats: the same code at
// the same span about the same place is one defect, however many fixpoint
// visits rediscover it.
class DiagnosticBag {
public:
  explicit DiagnosticBag(std::string file) : file_(std::move(file)) {}

  bool emit(Span span, Code code, Payload payload) {
    DedupKey key{code, span, payload_get(payload, "place"),
                 payload_get(payload, "key"),
                 payload_get(payload, "site-line")};
    if (!seen_.insert(key).second)
      return false;
    diags_.push_back(make_diagnostic(file_, span, code, std::move(payload)));
    return true;
  }

  const std::vector<Diagnostic> &diagnostics() const { return diags_; }
  std::vector<Diagnostic> take() { return std::move(diags_); }
  const std::string &file() const { return file_; }

private:
  using DedupKey =
      std::tuple<Code, Span, std::string, std::string, std::string>;
  std::string file_;
  std::set<DedupKey> seen_;
  std::vector<Diagnostic> diags_;
};

inline void sort_diagnostics(std::vector<Diagnostic> &ds) {
  std::stable_sort(ds.begin(), ds.end(), [](const Diagnostic &a,
                                            const Diagnostic &b) {
    auto ka = std::tie(a.file, a.span.line, a.span.col);
    auto kb = std::tie(b.file, b.span.line, b.span.col);
    if (ka != kb)
      return ka < kb;
    std::string na = code_name(a.code), nb = code_name(b.code);
    if (na != nb)
      return na < nb;
    std::string pa = payload_get(a.payload, "place");
    std::string pb = payload_get(b.payload, "place");
    if (pa != pb)
      return pa < pb;
    return a.message < b.message;
  });
}

inline bool severity_at_least(Severity s, Severity min) {
  return static_cast<int>(s) >= static_cast<int>(min);
}

struct RenderOptions {
  bool color = false;
  bool warn_as_error = false;
};

inline Severity effective_severity(const Diagnostic &d,
                                   const RenderOptions &opt) {
  if (opt.warn_as_error && d.severity == Severity::Warning)
    return Severity::Error;
  return d.severity;
}

// file:line:col: severity: CODE: message
inline std::string render_text(const std::vector<Diagnostic> &ds,
                               const RenderOptions &opt = {}) {
  std::string out;
  for (const Diagnostic &d : ds) {
    Severity sev = effective_severity(d, opt);
    out += d.file;
    out += ':';
    out += std::to_string(d.span.line);
    out += ':';
    out += std::to_string(d.span.col);
    out += ": ";
    if (opt.color) {
      const char *c = sev == Severity::Error     ? "\033[31m"
                      : sev == Severity::Warning ? "\033[35m"
                                                 : "\033[36m";
      out += c;
      out += severity_name(sev);
      out += "\033[0m";
    } else {
      out += severity_name(sev);
    }
    out += ": ";
    out += code_name(d.code);
    out += ": ";
    out += d.message;
    out += '\n';
  }
  return out;
}

// {"version":1,"diagnostics":[...]}, one line, newline-terminated.
inline std::string render_json(const std::vector<Diagnostic> &ds,
                               const RenderOptions &opt = {}) {
  nlohmann::ordered_json root;
  root["version"] = 1;
  root["diagnostics"] = nlohmann::ordered_json::array();
  for (const Diagnostic &d : ds) {
    nlohmann::ordered_json j;
    j["file"] = d.file;
    j["line"] = d.span.line;
    j["col"] = d.span.col;
    j["length"] = d.span.len;
    j["code"] = code_name(d.code);
    j["severity"] = severity_name(effective_severity(d, opt));
    j["message"] = d.message;
    j["payload"] = nlohmann::ordered_json::object();
    for (const auto &[k, v] : d.payload)
      j["payload"][k] = v;
    root["diagnostics"].push_back(std::move(j));
  }
  return root.dump() + "\n";
}

} // namespace crusted

#endif
