// Ties the stages together for one source file and for a batch of files:
// tokens -> syntax tree -> active library models -> annotation tables ->
// per-function graphs and analysis -> one sorted diagnostic list.
//
// Files are independent, so a batch can fan out across threads; results are
// collected in input order and sorted globally, which keeps the output
// byte-identical no matter the parallelism or argument order.

#ifndef CRUSTED_DRIVER_HPP
#define CRUSTED_DRIVER_HPP

#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "crusted/abstract_state.hpp"
#include "crusted/analysis.hpp"
#include "crusted/diagnostic.hpp"
#include "crusted/ir.hpp"
#include "crusted/lexer.hpp"
#include "crusted/libmodels.hpp"
#include "crusted/parser.hpp"
#include "crusted/type_table.hpp"

namespace crusted {

struct RunConfig {
  bool dump_cfg = false;
  bool dump_states = false;
};

struct FileResult {
  std::string file;
  std::vector<Diagnostic> diagnostics;
  std::string dumps; // --dump-cfg / --dump-states text, when requested
};

inline FileResult analyze_source(const std::string &filename,
                                 const std::string &source,
                                 const RunConfig &cfg = {}) {
  FileResult out;
  out.file = filename;

  DiagnosticBag bag(filename);
  Lexer lexer(source, bag);
  std::vector<Token> tokens = lexer.run();

  Parser parser(std::move(tokens), bag, [](const std::string &header) {
    return model_type_names_for_header(header);
  });
  TranslationUnit tu = parser.run();

  ActiveModels models = models_for_headers(tu, bag);
  AnnotationTables tables = build_annotation_tables(tu, models, bag);

  std::ostringstream dumps;
  for (const auto &item : tu.items) {
    if (item.kind != ItemKind::Function || !item.fn || !item.fn->body)
      continue;
    const FunctionItem &fn = *item.fn;
    const AnnotatedSignature *sig = tables.find_function(fn.name);
    if (!sig)
      continue;
    CfgBuilder builder(fn, sig->unsafe_kinds, bag);
    Cfg graph = builder.run();
    if (cfg.dump_cfg)
      dumps << dump_cfg(graph);
    FunctionAnalysis analysis(graph, *sig, tables, bag);
    AnalysisResult res = analysis.run();
    if (cfg.dump_states) {
      dumps << "function " << fn.name << "\n";
      for (size_t b = 0; b < res.block_in.size(); ++b) {
        dumps << "  block " << b << ": "
              << res.block_in[b].to_string(analysis.places()) << "\n";
      }
    }
  }

  out.diagnostics = bag.take();
  sort_diagnostics(out.diagnostics);
  out.dumps = dumps.str();
  return out;
}

inline bool read_file(const std::string &path, std::string &out,
                      std::string &err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err = "cannot open '" + path + "'";
    return false;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

// Analyzes a batch of files, fanning out across threads. Results come back
// in input order; `errors` collects unreadable inputs.
inline std::vector<FileResult>
analyze_files(const std::vector<std::string> &paths, const RunConfig &cfg,
              std::vector<std::string> &errors) {
  std::vector<std::future<FileResult>> futures;
  futures.reserve(paths.size());
  std::vector<std::string> read_errors(paths.size());
  for (size_t i = 0; i < paths.size(); ++i) {
    futures.push_back(std::async(std::launch::async, [&, i]() -> FileResult {
      std::string source;
      std::string err;
      if (!read_file(paths[i], source, err)) {
        read_errors[i] = err;
        return FileResult{paths[i], {}, {}};
      }
      return analyze_source(paths[i], source, cfg);
    }));
  }
  std::vector<FileResult> results;
  results.reserve(paths.size());
  for (auto &f : futures)
    results.push_back(f.get());
  for (const std::string &e : read_errors)
    if (!e.empty())
      errors.push_back(e);
  return results;
}

// Merges per-file results into one globally sorted diagnostic list.
inline std::vector<Diagnostic>
merge_diagnostics(const std::vector<FileResult> &results) {
  std::vector<Diagnostic> all;
  for (const FileResult &r : results)
    all.insert(all.end(), r.diagnostics.begin(), r.diagnostics.end());
  sort_diagnostics(all);
  return all;
}

} // namespace crusted

#endif
