// crusted-check: analyze annotated C sources and report defects.
//
// Exit status: 0 when no warnings or errors were produced, 1 when at least
// one was, 2 on usage errors or unreadable inputs.

#include <crusted/driver.hpp>
#include <crusted/header_gen.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#if defined(_WIN32)
#include <io.h>
#define CRUSTED_ISATTY _isatty
#define CRUSTED_FILENO _fileno
#else
#include <unistd.h>
#define CRUSTED_ISATTY isatty
#define CRUSTED_FILENO fileno
#endif

namespace {

bool want_color() {
  const char *env = std::getenv("CRUSTED_NO_COLOR");
  if (env && *env)
    return false;
  return CRUSTED_ISATTY(CRUSTED_FILENO(stdout)) != 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Static checker for C-rusted annotated sources"};
  app.name("crusted-check");

  std::vector<std::string> inputs;
  std::string format = "text";
  std::string header_path;
  bool warn_as_error = false;
  bool dump_cfg = false;
  bool dump_states = false;

  app.add_option("inputs", inputs, "Source files to analyze");
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_flag("--warn-as-error", warn_as_error,
               "Treat warnings as errors");
  app.add_option("--emit-header", header_path,
                 "Write the crusted.h annotation header to PATH");
  app.add_flag("--dump-cfg", dump_cfg,
               "Print each function's control-flow graph");
  app.add_flag("--dump-states", dump_states,
               "Print per-block abstract states");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    // CLI11 returns 0 for --help; anything else is a usage error.
    return rc == 0 ? 0 : 2;
  }

  if (!header_path.empty()) {
    std::string err;
    if (!crusted::write_crusted_header(header_path, &err)) {
      std::cerr << "crusted-check: " << err << "\n";
      return 2;
    }
  }

  if (inputs.empty()) {
    if (!header_path.empty())
      return 0; // --emit-header alone is a complete request
    std::cerr << "crusted-check: no input files\n";
    return 2;
  }

  crusted::RunConfig cfg;
  cfg.dump_cfg = dump_cfg;
  cfg.dump_states = dump_states;

  std::vector<std::string> errors;
  std::vector<crusted::FileResult> results =
      crusted::analyze_files(inputs, cfg, errors);
  if (!errors.empty()) {
    for (const auto &e : errors)
      std::cerr << "crusted-check: " << e << "\n";
    return 2;
  }

  for (const auto &r : results)
    if (!r.dumps.empty())
      std::cout << r.dumps;

  std::vector<crusted::Diagnostic> all = crusted::merge_diagnostics(results);

  crusted::RenderOptions opt;
  opt.warn_as_error = warn_as_error;
  opt.color = format == "text" && want_color();

  if (format == "json")
    std::cout << crusted::render_json(all, opt);
  else
    std::cout << crusted::render_text(all, opt);

  for (const auto &d : all)
    if (crusted::effective_severity(d, opt) >= crusted::Severity::Warning)
      return 1;
  return 0;
}
