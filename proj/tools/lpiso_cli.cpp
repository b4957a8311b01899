// Command-line front end over the lpiso C API.

#include "lpiso/lpiso.h"

#include <CLI11.hpp>

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string format = "human";
  std::string out;
};

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("LPISO_SEED");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (errno != 0 || *end != '\0' || s[0] == '-') {
    std::cerr << "lpiso: ignoring malformed LPISO_SEED '" << s << "'\n";
    return std::nullopt;
  }
  return v;
}

int run(const std::string& name, const Options& opt) {
  lpiso_command cmd;
  if (lpiso_command_from_name(name.c_str(), &cmd) != LPISO_OK) {
    std::cerr << "lpiso: " << lpiso_last_error() << "\n";
    return LPISO_CONFIG_ERROR;
  }
  lpiso_problem* problem = nullptr;
  lpiso_status st = lpiso_problem_from_file(opt.config.c_str(), &problem);
  if (st != LPISO_OK) {
    std::cerr << "lpiso: " << lpiso_last_error() << "\n";
    return st;
  }
  // --seed beats LPISO_SEED beats the config file.
  const auto seed = opt.seed ? opt.seed : env_seed();
  if (seed) lpiso_problem_set_seed(problem, *seed);

  lpiso_report* report = nullptr;
  st = lpiso_run(problem, cmd, &report);
  lpiso_problem_free(problem);
  if (st != LPISO_OK) {
    std::cerr << "lpiso " << name << ": " << lpiso_last_error() << "\n";
    return st;
  }

  const std::string body = opt.format == "json" ? std::string(lpiso_report_json(report)) + "\n" : lpiso_report_text(report);
  const int code = lpiso_report_exit_code(report);
  lpiso_report_free(report);

  if (opt.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(opt.out);
    if (!(f << body)) {
      std::cerr << "lpiso: cannot write '" << opt.out << "'\n";
      return LPISO_CONFIG_ERROR;
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide and certify L^p isometric embeddings between solution spaces of second-order PDEs"};
  app.set_version_flag("--version", std::string(lpiso_version()));
  app.require_subcommand(1);

  Options opt;
  std::string chosen;
  const auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "problem config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "RNG seed; overrides LPISO_SEED and the config");
    sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"human", "json"}));
    sub->add_option("--out", opt.out, "write the report here instead of stdout");
    sub->callback([&chosen, name] { chosen = name; });
  };
  add("diagonalize", "congruence-diagonalize A (and B)");
  add("classify", "decide whether an embedding can exist");
  add("certify", "build the witness operator and certify it");
  add("family-eval", "evaluate a mapping on a grid and dump the points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : LPISO_CONFIG_ERROR;
  }
  return run(chosen, opt);
}
