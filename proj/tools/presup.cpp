// presup: parse, translate, prove, project, and bench from the command line.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "presup/cli.hpp"

namespace {

bool read_input(const std::string& inline_text, const std::string& path, std::string& out) {
  if (!inline_text.empty()) {
    out = inline_text;
    return true;
  }
  if (path.empty()) return false;
  if (path == "-") {
    out.assign(std::istreambuf_iterator<char>(std::cin), {});
    return true;
  }
  std::ifstream in(path);
  if (!in) return false;
  out.assign(std::istreambuf_iterator<char>(in), {});
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  using presup::cli::Command;

  CLI::App app{"Presupposition projection by contextual reasoning"};
  app.require_subcommand(1);

  presup::cli::CliConfig cfg;
  std::string inline_text;
  std::string path;
  std::string family;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-e", inline_text, "Formula given inline");
    sub->add_option("file", path, "Input file, or - for standard input");
    sub->add_flag("--json", cfg.json, "Emit JSON");
    sub->add_option("--gamma", cfg.limits.gamma_multiplicity,
                    "Universal instantiations per formula and branch")
        ->check(CLI::PositiveNumber);
    sub->add_option("--nodes", cfg.limits.node_limit, "Maximum tableau nodes per proof")
        ->check(CLI::PositiveNumber);
    sub->add_option("--depth", cfg.limits.depth_limit, "Maximum iterative-deepening rounds")
        ->check(CLI::PositiveNumber);
  };

  struct Sub {
    Command command;
    const char* help;
  };
  const Sub subs[] = {
      {Command::parse, "Parse and print the normalized formula"},
      {Command::translate, "Translate a discourse into a contextual formula"},
      {Command::prove, "Search for a closed tableau for a contextual formula"},
      {Command::project, "Compute projected presuppositions"},
      {Command::bench, "Compare independent proofs against one contextual proof"},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(presup::cli::command_name(s.command), s.help);
    add_common(sub);
    sub->callback([&cfg, c = s.command] { cfg.command = c; });
    if (s.command == Command::prove) sub->add_flag("--trace", cfg.trace, "Print the proof");
    if (s.command == Command::project)
      sub->add_flag("--check", cfg.check, "Cross-check against the contextual proof");
    if (s.command == Command::bench)
      sub->add_option("--family", family, "Generated discourse n,k,seed");
  }

  CLI11_PARSE(app, argc, argv);

  if (!family.empty()) {
    presup::cli::FamilySpec spec;
    char c1 = 0, c2 = 0;
    std::istringstream in(family);
    if (!(in >> spec.n >> c1 >> spec.k >> c2 >> spec.seed) || c1 != ',' || c2 != ',' ||
        spec.n == 0 || spec.k == 0) {
      std::cerr << "error: --family expects n,k,seed with n, k >= 1\n";
      return presup::cli::kParseError;
    }
    cfg.family = spec;
  }

  std::string input;
  if (!cfg.family && !read_input(inline_text, path, input)) {
    std::cerr << "error: no input (use -e <formula>, a file, or - for stdin)\n";
    return presup::cli::kParseError;
  }
  return presup::cli::run(cfg, input, std::cout, std::cerr);
}
