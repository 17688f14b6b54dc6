#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "coulomb/cli/run.hpp"
#include "coulomb/version.hpp"

namespace {

using namespace coulomb;
using namespace coulomb::cli;

struct Flags {
  std::string config;
  Overrides overrides;
};

void add_flags(CLI::App& sub, Flags& flags) {
  sub.add_option("--config", flags.config, "JSON run configuration")->check(CLI::ExistingFile);
  sub.add_option_function<std::uint64_t>("--seed", [&](std::uint64_t v) { flags.overrides.seed = v; }, "RNG seed");
  sub.add_option_function<std::string>("--out", [&](const std::string& v) { flags.overrides.out = v; },
                                       "output directory");
  sub.add_option_function<unsigned>("--threads", [&](unsigned v) { flags.overrides.threads = v; },
                                    "worker threads")
      ->check(CLI::PositiveNumber);
}

std::string read_file(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coulomb gas sampler, equilibrium solver and identity checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Flags flags;
  auto* sample = app.add_subcommand("sample", "run Metropolis chains or exact matrix ensembles");
  auto* equilibrium = app.add_subcommand("equilibrium", "minimise the discretised energy on a grid");
  auto* verify = app.add_subcommand("verify", "check the compactification identities");
  auto* analyze = app.add_subcommand("analyze", "fit a samples CSV against a reference law");
  for (auto* sub : {sample, equilibrium, verify, analyze}) add_flags(*sub, flags);
  analyze->add_option_function<std::string>("--input", [&](const std::string& v) { flags.overrides.input = v; },
                                            "samples CSV");
  analyze->add_option_function<std::string>("--reference", [&](const std::string& v) { flags.overrides.reference = v; },
                                            "cauchy, spherical, circle-uniform or sphere-uniform");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    const auto* chosen = app.get_subcommands().front();
    const auto config = parse_config(read_file(flags.config), command_from_name(chosen->get_name()), flags.overrides);
    return run(config, std::cout);
  } catch (const Error& e) {
    std::cerr << "coulomb: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "coulomb: " << e.what() << '\n';
    return kExitUsage;
  }
}
