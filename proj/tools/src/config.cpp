#include "coulomb/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace coulomb::cli {

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ValidationError, path + ": " + what);
}

/// Reads the keys of one JSON object and rejects any it was not asked about.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) invalid(path_.empty() ? "config" : path_, "expected an object");
  }

  const Json* find(const std::string& key) {
    known_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void number(const std::string& key, double& out) {
    if (const auto* v = find(key)) {
      if (!v->is_number()) invalid(path(key), "expected a number");
      out = v->get<double>();
    }
  }
  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (const auto* v = find(key)) {
      if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<long long>() < 0))
        invalid(path(key), "expected a nonnegative integer");
      const auto raw = v->get<std::uint64_t>();
      if (raw > std::numeric_limits<Int>::max()) invalid(path(key), "out of range");
      out = static_cast<Int>(raw);
    }
  }
  void boolean(const std::string& key, bool& out) {
    if (const auto* v = find(key)) {
      if (!v->is_boolean()) invalid(path(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  void string(const std::string& key, std::string& out) {
    if (const auto* v = find(key)) {
      if (!v->is_string()) invalid(path(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void finish() const {
    for (const auto& [key, _] : j_.items())
      if (!known_.count(key)) throw Error(ErrorCode::ParseError, "unknown key '" + key + "' in " + (path_.empty() ? "config" : path_));
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> known_;
};

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

Support default_support(const PotentialSpec& potential) {
  return potential.name() == "spherical" ? Support(SupportKind::ComplexPlane) : Support(SupportKind::RealLine);
}

void read_model(const Json& j, ModelConfig& model) {
  if (j.is_string()) {
    try {
      model.potential = PotentialSpec::builtin(j.get<std::string>());
    } catch (const Error&) {
      invalid("model", "unknown built-in potential '" + j.get<std::string>() + "'");
    }
    model.support = default_support(model.potential);
    return;
  }
  Section s(j, "model");
  if (const auto* p = s.find("potential")) {
    try {
      model.potential = potential_from_json(*p);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidArgument) invalid("model.potential", e.what());
      throw;
    }
  }
  model.support = default_support(model.potential);
  std::string support;
  s.string("support", support);
  if (!support.empty()) {
    try {
      model.support = Support::from_name(support);
    } catch (const Error&) {
      invalid("model.support", "unknown support '" + support + "'");
    }
  }
  s.number("beta", model.beta);
  if (!(model.beta > 0.0) || !std::isfinite(model.beta)) invalid("model.beta", "must be positive");
  s.integer("n", model.n);
  if (model.n < 1) invalid("model.n", "must be at least 1");
  s.finish();
}

void read_sample(const Json& j, SampleConfig& sample) {
  Section s(j, "chain");
  std::string method;
  s.string("method", method);
  if (method == "metropolis" || method.empty())
    sample.method = SamplerMethod::Metropolis;
  else if (method == "ensemble")
    sample.method = SamplerMethod::Ensemble;
  else
    invalid("chain.method", "expected \"metropolis\" or \"ensemble\"");
  auto& c = sample.chain;
  s.integer("sweeps", c.sweeps);
  if (const auto* b = s.find("burn_in"); b && !b->is_null()) {
    std::size_t burn = 0;
    s.integer("burn_in", burn);
    c.burn_in = burn;
  }
  s.number("step_scale", c.step_scale);
  s.boolean("adapt", c.adapt);
  s.integer("thin", c.thin);
  if (const auto* h = s.find("heavy_tail"); h && !h->is_null()) {
    bool heavy = false;
    s.boolean("heavy_tail", heavy);
    c.heavy_tail = heavy;
  }
  s.integer("chains", sample.chains);
  s.integer("draws", sample.draws);
  s.finish();
  try {
    validate(c);
  } catch (const Error& e) {
    invalid("chain", e.what());
  }
  if (sample.chains < 1) invalid("chain.chains", "must be at least 1");
  if (sample.draws < 1) invalid("chain.draws", "must be at least 1");
}

void read_grid(const Json& j, GridSpec& grid) {
  Section s(j, "grid");
  s.number("window", grid.window);
  s.integer("resolution", grid.resolution);
  std::string layout;
  s.string("layout", layout);
  if (!layout.empty()) {
    try {
      grid.layout = grid_layout_from_name(layout);
    } catch (const Error&) {
      invalid("grid.layout", "expected \"uniform\" or \"compactified\"");
    }
  }
  s.integer("angular_resolution", grid.angular_resolution);
  s.finish();
  if (!(grid.window > 0.0) || !std::isfinite(grid.window)) invalid("grid.window", "must be positive");
  if (grid.resolution < kMinGridResolution)
    invalid("grid.resolution", "must be at least " + std::to_string(kMinGridResolution));
  if (grid.angular_resolution != 0 && grid.angular_resolution < 3)
    invalid("grid.angular_resolution", "must be 0 or at least 3");
}

void read_solver(const Json& j, SolverOptions& solver) {
  Section s(j, "solver");
  std::string method;
  s.string("method", method);
  if (method == "frank-wolfe" || method.empty())
    solver.method = SolverMethod::FrankWolfe;
  else if (method == "projected-gradient")
    solver.method = SolverMethod::ProjectedGradient;
  else
    invalid("solver.method", "expected \"frank-wolfe\" or \"projected-gradient\"");
  s.number("tol", solver.tol);
  s.integer("max_iter", solver.max_iter);
  s.boolean("polish", solver.polish);
  s.finish();
  if (!(solver.tol > 0.0)) invalid("solver.tol", "must be positive");
  if (solver.max_iter < 1) invalid("solver.max_iter", "must be at least 1");
}

void read_verify(const Json& j, VerifyOptions& verify) {
  Section s(j, "verify");
  s.integer("pairs", verify.pairs);
  s.integer("configurations", verify.configurations);
  s.integer("particles", verify.particles);
  s.integer("measures", verify.measures);
  s.integer("atoms", verify.atoms);
  s.finish();
  if (verify.particles < 2) invalid("verify.particles", "must be at least 2");
  if (verify.atoms < 1) invalid("verify.atoms", "must be at least 1");
}

const std::set<std::string> kReferences = {"cauchy", "spherical", "circle-uniform", "sphere-uniform"};

void read_analyze(const Json& j, AnalyzeConfig& analyze) {
  Section s(j, "analyze");
  s.string("input", analyze.input);
  s.string("reference", analyze.reference);
  s.finish();
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::Sample: return "sample";
    case Command::Equilibrium: return "equilibrium";
    case Command::Verify: return "verify";
    case Command::Analyze: return "analyze";
  }
  return "unknown";
}

Command command_from_name(std::string_view name) {
  for (auto c : {Command::Sample, Command::Equilibrium, Command::Verify, Command::Analyze})
    if (to_string(c) == name) return c;
  throw Error(ErrorCode::ValidationError, "command: unknown command '" + std::string(name) + "'");
}

RunConfig parse_config(std::string_view text, Command command, const Overrides& overrides) {
  RunConfig config;
  config.command = command;

  const bool blank = std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  Json j = Json::object();
  if (!blank) {
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      const auto [line, column] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line) + ", column " + std::to_string(column) + ": malformed JSON");
    }
  }

  Section s(j, "");
  std::string named;
  s.string("command", named);
  if (!named.empty() && command_from_name(named) != command)
    invalid("command", "file is for '" + named + "' but '" + std::string(to_string(command)) + "' was requested");
  if (const auto* m = s.find("model")) read_model(*m, config.model);
  if (const auto* c = s.find("chain")) read_sample(*c, config.sample);
  if (const auto* g = s.find("grid")) read_grid(*g, config.grid);
  if (const auto* o = s.find("solver")) read_solver(*o, config.solver);
  if (const auto* v = s.find("verify")) read_verify(*v, config.verify);
  if (const auto* a = s.find("analyze")) read_analyze(*a, config.analyze);
  s.string("out", config.out);
  s.integer("seed", config.seed);
  s.integer("threads", config.threads);
  s.finish();

  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.out) config.out = *overrides.out;
  if (overrides.threads) config.threads = *overrides.threads;
  if (overrides.input) config.analyze.input = *overrides.input;
  if (overrides.reference) config.analyze.reference = *overrides.reference;

  if (config.threads < 1) invalid("threads", "must be at least 1");
  if (config.out.empty()) invalid("out", "must name a directory");
  if (!kReferences.count(config.analyze.reference))
    invalid("analyze.reference", "expected cauchy, spherical, circle-uniform or sphere-uniform");
  if (command == Command::Analyze && config.analyze.input.empty())
    invalid("analyze.input", "a samples CSV is required");
  config.sample.chain.seed = config.seed;
  config.verify.seed = config.seed;
  return config;
}

Json to_json(const RunConfig& config) {
  Json j;
  j["command"] = std::string(to_string(config.command));
  const auto& m = config.model;
  j["model"] = {{"potential", potential_to_json(m.potential)},
                {"support", std::string(m.support.name())},
                {"beta", m.beta},
                {"n", m.n}};
  const auto& c = config.sample.chain;
  j["chain"] = {{"method", config.sample.method == SamplerMethod::Metropolis ? "metropolis" : "ensemble"},
                {"sweeps", c.sweeps},
                {"burn_in", c.resolved_burn_in()},
                {"step_scale", c.step_scale},
                {"adapt", c.adapt},
                {"thin", c.thin},
                {"heavy_tail", c.heavy_tail ? Json(*c.heavy_tail) : Json(nullptr)},
                {"chains", config.sample.chains},
                {"draws", config.sample.draws}};
  j["grid"] = {{"window", config.grid.window},
               {"resolution", config.grid.resolution},
               {"layout", std::string(to_string(config.grid.layout))},
               {"angular_resolution", config.grid.angular_resolution}};
  j["solver"] = {{"method", config.solver.method == SolverMethod::FrankWolfe ? "frank-wolfe" : "projected-gradient"},
                 {"tol", config.solver.tol},
                 {"max_iter", config.solver.max_iter},
                 {"polish", config.solver.polish}};
  j["verify"] = {{"pairs", config.verify.pairs},
                 {"configurations", config.verify.configurations},
                 {"particles", config.verify.particles},
                 {"measures", config.verify.measures},
                 {"atoms", config.verify.atoms}};
  j["analyze"] = {{"input", config.analyze.input}, {"reference", config.analyze.reference}};
  j["out"] = config.out;
  j["seed"] = config.seed;
  j["threads"] = config.threads;
  return j;
}

}  // namespace coulomb::cli
