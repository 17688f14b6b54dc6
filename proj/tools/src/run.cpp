#include "coulomb/cli/run.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "coulomb/analysis.hpp"
#include "coulomb/numerics.hpp"
#include "coulomb/version.hpp"
#ifdef COULOMB_HAVE_MATRIX
#include "coulomb/eigen_backend.hpp"
#endif

namespace coulomb::cli {

namespace {

namespace fs = std::filesystem;

const MatrixBackend* matrix_backend() {
#ifdef COULOMB_HAVE_MATRIX
  return &eigen_backend();
#else
  return nullptr;
#endif
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const Json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

std::optional<ClosedFormLaw> law_of(const GasModel& model) {
  try {
    return closed_form(model);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoClosedForm) return std::nullopt;
    throw;
  }
}

/// Goodness of fit of pooled positions against a named reference law.
Json fit(std::span<const Complex> points, const std::string& reference) {
  Json j = Json::array();
  if (reference == "cauchy") {
    const auto re = real_parts(points);
    j.push_back(to_json(ks_distance(re, ClosedFormLaw::cauchy())));
  } else if (reference == "spherical") {
    j.push_back(to_json(radial_cdf_distance(points, ClosedFormLaw::spherical())));
    j.push_back(to_json(angular_distance(points)));
  } else if (reference == "circle-uniform") {
    j.push_back(to_json(equator_angle_distance(points)));
  } else {
    j.push_back(to_json(sphere_height_distance(points)));
  }
  return j;
}

std::string reference_for(const ClosedFormLaw& law) { return std::string(to_string(law.name())); }

Json run_sample(const RunConfig& config, const fs::path& dir, std::ostream& log) {
  const auto model = config.model.build();
  std::vector<ChainResult> chains;
  Json stats;
  if (config.sample.method == SamplerMethod::Ensemble) {
    const auto law = law_of(model);
    if (!law) throw Error(ErrorCode::InvalidArgument, "the ensemble sampler needs the cauchy or spherical model");
    if (model.beta() != 2.0) throw Error(ErrorCode::InvalidArgument, "the ensemble sampler is exact only at beta = 2");
    for (std::size_t d = 0; d < config.sample.draws; ++d) {
      // Draw d uses its own stream so any draw is reproducible alone.
      const std::uint64_t seed = config.seed + d;
      ChainResult r;
      r.samples.push_back(law->name() == LawName::CauchyLaw
                              ? sample_cauchy_ensemble(model.n(), seed, matrix_backend())
                              : sample_spherical_ensemble(model.n(), seed, matrix_backend()));
      r.sweeps.push_back(0);
      r.stats.energy_trace.push_back(config_energy(r.samples.back(), model));
      chains.push_back(std::move(r));
    }
    stats["method"] = "ensemble";
    stats["backend"] = std::string(matrix_backend()->name());
  } else {
    chains = run_chains(model, default_initial_configuration(model), config.sample.chain, config.sample.chains);
    stats["method"] = "metropolis";
    Json per_chain = Json::array();
    for (const auto& c : chains) per_chain.push_back(to_json(c.stats));
    stats["chains"] = per_chain;
  }
  {
    auto out = open_output(dir / "samples.csv");
    write_samples(out, chains);
  }
  const auto points = pool(std::span<const ChainResult>(chains));
  stats["sample_size"] = points.size();
  if (const auto law = law_of(model)) stats["fit"] = fit(points, reference_for(*law));
  write_json(dir / "stats.json", stats);
  log << "wrote " << (dir / "samples.csv").string() << " (" << points.size() << " positions)\n";
  return {"samples.csv", "stats.json"};
}

Json run_equilibrium(const RunConfig& config, const fs::path& dir, std::ostream& log) {
  const auto model = config.model.build();
  const auto result = grid_minimize(model, config.grid, config.solver);
  {
    auto out = open_output(dir / "measure.csv");
    write_plane_measure(out, result.measure, model.support().is_real());
  }
  Json report = to_json(result);
  if (const auto law = law_of(model)) {
    report["window_l1_distance"] = window_l1_distance(result, *law);
    report["rate_gap"] = to_json(rate_gap(result.measure, model, std::nullopt, result.grid.self_log));
  }
  write_json(dir / "report.json", report);
  log << "energy " << format_double(result.report.value) << ", gap " << format_double(result.gap)
      << (result.converged ? "" : " (not converged)") << '\n';
  return {"measure.csv", "report.json"};
}

Json run_verify(const RunConfig& config, const fs::path& dir, std::ostream& log, bool& passed) {
  const auto report = verify_identities(config.verify);
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"trials", c.trials},
                      {"max_deviation", c.max_deviation},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed}});
    log << (c.passed ? "PASS " : "FAIL ") << c.name << " max deviation " << format_double(c.max_deviation) << '\n';
  }
  passed = report.passed();
  write_json(dir / "verify.json", {{"passed", passed}, {"checks", checks}, {"seconds", report.seconds}});
  return {"verify.json"};
}

Json run_analyze(const RunConfig& config, const fs::path& dir, std::ostream& log) {
  std::ifstream in(config.analyze.input, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + config.analyze.input);
  const auto rows = read_samples(in);
  std::vector<Complex> points;
  points.reserve(rows.size());
  for (const auto& r : rows) points.push_back(r.position);
  const Json reports = fit(points, config.analyze.reference);
  const Json out = reports.size() == 1 ? reports[0] : Json{{"fits", reports}};
  write_json(dir / "fit.json", out);
  for (const auto& r : reports)
    log << r["reference"].get<std::string>() << " statistic " << format_double(r["statistic"].get<double>()) << '\n';
  return {"fit.json"};
}

}  // namespace

int run(const RunConfig& config, std::ostream& log) {
  const fs::path dir(config.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorCode::IoError, "cannot create output directory " + dir.string());
  set_thread_count(config.threads);

  bool passed = true;
  Json outputs;
  switch (config.command) {
    case Command::Sample: outputs = run_sample(config, dir, log); break;
    case Command::Equilibrium: outputs = run_equilibrium(config, dir, log); break;
    case Command::Verify: outputs = run_verify(config, dir, log, passed); break;
    case Command::Analyze: outputs = run_analyze(config, dir, log); break;
  }
  write_json(dir / "manifest.json", {{"tool", "coulomb"},
                                     {"version", std::string(kVersion)},
                                     {"command", std::string(to_string(config.command))},
                                     {"seed", config.seed},
                                     {"config", to_json(config)},
                                     {"outputs", outputs}});
  return passed ? kExitSuccess : kExitVerificationFailed;
}

}  // namespace coulomb::cli
