#include "coulomb/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace coulomb {

namespace {

Json number_or_string(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

double read_number(const Json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw Error(ErrorCode::ValidationError, field + ": expected a number");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text, std::size_t line) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin < end && *begin == ' ') ++begin;
  if (std::string_view(begin, end - begin) == "inf") return std::numeric_limits<double>::infinity();
  if (std::string_view(begin, end - begin) == "-inf") return -std::numeric_limits<double>::infinity();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": '" + text + "' is not a number");
  return value;
}

std::size_t parse_index(const std::string& text, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": '" + text + "' is not an index");
  return value;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json potential_to_json(const PotentialSpec& spec) {
  Json j;
  j["name"] = spec.name();
  if (spec.is_builtin()) {
    j["params"] = Json::object();
  } else if (const auto& form = spec.form()) {
    j["params"] = {{"coefficients", form->coefficients},
                   {"variable", form->variable == PolyVariable::X ? "x" : "abs2"},
                   {"log_coeff", form->log_coeff}};
  } else {
    throw Error(ErrorCode::InvalidArgument, "potential '" + spec.name() + "' has no serializable form");
  }
  j["beta_prime"] = spec.beta_prime() ? Json(*spec.beta_prime()) : Json(nullptr);
  j["v_infinity"] = spec.declared_v_infinity() ? number_or_string(*spec.declared_v_infinity()) : Json(nullptr);
  return j;
}

PotentialSpec potential_from_json(const Json& j) {
  if (j.is_string()) return PotentialSpec::builtin(j.get<std::string>());
  if (!j.is_object()) throw Error(ErrorCode::ValidationError, "potential: expected a name or an object");
  for (const auto& [key, _] : j.items())
    if (key != "name" && key != "params" && key != "beta_prime" && key != "v_infinity")
      throw Error(ErrorCode::ParseError, "potential: unknown key '" + key + "'");
  if (!j.contains("name") || !j["name"].is_string())
    throw Error(ErrorCode::ValidationError, "potential.name: required string");
  const auto name = j["name"].get<std::string>();
  std::optional<double> beta_prime, v_inf;
  if (j.contains("beta_prime") && !j["beta_prime"].is_null()) {
    beta_prime = read_number(j["beta_prime"], "potential.beta_prime");
    if (!(*beta_prime > 0.0)) throw Error(ErrorCode::ValidationError, "potential.beta_prime: must be positive");
  }
  if (j.contains("v_infinity") && !j["v_infinity"].is_null())
    v_inf = read_number(j["v_infinity"], "potential.v_infinity");

  const bool has_params = j.contains("params") && !j["params"].is_null() && !j["params"].empty();
  if (!has_params) {
    PotentialSpec spec = [&] {
      try {
        return PotentialSpec::builtin(name);
      } catch (const Error&) {
        throw Error(ErrorCode::ValidationError, "potential.name: unknown built-in '" + name + "'");
      }
    }();
    if (beta_prime) spec = spec.with_beta_prime(*beta_prime);
    if (v_inf) throw Error(ErrorCode::ValidationError, "potential.v_infinity: fixed for built-in potentials");
    return spec;
  }
  const auto& p = j["params"];
  if (!p.is_object()) throw Error(ErrorCode::ValidationError, "potential.params: expected an object");
  PolyLogPotential form;
  for (const auto& [key, value] : p.items()) {
    if (key == "coefficients") {
      if (!value.is_array()) throw Error(ErrorCode::ValidationError, "potential.params.coefficients: expected array");
      for (std::size_t k = 0; k < value.size(); ++k)
        form.coefficients.push_back(
            read_number(value[k], "potential.params.coefficients[" + std::to_string(k) + "]"));
    } else if (key == "variable") {
      const auto v = value.is_string() ? value.get<std::string>() : std::string();
      if (v == "x")
        form.variable = PolyVariable::X;
      else if (v == "abs2")
        form.variable = PolyVariable::AbsSquared;
      else
        throw Error(ErrorCode::ValidationError, "potential.params.variable: expected \"x\" or \"abs2\"");
    } else if (key == "log_coeff") {
      form.log_coeff = read_number(value, "potential.params.log_coeff");
    } else {
      throw Error(ErrorCode::ParseError, "potential.params: unknown key '" + key + "'");
    }
  }
  return PotentialSpec::poly_log(name, std::move(form), beta_prime, v_inf);
}

Json to_json(const EnergyReport& report) {
  return {{"value", number_or_string(report.value)},
          {"diagonal_policy", std::string(to_string(report.diagonal_policy))},
          {"pair_count", report.pair_count}};
}

Json to_json(const FitReport& report) {
  return {{"statistic", report.statistic}, {"sample_size", report.sample_size}, {"reference", report.reference}};
}

Json to_json(const RateGap& gap) {
  return {{"value", number_or_string(gap.value)},
          {"energy", number_or_string(gap.energy)},
          {"reference_energy", gap.reference_energy},
          {"reference", gap.reference},
          {"diagonal_policy", std::string(to_string(gap.diagonal_policy))}};
}

Json to_json(const MinimizerResult& result) {
  Json j;
  j["energy"] = number_or_string(result.report.value);
  j["gap"] = result.gap;
  j["iterations"] = result.iterations;
  j["captured_mass"] = result.captured_mass ? Json(*result.captured_mass) : Json(nullptr);
  j["converged"] = result.converged;
  j["objective"] = result.objective;
  j["atoms"] = result.grid.size();
  j["report"] = to_json(result.report);
  return j;
}

Json to_json(const ChainStats& stats) {
  Json summary;
  const auto& t = stats.energy_trace;
  summary["count"] = t.size();
  if (!t.empty()) {
    double sum = 0.0;
    for (double e : t) sum += e;
    summary["mean"] = sum / static_cast<double>(t.size());
    summary["min"] = *std::min_element(t.begin(), t.end());
    summary["max"] = *std::max_element(t.begin(), t.end());
    summary["first"] = t.front();
    summary["last"] = t.back();
  }
  return {{"acceptance_rate", stats.acceptance_rate},
          {"burn_in_acceptance_rate", stats.burn_in_acceptance_rate},
          {"final_step_scale", stats.final_step_scale},
          {"energy_trace_summary", summary}};
}

void write_plane_measure(std::ostream& out, const PlaneMeasure& mu, bool real_columns) {
  const bool real = real_columns && std::all_of(mu.atoms().begin(), mu.atoms().end(),
                                                [](const auto& a) { return a.position.imag() == 0.0; });
  out << (real ? "x,weight\n" : "re,im,weight\n");
  for (const auto& a : mu.atoms()) {
    if (real)
      out << format_double(a.position.real()) << ',' << format_double(a.weight) << '\n';
    else
      out << format_double(a.position.real()) << ',' << format_double(a.position.imag()) << ','
          << format_double(a.weight) << '\n';
  }
}

void write_sphere_measure(std::ostream& out, const SphereMeasure& mu) {
  out << "x1,x2,x3,weight\n";
  for (const auto& a : mu.atoms())
    out << format_double(a.position.x1()) << ',' << format_double(a.position.x2()) << ','
        << format_double(a.position.x3()) << ',' << format_double(a.weight) << '\n';
}

PlaneMeasure read_plane_measure(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "line 1: missing header");
  line = strip_cr(line);
  bool real;
  if (line == "x,weight")
    real = true;
  else if (line == "re,im,weight")
    real = false;
  else
    throw Error(ErrorCode::ParseError, "line 1: expected header 'x,weight' or 're,im,weight'");
  std::vector<Atom<Complex>> atoms;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != (real ? 2u : 3u))
      throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": wrong column count");
    const Complex p = real ? Complex(parse_double(cells[0], number), 0.0)
                           : Complex(parse_double(cells[0], number), parse_double(cells[1], number));
    atoms.push_back({p, parse_double(cells.back(), number)});
  }
  return PlaneMeasure(std::move(atoms));
}

void write_samples(std::ostream& out, std::span<const ChainResult> chains) {
  out << "chain,sweep,particle,re,im\n";
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const auto& chain = chains[c];
    for (std::size_t s = 0; s < chain.samples.size(); ++s) {
      const auto pts = chain.samples[s].points();
      for (std::size_t i = 0; i < pts.size(); ++i)
        out << c << ',' << chain.sweeps[s] << ',' << i << ',' << format_double(pts[i].real()) << ','
            << format_double(pts[i].imag()) << '\n';
    }
  }
}

std::vector<SampleRow> read_samples(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "chain,sweep,particle,re,im")
    throw Error(ErrorCode::ParseError, "line 1: expected header 'chain,sweep,particle,re,im'");
  std::vector<SampleRow> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 5)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": expected 5 columns");
    rows.push_back({parse_index(cells[0], number), parse_index(cells[1], number), parse_index(cells[2], number),
                    Complex(parse_double(cells[3], number), parse_double(cells[4], number))});
  }
  return rows;
}

}  // namespace coulomb
