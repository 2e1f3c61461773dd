#include "evoform/registry.hpp"

#include <cstddef>
#include <set>
#include <sstream>
#include <stdexcept>

namespace evoform {

namespace {

double parse_double(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("scenario parameter '" + key + "': not a number: '" +
                                text + "'");
  }
  if (pos != text.size())
    throw std::invalid_argument("scenario parameter '" + key +
                                "': trailing characters in '" + text + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  const int n = static_cast<int>(v);
  if (static_cast<double>(n) != v)
    throw std::invalid_argument("scenario parameter '" + key +
                                "': expected an integer, got '" + text + "'");
  return n;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(parse_double(key, item));
  if (out.empty())
    throw std::invalid_argument("scenario parameter '" + key + "': empty list");
  return out;
}

struct ParamReader {
  const ParamMap& params;
  std::set<std::string> seen;

  std::string get(const std::string& key, const std::string& fallback) {
    seen.insert(key);
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }
  double get_double(const std::string& key, double fallback) {
    seen.insert(key);
    auto it = params.find(key);
    return it == params.end() ? fallback : parse_double(key, it->second);
  }
  int get_int(const std::string& key, int fallback) {
    seen.insert(key);
    auto it = params.find(key);
    return it == params.end() ? fallback : parse_int(key, it->second);
  }
  void finish(const std::string& scenario) const {
    for (const auto& kv : params)
      if (!seen.count(kv.first))
        throw std::invalid_argument("scenario '" + scenario +
                                    "': unknown parameter '" + kv.first + "'");
  }
};

}  // namespace

const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> table = {
      {"constant", "time-independent coefficient; every approximant is exact",
       "c=1 omega=0 horizon=1"},
      {"linear_coeff", "affine coefficient c(t) = a + b*t", "a=1 b=1 omega=0 horizon=1"},
      {"jump_coeff", "piecewise-constant coefficient with declared jump times",
       "times=0.375 values=1,3 omega=0 horizon=1"},
      {"staircase_bv", "n_jumps equal steps with total variation = amplitude",
       "c0=1 amplitude=1 n_jumps=97 omega=0 horizon=1"},
      {"separable_spectral", "affine coefficient paired with the modal reference solver",
       "a=1 b=1 omega=0 horizon=1"},
  };
  return table;
}

Scenario<double> make_scenario(const std::string& name, const ParamMap& params,
                               const GelfandTriple<double>& triple) {
  ParamReader reader{params, {}};
  const double horizon = reader.get_double("horizon", 1.0);
  const double omega = reader.get_double("omega", 0.0);
  if (!(horizon > 0.0))
    throw std::invalid_argument("scenario '" + name + "': horizon must be positive");

  ScalarCoefficient coeff = ScalarCoefficient::constant(1.0, horizon);
  if (name == "constant") {
    coeff = ScalarCoefficient::constant(reader.get_double("c", 1.0), horizon);
  } else if (name == "linear_coeff" || name == "separable_spectral") {
    coeff = ScalarCoefficient::affine(reader.get_double("a", 1.0),
                                      reader.get_double("b", 1.0), horizon);
  } else if (name == "jump_coeff") {
    const std::vector<double> times = parse_list("times", reader.get("times", "0.375"));
    const std::vector<double> values = parse_list("values", reader.get("values", "1,3"));
    coeff = ScalarCoefficient::piecewise_constant(times, values, horizon);
  } else if (name == "staircase_bv") {
    coeff = ScalarCoefficient::staircase(reader.get_double("c0", 1.0),
                                         reader.get_double("amplitude", 1.0),
                                         reader.get_int("n_jumps", 97), horizon);
  } else {
    std::string known;
    for (const auto& info : scenario_registry())
      known += (known.empty() ? "" : ", ") + info.name;
    throw std::invalid_argument("unknown scenario '" + name + "' (known: " + known +
                                ")");
  }
  reader.finish(name);
  return make_scalar_scenario<double>(name, std::move(coeff), omega, triple);
}

}  // namespace evoform
