#include "sclt/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "sclt/errors.hpp"

namespace sclt::run {

namespace {

// Shortest text that parses back to the same double.
std::string fmt17(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError("config: key '" + key + "' expects a real, got '" + v + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    // Allow integral values written in scientific form such as 1e6.
    const double d = parse_double(key, v);
    if (!(d >= 0.0) || d != std::floor(d) || d > 1.8e19) {
      throw ConfigError("config: key '" + key + "' expects a non-negative integer, got '" + v + "'");
    }
    return static_cast<std::uint64_t>(d);
  }
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(key, item));
  }
  return out;
}

struct Field {
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <class T>
Field real_field(T RunConfig::*m) {
  return {[m](const RunConfig& c) { return fmt17(static_cast<double>(c.*m)); },
          [m](RunConfig& c, const std::string& v) { c.*m = parse_double("", v); }};
}

template <class T>
Field int_field(T RunConfig::*m) {
  return {[m](const RunConfig& c) { return std::to_string(c.*m); },
          [m](RunConfig& c, const std::string& v) { c.*m = static_cast<T>(parse_u64("", v)); }};
}

Field string_field(std::string RunConfig::*m) {
  return {[m](const RunConfig& c) { return c.*m; }, [m](RunConfig& c, const std::string& v) { c.*m = v; }};
}

// Ordered as written by to_text().
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"T", real_field(&RunConfig::T)},
      {"samples", int_field(&RunConfig::samples)},
      {"seed", int_field(&RunConfig::seed)},
      {"ladder_mode",
       {[](const RunConfig& c) { return std::string(c.ladder_mode == LadderMode::kExplicit ? "explicit" : "asymptotic"); },
        [](RunConfig& c, const std::string& v) {
          if (v == "explicit") {
            c.ladder_mode = LadderMode::kExplicit;
          } else if (v == "asymptotic") {
            c.ladder_mode = LadderMode::kAsymptotic;
          } else {
            throw ConfigError("config: ladder_mode must be explicit or asymptotic, got '" + v + "'");
          }
        }}},
      {"theta_x", real_field(&RunConfig::theta_x)},
      {"theta_1", real_field(&RunConfig::theta_1)},
      {"theta_2", real_field(&RunConfig::theta_2)},
      {"x_squared_cap", int_field(&RunConfig::x_squared_cap)},
      {"sigma0", real_field(&RunConfig::sigma0)},
      {"em_terms", int_field(&RunConfig::em_terms)},
      {"em_bernoulli_order", int_field(&RunConfig::em_bernoulli_order)},
      {"em_error_budget", real_field(&RunConfig::em_error_budget)},
      {"normalization",
       {[](const RunConfig& c) { return to_string(c.normalization); },
        [](RunConfig& c, const std::string& v) { c.normalization = parse_normalization(v); }}},
      {"gaussian_quantization", int_field(&RunConfig::gaussian_quantization)},
      {"cf_xi_max", real_field(&RunConfig::cf_xi_max)},
      {"cf_points", int_field(&RunConfig::cf_points)},
      {"r1", real_field(&RunConfig::r1)},
      {"fourier_c", real_field(&RunConfig::fourier_c)},
      {"fourier_d", real_field(&RunConfig::fourier_d)},
      {"moment_x", real_field(&RunConfig::moment_x)},
      {"moment_k_max", int_field(&RunConfig::moment_k_max)},
      {"quadrature_nodes", int_field(&RunConfig::quadrature_nodes)},
      {"identity_t_min", real_field(&RunConfig::identity_t_min)},
      {"identity_t_max", real_field(&RunConfig::identity_t_max)},
      {"identity_points", int_field(&RunConfig::identity_points)},
      {"identity_sigma", real_field(&RunConfig::identity_sigma)},
      {"identity_x", real_field(&RunConfig::identity_x)},
      {"identity_window", real_field(&RunConfig::identity_window)},
      {"zero_resolution", real_field(&RunConfig::zero_resolution)},
      {"offaxis_samples", int_field(&RunConfig::offaxis_samples)},
      {"ladder_t_values",
       {[](const RunConfig& c) {
          std::string out;
          for (std::size_t i = 0; i < c.ladder_t_values.size(); ++i) {
            if (i) out += ", ";
            out += fmt17(c.ladder_t_values[i]);
          }
          return out;
        },
        [](RunConfig& c, const std::string& v) { c.ladder_t_values = parse_list("ladder_t_values", v); }}},
      {"out_csv", string_field(&RunConfig::out_csv)},
      {"out_json", string_field(&RunConfig::out_json)},
      {"threads", int_field(&RunConfig::threads)},
  };
  return table;
}

}  // namespace

std::string to_string(Normalization n) { return n == Normalization::kPaper ? "paper" : "variance"; }

Normalization parse_normalization(const std::string& s) {
  if (s == "paper") return Normalization::kPaper;
  if (s == "variance") return Normalization::kVariance;
  throw ConfigError("normalization must be paper or variance, got '" + s + "'");
}

void RunConfig::validate() const {
  if (!(T >= 1e3)) throw ConfigError("config: T must be at least 1e3");
  if (samples < 1) throw ConfigError("config: samples must be >= 1");
  if (ladder_mode == LadderMode::kExplicit && !(theta_x > 0.0 && theta_1 > 0.0 && theta_2 > 0.0)) {
    throw ConfigError("config: explicit exponents must be positive");
  }
  if (sigma0 != 0.0 && !(sigma0 > 0.5)) {
    throw ConfigError("config: off-axis shift must be positive (sigma0 > 1/2)");
  }
  if (em_bernoulli_order < 1 || em_bernoulli_order > zeta::kMaxBernoulliOrder) {
    throw ConfigError("config: em_bernoulli_order out of range");
  }
  if (!(em_error_budget > 0.0)) throw ConfigError("config: em_error_budget must be positive");
  if (gaussian_quantization < 1) throw ConfigError("config: gaussian_quantization must be >= 1");
  if (cf_points < 3 || cf_points % 2 == 0) throw ConfigError("config: cf_points must be odd and >= 3");
  if (!(cf_xi_max > 0.0)) throw ConfigError("config: cf_xi_max must be positive");
  if (r1 < 0.0 || !(fourier_c > 0.0)) throw ConfigError("config: r1 >= 0 and fourier_c > 0");
  if (!(moment_x >= 2.0)) throw ConfigError("config: moment_x must be >= 2");
  if (quadrature_nodes < 2) throw ConfigError("config: quadrature_nodes must be >= 2");
  if (!(identity_t_min < identity_t_max) || identity_points < 1) {
    throw ConfigError("config: identity sweep needs t_min < t_max and at least one point");
  }
  if (!(zero_resolution > 0.0)) throw ConfigError("config: zero_resolution must be positive");
}

chain::ClampPolicy RunConfig::clamp_policy() const {
  chain::ClampPolicy p;
  p.x_squared_cap = x_squared_cap;
  if (ladder_mode == LadderMode::kExplicit) p.explicit_exponents = std::array<double, 3>{theta_x, theta_1, theta_2};
  return p;
}

chain::ParameterLadder RunConfig::ladder(double height) const {
  auto l = chain::ladder_from_T(height, clamp_policy());
  if (sigma0 != 0.0) l = chain::with_sigma0(std::move(l), sigma0);
  return l;
}

zeta::EMConfig RunConfig::em_config() const {
  zeta::EMConfig c;
  c.terms = em_terms;
  c.bernoulli_order = em_bernoulli_order;
  c.error_budget = em_error_budget;
  return c;
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [key, field] : fields()) out += key + " = " + field.get(*this) + "\n";
  return out;
}

RunConfig RunConfig::from_text(const std::string& text) {
  std::map<std::string, const Field*> index;
  for (const auto& [key, field] : fields()) index[key] = &field;
  RunConfig c;
  std::set<std::string> seen;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = index.find(key);
    if (it == index.end()) throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    try {
      it->second->set(c, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + " (" + key + "): " + e.what());
    }
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return from_text(ss.str());
}

void RunConfig::save(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw ConfigError("config: cannot write " + path.string());
  os << to_text();
}

}  // namespace sclt::run
