#include "pcapp/errors.hpp"
#include "pcapp/harness.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace pcapp::harness {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.size() - start : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

double to_double(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": '" + text + "' is not a number");
}

long long to_integer(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": '" + text + "' is not an integer");
}

std::vector<double> to_doubles(const std::string& text, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(item, key));
  return out;
}

bool to_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key + ": '" + text + "' is not a boolean");
}

// "<kind> k=5 s=10 eps_rel=1e-10 alpha=1 order=magnitude"
MethodEntry parse_method(const std::string& label, const std::string& value) {
  std::istringstream words(value);
  std::string kind;
  words >> kind;
  if (kind.empty()) throw ConfigError("method." + label + ": missing method kind");
  MethodEntry m;
  m.label = label;
  m.kind = parse_method_kind(kind);
  const std::string key = "method." + label;
  for (std::string word; words >> word;) {
    const auto eq = word.find('=');
    if (eq == std::string::npos) throw ConfigError(key + ": expected name=value, got '" + word + "'");
    const std::string name = word.substr(0, eq);
    const std::string arg = word.substr(eq + 1);
    if (name == "k") {
      m.k = static_cast<int>(to_integer(arg, key + ".k"));
    } else if (name == "s") {
      m.s = TruncationRule::parse(arg);
    } else if (name == "eps_rel") {
      m.eps_rel = to_double(arg, key + ".eps_rel");
    } else if (name == "alpha") {
      m.alpha = to_double(arg, key + ".alpha");
    } else if (name == "order") {
      try {
        m.ordering = parse_eigen_ordering(arg);
      } catch (const InvalidInput& e) {
        throw ConfigError(key + ": " + e.what());
      }
    } else {
      throw ConfigError(key + ": unknown parameter '" + name + "'");
    }
  }
  return m;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    entries.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }

  ExperimentConfig config;
  config.name = "custom";
  config.sample_sizes = {500};
  config.aspect_ratios = standard_ratio_grid();
  for (const auto& [key, value] : entries) {
    if (key == "preset") config = preset(value);
  }

  std::vector<MethodEntry> methods;
  for (const auto& [key, value] : entries) {
    if (key == "preset") continue;
    if (key == "name") {
      config.name = value;
    } else if (key == "description") {
      config.description = value;
    } else if (key == "model.signal_variances") {
      config.model.signal_variances = to_doubles(value, key);
    } else if (key == "model.background_variances") {
      config.model.background_variances = to_doubles(value, key);
    } else if (key == "model.noise_variance") {
      config.model.noise_variance = to_double(value, key);
    } else if (key == "model.overlap_pairs") {
      config.model.overlap_pairs.clear();
      for (const auto& item : split(value, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2) throw ConfigError(key + ": expected signal:background pairs");
        config.model.overlap_pairs.emplace_back(static_cast<int>(to_integer(parts[0], key)),
                                                static_cast<int>(to_integer(parts[1], key)));
      }
    } else if (key == "model.distribution") {
      try {
        config.model.factor_distribution = parse_factor_distribution(value);
      } catch (const InvalidSpec& e) {
        throw ConfigError(key + ": " + e.what());
      }
    } else if (key == "model.rotate_seed") {
      if (value == "none") {
        config.model.rotate_seed.reset();
      } else {
        config.model.rotate_seed = static_cast<std::uint64_t>(to_integer(value, key));
      }
    } else if (key == "sweep.n") {
      config.sample_sizes.clear();
      for (const auto& item : split(value, ',')) {
        config.sample_sizes.push_back(static_cast<int>(to_integer(item, key)));
      }
    } else if (key == "sweep.aspect_ratios") {
      config.aspect_ratios = to_doubles(value, key);
    } else if (key == "sweep.signal_to_background") {
      config.signal_to_background = to_doubles(value, key);
    } else if (key == "trials") {
      config.trials = static_cast<int>(to_integer(value, key));
    } else if (key == "base_seed") {
      config.base_seed = static_cast<std::uint64_t>(to_integer(value, key));
    } else if (key == "norm") {
      try {
        config.norm = parse_subspace_norm(value);
      } catch (const InvalidInput& e) {
        throw ConfigError(key + ": " + e.what());
      }
    } else if (key == "scale_factor") {
      config.scale_factor = to_double(value, key);
    } else if (key == "overlay") {
      config.overlay = parse_theory_overlay(value);
    } else if (key == "record_timing") {
      config.record_timing = to_bool(value, key);
    } else if (key.rfind("method.", 0) == 0 && key.size() > 7) {
      methods.push_back(parse_method(key.substr(7), value));
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  if (!methods.empty()) config.methods = std::move(methods);
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  return parse_config(in);
}

}  // namespace pcapp::harness
