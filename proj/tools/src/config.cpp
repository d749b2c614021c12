#include "adlab/lab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "adlab/error.hpp"

namespace adlab::lab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_real(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": '" + text + "' is not a number");
  }
  if (used != t.size() || !std::isfinite(v)) throw ConfigError(what + ": '" + text + "' is not a finite number");
  return v;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string json_scalar_text(const Json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return v.dump();
  throw ConfigError("config field '" + key + "' must be a string or a number");
}

}  // namespace

std::uint64_t parse_count(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(what + ": empty value");
  if (std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c) != 0; })) {
    try {
      return std::stoull(t);
    } catch (const std::exception&) {
      throw ConfigError(what + ": '" + text + "' is out of range");
    }
  }
  const double v = parse_real(t, what);
  if (v < 0.0 || v != std::floor(v) || v > 9.0e18) {
    throw ConfigError(what + ": '" + text + "' is not a nonnegative integer");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> parse_count_list(const std::string& text, const std::string& what) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_count(item, what));
  if (out.empty()) throw ConfigError(what + ": empty list");
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] <= out[i - 1]) throw ConfigError(what + ": values must be strictly ascending");
  }
  return out;
}

AdditiveFunction parse_function(const std::string& spec_in) {
  const std::string spec = trim(spec_in);
  if (spec == "omega") return AdditiveFunction::omega();
  if (spec.rfind("frac:", 0) == 0) {
    const auto parts = split(spec.substr(5), '/');
    if (parts.size() != 2) throw ConfigError("function '" + spec + "': expected frac:N/D");
    const auto num = parse_count(parts[0], "frac numerator");
    const auto den = parse_count(parts[1], "frac denominator");
    if (den == 0 || den > (std::uint64_t{1} << 62)) throw ConfigError("function '" + spec + "': D must be in [1, 2^62]");
    return AdditiveFunction::frac_alpha(num, den);
  }
  if (spec.rfind("table:", 0) == 0) return AdditiveFunction::load_table(spec.substr(6));
  const auto star = spec.find('*');
  if (star != std::string::npos) {
    const double c = parse_real(spec.substr(0, star), "function scale");
    if (!(c > 0.0)) throw ConfigError("function '" + spec + "': scale must be > 0");
    return AdditiveFunction::scaled(parse_function(spec.substr(star + 1)), c);
  }
  throw ConfigError("function '" + spec + "': expected omega, frac:N/D, table:PATH or C*SPEC");
}

std::vector<double> parse_deltas(const std::string& spec_in) {
  const std::string spec = trim(spec_in);
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw ConfigError("deltas '" + spec + "': expected a:b:step");
    const double a = parse_real(parts[0], "deltas start");
    const double b = parse_real(parts[1], "deltas stop");
    const double step = parse_real(parts[2], "deltas step");
    if (!(step > 0.0) || b < a) throw ConfigError("deltas '" + spec + "': need step > 0 and a <= b");
    const double n = std::floor((b - a) / step + 1e-9);
    if (n > 1e6) throw ConfigError("deltas '" + spec + "': more than 10^6 points");
    for (int i = 0; i <= static_cast<int>(n); ++i) out.push_back(a + i * step);
  } else {
    for (const auto& item : split(spec, ',')) out.push_back(parse_real(item, "deltas"));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  if (out.empty()) throw ConfigError("deltas: empty grid");
  return out;
}

void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "fn") {
    parse_function(value);
    cfg.fn = trim(value);
  } else if (key == "x") {
    cfg.x = parse_count_list(value, "x");
    if (cfg.x.front() < 16) throw ConfigError("x must be >= 16");
  } else if (key == "y") {
    cfg.y = parse_count(value, "y");
    if (*cfg.y < 3) throw ConfigError("y must be >= 3");
  } else if (key == "deltas") {
    cfg.deltas = parse_deltas(value);
  } else if (key == "psi") {
    const std::string v = trim(value);
    if (v == "closed") {
      cfg.psi = PsiSource::kClosed;
      cfg.psi_path.clear();
    } else if (v == "empirical") {
      cfg.psi = PsiSource::kEmpirical;
      cfg.psi_path.clear();
    } else {
      cfg.psi = PsiSource::kFile;
      cfg.psi_path = v;
    }
  } else if (key == "normalize") {
    const std::string v = lower(trim(value));
    if (v == "sigma") {
      cfg.normalize = Normalization::kSigma;
    } else if (v == "b") {
      cfg.normalize = Normalization::kB;
    } else {
      throw ConfigError("normalize must be sigma or B, got '" + value + "'");
    }
  } else if (key == "method") {
    const std::string v = lower(trim(value));
    if (v == "dp") {
      cfg.method = TailMethod::kDp;
    } else if (v == "mc") {
      cfg.method = TailMethod::kMc;
    } else {
      throw ConfigError("method must be dp or mc, got '" + value + "'");
    }
  } else if (key == "samples") {
    cfg.samples = parse_count(value, "samples");
    if (cfg.samples < 1000) throw ConfigError("samples must be >= 1000");
  } else if (key == "seed") {
    cfg.seed = parse_count(value, "seed");
  } else if (key == "out") {
    cfg.out = trim(value);
  } else if (key == "level") {
    const std::string v = lower(trim(value));
    if (v == "normal") {
      cfg.level = AsymLevel::kNormal;
    } else if (v == "s") {
      cfg.level = AsymLevel::kSOnly;
    } else if (v == "full") {
      cfg.level = AsymLevel::kFull;
    } else {
      throw ConfigError("level must be normal, s or full, got '" + value + "'");
    }
  } else if (key == "k") {
    const auto k = parse_count(value, "k");
    if (k < 1 || k > 24) throw ConfigError("k must be in [1, 24], got " + trim(value));
    cfg.k = static_cast<int>(k);
  } else if (key == "P") {
    cfg.l_product_P = parse_count(value, "P");
    if (cfg.l_product_P < 1000) throw ConfigError("P must be >= 1000");
  } else if (key == "c_grid") {
    cfg.c_grid = parse_count_list(value, "c_grid");
    if (cfg.c_grid.size() < 3 || cfg.c_grid.back() < 10000000) throw ConfigError("c_grid needs at least 3 points and a largest point >= 1e7");
  } else {
    throw ConfigError("unknown config field '" + key + "'");
  }
}

ExperimentConfig config_from_json(const Json& j, ExperimentConfig base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("schema_version")) throw ConfigError("config is missing schema_version");
  const auto& ver = j.at("schema_version");
  if (!ver.is_number_integer() || ver.get<int>() != kSchemaVersion) {
    throw ConfigError("unsupported schema_version " + ver.dump() + " (expected " + std::to_string(kSchemaVersion) + ")");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "schema_version") continue;
    if (value.is_array()) {
      std::string joined;
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i > 0) joined += ",";
        joined += json_scalar_text(value[i], key);
      }
      set_field(base, key, joined);
    } else {
      set_field(base, key, json_scalar_text(value, key));
    }
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Json config_to_json(const ExperimentConfig& cfg) {
  Json j{{"schema_version", kSchemaVersion}, {"fn", cfg.fn}, {"x", cfg.x}};
  j["y"] = cfg.y ? Json(*cfg.y) : Json(nullptr);
  j["deltas"] = cfg.deltas;
  switch (cfg.psi) {
    case PsiSource::kClosed:
      j["psi"] = "closed";
      break;
    case PsiSource::kEmpirical:
      j["psi"] = "empirical";
      break;
    case PsiSource::kFile:
      j["psi"] = cfg.psi_path.string();
      break;
  }
  j["normalize"] = cfg.normalize == Normalization::kSigma ? "sigma" : "B";
  j["method"] = cfg.method == TailMethod::kMc ? "mc" : "dp";
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["level"] = to_string(cfg.level);
  j["k"] = cfg.k;
  j["P"] = cfg.l_product_P;
  j["c_grid"] = cfg.c_grid;
  return j;
}

}  // namespace adlab::lab
