#include "hessmc/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hessmc/geometry/catalog.hpp"

namespace hessmc {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("config: bad number '" + item + "' in " + key);
    }
  }
  return out;
}

std::string format_number_list(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i];
  }
  return os.str();
}

double parse_number(const std::string& text, const std::string& key) {
  try {
    return std::stod(trim(text));
  } catch (const std::exception&) {
    throw UsageError("config: bad number '" + text + "' in " + key);
  }
}

long parse_long(const std::string& text, const std::string& key) {
  try {
    return std::stol(trim(text));
  } catch (const std::exception&) {
    throw UsageError("config: bad integer '" + text + "' in " + key);
  }
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "model") cfg.model = value;
  else if (key == "h") cfg.h = value;
  else if (key == "V") cfg.V = value;
  else if (key == "f") cfg.f = value;
  else if (key == "estimator") cfg.estimator = value;
  else if (key == "x0") cfg.x0 = parse_number_list(value, key);
  else if (key == "x0_ambient") cfg.x0_ambient = parse_number_list(value, key);
  else if (key == "v1") cfg.v1 = parse_number_list(value, key);
  else if (key == "v2") cfg.v2 = parse_number_list(value, key);
  else if (key == "v1_ambient") cfg.v1_ambient = parse_number_list(value, key);
  else if (key == "v2_ambient") cfg.v2_ambient = parse_number_list(value, key);
  else if (key == "t") cfg.t = parse_number(value, key);
  else if (key == "t_list") cfg.t_list = parse_number_list(value, key);
  else if (key == "alpha_list") cfg.alpha_list = parse_number_list(value, key);
  else if (key == "dt") cfg.dt = parse_number(value, key);
  else if (key == "n_paths") cfg.n_paths = parse_long(value, key);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(value, key));
  else if (key == "threads") cfg.threads = static_cast<int>(parse_long(value, key));
  else if (key == "output") cfg.output = value;
  else if (key == "format") cfg.format = value;
  else throw UsageError("config: unknown key '" + key + "'");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config: line " + std::to_string(line_no) +
                       " is not 'key = value'");
    }
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::map<std::string, std::string> config_echo(const ExperimentConfig& cfg) {
  std::map<std::string, std::string> echo;
  echo["model"] = cfg.model;
  echo["h"] = cfg.h;
  echo["V"] = cfg.V;
  echo["f"] = cfg.f;
  echo["estimator"] = cfg.estimator;
  echo["x0"] = format_number_list(cfg.x0);
  echo["x0_ambient"] = format_number_list(cfg.x0_ambient);
  echo["v1"] = format_number_list(cfg.v1);
  echo["v2"] = format_number_list(cfg.v2);
  echo["v1_ambient"] = format_number_list(cfg.v1_ambient);
  echo["v2_ambient"] = format_number_list(cfg.v2_ambient);
  {
    std::ostringstream os;
    os.precision(17);
    os << cfg.t;
    echo["t"] = os.str();
  }
  echo["t_list"] = format_number_list(cfg.t_list);
  echo["alpha_list"] = format_number_list(cfg.alpha_list);
  {
    std::ostringstream os;
    os.precision(17);
    os << cfg.dt;
    echo["dt"] = os.str();
  }
  echo["n_paths"] = std::to_string(cfg.n_paths);
  echo["seed"] = std::to_string(cfg.seed);
  echo["threads"] = std::to_string(cfg.threads);
  echo["output"] = cfg.output;
  echo["format"] = cfg.format;
  return echo;
}

ExperimentConfig config_from_echo(
    const std::map<std::string, std::string>& echo) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : echo) {
    if (value.empty() &&
        (key == "x0" || key == "x0_ambient" || key == "v1" || key == "v2" ||
         key == "v1_ambient" || key == "v2_ambient" || key == "t_list" ||
         key == "alpha_list" || key == "output")) {
      continue;
    }
    apply_config_entry(cfg, key, value);
  }
  return cfg;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return config_echo(a) == config_echo(b);
}

std::vector<std::string> estimator_ids() {
  return {"feynman_kac",     "feynman_kac_extrinsic", "gradient_pathwise",
          "gradient_bismut", "hessian_elementary",    "hessian_fk",
          "nt_scaling",      "exp_moment"};
}

void validate_config(const ExperimentConfig& cfg) {
  const auto model = make_model(cfg.model);
  make_fields(*model, cfg.h, cfg.V);
  make_test_function(cfg.f, *model);
  const auto ids = estimator_ids();
  if (std::find(ids.begin(), ids.end(), cfg.estimator) == ids.end()) {
    throw UsageError("config: unknown estimator '" + cfg.estimator + "'");
  }
  if (cfg.n_paths < 100) throw UsageError("config: n_paths must be >= 100");
  if (!(cfg.dt > 0.0)) throw UsageError("config: dt must be positive");

  const auto check_grid = [&](double t) {
    const long m = std::lround(t / cfg.dt);
    if (m < 4 || std::abs(m * cfg.dt - t) > 1e-9 * std::max(1.0, t) ||
        m % 4 != 0) {
      throw UsageError(
          "config: t/dt must be an integer divisible by 4 (t = " +
          std::to_string(t) + ", dt = " + std::to_string(cfg.dt) + ")");
    }
  };
  if (cfg.estimator == "nt_scaling") {
    if (cfg.t_list.empty()) {
      throw UsageError("config: nt_scaling needs t_list");
    }
    for (const double t : cfg.t_list) check_grid(t);
  } else {
    check_grid(cfg.t);
  }

  if (cfg.x0.empty() && cfg.x0_ambient.empty()) {
    throw UsageError("config: x0 (or x0_ambient) is required");
  }
}

}  // namespace hessmc
