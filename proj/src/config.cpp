#include "hedseg/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hedseg {

namespace {

double to_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (...) {
    throw std::invalid_argument("config: bad numeric value for " + key + ": " + value);
  }
}

uint64_t to_u64(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (v < 0 || v != static_cast<double>(static_cast<uint64_t>(v)))
    throw std::invalid_argument("config: " + key + " must be a non-negative integer");
  return static_cast<uint64_t>(v);
}

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) values.push_back(to_double("list", item));
  }
  return values;
}

void Config::set(const std::string& key, const std::string& value) {
  if (key == "sigma_color") {
    graph.sigma_color = to_double(key, value);
  } else if (key == "sigma_edge") {
    graph.sigma_edge = to_double(key, value);
  } else if (key == "eps") {
    graph.eps_discard = to_double(key, value);
  } else if (key == "canny_low") {
    graph.canny_low = to_double(key, value);
  } else if (key == "canny_high") {
    graph.canny_high = to_double(key, value);
  } else if (key == "blur_sigma") {
    graph.blur_sigma = to_double(key, value);
  } else if (key == "c") {
    c = to_double(key, value);
    c_explicit = true;
  } else if (key == "gamma") {
    gamma = to_double(key, value);
    gamma_explicit = true;
  } else if (key == "init") {
    if (value == "singleton") {
      init = InitMode::singleton;
      both_inits = false;
    } else if (value == "one") {
      init = InitMode::one_coalition;
      both_inits = false;
    } else if (value == "both") {
      init = InitMode::singleton;
      both_inits = true;
    } else {
      throw std::invalid_argument("config: init must be singleton, one, or both");
    }
  } else if (key == "lmax") {
    l_max = static_cast<size_t>(to_u64(key, value));
  } else if (key == "tau") {
    tau = to_double(key, value);
  } else if (key == "max_sweeps") {
    max_sweeps = static_cast<uint32_t>(to_u64(key, value));
  } else if (key == "cohesive_single_min") {
    regimes.cohesive_single_min = to_double(key, value);
  } else if (key == "cohesive_gap_max") {
    regimes.cohesive_gap_max = to_double(key, value);
  } else if (key == "intrinsic_union_max") {
    regimes.intrinsic_union_max = to_double(key, value);
  } else if (key == "c_grid") {
    c_grid = parse_double_list(value);
  } else if (key == "gamma_grid") {
    gamma_grid = parse_double_list(value);
  } else if (key == "dataset_root") {
    dataset_root = value;
  } else if (key == "out") {
    out_dir = value;
  } else if (key == "jobs") {
    jobs = static_cast<int>(to_u64(key, value));
  } else {
    throw std::invalid_argument("config: unknown key: " + key);
  }
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: " + path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void Config::validate() const {
  graph.validate();
  if (c_explicit && gamma_explicit)
    throw std::invalid_argument("config: c and gamma are mutually exclusive");
  if (gamma && !(*gamma >= 0.0 && *gamma <= 1.0))
    throw std::invalid_argument("config: gamma must lie in [0,1]");
  if (!(c > 0.0)) throw std::invalid_argument("config: c must be positive");
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("config: tau must lie in [0,1]");
  if (max_sweeps == 0) throw std::invalid_argument("config: max_sweeps must be positive");
}

EvalParams Config::eval_params() const {
  EvalParams p;
  p.graph = graph;
  p.c = c;
  p.gamma_override = gamma;
  p.init = init;
  p.l_max = l_max;
  p.max_sweeps = max_sweeps;
  return p;
}

SweepPlan Config::sweep_plan() const {
  SweepPlan plan;
  plan.gamma_values = gamma_grid;
  plan.c_values = c_grid.empty() ? default_c_grid() : c_grid;
  if (both_inits)
    plan.inits = {InitMode::singleton, InitMode::one_coalition};
  else
    plan.inits = {init};
  return plan;
}

int Config::effective_jobs() const {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace hedseg
