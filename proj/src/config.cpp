#include "rholes/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rholes {

namespace {

std::string trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto a = s.find_first_not_of(ws);
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(ws);
  return std::string(s.substr(a, b - a + 1));
}

std::size_t to_size(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || v.front() == '-') throw std::invalid_argument(key + ": expected a count, got '" + v + "'");
  return static_cast<std::size_t>(x);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw std::invalid_argument(key + ": expected a number, got '" + v + "'");
  return x;
}

}  // namespace

SubsampleMode parse_subsample_mode(std::string_view s) {
  if (s == "none") return SubsampleMode::kNone;
  if (s == "random") return SubsampleMode::kRandom;
  if (s == "maxmin") return SubsampleMode::kMaxmin;
  throw std::invalid_argument("subsample mode must be none, random or maxmin");
}

std::string to_string(SubsampleMode mode) {
  switch (mode) {
    case SubsampleMode::kRandom: return "random";
    case SubsampleMode::kMaxmin: return "maxmin";
    default: return "none";
  }
}

void RunConfig::validate() const {
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) throw std::invalid_argument("top_fraction must lie in (0, 1]");
  if (nu < 2) throw std::invalid_argument("nu must be at least 2");
  if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be nonnegative");
  if (subsample.mode != SubsampleMode::kNone && subsample.size < 2)
    throw std::invalid_argument("subsample size must be at least 2");
  if (threads < 0) throw std::invalid_argument("threads must be nonnegative");
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    out[key] = value;
  }
  return out;
}

void apply_config(const std::map<std::string, std::string>& values, RunConfig& cfg) {
  for (const auto& [key, v] : values) {
    if (key == "data") cfg.data = v;
    else if (key == "delimiter") {
      if (v.size() != 1) throw std::invalid_argument("delimiter must be a single character");
      cfg.delimiter = v.front();
    } else if (key == "subsample") cfg.subsample.mode = parse_subsample_mode(v);
    else if (key == "subsample_size") cfg.subsample.size = to_size(key, v);
    else if (key == "seed") cfg.seed = to_size(key, v);
    else if (key == "t_max") cfg.t_max = to_double(key, v);
    else if (key == "top_fraction") cfg.top_fraction = to_double(key, v);
    else if (key == "nu") cfg.nu = to_size(key, v);
    else if (key == "max_per_cycle") cfg.max_per_cycle = to_size(key, v);
    else if (key == "out") cfg.out_dir = v;
    else if (key == "threads") cfg.threads = static_cast<int>(to_size(key, v));
    else if (key == "matrix_cap") cfg.matrix_cap = to_size(key, v);
    else if (key == "max_simplices") cfg.max_simplices = to_size(key, v);
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig cfg;
  apply_config(parse_config_text(buf.str()), cfg);
  return cfg;
}

}  // namespace rholes
