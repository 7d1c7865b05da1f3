#include "tcsplit/config.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "tcsplit/errors.hpp"

namespace tcsplit {

namespace {

constexpr std::array kRequired{"omega_c_ghz", "omega_s_ghz", "g_ghz", "lambda_ghz",
                               "omega_drive_ghz", "n_cavity", "two_j", "dt_ns",
                               "n_steps", "out"};
constexpr std::array kOptional{"method", "stride"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string at_line(int line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

double parse_double(std::string_view v, int line, std::string_view key) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw ConfigError(at_line(line, std::string(key) + " is not a number: '" + std::string(v) + "'"));
  }
  return x;
}

long long parse_int(std::string_view v, int line, std::string_view key) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(at_line(line, std::string(key) + " is not an integer: '" + std::string(v) + "'"));
  }
  return x;
}

RunMethod parse_method(std::string_view v, int line) {
  if (v == "exp") return RunMethod::Exp;
  if (v == "linear") return RunMethod::Linear;
  if (v == "dense") return RunMethod::Dense;
  if (v == "hp") return RunMethod::Hp;
  throw ConfigError(at_line(line, "unknown method '" + std::string(v) + "' (exp, linear, dense, hp)"));
}

bool known(std::string_view key) {
  for (auto k : kRequired) if (key == k) return true;
  for (auto k : kOptional) if (key == k) return true;
  return false;
}

}  // namespace

std::string_view to_string(RunMethod method) {
  switch (method) {
    case RunMethod::Exp: return "exp";
    case RunMethod::Linear: return "linear";
    case RunMethod::Dense: return "dense";
    case RunMethod::Hp: return "hp";
  }
  return "?";
}

bool is_resonant(const ModelParams& p) {
  const double scale = std::max({std::abs(p.omega_c), std::abs(p.omega_s), std::abs(p.omega_drive)});
  return scale > 0.0 && std::abs(p.omega_c + p.omega_s - p.omega_drive) <= 1e-9 * scale;
}

RunConfig parse_config(std::string_view text) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry, std::less<>> entries;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(at_line(line_no, "expected key=value"));
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!known(key)) throw ConfigError(at_line(line_no, "unknown key '" + key + "'"));
    if (entries.contains(key)) throw ConfigError(at_line(line_no, "duplicate key '" + key + "'"));
    if (value.empty()) throw ConfigError(at_line(line_no, "empty value for '" + key + "'"));
    entries.emplace(key, Entry{value, line_no});
  }

  std::string missing;
  for (auto k : kRequired) {
    if (!entries.contains(k)) missing += (missing.empty() ? "" : ", ") + std::string(k);
  }
  if (!missing.empty()) throw ConfigError("missing required keys: " + missing);

  auto num = [&](const char* key) {
    const auto& e = entries.at(key);
    return parse_double(e.value, e.line, key);
  };
  auto integer = [&](const char* key) {
    const auto& e = entries.at(key);
    return parse_int(e.value, e.line, key);
  };

  constexpr double two_pi = 2.0 * std::numbers::pi;
  RunConfig c;
  c.omega_c_ghz = num("omega_c_ghz");
  c.omega_s_ghz = num("omega_s_ghz");
  c.g_ghz = num("g_ghz");
  c.lambda_ghz = num("lambda_ghz");
  c.omega_drive_ghz = num("omega_drive_ghz");
  c.params.omega_c = two_pi * c.omega_c_ghz;
  c.params.omega_s = two_pi * c.omega_s_ghz;
  c.params.g = two_pi * c.g_ghz;
  c.params.lambda = two_pi * c.lambda_ghz;
  c.params.omega_drive = two_pi * c.omega_drive_ghz;

  const long long nc = integer("n_cavity");
  const long long tj = integer("two_j");
  if (nc < 1 || nc > 1'000'000'000) throw ConfigError(at_line(entries.at("n_cavity").line, "n_cavity must be >= 1"));
  if (tj < 0 || tj > 1'000'000'000) throw ConfigError(at_line(entries.at("two_j").line, "two_j must be >= 0"));
  c.params.n_cavity = static_cast<int>(nc);
  c.params.two_j = static_cast<int>(tj);
  if (c.params.g < 0.0) throw ConfigError(at_line(entries.at("g_ghz").line, "g_ghz must be >= 0"));
  c.params.validate();
  c.params.dimension();

  c.dt = num("dt_ns");
  if (!(c.dt > 0.0)) throw ConfigError(at_line(entries.at("dt_ns").line, "dt_ns must be > 0"));
  const long long steps = integer("n_steps");
  if (steps < 0) throw ConfigError(at_line(entries.at("n_steps").line, "n_steps must be >= 0"));
  c.n_steps = static_cast<std::size_t>(steps);
  c.out = entries.at("out").value;

  if (auto it = entries.find("method"); it != entries.end()) c.method = parse_method(it->second.value, it->second.line);
  if (auto it = entries.find("stride"); it != entries.end()) {
    const long long s = parse_int(it->second.value, it->second.line, "stride");
    if (s < 1) throw ConfigError(at_line(it->second.line, "stride must be >= 1"));
    c.stride = static_cast<std::size_t>(s);
  }

  if (is_resonant(c.params)) {
    c.notes.push_back("resonant drive: omega_c + omega_s = omega_drive");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const RunConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "omega_c_ghz=" << c.omega_c_ghz << '\n'
      << "omega_s_ghz=" << c.omega_s_ghz << '\n'
      << "g_ghz=" << c.g_ghz << '\n'
      << "lambda_ghz=" << c.lambda_ghz << '\n'
      << "omega_drive_ghz=" << c.omega_drive_ghz << '\n'
      << "n_cavity=" << c.params.n_cavity << '\n'
      << "two_j=" << c.params.two_j << '\n'
      << "dt_ns=" << c.dt << '\n'
      << "n_steps=" << c.n_steps << '\n'
      << "method=" << to_string(c.method) << '\n'
      << "stride=" << c.stride << '\n'
      << "out=" << c.out << '\n';
  return out.str();
}

}  // namespace tcsplit
