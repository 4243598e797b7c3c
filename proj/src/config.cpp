#include "mzk/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mzk/errors.hpp"
#include "mzk/grid.hpp"

namespace mzk {

bool RunConfig::has_section(const std::string& name) const {
  return std::find(sections_present.begin(), sections_present.end(), name) !=
         sections_present.end();
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Context {
  const std::string& origin;
  int line;
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigurationError(origin + ":" + std::to_string(line) + ": " + what);
  }
};

template <class T>
T parse_number(const std::string& text, const Context& ctx, const std::string& key) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty())
    ctx.fail("'" + key + "' expects a number, got '" + text + "'");
  return value;
}

bool parse_bool(const std::string& text, const Context& ctx, const std::string& key) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "on" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "off" || t == "no" || t == "0") return false;
  ctx.fail("'" + key + "' expects a boolean, got '" + text + "'");
}

template <class T>
std::vector<T> parse_list(const std::string& text, const Context& ctx, const std::string& key) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(trim(item), ctx, key));
  if (out.empty()) ctx.fail("'" + key + "' expects a non-empty list");
  return out;
}

double parse_real(const std::string& text, const Context& ctx, const std::string& key) {
  // Allow simple fractions such as 1/16 in lists of horizons.
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const double num = parse_number<double>(trim(text.substr(0, slash)), ctx, key);
    const double den = parse_number<double>(trim(text.substr(slash + 1)), ctx, key);
    if (den == 0.0) ctx.fail("'" + key + "' divides by zero");
    return num / den;
  }
  return parse_number<double>(text, ctx, key);
}

std::vector<double> parse_real_list(const std::string& text, const Context& ctx,
                                    const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(trim(item), ctx, key));
  if (out.empty()) ctx.fail("'" + key + "' expects a non-empty list");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const Context&)>;
using Schema = std::map<std::string, std::map<std::string, Setter>>;

#define MZK_REAL(field) [](RunConfig& c, const std::string& v, const Context& x) { c.field = parse_real(v, x, #field); }
#define MZK_INT(field) [](RunConfig& c, const std::string& v, const Context& x) { c.field = parse_number<int>(v, x, #field); }
#define MZK_BOOL(field) [](RunConfig& c, const std::string& v, const Context& x) { c.field = parse_bool(v, x, #field); }
#define MZK_TEXT(field) [](RunConfig& c, const std::string& v, const Context&) { c.field = v; }
#define MZK_REALS(field) [](RunConfig& c, const std::string& v, const Context& x) { c.field = parse_real_list(v, x, #field); }

const Schema& schema() {
  static const Schema s{
      {"",
       {{"experiment", MZK_TEXT(experiment)},
        {"output_dir", [](RunConfig& c, const std::string& v, const Context&) { c.output_dir = v; }},
        {"seed", [](RunConfig& c, const std::string& v,
                    const Context& x) { c.seed = parse_number<std::uint64_t>(v, x, "seed"); }},
        {"threads", MZK_INT(threads)}}},
      {"grid",
       {{"n_x", MZK_INT(grid.n_x)},
        {"n_y", MZK_INT(grid.n_y)},
        {"period_x", MZK_REAL(grid.period_x)},
        {"period_y", MZK_REAL(grid.period_y)}}},
      {"initial",
       {{"kind", MZK_TEXT(initial.kind)},
        {"speed", MZK_REAL(initial.speed)},
        {"amplitude_factor", MZK_REAL(initial.amplitude_factor)},
        {"amplitude", MZK_REAL(initial.amplitude)},
        {"sigma_x", MZK_REAL(initial.sigma_x)},
        {"sigma_y", MZK_REAL(initial.sigma_y)},
        {"band", MZK_REAL(initial.band)},
        {"mass_ratio", MZK_REAL(initial.mass_ratio)},
        {"norm_hs", MZK_REAL(initial.norm_hs)},
        {"norm_s", MZK_REAL(initial.norm_s)}}},
      {"evolve",
       {{"t_end", MZK_REAL(evolve.t_end)},
        {"dt_init", MZK_REAL(evolve.dt_init)},
        {"dt_min", MZK_REAL(evolve.dt_min)},
        {"cfl_safety", MZK_REAL(evolve.cfl_safety)},
        {"cfl_constant", MZK_REAL(evolve.cfl_constant)},
        {"dealias", MZK_BOOL(evolve.dealias)},
        {"sample_every", MZK_INT(evolve.sample_every)},
        {"blowup_gradient_factor", MZK_REAL(evolve.blowup_gradient_factor)},
        {"s_monitor", MZK_REAL(evolve.s_monitor)},
        {"coupling", MZK_REAL(evolve.coupling)},
        {"snapshot_every", MZK_INT(evolve.snapshot_every)}}},
      {"groundstate",
       {{"speed", MZK_REAL(groundstate.speed)},
        {"tol", MZK_REAL(groundstate.tol)},
        {"max_iter", MZK_INT(groundstate.max_iter)}}},
      {"picard",
       {{"T", MZK_REAL(picard.T)},
        {"n_iter", MZK_INT(picard.n_iter)},
        {"n_time_samples", MZK_INT(picard.n_time_samples)},
        {"s", MZK_REAL(picard.s)}}},
      {"envelope",
       {{"levels", [](RunConfig& c, const std::string& v,
                      const Context& x) { c.envelope.levels = parse_list<int>(v, x, "levels"); }},
        {"horizons", MZK_REALS(envelope.horizons)},
        {"n_time_samples", MZK_INT(envelope.n_time_samples)}}},
      {"smoothing",
       {{"s", MZK_REAL(smoothing.s)},
        {"ensemble_size", MZK_INT(smoothing.ensemble_size)},
        {"horizons", MZK_REALS(smoothing.horizons)},
        {"n_time_samples", MZK_INT(smoothing.n_time_samples)},
        {"band", MZK_REAL(smoothing.band)}}},
      {"probe",
       {{"s", MZK_REAL(probe.s)},
        {"horizons", MZK_REALS(probe.horizons)},
        {"n_time_samples", MZK_INT(probe.n_time_samples)}}},
      {"fit",
       {{"series", MZK_TEXT(fit.series)},
        {"t_a", MZK_REAL(fit.t_a)},
        {"t_b", MZK_REAL(fit.t_b)}}},
      {"rate",
       {{"c_s", MZK_REAL(rate.c_s)},
        {"norms", MZK_REALS(rate.norms)},
        {"variant", MZK_TEXT(rate.variant)}}},
  };
  return s;
}

#undef MZK_REAL
#undef MZK_INT
#undef MZK_BOOL
#undef MZK_TEXT
#undef MZK_REALS

// Semantic checks that can point at the offending line.
void validate_value(const RunConfig& c, const std::string& section, const std::string& key,
                    const Context& ctx) {
  const std::string name = section.empty() ? key : section + "." + key;
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) ctx.fail("'" + name + "' " + what);
  };
  if (section == "grid") {
    if (key == "n_x") require(c.grid.n_x >= 16 && is_power_of_two(c.grid.n_x), "must be a power of two >= 16");
    if (key == "n_y") require(c.grid.n_y >= 16 && is_power_of_two(c.grid.n_y), "must be a power of two >= 16");
    if (key == "period_x") require(c.grid.period_x > 0.0, "must be > 0");
    if (key == "period_y") require(c.grid.period_y > 0.0, "must be > 0");
  } else if (section.empty()) {
    if (key == "experiment")
      require(std::find(kExperiments.begin(), kExperiments.end(), c.experiment) != kExperiments.end(),
              "names an unknown experiment '" + c.experiment + "'");
    if (key == "threads") require(c.threads >= 1, "must be >= 1");
  } else if (section == "initial" && key == "kind") {
    const auto& k = c.initial.kind;
    require(k == "zero" || k == "soliton" || k == "gaussian" || k == "random",
            "must be one of zero, soliton, gaussian, random");
  } else if (section == "fit" && key == "series") {
    require(c.fit.series == "grad_l2" || c.fit.series == "hs_norm", "must be grad_l2 or hs_norm");
  } else if (section == "rate" && key == "variant") {
    require(c.rate.variant == "ball_free" || c.rate.variant == "ball_scaled",
            "must be ball_free or ball_scaled");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::string section;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const Context ctx{origin, line_no};
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']') ctx.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty() || !schema().contains(section))
        ctx.fail("unknown section [" + section + "]");
      if (cfg.has_section(section)) ctx.fail("duplicate section [" + section + "]");
      cfg.sections_present.push_back(section);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) ctx.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) ctx.fail("missing key before '='");
    if (value.empty()) ctx.fail("missing value for '" + key + "'");

    const auto& keys = schema().at(section);
    const auto it = keys.find(key);
    if (it == keys.end())
      ctx.fail("unknown key '" + key + "'" + (section.empty() ? "" : " in [" + section + "]"));
    const std::string full = section.empty() ? key : section + "." + key;
    if (seen.contains(full))
      ctx.fail("duplicate key '" + full + "' (first set on line " + std::to_string(seen[full]) + ")");
    seen[full] = line_no;

    it->second(cfg, value, ctx);
    validate_value(cfg, section, key, ctx);
    cfg.echo.emplace_back(full, value);
  }
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.string());
}

void require_experiment_blocks(const RunConfig& cfg) {
  const std::string& e = cfg.experiment;
  if (e.empty()) throw ConfigurationError("no experiment selected");
  if (std::find(kExperiments.begin(), kExperiments.end(), e) == kExperiments.end())
    throw ConfigurationError("unknown experiment '" + e + "'");

  auto need = [&](const std::string& block) {
    if (!cfg.has_section(block))
      throw ConfigurationError("experiment '" + e + "' requires a [" + block + "] block");
  };
  if (e != "report") need("grid");
  if (e == "evolve" || e == "fit") {
    need("evolve");
    const bool has_t_end = std::any_of(cfg.echo.begin(), cfg.echo.end(),
                                       [](const auto& kv) { return kv.first == "evolve.t_end"; });
    if (!has_t_end) throw ConfigurationError("[evolve] requires t_end");
    cfg.evolve.validate();
  }
  if (e == "picard" || e == "envelope" || e == "smoothing" || e == "probe") need(e);
  if (cfg.initial.mass_ratio > 0.0 && cfg.initial.norm_hs > 0.0)
    throw ConfigurationError("[initial] sets both mass_ratio and norm_hs");
}

}  // namespace mzk
