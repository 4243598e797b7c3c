#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "mzk/config.hpp"
#include "mzk/errors.hpp"
#include "mzk/io.hpp"
#include "mzk/plot.hpp"
#include "mzk/runner.hpp"
#include "support/generators.hpp"

using namespace mzk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mzk_test_runner_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string error_of(const std::string& text) {
  try {
    require_experiment_blocks(parse_config_text(text, "t.cfg"));
  } catch (const ConfigurationError& e) {
    return e.what();
  }
  return "";
}

const char* kMinimalEvolve = R"(experiment = evolve
[grid]
n_x = 32
n_y = 32
period_x = 10
period_y = 10
[initial]
kind = zero
[evolve]
t_end = 0.1
)";

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("minimal evolve config takes the documented defaults") {
    const auto cfg = parse_config_text(kMinimalEvolve);
    CHECK(cfg.experiment == "evolve");
    CHECK(cfg.grid.n_x == 32);
    CHECK(cfg.evolve.t_end == 0.1);
    const EvolveConfig defaults;
    CHECK(cfg.evolve.dt_init == defaults.dt_init);
    CHECK(cfg.evolve.cfl_safety == defaults.cfl_safety);
    CHECK(cfg.evolve.dealias);
    CHECK(cfg.evolve.blowup_gradient_factor == 50.0);
    CHECK(cfg.evolve.s_monitor == 0.9);
    CHECK(cfg.seed == 1);
    CHECK(cfg.output_dir == fs::path("out"));
    CHECK(cfg.has_section("grid"));
    CHECK_FALSE(cfg.has_section("picard"));
    REQUIRE(cfg.echo.size() == 7);
    CHECK(cfg.echo.front().first == "experiment");
    CHECK(cfg.echo.back() == std::pair<std::string, std::string>{"evolve.t_end", "0.1"});
  }
  SUBCASE("lists accept fractions, comments are skipped") {
    const auto cfg = parse_config_text(R"(experiment = smoothing
# comment
; another
[grid]
n_x = 64
n_y = 64
period_x = 20
period_y = 20
[smoothing]
horizons = 1/16, 0.5, 2
)");
    CHECK(cfg.smoothing.horizons == std::vector<double>{0.0625, 0.5, 2.0});
  }
  SUBCASE("errors name the file, line and key") {
    const std::string base = "experiment = evolve\n[grid]\nn_x = 32\nn_y = 32\nperiod_x = 1\nperiod_y = 1\n";
    CHECK(error_of(base + "[evolve]\nt_end = 1\ndealais = on\n") == "t.cfg:9: unknown key 'dealais' in [evolve]");
    CHECK(error_of("experiment = evolve\n[grid]\nn_x = 100\n").find("t.cfg:3:") == 0);
    CHECK(error_of("experiment = evolve\n[grid]\nn_x = 100\n").find("n_x") != std::string::npos);
    CHECK(error_of(base + "[evolve]\nt_end = soon\n").find("t.cfg:8: 'evolve.t_end' expects a number") == 0);
    CHECK(error_of(base + "[evolve]\nt_end = 1\nt_end = 2\n").find("t.cfg:9: duplicate key") == 0);
    CHECK(error_of(base + "[evolution]\n").find("t.cfg:7: unknown section [evolution]") == 0);
    CHECK(error_of(base + "[evolve]\nt_end\n").find("t.cfg:8: expected 'key = value'") == 0);
    CHECK(error_of(base + "[evolve]\ndealias = maybe\nt_end = 1\n").find("expects a boolean") != std::string::npos);
    CHECK(error_of(base).find("requires a [evolve] block") != std::string::npos);
    CHECK(error_of("experiment = simulate\n").find("unknown experiment") != std::string::npos);
    CHECK(error_of(base + "[evolve]\ndt_init = 1e-3\n").find("requires t_end") != std::string::npos);
    CHECK(error_of(base + "[initial]\nmass_ratio = 1\nnorm_hs = 1\n[evolve]\nt_end = 1\n").find("both") !=
          std::string::npos);
  }
  SUBCASE("missing file is an I/O error") {
    CHECK_THROWS_AS(parse_config("/nonexistent/mzk.cfg"), IoError);
  }
  SUBCASE("every shipped config parses and names a known experiment") {
    int count = 0;
    for (const auto& entry : fs::directory_iterator(MZK_CONFIG_DIR)) {
      if (entry.path().extension() != ".cfg") continue;
      INFO(entry.path().string());
      RunConfig cfg;
      CHECK_NOTHROW(cfg = parse_config(entry.path()));
      CHECK_NOTHROW(require_experiment_blocks(cfg));
      ++count;
    }
    CHECK(count >= 12);
  }
}

TEST_CASE("snapshots") {
  const auto dir = scratch("snapshots");
  SUBCASE("property: bit-exact round trip") {
    gen::for_all("snapshot round trip", 10, 211, [&](gen::Gen& gg) {
      const auto g = gg.grid();
      const auto u = gg.band_limited(g, 4.0);
      const double t = gg.uniform(-10.0, 10.0);
      write_snapshot(u, t, dir / "u.mzk");
      const auto [v, tv] = read_snapshot(dir / "u.mzk");
      CHECK(v.grid() == g);
      CHECK(tv == t);
      CHECK(std::memcmp(v.physical().data(), u.physical().data(), sizeof(double) * g.size()) == 0);
      CHECK(slurp(dir / "u.mzk").size() == 4 + 8 + 24 + 8 * static_cast<std::size_t>(g.size()) + 8);
    });
  }
  SUBCASE("corruptions") {
    const auto g = make_grid(16, 16, 3.0, 3.0);
    const std::string good = encode_snapshot(gen::Gen(1).band_limited(g, 3.0), 0.5);
    auto message = [](const std::string& bytes) {
      try {
        decode_snapshot(bytes);
      } catch (const FormatError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    std::string bad_magic = good;
    bad_magic[3] = '2';
    CHECK(message(bad_magic).find("magic") != std::string::npos);
    const std::string cut = good.substr(0, good.size() - 100);
    const std::string msg = message(cut);
    CHECK(msg.find(std::to_string(good.size())) != std::string::npos);
    CHECK(msg.find(std::to_string(cut.size())) != std::string::npos);
    CHECK(!message(good.substr(0, 10)).empty());
    CHECK(message(good + "x").find("trailing") != std::string::npos);
    std::string flipped = good;
    flipped[200] ^= 0x01;
    CHECK(message(flipped).find("checksum") != std::string::npos);
    CHECK_THROWS_AS(read_snapshot(dir / "missing.mzk"), IoError);
  }
}

TEST_CASE("checksums and number formatting") {
  CHECK(fnv1a64(std::string_view("")) == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64(std::string_view("a")) == 0xaf63dc4c8601ec8cULL);
  CHECK(to_hex(0xaf63dc4c8601ec8cULL) == "af63dc4c8601ec8c");
  CHECK(to_hex(1) == "0000000000000001");
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("trajectory CSV") {
  const auto dir = scratch("csv");
  Trajectory traj;
  traj.push({0.0, 1.0, -0.5, 2.0, 3.0, 4.0, 0.0});
  traj.push({0.1, 1.0 / 3.0, -0.25, 2.5, 3.5, 4.5, 1e-3});
  write_trajectory_csv(traj, dir / "t.csv");
  const std::string text = slurp(dir / "t.csv");
  CHECK(text.substr(0, text.find('\n')) == kTrajectoryHeader);
  const auto back = read_trajectory_csv(dir / "t.csv");
  CHECK(back.times == traj.times);
  CHECK(back.mass == traj.mass);
  CHECK(back.dt_history == traj.dt_history);
  write_text(dir / "bad.csv", "t,mass\n1,2\n");
  CHECK_THROWS_AS(read_trajectory_csv(dir / "bad.csv"), FormatError);
}

TEST_CASE("runs and manifests") {
  const auto dir = scratch("runs");
  auto verify_manifest = [](const fs::path& out) {
    const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
    for (const auto& a : m["artifacts"]) {
      const fs::path p = out / a["path"].get<std::string>();
      CHECK(fs::exists(p));
      CHECK(file_checksum(p) == a["fnv1a64"].get<std::string>());
      CHECK(fs::last_write_time(p) <= fs::last_write_time(out / "manifest.json"));
    }
    CHECK(m.contains("seed"));
    CHECK(m["version"] == code_version());
    return m;
  };

  SUBCASE("evolving zero data writes a CSV of zeros") {
    auto cfg = parse_config_text(kMinimalEvolve);
    cfg.output_dir = dir / "zero";
    const auto manifest = run(cfg);
    CHECK(manifest.success);
    CHECK(manifest.outcome == "completed");
    const auto m = verify_manifest(cfg.output_dir);
    CHECK(m["config"]["evolve.t_end"] == "0.1");
    const auto traj = read_trajectory_csv(cfg.output_dir / "trajectory.csv");
    CHECK(traj.size() >= 2);
    for (std::size_t k = 0; k < traj.size(); ++k) {
      CHECK(traj.mass[k] == 0.0);
      CHECK(traj.grad_l2[k] == 0.0);
    }
  }
  SUBCASE("identical configs give byte-identical CSV") {
    auto cfg = parse_config(fs::path(MZK_CONFIG_DIR) / "picard.cfg");
    cfg.output_dir = dir / "a";
    run(cfg);
    cfg.output_dir = dir / "b";
    cfg.threads = 3;
    run(cfg);
    CHECK(slurp(dir / "a" / "picard.csv") == slurp(dir / "b" / "picard.csv"));
  }
  SUBCASE("ground state run reports its invariants") {
    auto cfg = parse_config(fs::path(MZK_CONFIG_DIR) / "groundstate.cfg");
    cfg.output_dir = dir / "gs";
    run(cfg);
    const auto m = verify_manifest(cfg.output_dir);
    std::vector<std::string> paths;
    for (const auto& a : m["artifacts"]) paths.push_back(a["path"]);
    CHECK(paths == std::vector<std::string>{"profile.mzk", "groundstate.csv"});
    CHECK(m["results"]["pohozaev_quartic_ratio"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(m["results"]["mass"].get<double>() == doctest::Approx(11.7009).epsilon(1e-4));
    const auto [q, t] = read_snapshot(cfg.output_dir / "profile.mzk");
    CHECK(q.grid().n_x() == 256);
  }
  SUBCASE("a soliton fit is not applicable") {
    auto cfg = parse_config(fs::path(MZK_CONFIG_DIR) / "fit_soliton.cfg");
    cfg.output_dir = dir / "fit";
    const auto manifest = run(cfg);
    CHECK(manifest.success);
    CHECK(manifest.outcome == "not_applicable");
    verify_manifest(cfg.output_dir);
  }
  SUBCASE("failures keep a manifest and map to exit codes") {
    auto cfg = parse_config_text(R"(experiment = groundstate
[grid]
n_x = 32
n_y = 32
period_x = 4
period_y = 4
[groundstate]
speed = 1
)");
    cfg.output_dir = dir / "fail";
    std::exception_ptr err;
    try {
      run(cfg);
    } catch (...) {
      err = std::current_exception();
    }
    REQUIRE(err);
    CHECK(exit_code_for(err) == 2);
    const auto m = nlohmann::json::parse(slurp(cfg.output_dir / "manifest.json"));
    CHECK(m["success"] == false);
    CHECK(m["error"].get<std::string>().find("box") != std::string::npos);
  }
}

TEST_CASE("exit codes and thread resolution") {
  auto code = [](auto thrower) {
    try {
      thrower();
    } catch (...) {
      return exit_code_for(std::current_exception());
    }
    return -1;
  };
  CHECK(code([] { throw ConfigurationError("x"); }) == 2);
  CHECK(code([] { throw IoError("x"); }) == 4);
  CHECK(code([] { throw FormatError("x"); }) == 4);
  CHECK(code([] { throw InstabilityError("x"); }) == 3);
  CHECK(code([] { throw ConvergenceError("x", {}); }) == 3);

  CHECK(resolve_threads(3, "5", 2) == 3);
  CHECK(resolve_threads(std::nullopt, "5", 2) == 5);
  CHECK(resolve_threads(std::nullopt, nullptr, 2) == 2);
  CHECK(resolve_threads(std::nullopt, "", 2) == 2);
  CHECK_THROWS_AS(resolve_threads(std::nullopt, "many", 2), ConfigurationError);
  CHECK_THROWS_AS(resolve_threads(0, nullptr, 2), ConfigurationError);
}

TEST_CASE("plots") {
  const std::string flat = emit_plot({{"mass", {0, 1, 2}, {5, 5, 5}}}, {"mass", "t", "M"});
  CHECK(flat.rfind("<svg", 0) == 0);
  CHECK(flat.find("</svg>") != std::string::npos);
  CHECK(flat.find("nan") == std::string::npos);
  CHECK_THROWS_AS(emit_plot({}, {}), DomainError);
  CHECK_THROWS_AS(emit_plot({{"bad", {0, 1}, {1}}}, {}), DomainError);

  const std::string rate = emit_rate_plot(0.5);
  CHECK(rate.find("id=\"fitted-rate\"") != std::string::npos);
  for (const char* r : {"7/48", "1/3", "1/2", "5/7", "5/6"}) CHECK(rate.find(r) != std::string::npos);
  CHECK(rate_axis_position(1.0 / 3.0) < rate_axis_position(0.5));
  CHECK(rate_axis_position(0.5) < rate_axis_position(5.0 / 7.0));
  const auto cx = rate.find("cx=\"", rate.find("fitted-rate"));
  REQUIRE(cx != std::string::npos);
  CHECK(std::stod(rate.substr(cx + 4)) == doctest::Approx(rate_axis_position(0.5)));
}

TEST_CASE("command line") {
  const std::string cli = MZK_CLI_PATH;
  const std::string cfg = std::string(MZK_CONFIG_DIR) + "/report.cfg";
  const auto out = scratch("cli");
  CHECK(shell(cli + " --version") == 0);
  CHECK(shell(cli + " report --config " + cfg + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(shell(cli + " evolve --config " + cfg + " --out " + out.string()) == 2);
  CHECK(shell(cli + " report --config /nonexistent.cfg") != 0);
  write_text(out / "typo.cfg", "experiment = report\n[rate]\nc_ss = 1\n");
  CHECK(shell(cli + " report --config " + (out / "typo.cfg").string()) == 2);
  CHECK(shell(cli + " report --config " + cfg + " --threads 0 --out " + out.string()) == 2);
  CHECK(shell("MZK_THREADS=x " + cli + " report --config " + cfg + " --out " + out.string()) == 2);
}
