#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "chfs/config.hpp"
#include "chfs/csv.hpp"
#include "chfs/errors.hpp"
#include "chfs/grid.hpp"
#include "chfs/initial_conditions.hpp"
#include "chfs/snapshot.hpp"
#include "chfs/testing.hpp"

using namespace chfs;
namespace fs = std::filesystem;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string minimal_cfg() { return "dim = 2\nN = 32\nepsilon = 0.5\ntau = 0.1\nt_final = 1\n"; }

fs::path temp_file(const char* tag) {
  return fs::temp_directory_path() / (std::string("chfs-test-") + tag + "-" +
                                      std::to_string(::getpid()) + ".bin");
}

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const config_error& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST_CASE("config defaults") {
  SimConfig cfg = parse_config_text(minimal_cfg());
  CHECK(cfg.dim == 2);
  CHECK(cfg.n == 32);
  CHECK(cfg.epsilon == 0.5);
  CHECK(cfg.tau == 0.1);
  CHECK(cfg.t_final == 1.0);
  CHECK(cfg.length == Catch::Approx(kTwoPi).epsilon(1e-15));
  CHECK(!cfg.kappa_fixed);
  CHECK(cfg.kappa == 0.0);
  CHECK(cfg.safety == 1.1);
  CHECK(cfg.ic.kind == InitialCondition::Kind::spinodal);
  CHECK(cfg.ic.value == 0.05);
  CHECK(!cfg.ic.seed_explicit);
  CHECK(cfg.seed == 0);
  CHECK(cfg.diag_every == 1);
  CHECK(cfg.snapshot_every == 0);
  CHECK(!cfg.dealias);
  CHECK(cfg.zero_mean);
  CHECK(cfg.out_dir == ".");
  CHECK(step_count(cfg) == 10);
}

TEST_CASE("config grammar") {
  SECTION("comments, whitespace and every key") {
    SimConfig cfg = parse_config_text(
        "# full configuration\n"
        "dim = 3\n"
        "N = 8\n"
        "L = 1.5\n"
        "epsilon = 0.25  # interface width\n"
        "tau = 0.5\n"
        "t_final = 2\n"
        "kappa_mode = fixed\n"
        "kappa = 2\n"
        "safety = 1.25\n"
        "ic = single_mode(3, 0.1)\n"
        "seed = 9\n"
        "diag_every = 4\n"
        "snapshot_every = 2\n"
        "dealias = true\n"
        "zero_mean = false\n"
        "out_dir = runs/a\n");
    CHECK(cfg.dim == 3);
    CHECK(cfg.length == 1.5);
    CHECK(cfg.kappa_fixed);
    CHECK(cfg.kappa == 2.0);
    CHECK(cfg.safety == 1.25);
    CHECK(cfg.ic.kind == InitialCondition::Kind::single_mode);
    CHECK(cfg.ic.mode == 3);
    CHECK(cfg.ic.value == 0.1);
    CHECK(cfg.seed == 9);
    CHECK(cfg.dealias);
    CHECK(!cfg.zero_mean);
    CHECK(cfg.out_dir == "runs/a");
  }

  SECTION("initial-condition forms") {
    auto with_ic = [](const std::string& ic) {
      return parse_config_text(minimal_cfg() + "ic = " + ic + "\n").ic;
    };
    InitialCondition c = with_ic("constant(0.5)");
    CHECK(c.kind == InitialCondition::Kind::constant);
    CHECK(c.value == 0.5);
    InitialCondition t = with_ic("two_mode");
    CHECK(t.kind == InitialCondition::Kind::two_mode);
    InitialCondition s = with_ic("spinodal(0.1)");
    CHECK(s.kind == InitialCondition::Kind::spinodal);
    CHECK(s.value == 0.1);
    CHECK(!s.seed_explicit);
    InitialCondition s2 = with_ic("spinodal(0.05, 42)");
    CHECK(s2.seed == 42);
    CHECK(s2.seed_explicit);
  }

  SECTION("named constraint errors") {
    CHECK(error_of("dim = 2\nN = 7\nepsilon = 1\ntau = 1\nt_final = 1\n")
              .find("N must be even") != std::string::npos);
    CHECK(error_of("dim = 5\nN = 8\nepsilon = 1\ntau = 1\nt_final = 1\n")
              .find("dim must be 1, 2 or 3") != std::string::npos);
    CHECK(error_of(minimal_cfg() + "kappa_mode = sometimes\n").find("kappa_mode") !=
          std::string::npos);
    CHECK(error_of(minimal_cfg() + "ic = spinodal(0.3)\n").find("(0, 0.2]") !=
          std::string::npos);
    CHECK(error_of(minimal_cfg() + "ic = wavelet(2)\n").find("unknown form") !=
          std::string::npos);
  }

  SECTION("structural errors carry line numbers") {
    CHECK(error_of("bogus = 1\n").find(":1: unknown key 'bogus'") != std::string::npos);
    CHECK(error_of("dim = 1\ndim = 2\n").find(":2: duplicate key 'dim'") != std::string::npos);
    CHECK(error_of("dim\n").find(":1:") != std::string::npos);
    CHECK(error_of("").find("missing required key 'dim'") != std::string::npos);
    CHECK(error_of("dim = 1\nN = 8\nepsilon = 1\ntau = 0.3\nt_final = 1\n")
              .find("integer multiple") != std::string::npos);
  }

  SECTION("file loading") {
    fs::path p = temp_file("cfg");
    std::ofstream(p) << minimal_cfg();
    SimConfig cfg = parse_config(p.string());
    CHECK(cfg.n == 32);
    fs::remove(p);
    CHECK_THROWS_AS(parse_config(p.string()), config_error);
  }

  SECTION("fingerprint is stable and complete") {
    SimConfig a = parse_config_text(minimal_cfg());
    SimConfig b = parse_config_text(minimal_cfg());
    CHECK(config_fingerprint(a) == config_fingerprint(b));
    SimConfig c = parse_config_text(minimal_cfg() + "seed = 5\n");
    CHECK(config_fingerprint(a) != config_fingerprint(c));
  }
}

TEST_CASE("initial-condition catalog") {
  Grid g = make_grid(2, 16, kTwoPi);

  SECTION("constant keeps its mass even under zero_mean") {
    GridFunction u = make_initial_condition(g, constant_ic(1.0), true, 0);
    for (double v : u.values) CHECK(v == 1.0);
  }

  SECTION("single mode is a pure cosine") {
    GridFunction u = make_initial_condition(g, single_mode_ic(2, 0.3), true, 0);
    for (std::size_t i = 0; i < u.values.size(); ++i)
      CHECK(std::abs(u.values[i] - 0.3 * std::cos(2.0 * g.unravel(i)[0] * g.h)) <= 1e-14);
    CHECK_THROWS_AS(make_initial_condition(g, single_mode_ic(8, 0.3), true, 0), config_error);
    CHECK_THROWS_AS(make_initial_condition(g, single_mode_ic(0, 0.3), true, 0), config_error);
  }

  SECTION("two-mode field") {
    GridFunction u = make_initial_condition(g, two_mode_ic(), true, 0);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      std::array<int, 3> b = g.unravel(i);
      double x = b[0] * g.h, y = b[1] * g.h;
      CHECK(std::abs(u.values[i] - 0.1 * std::cos(x) - 0.05 * std::cos(2.0 * x + y)) <= 1e-14);
    }
  }

  SECTION("spinodal golden values, seed 42, 2-D N=16") {
    GridFunction raw = make_initial_condition(g, spinodal_ic(0.05, 42), false, 0);
    CHECK(raw.values[0] == 0.024156487877182331);
    CHECK(raw.values[1] == -0.034008960712307988);
    CHECK(raw.values[255] == -0.0082811152424886909);

    GridFunction sub = make_initial_condition(g, spinodal_ic(0.05, 42), true, 0);
    CHECK(sub.values[0] == 0.022486958315532896);
    CHECK(sub.values[1] == -0.035678490273957419);
    CHECK(sub.values[17] == -0.0021196637467250901);
    CHECK(sub.values[255] == -0.009950644804138124);

    // explicit seed wins over the run seed; absent seed falls back to it
    GridFunction alt = make_initial_condition(g, spinodal_ic(0.05, 42), true, 999);
    CHECK(alt.values == sub.values);
    GridFunction fallback = make_initial_condition(g, spinodal_ic(0.05), true, 42);
    CHECK(fallback.values == sub.values);
  }

  SECTION("spinodal golden values, seed 7, 1-D N=4") {
    Grid g1 = make_grid(1, 4, kTwoPi);
    GridFunction raw = make_initial_condition(g1, spinodal_ic(0.05, 7), false, 0);
    CHECK(raw.values[0] == -0.011017025160872851);
    CHECK(raw.values[1] == -0.048321170547184392);
    CHECK(raw.values[2] == 0.040076068060688343);
    CHECK(raw.values[3] == 0.0082930293028078087);
  }

  SECTION("amplitude band") {
    CHECK_THROWS_AS(make_initial_condition(g, spinodal_ic(0.25), true, 0), config_error);
    CHECK_THROWS_AS(make_initial_condition(g, spinodal_ic(0.0), true, 0), config_error);
  }

  SECTION("raw field agrees with a from-scratch draw at every node") {
    // Independent restatement of the counter hash (SplitMix64 finalizer of
    // seed + golden-ratio increments), kept deliberately separate from rng.hpp.
    auto draw = [](std::uint64_t seed, std::uint64_t counter) {
      std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      z = z ^ (z >> 31);
      double u = static_cast<double>(z >> 11) * 0x1.0p-53;
      return 2.0 * u - 1.0;
    };
    GridFunction raw = make_initial_condition(g, spinodal_ic(0.05, 42), false, 0);
    for (std::size_t i = 0; i < raw.values.size(); ++i)
      REQUIRE(raw.values[i] == 0.05 * draw(42, i));
  }
}

TEST_CASE("diagnostics CSV") {
  std::vector<DiagnosticsRecord> recs(3);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    recs[i].step = static_cast<long>(100000 * i);
    recs[i].t = 1e-4 * i + 1.0 / 3.0;
    recs[i].mass = -2.7182818284590452e-11 * i;
    recs[i].energy = 3.1415926535897931 * (3.0 - i);
    recs[i].h1_seminorm = std::sqrt(2.0) + i;
    recs[i].h2_seminorm = 1e300 / (i + 1);
    recs[i].linf = 0.97;
    recs[i].kappa = 6.05;
    recs[i].retries = static_cast<int>(i);
  }

  SECTION("schema header") {
    CHECK(diagnostics_csv_header() ==
          std::string("step,t,mass,energy,h1_seminorm,h2_seminorm,linf,kappa,retries"));
    std::string text = format_diagnostics_csv(recs);
    CHECK(text.rfind("step,t,mass,energy,h1_seminorm,h2_seminorm,linf,kappa,retries\n", 0) == 0);
  }

  SECTION("decimal round trip is exact") {
    std::vector<DiagnosticsRecord> back = parse_diagnostics_csv(format_diagnostics_csv(recs));
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
      CHECK(back[i].step == recs[i].step);
      CHECK(back[i].t == recs[i].t);
      CHECK(back[i].mass == recs[i].mass);
      CHECK(back[i].energy == recs[i].energy);
      CHECK(back[i].h1_seminorm == recs[i].h1_seminorm);
      CHECK(back[i].h2_seminorm == recs[i].h2_seminorm);
      CHECK(back[i].linf == recs[i].linf);
      CHECK(back[i].kappa == recs[i].kappa);
      CHECK(back[i].retries == recs[i].retries);
    }
  }

  SECTION("file round trip") {
    fs::path p = temp_file("csv");
    write_diagnostics_csv(recs, p.string());
    std::vector<DiagnosticsRecord> back = read_diagnostics_csv(p.string());
    REQUIRE(back.size() == recs.size());
    CHECK(back[2].energy == recs[2].energy);
    fs::remove(p);
  }

  SECTION("malformed input is rejected") {
    std::string header = diagnostics_csv_header();
    CHECK_THROWS_WITH(parse_diagnostics_csv("step,t\n1,2\n"),
                      Catch::Matchers::ContainsSubstring("bad header"));
    CHECK_THROWS_WITH(parse_diagnostics_csv(header + "\n1,2,3\n"),
                      Catch::Matchers::ContainsSubstring("expected 9 fields on line 2"));
    CHECK_THROWS_WITH(parse_diagnostics_csv(header + "\n1,2,3,4,5,6,7,8,oops\n"),
                      Catch::Matchers::ContainsSubstring("bad numeric field 'oops'"));
  }
}

TEST_CASE("snapshot format") {
  Grid g = make_grid(2, 16, 1.75);
  GridFunction f = testing::random_field(g, 99);
  fs::path p = temp_file("snap");

  SECTION("round trip is bit-exact") {
    write_snapshot(f, p.string());
    GridFunction back = read_snapshot(p.string());
    CHECK(back.grid == f.grid);
    CHECK(back.values == f.values);
    fs::remove(p);
  }

  SECTION("header layout: magic, dim byte, little-endian axes, box edge") {
    write_snapshot(f, p.string());
    CHECK(fs::file_size(p) == 22 + 8 * f.values.size());
    std::ifstream in(p, std::ios::binary);
    unsigned char head[22];
    in.read(reinterpret_cast<char*>(head), 22);
    CHECK(std::string(head, head + 5) == "CHFS1");
    CHECK(head[5] == 2);
    CHECK(head[6] == 16);  // first axis count, LE
    CHECK(head[7] == 0);
    CHECK(head[10] == 16);  // second axis count
    // L = 1.75 = 0x3FFC000000000000, stored little-endian
    CHECK(head[14] == 0x00);
    CHECK(head[20] == 0xFC);
    CHECK(head[21] == 0x3F);
    fs::remove(p);
  }

  SECTION("a known value round trips through the byte order") {
    Grid g1 = make_grid(1, 4, 2.0);
    GridFunction one = make_grid_function(g1, 1.0);
    write_snapshot(one, p.string());
    std::ifstream in(p, std::ios::binary);
    in.seekg(5 + 1 + 4 + 8);  // first payload value
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    CHECK(b[0] == 0x00);
    CHECK(b[6] == 0xF0);
    CHECK(b[7] == 0x3F);  // IEEE-754 double 1.0, LE
    fs::remove(p);
  }

  SECTION("corrupt inputs are rejected with their failure named") {
    std::ofstream(p, std::ios::binary) << "XHFS1 not a snapshot";
    CHECK_THROWS_WITH(read_snapshot(p.string()), Catch::Matchers::ContainsSubstring("magic"));

    {
      std::ofstream out(p, std::ios::binary);
      out << "CHFS1";
      unsigned char d = 2;
      out.write(reinterpret_cast<const char*>(&d), 1);
    }
    CHECK_THROWS_WITH(read_snapshot(p.string()), Catch::Matchers::ContainsSubstring("truncated"));

    {
      std::ofstream out(p, std::ios::binary);
      out << "CHFS1";
      unsigned char d = 9;  // dim out of range
      out.write(reinterpret_cast<const char*>(&d), 1);
    }
    CHECK_THROWS_WITH(read_snapshot(p.string()), Catch::Matchers::ContainsSubstring("dimension"));
    fs::remove(p);
    CHECK_THROWS_WITH(read_snapshot(p.string()), Catch::Matchers::ContainsSubstring("open"));
  }

  SECTION("trailing bytes are rejected") {
    write_snapshot(f, p.string());
    std::ofstream(p, std::ios::binary | std::ios::app) << "x";
    CHECK_THROWS_AS(read_snapshot(p.string()), std::runtime_error);
    fs::remove(p);
  }
}
