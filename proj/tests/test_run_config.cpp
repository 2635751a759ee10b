#include <filesystem>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "winfree/error.hpp"
#include "winfree/run_config.hpp"

using namespace winfree;

namespace {

Json base() {
  return Json::parse(R"({
    "schema": 1, "name": "t", "dim": 2, "n": 3, "kappa": 1.5,
    "profile": {"kind": "builtin-I1"},
    "frequencies": {"kind": "identical-rotation", "rate": 0.2, "axis": [0, 0, 1]},
    "initial": {"kind": "random-in-cap", "gamma": 0.4, "seed": 9},
    "dt": 0.001, "t_end": 2.0, "gamma": 0.4,
    "checks": ["prop4.1", "thm5.2"]
  })");
}

std::string config_error(const Json& j) {
  try {
    parse_run_config(j);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    return e.what();
  }
  ADD_FAILURE() << "accepted " << j.dump();
  return {};
}

}  // namespace

TEST(RunConfig, RoundTripIsIdentityOnCanonicalForm) {
  const auto cfg = parse_run_config(base());
  EXPECT_EQ(cfg.n, 3);
  EXPECT_EQ(cfg.initial.seed, 9u);
  const Json canon = to_json(cfg);
  EXPECT_EQ(to_json(parse_run_config(canon)), canon);

  Json table = base();
  table["profile"] = Json::parse(R"({"kind": "table", "beta": 1.5, "table": [[0, 1], [1.5, 0]]})");
  table["frequencies"] = Json::parse(R"({"kind": "structured", "nus": [0.1, 0.2, -0.3], "axes": [[0,1,0],[0,0,1],[0,1,0]]})");
  table["initial"] = Json::parse(R"({"kind": "explicit", "points": [[1,0,0],[0,1,0],[0,0,1]]})");
  table["checks"] = Json::array();
  table.erase("gamma");
  const Json c2 = to_json(parse_run_config(table));
  EXPECT_EQ(to_json(parse_run_config(c2)), c2);

  Json expl = base();
  expl["frequencies"] = Json::parse(
      R"({"kind": "explicit", "matrices": [[[0,-1,0],[1,0,0],[0,0,0]], [[0,0,0],[0,0,0],[0,0,0]], [[0,0,2],[0,0,0],[-2,0,0]]]})");
  const Json c3 = to_json(parse_run_config(expl));
  EXPECT_EQ(to_json(parse_run_config(c3)), c3);
}

TEST(RunConfig, ErrorsNameTheField) {
  Json j = base();
  j["n"] = 0;
  EXPECT_NE(config_error(j).find("'n'"), std::string::npos);
  j = base();
  j["dt"] = -1.0;
  EXPECT_NE(config_error(j).find("'dt'"), std::string::npos);
  j = base();
  j["t_end"] = 0;
  EXPECT_NE(config_error(j).find("'t_end'"), std::string::npos);
  j = base();
  j["bogus"] = 1;
  EXPECT_NE(config_error(j).find("'bogus'"), std::string::npos);
  j = base();
  j["schema"] = 2;
  EXPECT_NE(config_error(j).find("'schema'"), std::string::npos);
  j = base();
  j["checks"] = {"thm9.9"};
  EXPECT_NE(config_error(j).find("thm9.9"), std::string::npos);
  j = base();
  j.erase("gamma");
  EXPECT_NE(config_error(j).find("'gamma'"), std::string::npos);
  j = base();
  j["frequencies"] = Json::parse(R"({"kind": "structured", "nus": [0.1]})");
  EXPECT_NE(config_error(j).find("frequencies.nus"), std::string::npos);
  j = base();
  j["frequencies"] = Json::parse(R"({"kind": "explicit", "matrices": [[[0,1,0],[1,0,0],[0,0,0]],
      [[0,0,0],[0,0,0],[0,0,0]], [[0,0,0],[0,0,0],[0,0,0]]]})");
  EXPECT_NE(config_error(j).find("skew"), std::string::npos);
  j = base();
  j["initial"] = Json::parse(R"({"kind": "explicit", "points": [[1,0,0],[0,1,0],[0,0,2]]})");
  EXPECT_NE(config_error(j).find("initial.points[2]"), std::string::npos);
  j = base();
  j["profile"] = Json::parse(R"({"kind": "builtin-I1", "beta": 0.7})");
  EXPECT_NE(config_error(j).find("profile.beta"), std::string::npos);
  j = base();
  j["kappa"] = "big";
  EXPECT_NE(config_error(j).find("'kappa'"), std::string::npos);
}

TEST(RunConfig, Builders) {
  const auto cfg = parse_run_config(base());
  const auto params = make_params(cfg);
  EXPECT_EQ(params.omegas.size(), 3u);
  EXPECT_TRUE(params.identical_frequencies());
  EXPECT_NEAR(params.max_op_norm(), 0.2, 1e-15);
  const auto x0 = make_initial(cfg);
  EXPECT_EQ(x0.size(), 3);
  for (double phi : polar_angles(x0)) EXPECT_LE(phi, 0.4);
  EXPECT_EQ(make_initial(cfg).points(), x0.points());
}

TEST(SweepConfig, ParsesAndValidatesGrid) {
  Json s = {{"schema", 1}, {"base", base()}, {"grid", {{"kappa", {0.5, 1.0}}, {"initial.seed", {1, 2, 3}}}}, {"jobs", 2}};
  const auto sc = parse_sweep_config(s);
  ASSERT_EQ(sc.grid.size(), 2u);
  EXPECT_EQ(sc.jobs, 2);
  const Json canon = to_json(sc);
  EXPECT_EQ(to_json(parse_sweep_config(canon)), canon);

  s["grid"] = {{"kappa_typo", {1.0}}};
  EXPECT_THROW(parse_sweep_config(s), Error);
  s["grid"] = {{"n", {0}}};
  EXPECT_THROW(parse_sweep_config(s), Error);
  s["grid"] = Json::object();
  EXPECT_THROW(parse_sweep_config(s), Error);
}

TEST(SweepConfig, SetPath) {
  Json j = base();
  set_path(j, "initial.seed", 44);
  EXPECT_EQ(j["initial"]["seed"], 44);
  EXPECT_THROW(set_path(j, "initial.nope", 1), Error);
}

TEST(SweepConfig, CellSeeds) {
  EXPECT_EQ(cell_seed(77, 0), 77u);
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < 1000; ++i) seen.insert(cell_seed(77, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(cell_seed(77, 5), cell_seed(77, 5));
  EXPECT_NE(cell_seed(77, 5), cell_seed(78, 5));
}

TEST(LoadJson, ParseErrorsReportPosition) {
  const auto path = std::filesystem::temp_directory_path() / "winfree_bad.json";
  std::ofstream(path) << "{\n  \"schema\": 1,\n  \"n\": ,\n}";
  try {
    load_json(path.string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_json("/nonexistent/file.json"), Error);
}
