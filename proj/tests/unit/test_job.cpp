#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include <swathcube/error.hpp>
#include <swathcube/job.hpp>

#include "unit/fixture.hpp"

namespace {

using namespace swathcube;
using testing_support::Flight;
using testing_support::small_plan;

bool mentions(const ConfigError& e, const std::string& text) {
  for (const auto& p : e.problems())
    if (p.find(text) != std::string::npos) return true;
  return false;
}

TEST(Config, ParsesEveryKey) {
  const auto c = parse_config(
      "# comment\n"
      "cubes = list.txt\n"
      "poses = /abs/poses.csv\n"
      "calib = cal.hdr\n"
      "illumination = sun.csv\n"
      "wavelengths = 450, 550.5,650\n"
      "gsd = 0.04\n"
      "ground = 95.5\n"
      "ground-agl = 35\n"
      "range = 1:3\n"
      "mode = reflectance\n"
      "output = out/mosaic\n"
      "jobs = 3\n"
      "no-data = -9999\n"
      "fov = 47.5\n"
      "mask = true\n",
      "/base");
  EXPECT_EQ(c.cubes, std::filesystem::path("/base/list.txt"));
  EXPECT_EQ(c.poses, std::filesystem::path("/abs/poses.csv"));
  EXPECT_EQ(c.wavelengths, (std::vector<double>{450, 550.5, 650}));
  EXPECT_EQ(c.gsd, 0.04);
  EXPECT_EQ(c.ground, 95.5);
  EXPECT_EQ(c.ground_agl, 35.0);
  EXPECT_EQ(c.range_first, 1u);
  EXPECT_EQ(c.range_last, 3u);
  EXPECT_EQ(c.mode, ProcessingMode::reflectance);
  EXPECT_EQ(c.jobs, 3u);
  EXPECT_EQ(c.no_data, -9999.0f);
  EXPECT_EQ(c.fov, 47.5);
  EXPECT_TRUE(c.mask);
  EXPECT_EQ(c.output, std::filesystem::path("/base/out/mosaic"));
}

TEST(Config, AllWavelengthsAndAutoGround) {
  JobConfig c;
  apply_setting(c, "wavelengths", "all");
  EXPECT_TRUE(c.all_wavelengths);
  apply_setting(c, "ground", "12");
  apply_setting(c, "ground", "auto");
  EXPECT_FALSE(c.ground.has_value());
}

TEST(Config, ErrorsAreAggregatedWithRows) {
  try {
    parse_config("gsd = abc\nbogus = 1\nrange = 3\nno equals sign\n", {}, "job.cfg");
    FAIL();
  } catch (const ConfigError& e) {
    ASSERT_EQ(e.problems().size(), 4u);
    EXPECT_TRUE(mentions(e, "job.cfg:1:"));
    EXPECT_TRUE(mentions(e, "job.cfg:2: unknown setting 'bogus'"));
    EXPECT_TRUE(mentions(e, "job.cfg:3:"));
    EXPECT_TRUE(mentions(e, "job.cfg:4: expected key = value"));
  }
}

TEST(Validate, ListsEveryProblemAtOnce) {
  JobConfig c;
  c.mode = ProcessingMode::reflectance;
  c.range_first = 5;
  c.range_last = 3;
  try {
    validate_config(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_TRUE(mentions(e, "no cube list"));
    EXPECT_TRUE(mentions(e, "no pose log"));
    EXPECT_TRUE(mentions(e, "calibration"));
    EXPECT_TRUE(mentions(e, "illumination"));
    EXPECT_TRUE(mentions(e, "gsd"));
    EXPECT_TRUE(mentions(e, "wavelengths"));
    EXPECT_TRUE(mentions(e, "5:3 is reversed"));
    EXPECT_TRUE(mentions(e, "output"));
    EXPECT_GE(e.problems().size(), 8u);
  }
}

JobConfig good_config(const Flight& f) {
  JobConfig c;
  c.cubes = f.files.cube_list;
  c.poses = f.files.poses;
  c.wavelengths = {550};
  c.gsd = 0.25;
  c.mode = ProcessingMode::raw;
  c.output = f.dir / "job_out";
  c.jobs = 1;
  return c;
}

TEST(Validate, MissingFilesAndRange) {
  Flight f(small_plan());
  auto c = good_config(f);
  c.poses = f.dir / "missing.csv";
  c.range_first = 0;
  c.range_last = 2;
  try {
    validate_config(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_TRUE(mentions(e, "missing.csv not found"));
    EXPECT_TRUE(mentions(e, "only 2 cubes"));
  }
}

TEST(Validate, OutOfRangeWavelengthWarns) {
  Flight f(small_plan());
  auto c = good_config(f);
  c.wavelengths = {2000};
  const auto v = validate_config(c);
  ASSERT_EQ(v.warnings.size(), 1u);
  EXPECT_NE(v.warnings[0].find("outside the sensor range"), std::string::npos);
  EXPECT_EQ(v.cubes.size(), 2u);
  EXPECT_GE(v.config.jobs, 1u);
}

TEST(RunExport, ReportsStagesAndValidates) {
  Flight f(small_plan());
  auto c = good_config(f);
  c.wavelengths = {650, 450};
  std::ostringstream report;
  const auto r = run_export(c, report);
  EXPECT_EQ(r.bands, (std::vector<std::size_t>{2, 0}));
  EXPECT_EQ(r.result.bands, 2u);
  EXPECT_NEAR(r.ground_height, 95.0, 0.5);
  const std::string text = report.str();
  for (const char* stage : {"stage=load wall_ms=", "stage=mesh wall_ms=", "stage=render wall_ms=",
                            "stage=write wall_ms=", "stage=total wall_ms="})
    EXPECT_NE(text.find(stage), std::string::npos) << stage;
  EXPECT_TRUE(std::filesystem::exists(f.dir / "job_out.hdr"));
}

TEST(RunExport, AllBandsAndConfigFile) {
  Flight f(small_plan());
  {
    std::ofstream cfg(f.dir / "job.cfg");
    cfg << "cubes = cubes.txt\nposes = poses.csv\nwavelengths = all\ngsd = 0.3\nmode = relative\n"
           "output = all_bands\nground = 95\nmask = yes\n";
  }
  const auto c = read_config(f.dir / "job.cfg");
  std::ostringstream report;
  const auto r = run_export(c, report);
  EXPECT_EQ(r.result.bands, 3u);
  EXPECT_EQ(r.ground_height, 95.0);
  EXPECT_TRUE(std::filesystem::exists(f.dir / "all_bands_mask.hdr"));
}

TEST(CubeList, RelativeToListFile) {
  testing_support::TempDir dir("list");
  {
    std::ofstream l(dir / "l.txt");
    l << "# flight\n\na.hdr\n  sub/b.hdr  \n/abs/c.hdr\n";
  }
  const auto cubes = read_cube_list(dir / "l.txt");
  ASSERT_EQ(cubes.size(), 3u);
  EXPECT_EQ(cubes[0], dir.path() / "a.hdr");
  EXPECT_EQ(cubes[1], dir.path() / "sub/b.hdr");
  EXPECT_EQ(cubes[2], std::filesystem::path("/abs/c.hdr"));
  EXPECT_THROW(read_cube_list(dir / "none.txt"), IoError);
}

}  // namespace
