#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "comjac/dataset.hpp"
#include "comjac/errors.hpp"
#include "test_util.hpp"

using namespace comjac;
using namespace comjac::testutil;

namespace {

Dataset sample_dataset() {
  PrecisionScope scope(200);
  Dataset ds;
  ds.meta = {"0.1.0-test", 200, 42, "theta=0.5 (single)", ""};
  RngStream rng(99);
  for (int i = 0; i < 3; ++i) {
    RootRecord r;
    r.theta = Real(i + 1) / 100;
    r.p = Vec3{sqrt(Real(2 + i)), -sqrt(Real(3 + i)), Real(rng.uniform(-5, 5))};
    r.q = Vec3{Real(rng.uniform(-5, 5)), sqrt(Real(7)) / 3, Real(rng.uniform(-5, 5))};
    r.w = Vec3{Real(0), Real(0), Real(1)};
    r.det_value = Real::pow2(-163) * Real(i - 1);
    r.bracket_width = Real::pow2(-120);
    r.cos_scatter = i == 1 ? Real::nan() : sqrt(Real(3)) / 2 * Real(i == 2 ? -1 : 1);
    r.angle_ok = i == 0;
    r.seed = 1234567 + static_cast<std::uint64_t>(i);
    r.iterations_used = 17 * (i + 1);
    ds.rows.push_back(std::move(r));
  }
  return ds;
}

void check_equal(const Dataset& a, const Dataset& b) {
  CHECK(a.meta.tool_version == b.meta.tool_version);
  CHECK(a.meta.precision_bits == b.meta.precision_bits);
  CHECK(a.meta.seed == b.meta.seed);
  CHECK(a.meta.grid == b.meta.grid);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const RootRecord& x = a.rows[i];
    const RootRecord& y = b.rows[i];
    CHECK(x.theta == y.theta);
    CHECK(x.p == y.p);
    CHECK(x.q == y.q);
    CHECK(x.w == y.w);
    CHECK(x.det_value == y.det_value);
    CHECK(x.bracket_width == y.bracket_width);
    CHECK(x.cos_scatter.is_nan() == y.cos_scatter.is_nan());
    if (!x.cos_scatter.is_nan()) CHECK(x.cos_scatter == y.cos_scatter);
    CHECK(x.angle_ok == y.angle_ok);
    CHECK(x.seed == y.seed);
    CHECK(x.iterations_used == y.iterations_used);
  }
}

}  // namespace

TEST_CASE("csv round-trip preserves every numeric field exactly") {
  Dataset ds = sample_dataset();
  std::string text = to_csv(ds);
  check_equal(ds, from_csv(text));
}

TEST_CASE("json round-trip preserves every numeric field exactly") {
  Dataset ds = sample_dataset();
  check_equal(ds, from_json_string(to_json_string(ds)));
}

TEST_CASE("the csv column order is pinned") {
  CHECK(std::string(kCsvColumns) ==
        "theta,p1,p2,p3,q1,q2,q3,w1,w2,w3,det,bracket_width,cos_scatter,angle_ok,seed,"
        "iterations");
  Dataset ds = sample_dataset();
  std::string text = to_csv(ds);
  // first non-comment line is the column header
  std::size_t pos = 0;
  while (text[pos] == '#') pos = text.find('\n', pos) + 1;
  CHECK(text.substr(pos, std::string(kCsvColumns).size()) == kCsvColumns);
}

TEST_CASE("atomic write leaves no temp file and the content round-trips") {
  Dataset ds = sample_dataset();
  std::string dir = "/tmp/comjac_test_ds";
  std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
  std::string path = dir + "/roots.csv";
  write_dataset(ds, path, FileFormat::csv);
  std::ifstream check_tmp(path + ".tmp");
  CHECK_FALSE(check_tmp.good());
  check_equal(ds, read_dataset(path));

  write_dataset(ds, dir + "/roots.json", FileFormat::json);
  check_equal(ds, read_dataset(dir + "/roots.json"));

  CHECK_THROWS_AS(write_dataset(ds, dir + "/missing/roots.csv", FileFormat::csv), IoError);
  CHECK_THROWS_AS(read_dataset(dir + "/nonexistent.csv"), IoError);
}

TEST_CASE("plot data export: pole, equator, row count, empty dataset") {
  PrecisionScope scope(200);
  Dataset ds = sample_dataset();
  auto rows = export_plotdata(ds, WhichVector::w);
  REQUIRE(rows.size() == ds.rows.size());
  for (const auto& r : rows) {
    CHECK(r.polar.is_zero());  // w = (0, 0, 1) sits at the pole
  }

  ds.rows[0].w = Vec3{Real(1), Real(0), Real(0)};
  rows = export_plotdata(ds, WhichVector::w);
  CHECK(rows[0].azimuth.is_zero());
  CHECK(rel_gap(rows[0].polar, Real::pi() / 2) <= tol_bits(24));

  std::string text = plotdata_csv(ds, WhichVector::p);
  CHECK(text.find("azimuth,polar,theta") != std::string::npos);

  Dataset empty;
  empty.meta = ds.meta;
  CHECK_THROWS_AS(export_plotdata(empty, WhichVector::p), EmptyDataset);
}

TEST_CASE("the reproducible timestamp honors SOURCE_DATE_EPOCH") {
  setenv("SOURCE_DATE_EPOCH", "0", 1);
  CHECK(reproducible_timestamp() == "1970-01-01T00:00:00Z");
  setenv("SOURCE_DATE_EPOCH", "86400", 1);
  CHECK(reproducible_timestamp() == "1970-01-02T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
  CHECK(reproducible_timestamp().empty());
}
