#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "comjac/real.hpp"
#include "comjac/zerohunt.hpp"

namespace comjac {

enum class FileFormat { csv, json };

/// Header metadata carried by every dataset file. `generated` is filled from
/// SOURCE_DATE_EPOCH when that variable is set and left empty otherwise, so
/// identical runs produce byte-identical files.
struct DatasetMeta {
  std::string tool_version;
  Precision precision_bits = kDefaultPrecision;
  std::uint64_t seed = 0;
  std::string grid;
  std::string generated;
};

struct Dataset {
  DatasetMeta meta;
  std::vector<RootRecord> rows;
};

/// ISO-8601 UTC stamp from SOURCE_DATE_EPOCH, or "" when unset.
std::string reproducible_timestamp();

/// Fixed column order:
/// theta,p1,p2,p3,q1,q2,q3,w1,w2,w3,det,bracket_width,cos_scatter,angle_ok,seed,iterations
extern const char* const kCsvColumns;

std::string to_csv(const Dataset& ds);
Dataset from_csv(std::string_view text);

std::string to_json_string(const Dataset& ds);
Dataset from_json_string(std::string_view text);

/// Write-temp-then-rename. Throws IoError with path context.
void atomic_write(const std::string& path, std::string_view content);

void write_dataset(const Dataset& ds, const std::string& path, FileFormat format);
/// Reads either format (sniffed from the first non-blank character).
Dataset read_dataset(const std::string& path);

enum class WhichVector { p, q, w };

/// Angular coordinates of one record's chosen vector: azimuth = atan2(y, x)
/// in (-pi, pi], polar measured from the +z axis in [0, pi], both radians.
struct AngularRow {
  Real azimuth, polar, theta;
};

/// Throws EmptyDataset when there are no rows.
std::vector<AngularRow> export_plotdata(const Dataset& ds, WhichVector which);

/// CSV with a header comment documenting the angular convention.
std::string plotdata_csv(const Dataset& ds, WhichVector which);

}  // namespace comjac
