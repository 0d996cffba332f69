#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "strata/table.hpp"

namespace strata {

/// Reads the `x,z,y` record format: required header line, one record per
/// row, z and y as 0/1. Labels may not contain commas (rejected at parse).
/// Throws ParseError with the offending 1-based line number.
std::vector<Record> read_csv(std::istream& in);
std::vector<Record> read_csv_file(const std::string& path);

void write_csv(std::ostream& out, std::span<const Record> records);
void write_csv_file(const std::string& path, std::span<const Record> records);

}  // namespace strata
