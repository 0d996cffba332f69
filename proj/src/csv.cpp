#include "strata/csv.hpp"

#include <fstream>
#include <sstream>

namespace strata {

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

int parse_binary(const std::string& field, const char* name, std::size_t line_no) {
    if (field == "0") return 0;
    if (field == "1") return 1;
    throw ParseError(std::string(name) + " must be 0 or 1, got '" + field + "'", line_no);
}

}  // namespace

std::vector<Record> read_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw EmptyInput("empty input");
    ++line_no;
    if (strip_cr(line) != "x,z,y")
        throw ParseError("expected header 'x,z,y', got '" + strip_cr(line) + "'", line_no);

    std::vector<Record> records;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;

        const auto first = line.find(',');
        const auto second = first == std::string::npos ? std::string::npos
                                                       : line.find(',', first + 1);
        if (first == std::string::npos || second == std::string::npos ||
            line.find(',', second + 1) != std::string::npos)
            throw ParseError("expected exactly 3 comma-separated fields", line_no);

        Record r;
        r.x = line.substr(0, first);
        if (r.x.empty()) throw ParseError("empty x label", line_no);
        r.z = parse_binary(line.substr(first + 1, second - first - 1), "z", line_no);
        r.y = parse_binary(line.substr(second + 1), "y", line_no);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<Record> read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    return read_csv(in);
}

void write_csv(std::ostream& out, std::span<const Record> records) {
    out << "x,z,y\n";
    for (const auto& r : records) out << r.x << ',' << r.z << ',' << r.y << '\n';
}

void write_csv_file(const std::string& path, std::span<const Record> records) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-identical output everywhere
    if (!out) throw ParseError("cannot open '" + path + "' for writing", 0);
    write_csv(out, records);
}

}  // namespace strata
