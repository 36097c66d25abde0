#include "dmot/mot_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

namespace dmot {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// from_chars keeps parsing locale-independent (decimal point only).
double parse_double(const std::string& raw, int line_no, const char* what) {
    std::string s = strip(raw);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw ContractError("line " + std::to_string(line_no) + ": bad " + what + " value '" + raw + "'");
    return v;
}

int parse_int(const std::string& raw, int line_no, const char* what) {
    std::string s = strip(raw);
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ContractError("line " + std::to_string(line_no) + ": bad " + what + " value '" + raw + "'");
    return v;
}

}  // namespace

MotRecord parse_mot_line(const std::string& line, int line_no) {
    auto fields = split_fields(line);
    if (fields.size() != 8 && fields.size() != 10)
        throw ContractError("line " + std::to_string(line_no) + ": expected 8 fields (or 10-field legacy), got " +
                            std::to_string(fields.size()));

    MotRecord rec;
    rec.frame = parse_int(fields[0], line_no, "frame");
    rec.id = parse_int(fields[1], line_no, "id");
    rec.x = parse_double(fields[2], line_no, "x");
    rec.y = parse_double(fields[3], line_no, "y");
    rec.w = parse_double(fields[4], line_no, "w");
    rec.h = parse_double(fields[5], line_no, "h");
    rec.conf = parse_double(fields[6], line_no, "conf");

    if (fields.size() == 10) {
        // Legacy MOTChallenge world-coordinate columns; no depth available.
        for (int i = 7; i < 10; ++i) parse_double(fields[i], line_no, "legacy");
        rec.depth = -1.0;
    } else {
        rec.depth = parse_double(fields[7], line_no, "depth");
        if (rec.depth < 0.0) rec.depth = -1.0;
    }

    if (rec.frame < 1)
        throw ContractError("line " + std::to_string(line_no) + ": frame must be >= 1");
    if (rec.w <= 0.0 || rec.h <= 0.0)
        throw ContractError("line " + std::to_string(line_no) + ": non-positive box size");
    if (rec.depth > 1.0)
        throw ContractError("line " + std::to_string(line_no) + ": depth outside [0,1]");
    return rec;
}

std::vector<MotRecord> read_mot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    std::vector<MotRecord> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        out.push_back(parse_mot_line(line, line_no));
    }
    std::sort(out.begin(), out.end(), mot_record_less);
    return out;
}

bool mot_record_less(const MotRecord& a, const MotRecord& b) {
    auto key = [](const MotRecord& r) {
        return std::make_tuple(r.frame, r.id, r.x, r.y, r.w, r.h, r.conf, r.depth);
    };
    return key(a) < key(b);
}

std::string format_mot_line(const MotRecord& rec) {
    char buf[192];
    if (rec.has_depth()) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", rec.frame, rec.id, rec.x,
                      rec.y, rec.w, rec.h, rec.conf, rec.depth);
    } else {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f,-1", rec.frame, rec.id, rec.x,
                      rec.y, rec.w, rec.h, rec.conf);
    }
    return buf;
}

void write_mot(std::vector<MotRecord> records, const std::string& path) {
    std::sort(records.begin(), records.end(), mot_record_less);
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    for (const auto& rec : records) out << format_mot_line(rec) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace dmot
