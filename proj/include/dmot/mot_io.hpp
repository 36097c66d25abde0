#pragma once

#include <string>
#include <vector>

#include "dmot/errors.hpp"

namespace dmot {

// One line of the extended MOT text format:
//   frame,id,x,y,w,h,conf,depth
// Legacy 10-field MOTChallenge lines (...,conf,-1,-1,-1) are accepted on
// read; depth is then -1 (absent). id is -1 for raw detections.
struct MotRecord {
    int frame = 1;
    int id = -1;
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
    double conf = 1.0;
    double depth = -1.0;  // [0,1], or -1 when absent

    bool has_depth() const { return depth >= 0.0; }
};

// Parse a single record. line_no is used in error messages only.
MotRecord parse_mot_line(const std::string& line, int line_no);

// Reads every non-empty line; records are sorted into canonical order.
// Throws ContractError with a line number on malformed input, IoError if
// the file cannot be opened.
std::vector<MotRecord> read_mot(const std::string& path);

// Canonical serialization: 6-decimal fixed point, absent depth written as
// "-1", records sorted by (frame, id, x, y, w, h, conf, depth).
std::string format_mot_line(const MotRecord& rec);
void write_mot(std::vector<MotRecord> records, const std::string& path);

// Canonical ordering used by write_mot; exposed for tests.
bool mot_record_less(const MotRecord& a, const MotRecord& b);

}  // namespace dmot
