#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "trackkit/anchors.hpp"
#include "trackkit/sim.hpp"
#include "trackkit/tracker.hpp"

namespace trackkit {

/// Input-file failure carrying the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

/// One detection per line: frame class score xmin ymin xmax ymax e0..eD-1,
/// whitespace-separated, after a `dim D` header line. `#` lines are
/// comments. An empty file holds zero records.
struct DetectionRecord {
  std::int64_t frame = 0;
  int class_id = 0;
  double score = 0.0;
  std::array<double, 4> box{};  // xmin ymin xmax ymax
  std::vector<double> embedding;
};

void write_detection_records(std::ostream& out,
                             const std::vector<DetectionRecord>& records);
std::vector<DetectionRecord> read_detection_records(std::istream& in);

/// MOT Challenge interchange line:
/// frame,id,bb_left,bb_top,bb_width,bb_height,conf,x,y,z.
/// frame and id are 1-based positive integers in the file; x,y,z are -1
/// for 2-D tracking.
struct MotChallengeRecord {
  std::int64_t frame = 1;
  std::int64_t id = 1;
  double bb_left = 0.0;
  double bb_top = 0.0;
  double bb_width = 0.0;
  double bb_height = 0.0;
  double conf = 1.0;
  double x = -1.0;
  double y = -1.0;
  double z = -1.0;
};

void write_mot_records(std::ostream& out,
                       const std::vector<MotChallengeRecord>& records);
std::vector<MotChallengeRecord> read_mot_records(std::istream& in);

/// Corner-form view of a MOT record; this is the only point where the
/// (left, top, width, height) file convention is converted.
Box to_box(const MotChallengeRecord& record);

/// Builds a file record from internal 0-based frame and track id.
MotChallengeRecord make_mot_record(std::int64_t frame_index, std::int64_t track_id,
                                   const Box& box, double conf);

/// Flat key-value run configuration. Unknown keys are rejected. The
/// detector operating point (near-zero threshold) is kept separate from
/// the tracker's score threshold.
struct RunConfig {
  TrackerConfig tracker;
  AnchorConfig anchors;
  SimulationConfig sim;
  double detector_score_threshold = 1e-3;
};

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

}  // namespace trackkit
