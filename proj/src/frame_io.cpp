#include "dustradar/frame_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "dustradar/error.hpp"

namespace dustradar {
namespace {

// Splits a line on any run of the given separators.
class Tokens {
 public:
  Tokens(std::string_view line, std::size_t line_no, std::string_view seps)
      : line_no_(line_no) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && seps.find(line[i]) != std::string_view::npos) ++i;
      const std::size_t start = i;
      while (i < line.size() && seps.find(line[i]) == std::string_view::npos) ++i;
      if (i > start) tokens_.push_back(line.substr(start, i - start));
    }
  }

  // Splits on single commas, keeping empty fields.
  static Tokens csv(std::string_view line, std::size_t line_no) {
    Tokens t(line_no);
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      t.tokens_.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return t;
  }

  bool done() const { return pos_ == tokens_.size(); }
  std::size_t size() const { return tokens_.size(); }

  std::string_view word(const char* what) {
    if (done()) fail(std::string("missing ") + what);
    return tokens_[pos_++];
  }

  double number(const char* what) {
    const std::string_view t = word(what);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      fail(std::string("bad number for ") + what + ": '" + std::string(t) + "'");
    }
    return value;
  }

  template <typename Int>
  Int integer(const char* what) {
    const std::string_view t = word(what);
    Int value{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      fail(std::string("bad integer for ") + what + ": '" + std::string(t) + "'");
    }
    return value;
  }

  void expect_end() {
    if (!done()) fail("unexpected trailing field '" + std::string(tokens_[pos_]) + "'");
  }

  [[noreturn]] void fail(const std::string& detail) const {
    throw ParseError(ErrorKind::kParseError, line_no_, detail);
  }

 private:
  explicit Tokens(std::size_t line_no) : line_no_(line_no) {}

  std::vector<std::string_view> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_no_;
};

// Next non-blank, non-comment line. Returns false at end of input.
bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

constexpr std::string_view kSpaces = " \t";

constexpr std::string_view kDetectionsHeader =
    "seq,timestamp,cluster_id,label,rule,size,mean_velocity,abs_mean_velocity,"
    "mode_rcs,centroid_x,centroid_y,centroid_z,extent_x,extent_y,extent_z,range";

constexpr std::string_view kReportHeader =
    "seq,timestamp,input_count,kept_count,rejected_rcs,rejected_angle,"
    "rejected_velocity,rejected_velocity_static,clusters,pedestrians,latency_ms";

void expect_header(std::istream& in, std::size_t& line_no,
                   std::string_view header) {
  std::string line;
  if (!next_content_line(in, line, line_no)) {
    throw ParseError(ErrorKind::kParseError, line_no + 1, "missing table header");
  }
  if (line != header) {
    throw ParseError(ErrorKind::kParseError, line_no,
                     "unexpected table header, want '" + std::string(header) + "'");
  }
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error(ErrorKind::kSinkError, "number formatting failed");
  return std::string(buf, ptr);
}

void check_sink(const std::ostream& out, std::string_view what) {
  if (!out) throw Error(ErrorKind::kSinkError, "write failed: " + std::string(what));
}

// ---------------------------------------------------------------- frames

FrameReader::FrameReader(std::istream& in, ReadOptions options)
    : in_(in), options_(options) {}

std::optional<Frame> FrameReader::next() {
  std::string line;
  if (!next_content_line(in_, line, line_)) return std::nullopt;
  Tokens t(line, line_, kSpaces);

  Frame f;
  f.seq = t.integer<std::uint64_t>("seq");
  f.timestamp = t.number("timestamp");
  const auto n = t.integer<std::size_t>("point count");
  if (t.size() != 3 + 7 * n) {
    t.fail("point count " + std::to_string(n) + " needs " +
           std::to_string(7 * n) + " values, found " + std::to_string(t.size() - 3));
  }
  f.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    RadarPoint& p = f.points[i];
    p.x = t.number("x");
    p.y = t.number("y");
    p.z = t.number("z");
    p.rcs = t.number("rcs");
    p.v = t.number("v");
    p.azimuth = deg_to_rad(t.number("azimuth"));
    p.elevation = deg_to_rad(t.number("elevation"));
    if (options_.angle_tolerance) {
      if (auto bad = validate_point(p, *options_.angle_tolerance)) {
        t.fail("point " + std::to_string(i) + ": " + bad->describe());
      }
    }
  }

  if (!std::isfinite(f.timestamp)) t.fail("timestamp must be finite");
  if (last_seq_ && f.seq <= *last_seq_) {
    throw ParseError(ErrorKind::kNonMonotonicSeq, line_,
                     "seq " + std::to_string(f.seq) + " after " +
                         std::to_string(*last_seq_));
  }
  if (last_seq_ && f.timestamp < last_timestamp_) {
    throw ParseError(ErrorKind::kNonMonotonicSeq, line_,
                     "timestamp decreases at seq " + std::to_string(f.seq));
  }
  last_seq_ = f.seq;
  last_timestamp_ = f.timestamp;
  return f;
}

std::vector<Frame> read_frames(std::istream& in, ReadOptions options) {
  FrameReader reader(in, options);
  std::vector<Frame> frames;
  while (auto f = reader.next()) frames.push_back(std::move(*f));
  return frames;
}

void write_frame(std::ostream& out, const Frame& frame) {
  std::string line = std::to_string(frame.seq) + ' ' +
                     format_number(frame.timestamp) + ' ' +
                     std::to_string(frame.points.size());
  for (const RadarPoint& p : frame.points) {
    for (double v : {p.x, p.y, p.z, p.rcs, p.v, rad_to_deg(p.azimuth),
                     rad_to_deg(p.elevation)}) {
      line += ' ';
      line += format_number(v);
    }
  }
  line += '\n';
  out << line;
  check_sink(out, "frame");
}

void write_frames(std::ostream& out, std::span<const Frame> frames) {
  for (const Frame& f : frames) write_frame(out, f);
}

// ---------------------------------------------------------------- truth

std::vector<GroundTruth> read_truth(std::istream& in) {
  std::vector<GroundTruth> out;
  std::string line;
  std::size_t line_no = 0;
  while (next_content_line(in, line, line_no)) {
    Tokens t(line, line_no, kSpaces);
    GroundTruth g;
    g.seq = t.integer<std::uint64_t>("seq");
    g.dust_level = t.integer<int>("dust level");
    const auto n = t.integer<std::size_t>("label count");
    g.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string_view w = t.word("label");
      PointLabel label;
      if (w == "G") {
        label.source = PointSource::kGhost;
      } else if (w == "D") {
        label.source = PointSource::kDust;
      } else if (w == "S") {
        label.source = PointSource::kStructure;
      } else if (w.size() > 1 && w[0] == 'P') {
        label.source = PointSource::kPedestrian;
        const auto [ptr, ec] =
            std::from_chars(w.data() + 1, w.data() + w.size(), label.pedestrian_id);
        if (ec != std::errc() || ptr != w.data() + w.size() || label.pedestrian_id < 0) {
          t.fail("bad pedestrian label '" + std::string(w) + "'");
        }
      } else {
        t.fail("unknown point label '" + std::string(w) + "'");
      }
      g.labels.push_back(label);
    }
    const auto m = t.integer<std::size_t>("pedestrian count");
    for (std::size_t i = 0; i < m; ++i) {
      TruePedestrian p;
      p.id = t.integer<int>("pedestrian id");
      p.position.x = t.number("x");
      p.position.y = t.number("y");
      p.position.z = t.number("z");
      g.pedestrians.push_back(p);
    }
    t.expect_end();
    if (!out.empty() && g.seq <= out.back().seq) {
      throw ParseError(ErrorKind::kNonMonotonicSeq, line_no,
                       "truth seq " + std::to_string(g.seq) + " after " +
                           std::to_string(out.back().seq));
    }
    out.push_back(std::move(g));
  }
  return out;
}

void write_truth(std::ostream& out, const GroundTruth& truth) {
  std::string line = std::to_string(truth.seq) + ' ' +
                     std::to_string(truth.dust_level) + ' ' +
                     std::to_string(truth.labels.size());
  for (const PointLabel& l : truth.labels) {
    switch (l.source) {
      case PointSource::kPedestrian: line += " P" + std::to_string(l.pedestrian_id); break;
      case PointSource::kGhost: line += " G"; break;
      case PointSource::kDust: line += " D"; break;
      case PointSource::kStructure: line += " S"; break;
    }
  }
  line += ' ' + std::to_string(truth.pedestrians.size());
  for (const TruePedestrian& p : truth.pedestrians) {
    line += ' ' + std::to_string(p.id);
    for (double v : {p.position.x, p.position.y, p.position.z}) {
      line += ' ' + format_number(v);
    }
  }
  line += '\n';
  out << line;
  check_sink(out, "ground truth");
}

// ---------------------------------------------------------------- clusters

std::vector<FrameClustering> read_clusterings(std::istream& in) {
  std::vector<FrameClustering> out;
  std::string line;
  std::size_t line_no = 0;
  while (next_content_line(in, line, line_no)) {
    Tokens t(line, line_no, kSpaces);
    FrameClustering fc;
    fc.seq = t.integer<std::uint64_t>("seq");
    const auto n = t.integer<std::size_t>("point count");
    Clustering& c = fc.clustering;
    c.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto id = t.integer<std::int32_t>("cluster id");
      if (id < Clustering::kUnclustered) t.fail("cluster id below -1");
      c.labels.push_back(id);
      if (id == Clustering::kUnclustered) continue;
      const auto uid = static_cast<std::size_t>(id);
      if (uid > c.clusters.size()) {
        t.fail("cluster ids must appear in order of first use");
      }
      if (uid == c.clusters.size()) c.clusters.emplace_back();
      c.clusters[uid].push_back(i);
    }
    t.expect_end();
    if (!out.empty() && fc.seq <= out.back().seq) {
      throw ParseError(ErrorKind::kNonMonotonicSeq, line_no,
                       "cluster seq " + std::to_string(fc.seq) + " after " +
                           std::to_string(out.back().seq));
    }
    out.push_back(std::move(fc));
  }
  return out;
}

void write_clustering(std::ostream& out, std::uint64_t seq,
                      const Clustering& clustering) {
  std::string line = std::to_string(seq) + ' ' +
                     std::to_string(clustering.labels.size());
  for (std::int32_t id : clustering.labels) line += ' ' + std::to_string(id);
  line += '\n';
  out << line;
  check_sink(out, "clustering");
}

// ---------------------------------------------------------------- tables

void write_detections_header(std::ostream& out) {
  out << kDetectionsHeader << '\n';
  check_sink(out, "detections header");
}

void write_detections(std::ostream& out, const FrameDetections& frame) {
  for (const Detection& d : frame.detections) {
    const ClusterDescriptor& c = d.descriptor;
    std::string row = std::to_string(frame.seq) + ',' +
                      format_number(frame.timestamp) + ',' +
                      std::to_string(d.cluster_id) + ',' +
                      std::string(to_string(d.label)) + ',' +
                      (d.rule.empty() ? "-" : d.rule) + ',' +
                      std::to_string(c.size);
    for (double v : {c.mean_velocity, c.abs_mean_velocity, c.mode_rcs,
                     c.centroid.x, c.centroid.y, c.centroid.z, c.extent.x,
                     c.extent.y, c.extent.z, c.range}) {
      row += ',';
      row += format_number(v);
    }
    row += '\n';
    out << row;
  }
  check_sink(out, "detections");
}

void write_detections(std::ostream& out,
                      std::span<const FrameDetections> frames) {
  write_detections_header(out);
  for (const FrameDetections& f : frames) write_detections(out, f);
}

std::vector<FrameDetections> read_detections(std::istream& in) {
  std::size_t line_no = 0;
  expect_header(in, line_no, kDetectionsHeader);
  std::vector<FrameDetections> out;
  std::string line;
  while (next_content_line(in, line, line_no)) {
    Tokens t = Tokens::csv(line, line_no);
    const auto seq = t.integer<std::uint64_t>("seq");
    const double ts = t.number("timestamp");
    Detection d;
    d.cluster_id = t.integer<std::size_t>("cluster_id");
    const std::string_view label = t.word("label");
    const auto parsed = parse_class_label(label);
    if (!parsed) t.fail("unknown label '" + std::string(label) + "'");
    d.label = *parsed;
    const std::string_view rule = t.word("rule");
    d.rule = rule == "-" ? std::string() : std::string(rule);
    ClusterDescriptor& c = d.descriptor;
    c.size = t.integer<std::size_t>("size");
    c.mean_velocity = t.number("mean_velocity");
    c.abs_mean_velocity = t.number("abs_mean_velocity");
    c.mode_rcs = t.number("mode_rcs");
    c.centroid.x = t.number("centroid_x");
    c.centroid.y = t.number("centroid_y");
    c.centroid.z = t.number("centroid_z");
    c.extent.x = t.number("extent_x");
    c.extent.y = t.number("extent_y");
    c.extent.z = t.number("extent_z");
    c.range = t.number("range");
    t.expect_end();

    if (out.empty() || out.back().seq != seq) {
      if (!out.empty() && seq < out.back().seq) {
        throw ParseError(ErrorKind::kNonMonotonicSeq, line_no,
                         "detection rows out of seq order");
      }
      out.push_back({seq, ts, {}});
    }
    out.back().detections.push_back(std::move(d));
  }
  return out;
}

void write_report_header(std::ostream& out) {
  out << kReportHeader << '\n';
  check_sink(out, "report header");
}

void write_report(std::ostream& out, const FrameReport& r) {
  std::string row = std::to_string(r.seq) + ',' + format_number(r.timestamp) +
                    ',' + std::to_string(r.filter.input_count) + ',' +
                    std::to_string(r.filter.kept_count);
  for (std::size_t c : r.filter.rejected_by_rule) row += ',' + std::to_string(c);
  row += ',' + std::to_string(r.cluster_count) + ',' +
         std::to_string(r.pedestrian_count) + ',' + format_number(r.latency_ms) +
         '\n';
  out << row;
  check_sink(out, "report");
}

void write_report(std::ostream& out, std::span<const FrameReport> reports) {
  write_report_header(out);
  for (const FrameReport& r : reports) write_report(out, r);
}

std::vector<FrameReport> read_reports(std::istream& in) {
  std::size_t line_no = 0;
  expect_header(in, line_no, kReportHeader);
  std::vector<FrameReport> out;
  std::string line;
  while (next_content_line(in, line, line_no)) {
    Tokens t = Tokens::csv(line, line_no);
    FrameReport r;
    r.seq = t.integer<std::uint64_t>("seq");
    r.timestamp = t.number("timestamp");
    r.filter.input_count = t.integer<std::size_t>("input_count");
    r.filter.kept_count = t.integer<std::size_t>("kept_count");
    for (std::size_t& c : r.filter.rejected_by_rule) {
      c = t.integer<std::size_t>("rejected count");
    }
    r.cluster_count = t.integer<std::size_t>("clusters");
    r.pedestrian_count = t.integer<std::size_t>("pedestrians");
    r.latency_ms = t.number("latency_ms");
    t.expect_end();
    if (r.filter.input_count != r.filter.kept_count + r.filter.rejected_total()) {
      t.fail("report counts do not sum to input_count");
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace dustradar
