#include "etsyn/experiments/csv_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "etsyn/attitude/closed_loop_state.hpp"
#include "etsyn/hybrid/analytics.hpp"
#include "etsyn/hybrid/log_io.hpp"

namespace etsyn::experiments {

using hybrid::format_double;
using hybrid::MalformedLogError;

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw MalformedLogError("line " + std::to_string(line_no) + ": " + what);
}

double parse_field(std::string_view token, std::size_t line_no) {
  try {
    return hybrid::parse_double(token);
  } catch (const MalformedLogError& e) {
    fail(line_no, e.what());
  }
}

std::size_t parse_count(std::string_view token, std::size_t line_no) {
  const double v = parse_field(token, line_no);
  if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
    fail(line_no, "expected a non-negative integer, got '" + std::string(token) + "'");
  }
  return static_cast<std::size_t>(v);
}

void expect_line(std::istream& in, std::string_view expected, std::size_t& line_no) {
  std::string line;
  ++line_no;
  if (!std::getline(in, line) || line != expected) {
    fail(line_no, "expected '" + std::string(expected) + "'");
  }
}

std::string timeseries_columns(std::size_t dimension) {
  std::string cols = "t,j,V1,omega_norm,gamma,jump";
  for (std::size_t k = 0; k < dimension; ++k) cols += ",x" + std::to_string(k);
  return cols;
}

}  // namespace

void write_timeseries(std::ostream& out, const hybrid::HybridArc& arc, std::span<const hybrid::JumpRecord> jumps,
                      const attitude::SynergisticParams& p, const attitude::TriggerParams& trigger,
                      std::size_t stride) {
  if (stride == 0) stride = 1;
  std::vector<char> family_after(arc.domain.size(), '-');
  for (const auto& rec : jumps) {
    if (rec.j_pre < family_after.size()) family_after[rec.j_pre] = hybrid::family_code(rec.family);
  }
  out << kTimeSeriesMagic << '\n' << "# dimension " << arc.dimension << '\n' << timeseries_columns(arc.dimension)
      << '\n';
  for (std::size_t j = 0; j < arc.samples.size(); ++j) {
    const auto& samples = arc.samples[j];
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const bool last = k + 1 == samples.size();
      if (k != 0 && !last && k % stride != 0) continue;
      const auto xi = attitude::unpack(samples[k].x);
      out << format_double(samples[k].t) << ',' << j << ',' << format_double(attitude::lyapunov_v1(xi, p)) << ','
          << format_double(xi.plant.omega.norm()) << ','
          << format_double(attitude::trigger_value(xi, trigger, p)) << ',' << (last ? family_after[j] : '-');
      for (const double v : samples[k].x) out << ',' << format_double(v);
      out << '\n';
    }
  }
}

TimeSeries read_timeseries(std::istream& in) {
  std::size_t line_no = 0;
  expect_line(in, kTimeSeriesMagic, line_no);
  std::string line;
  ++line_no;
  if (!std::getline(in, line) || !line.starts_with("# dimension ")) fail(line_no, "expected '# dimension <n>'");
  TimeSeries series;
  series.dimension = parse_count(std::string_view(line).substr(12), line_no);
  expect_line(in, timeseries_columns(series.dimension), line_no);

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != 6 + series.dimension) {
      fail(line_no, "expected " + std::to_string(6 + series.dimension) + " fields, got " +
                        std::to_string(fields.size()));
    }
    TimeSeriesRow row;
    row.t = parse_field(fields[0], line_no);
    row.j = parse_count(fields[1], line_no);
    row.v1 = parse_field(fields[2], line_no);
    row.omega_norm = parse_field(fields[3], line_no);
    row.gamma = parse_field(fields[4], line_no);
    if (fields[5].size() != 1 || (fields[5][0] != '-' && fields[5][0] != 'T' && fields[5][0] != 'S')) {
      fail(line_no, "jump flag must be -, T or S");
    }
    row.jump = fields[5][0];
    row.x.resize(static_cast<Eigen::Index>(series.dimension));
    for (std::size_t k = 0; k < series.dimension; ++k) row.x[k] = parse_field(fields[6 + k], line_no);
    series.rows.push_back(std::move(row));
  }
  return series;
}

hybrid::HybridArc arc_from_timeseries(const TimeSeries& series) {
  if (series.rows.empty()) throw MalformedLogError("time series has no rows");
  std::vector<hybrid::Interval> intervals;
  std::vector<std::vector<hybrid::Sample>> samples;
  for (const auto& row : series.rows) {
    if (row.j == intervals.size()) {
      intervals.push_back({row.t, row.t, row.j});
      samples.emplace_back();
    } else if (row.j + 1 != intervals.size()) {
      throw MalformedLogError("time series rows are not ordered by jump counter");
    }
    intervals.back().t_end = row.t;
    samples.back().push_back({row.t, row.x});
  }
  hybrid::HybridArc arc{hybrid::HybridTimeDomain(std::move(intervals)), std::move(samples), series.dimension};
  arc.validate();
  return arc;
}

std::vector<InterTransmission> inter_transmissions(std::span<const hybrid::JumpRecord> jumps) {
  std::vector<InterTransmission> out;
  const auto sets = hybrid::classify_jumps(jumps);
  const hybrid::HybridTime* prev = nullptr;
  for (const auto& h : sets.transmission) {
    if (h.j == 0) continue;
    if (prev != nullptr) out.push_back({h.t, h.t - prev->t, h.j});
    prev = &h;
  }
  return out;
}

void write_inter_transmissions(std::ostream& out, std::span<const InterTransmission> rows) {
  out << kInterTransmissionMagic << '\n' << "t,elapsed,j_pre\n";
  for (const auto& r : rows) out << format_double(r.t) << ',' << format_double(r.elapsed) << ',' << r.j_pre << '\n';
}

std::vector<InterTransmission> read_inter_transmissions(std::istream& in) {
  std::size_t line_no = 0;
  expect_line(in, kInterTransmissionMagic, line_no);
  expect_line(in, "t,elapsed,j_pre", line_no);
  std::vector<InterTransmission> out;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != 3) fail(line_no, "expected 3 fields");
    out.push_back({parse_field(fields[0], line_no), parse_field(fields[1], line_no), parse_count(fields[2], line_no)});
  }
  return out;
}

}  // namespace etsyn::experiments
