#include "etsyn/hybrid/log_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace etsyn::hybrid {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return {buf.data(), ptr};
}

double parse_double(std::string_view token) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\r')) token.remove_suffix(1);
  if (token == "inf" || token == "+inf") return kInfinity;
  if (token == "-inf") return -kInfinity;
  if (token == "nan") return std::nan("");
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
    throw MalformedLogError("not a number: '" + std::string(token) + "'");
  }
  return value;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::size_t parse_count(std::string_view token) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
    throw MalformedLogError("not a counter: '" + std::string(token) + "'");
  }
  return value;
}

[[noreturn]] void fail_at(std::size_t line_no, const std::string& what) {
  std::ostringstream os;
  os << "jump log line " << line_no << ": " << what;
  throw MalformedLogError(os.str());
}

RunSummary parse_summary(std::string_view body) {
  RunSummary s;
  for (auto field : split(body, ' ')) {
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) throw MalformedLogError("summary field without '='");
    const auto key = field.substr(0, eq);
    const auto value = field.substr(eq + 1);
    if (key == "termination") {
      s.termination = std::string(value);
    } else if (key == "t_end") {
      s.t_end = parse_double(value);
    } else if (key == "j_end") {
      s.j_end = parse_count(value);
    } else if (key == "transmissions") {
      s.transmissions = parse_count(value);
    } else if (key == "synergistic") {
      s.synergistic = parse_count(value);
    } else if (key == "wall_s") {
      s.wall_seconds = parse_double(value);
    }
  }
  return s;
}

}  // namespace

void write_jump_log(std::ostream& out, const JumpLog& log) {
  out << kJumpLogMagic << '\n' << "# dimension " << log.dimension << '\n';
  for (const auto& r : log.records) {
    out << format_double(r.t) << ',' << r.j_pre << ',' << family_code(r.family);
    for (Eigen::Index k = 0; k < r.state_pre.size(); ++k) out << ',' << format_double(r.state_pre[k]);
    for (Eigen::Index k = 0; k < r.state_post.size(); ++k) out << ',' << format_double(r.state_post[k]);
    out << '\n';
  }
  if (log.summary) {
    const auto& s = *log.summary;
    out << "# summary termination=" << s.termination << " t_end=" << format_double(s.t_end)
        << " j_end=" << s.j_end << " transmissions=" << s.transmissions
        << " synergistic=" << s.synergistic << " wall_s=" << format_double(s.wall_seconds) << '\n';
  }
}

JumpLog read_jump_log(std::istream& in) {
  JumpLog log;
  bool have_dimension = false;
  bool have_magic = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty()) continue;
    if (view.front() == '#') {
      if (view == kJumpLogMagic) {
        have_magic = true;
      } else if (view.starts_with("# dimension ")) {
        try {
          log.dimension = parse_count(view.substr(12));
        } catch (const MalformedLogError& e) {
          fail_at(line_no, e.what());
        }
        have_dimension = true;
      } else if (view.starts_with("# summary ")) {
        try {
          log.summary = parse_summary(view.substr(10));
        } catch (const MalformedLogError& e) {
          fail_at(line_no, e.what());
        }
      }
      continue;
    }
    if (!have_magic) fail_at(line_no, "missing '# etsyn-jump-log v1' header");
    if (!have_dimension) fail_at(line_no, "record before '# dimension' header");
    const auto fields = split(view, ',');
    if (fields.size() != 3 + 2 * log.dimension) {
      std::ostringstream os;
      os << "expected " << 3 + 2 * log.dimension << " fields, found " << fields.size();
      fail_at(line_no, os.str());
    }
    try {
      JumpRecord r;
      r.t = parse_double(fields[0]);
      r.j_pre = parse_count(fields[1]);
      if (fields[2].size() != 1) throw MalformedLogError("family must be T or S");
      r.family = family_from_code(fields[2].front());
      r.state_pre.resize(static_cast<Eigen::Index>(log.dimension));
      r.state_post.resize(static_cast<Eigen::Index>(log.dimension));
      for (std::size_t k = 0; k < log.dimension; ++k) {
        r.state_pre[static_cast<Eigen::Index>(k)] = parse_double(fields[3 + k]);
        r.state_post[static_cast<Eigen::Index>(k)] = parse_double(fields[3 + log.dimension + k]);
      }
      log.records.push_back(std::move(r));
    } catch (const MalformedLogError& e) {
      fail_at(line_no, e.what());
    }
  }
  if (!have_magic) throw MalformedLogError("jump log: missing header");
  return log;
}

void save_jump_log(const std::string& path, const JumpLog& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_jump_log(out, log);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

JumpLog load_jump_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_jump_log(in);
}

}  // namespace etsyn::hybrid
