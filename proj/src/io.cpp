#include "emgtrf/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace emgtrf::io {

namespace {

constexpr char kMagic[4] = {'T', 'R', 'F', '1'};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

std::uint64_t to_le64(double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap64(bits);
  }
  return bits;
}

double from_le64(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap64(bits);
  }
  return std::bit_cast<double>(bits);
}

std::uint32_t to_le32(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap32(v);
  return v;
}

struct Header {
  double rate_hz = 0.0;
  std::vector<std::string> channels;
};

std::string render_header_fields(const MultiChannelSeries& x) {
  std::string h = "rate_hz=" + format_double(x.sample_rate_hz) + " channels=";
  for (std::size_t c = 0; c < x.channel_names.size(); ++c) {
    const std::string& name = x.channel_names[c];
    if (name.empty() || name.find_first_of(", \t\n") != std::string::npos) {
      throw FormatError("channel name '" + name + "' not representable in series header");
    }
    if (c) h += ',';
    h += name;
  }
  return h;
}

Header parse_header_fields(const std::string& fields, const std::string& where) {
  Header h;
  std::istringstream ss(fields);
  std::string tok;
  bool saw_rate = false, saw_channels = false;
  while (ss >> tok) {
    if (tok.rfind("rate_hz=", 0) == 0) {
      char* end = nullptr;
      h.rate_hz = std::strtod(tok.c_str() + 8, &end);
      if (end == tok.c_str() + 8 || *end != '\0') {
        throw FormatError(where + ": bad rate_hz value '" + tok + "'");
      }
      saw_rate = true;
    } else if (tok.rfind("channels=", 0) == 0) {
      std::string list = tok.substr(9);
      std::size_t pos = 0;
      while (pos <= list.size()) {
        const std::size_t comma = list.find(',', pos);
        const std::string name =
            list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (name.empty()) throw FormatError(where + ": empty channel name in header");
        h.channels.push_back(name);
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      saw_channels = true;
    } else {
      throw FormatError(where + ": unknown header field '" + tok + "'");
    }
  }
  if (!saw_rate || !saw_channels) {
    throw FormatError(where + ": header must carry rate_hz and channels");
  }
  if (!(h.rate_hz > 0.0)) throw FormatError(where + ": rate_hz must be positive");
  return h;
}

MultiChannelSeries read_series_binary(const std::string& raw, const std::string& where) {
  if (raw.size() < 8) throw FormatError(where + ": truncated binary series");
  std::uint32_t header_len;
  std::memcpy(&header_len, raw.data() + 4, 4);
  header_len = to_le32(header_len);
  if (raw.size() < 8 + static_cast<std::size_t>(header_len)) {
    throw FormatError(where + ": truncated binary series header");
  }
  const Header h = parse_header_fields(raw.substr(8, header_len), where);
  const std::size_t cols = h.channels.size();
  const std::size_t payload = raw.size() - 8 - header_len;
  if (payload % (8 * cols) != 0) {
    throw FormatError(where + ": binary payload is not a whole number of frames");
  }
  const std::size_t rows = payload / (8 * cols);
  Matrix m(rows, cols);
  const char* p = raw.data() + 8 + header_len;
  for (std::size_t i = 0; i < rows * cols; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, p + 8 * i, 8);
    m.data[i] = from_le64(bits);
  }
  return MultiChannelSeries(std::move(m), h.rate_hz, h.channels);
}

MultiChannelSeries read_series_text(const std::string& raw, const std::string& where) {
  std::istringstream in(raw);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw FormatError(where + ": missing '# rate_hz=... channels=...' header line");
  }
  const Header h = parse_header_fields(line.substr(2), where);
  const std::size_t cols = h.channels.size();
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char* p = line.c_str();
    std::size_t got = 0;
    while (*p) {
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p) {
        throw FormatError(where + ": unparsable value in data row " + std::to_string(rows + 1));
      }
      values.push_back(v);
      ++got;
      p = end;
      while (*p == '\t' || *p == ' ') ++p;
    }
    if (got != cols) {
      throw FormatError(where + ": row " + std::to_string(rows + 1) + " has " +
                        std::to_string(got) + " values, expected " + std::to_string(cols));
    }
    ++rows;
  }
  Matrix m(rows, cols);
  m.data = std::move(values);
  return MultiChannelSeries(std::move(m), h.rate_hz, h.channels);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

MultiChannelSeries read_series(const std::filesystem::path& path) {
  const std::string raw = read_file(path);
  if (raw.size() >= 4 && std::memcmp(raw.data(), kMagic, 4) == 0) {
    return read_series_binary(raw, path.string());
  }
  return read_series_text(raw, path.string());
}

void write_series_text(const std::filesystem::path& path, const MultiChannelSeries& x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << "# " << render_header_fields(x) << "\n";
  for (std::size_t t = 0; t < x.frames(); ++t) {
    const double* row = x.data.row(t);
    for (std::size_t c = 0; c < x.channels(); ++c) {
      if (c) out << '\t';
      out << format_double(row[c]);
    }
    out << '\n';
  }
  if (!out) throw FormatError("write failed for " + path.string());
}

void write_series_binary(const std::filesystem::path& path, const MultiChannelSeries& x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  const std::string header = render_header_fields(x);
  const std::uint32_t len = to_le32(static_cast<std::uint32_t>(header.size()));
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&len), 4);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const double v : x.data.data) {
    const std::uint64_t bits = to_le64(v);
    out.write(reinterpret_cast<const char*>(&bits), 8);
  }
  if (!out) throw FormatError("write failed for " + path.string());
}

void write_series(const std::filesystem::path& path, const MultiChannelSeries& x) {
  if (path.extension() == ".bin") {
    write_series_binary(path, x);
  } else {
    write_series_text(path, x);
  }
}

features::PhonemeAlignment read_alignment(const std::filesystem::path& path,
                                          const std::string& utterance_id) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  features::PhonemeAlignment align;
  align.utterance_id = utterance_id;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    features::PhonemeSpan span;
    if (!(ss >> span.start_s >> span.end_s >> span.label)) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) +
                        ": expected 'start_s end_s label'");
    }
    align.spans.push_back(std::move(span));
  }
  try {
    align.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return align;
}

void write_alignment(const std::filesystem::path& path, const features::PhonemeAlignment& align) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  for (const auto& s : align.spans) {
    out << format_double(s.start_s) << '\t' << format_double(s.end_s) << '\t' << s.label << '\n';
  }
  if (!out) throw FormatError("write failed for " + path.string());
}

}  // namespace emgtrf::io
