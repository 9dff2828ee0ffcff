#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "emgtrf/features.hpp"
#include "emgtrf/series.hpp"

namespace emgtrf::io {

/// Malformed or unreadable input file.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Series files come in two interchangeable layouts, sniffed on read:
//  - text: a header line "# rate_hz=<r> channels=<c1,c2,...>" followed by one
//    row of tab-separated reals per frame, printed with round-trip precision;
//  - binary: magic "TRF1", a little-endian u32 header length, the same header
//    fields as UTF-8, then row-major little-endian f64 samples.

MultiChannelSeries read_series(const std::filesystem::path& path);
void write_series_text(const std::filesystem::path& path, const MultiChannelSeries& x);
void write_series_binary(const std::filesystem::path& path, const MultiChannelSeries& x);

/// Writes binary when the filename ends in ".bin", text otherwise.
void write_series(const std::filesystem::path& path, const MultiChannelSeries& x);

/// Alignment span tables: one "start_s<TAB>end_s<TAB>label" line per span,
/// "#" starts a comment line.
features::PhonemeAlignment read_alignment(const std::filesystem::path& path,
                                          const std::string& utterance_id);
void write_alignment(const std::filesystem::path& path, const features::PhonemeAlignment& align);

/// Round-trip-exact decimal rendering of a double.
std::string format_double(double v);

}  // namespace emgtrf::io
