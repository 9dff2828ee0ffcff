#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "emgtrf/matrix.hpp"
#include "emgtrf/series.hpp"

namespace emgtrf::features {

/// One labelled time span of a forced alignment.
struct PhonemeSpan {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string label;
};

/// Ordered, non-overlapping spans for one utterance.
struct PhonemeAlignment {
  std::vector<PhonemeSpan> spans;
  std::string utterance_id;

  /// Throws std::invalid_argument when spans overlap, are unsorted, or have
  /// non-positive duration.
  void validate() const;
};

/// The 39 ARPAbet phonemes without stress marks plus a silence token at the
/// last index (39).
class PhonemeInventory {
 public:
  static const PhonemeInventory& arpabet();

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  std::size_t silence_index() const { return labels_.size() - 1; }
  const std::string& silence_label() const { return labels_.back(); }

  /// Index of a label, or throws std::invalid_argument naming the label.
  std::size_t index_of(const std::string& label) const;
  bool contains(const std::string& label) const;

 private:
  explicit PhonemeInventory(std::vector<std::string> labels);
  std::vector<std::string> labels_;
};

enum class FeatureKind { articulatory, phoneme, concatenated };

std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& s);

/// Frame-rate feature matrix (time x F) at 50 Hz.
struct FeatureMatrix {
  Matrix data;
  double sample_rate_hz = 50.0;
  std::vector<std::string> feature_names;
  FeatureKind kind = FeatureKind::articulatory;

  std::size_t frames() const { return data.rows; }
  std::size_t feature_count() const { return data.cols; }
};

enum class SpeechMode { aloud, mimed, subvocal };

std::string to_string(SpeechMode mode);
SpeechMode speech_mode_from_string(const std::string& s);

/// Column names of an articulatory feature file: twelve kinematic channels
/// (upper/lower lip, lower incisor, tongue tip/blade/dorsum, x and y each)
/// followed by pitch and loudness.
const std::vector<std::string>& articulatory_column_names();
constexpr std::size_t kKinematicFeatureCount = 12;
constexpr std::size_t kArticulatoryFeatureCount = 14;

/// Selects articulatory columns for a mode: aloud keeps all 14 columns,
/// silent modes keep only the 12 kinematic ones (pitch and loudness dropped).
/// The input series must be at 50 Hz with the 14 documented columns.
FeatureMatrix load_sparc(const MultiChannelSeries& source, SpeechMode mode);

/// Expands an alignment into one-hot rows at 50 Hz. Frame t covers center
/// time (t + 0.5) / 50; a frame inside a span gets that span's label,
/// uncovered frames get the silence token. Ties at exact boundaries go to the
/// later span.
FeatureMatrix densify_phonemes(const PhonemeAlignment& align, const PhonemeInventory& inv,
                               std::size_t n_frames);

struct TrimResult {
  MultiChannelSeries envelope;
  FeatureMatrix features;
  std::size_t first_frame = 0;  // index of the first retained frame
  std::size_t last_frame = 0;   // one past the last retained frame
};

/// Drops frames before the first non-silence span and after the last one,
/// identically from envelope and features. Throws on an all-silence
/// utterance.
TrimResult trim_to_speaking(const MultiChannelSeries& envelope, const FeatureMatrix& features,
                            const PhonemeAlignment& align, const PhonemeInventory& inv);

/// Shifts an alignment so its spans address the trimmed frame axis, clipping
/// spans to the retained window. Used to keep span-level permutation valid
/// after trim_to_speaking.
PhonemeAlignment rebase_alignment(const PhonemeAlignment& align, std::size_t first_frame,
                                  std::size_t last_frame, double rate_hz);

/// Concatenates phoneme and articulatory features as [P A].
FeatureMatrix concat_ap(const FeatureMatrix& p, const FeatureMatrix& a);

/// Z-scores continuous feature columns in place with the given per-column
/// statistics; one-hot phoneme columns are left untouched. For concatenated
/// matrices only the trailing articulatory block is scaled.
void standardize_continuous(FeatureMatrix& m, const std::vector<double>& mean,
                            const std::vector<double>& stddev);

/// Per-column mean and population standard deviation over a set of feature
/// matrices (concatenated row-wise).
void column_moments(const std::vector<const FeatureMatrix*>& ms, std::vector<double>& mean,
                    std::vector<double>& stddev);

}  // namespace emgtrf::features
