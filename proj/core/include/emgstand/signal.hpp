#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace emgstand {

/// Recorded muscle groups, in canonical order.
enum class Muscle : std::uint8_t { GL, MH, VL, TA, MG, SOL };
enum class Side : std::uint8_t { R, L };

inline constexpr std::size_t kMuscleCount = 6;
inline constexpr std::size_t kChannelCount = 12;
inline constexpr std::array<Muscle, kMuscleCount> kAllMuscles = {Muscle::GL, Muscle::MH, Muscle::VL,
                                                                 Muscle::TA, Muscle::MG, Muscle::SOL};
inline constexpr double kDefaultSampleRateHz = 2000.0;

std::string_view to_string(Muscle m) noexcept;
std::optional<Muscle> parse_muscle(std::string_view name) noexcept;

/// One electrode site. Canonical order is muscle-major with R before L.
struct MuscleLabel {
    Muscle muscle = Muscle::GL;
    Side side = Side::R;

    [[nodiscard]] constexpr std::size_t canonical_index() const noexcept {
        return static_cast<std::size_t>(muscle) * 2 + (side == Side::R ? 0 : 1);
    }
    [[nodiscard]] std::string name() const;  // e.g. "R_SOL"

    static MuscleLabel from_canonical_index(std::size_t index);
    static std::optional<MuscleLabel> parse(std::string_view name) noexcept;

    friend constexpr bool operator==(MuscleLabel, MuscleLabel) = default;
    friend constexpr auto operator<=>(MuscleLabel a, MuscleLabel b) noexcept {
        return a.canonical_index() <=> b.canonical_index();
    }
};

/// All 12 labels in canonical order.
std::vector<MuscleLabel> canonical_channels();

/// A set of muscle groups stored as a bitmask (bit i = i-th canonical muscle).
class MuscleSet {
  public:
    constexpr MuscleSet() = default;
    MuscleSet(std::initializer_list<Muscle> muscles);
    static constexpr MuscleSet all() noexcept { return MuscleSet(std::uint8_t{0x3f}); }
    static constexpr MuscleSet from_bits(std::uint8_t bits) noexcept { return MuscleSet(static_cast<std::uint8_t>(bits & 0x3f)); }
    /// Parses "VL,SOL" or "VL+SOL" (case-sensitive canonical names).
    static std::optional<MuscleSet> parse(std::string_view text);

    void insert(Muscle m) noexcept { bits_ |= bit(m); }
    [[nodiscard]] bool contains(Muscle m) const noexcept { return (bits_ & bit(m)) != 0; }
    [[nodiscard]] bool empty() const noexcept { return bits_ == 0; }
    [[nodiscard]] std::size_t size() const noexcept;
    [[nodiscard]] std::uint8_t bits() const noexcept { return bits_; }
    [[nodiscard]] std::vector<Muscle> members() const;
    /// Canonical-order names joined by `sep`, e.g. "VL SOL".
    [[nodiscard]] std::string to_string(std::string_view sep = " ") const;

    friend MuscleSet operator&(MuscleSet a, MuscleSet b) noexcept { return MuscleSet(static_cast<std::uint8_t>(a.bits_ & b.bits_)); }
    friend bool operator==(MuscleSet, MuscleSet) = default;

  private:
    constexpr explicit MuscleSet(std::uint8_t bits) : bits_(bits) {}
    static constexpr std::uint8_t bit(Muscle m) noexcept { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(m)); }
    std::uint8_t bits_ = 0;
};

/// Clinical standing-quality score in [1, 10].
enum class Assistance : std::uint8_t { Assisted, Independent };

std::string_view to_string(Assistance a) noexcept;

class StandingScore {
  public:
    /// Throws ScoreOutOfRange outside [1, 10].
    explicit StandingScore(int value);

    [[nodiscard]] int value() const noexcept { return value_; }
    [[nodiscard]] Assistance assistance() const noexcept {
        return value_ > 5 ? Assistance::Independent : Assistance::Assisted;
    }

    friend bool operator==(StandingScore, StandingScore) = default;
    friend auto operator<=>(StandingScore, StandingScore) = default;

  private:
    int value_;
};

/// Multi-channel EMG trial. Channels are always held in canonical order and
/// every channel has the same number of finite samples (millivolts).
class Recording {
  public:
    Recording(std::string trial_id, double sample_rate_hz, std::vector<MuscleLabel> channels,
              std::vector<std::vector<double>> samples);

    [[nodiscard]] const std::string& trial_id() const noexcept { return trial_id_; }
    [[nodiscard]] double sample_rate_hz() const noexcept { return sample_rate_hz_; }
    [[nodiscard]] const std::vector<MuscleLabel>& channels() const noexcept { return channels_; }
    [[nodiscard]] std::size_t channel_count() const noexcept { return channels_.size(); }
    [[nodiscard]] std::size_t sample_count() const noexcept { return samples_.front().size(); }
    [[nodiscard]] double duration_s() const noexcept {
        return static_cast<double>(sample_count()) / sample_rate_hz_;
    }
    [[nodiscard]] std::span<const double> channel(std::size_t i) const { return samples_.at(i); }
    [[nodiscard]] std::optional<std::size_t> find_channel(MuscleLabel label) const noexcept;
    [[nodiscard]] MuscleSet muscles() const noexcept;

    friend bool operator==(const Recording&, const Recording&) = default;

  private:
    std::string trial_id_;
    double sample_rate_hz_;
    std::vector<MuscleLabel> channels_;
    std::vector<std::vector<double>> samples_;
};

/// Sub-window [start_s, start_s + duration_s) with sample boundaries rounded
/// to the nearest sample. Throws WindowOutOfBounds.
Recording slice_window(const Recording& rec, double start_s, double duration_s);

/// Keeps both sides of every selected muscle. Throws EmptySelection or
/// MuscleAbsentFromRecording.
Recording select_channels(const Recording& rec, MuscleSet muscles);

struct TrialDescriptor {
    std::string trial_id;
    std::filesystem::path recording_path;
    StandingScore score;
    double sample_rate_hz = kDefaultSampleRateHz;
};

/// Reads the JSON manifest `{sample_rate_hz, trials: [{id, path, score}]}`.
/// Relative paths resolve against the manifest's directory.
std::vector<TrialDescriptor> load_manifest(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path, double sample_rate_hz,
                    std::span<const TrialDescriptor> trials);

/// Reads a recording CSV whose header must name exactly `expected_channels`
/// (any column order). Samples are stored in canonical order.
Recording load_recording(const std::filesystem::path& path, std::span<const MuscleLabel> expected_channels,
                         double sample_rate_hz = kDefaultSampleRateHz, std::string trial_id = {});

/// Like load_recording but accepts whatever valid channel set the header names.
Recording load_recording_any(const std::filesystem::path& path, double sample_rate_hz = kDefaultSampleRateHz,
                             std::string trial_id = {});

/// Writes CSV with `significant_digits` significant decimal digits per sample.
void write_recording(const std::filesystem::path& path, const Recording& rec, int significant_digits = 9);

}  // namespace emgstand
