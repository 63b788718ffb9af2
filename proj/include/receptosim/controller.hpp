#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace receptosim::control {

enum class Site : std::uint8_t { thorax, wing };
enum class Classification : std::uint8_t { decrease, increase, below_threshold };
enum class LedColor : std::uint8_t { red, yellow, both, none };
enum class LedPattern : std::uint8_t { blink4, single500, rapid10, none };

struct Config {
  double tick_interval_s = 1.4;
  double pulse_ms = 200.0;       // per polarity, two pulses per tick
  double buffer_span_s = 3.0;
  double rate_threshold_ohm = 2000.0;  // per buffer span
  int glitch_count = 5;
  double reaction_duration_s = 65.0;
  double flap_on_s = 5.0;
  double flap_power_w = 6.6;
  double flap_cooldown_s = 60.0;
  Site site = Site::thorax;

  void validate() const;  // flap_on + flap_cooldown must equal reaction_duration
};

struct OutputEvent {
  double t = 0.0;
  bool is_flap = false;
  LedColor color = LedColor::none;
  LedPattern pattern = LedPattern::none;
  bool flap_active = false;
  double power_w = 0.0;
};

/// Formats one event exactly as the firmware log does (fixed field order,
/// 3-decimal timestamps), so logs diff bit-exactly across platforms.
std::string format_event(const OutputEvent& ev);

/// Windowed impedance slope scaled to the full buffer span. Returns nothing
/// when fewer than two samples are buffered (treated as below threshold).
struct RateResult {
  bool valid = false;
  double ohm_per_span = 0.0;
};

Classification classify(const RateResult& rate, const Config& cfg);

/// The embedded decision state machine. Fixed-capacity rings, no heap after
/// construction, single caller; mirrors the firmware behaviour tick by tick.
class Controller {
 public:
  static constexpr int kBufferCapacity = 3;
  static constexpr int kGlitchCapacity = 5;
  static constexpr int kMaxEventsPerTick = 4;

  struct TickResult {
    std::array<OutputEvent, kMaxEventsPerTick> events{};
    int count = 0;
    Classification classification = Classification::below_threshold;
  };

  explicit Controller(const Config& cfg);

  /// One readout tick: buffer the impedance estimate, classify its rate,
  /// signal via LEDs, and run the glitch-filtered reaction trigger.
  TickResult tick(double z_ohm, double t);

  RateResult current_rate() const;
  bool in_reaction(double t) const;
  double reaction_end_time() const { return reaction_t_end_; }
  const Config& config() const { return cfg_; }

 private:
  Config cfg_;
  struct Sample {
    double t = 0.0;
    double z = 0.0;
  };
  std::array<Sample, kBufferCapacity> z_buffer_{};
  int z_count_ = 0;
  int z_head_ = 0;  // index of oldest retained sample
  std::array<bool, kGlitchCapacity> glitch_ring_{};
  int glitch_head_ = 0;
  bool in_reaction_ = false;
  double reaction_t_end_ = 0.0;
  double last_tick_ = 0.0;
  bool ticked_ = false;
};

/// Flap actuation schedule for one trigger: on for flap_on at flap_power,
/// then off for the convective-cooling window.
struct FlapSchedule {
  OutputEvent on;
  OutputEvent off;
  double energy_j = 0.0;
};

FlapSchedule flap_schedule(double t_trigger, const Config& cfg);

}  // namespace receptosim::control
