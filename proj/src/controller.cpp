#include "receptosim/controller.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "receptosim/errors.hpp"

namespace receptosim::control {

void Config::validate() const {
  if (tick_interval_s <= 0.0 || pulse_ms <= 0.0 || buffer_span_s <= 0.0 ||
      rate_threshold_ohm <= 0.0 || glitch_count <= 0 || reaction_duration_s <= 0.0 ||
      flap_on_s <= 0.0 || flap_power_w <= 0.0 || flap_cooldown_s <= 0.0) {
    throw ConfigError("controller configuration values must be positive");
  }
  if (std::abs(flap_on_s + flap_cooldown_s - reaction_duration_s) > 1e-9) {
    throw ConfigError("flap_on + flap_cooldown must equal reaction_duration");
  }
  if (glitch_count != Controller::kGlitchCapacity) {
    throw ConfigError("glitch filter is a fixed five-count ring");
  }
  if (2.0 * pulse_ms * 1e-3 >= tick_interval_s) {
    throw ConfigError("pulse pair must fit inside one tick interval");
  }
}

std::string format_event(const OutputEvent& ev) {
  const char* color = "-";
  switch (ev.color) {
    case LedColor::red: color = "red"; break;
    case LedColor::yellow: color = "yellow"; break;
    case LedColor::both: color = "both"; break;
    case LedColor::none: color = "-"; break;
  }
  const char* pattern = "-";
  switch (ev.pattern) {
    case LedPattern::blink4: pattern = "blink4"; break;
    case LedPattern::single500: pattern = "single500"; break;
    case LedPattern::rapid10: pattern = "rapid10"; break;
    case LedPattern::none: pattern = "-"; break;
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "t=%.3f kind=%s color=%s pattern=%s flap=%d power_W=%.1f",
                ev.t, ev.is_flap ? "flap" : "led", color, pattern, ev.flap_active ? 1 : 0,
                ev.power_w);
  return buf;
}

Classification classify(const RateResult& rate, const Config& cfg) {
  if (!rate.valid) return Classification::below_threshold;
  if (std::abs(rate.ohm_per_span) > cfg.rate_threshold_ohm) {
    return rate.ohm_per_span < 0.0 ? Classification::decrease : Classification::increase;
  }
  return Classification::below_threshold;  // ties are not an exceedance
}

Controller::Controller(const Config& cfg) : cfg_(cfg) {
  cfg_.validate();
  glitch_ring_.fill(false);
}

RateResult Controller::current_rate() const {
  RateResult r;
  if (z_count_ < 2) return r;
  const Sample& oldest = z_buffer_[z_head_];
  const Sample& newest = z_buffer_[(z_head_ + z_count_ - 1) % kBufferCapacity];
  const double dt = newest.t - oldest.t;
  if (dt <= 0.0) return r;
  r.valid = true;
  r.ohm_per_span = (newest.z - oldest.z) * cfg_.buffer_span_s / dt;
  return r;
}

bool Controller::in_reaction(double t) const { return in_reaction_ && t < reaction_t_end_; }

Controller::TickResult Controller::tick(double z_ohm, double t) {
  if (ticked_ && t < last_tick_ + cfg_.tick_interval_s - 1e-9) {
    throw std::invalid_argument("controller tick arrived before the scheduled cadence");
  }
  last_tick_ = t;
  ticked_ = true;

  // 1. buffer the sample and classify the windowed rate
  if (z_count_ < kBufferCapacity) {
    z_buffer_[(z_head_ + z_count_) % kBufferCapacity] = {t, z_ohm};
    ++z_count_;
  } else {
    z_buffer_[z_head_] = {t, z_ohm};
    z_head_ = (z_head_ + 1) % kBufferCapacity;
  }
  const Classification cls = classify(current_rate(), cfg_);

  TickResult out;
  out.classification = cls;
  auto emit = [&out](const OutputEvent& ev) { out.events[out.count++] = ev; };

  // 2. per-tick LED signalling (stays active in reaction mode as well)
  OutputEvent led;
  led.t = t;
  switch (cls) {
    case Classification::decrease:
      led.color = LedColor::red;
      led.pattern = LedPattern::blink4;
      break;
    case Classification::increase:
      led.color = LedColor::yellow;
      led.pattern = LedPattern::blink4;
      break;
    case Classification::below_threshold:
      led.color = LedColor::both;
      led.pattern = LedPattern::single500;
      break;
  }
  emit(led);

  // 3. glitch filter and reaction trigger (thorax only, lockout while active)
  glitch_ring_[glitch_head_] = (cls == Classification::decrease);
  glitch_head_ = (glitch_head_ + 1) % kGlitchCapacity;

  if (in_reaction_ && t >= reaction_t_end_) in_reaction_ = false;

  bool all_decrease = true;
  for (const bool b : glitch_ring_) all_decrease = all_decrease && b;
  if (all_decrease && !in_reaction_ && cfg_.site == Site::thorax) {
    in_reaction_ = true;
    reaction_t_end_ = t + cfg_.reaction_duration_s;
    glitch_ring_.fill(false);

    OutputEvent rapid;
    rapid.t = t;
    rapid.color = LedColor::red;
    rapid.pattern = LedPattern::rapid10;
    emit(rapid);

    const FlapSchedule flap = flap_schedule(t, cfg_);
    emit(flap.on);
    emit(flap.off);
  }
  return out;
}

FlapSchedule flap_schedule(double t_trigger, const Config& cfg) {
  FlapSchedule s;
  s.on.t = t_trigger;
  s.on.is_flap = true;
  s.on.flap_active = true;
  s.on.power_w = cfg.flap_power_w;
  s.off.t = t_trigger + cfg.flap_on_s;
  s.off.is_flap = true;
  s.off.flap_active = false;
  s.off.power_w = 0.0;
  s.energy_j = cfg.flap_power_w * cfg.flap_on_s;
  return s;
}

}  // namespace receptosim::control
