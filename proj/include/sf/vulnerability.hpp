#pragma once

#include <cstdint>
#include <optional>

#include "sf/events.hpp"

namespace sf {

enum class VulnPhase : std::uint8_t { Building, Vulnerable };

// Frame-quantized shot clock. Times are integer frames; the fast/slow
// decision is made in exact arithmetic as frames * 1000 < interval * fps.
struct ShotTiming {
  int fps = 30;
  double critical_interval_ms = 250.0;

  bool is_fast(std::int64_t delta_frames) const {
    return static_cast<double>(delta_frames) * 1000.0 <
           critical_interval_ms * static_cast<double>(fps);
  }
  double to_ms(std::int64_t frames) const {
    return static_cast<double>(frames) * 1000.0 / fps;
  }
};

struct VulnerabilityTracker {
  int v = 0;
  // Frame of the most recent missile hit; empty before the first hit.
  std::optional<std::int64_t> last_hit_frame;

  VulnPhase phase(int threshold) const {
    return v >= threshold ? VulnPhase::Vulnerable : VulnPhase::Building;
  }
  bool operator==(const VulnerabilityTracker&) const = default;
};

struct VulnerabilityUpdate {
  VulnerabilityTracker tracker;
  SimEvent event;
};

// Applies one missile hit at `hit_frame`. Requires hit_frame to be later than
// or equal to the previous hit (several hits may land in one frame).
//
//   Building,   slow or first hit -> v + 1, FortressHit(+1)
//   Building,   fast              -> v = 0, VulnerabilityReset(v)
//                                    (FortressHit(0) when v is already 0)
//   Vulnerable, fast              -> FortressDestroyed
//   Vulnerable, slow or first     -> unchanged, FortressHit(0)
VulnerabilityUpdate update_vulnerability(const VulnerabilityTracker& tracker,
                                         std::int64_t hit_frame,
                                         const ShotTiming& timing,
                                         int threshold);

}  // namespace sf
