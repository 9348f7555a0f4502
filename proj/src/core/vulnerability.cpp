#include "sf/vulnerability.hpp"

namespace sf {

VulnerabilityUpdate update_vulnerability(const VulnerabilityTracker& tracker,
                                         std::int64_t hit_frame,
                                         const ShotTiming& timing,
                                         int threshold) {
  VulnerabilityUpdate out{tracker, SimEvent::fortress_hit(0)};
  out.tracker.last_hit_frame = hit_frame;

  const bool fast = tracker.last_hit_frame.has_value() &&
                    timing.is_fast(hit_frame - *tracker.last_hit_frame);

  if (tracker.phase(threshold) == VulnPhase::Vulnerable) {
    if (fast) out.event = SimEvent::fortress_destroyed();
    return out;
  }
  if (!fast) {
    out.tracker.v = tracker.v + 1;
    out.event = SimEvent::fortress_hit(+1);
  } else if (tracker.v > 0) {
    out.tracker.v = 0;
    out.event = SimEvent::vulnerability_reset(tracker.v);
  }
  return out;
}

}  // namespace sf
