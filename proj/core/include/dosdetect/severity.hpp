#pragma once

#include <cstddef>

namespace dosdetect {

struct SeverityInput {
  std::size_t n_attack = 0;  // tweets labeled as attack tweets
  std::size_t n_all = 0;     // all tweets in the event window
  std::size_t n_user = 0;    // audience size (e.g. combined follower count)
  double beta = 0.5;         // weight of the volume share, in [0, 1]
};

/// beta * n_attack / n_all + (1 - beta) * n_attack / n_user.
/// Throws Error when n_all or n_user is zero, n_attack > n_all, or beta is
/// outside [0, 1].
double severity_level(const SeverityInput& input);

/// Both endpoints alongside the blended value.
struct SeverityReport {
  double volume_share = 0.0;    // beta = 1
  double audience_share = 0.0;  // beta = 0
  double blended = 0.0;
};

SeverityReport severity_report(const SeverityInput& input);

}  // namespace dosdetect
