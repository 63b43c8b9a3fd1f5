#include "dosdetect/severity.hpp"

#include <string>

#include "dosdetect/error.hpp"

namespace dosdetect {
namespace {

void validate(const SeverityInput& in) {
  if (in.n_all == 0) throw Error("severity: n_all must be positive");
  if (in.n_user == 0) throw Error("severity: n_user must be positive");
  if (in.n_attack > in.n_all) {
    throw Error("severity: n_attack (" + std::to_string(in.n_attack) + ") exceeds n_all (" +
                std::to_string(in.n_all) + ")");
  }
  if (!(in.beta >= 0.0 && in.beta <= 1.0)) throw Error("severity: beta must lie in [0, 1]");
}

}  // namespace

double severity_level(const SeverityInput& input) {
  validate(input);
  const double attack = static_cast<double>(input.n_attack);
  const double volume = attack / static_cast<double>(input.n_all);
  const double audience = attack / static_cast<double>(input.n_user);
  // Endpoints are returned as-is so beta in {0, 1} is exact.
  if (input.beta == 1.0) return volume;
  if (input.beta == 0.0) return audience;
  return input.beta * volume + (1.0 - input.beta) * audience;
}

SeverityReport severity_report(const SeverityInput& input) {
  SeverityInput at = input;
  SeverityReport r;
  at.beta = 1.0;
  r.volume_share = severity_level(at);
  at.beta = 0.0;
  r.audience_share = severity_level(at);
  r.blended = severity_level(input);
  return r;
}

}  // namespace dosdetect
