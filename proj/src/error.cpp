#include "peermatch/error.hpp"

#include <string>

namespace peermatch {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::quota_deficit: return "QuotaDeficit";
    case Errc::negative_weight: return "NegativeWeight";
    case Errc::asymmetric_input: return "AsymmetricInput";
    case Errc::invalid_input: return "InvalidInput";
    case Errc::same_house: return "SameHouse";
    case Errc::invalid_student: return "InvalidStudent";
    case Errc::own_house: return "OwnHouse";
    case Errc::houses_active: return "HousesActive";
    case Errc::too_large: return "TooLarge";
    case Errc::empty_network: return "EmptyNetwork";
    case Errc::hypothesis_violated: return "HypothesisViolated";
    case Errc::degenerate_delta: return "DegenerateDelta";
    case Errc::parse_error: return "ParseError";
    case Errc::self_check_failed: return "SelfCheckFailed";
  }
  return "Unknown";
}

Error::Error(Errc code, std::string detail)
    : std::runtime_error(std::string(errc_name(code)) + (detail.empty() ? "" : ": " + detail)),
      code_(code),
      detail_(std::move(detail)) {}

}  // namespace peermatch
