#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace peermatch {

enum class Errc {
  quota_deficit,
  negative_weight,
  asymmetric_input,
  invalid_input,
  same_house,
  invalid_student,
  own_house,
  houses_active,
  too_large,
  empty_network,
  hypothesis_violated,
  degenerate_delta,
  parse_error,
  self_check_failed,
};

std::string_view errc_name(Errc code) noexcept;

/// Validation failure raised by every library entry point. `detail()` carries
/// the specific item at fault (a hypothesis name, a line number, ...).
class Error : public std::runtime_error {
public:
  Error(Errc code, std::string detail);

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

private:
  Errc code_;
  std::string detail_;
};

}  // namespace peermatch
