#pragma once

#include <string>

#include "fragalign/petri_net.hpp"

namespace fragalign {

// {"valid": bool, "violations": [{"code": ..., "detail": ...}]}
std::string validation_report_to_json(const ValidationReport& report);

}  // namespace fragalign
