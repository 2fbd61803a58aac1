#pragma once

namespace scpm {

// serial is the reference path; parallel runs independent iterations with
// OpenMP and must return the same answer.
enum class ExecPolicy { serial, parallel };

}  // namespace scpm
