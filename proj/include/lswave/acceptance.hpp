#pragma once

#include <iosfwd>

namespace lswave {

/// Runs the eight-point regression suite against the shipped presets,
/// printing one [PASS]/[FAIL] line per criterion (with indented detail on
/// failure). Returns the number of failed criteria.
int run_acceptance(std::ostream& os);

}  // namespace lswave
