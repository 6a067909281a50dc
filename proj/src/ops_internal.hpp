#pragma once

#include <optional>
#include <string>
#include <vector>

#include "predictlab/experiments.hpp"

namespace predictlab::experiments {

std::string fmt_double(double v);
Json set_json(const IntSet& s);
Json gaps_json(const std::optional<sets::GapStats>& g);
Window window_param(io::Fields& f, const Context& ctx, const std::string& key);
/// Accepts an IntSet object, a member list, run-length text or a SetSpec.
IntSet set_param(io::Fields& f, const Context& ctx, const std::string& key, Window w);

/// Composite checks behind the canned suites ("checks" module).
const std::vector<std::string>& check_names();
OpOutcome run_check(const std::string& name, io::Fields& f, const Context& ctx);

}  // namespace predictlab::experiments
