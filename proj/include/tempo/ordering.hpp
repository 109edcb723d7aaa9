// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tempo/bgp.hpp"
#include "tempo/timed_automaton.hpp"

namespace tempo {

enum class Compatibility { Compatible, Incompatible, Unknown };

std::string_view to_string(Compatibility c);

/// Every prefix of `order` (edge-variable indices) induces a connected
/// subpattern, with constants counted as vertices and direction ignored.
bool is_connected_order(const Bgp& p, const std::vector<int>& order);

/// Checks that no accepted word lets a later variable of `order` become
/// active strictly before an earlier one, on the clock-relaxed automaton.
/// A violation is Incompatible only when the relaxation is exact (no guard
/// reads a clock); otherwise it is Unknown.
Compatibility is_compatible_order(const TimedAutomaton& ta, const std::vector<int>& order);

/// First order, in lexicographic permutation order, that is connected and
/// Compatible.
std::optional<std::vector<int>> search_order(const Bgp& p, const TimedAutomaton& ta);

/// Parses "y2,y1" against the pattern's edge variables.
std::vector<int> parse_order(const Bgp& p, std::string_view text);
std::string format_order(const Bgp& p, const std::vector<int>& order);

}  // namespace tempo
