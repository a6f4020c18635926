#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/stats_compare.hpp"
#include "qwalk/walk_model.hpp"

namespace qwalk {

inline constexpr double kDistanceThreshold = 0.05;
inline constexpr double kIndependenceThreshold = 0.02;
inline constexpr double kWitnessFloor = 1e-3;

enum class Bound { AtMost, Above };

struct CheckLine {
  std::string label;
  std::string metric;
  double measured = 0.0;
  double slack = 0.0;
  double threshold = 0.0;
  Bound bound = Bound::AtMost;
  double seconds = 0.0;

  bool pass() const;
  // threshold / measured for upper bounds, measured / threshold otherwise.
  double margin() const;
};

std::string format_check(const CheckLine& line);

struct Report {
  std::string theorem;
  std::string scale;
  std::vector<CheckLine> lines;

  bool passed() const;
};

enum class Scale { Small, Default };
Scale parse_scale(std::string_view text);
const char* to_string(Scale scale);

// Individual limit checks, each a distance between an exact law and its limit.
CheckLine check_halfnormal(int n, const StepDistribution& walk);
CheckLine check_geometric_marginal(int n, const StepDistribution& walk);
CheckLine check_rayleigh(int n, const StepDistribution& walk);
CheckLine check_bridge_independence(int n, const StepDistribution& walk);
CheckLine check_excursion(int n, const StepDistribution& walk);
CheckLine check_meander(int n, const StepDistribution& walk);
// TV between the meander limit and the product of its marginals.
CheckLine check_mixture_witness(const StepDistribution& walk);

// theorem is one of "1.1" .. "1.4"; InvalidArgument otherwise.
Report reproduce(std::string_view theorem, Scale scale, const std::optional<StepDistribution>& walk = {});
std::string format_report(const Report& report);

}  // namespace qwalk
