#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace ifd {

enum class Quantity { FlatDistance, GromovHausdorff };
enum class Direction { Upper, Lower };

/// One named input of a bound formula, kept so the value can be recomputed.
struct NamedValue {
  std::string name;
  double value = 0.0;
  std::string unit;
};

/// An upper or lower bound on d_F or d_GH together with everything needed to
/// recompute it.
struct BoundReport {
  Quantity quantity = Quantity::FlatDistance;
  Direction direction = Direction::Upper;
  double value = 0.0;
  std::string formula;
  std::vector<NamedValue> inputs;
  /// Short tag naming the construction the formula comes from.
  std::string anchor;
  /// Free-form caveat, e.g. "d_L is an upper bound from a concrete map".
  std::string note;

  /// Value of the input called `name`; throws std::out_of_range if absent.
  double input(const std::string& name) const;
};

std::string to_string(Quantity q);
std::string to_string(Direction d);

nlohmann::json to_json(const BoundReport& report);
BoundReport bound_report_from_json(const nlohmann::json& j);

/// CSV header and row for study tables: quantity,direction,value,formula,anchor.
std::string bound_csv_header();
std::string bound_csv_row(const BoundReport& report);

/// Shortest decimal text that round-trips the double; "nan"/"inf" otherwise.
std::string format_double(double v);

}  // namespace ifd
