#include "ifd/bound_report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "ifd/error.hpp"

namespace ifd {

double BoundReport::input(const std::string& name) const {
  for (const auto& in : inputs) {
    if (in.name == name) return in.value;
  }
  throw std::out_of_range("bound report has no input named '" + name + "'");
}

std::string to_string(Quantity q) {
  return q == Quantity::FlatDistance ? "dF" : "dGH";
}

std::string to_string(Direction d) { return d == Direction::Upper ? "upper" : "lower"; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

nlohmann::json to_json(const BoundReport& report) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& in : report.inputs) {
    inputs.push_back({{"name", in.name}, {"value", in.value}, {"unit", in.unit}});
  }
  nlohmann::json j = {{"quantity", to_string(report.quantity)},
                      {"direction", to_string(report.direction)},
                      {"value", report.value},
                      {"formula", report.formula},
                      {"anchor", report.anchor},
                      {"inputs", inputs}};
  if (!report.note.empty()) j["note"] = report.note;
  return j;
}

BoundReport bound_report_from_json(const nlohmann::json& j) {
  try {
    BoundReport r;
    const auto q = j.at("quantity").get<std::string>();
    if (q == "dF") {
      r.quantity = Quantity::FlatDistance;
    } else if (q == "dGH") {
      r.quantity = Quantity::GromovHausdorff;
    } else {
      throw ParseError("bound report: unknown quantity '" + q + "'");
    }
    r.direction = j.at("direction").get<std::string>() == "lower" ? Direction::Lower
                                                                   : Direction::Upper;
    r.value = j.at("value").get<double>();
    r.formula = j.at("formula").get<std::string>();
    r.anchor = j.value("anchor", std::string{});
    r.note = j.value("note", std::string{});
    for (const auto& in : j.at("inputs")) {
      r.inputs.push_back({in.at("name").get<std::string>(), in.at("value").get<double>(),
                          in.value("unit", std::string{})});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bound report: ") + e.what());
  }
}

std::string bound_csv_header() { return "quantity,direction,value,formula,anchor"; }

std::string bound_csv_row(const BoundReport& report) {
  return to_string(report.quantity) + "," + to_string(report.direction) + "," +
         format_double(report.value) + ",\"" + report.formula + "\"," + report.anchor;
}

}  // namespace ifd
