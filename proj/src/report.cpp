#include "fdtlab/report.hpp"

#include <algorithm>
#include <charconv>
#include <system_error>
#include <tuple>
#include <utility>

#include <json.hpp>

namespace fdtlab {

namespace {

std::vector<const CheckRecord*> sorted_view(const std::vector<CheckRecord>& records) {
  std::vector<const CheckRecord*> view;
  view.reserve(records.size());
  for (const CheckRecord& rec : records) view.push_back(&rec);
  std::sort(view.begin(), view.end(), [](const CheckRecord* a, const CheckRecord* b) {
    return std::tie(a->check, a->family, a->params, a->residual) <
           std::tie(b->check, b->family, b->params, b->residual);
  });
  return view;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

void FdtReport::add(CheckRecord rec) { records.push_back(std::move(rec)); }

void FdtReport::add(std::string check, std::string family, std::string params,
                    double residual, double tolerance) {
  records.push_back({std::move(check), std::move(family), std::move(params), residual,
                     tolerance, residual <= tolerance});
}

void FdtReport::merge(const FdtReport& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
}

bool FdtReport::all_pass() const {
  return std::all_of(records.begin(), records.end(),
                     [](const CheckRecord& rec) { return rec.pass; });
}

int FdtReport::fail_count() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(),
                                        [](const CheckRecord& r) { return !r.pass; }));
}

std::string FdtReport::to_csv() const {
  std::string out = "check,family,param_json,residual,tolerance,verdict\n";
  for (const CheckRecord* rec : sorted_view(records)) {
    out += csv_quote(rec->check);
    out += ',';
    out += csv_quote(rec->family);
    out += ',';
    out += csv_quote(rec->params);
    out += ',';
    out += format_double(rec->residual);
    out += ',';
    out += format_double(rec->tolerance);
    out += ',';
    out += rec->pass ? "pass" : "fail";
    out += '\n';
  }
  return out;
}

std::string FdtReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["records"] = nlohmann::ordered_json::array();
  for (const CheckRecord* rec : sorted_view(records)) {
    nlohmann::ordered_json row;
    row["check"] = rec->check;
    row["family"] = rec->family;
    if (rec->params.empty()) {
      row["params"] = nlohmann::ordered_json::object();
    } else {
      auto parsed = nlohmann::ordered_json::parse(rec->params, nullptr, false);
      if (parsed.is_discarded()) {
        row["params"] = rec->params;
      } else {
        row["params"] = std::move(parsed);
      }
    }
    row["residual"] = rec->residual;
    row["tolerance"] = rec->tolerance;
    row["verdict"] = rec->pass ? "pass" : "fail";
    doc["records"].push_back(std::move(row));
  }
  doc["all_pass"] = all_pass();
  doc["fail_count"] = fail_count();
  return doc.dump(2) + "\n";
}

}  // namespace fdtlab
