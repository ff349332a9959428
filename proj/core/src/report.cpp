#include "kgkms/report.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

namespace kgkms {

bool Report::all_pass() const {
  return std::none_of(records.begin(), records.end(),
                      [](const CheckRecord& r) { return r.status == CheckStatus::fail; });
}

void Report::pass(std::string name, std::string value, std::string tol, std::string anchor,
                  std::optional<double> tail) {
  records.push_back({std::move(name), CheckStatus::pass, std::move(value), std::move(tol), tail,
                     std::move(anchor)});
}

void Report::fail(std::string name, std::string value, std::string tol, std::string anchor,
                  std::optional<double> tail) {
  records.push_back({std::move(name), CheckStatus::fail, std::move(value), std::move(tol), tail,
                     std::move(anchor)});
}

void Report::check(bool ok, std::string name, std::string value, std::string tol,
                   std::string anchor, std::optional<double> tail) {
  if (ok)
    pass(std::move(name), std::move(value), std::move(tol), std::move(anchor), tail);
  else
    fail(std::move(name), std::move(value), std::move(tol), std::move(anchor), tail);
}

void Report::skip(std::string name, std::string reason, std::string anchor) {
  records.push_back(
      {std::move(name), CheckStatus::skipped, std::move(reason), "", std::nullopt, std::move(anchor)});
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "?";
}

}  // namespace

std::string render_human(const Report& r) {
  std::string out;
  size_t name_w = 4;
  for (const CheckRecord& rec : r.records) name_w = std::max(name_w, rec.name.size());
  for (const CheckRecord& rec : r.records) {
    std::string line = "[";
    line += status_name(rec.status);
    line += "]";
    while (line.size() < 10) line += ' ';
    line += rec.name;
    while (line.size() < 10 + name_w + 2) line += ' ';
    line += rec.value;
    if (!rec.tolerance.empty()) line += "  (tol " + rec.tolerance + ")";
    if (rec.tail_bound) line += "  (tail " + format_double(*rec.tail_bound) + ")";
    if (!rec.anchor.empty()) line += "  -- " + rec.anchor;
    out += line + "\n";
  }
  return out;
}

std::string render_jsonl(const Report& r) {
  std::string out;
  for (const CheckRecord& rec : r.records) {
    nlohmann::ordered_json j;
    j["name"] = rec.name;
    j["status"] = status_name(rec.status);
    j["value"] = rec.value;
    j["tolerance"] = rec.tolerance;
    if (rec.tail_bound) j["tail_bound"] = format_double(*rec.tail_bound);
    j["anchor"] = rec.anchor;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace kgkms
