#include "pmeans/io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace pmeans {

namespace {

template <typename T>
T parse_token(std::string_view tok, const std::string& whole) {
  while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
  while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
  T value{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw std::invalid_argument("cannot parse list '" + whole + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::string_view rest(text);
  for (;;) {
    const auto comma = rest.find(',');
    out.push_back(parse_token<T>(rest.substr(0, comma), text));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

nlohmann::json to_json(const RandomDiscreteSample& p) {
  return {{"schema", kSchemaVersion},
          {"weights", p.weights},
          {"defect", p.defect},
          {"order", to_string(p.order)}};
}

RandomDiscreteSample sample_from_json(const nlohmann::json& j) {
  try {
    if (j.contains("schema") && j.at("schema").get<int>() != kSchemaVersion) {
      throw std::invalid_argument("unsupported schema version");
    }
    RandomDiscreteSample p;
    p.weights = j.at("weights").get<std::vector<double>>();
    p.defect = j.value("defect", 0.0);
    p.order = order_tag_from_string(j.value("order", std::string("as_constructed")));
    validate(p);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed sample: ") + e.what());
  } catch (const InvariantViolation& e) {
    throw std::invalid_argument(std::string("invalid sample: ") + e.what());
  }
}

std::vector<double> parse_real_list(const std::string& text) { return parse_list<double>(text); }

Composition parse_composition(const std::string& text) {
  std::vector<std::size_t> parts;
  for (long long v : parse_list<long long>(text)) {
    if (v < 1) throw std::invalid_argument("composition parts must be positive integers");
    parts.push_back(static_cast<std::size_t>(v));
  }
  return Composition(std::move(parts));
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace pmeans
