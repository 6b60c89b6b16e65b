#ifndef ORDRANK_SPECS_HPP
#define ORDRANK_SPECS_HPP

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ordrank/errors.hpp"
#include "ordrank/link.hpp"
#include "ordrank/model.hpp"
#include "ordrank/numeric.hpp"
#include "ordrank/pattern.hpp"
#include "ordrank/pattern_analysis.hpp"

// Text forms used on the command line and in experiment configs, plus the JSON
// model descriptor.
//
// Link spec:    cubic | identity | tanhsig | logitnorm | logitlogistic  [":" scale]
// Pattern spec: abs:<beta> | sq:<beta> | uniform | weights:w1,...,wK
//               | min-unconstrained | min-monotone            [",K=" K]

namespace ordrank {

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline double parse_number(const std::string& s, const std::string& context) {
  try {
    return numeric::parse_exact_decimal(s);
  } catch (const DataError&) {
    throw ConfigError("bad number '" + s + "' in " + context);
  }
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

inline StrengthLink parse_link_spec(std::string_view spec) {
  const std::string text = detail::trim(spec);
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  double scale = 1.0;
  if (colon != std::string::npos) {
    scale = detail::parse_number(text.substr(colon + 1), "link spec '" + text + "'");
  }
  try {
    if (name == "cubic") return StrengthLink::cubic(scale);
    if (name == "identity") return StrengthLink::identity(scale);
    if (name == "tanhsig") return StrengthLink::tanh_sigmoid(scale);
    if (name == "logitnorm") return StrengthLink::logit_of_cdf(BaseCdf::standard_normal, scale);
    if (name == "logitlogistic") return StrengthLink::logit_of_cdf(BaseCdf::logistic, scale);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("link spec '") + text + "': " + e.what());
  }
  throw ConfigError("unknown link '" + name + "' (expected cubic|identity|tanhsig|logitnorm|logitlogistic)");
}

inline std::string link_spec_string(const StrengthLink& link) {
  std::string name;
  switch (link.kind()) {
    case LinkKind::cubic: name = "cubic"; break;
    case LinkKind::identity: name = "identity"; break;
    case LinkKind::tanh_sigmoid: name = "tanhsig"; break;
    case LinkKind::logit_of_cdf:
      name = link.base_cdf() == BaseCdf::standard_normal ? "logitnorm" : "logitlogistic";
      break;
    case LinkKind::custom: name = "custom-" + link.custom_name(); break;
  }
  if (link.scale() != 1.0) name += ":" + numeric::exact_decimal(link.scale());
  return name;
}

/// psi(k) = -beta |k| for k = 1..K.
inline PatternDistribution abs_pattern(double beta, int K) {
  std::vector<double> psi(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) psi[static_cast<std::size_t>(k - 1)] = -beta * k;
  return pattern_from_psi(psi);
}

/// psi(k) = -beta k^2 for k = 1..K.
inline PatternDistribution square_pattern(double beta, int K) {
  std::vector<double> psi(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) psi[static_cast<std::size_t>(k - 1)] = -beta * k * k;
  return pattern_from_psi(psi);
}

/// Parses a pattern spec. `K` is used unless the spec carries its own ",K=n";
/// `weights:` specs define K by their length.
inline PatternDistribution parse_pattern_spec(std::string_view spec, std::optional<int> K = std::nullopt) {
  std::string text = detail::trim(spec);
  const auto kpos = text.find(",K=");
  if (kpos != std::string::npos) {
    const double kv = detail::parse_number(text.substr(kpos + 3), "pattern spec '" + text + "'");
    if (kv != std::floor(kv)) throw ConfigError("K must be an integer in '" + text + "'");
    K = static_cast<int>(kv);
    text = text.substr(0, kpos);
  }
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? std::string() : text.substr(colon + 1);

  if (name == "weights") {
    std::vector<double> w;
    for (const auto& part : detail::split(arg, ',')) w.push_back(detail::parse_number(part, "weights"));
    try {
      return PatternDistribution::from_weights(w);
    } catch (const InvalidPattern& e) {
      throw ConfigError(std::string("pattern spec '") + text + "': " + e.what());
    }
  }
  if (!K) throw ConfigError("pattern spec '" + text + "' needs K (pass --K or append ,K=n)");
  if (*K < 1) throw ConfigError("K must be at least 1");
  try {
    if (name == "abs") return abs_pattern(detail::parse_number(arg, "abs pattern"), *K);
    if (name == "sq") return square_pattern(detail::parse_number(arg, "sq pattern"), *K);
    if (name == "uniform") return PatternDistribution::uniform(*K);
    if (name == "min-unconstrained") return minimal_snr_unconstrained(*K).pattern;
    if (name == "min-monotone") return minimal_snr_monotone(*K).pattern;
  } catch (const DomainError& e) {
    throw ConfigError(std::string("pattern spec '") + text + "': " + e.what());
  }
  throw ConfigError("unknown pattern '" + name +
                    "' (expected abs|sq|uniform|weights|min-unconstrained|min-monotone)");
}

// ---- JSON model descriptor -------------------------------------------------

inline nlohmann::json link_to_json(const StrengthLink& link) {
  nlohmann::json j;
  switch (link.kind()) {
    case LinkKind::cubic: j["kind"] = "cubic"; break;
    case LinkKind::identity: j["kind"] = "identity"; break;
    case LinkKind::tanh_sigmoid: j["kind"] = "tanh-sigmoid"; break;
    case LinkKind::logit_of_cdf:
      j["kind"] = "logit-of-cdf";
      j["base_cdf"] = link.base_cdf() == BaseCdf::standard_normal ? "standard-normal" : "logistic";
      break;
    case LinkKind::custom:
      throw ConfigError("custom strength links cannot be serialized");
  }
  j["scale"] = numeric::exact_decimal(link.scale());
  return j;
}

namespace detail {

inline double json_number(const nlohmann::json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number(v.get<std::string>(), what);
  throw ConfigError(what + " must be a number or decimal string");
}

}  // namespace detail

inline StrengthLink link_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("link descriptor needs a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  const double scale = j.contains("scale") ? detail::json_number(j.at("scale"), "link scale") : 1.0;
  try {
    if (kind == "cubic") return StrengthLink::cubic(scale);
    if (kind == "identity") return StrengthLink::identity(scale);
    if (kind == "tanh-sigmoid") return StrengthLink::tanh_sigmoid(scale);
    if (kind == "logit-of-cdf") {
      const std::string base = j.value("base_cdf", std::string("logistic"));
      if (base == "logistic") return StrengthLink::logit_of_cdf(BaseCdf::logistic, scale);
      if (base == "standard-normal") return StrengthLink::logit_of_cdf(BaseCdf::standard_normal, scale);
      throw ConfigError("unknown base_cdf '" + base + "'");
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown link kind '" + kind + "'");
}

inline nlohmann::json pattern_to_json(const PatternDistribution& pattern) {
  nlohmann::json weights = nlohmann::json::array();
  for (double w : pattern.weights()) weights.push_back(numeric::exact_decimal(w));
  return {{"K", pattern.K()}, {"weights", weights}};
}

inline PatternDistribution pattern_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("pattern descriptor must be an object");
  std::vector<double> values;
  const bool has_weights = j.contains("weights");
  const auto& arr = has_weights ? j.at("weights") : j.at("psi");
  if (!arr.is_array()) throw ConfigError("pattern weights/psi must be an array");
  for (const auto& v : arr) values.push_back(detail::json_number(v, "pattern entry"));
  if (j.contains("K") && j.at("K").get<int>() != static_cast<int>(values.size())) {
    throw ConfigError("pattern K does not match the number of entries");
  }
  try {
    return has_weights ? PatternDistribution::from_weights(values) : pattern_from_psi(values);
  } catch (const InvalidPattern& e) {
    throw ConfigError(e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

inline nlohmann::json model_to_json(const OrdinalModel& model) {
  return {{"link", link_to_json(model.link())}, {"pattern", pattern_to_json(model.pattern())}};
}

inline OrdinalModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("link") || !j.contains("pattern")) {
    throw ConfigError("model descriptor needs 'link' and 'pattern'");
  }
  return {link_from_json(j.at("link")), pattern_from_json(j.at("pattern"))};
}

}  // namespace ordrank

#endif  // ORDRANK_SPECS_HPP
