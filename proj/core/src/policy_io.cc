#include "tlsynth/policy_io.h"

#include <map>

#include "json.hpp"
#include "tlsynth/error.h"
#include "tlsynth/window_code.h"

namespace tlsynth {
namespace {

using nlohmann::ordered_json;

[[noreturn]] void FieldError(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kParse, "field '" + field + "': " + what);
}

const ordered_json& Require(const ordered_json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) FieldError(field, "missing");
  return *it;
}

std::string ScalarText(const ordered_json& v, const std::string& field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  FieldError(field, "expected a string or number");
}

std::vector<std::string> Tokens(const ordered_json& doc, const char* field) {
  const ordered_json& v = Require(doc, field);
  if (!v.is_array()) FieldError(field, "expected a list of tokens");
  std::vector<std::string> out;
  for (const auto& t : v) out.push_back(ScalarText(t, field));
  return out;
}

ordered_json Header(int horizon, const Alphabet& inputs, const Alphabet& outputs, const char* kind) {
  ordered_json doc;
  doc["horizon"] = horizon;
  doc["inputs"] = inputs.tokens();
  doc["outputs"] = outputs.tokens();
  doc["kind"] = kind;
  return doc;
}

}  // namespace

std::string WindowKey(const Alphabet& inputs, std::span<const Symbol> window) {
  std::string key;
  const bool compact = inputs.SingleCharTokens();
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (!compact && i > 0) key += ',';
    key += inputs.token(window[i]);
  }
  return key;
}

AnyPolicy LoadPolicy(std::string_view document) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(document);
  } catch (const ordered_json::parse_error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "policy document must be an object");
  // A synthesis result stands for its first reported policy.
  if (auto it = doc.find("policies"); it != doc.end()) {
    if (!it->is_array() || it->empty()) FieldError("policies", "expected a non-empty list");
    ordered_json first = it->front();
    doc = std::move(first);
    if (!doc.is_object()) FieldError("policies[0]", "expected an object");
  }

  const ordered_json& h = Require(doc, "horizon");
  if (!h.is_number_integer() || h.get<int>() < 1) FieldError("horizon", "expected a positive integer");
  const int horizon = h.get<int>();
  Alphabet inputs(Tokens(doc, "inputs"));
  Alphabet outputs(Tokens(doc, "outputs"));
  const ordered_json& kind_field = Require(doc, "kind");
  std::string kind = kind_field.is_string() ? kind_field.get<std::string>() : "";
  if (kind != "deterministic" && kind != "randomized") {
    FieldError("kind", "expected deterministic or randomized");
  }

  WindowCodec codec(inputs.size(), horizon, kMaxTableEntries);
  std::map<std::string, int64_t> code_of;
  for (int64_t c = 0; c < codec.count(); ++c) code_of[WindowKey(inputs, codec.Decode(c))] = c;

  const ordered_json& entries = Require(doc, "entries");
  if (!entries.is_object()) FieldError("entries", "expected an object");
  std::vector<bool> seen(codec.count(), false);
  std::vector<Symbol> det(kind == "deterministic" ? codec.count() : 0);
  std::vector<Rational> rand(kind == "randomized" ? codec.count() : 0);
  for (const auto& [key, value] : entries.items()) {
    std::string field = "entries." + key;
    auto it = code_of.find(key);
    if (it == code_of.end()) FieldError(field, "not a window of length " + std::to_string(horizon));
    if (seen[it->second]) FieldError(field, "duplicate window");
    seen[it->second] = true;
    std::string text = ScalarText(value, field);
    if (kind == "deterministic") {
      auto s = outputs.Find(text);
      if (!s) FieldError(field, "unknown output token '" + text + "'");
      det[it->second] = *s;
    } else {
      try {
        rand[it->second] = Rational::Parse(text);
      } catch (const Error& e) {
        FieldError(field, e.what());
      }
    }
  }
  for (int64_t c = 0; c < codec.count(); ++c) {
    if (!seen[c]) {
      throw Error(ErrorCode::kValidation, "missing entry for window " + WindowKey(inputs, codec.Decode(c)));
    }
  }
  if (kind == "deterministic") return DeterministicPolicy(horizon, inputs, outputs, std::move(det));
  return RandomizedPolicy(horizon, inputs, outputs, std::move(rand));
}

std::string DumpPolicy(const DeterministicPolicy& policy) {
  ordered_json doc = Header(policy.horizon(), policy.inputs(), policy.outputs(), "deterministic");
  WindowCodec codec(policy.inputs().size(), policy.horizon(), kMaxTableEntries);
  ordered_json entries = ordered_json::object();
  for (int64_t c = 0; c < codec.count(); ++c) {
    entries[WindowKey(policy.inputs(), codec.Decode(c))] = policy.outputs().token(policy.At(c));
  }
  doc["entries"] = entries;
  return doc.dump(2) + "\n";
}

std::string DumpPolicy(const RandomizedPolicy& policy) {
  ordered_json doc = Header(policy.horizon(), policy.inputs(), policy.outputs(), "randomized");
  WindowCodec codec(policy.inputs().size(), policy.horizon(), kMaxTableEntries);
  ordered_json entries = ordered_json::object();
  for (int64_t c = 0; c < codec.count(); ++c) {
    entries[WindowKey(policy.inputs(), codec.Decode(c))] = policy.At(c).ToString();
  }
  doc["entries"] = entries;
  return doc.dump(2) + "\n";
}

std::string DumpPolicy(const AnyPolicy& policy) {
  return std::visit([](const auto& p) { return DumpPolicy(p); }, policy);
}

}  // namespace tlsynth
