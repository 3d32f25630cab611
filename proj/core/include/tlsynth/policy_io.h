#ifndef TLSYNTH_POLICY_IO_H_
#define TLSYNTH_POLICY_IO_H_

#include <string>
#include <string_view>
#include <variant>

#include "tlsynth/policy.h"

namespace tlsynth {

using AnyPolicy = std::variant<DeterministicPolicy, RandomizedPolicy>;

// Window keys concatenate tokens oldest-first ("0110") when every input
// token is one character, and join them with commas otherwise.
std::string WindowKey(const Alphabet& inputs, std::span<const Symbol> window);

// Policy document: {horizon, inputs, outputs, kind, entries}. Every window
// must be present exactly once. A synthesis result document is accepted and
// yields its first policy. Throws Error(kParse) / Error(kValidation).
AnyPolicy LoadPolicy(std::string_view document);

std::string DumpPolicy(const DeterministicPolicy& policy);
std::string DumpPolicy(const RandomizedPolicy& policy);
std::string DumpPolicy(const AnyPolicy& policy);

}  // namespace tlsynth

#endif  // TLSYNTH_POLICY_IO_H_
