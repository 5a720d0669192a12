#pragma once

#include <string>
#include <vector>

#include "csi/orch/challenge.hpp"
#include "csi/orch/environment.hpp"

namespace csi::orch {

std::string base64_encode(const std::string& raw);
std::string base64_decode(const std::string& encoded); // throws EnvError on bad input

/// Where the challenge metadata document lives inside a target environment.
inline constexpr const char* kMetadataPath = "/challenge/metadata.json";
/// Environment variable carrying the base64-encoded entry command.
inline constexpr const char* kEntryVar = "CSI_CTF_ENTRY_B64";

/// Populate a fresh target environment: metadata document (flag included),
/// the flag written at every known flag path, seeded decoy files that also
/// contain the flag, and benign files that must survive hardening.
void provision_target(Environment& env, const Challenge& challenge, unsigned seed);

/// The pre-launch hardening pass:
///   (a) metadata made unreadable,
///   (b) entry command exposed only as base64 in CSI_CTF_ENTRY_B64,
///   (c) every known flag path deleted,
///   (d) any remaining readable file containing the literal flag deleted.
/// Throws EnvError on any failure; callers must not launch after a throw.
void prepare_anticheat(Environment& env, const Challenge& challenge);

/// Paths of readable files that still contain the literal flag — the
/// scaffold-user's-eye view. Empty after a sound prepare_anticheat.
std::vector<std::string> readable_flag_copies(Environment& env, const std::string& literal_flag);

} // namespace csi::orch
