#pragma once

#include <cstdint>
#include <string>

#include "cnsdecay/params.hpp"
#include "cnsdecay/state.hpp"

namespace cnsdecay {

/// Binary snapshot layout (all little-endian):
///   char[4]  magic "CNSD"
///   u32      version (kCheckpointVersion)
///   i64      N
///   f64      L, gamma, mu, lambda, t
///   f64[N^3] rho, then m1, m2, m3, each in row-major (x slowest) order.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  int points = 0;
  double box_length = 0.0;
  FluidParams params;
  double t = 0.0;
  RealState fields;

  PerturbationState to_state() const;
};

void write_checkpoint(const std::string& path, const PerturbationState& state, const FluidParams& params);
/// Throws FormatError on a bad magic, unsupported version, inconsistent
/// header or truncated payload.
Checkpoint read_checkpoint(const std::string& path);

}  // namespace cnsdecay
