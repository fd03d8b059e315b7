#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pfw/frame_verify.hpp"
#include "pfw/io.hpp"
#include "pfw/lawton.hpp"
#include "pfw/partition.hpp"

namespace pfw {

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 2,
  kExitPrecondition = 3,
  kExitInvariant = 4,
  kExitNoSolution = 5,
};

/// Frame checks on the stage-k surrogates over A: telescoping (J = 0, 1) for a
/// seeded random f on the level-f_level cells of the unit cell, L_J(chi) for
/// -8 <= J <= 5 and nested Parseval partial sums for chi over -8 <= n <= 5.
FrameReport frame_report(const Mask& mask, const PartitionData& pd, int stage, std::uint64_t seed,
                         int f_level = 4);

struct PipelineConfig {
  std::optional<std::vector<Point>> support;  // solve when set
  std::vector<Mask> masks;                    // otherwise verify these
  SolveConfig solve;
  int iters = 6;
  /// Frame checks run at min(iters, frame_stage).
  int frame_stage = 3;
  std::string out_dir;
};

/// reduce/verify -> solve or load -> cascade -> wavelet -> conjugate to A0 ->
/// QMF, telescope and Parseval checks. Writes partition.json, masks.json and
/// per mask i: mask_i.json, wavelet_mask_i.json, phi_i.{json,csv},
/// psi_i.{json,csv}, lj_i.csv, partial_i.csv, and report.json. Returns the
/// report.
io::Json run_pipeline(const PartitionData& pd, const PipelineConfig& cfg);

/// Command-line entry: subcommands reduce, solve, cascade, wavelet,
/// verify-filter, verify-frame, pipeline, export.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pfw
