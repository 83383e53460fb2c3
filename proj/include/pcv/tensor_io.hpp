#pragma once

// Raw tensor interchange for bringing external network outputs.
//
// Layout, all integers little-endian:
//   bytes 0..3   magic "PCVT"
//   bytes 4..7   uint32 length N of the JSON header
//   N bytes      JSON header: {"shape": [C, H, W], "dtype": "float32" | "float64" | "int32",
//                              "layout": "CHW", "ignore_mask": bool, "legend": string}
//   C*H*W values in channel-major order
//   H*W uint8    ignore flags, present iff "ignore_mask" is true
//
// Vote tensors use C = K + 1 with channel K the abstention class. Semantic
// maps use C = 1, dtype int32, value -1 for void.

#include "pcv/aggregate.hpp"
#include "pcv/panoptic.hpp"
#include "pcv/png.hpp"

#include <filesystem>
#include <string>

namespace pcv {

enum class TensorDtype { Float32, Float64, Int32 };

void write_vote_tensor(const std::filesystem::path& path, const VoteTensor& votes,
                       TensorDtype dtype = TensorDtype::Float32);
VoteTensor read_vote_tensor(const std::filesystem::path& path);

void write_label_map(const std::filesystem::path& path, const Plane<CategoryId>& labels);
Plane<CategoryId> read_label_map(const std::filesystem::path& path);

} // namespace pcv
