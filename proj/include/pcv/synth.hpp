#pragma once

// Seeded synthetic panoptic scenes for oracle runs and property tests.

#include "pcv/encode.hpp"
#include "pcv/panoptic.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace pcv {

enum class ShapeKind { Rectangle, Ellipse, Blob };
enum class ShapeFamily { Rectangle, Ellipse, Blob, Mixed };
enum class Occlusion { None, Stacked };

/// One thing instance before painting. Blob shapes are star-shaped with a
/// radius modulated by a few low harmonics.
struct ShapeInstance {
    ShapeKind kind = ShapeKind::Rectangle;
    CategoryId category = 1;
    Point2 center;
    double half_height = 1.0;
    double half_width = 1.0;
    std::vector<double> harmonics; ///< amplitude, phase pairs (Blob only)

    bool covers(int row, int col) const;
};

struct StuffBand {
    int first_row = 0; ///< band spans [first_row, next band's first_row)
    CategoryId category = 0;
};

struct SceneSpec {
    int height = 256;
    int width = 256;
    int min_instances = 0;
    int max_instances = 6;
    ShapeFamily shapes = ShapeFamily::Mixed;
    int min_scale = 8;   ///< smallest instance side, pixels
    int max_scale = 96;  ///< largest instance side, pixels
    Occlusion occlusion = Occlusion::None;
    /// Stacked mode: a new instance may hide at most this fraction of any earlier one.
    double max_hidden_fraction = 0.3;
    int stuff_bands = 2; ///< number of horizontal stuff bands, 1 to 3
    std::uint64_t seed = 0;
    int placement_attempts = 40;
};

/// Category vocabulary used by generated scenes: things 1-3, stuff 11-13.
CategoryTable synth_categories();

/// Paints stuff bands, then instances in order (later ones occlude earlier
/// ones). Instances left with no visible pixel are dropped. Stuff segments get
/// ids 1..n in band order, things the following ids in paint order.
PanopticAnnotation paint_scene(int height, int width, const std::vector<StuffBand>& bands,
                               const std::vector<ShapeInstance>& instances);

/// Deterministic in (spec, seed). Throws DomainError on an unusable spec and
/// when min_instances > 0 but no instance could be placed.
PanopticAnnotation generate(const SceneSpec& spec);

/// splitmix64 step; used to derive per-scene seeds from a corpus seed.
std::uint64_t mix_seed(std::uint64_t seed) noexcept;

} // namespace pcv
