#ifndef FRAMELAB_SERIALIZE_HPP
#define FRAMELAB_SERIALIZE_HPP

#include "json.hpp"

#include "framelab/frame.hpp"
#include "framelab/grid.hpp"
#include "framelab/separation.hpp"

namespace framelab {

// Canonical grid-function form: spec, real offset of the bounding block, its
// shape, and row-major values (zeros included). Sparse in memory, dense on
// the wire; the cell guard refuses blocks whose dense form would be absurd.
nlohmann::json grid_function_to_json(const GridFunction& f,
                                     std::int64_t max_cells = 8 << 20);
GridFunction grid_function_from_json(const nlohmann::json& j);

nlohmann::json frame_pair_to_json(const FramePair& frame,
                                  std::int64_t max_cells = 8 << 20);
FramePair frame_pair_from_json(const nlohmann::json& j);

// Point families are arrays of coordinate arrays.
nlohmann::json points_to_json(const std::vector<std::vector<double>>& points);
std::vector<std::vector<double>> points_from_json(const nlohmann::json& j);

}  // namespace framelab

#endif
