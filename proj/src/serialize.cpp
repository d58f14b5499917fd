#include "framelab/serialize.hpp"

#include <cmath>
#include <sstream>

namespace framelab {

namespace {

nlohmann::json spec_to_json(const GridSpec& spec) {
  nlohmann::json box = nlohmann::json::array();
  for (int axis = 0; axis < spec.dimension(); ++axis) {
    box.push_back({spec.to_real(spec.box().lo[axis]), spec.to_real(spec.box().hi[axis])});
  }
  return {{"dimension", spec.dimension()},
          {"cell_width", spec.cell_width()},
          {"box", std::move(box)}};
}

GridSpec spec_from_json(const nlohmann::json& j) {
  const int dimension = j.at("dimension").get<int>();
  const double cell_width = j.at("cell_width").get<double>();
  std::vector<std::array<double, 2>> box;
  for (const auto& pair : j.at("box")) {
    box.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
  }
  return GridSpec::from_real_box(dimension, cell_width, box);
}

}  // namespace

nlohmann::json grid_function_to_json(const GridFunction& f, std::int64_t max_cells) {
  const GridSpec& spec = f.spec();
  nlohmann::json out;
  out["spec"] = spec_to_json(spec);
  auto box = f.support_box();
  nlohmann::json offset = nlohmann::json::array();
  nlohmann::json shape = nlohmann::json::array();
  nlohmann::json values = nlohmann::json::array();
  if (!box) {
    for (int axis = 0; axis < spec.dimension(); ++axis) {
      offset.push_back(spec.to_real(spec.box().lo[axis]));
      shape.push_back(0);
    }
  } else {
    std::int64_t total = 1;
    for (int axis = 0; axis < spec.dimension(); ++axis) {
      offset.push_back(spec.to_real(box->lo[axis]));
      shape.push_back(box->extent(axis));
      if (total > max_cells / std::max<std::int64_t>(1, box->extent(axis))) {
        std::ostringstream os;
        os << "dense serialized block would exceed " << max_cells
           << " cells; export the report instead, or build a more compact "
           << "instance (fewer levels or a smaller surrogate)";
        throw Error(Error::Code::scale, os.str());
      }
      total *= box->extent(axis);
    }
    std::vector<double> dense(static_cast<std::size_t>(total), 0.0);
    for (const auto& cv : f.cells()) {
      std::int64_t index = 0;
      for (int axis = 0; axis < spec.dimension(); ++axis) {
        index = index * box->extent(axis) + (cv.cell[axis] - box->lo[axis]);
      }
      dense[static_cast<std::size_t>(index)] = cv.value;
    }
    for (double v : dense) values.push_back(v);
  }
  out["offset"] = std::move(offset);
  out["shape"] = std::move(shape);
  out["values"] = std::move(values);
  return out;
}

GridFunction grid_function_from_json(const nlohmann::json& j) {
  GridSpec spec = spec_from_json(j.at("spec"));
  const auto& offset = j.at("offset");
  const auto& shape = j.at("shape");
  const auto& values = j.at("values");
  if (static_cast<int>(offset.size()) != spec.dimension() ||
      static_cast<int>(shape.size()) != spec.dimension()) {
    throw Error(Error::Code::io, "grid function offset/shape dimension mismatch");
  }
  CellIndex lo{};
  std::int64_t total = 1;
  std::array<std::int64_t, kMaxDimension> extents{};
  for (int axis = 0; axis < spec.dimension(); ++axis) {
    lo[axis] = spec.to_cells(offset.at(axis).get<double>());
    extents[axis] = shape.at(axis).get<std::int64_t>();
    if (extents[axis] < 0) throw Error(Error::Code::io, "negative shape entry");
    total *= extents[axis];
  }
  if (static_cast<std::int64_t>(values.size()) != total) {
    throw Error(Error::Code::io, "value count does not match the shape");
  }
  std::vector<CellValue> cells;
  for (std::int64_t flat = 0; flat < total; ++flat) {
    const double v = values.at(static_cast<std::size_t>(flat)).get<double>();
    if (v == 0.0) continue;
    CellIndex c = lo;
    std::int64_t rest = flat;
    for (int axis = spec.dimension() - 1; axis >= 0; --axis) {
      c[axis] += rest % extents[axis];
      rest /= extents[axis];
    }
    cells.push_back({c, v});
  }
  return GridFunction(spec, std::move(cells));
}

nlohmann::json frame_pair_to_json(const FramePair& frame, std::int64_t max_cells) {
  frame.validate();
  nlohmann::json out;
  out["p"] = frame.exponents.p();
  out["unconditional_claimed"] = frame.unconditional_claimed;
  nlohmann::json functions = nlohmann::json::array();
  nlohmann::json functionals = nlohmann::json::array();
  for (const auto& f : frame.functions) functions.push_back(grid_function_to_json(f, max_cells));
  for (const auto& f : frame.functionals) functionals.push_back(grid_function_to_json(f, max_cells));
  out["functions"] = std::move(functions);
  out["functionals"] = std::move(functionals);
  return out;
}

FramePair frame_pair_from_json(const nlohmann::json& j) {
  FramePair frame{Exponents(j.at("p").get<double>()), {}, {},
                  j.value("unconditional_claimed", false)};
  for (const auto& f : j.at("functions")) {
    frame.functions.push_back(grid_function_from_json(f));
  }
  for (const auto& f : j.at("functionals")) {
    frame.functionals.push_back(grid_function_from_json(f));
  }
  frame.validate();
  return frame;
}

nlohmann::json points_to_json(const std::vector<std::vector<double>>& points) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : points) out.push_back(p);
  return out;
}

std::vector<std::vector<double>> points_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(Error::Code::io, "points file must be a JSON array");
  std::vector<std::vector<double>> points;
  for (const auto& p : j) {
    if (!p.is_array() || p.empty()) {
      throw Error(Error::Code::io, "each point must be a nonempty coordinate array");
    }
    points.push_back(p.get<std::vector<double>>());
  }
  return points;
}

}  // namespace framelab
