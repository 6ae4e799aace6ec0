#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wvgeom/blochgeo.hpp"

namespace wvgeom::svg {

/// Orthographic view of a scene on a 1000×1000 canvas. `view_axis` points
/// from the sphere centre toward the viewer; arcs on the far hemisphere are
/// dashed. Throws InvalidArgument for a zero view axis.
std::string render_scene(const blochgeo::SceneGraph& scene,
                         const Eigen::Vector3d& view_axis = Eigen::Vector3d::UnitX());

struct Curve {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Heatmap of values[row][col] with rows along y and columns along x, plus
/// overlaid polylines in data coordinates. NaN cells are left blank.
std::string render_heatmap(const std::vector<double>& x_grid, const std::vector<double>& y_grid,
                           const std::vector<std::vector<double>>& values,
                           const std::vector<Curve>& curves, const std::string& title);

std::string xml_escape(const std::string& s);

}  // namespace wvgeom::svg
