#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "areagraph/geometry.hpp"

namespace areagraph {

enum class Occupancy : std::uint8_t { Free = 0, Occupied = 1, Unknown = 2 };

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  friend bool operator==(const Pose2&, const Pose2&) = default;
};

/// Occupancy raster. Cell (0,0) is the bottom-left image pixel; its world pose
/// is `origin`. Row-major storage, row index grows with world y.
class GridMap {
 public:
  GridMap() = default;
  GridMap(int width, int height, double resolution, Pose2 origin = {},
          Occupancy fill = Occupancy::Free);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const Pose2& origin() const { return origin_; }

  bool in_bounds(int c, int r) const { return c >= 0 && r >= 0 && c < width_ && r < height_; }
  Occupancy at(int c, int r) const { return cells_[index(c, r)]; }
  void set(int c, int r, Occupancy v) { cells_[index(c, r)] = v; }
  bool is_free(int c, int r) const { return in_bounds(c, r) && at(c, r) == Occupancy::Free; }
  std::size_t index(int c, int r) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c);
  }
  const std::vector<Occupancy>& cells() const { return cells_; }
  std::size_t count(Occupancy v) const;

  Point2 pixel_to_world(Point2 px) const;
  Point2 world_to_pixel(Point2 w) const;
  /// Center of a cell in pixel coordinates.
  static Point2 cell_center(int c, int r) { return {c + 0.5, r + 0.5}; }

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 0.0;
  Pose2 origin_;
  std::vector<Occupancy> cells_;
};

/// map_server style metadata.
struct MapMetadata {
  std::string image;
  double resolution = 0.0;
  Pose2 origin;
  double occupied_thresh = 0.65;
  double free_thresh = 0.196;
  bool negate = false;
};

/// Obstacle points (occupied cell centers, pixel coordinates).
struct SiteSet {
  std::vector<Point2> sites;
  /// Map extent in pixels; the Voronoi diagram is clipped to it.
  double width = 0.0;
  double height = 0.0;
};

/// 8-bit grayscale raster, top row first (file order).
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

MapMetadata load_map_metadata(const std::filesystem::path& yaml_path);
void save_map_metadata(const std::filesystem::path& yaml_path, const MapMetadata& meta);

GrayImage load_gray_image(const std::filesystem::path& path);
void save_pgm(const std::filesystem::path& path, const GrayImage& img);

/// Classifies pixels using map_server semantics: p = (255 - v) / 255, or v / 255
/// when negated; p > occupied_thresh is Occupied, p < free_thresh is Free.
GridMap classify_image(const GrayImage& img, const MapMetadata& meta);
GrayImage to_image(const GridMap& map);

GridMap load_grid_map(const std::filesystem::path& image_path,
                      const std::filesystem::path& meta_path);
/// Loads a map from its YAML file, resolving `image` relative to it.
GridMap load_grid_map(const std::filesystem::path& meta_path);
/// Writes `<stem>.pgm` and `<stem>.yaml`.
void save_grid_map(const std::filesystem::path& stem, const GridMap& map);

SiteSet extract_sites(const GridMap& map);

double meters_to_pixels(double width_m, double resolution);

}  // namespace areagraph
