#include "areagraph/mapio.hpp"

#include <png.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "areagraph/error.hpp"

namespace areagraph {

GridMap::GridMap(int width, int height, double resolution, Pose2 origin, Occupancy fill)
    : width_(width), height_(height), resolution_(resolution), origin_(origin) {
  if (width <= 0 || height <= 0) throw InvalidArgument("mapio", "map dimensions must be positive");
  if (!(resolution > 0.0)) throw InvalidArgument("mapio", "resolution must be positive");
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

std::size_t GridMap::count(Occupancy v) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), v));
}

Point2 GridMap::pixel_to_world(Point2 px) const {
  const double c = std::cos(origin_.theta);
  const double s = std::sin(origin_.theta);
  const Point2 m = px * resolution_;
  return {origin_.x + c * m.x - s * m.y, origin_.y + s * m.x + c * m.y};
}

Point2 GridMap::world_to_pixel(Point2 w) const {
  const double c = std::cos(origin_.theta);
  const double s = std::sin(origin_.theta);
  const Point2 d{w.x - origin_.x, w.y - origin_.y};
  return Point2{c * d.x + s * d.y, -s * d.x + c * d.y} / resolution_;
}

MapMetadata load_map_metadata(const std::filesystem::path& yaml_path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(yaml_path.string());
  } catch (const YAML::Exception& e) {
    throw IoError("mapio", "cannot read metadata " + yaml_path.string() + ": " + e.what());
  }
  MapMetadata meta;
  try {
    if (root["image"]) meta.image = root["image"].as<std::string>();
    if (!root["resolution"]) throw IoError("mapio", "metadata lacks resolution");
    meta.resolution = root["resolution"].as<double>();
    if (auto o = root["origin"]) {
      if (!o.IsSequence() || o.size() < 2) throw IoError("mapio", "origin must be [x, y, theta]");
      meta.origin.x = o[0].as<double>();
      meta.origin.y = o[1].as<double>();
      meta.origin.theta = o.size() > 2 ? o[2].as<double>() : 0.0;
    }
    if (root["occupied_thresh"]) meta.occupied_thresh = root["occupied_thresh"].as<double>();
    if (root["free_thresh"]) meta.free_thresh = root["free_thresh"].as<double>();
    if (root["negate"]) meta.negate = root["negate"].as<int>() != 0;
  } catch (const YAML::Exception& e) {
    throw IoError("mapio", "malformed metadata " + yaml_path.string() + ": " + e.what());
  }
  if (!(meta.resolution > 0.0))
    throw InvalidArgument("mapio", "resolution must be positive in " + yaml_path.string());
  return meta;
}

void save_map_metadata(const std::filesystem::path& yaml_path, const MapMetadata& meta) {
  std::ofstream out(yaml_path);
  if (!out) throw IoError("mapio", "cannot write " + yaml_path.string());
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "image: %s\nresolution: %.6f\norigin: [%.6f, %.6f, %.6f]\n"
                "negate: %d\noccupied_thresh: %.3f\nfree_thresh: %.3f\n",
                meta.image.c_str(), meta.resolution, meta.origin.x, meta.origin.y,
                meta.origin.theta, meta.negate ? 1 : 0, meta.occupied_thresh, meta.free_thresh);
  out << buf;
}

namespace {

// Skips whitespace and '#' comments in a PNM header.
int read_pnm_int(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int v = -1;
  in >> v;
  if (!in) throw IoError("mapio", "corrupt PGM header");
  return v;
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("mapio", "cannot open " + path.string());
  std::string magic(2, '\0');
  in.read(magic.data(), 2);
  if (magic != "P5" && magic != "P2") throw IoError("mapio", "not a PGM file: " + path.string());
  GrayImage img;
  img.width = read_pnm_int(in);
  img.height = read_pnm_int(in);
  const int maxval = read_pnm_int(in);
  if (img.width <= 0 || img.height <= 0 || maxval <= 0 || maxval > 255)
    throw IoError("mapio", "unsupported PGM dimensions or depth in " + path.string());
  const std::size_t n = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  img.pixels.resize(n);
  if (magic == "P5") {
    in.get();  // single whitespace after maxval
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
      throw IoError("mapio", "truncated PGM data in " + path.string());
  } else {
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(read_pnm_int(in));
  }
  if (maxval != 255) {
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(std::lround(p * 255.0 / maxval));
  }
  return img;
}

GrayImage load_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str()))
    throw IoError("mapio", "cannot read PNG " + path.string() + ": " + image.message);
  image.format = PNG_FORMAT_GRAY;
  GrayImage img;
  img.width = static_cast<int>(image.width);
  img.height = static_cast<int>(image.height);
  img.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, img.pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError("mapio", "corrupt PNG " + path.string());
  }
  return img;
}

}  // namespace

GrayImage load_gray_image(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") return load_png(path);
  return load_pgm(path);
}

void save_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("mapio", "cannot write " + path.string());
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
}

GridMap classify_image(const GrayImage& img, const MapMetadata& meta) {
  if (img.pixels.size() != static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height))
    throw InvalidArgument("mapio", "image/metadata dimension mismatch");
  GridMap map(img.width, img.height, meta.resolution, meta.origin);
  for (int row = 0; row < img.height; ++row) {
    const int r = img.height - 1 - row;
    for (int c = 0; c < img.width; ++c) {
      const double v = img.pixels[static_cast<std::size_t>(row) * img.width + c];
      const double p = meta.negate ? v / 255.0 : (255.0 - v) / 255.0;
      Occupancy occ = Occupancy::Unknown;
      if (p > meta.occupied_thresh) {
        occ = Occupancy::Occupied;
      } else if (p < meta.free_thresh) {
        occ = Occupancy::Free;
      }
      map.set(c, r, occ);
    }
  }
  return map;
}

GrayImage to_image(const GridMap& map) {
  GrayImage img;
  img.width = map.width();
  img.height = map.height();
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  for (int r = 0; r < map.height(); ++r) {
    const int row = map.height() - 1 - r;
    for (int c = 0; c < map.width(); ++c) {
      std::uint8_t v = 205;
      switch (map.at(c, r)) {
        case Occupancy::Free: v = 254; break;
        case Occupancy::Occupied: v = 0; break;
        case Occupancy::Unknown: v = 205; break;
      }
      img.pixels[static_cast<std::size_t>(row) * img.width + c] = v;
    }
  }
  return img;
}

GridMap load_grid_map(const std::filesystem::path& image_path,
                      const std::filesystem::path& meta_path) {
  const MapMetadata meta = load_map_metadata(meta_path);
  return classify_image(load_gray_image(image_path), meta);
}

GridMap load_grid_map(const std::filesystem::path& meta_path) {
  const MapMetadata meta = load_map_metadata(meta_path);
  if (meta.image.empty()) throw IoError("mapio", "metadata lacks image field");
  std::filesystem::path image = meta.image;
  if (image.is_relative()) image = meta_path.parent_path() / image;
  return classify_image(load_gray_image(image), meta);
}

void save_grid_map(const std::filesystem::path& stem, const GridMap& map) {
  auto pgm = stem;
  pgm += ".pgm";
  auto yaml = stem;
  yaml += ".yaml";
  save_pgm(pgm, to_image(map));
  MapMetadata meta;
  meta.image = pgm.filename().string();
  meta.resolution = map.resolution();
  meta.origin = map.origin();
  save_map_metadata(yaml, meta);
}

SiteSet extract_sites(const GridMap& map) {
  SiteSet out;
  out.width = map.width();
  out.height = map.height();
  for (int r = 0; r < map.height(); ++r)
    for (int c = 0; c < map.width(); ++c)
      if (map.at(c, r) == Occupancy::Occupied) out.sites.push_back(GridMap::cell_center(c, r));
  if (out.sites.empty()) throw DegenerateInput("extract_sites", "map has no occupied cells");
  return out;
}

double meters_to_pixels(double width_m, double resolution) {
  if (!(resolution > 0.0)) throw InvalidArgument("meters_to_pixels", "resolution must be positive");
  if (width_m < 0.0) throw InvalidArgument("meters_to_pixels", "width must be non-negative");
  return width_m / resolution;
}

}  // namespace areagraph
