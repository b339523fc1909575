#include "areagraph/render.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>

#include "areagraph/error.hpp"

namespace areagraph {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string hex(std::array<std::uint8_t, 3> c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

class Svg {
 public:
  explicit Svg(int height) : h_(height) {}

  std::string pt(Point2 p) const { return fmt(p.x) + "," + fmt(h_ - p.y); }

  std::string ring_path(const Ring& ring) const {
    std::string d;
    for (std::size_t i = 0; i < ring.size(); ++i) d += (i == 0 ? "M" : "L") + pt(ring[i]) + " ";
    return d + "Z ";
  }

  std::string polyline(const std::vector<Point2>& pts) const {
    std::string s;
    for (Point2 p : pts) s += pt(p) + " ";
    return s;
  }

 private:
  int h_;
};

// Horizontal runs of cells with one occupancy value, drawn as rects.
void cell_runs(std::string& out, const GridMap& map, Occupancy v, const char* fill) {
  out += "<g fill=\"" + std::string(fill) + "\">\n";
  for (int r = 0; r < map.height(); ++r) {
    const int y = map.height() - 1 - r;
    for (int c = 0; c < map.width();) {
      if (map.at(c, r) != v) {
        ++c;
        continue;
      }
      int e = c;
      while (e < map.width() && map.at(e, r) == v) ++e;
      out += "<rect x=\"" + std::to_string(c) + "\" y=\"" + std::to_string(y) + "\" width=\"" +
             std::to_string(e - c) + "\" height=\"1\"/>\n";
      c = e;
    }
  }
  out += "</g>\n";
}

}  // namespace

std::array<std::uint8_t, 3> area_color(const Area& a) {
  std::uint64_t h = static_cast<std::uint64_t>(a.room_id >= 0 ? a.room_id : 1000 + a.id);
  h = (h + 0x9e3779b97f4a7c15ULL) * 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 31;
  // Keep colors light enough for walls and paths to stay visible.
  return {static_cast<std::uint8_t>(90 + (h & 0xff) % 150),
          static_cast<std::uint8_t>(90 + ((h >> 8) & 0xff) % 150),
          static_cast<std::uint8_t>(90 + ((h >> 16) & 0xff) % 150)};
}

std::string render_svg(const GridMap& map, const AreaGraph& ag, const SvgLayers& layers) {
  const Svg svg(map.height());
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(map.width()) +
         "\" height=\"" + std::to_string(map.height()) + "\" viewBox=\"0 0 " +
         std::to_string(map.width()) + " " + std::to_string(map.height()) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  cell_runs(out, map, Occupancy::Unknown, "#cdcdcd");

  out += "<g fill-rule=\"evenodd\" fill-opacity=\"0.75\" stroke=\"#555555\" stroke-width=\"0.3\">\n";
  for (const Area& a : ag.areas) {
    std::string d;
    for (const Polygon& p : a.polygons) {
      d += svg.ring_path(p.outer);
      for (const Ring& h : p.holes) d += svg.ring_path(h);
    }
    out += "<path id=\"area" + std::to_string(a.id) + "\" fill=\"" + hex(area_color(a)) +
           "\" d=\"" + d + "\"/>\n";
  }
  out += "</g>\n";
  cell_runs(out, map, Occupancy::Occupied, "#202020");

  if (layers.graph) {
    out += "<g fill=\"none\" stroke=\"#1f4fd1\" stroke-width=\"0.6\">\n";
    for (int e : layers.graph->alive_edges())
      out += "<polyline points=\"" + svg.polyline(layers.graph->edge(e).path.points) + "\"/>\n";
    out += "</g>\n";
  }
  if (layers.passages) {
    out += "<g stroke=\"#d11f1f\" stroke-width=\"1\" fill=\"#d11f1f\">\n";
    for (const Passage& p : ag.passages) {
      out += "<line x1=\"" + fmt(p.segment.a.x) + "\" y1=\"" + fmt(map.height() - p.segment.a.y) +
             "\" x2=\"" + fmt(p.segment.b.x) + "\" y2=\"" + fmt(map.height() - p.segment.b.y) +
             "\"/>\n";
      out += "<circle cx=\"" + fmt(p.waypoint.x) + "\" cy=\"" + fmt(map.height() - p.waypoint.y) +
             "\" r=\"1.5\"/>\n";
    }
    out += "</g>\n";
  }
  static const char* kPathColors[] = {"#0a8f2a", "#e07b00", "#7a1fd1"};
  for (std::size_t i = 0; i < layers.paths.size(); ++i)
    out += "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" +
           std::string(kPathColors[i % 3]) + "\" points=\"" + svg.polyline(layers.paths[i]) +
           "\"/>\n";
  out += "</svg>\n";
  return out;
}

void save_segmentation_png(const std::filesystem::path& path, const GridMap& map,
                           const AreaGraph& ag) {
  const int w = map.width();
  const int h = map.height();
  std::vector<std::array<std::uint8_t, 3>> colors;
  for (const Area& a : ag.areas) colors.push_back(area_color(a));
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      std::array<std::uint8_t, 3> px{255, 255, 255};
      const Occupancy o = map.at(c, r);
      if (o == Occupancy::Occupied)
        px = {0, 0, 0};
      else if (o == Occupancy::Unknown)
        px = {205, 205, 205};
      else if (const int l = ag.label(c, r); l >= 0)
        px = colors[l];
      const std::size_t i = (static_cast<std::size_t>(h - 1 - r) * w + c) * 3;
      rgb[i] = px[0];
      rgb[i + 1] = px[1];
      rgb[i + 2] = px[2];
    }
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, rgb.data(), 0, nullptr))
    throw IoError("render", "cannot write " + path.string() + ": " + image.message);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("io", "cannot open " + path.string());
  f << text;
  if (!f) throw IoError("io", "cannot write " + path.string());
}

}  // namespace areagraph
