#pragma once

#include <string>
#include <vector>

#include "fcot/bbox.hpp"
#include "fcot/image.hpp"

namespace fcot {

// Binary PPM (P6, 8 bit). Values are quantized with round-to-nearest.
void write_ppm(const std::string& path, const Image& img);
Image read_ppm(const std::string& path);

// One "x,y,w,h" line per box, 0-based pixel coordinates, 4 decimal places.
void write_boxes(const std::string& path, const std::vector<BBox>& boxes);
std::vector<BBox> read_boxes(const std::string& path);

struct Dataset {
    std::vector<std::string> frame_paths;  // img/0001.ppm, ...
    std::vector<BBox> ground_truth;
};

// Directory layout: <dir>/img/0001.ppm ... and <dir>/groundtruth_rect.txt.
Dataset open_dataset(const std::string& dir);
void write_dataset(const std::string& dir, const std::vector<Image>& frames,
                   const std::vector<BBox>& boxes);

}  // namespace fcot
