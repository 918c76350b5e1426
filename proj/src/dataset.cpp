#include "fcot/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fcot {

namespace fs = std::filesystem;

void write_ppm(const std::string& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_ppm: cannot open " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> row(static_cast<size_t>(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                const double v = std::clamp(img.at(c, y, x), 0.0, 1.0);
                row[static_cast<size_t>(x) * 3 + c] =
                    static_cast<unsigned char>(std::lround(v * 255.0));
            }
        }
        out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
    if (!out) throw std::runtime_error("write_ppm: write failed for " + path);
}

static void skip_ppm_whitespace(std::istream& in) {
    while (true) {
        const int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            return;
        }
    }
}

Image read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_ppm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P6") throw std::runtime_error("read_ppm: " + path + " is not binary PPM");
    int w = 0, h = 0, maxval = 0;
    skip_ppm_whitespace(in);
    in >> w;
    skip_ppm_whitespace(in);
    in >> h;
    skip_ppm_whitespace(in);
    in >> maxval;
    if (!in || w < 1 || h < 1 || maxval != 255) {
        throw std::runtime_error("read_ppm: unsupported header in " + path);
    }
    in.get();  // single whitespace after maxval
    Image img(h, w);
    std::vector<unsigned char> row(static_cast<size_t>(w) * 3);
    for (int y = 0; y < h; ++y) {
        in.read(reinterpret_cast<char*>(row.data()), row.size());
        if (!in) throw std::runtime_error("read_ppm: truncated pixel data in " + path);
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                img.at(c, y, x) = row[static_cast<size_t>(x) * 3 + c] / 255.0;
            }
        }
    }
    return img;
}

void write_boxes(const std::string& path, const std::vector<BBox>& boxes) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_boxes: cannot open " + path);
    for (const BBox& b : boxes) {
        std::fprintf(f, "%.4f,%.4f,%.4f,%.4f\n", b.x0, b.y0, b.width(), b.height());
    }
    std::fclose(f);
}

std::vector<BBox> read_boxes(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_boxes: cannot open " + path);
    std::vector<BBox> boxes;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::replace(line.begin(), line.end(), '\t', ' ');
        std::istringstream ss(line);
        double x, y, w, h;
        if (!(ss >> x >> y >> w >> h)) {
            throw std::runtime_error("read_boxes: malformed line " + std::to_string(lineno) +
                                     " in " + path);
        }
        boxes.push_back(BBox::from_xywh(x, y, w, h));
    }
    return boxes;
}

Dataset open_dataset(const std::string& dir) {
    Dataset ds;
    ds.ground_truth = read_boxes((fs::path(dir) / "groundtruth_rect.txt").string());
    const fs::path img_dir = fs::path(dir) / "img";
    for (size_t i = 1; i <= ds.ground_truth.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "%04zu.ppm", i);
        const fs::path p = img_dir / name;
        if (!fs::exists(p)) {
            throw std::runtime_error("open_dataset: missing frame " + p.string());
        }
        ds.frame_paths.push_back(p.string());
    }
    return ds;
}

void write_dataset(const std::string& dir, const std::vector<Image>& frames,
                   const std::vector<BBox>& boxes) {
    if (frames.size() != boxes.size()) {
        throw std::invalid_argument("write_dataset: frame/box count mismatch");
    }
    const fs::path img_dir = fs::path(dir) / "img";
    fs::create_directories(img_dir);
    for (size_t i = 0; i < frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "%04zu.ppm", i + 1);
        write_ppm((img_dir / name).string(), frames[i]);
    }
    write_boxes((fs::path(dir) / "groundtruth_rect.txt").string(), boxes);
}

}  // namespace fcot
