#pragma once

#include <string>

#include "lbd/detect.hpp"
#include "lbd/image.hpp"

namespace lbd {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Formats by extension: ".pgm" is plain P2 (integral images only), anything
// else is the CSV grid ("width,height" header, then one raster line per y).
Image read_image(const std::string& path);
void write_image(const std::string& path, const Image& img);

void write_detection_csv(const DetectionReport& report, const std::string& path);

// One JSON object per line, appended.
void append_metrics(const std::string& path, const std::string& json_line);

}  // namespace lbd
