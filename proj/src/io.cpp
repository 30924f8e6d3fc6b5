#include "lbd/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lbd {

namespace {

bool has_suffix(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

int next_pgm_int(std::istream& in, const std::string& path) {
    // plain PGM tokens, with '#' comments running to end of line
    while (true) {
        int c = in.peek();
        if (c == EOF) throw io_error(path + ": truncated PGM");
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        break;
    }
    long v;
    if (!(in >> v)) throw io_error(path + ": malformed PGM integer");
    return static_cast<int>(v);
}

Image read_pgm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error(path + ": cannot open");
    std::string magic;
    in >> magic;
    if (magic != "P2") throw io_error(path + ": only plain (P2) PGM is supported");
    int w = next_pgm_int(in, path);
    int h = next_pgm_int(in, path);
    int maxval = next_pgm_int(in, path);
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) throw io_error(path + ": bad PGM header");
    Image img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int v = next_pgm_int(in, path);
            if (v < 0 || v > maxval) throw io_error(path + ": sample out of range");
            img.at(x, y) = v;
        }
    img.set_integral(true);
    return img;
}

Image read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error(path + ": cannot open");
    std::string line;
    if (!std::getline(in, line)) throw io_error(path + ": empty file");
    int w = 0, h = 0;
    if (std::sscanf(line.c_str(), "%d,%d", &w, &h) != 2 || w < 1 || h < 1)
        throw io_error(path + ": expected a width,height header");
    Image img(w, h);
    for (int y = 0; y < h; ++y) {
        if (!std::getline(in, line)) throw io_error(path + ": missing rows");
        std::istringstream ls(line);
        std::string cell;
        for (int x = 0; x < w; ++x) {
            if (!std::getline(ls, cell, ',')) throw io_error(path + ": short row");
            try {
                img.at(x, y) = std::stod(cell);
            } catch (const std::exception&) {
                throw io_error(path + ": malformed sample '" + cell + "'");
            }
            if (!std::isfinite(img.at(x, y))) throw io_error(path + ": non-finite sample");
        }
    }
    img.set_integral(all_integral(img));
    return img;
}

}  // namespace

Image read_image(const std::string& path) {
    return has_suffix(path, ".pgm") ? read_pgm(path) : read_csv(path);
}

void write_image(const std::string& path, const Image& img) {
    std::ofstream out(path);
    if (!out) throw io_error(path + ": cannot open for writing");
    if (has_suffix(path, ".pgm")) {
        if (!all_integral(img)) throw io_error(path + ": PGM requires integral samples");
        double mx = 0.0, mn = 0.0;
        for (double v : img.samples()) {
            mx = std::max(mx, v);
            mn = std::min(mn, v);
        }
        if (mn < 0.0 || mx > 65535.0) throw io_error(path + ": PGM requires samples in [0, 65535]");
        out << "P2\n" << img.width() << " " << img.height() << "\n"
            << static_cast<long>(std::max(1.0, mx)) << "\n";
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x)
                out << static_cast<long>(img.at(x, y)) << (x + 1 == img.width() ? '\n' : ' ');
        }
    } else {
        out << img.width() << "," << img.height() << "\n";
        char buf[64];
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                std::snprintf(buf, sizeof(buf), "%.17g", img.at(x, y));
                out << buf << (x + 1 == img.width() ? '\n' : ',');
            }
        }
    }
    if (!out) throw io_error(path + ": write failed");
}

void write_detection_csv(const DetectionReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error(path + ": cannot open for writing");
    export_fig2(report, out);
    if (!out) throw io_error(path + ": write failed");
}

void append_metrics(const std::string& path, const std::string& json_line) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw io_error(path + ": cannot open for writing");
    out << json_line << "\n";
}

}  // namespace lbd
