#include "curveclass/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "curveclass/errors.hpp"

namespace curveclass {

namespace {

// next whitespace-delimited token, skipping '#' comment lines
int next_pnm_int(std::istream& in) {
    while (in) {
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
    if (!in || v < 0) throw IoFailure("malformed PNM header");
    return v;
}

}  // namespace

GrayImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path);
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || (m1 != '2' && m1 != '5')) throw IoFailure("not a PGM file: " + path);
    const bool binary = (m1 == '5');

    const int w = next_pnm_int(in);
    const int h = next_pnm_int(in);
    const int maxval = next_pnm_int(in);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) throw IoFailure("bad PGM dims: " + path);

    GrayImage img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<size_t>(w) * h);

    if (binary) {
        in.get();  // single whitespace after maxval
        const int bytes = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> raw(static_cast<size_t>(w) * h * bytes);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (!in) throw IoFailure("truncated PGM: " + path);
        for (size_t i = 0; i < img.pixels.size(); i++) {
            const int v = bytes == 2 ? (raw[2 * i] << 8) | raw[2 * i + 1] : raw[i];
            img.pixels[i] = static_cast<double>(v) / maxval;
        }
    } else {
        for (size_t i = 0; i < img.pixels.size(); i++) {
            const int v = next_pnm_int(in);
            img.pixels[i] = static_cast<double>(v) / maxval;
        }
    }
    return img;
}

GrayImage load_png(const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw IoFailure("cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw IoFailure("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw IoFailure("PNG decode failed: " + path);
    }

    png_init_io(png, fp);
    png_read_info(png, info);

    // normalize everything to 8-bit gray
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    const png_byte color = png_get_color_type(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (color & PNG_COLOR_MASK_COLOR) png_set_rgb_to_gray(png, 1, -1, -1);
    png_read_update_info(png, info);

    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));

    std::vector<unsigned char> row(png_get_rowbytes(png, info));
    GrayImage img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<size_t>(w) * h);
    for (int y = 0; y < h; y++) {
        png_read_row(png, row.data(), nullptr);
        for (int x = 0; x < w; x++) img.pixels[static_cast<size_t>(y) * w + x] = row[x] / 255.0;
    }
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return img;
}

GrayImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path);
    unsigned char magic[2] = {0, 0};
    in.read(reinterpret_cast<char*>(magic), 2);
    in.close();
    if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) return load_pgm(path);
    if (magic[0] == 0x89 && magic[1] == 'P') return load_png(path);
    throw IoFailure("unrecognized image format: " + path);
}

void write_pgm(const GrayImage& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path);
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    for (double p : image.pixels) {
        const int v = static_cast<int>(std::lround(std::clamp(p, 0.0, 1.0) * 255.0));
        out.put(static_cast<char>(v));
    }
    if (!out) throw IoFailure("write failed: " + path);
}

}  // namespace curveclass
