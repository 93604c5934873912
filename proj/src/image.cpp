#include "sgwls/image.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sgwls {

Image::Image(int w, int h, int c, double fill) : width(w), height(h), channels(c) {
    if (w <= 0 || h <= 0 || (c != 1 && c != 3))
        throw Error("invalid image shape " + std::to_string(w) + "x" + std::to_string(h) +
                    "x" + std::to_string(c));
    data.assign(static_cast<std::size_t>(w) * h * c, fill);
}

Image Image::plane(int c) const {
    if (c < 0 || c >= channels) throw Error("plane index out of range");
    Image out(width, height, 1);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) out.at(y, x) = at(y, x, c);
    return out;
}

bool Image::all_finite() const {
    return std::all_of(data.begin(), data.end(), [](double v) { return std::isfinite(v); });
}

namespace {

constexpr bool kHostLittle = std::endian::native == std::endian::little;

struct Decoder {
    std::string path;
    std::string buf;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(path + ": byte " + std::to_string(pos) + ": " + msg);
    }

    bool eof() const { return pos >= buf.size(); }
    unsigned char peek() const { return static_cast<unsigned char>(buf[pos]); }

    // PNM whitespace, with '#' comments running to end of line.
    void skip_space_and_comments() {
        while (!eof()) {
            if (std::isspace(peek())) {
                ++pos;
            } else if (peek() == '#') {
                while (!eof() && peek() != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    std::string token() {
        skip_space_and_comments();
        if (eof()) fail("unexpected end of file in header");
        std::size_t start = pos;
        while (!eof() && !std::isspace(peek()) && peek() != '#') ++pos;
        return buf.substr(start, pos - start);
    }

    long header_int(const char* what, long lo, long hi) {
        std::size_t at = pos;
        std::string t = token();
        char* end = nullptr;
        long v = std::strtol(t.c_str(), &end, 10);
        if (end == t.c_str() || *end != '\0') {
            pos = at;
            fail(std::string("malformed ") + what + " '" + t + "'");
        }
        if (v < lo || v > hi) {
            pos = at;
            fail(std::string(what) + " " + std::to_string(v) + " out of range");
        }
        return v;
    }

    double header_float(const char* what) {
        std::size_t at = pos;
        std::string t = token();
        char* end = nullptr;
        double v = std::strtod(t.c_str(), &end);
        if (end == t.c_str() || *end != '\0') {
            pos = at;
            fail(std::string("malformed ") + what + " '" + t + "'");
        }
        return v;
    }

    // The single whitespace byte separating the header from binary payload.
    void binary_separator() {
        if (eof() || !std::isspace(peek())) fail("missing whitespace before pixel payload");
        ++pos;
    }

    void need(std::size_t bytes, const char* what) {
        if (buf.size() - pos < bytes) {
            pos = buf.size();
            fail(std::string("truncated ") + what);
        }
    }
};

Image decode_pnm(Decoder& d, char digit) {
    const bool color = (digit == '3' || digit == '6');
    const bool ascii = (digit == '2' || digit == '3');
    const int channels = color ? 3 : 1;

    const long w = d.header_int("width", 1, 1 << 20);
    const long h = d.header_int("height", 1, 1 << 20);
    const long maxval = d.header_int("maxval", 1, 1 << 20);
    if (maxval > 65535) d.fail("unsupported maxval " + std::to_string(maxval));

    Image img(static_cast<int>(w), static_cast<int>(h), channels);
    const std::size_t count = img.sample_count();
    const double scale = 1.0 / static_cast<double>(maxval <= 255 ? 255 : 65535);

    if (ascii) {
        for (std::size_t i = 0; i < count; ++i) {
            long v = d.header_int("sample", 0, maxval);
            img.data[i] = static_cast<double>(v) * scale;
        }
    } else {
        d.binary_separator();
        const int bytes_per = maxval <= 255 ? 1 : 2;
        d.need(count * bytes_per, "pixel payload");
        const auto* p = reinterpret_cast<const unsigned char*>(d.buf.data() + d.pos);
        if (bytes_per == 1) {
            for (std::size_t i = 0; i < count; ++i) img.data[i] = p[i] * scale;
        } else {
            for (std::size_t i = 0; i < count; ++i) {
                unsigned v = (static_cast<unsigned>(p[2 * i]) << 8) | p[2 * i + 1];
                img.data[i] = v * scale;
            }
        }
        d.pos += count * bytes_per;
    }
    return img;
}

Image decode_pfm(Decoder& d, bool color) {
    const long w = d.header_int("width", 1, 1 << 20);
    const long h = d.header_int("height", 1, 1 << 20);
    const double scale = d.header_float("scale");
    if (scale == 0.0) d.fail("PFM scale must be nonzero");
    const bool file_little = scale < 0.0;
    d.binary_separator();

    const int channels = color ? 3 : 1;
    Image img(static_cast<int>(w), static_cast<int>(h), channels);
    const std::size_t row_samples = static_cast<std::size_t>(w) * channels;
    d.need(row_samples * h * 4, "pixel payload");

    // PFM scanlines run bottom-up.
    for (long y = h - 1; y >= 0; --y) {
        const auto* p = reinterpret_cast<const unsigned char*>(d.buf.data() + d.pos);
        for (std::size_t i = 0; i < row_samples; ++i) {
            std::uint32_t bits;
            std::memcpy(&bits, p + 4 * i, 4);
            if (file_little != kHostLittle) bits = __builtin_bswap32(bits);
            float f;
            std::memcpy(&f, &bits, 4);
            img.data[static_cast<std::size_t>(y) * row_samples + i] = f;
        }
        d.pos += row_samples * 4;
    }
    if (!img.all_finite()) d.fail("non-finite sample in PFM payload");
    return img;
}

std::string lower_ext(const std::string& path) {
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

unsigned char quantize255(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return static_cast<unsigned char>(std::floor(v * 255.0 + 0.5));
}

}  // namespace

Image read_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(path + ": cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();

    Decoder d{path, ss.str(), 0};
    if (d.buf.size() < 2) d.fail("file too short for magic");
    const char m0 = d.buf[0], m1 = d.buf[1];
    d.pos = 2;
    if (m0 != 'P') d.fail("not a PNM/PFM file (bad magic)");

    Image img;
    if (m1 == '2' || m1 == '3' || m1 == '5' || m1 == '6')
        img = decode_pnm(d, m1);
    else if (m1 == 'f')
        img = decode_pfm(d, false);
    else if (m1 == 'F')
        img = decode_pfm(d, true);
    else
        d.fail(std::string("unsupported format P") + m1);

    if (!img.all_finite()) throw Error(path + ": decoded image contains non-finite samples");
    return img;
}

void write_image(const Image& img, const std::string& path) {
    if (img.empty()) throw Error(path + ": refusing to write empty image");
    const std::string ext = lower_ext(path);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path + ": cannot open for writing");

    if (ext == "pgm" || ext == "ppm") {
        const int want = ext == "pgm" ? 1 : 3;
        if (img.channels != want)
            throw Error(path + ": " + std::to_string(img.channels) + "-channel image does not fit ." + ext);
        out << (want == 1 ? "P5" : "P6") << "\n" << img.width << " " << img.height << "\n255\n";
        std::vector<unsigned char> bytes(img.sample_count());
        for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize255(img.data[i]);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    } else if (ext == "pfm") {
        out << (img.channels == 1 ? "Pf" : "PF") << "\n" << img.width << " " << img.height << "\n"
            << (kHostLittle ? "-1.0" : "1.0") << "\n";
        const std::size_t row_samples = static_cast<std::size_t>(img.width) * img.channels;
        std::vector<float> row(row_samples);
        for (int y = img.height - 1; y >= 0; --y) {
            for (std::size_t i = 0; i < row_samples; ++i)
                row[i] = static_cast<float>(img.data[static_cast<std::size_t>(y) * row_samples + i]);
            out.write(reinterpret_cast<const char*>(row.data()),
                      static_cast<std::streamsize>(row_samples * 4));
        }
    } else {
        throw Error(path + ": unsupported output extension '" + ext + "'");
    }
    if (!out) throw Error(path + ": write failed");
}

namespace {
// BT.601 full-range luma plus chroma scaled so that U = (B-Y)/1.772 and
// V = (R-Y)/1.402; inverted exactly below.
constexpr double kYR = 0.299, kYG = 0.587, kYB = 0.114;
constexpr double kUDiv = 1.772, kVDiv = 1.402;
}  // namespace

Image rgb_to_yuv(const Image& img) {
    if (img.channels != 3) throw Error("rgb_to_yuv needs a 3-channel image");
    Image out(img.width, img.height, 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double r = img.at(y, x, 0), g = img.at(y, x, 1), b = img.at(y, x, 2);
            const double luma = kYR * r + kYG * g + kYB * b;
            out.at(y, x, 0) = luma;
            out.at(y, x, 1) = (b - luma) / kUDiv;
            out.at(y, x, 2) = (r - luma) / kVDiv;
        }
    }
    return out;
}

Image yuv_to_rgb(const Image& img) {
    if (img.channels != 3) throw Error("yuv_to_rgb needs a 3-channel image");
    Image out(img.width, img.height, 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double luma = img.at(y, x, 0), u = img.at(y, x, 1), v = img.at(y, x, 2);
            const double r = luma + kVDiv * v;
            const double b = luma + kUDiv * u;
            out.at(y, x, 0) = r;
            out.at(y, x, 1) = (luma - kYR * r - kYB * b) / kYG;
            out.at(y, x, 2) = b;
        }
    }
    return out;
}

Image luminance(const Image& img) {
    if (img.channels == 1) return img;
    if (img.channels != 3) throw Error("luminance needs 1 or 3 channels");
    Image out(img.width, img.height, 1);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            out.at(y, x) = kYR * img.at(y, x, 0) + kYG * img.at(y, x, 1) + kYB * img.at(y, x, 2);
    return out;
}

Image merge_planes(const Image& a, const Image& b, const Image& c) {
    if (a.channels != 1 || b.channels != 1 || c.channels != 1 || !a.same_size(b) || !a.same_size(c))
        throw Error("merge_planes needs three single-channel images of equal size");
    Image out(a.width, a.height, 3);
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            out.at(y, x, 0) = a.at(y, x);
            out.at(y, x, 1) = b.at(y, x);
            out.at(y, x, 2) = c.at(y, x);
        }
    }
    return out;
}

Image transpose(const Image& img) {
    Image out(img.height, img.width, img.channels);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c) out.at(x, y, c) = img.at(y, x, c);
    return out;
}

Image clamp01(const Image& img) {
    Image out = img;
    for (double& v : out.data) v = std::clamp(v, 0.0, 1.0);
    return out;
}

}  // namespace sgwls
