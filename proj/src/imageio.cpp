#include "fpd/imageio.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace fpd {

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path);
    return buf;
}

GrayImage from_bytes(int w, int h, const std::vector<std::uint8_t>& bytes) {
    GrayImage img(w, h);
    for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = bytes[i] / 255.0;
    return img;
}

// ---- PGM ----

struct PgmCursor {
    const std::vector<std::uint8_t>& buf;
    std::size_t pos = 0;

    // Skips whitespace and '#' comments, then parses a non-negative decimal.
    int next_int(const char* what) {
        for (;;) {
            while (pos < buf.size() && std::isspace(buf[pos])) ++pos;
            if (pos < buf.size() && buf[pos] == '#') {
                while (pos < buf.size() && buf[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        if (pos >= buf.size() || !std::isdigit(buf[pos]))
            throw IoError(std::string("pgm: expected ") + what);
        long v = 0;
        while (pos < buf.size() && std::isdigit(buf[pos])) {
            v = v * 10 + (buf[pos] - '0');
            if (v > 1 << 30) throw IoError(std::string("pgm: absurd ") + what);
            ++pos;
        }
        return static_cast<int>(v);
    }
};

GrayImage parse_pgm(const std::vector<std::uint8_t>& buf, const std::string& path) {
    if (buf.size() < 2 || buf[0] != 'P' || (buf[1] != '5' && buf[1] != '2'))
        throw IoError("not a pgm file: " + path);
    const bool binary = buf[1] == '5';
    PgmCursor c{buf, 2};
    const int w = c.next_int("width");
    const int h = c.next_int("height");
    const int maxval = c.next_int("maxval");
    if (w <= 0 || h <= 0) throw IoError("pgm: bad dimensions in " + path);
    if (maxval <= 0 || maxval > 255) throw IoError("pgm: only 8-bit supported: " + path);

    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h);
    if (binary) {
        if (c.pos >= buf.size() || !std::isspace(buf[c.pos]))
            throw IoError("pgm: missing raster separator in " + path);
        ++c.pos;  // exactly one whitespace byte precedes the raster
        if (buf.size() - c.pos < bytes.size()) throw IoError("pgm: truncated raster in " + path);
        std::memcpy(bytes.data(), buf.data() + c.pos, bytes.size());
    } else {
        for (auto& b : bytes) {
            const int v = c.next_int("sample");
            if (v > maxval) throw IoError("pgm: sample exceeds maxval in " + path);
            b = static_cast<std::uint8_t>(v);
        }
    }
    if (maxval != 255)
        for (auto& b : bytes) b = static_cast<std::uint8_t>(std::lround(b * 255.0 / maxval));
    return from_bytes(w, h, bytes);
}

// ---- TIFF (8-bit grayscale, strips, uncompressed or PackBits) ----

struct TiffReader {
    const std::vector<std::uint8_t>& buf;
    bool littleEndian = true;

    std::uint32_t u16(std::size_t off) const {
        if (off + 2 > buf.size()) throw IoError("tiff: truncated");
        return littleEndian ? buf[off] | (buf[off + 1] << 8) : (buf[off] << 8) | buf[off + 1];
    }
    std::uint32_t u32(std::size_t off) const {
        if (off + 4 > buf.size()) throw IoError("tiff: truncated");
        if (littleEndian)
            return buf[off] | (buf[off + 1] << 8) | (buf[off + 2] << 16)
                 | (static_cast<std::uint32_t>(buf[off + 3]) << 24);
        return (static_cast<std::uint32_t>(buf[off]) << 24) | (buf[off + 1] << 16)
             | (buf[off + 2] << 8) | buf[off + 3];
    }
};

struct TiffEntry {
    std::uint16_t type = 0;
    std::uint32_t count = 0;
    std::size_t valueOff = 0;  // position of the value bytes inside the file
    bool present = false;
};

std::uint32_t entry_value(const TiffReader& r, const TiffEntry& e, std::uint32_t index = 0) {
    if (e.type == 3) return r.u16(e.valueOff + index * 2);  // SHORT
    if (e.type == 4) return r.u32(e.valueOff + index * 4);  // LONG
    throw IoError("tiff: unsupported field type");
}

std::vector<std::uint8_t> unpackbits(const std::vector<std::uint8_t>& buf, std::size_t off,
                                     std::size_t len, std::size_t expect) {
    std::vector<std::uint8_t> out;
    out.reserve(expect);
    std::size_t p = off;
    const std::size_t end = off + len;
    while (p < end && out.size() < expect) {
        const std::int8_t n = static_cast<std::int8_t>(buf[p++]);
        if (n >= 0) {
            const std::size_t run = static_cast<std::size_t>(n) + 1;
            if (p + run > end) throw IoError("tiff: packbits literal overruns strip");
            out.insert(out.end(), buf.begin() + p, buf.begin() + p + run);
            p += run;
        } else if (n != -128) {
            if (p >= end) throw IoError("tiff: packbits run overruns strip");
            out.insert(out.end(), static_cast<std::size_t>(1 - n), buf[p++]);
        }
    }
    if (out.size() < expect) throw IoError("tiff: packbits strip too short");
    out.resize(expect);
    return out;
}

GrayImage parse_tiff(const std::vector<std::uint8_t>& buf, const std::string& path) {
    if (buf.size() < 8) throw IoError("tiff: truncated header in " + path);
    TiffReader r{buf, buf[0] == 'I'};
    if (!((buf[0] == 'I' && buf[1] == 'I') || (buf[0] == 'M' && buf[1] == 'M')) || r.u16(2) != 42)
        throw IoError("not a tiff file: " + path);

    const std::uint32_t ifd = r.u32(4);
    const std::uint32_t n = r.u16(ifd);
    TiffEntry tags[280];  // indexed by tag id for the few tags we care about
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::size_t e = ifd + 2 + static_cast<std::size_t>(i) * 12;
        const std::uint32_t tag = r.u16(e);
        if (tag >= 280) continue;
        TiffEntry& t = tags[tag];
        t.type = static_cast<std::uint16_t>(r.u16(e + 2));
        t.count = r.u32(e + 4);
        const std::size_t bytes = (t.type == 3 ? 2 : 4) * static_cast<std::size_t>(t.count);
        t.valueOff = bytes <= 4 ? e + 8 : r.u32(e + 8);
        t.present = true;
    }

    auto required = [&](int tag, const char* name) -> const TiffEntry& {
        if (!tags[tag].present) throw IoError(std::string("tiff: missing ") + name + " in " + path);
        return tags[tag];
    };
    const int w = static_cast<int>(entry_value(r, required(256, "width")));
    const int h = static_cast<int>(entry_value(r, required(257, "height")));
    if (w <= 0 || h <= 0) throw IoError("tiff: bad dimensions in " + path);
    if (tags[258].present && entry_value(r, tags[258]) != 8)
        throw IoError("tiff: only 8-bit samples supported: " + path);
    if (tags[277].present && entry_value(r, tags[277]) != 1)
        throw IoError("tiff: only single-channel images supported: " + path);
    const std::uint32_t compression = tags[259].present ? entry_value(r, tags[259]) : 1;
    if (compression != 1 && compression != 32773)
        throw IoError("tiff: unsupported compression in " + path);
    const std::uint32_t photometric = tags[262].present ? entry_value(r, tags[262]) : 1;
    if (photometric > 1) throw IoError("tiff: only grayscale supported: " + path);

    const TiffEntry& offsets = required(273, "strip offsets");
    const TiffEntry& counts = required(279, "strip byte counts");
    const std::uint32_t rowsPerStrip =
        tags[278].present ? entry_value(r, tags[278]) : static_cast<std::uint32_t>(h);
    if (rowsPerStrip == 0) throw IoError("tiff: zero rows per strip in " + path);

    std::vector<std::uint8_t> pixels;
    pixels.reserve(static_cast<std::size_t>(w) * h);
    for (std::uint32_t s = 0; s < offsets.count; ++s) {
        const std::size_t off = entry_value(r, offsets, s);
        const std::size_t len = entry_value(r, counts, s);
        if (off + len > buf.size()) throw IoError("tiff: strip outside file in " + path);
        const std::uint32_t rows =
            std::min<std::uint32_t>(rowsPerStrip, static_cast<std::uint32_t>(h) - s * rowsPerStrip);
        const std::size_t expect = static_cast<std::size_t>(rows) * w;
        if (compression == 1) {
            if (len < expect) throw IoError("tiff: strip too short in " + path);
            pixels.insert(pixels.end(), buf.begin() + off, buf.begin() + off + expect);
        } else {
            const auto strip = unpackbits(buf, off, len, expect);
            pixels.insert(pixels.end(), strip.begin(), strip.end());
        }
    }
    if (pixels.size() != static_cast<std::size_t>(w) * h)
        throw IoError("tiff: pixel count mismatch in " + path);
    if (photometric == 0)  // min-is-white
        for (auto& p : pixels) p = static_cast<std::uint8_t>(255 - p);
    return from_bytes(w, h, pixels);
}

}  // namespace

GrayImage load_pgm(const std::string& path) { return parse_pgm(read_file(path), path); }

GrayImage load_tiff(const std::string& path) { return parse_tiff(read_file(path), path); }

GrayImage load_image(const std::string& path) {
    const auto buf = read_file(path);
    if (buf.size() >= 2 && buf[0] == 'P' && (buf[1] == '5' || buf[1] == '2'))
        return parse_pgm(buf, path);
    if (buf.size() >= 2 && ((buf[0] == 'I' && buf[1] == 'I') || (buf[0] == 'M' && buf[1] == 'M')))
        return parse_tiff(buf, path);
    throw IoError("unrecognized image format: " + path);
}

void save_pgm(const std::string& path, const GrayImage& img) {
    if (img.empty()) throw InvalidInput("save_pgm: empty image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<std::uint8_t> bytes(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const double v = std::clamp(img.data[i], 0.0, 1.0);
        bytes[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

void save_pgm(const std::string& path, const Mask& mask) {
    if (mask.empty()) throw InvalidInput("save_pgm: empty mask");
    GrayImage img(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.data.size(); ++i) img.data[i] = mask.data[i] ? 1.0 : 0.0;
    save_pgm(path, img);
}

}  // namespace fpd
