#include "vqhull/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <system_error>
#include <vector>

namespace vqhull {

namespace {

void check_finite(const PointSet& points, const std::string& path) {
    const double* xs = points.xs();
    const double* ys = points.ys();
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
            throw LoadError(path + ": non-finite coordinate at point " +
                            std::to_string(i));
    }
}

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

double parse_double(const char*& cursor, const char* end,
                    const std::string& path, std::size_t line) {
    while (cursor < end && (*cursor == ' ' || *cursor == '\t')) ++cursor;
    double v = 0.0;
    const auto res = std::from_chars(cursor, end, v);
    if (res.ec != std::errc())
        throw LoadError(path + ": malformed coordinate on line " +
                        std::to_string(line));
    cursor = res.ptr;
    return v;
}

PointSet read_text(const std::string& path, std::ifstream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw LoadError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTextHeader)
        throw LoadError(path + ": unrecognized header \"" + line + "\"");
    PointSet points;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const char* cur = line.data();
        const char* end = line.data() + line.size();
        const double x = parse_double(cur, end, path, lineno);
        const double y = parse_double(cur, end, path, lineno);
        points.push_back({x, y});
    }
    check_finite(points, path);
    return points;
}

PointSet read_binary(const std::string& path, std::ifstream& in) {
    in.seekg(0, std::ios::end);
    const std::uint64_t file_size = std::uint64_t(in.tellg());
    in.seekg(0);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kBinaryMagic, 4) != 0)
        throw LoadError(path + ": bad magic");
    std::uint64_t n = 0;
    if (!in.read(reinterpret_cast<char*>(&n), sizeof(n)))
        throw LoadError(path + ": truncated header");
    if (file_size != 12 + 16 * n)
        throw LoadError(path + ": truncated payload (header claims " +
                        std::to_string(n) + " points)");
    PointSet points{std::size_t(n)};
    const std::streamsize coords = std::streamsize(n) * 8;
    if (!in.read(reinterpret_cast<char*>(points.xs()), coords) ||
        !in.read(reinterpret_cast<char*>(points.ys()), coords))
        throw LoadError(path + ": truncated payload (expected " +
                        std::to_string(n) + " points)");
    check_finite(points, path);
    return points;
}

}  // namespace

FileFormat format_for_path(const std::string& path) {
    const auto dot = path.rfind('.');
    if (dot != std::string::npos) {
        const std::string ext = path.substr(dot);
        if (ext == ".txt" || ext == ".pbbs") return FileFormat::Text;
    }
    return FileFormat::Binary;
}

void write_points(const PointSet& points, const std::string& path,
                  FileFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LoadError(path + ": cannot open for writing");
    if (format == FileFormat::Text) {
        std::string buf;
        buf.reserve(1 << 16);
        buf += kTextHeader;
        buf += '\n';
        const double* xs = points.xs();
        const double* ys = points.ys();
        for (std::size_t i = 0; i < points.size(); ++i) {
            append_double(buf, xs[i]);
            buf += ' ';
            append_double(buf, ys[i]);
            buf += '\n';
            if (buf.size() > (1 << 16) - 128) {
                out.write(buf.data(), std::streamsize(buf.size()));
                buf.clear();
            }
        }
        out.write(buf.data(), std::streamsize(buf.size()));
    } else {
        out.write(kBinaryMagic, 4);
        const std::uint64_t n = points.size();
        out.write(reinterpret_cast<const char*>(&n), sizeof(n));
        out.write(reinterpret_cast<const char*>(points.xs()),
                  std::streamsize(n) * 8);
        out.write(reinterpret_cast<const char*>(points.ys()),
                  std::streamsize(n) * 8);
    }
    if (!out) throw LoadError(path + ": write failed");
}

PointSet read_points(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError(path + ": cannot open");
    char magic[4] = {};
    in.read(magic, 4);
    const bool binary =
        in.gcount() == 4 && std::memcmp(magic, kBinaryMagic, 4) == 0;
    in.clear();
    in.seekg(0);
    return binary ? read_binary(path, in) : read_text(path, in);
}

}  // namespace vqhull
