#ifndef VQHULL_IO_HPP
#define VQHULL_IO_HPP

#include <stdexcept>
#include <string>

#include "vqhull/geometry.hpp"

namespace vqhull {

/// Point-file formats, both round-tripping bit-exactly:
///  - Text: first line "pbbs_sequencePoint2d", then one "x y" pair per line
///    printed with shortest exact-round-trip decimals.
///  - Binary: magic "VQH1", little-endian u64 count, n doubles of x, then n
///    doubles of y.
enum class FileFormat { Text, Binary };

inline constexpr const char* kTextHeader = "pbbs_sequencePoint2d";
inline constexpr char kBinaryMagic[4] = {'V', 'Q', 'H', '1'};

struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_points(const PointSet& points, const std::string& path,
                  FileFormat format);

/// Detects the format from the file contents. Throws LoadError on a
/// malformed header, truncated payload, or non-finite coordinate.
PointSet read_points(const std::string& path);

/// Picks the format from the file extension: .txt/.pbbs mean text, anything
/// else binary.
FileFormat format_for_path(const std::string& path);

}  // namespace vqhull

#endif  // VQHULL_IO_HPP
