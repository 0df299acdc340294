#include "kronsketch/ingest.hpp"

#include <fstream>
#include <string>

#include "kronsketch/hadamard.hpp"

namespace kronsketch {

IdxFile read_idx(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("read_idx: cannot open " + path.string());

    std::uint8_t magic[4];
    in.read(reinterpret_cast<char*>(magic), 4);
    if (!in) throw idx_truncated_error("read_idx: file shorter than magic");
    if (magic[0] != 0 || magic[1] != 0)
        throw idx_magic_error("read_idx: bad magic (first two bytes nonzero)");
    if (magic[2] != 0x08)
        throw idx_type_error(
            "read_idx: unsupported element type code 0x" +
            std::to_string(magic[2]) + " (only unsigned byte, 0x08)");
    const int ndims = magic[3];
    if (ndims < 1)
        throw idx_magic_error("read_idx: dimension count must be >= 1");

    IdxFile f;
    f.dims.reserve(ndims);
    std::uint64_t count = 1;
    for (int d = 0; d < ndims; ++d) {
        std::uint8_t raw[4];
        in.read(reinterpret_cast<char*>(raw), 4);
        if (!in)
            throw idx_truncated_error("read_idx: truncated dimension header");
        const std::uint32_t dim = (std::uint32_t(raw[0]) << 24) |
                                  (std::uint32_t(raw[1]) << 16) |
                                  (std::uint32_t(raw[2]) << 8) |
                                  std::uint32_t(raw[3]);
        f.dims.push_back(static_cast<Index>(dim));
        count *= dim;
    }

    f.data.resize(count);
    if (count > 0) {
        in.read(reinterpret_cast<char*>(f.data.data()),
                static_cast<std::streamsize>(count));
        if (static_cast<std::uint64_t>(in.gcount()) != count)
            throw idx_truncated_error(
                "read_idx: payload shorter than the dimension product");
    }
    // Trailing bytes mean the header disagrees with the payload.
    if (in.peek() != std::char_traits<char>::eof())
        throw idx_truncated_error(
            "read_idx: payload longer than the dimension product");
    return f;
}

void write_idx(const std::filesystem::path& path, const IdxFile& f) {
    if (f.dims.empty() || f.dims.size() > 255)
        throw std::invalid_argument("write_idx: need 1..255 dimensions");
    std::uint64_t count = 1;
    for (Index d : f.dims) {
        if (d < 0 || d > 0xffffffffLL)
            throw std::invalid_argument("write_idx: dimension out of range");
        count *= static_cast<std::uint64_t>(d);
    }
    if (count != f.data.size())
        throw std::invalid_argument(
            "write_idx: payload size does not match the dimensions");

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_idx: cannot open " + path.string());
    const std::uint8_t magic[4] = {0, 0, 0x08,
                                   static_cast<std::uint8_t>(f.dims.size())};
    out.write(reinterpret_cast<const char*>(magic), 4);
    for (Index d : f.dims) {
        const auto v = static_cast<std::uint32_t>(d);
        const std::uint8_t raw[4] = {
            static_cast<std::uint8_t>(v >> 24),
            static_cast<std::uint8_t>((v >> 16) & 0xff),
            static_cast<std::uint8_t>((v >> 8) & 0xff),
            static_cast<std::uint8_t>(v & 0xff)};
        out.write(reinterpret_cast<const char*>(raw), 4);
    }
    if (!f.data.empty())
        out.write(reinterpret_cast<const char*>(f.data.data()),
                  static_cast<std::streamsize>(f.data.size()));
    if (!out)
        throw std::runtime_error("write_idx: write failed for " +
                                 path.string());
}

DenseTensor build_digit_tensor(const IdxFile& images, const IdxFile& labels,
                               int digit, Index count, Index side) {
    if (images.dims.size() != 3)
        throw std::invalid_argument(
            "build_digit_tensor: images file must be 3-D (count, rows, cols)");
    if (labels.dims.size() != 1)
        throw std::invalid_argument(
            "build_digit_tensor: labels file must be 1-D");
    const Index n = images.dims[0];
    const Index rows = images.dims[1];
    const Index cols = images.dims[2];
    if (labels.dims[0] != n)
        throw std::invalid_argument(
            "build_digit_tensor: image and label counts differ");
    if (count < 1)
        throw std::invalid_argument("build_digit_tensor: count must be >= 1");
    if (side == 0) side = next_pow2(std::max(rows, cols));
    if (side < rows || side < cols)
        throw std::invalid_argument(
            "build_digit_tensor: side smaller than the image");

    DenseTensor t({side, side, count},
                  Eigen::VectorXd::Zero(side * side * count));
    Index filled = 0;
    for (Index k = 0; k < n && filled < count; ++k) {
        if (labels.data[k] != digit) continue;
        const std::uint8_t* img = images.data.data() + k * rows * cols;
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j)
                t.data[(i * side + j) * count + filled] =
                    static_cast<double>(img[i * cols + j]) / 255.0;
        ++filled;
    }
    if (filled < count)
        throw std::runtime_error(
            "build_digit_tensor: only " + std::to_string(filled) +
            " images of digit " + std::to_string(digit) + ", need " +
            std::to_string(count));
    return t;
}

}  // namespace kronsketch
