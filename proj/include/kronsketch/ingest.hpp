#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "kronsketch/core.hpp"

namespace kronsketch {

// IDX container (the MNIST on-disk layout): 4-byte magic, big-endian 32-bit
// dimension sizes, then the raw element payload. Only the unsigned-byte
// element type (code 0x08) is supported here.
struct IdxFile {
    std::vector<Index> dims;
    std::vector<std::uint8_t> data;
};

struct idx_format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct idx_magic_error : idx_format_error {
    using idx_format_error::idx_format_error;
};
struct idx_type_error : idx_format_error {
    using idx_format_error::idx_format_error;
};
struct idx_truncated_error : idx_format_error {
    using idx_format_error::idx_format_error;
};

IdxFile read_idx(const std::filesystem::path& path);
void write_idx(const std::filesystem::path& path, const IdxFile& f);

// Stack the first `count` images labeled `digit` (file order) into a
// side x side x count tensor: each 28x28 image lands in the top-left block
// of a zero-padded side x side slice, scaled into [0, 1] by division by
// 255. The side defaults to the next power of two above the image height.
DenseTensor build_digit_tensor(const IdxFile& images, const IdxFile& labels,
                               int digit, Index count, Index side = 0);

}  // namespace kronsketch
