#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soc/nn/tape.hpp"

namespace soc::nn {

enum class ArchKind : std::uint8_t { kScgnet = 0, kPositioner = 1, kLstmBaseline = 2 };

struct Checkpoint {
    ArchKind kind;
    std::vector<std::uint8_t> arch_blob;  // model-defined config encoding
    std::vector<Tensor> tensors;          // in ParamStore declaration order
};

/// Magic "SOCNN1"; arch kind byte, length-prefixed arch blob, then each
/// tensor as (u8 ndim, u32 dims..., raw f64 data), all little-endian.
void save_checkpoint(const std::string& path, ArchKind kind,
                     const std::vector<std::uint8_t>& arch_blob, const ParamStore& params);

Checkpoint load_checkpoint(const std::string& path);

/// Copies checkpoint tensors into an already-built ParamStore; counts and
/// shapes must match exactly.
void restore_params(const Checkpoint& ckpt, ParamStore& params);

}  // namespace soc::nn
