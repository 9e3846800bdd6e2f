#include "soc/nn/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "soc/common.hpp"
#include "soc/io.hpp"

namespace soc::nn {

namespace {
constexpr const char* kMagic = "SOCNN1";
}

void save_checkpoint(const std::string& path, ArchKind kind,
                     const std::vector<std::uint8_t>& arch_blob, const ParamStore& params) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    os.write(kMagic, 6);
    io::write_u8(os, static_cast<std::uint8_t>(kind));
    io::write_u32(os, static_cast<std::uint32_t>(arch_blob.size()));
    if (!arch_blob.empty()) {
        io::write_bytes(os, arch_blob.data(), arch_blob.size());
    }
    io::write_u32(os, static_cast<std::uint32_t>(params.count()));
    for (std::size_t i = 0; i < params.count(); ++i) {
        const Tensor& t = params.value(static_cast<int>(i));
        io::write_u8(os, static_cast<std::uint8_t>(t.shape.size()));
        for (std::size_t d : t.shape) io::write_u32(os, static_cast<std::uint32_t>(d));
        io::write_bytes(os, t.data.data(), t.data.size() * sizeof(double));
    }
    if (!os) throw std::runtime_error("short write to checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw MissingFileError("cannot open checkpoint: " + path);
    io::expect_magic(is, kMagic, "checkpoint");
    Checkpoint ckpt;
    const auto kind = io::read_u8(is, "checkpoint kind");
    if (kind > 2) throw std::runtime_error("checkpoint: unknown architecture kind");
    ckpt.kind = static_cast<ArchKind>(kind);
    const auto blob_len = io::read_u32(is, "checkpoint arch blob length");
    ckpt.arch_blob.resize(blob_len);
    if (blob_len) io::read_bytes(is, ckpt.arch_blob.data(), blob_len, "checkpoint arch blob");
    const auto n_tensors = io::read_u32(is, "checkpoint tensor count");
    ckpt.tensors.reserve(n_tensors);
    for (std::uint32_t i = 0; i < n_tensors; ++i) {
        const auto ndim = io::read_u8(is, "tensor rank");
        std::vector<std::size_t> shape(ndim);
        for (auto& d : shape) d = io::read_u32(is, "tensor dim");
        Tensor t(shape);
        io::read_bytes(is, t.data.data(), t.data.size() * sizeof(double), "tensor data");
        ckpt.tensors.push_back(std::move(t));
    }
    return ckpt;
}

void restore_params(const Checkpoint& ckpt, ParamStore& params) {
    if (ckpt.tensors.size() != params.count()) {
        throw std::runtime_error("checkpoint tensor count does not match model");
    }
    for (std::size_t i = 0; i < ckpt.tensors.size(); ++i) {
        Tensor& dst = params.value(static_cast<int>(i));
        const Tensor& src = ckpt.tensors[i];
        if (src.shape != dst.shape) {
            throw std::runtime_error("checkpoint tensor shape does not match model");
        }
        dst.data = src.data;
    }
}

}  // namespace soc::nn
