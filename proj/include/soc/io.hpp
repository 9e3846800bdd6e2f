#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace soc::io {

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts are unsupported");

inline void write_bytes(std::ostream& os, const void* p, std::size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

inline void read_bytes(std::istream& is, void* p, std::size_t n, const char* what) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is.gcount()) != n) {
        throw std::runtime_error(std::string("truncated read: ") + what);
    }
}

template <typename T>
void write_pod(std::ostream& os, T v) {
    write_bytes(os, &v, sizeof(T));
}

template <typename T>
T read_pod(std::istream& is, const char* what) {
    T v{};
    read_bytes(is, &v, sizeof(T), what);
    return v;
}

inline void write_u8(std::ostream& os, std::uint8_t v) { write_pod(os, v); }
inline void write_u32(std::ostream& os, std::uint32_t v) { write_pod(os, v); }
inline void write_u64(std::ostream& os, std::uint64_t v) { write_pod(os, v); }
inline void write_f64(std::ostream& os, double v) { write_pod(os, v); }

inline std::uint8_t read_u8(std::istream& is, const char* what) { return read_pod<std::uint8_t>(is, what); }
inline std::uint32_t read_u32(std::istream& is, const char* what) { return read_pod<std::uint32_t>(is, what); }
inline std::uint64_t read_u64(std::istream& is, const char* what) { return read_pod<std::uint64_t>(is, what); }
inline double read_f64(std::istream& is, const char* what) { return read_pod<double>(is, what); }

inline void write_f64_array(std::ostream& os, const std::vector<double>& v) {
    write_u64(os, v.size());
    if (!v.empty()) write_bytes(os, v.data(), v.size() * sizeof(double));
}

inline std::vector<double> read_f64_array(std::istream& is, const char* what) {
    const auto n = read_u64(is, what);
    std::vector<double> v(n);
    if (n) read_bytes(is, v.data(), n * sizeof(double), what);
    return v;
}

inline void write_string(std::ostream& os, const std::string& s) {
    write_u32(os, static_cast<std::uint32_t>(s.size()));
    if (!s.empty()) write_bytes(os, s.data(), s.size());
}

inline std::string read_string(std::istream& is, const char* what) {
    const auto n = read_u32(is, what);
    std::string s(n, '\0');
    if (n) read_bytes(is, s.data(), n, what);
    return s;
}

inline void expect_magic(std::istream& is, const char* magic, const char* what) {
    const std::size_t n = std::strlen(magic);
    std::string got(n, '\0');
    read_bytes(is, got.data(), n, what);
    if (got != magic) {
        throw std::runtime_error(std::string(what) + ": bad magic, expected " + magic);
    }
}

}  // namespace soc::io
