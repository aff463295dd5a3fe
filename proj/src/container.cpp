#include "esnrae/container.hpp"

#include "esnrae/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

namespace esnrae {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put(std::ostream& out, T value) {
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T take(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bytes;
    if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
        throw FormatError("weight container truncated");
    }
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

}  // namespace

void MatrixContainer::add(std::string name, Matrix value) {
    entries_.push_back({std::move(name), std::move(value)});
}

void MatrixContainer::add_vector(std::string name, const Vector& v) {
    add(std::move(name), Matrix(1, v.size(), v));
}

bool MatrixContainer::contains(std::string_view name) const noexcept {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const NamedMatrix& e) { return e.name == name; });
}

const Matrix& MatrixContainer::get(std::string_view name) const {
    for (const auto& e : entries_) {
        if (e.name == name) return e.value;
    }
    throw FormatError("weight container has no entry '" + std::string(name) + "'");
}

Vector MatrixContainer::get_vector(std::string_view name) const {
    const Matrix& m = get(name);
    return {m.data().begin(), m.data().end()};
}

void MatrixContainer::write(std::ostream& out) const {
    out.write(kContainerMagic, 4);
    put<std::uint32_t>(out, kContainerVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(entries_.size()));
    for (const auto& e : entries_) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(e.name.size()));
        out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
        put<std::uint64_t>(out, e.value.rows());
        put<std::uint64_t>(out, e.value.cols());
        for (double v : e.value.data()) put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
    }
    if (!out) throw IoError("failed to write weight container");
}

MatrixContainer MatrixContainer::read(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kContainerMagic, 4) != 0) {
        throw FormatError("not a weight container (bad magic bytes)");
    }
    const auto version = take<std::uint32_t>(in);
    if (version != kContainerVersion) {
        throw FormatError("unsupported weight container version " + std::to_string(version));
    }
    const auto count = take<std::uint32_t>(in);
    MatrixContainer c;
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto name_len = take<std::uint32_t>(in);
        if (name_len > 4096) throw FormatError("weight container entry name too long");
        std::string name(name_len, '\0');
        if (!in.read(name.data(), name_len)) throw FormatError("weight container truncated");
        const auto rows = take<std::uint64_t>(in);
        const auto cols = take<std::uint64_t>(in);
        if (rows != 0 && cols > (std::uint64_t{1} << 40) / rows) {
            throw FormatError("weight container entry '" + name + "' is implausibly large");
        }
        std::vector<double> values(rows * cols);
        for (auto& v : values) v = std::bit_cast<double>(take<std::uint64_t>(in));
        c.add(std::move(name), Matrix(rows, cols, std::move(values)));
    }
    return c;
}

}  // namespace esnrae
