#pragma once

// Binary matrix container used for encoder and classifier weights.
//
// Layout (all integers little-endian):
//   bytes 0..3   magic "ESNW"
//   u32          format version (1)
//   u32          entry count
//   per entry:
//     u32        name length, followed by that many name bytes
//     u64 rows, u64 cols
//     rows*cols  IEEE-754 binary64 values, row-major
//
// Doubles are stored bit-for-bit, so a save/load cycle is exact.

#include "esnrae/matrix.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace esnrae {

inline constexpr char kContainerMagic[4] = {'E', 'S', 'N', 'W'};
inline constexpr std::uint32_t kContainerVersion = 1;

struct NamedMatrix {
    std::string name;
    Matrix value;
};

class MatrixContainer {
public:
    void add(std::string name, Matrix value);
    void add_vector(std::string name, const Vector& v);

    [[nodiscard]] bool contains(std::string_view name) const noexcept;
    /// @throws FormatError when the entry is missing.
    [[nodiscard]] const Matrix& get(std::string_view name) const;
    [[nodiscard]] Vector get_vector(std::string_view name) const;
    [[nodiscard]] const std::vector<NamedMatrix>& entries() const noexcept { return entries_; }

    void write(std::ostream& out) const;
    [[nodiscard]] static MatrixContainer read(std::istream& in);

private:
    std::vector<NamedMatrix> entries_;
};

}  // namespace esnrae
