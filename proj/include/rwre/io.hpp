#ifndef RWRE_IO_HPP
#define RWRE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace rwre {

// Shortest decimal form that round-trips the double exactly.
std::string format_double(double v);

// Write-then-rename so readers never observe a partial file.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::uint64_t fnv1a(std::string_view s);

std::string hex64(std::uint64_t v);

}  // namespace rwre

#endif
